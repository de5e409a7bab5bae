#include "rmfem/fem.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rmfem/banded.hpp"
#include "rmfem/errors.hpp"
#include "rmfem/quadrature.hpp"
#include "rmfem/shape.hpp"

namespace rmfem {

namespace {

constexpr double kDomainSlack = 1e-12;
constexpr double kNewtonTol = 1e-12;
constexpr int kNewtonMaxIter = 20;
constexpr double kLocalSlack = 1e-10;

struct System {
  std::vector<std::size_t> free_index;
  std::size_t num_free = 0;
  std::size_t bandwidth = 0;
};

System number_free_nodes(const Mesh& mesh) {
  System sys;
  sys.free_index.assign(mesh.num_nodes(), FemSolution::npos);
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i)
    if (!mesh.is_dirichlet(i)) sys.free_index[i] = sys.num_free++;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    std::size_t lo = FemSolution::npos;
    std::size_t hi = 0;
    for (auto id : mesh.element(e)) {
      const auto f = sys.free_index[id];
      if (f == FemSolution::npos) continue;
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    if (lo != FemSolution::npos) sys.bandwidth = std::max(sys.bandwidth, hi - lo);
  }
  return sys;
}

void assemble_1d(const Mesh& mesh, const ParamVector& params, const GaussRule& rule, const System& sys,
                 BandedMatrix& k, std::vector<double>& f) {
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto ids = mesh.element(e);
    const double x0 = mesh.node(ids[0]).x;
    const double x1 = mesh.node(ids[1]).x;
    const double len = x1 - x0;
    const double mid = 0.5 * (x0 + x1);
    double kappa_integral = 0.0;
    std::array<double, 2> load{0.0, 0.0};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double t = rule.points[q];
      const double wq = rule.weights[q] * 0.5 * len;
      const double x = mid + 0.5 * len * t;
      kappa_integral += wq * kappa(params, x);
      const double fx = forcing(x);
      load[0] += wq * fx * 0.5 * (1.0 - t);
      load[1] += wq * fx * 0.5 * (1.0 + t);
    }
    const double stiff = kappa_integral / (len * len);
    for (int a = 0; a < 2; ++a) {
      const auto fa = sys.free_index[ids[a]];
      if (fa == FemSolution::npos) continue;
      f[fa] += load[a];
      for (int b = 0; b <= a; ++b) {
        const auto fb = sys.free_index[ids[b]];
        if (fb == FemSolution::npos) continue;
        k.add(fa, fb, a == b ? stiff : -stiff);
      }
    }
  }
}

void assemble_2d(const Mesh& mesh, const ParamVector& params, const GaussRule& rule, const System& sys,
                 BandedMatrix& k, std::vector<double>& f) {
  const std::size_t nq = rule.size();
  std::vector<std::array<double, 4>> values;
  std::vector<shape::QuadGradients> grads;
  std::vector<double> weights;
  for (std::size_t qx = 0; qx < nq; ++qx) {
    for (std::size_t qy = 0; qy < nq; ++qy) {
      values.push_back(shape::quad_values(rule.points[qx], rule.points[qy]));
      grads.push_back(shape::quad_gradients(rule.points[qx], rule.points[qy]));
      weights.push_back(rule.weights[qx] * rule.weights[qy]);
    }
  }

  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto ids = mesh.element(e);
    const std::array<Point, 4> v{mesh.node(ids[0]), mesh.node(ids[1]), mesh.node(ids[2]), mesh.node(ids[3])};
    double ke[4][4] = {};
    double fe[4] = {};
    for (std::size_t q = 0; q < weights.size(); ++q) {
      const auto jac = shape::quad_jacobian(v, grads[q]);
      const double det = jac.det();
      if (!(det > 0.0)) throw NumericalError("assemble: quad with non-positive Jacobian");
      double x = 0.0;
      for (int a = 0; a < 4; ++a) x += values[q][a] * v[a].x;
      const double wq = weights[q] * det;
      const double kw = kappa(params, x) * wq;
      const double fw = forcing(x) * wq;
      double dx[4];
      double dy[4];
      for (int a = 0; a < 4; ++a) {
        // inverse-transpose of the Jacobian applied to reference gradients
        dx[a] = (jac.ye * grads[q].dxi[a] - jac.yx * grads[q].deta[a]) / det;
        dy[a] = (-jac.xe * grads[q].dxi[a] + jac.xx * grads[q].deta[a]) / det;
      }
      for (int a = 0; a < 4; ++a) {
        fe[a] += fw * values[q][a];
        for (int b = 0; b <= a; ++b) ke[a][b] += kw * (dx[a] * dx[b] + dy[a] * dy[b]);
      }
    }
    for (int a = 0; a < 4; ++a) {
      const auto fa = sys.free_index[ids[a]];
      if (fa == FemSolution::npos) continue;
      f[fa] += fe[a];
      for (int b = 0; b <= a; ++b) {
        const auto fb = sys.free_index[ids[b]];
        if (fb == FemSolution::npos) continue;
        k.add(fa, fb, ke[a][b]);
      }
    }
  }
}

}  // namespace

FemSolution::FemSolution(std::shared_ptr<const Mesh> mesh, ParamVector params, std::vector<double> nodal_values,
                         std::vector<std::size_t> free_index, std::vector<double> force)
    : mesh_(std::move(mesh)),
      params_(params),
      nodal_values_(std::move(nodal_values)),
      free_index_(std::move(free_index)),
      force_(std::move(force)) {
  for (std::size_t i = 0; i < nodal_values_.size(); ++i)
    if (free_index_[i] != npos) energy_ += nodal_values_[i] * force_[free_index_[i]];
}

FemSolution assemble_and_solve(std::shared_ptr<const Mesh> mesh, const ParamVector& params, std::size_t quad_points) {
  if (!mesh) throw std::invalid_argument("assemble_and_solve: null mesh");
  const System sys = number_free_nodes(*mesh);
  if (sys.num_free == 0) throw std::invalid_argument("assemble_and_solve: no free nodes");
  const auto& rule = gauss_legendre(quad_points);

  BandedMatrix k(sys.num_free, sys.bandwidth);
  std::vector<double> f(sys.num_free, 0.0);
  if (mesh->dim() == 1)
    assemble_1d(*mesh, params, rule, sys, k, f);
  else
    assemble_2d(*mesh, params, rule, sys, k, f);

  const BandedCholesky chol(std::move(k));
  const std::vector<double> u_free = chol.solve(f);
  std::vector<double> u(mesh->num_nodes(), 0.0);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (sys.free_index[i] != FemSolution::npos) u[i] = u_free[sys.free_index[i]];
  return FemSolution(std::move(mesh), params, std::move(u), sys.free_index, std::move(f));
}

FemSolution assemble_and_solve(const Mesh& mesh, const ParamVector& params, std::size_t quad_points) {
  return assemble_and_solve(std::make_shared<const Mesh>(mesh), params, quad_points);
}

double FemSolution::evaluate(const Point& p) const {
  return mesh_->dim() == 1 ? evaluate_1d(p.x) : evaluate_2d(p);
}

std::vector<double> FemSolution::evaluate(std::span<const Point> points) const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(evaluate(p));
  return out;
}

double FemSolution::evaluate_1d(double x) const {
  const auto& nodes = mesh_->nodes();
  if (!(x >= -kDomainSlack && x <= 1.0 + kDomainSlack)) {
    std::ostringstream msg;
    msg << "evaluate: point " << x << " outside the domain";
    throw std::out_of_range(msg.str());
  }
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x, [](double v, const Point& n) { return v < n.x; });
  std::size_t right = static_cast<std::size_t>(it - nodes.begin());
  right = std::clamp<std::size_t>(right, 1, nodes.size() - 1);
  const std::size_t left = right - 1;
  const double x0 = nodes[left].x;
  const double x1 = nodes[right].x;
  if (x == x0) return nodal_values_[left];
  if (x == x1) return nodal_values_[right];
  const double t = (x - x0) / (x1 - x0);
  return (1.0 - t) * nodal_values_[left] + t * nodal_values_[right];
}

std::optional<LocalCoords> invert_quad(const Mesh& mesh, std::size_t e, const Point& p) {
  const auto ids = mesh.element(e);
  const std::array<Point, 4> v{mesh.node(ids[0]), mesh.node(ids[1]), mesh.node(ids[2]), mesh.node(ids[3])};
  double xi = 0.0;
  double eta = 0.0;
  for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
    const Point m = shape::quad_map(v, xi, eta);
    const double rx = m.x - p.x;
    const double ry = m.y - p.y;
    const auto jac = shape::quad_jacobian(v, shape::quad_gradients(xi, eta));
    const double det = jac.det();
    if (!(det > 0.0)) return std::nullopt;
    const double dxi = (jac.ye * rx - jac.xe * ry) / det;
    const double deta = (-jac.yx * rx + jac.xx * ry) / det;
    xi -= dxi;
    eta -= deta;
    if (std::abs(dxi) < kNewtonTol && std::abs(deta) < kNewtonTol) return LocalCoords{xi, eta};
    if (std::abs(xi) > 10.0 || std::abs(eta) > 10.0) return std::nullopt;
  }
  return std::nullopt;
}

double FemSolution::evaluate_2d(const Point& p) const {
  const Mesh& mesh = *mesh_;
  const double top = mesh.height();
  if (!(p.x >= -kDomainSlack && p.x <= 1.0 + kDomainSlack && p.y >= -kDomainSlack && p.y <= top + kDomainSlack)) {
    std::ostringstream msg;
    msg << "evaluate: point (" << p.x << ", " << p.y << ") outside the domain";
    throw std::out_of_range(msg.str());
  }
  const auto nx = static_cast<long>(mesh.nx());
  const auto ny = static_cast<long>(mesh.ny());
  const long ci = std::clamp(static_cast<long>(std::floor(p.x / mesh.h())), 0L, nx - 1);
  const long cj = std::clamp(static_cast<long>(std::floor(p.y / mesh.h())), 0L, ny - 1);
  // Perturbed nodes move less than h/2, so the containing quad is the
  // reference cell or one of its neighbours. Try the reference cell first.
  std::array<std::pair<long, long>, 9> order{};
  order[0] = {ci, cj};
  std::size_t count = 1;
  for (long di = -1; di <= 1; ++di)
    for (long dj = -1; dj <= 1; ++dj)
      if (di != 0 || dj != 0) order[count++] = {ci + di, cj + dj};
  for (const auto& [i, j] : order) {
    if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
    const std::size_t e = static_cast<std::size_t>(i * ny + j);
    const auto local = invert_quad(mesh, e, p);
    if (!local || std::abs(local->xi) > 1.0 + kLocalSlack || std::abs(local->eta) > 1.0 + kLocalSlack) continue;
    const auto n = shape::quad_values(local->xi, local->eta);
    const auto ids = mesh.element(e);
    double value = 0.0;
    for (int a = 0; a < 4; ++a) value += n[a] * nodal_values_[ids[a]];
    return value;
  }
  std::ostringstream msg;
  msg << "evaluate: no element contains (" << p.x << ", " << p.y << ")";
  throw std::out_of_range(msg.str());
}

void write_solution_csv(const FemSolution& solution, std::ostream& out) {
  const Mesh& mesh = solution.mesh();
  const auto old_precision = out.precision(17);
  out << (mesh.dim() == 1 ? "x,u\n" : "x,y,u\n");
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    out << mesh.node(i).x << ',';
    if (mesh.dim() == 2) out << mesh.node(i).y << ',';
    out << solution.nodal_values()[i] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace rmfem
