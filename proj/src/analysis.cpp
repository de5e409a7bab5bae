#include "rmfem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rmfem/quadrature.hpp"
#include "rmfem/random.hpp"

namespace rmfem {

std::vector<double> dual_cell_weights(const Mesh& mesh) {
  if (mesh.dim() != 1) throw std::invalid_argument("dual_cell_weights: 1D meshes only");
  std::vector<double> w(mesh.num_nodes(), 0.0);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto ids = mesh.element(e);
    const double half = 0.5 * (mesh.node(ids[1]).x - mesh.node(ids[0]).x);
    w[ids[0]] += half;
    w[ids[1]] += half;
  }
  return w;
}

ErrorReport error_report(const FemSolution& solution, const FemSolution& reference, std::size_t quad_points) {
  if (solution.mesh().dim() != 1 || reference.mesh().dim() != 1)
    throw std::invalid_argument("error_report: 1D solutions only");
  if (!(solution.params() == reference.params()))
    throw std::invalid_argument("error_report: solutions computed with different parameters");

  std::vector<double> breaks;
  for (const auto& p : solution.mesh().nodes()) breaks.push_back(p.x);
  for (const auto& p : reference.mesh().nodes()) breaks.push_back(p.x);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return b - a < 1e-14; }),
               breaks.end());

  auto diff_sq = [&](double x) {
    const double d = reference.evaluate(Point{x, 0.0}) - solution.evaluate(Point{x, 0.0});
    return d * d;
  };
  double l2_sq = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) l2_sq += integrate(diff_sq, breaks[i - 1], breaks[i], quad_points);

  const auto weights = dual_cell_weights(solution.mesh());
  double nodal_sq = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const Point& node = solution.mesh().node(i);
    const double d = reference.evaluate(node) - solution.nodal_values()[i];
    nodal_sq += weights[i] * d * d;
  }

  ErrorReport report;
  report.h = solution.mesh().h();
  report.l2_error = std::sqrt(l2_sq);
  report.nodal_error = std::sqrt(nodal_sq);
  report.zeta = report.l2_error > 0.0 ? report.nodal_error / report.l2_error : 0.0;
  report.eta = 1.0 - report.zeta;
  return report;
}

EnergyDistribution energy_distribution(const Mesh& reference_mesh, const PerturbationScheme& scheme,
                                       const ParamVector& params, std::size_t n_samples, std::uint64_t key) {
  if (n_samples == 0) throw std::invalid_argument("energy_distribution: need at least one sample");
  EnergyDistribution dist;
  dist.h = reference_mesh.h();
  dist.samples.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    Stream stream(key, {i});
    dist.samples.push_back(assemble_and_solve(perturb(reference_mesh, scheme, stream), params).energy());
  }
  dist.unperturbed = assemble_and_solve(reference_mesh, params).energy();
  dist.reference = assemble_and_solve(uniform_mesh_1d(kReferenceElements), params).energy();
  return dist;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<SummaryRow> posterior_summary(const ChainDraws& draws, std::span<const double> truth) {
  const std::size_t n = draws.size();
  if (n == 0) throw std::invalid_argument("posterior_summary: no draws");
  if (truth.size() != draws.dim) throw std::invalid_argument("posterior_summary: truth dimension mismatch");
  std::vector<SummaryRow> rows;
  for (std::size_t k = 0; k < draws.dim; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += draws(i, k);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (draws(i, k) - mean) * (draws(i, k) - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    rows.push_back({k + 1, mean, sd, std::abs(truth[k] - mean)});
  }
  return rows;
}

std::vector<SummaryRow> posterior_summary(const PosteriorSamples& samples, const ParamVector& truth) {
  return posterior_summary(samples.chain, std::span<const double>(truth.values()));
}

double bimodality_coefficient(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 4) throw std::invalid_argument("bimodality_coefficient: need at least 4 values");
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  // bias-corrected sample skewness and excess kurtosis
  const double g1 = m3 / std::pow(m2, 1.5);
  const double skew = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
  const double g2 = m4 / (m2 * m2) - 3.0;
  const double kurt = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);
  return (skew * skew + 1.0) / (kurt + 3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0)));
}

}  // namespace rmfem
