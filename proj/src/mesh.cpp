#include "rmfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rmfem/errors.hpp"
#include "rmfem/quadrature.hpp"
#include "rmfem/shape.hpp"

namespace rmfem {

namespace {

constexpr double kStripHeight = 0.1;
constexpr std::size_t kMaxRedraws = 1000;

bool contains(const std::vector<std::size_t>& sorted, std::size_t id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

std::array<Point, 4> quad_vertices(const Mesh& mesh, std::size_t e) {
  const auto ids = mesh.element(e);
  return {mesh.node(ids[0]), mesh.node(ids[1]), mesh.node(ids[2]), mesh.node(ids[3])};
}

}  // namespace

double PerturbationScheme::amplitude(double h) const {
  const double scale = std::pow(h, p);
  return kind == PerturbationKind::uniform_interval_1d ? 0.5 * scale : 0.25 * std::numbers::sqrt2 * scale;
}

Mesh::Mesh(int dim, std::vector<Point> nodes, std::vector<std::size_t> connectivity, std::vector<NodeTag> tags,
           double h, std::size_t nx, std::size_t ny, Provenance provenance)
    : dim_(dim),
      nodes_(std::move(nodes)),
      connectivity_(std::move(connectivity)),
      tags_(std::move(tags)),
      h_(h),
      nx_(nx),
      ny_(ny),
      provenance_(std::move(provenance)) {
  if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("Mesh: dim must be 1 or 2");
  if (tags_.size() != nodes_.size()) throw std::invalid_argument("Mesh: one tag per node required");
  if (connectivity_.size() % nodes_per_element() != 0) throw std::invalid_argument("Mesh: ragged connectivity");
  for (auto id : connectivity_)
    if (id >= nodes_.size()) throw std::invalid_argument("Mesh: connectivity references missing node");
}

Mesh uniform_mesh_1d(std::size_t n) {
  if (n < 2) throw std::invalid_argument("uniform_mesh_1d: need n >= 2");
  std::vector<Point> nodes(n + 1);
  std::vector<NodeTag> tags(n + 1, NodeTag::interior);
  std::vector<std::size_t> conn;
  conn.reserve(2 * n);
  for (std::size_t i = 0; i <= n; ++i) nodes[i].x = static_cast<double>(i) / static_cast<double>(n);
  for (std::size_t e = 0; e < n; ++e) {
    conn.push_back(e);
    conn.push_back(e + 1);
  }
  tags.front() = NodeTag::dirichlet;
  tags.back() = NodeTag::dirichlet;
  return Mesh(1, std::move(nodes), std::move(conn), std::move(tags), 1.0 / static_cast<double>(n), n, 0);
}

Mesh strip_mesh_2d(std::size_t nx) {
  if (nx == 0 || nx % 10 != 0) throw std::invalid_argument("strip_mesh_2d: nx must be a positive multiple of 10");
  const std::size_t ny = nx / 10;
  const double h = 1.0 / static_cast<double>(nx);
  const std::size_t stride = ny + 1;
  std::vector<Point> nodes((nx + 1) * stride);
  std::vector<NodeTag> tags(nodes.size(), NodeTag::interior);
  for (std::size_t i = 0; i <= nx; ++i) {
    for (std::size_t j = 0; j <= ny; ++j) {
      const std::size_t id = i * stride + j;
      nodes[id] = {static_cast<double>(i) * h, j == ny ? kStripHeight : static_cast<double>(j) * h};
      const bool side = i == 0 || i == nx;
      const bool cap = j == 0 || j == ny;
      tags[id] = side && cap ? NodeTag::corner : side ? NodeTag::dirichlet : cap ? NodeTag::neumann : NodeTag::interior;
    }
  }
  std::vector<std::size_t> conn;
  conn.reserve(4 * nx * ny);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const std::size_t a = i * stride + j;
      conn.insert(conn.end(), {a, a + stride, a + stride + 1, a + 1});
    }
  }
  return Mesh(2, std::move(nodes), std::move(conn), std::move(tags), h, nx, ny);
}

std::optional<std::string> validate(const Mesh& mesh) {
  std::ostringstream msg;
  if (mesh.dim() == 1) {
    const auto& x = mesh.nodes();
    if (x.size() < 2 || x.front().x != 0.0 || x.back().x != 1.0) return "1D mesh endpoints must be exactly 0 and 1";
    for (std::size_t i = 1; i < x.size(); ++i) {
      if (!(x[i].x > x[i - 1].x)) {
        msg << "1D nodes not strictly increasing at node " << i;
        return msg.str();
      }
    }
    if (!mesh.is_dirichlet(0) || !mesh.is_dirichlet(x.size() - 1)) return "1D end nodes must be Dirichlet";
    return std::nullopt;
  }

  const double top = mesh.height();
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const Point& p = mesh.node(i);
    const bool on_side = p.x == 0.0 || p.x == 1.0;
    const bool on_cap = p.y == 0.0 || p.y == top;
    switch (mesh.tag(i)) {
      case NodeTag::dirichlet:
        if (!on_side) return "Dirichlet node off the left/right boundary";
        break;
      case NodeTag::neumann:
        if (!on_cap) return "Neumann node off the top/bottom boundary";
        break;
      case NodeTag::corner:
        if (!on_side || !on_cap) return "corner node moved off a corner";
        break;
      case NodeTag::interior:
        break;
    }
  }
  const auto& rule = gauss_legendre(4);
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto v = quad_vertices(mesh, e);
    auto check = [&](double xi, double eta) {
      return shape::quad_jacobian(v, shape::quad_gradients(xi, eta)).det() > 0.0;
    };
    bool ok = true;
    for (int a = 0; a < 4 && ok; ++a) ok = check(shape::kQuadXi[a], shape::kQuadEta[a]);
    for (std::size_t qx = 0; qx < rule.size() && ok; ++qx)
      for (std::size_t qy = 0; qy < rule.size() && ok; ++qy) ok = check(rule.points[qx], rule.points[qy]);
    if (!ok) {
      msg << "quad " << e << " has non-positive Jacobian";
      return msg.str();
    }
  }
  return std::nullopt;
}

namespace {

void check_scheme(const Mesh& mesh, const PerturbationScheme& scheme) {
  if (mesh.provenance().perturbed) throw std::invalid_argument("perturb: mesh is already perturbed");
  if (!(scheme.p >= 1.0)) throw std::invalid_argument("perturb: exponent p must be >= 1");
  const bool dim_ok = (mesh.dim() == 1) == (scheme.kind == PerturbationKind::uniform_interval_1d);
  if (!dim_ok) throw std::invalid_argument("perturb: scheme kind does not match mesh dimension");
  for (auto id : scheme.fixed_nodes)
    if (id >= mesh.num_nodes()) throw std::invalid_argument("perturb: fixed node id out of range");
}

// Nodes that move under the scheme.
std::vector<char> movable_nodes(const Mesh& mesh, const PerturbationScheme& scheme) {
  std::vector<std::size_t> fixed = scheme.fixed_nodes;
  std::sort(fixed.begin(), fixed.end());
  std::vector<char> movable(mesh.num_nodes(), 0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const NodeTag tag = mesh.tag(i);
    bool moves = tag != NodeTag::corner && !contains(fixed, i);
    if (mesh.dim() == 1) moves = moves && tag == NodeTag::interior;
    movable[i] = moves ? 1 : 0;
    count += moves ? 1 : 0;
  }
  if (count == 0) throw DegenerateSchemeError("perturb: scheme leaves no node free to move");
  return movable;
}

Mesh displaced(const Mesh& mesh, const std::vector<char>& movable, std::span<const Point> displacement,
               Provenance provenance) {
  std::vector<Point> nodes = mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!movable[i]) continue;
    Point d = displacement[i];
    if (mesh.dim() == 1) {
      d.y = 0.0;
    } else if (mesh.tag(i) == NodeTag::dirichlet) {
      d.x = 0.0;  // stays on x = 0 or x = 1
    } else if (mesh.tag(i) == NodeTag::neumann) {
      d.y = 0.0;  // stays on y = 0 or y = top
    }
    nodes[i].x += d.x;
    nodes[i].y += d.y;
  }
  return Mesh(mesh.dim(), std::move(nodes), mesh.connectivity(), mesh.tags(), mesh.h(), mesh.nx(), mesh.ny(),
              std::move(provenance));
}

}  // namespace

Mesh apply_displacements(const Mesh& mesh, const PerturbationScheme& scheme, std::span<const Point> displacement,
                         std::uint64_t seed) {
  check_scheme(mesh, scheme);
  if (displacement.size() != mesh.num_nodes()) throw std::invalid_argument("apply_displacements: one entry per node");
  const auto movable = movable_nodes(mesh, scheme);
  Mesh out = displaced(mesh, movable, displacement, Provenance{true, seed, scheme, 0});
  if (auto err = validate(out)) throw std::invalid_argument("apply_displacements: " + *err);
  return out;
}

Mesh perturb(const Mesh& mesh, const PerturbationScheme& scheme, Stream& stream) {
  check_scheme(mesh, scheme);
  const auto movable = movable_nodes(mesh, scheme);
  const double amp = scheme.amplitude(mesh.h());
  std::vector<Point> d(mesh.num_nodes());

  for (std::size_t attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!movable[i]) {
        d[i] = {};
        continue;
      }
      if (scheme.kind == PerturbationKind::uniform_interval_1d) {
        d[i] = {amp * (2.0 * stream.uniform() - 1.0), 0.0};
      } else {
        const double r = amp * std::sqrt(stream.uniform());
        const double theta = 2.0 * std::numbers::pi * stream.uniform();
        d[i] = {r * std::cos(theta), r * std::sin(theta)};
      }
    }
    Mesh out = displaced(mesh, movable, d, Provenance{true, stream.key(), scheme, attempt});
    if (!validate(out)) return out;
  }
  throw NumericalError("perturb: no valid mesh after repeated redraws");
}

std::vector<std::size_t> fixed_observation_nodes(const Mesh& mesh, std::span<const Point> locations, double tol) {
  std::vector<std::size_t> ids;
  ids.reserve(locations.size());
  for (const Point& loc : locations) {
    std::optional<std::size_t> match;
    for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
      const Point& p = mesh.node(i);
      if (std::hypot(p.x - loc.x, p.y - loc.y) <= tol) {
        if (match) throw std::invalid_argument("fixed_observation_nodes: location matches several nodes");
        match = i;
      }
    }
    if (!match) {
      std::ostringstream msg;
      msg << "fixed_observation_nodes: location (" << loc.x << ", " << loc.y << ") is not a mesh node";
      throw std::invalid_argument(msg.str());
    }
    ids.push_back(*match);
  }
  return ids;
}

std::string to_string(NodeTag tag) {
  switch (tag) {
    case NodeTag::interior: return "interior";
    case NodeTag::dirichlet: return "dirichlet";
    case NodeTag::neumann: return "neumann";
    case NodeTag::corner: return "corner";
  }
  return "?";
}

std::string to_string(PerturbationKind kind) {
  return kind == PerturbationKind::uniform_interval_1d ? "uniform_interval_1d" : "disk_2d";
}

namespace {

NodeTag tag_from_string(const std::string& s) {
  for (auto t : {NodeTag::interior, NodeTag::dirichlet, NodeTag::neumann, NodeTag::corner})
    if (to_string(t) == s) return t;
  throw std::invalid_argument("mesh json: unknown tag " + s);
}

}  // namespace

std::string to_json(const Mesh& mesh) {
  using nlohmann::json;
  json j;
  j["dim"] = mesh.dim();
  json nodes = json::array();
  for (const auto& p : mesh.nodes()) nodes.push_back(mesh.dim() == 1 ? json::array({p.x}) : json::array({p.x, p.y}));
  j["nodes"] = std::move(nodes);
  json elements = json::array();
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto ids = mesh.element(e);
    elements.push_back(std::vector<std::size_t>(ids.begin(), ids.end()));
  }
  j["elements"] = std::move(elements);
  json tags = json::array();
  for (auto t : mesh.tags()) tags.push_back(to_string(t));
  j["tags"] = std::move(tags);
  j["h"] = mesh.h();
  j["grid"] = {mesh.nx(), mesh.ny()};
  const auto& prov = mesh.provenance();
  json pj;
  pj["kind"] = prov.perturbed ? "perturbed" : "reference";
  if (prov.perturbed) {
    pj["seed"] = prov.seed;
    pj["redraws"] = prov.redraws;
    if (prov.scheme) {
      pj["scheme"] = {{"p", prov.scheme->p},
                      {"kind", to_string(prov.scheme->kind)},
                      {"fixed_nodes", prov.scheme->fixed_nodes}};
    }
  }
  j["provenance"] = std::move(pj);
  return j.dump();
}

Mesh mesh_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const int dim = j.at("dim").get<int>();
  std::vector<Point> nodes;
  for (const auto& p : j.at("nodes")) nodes.push_back({p.at(0).get<double>(), dim == 2 ? p.at(1).get<double>() : 0.0});
  std::vector<std::size_t> conn;
  for (const auto& e : j.at("elements"))
    for (const auto& id : e) conn.push_back(id.get<std::size_t>());
  std::vector<NodeTag> tags;
  for (const auto& t : j.at("tags")) tags.push_back(tag_from_string(t.get<std::string>()));
  Provenance prov;
  const auto& pj = j.at("provenance");
  prov.perturbed = pj.at("kind").get<std::string>() == "perturbed";
  if (prov.perturbed) {
    prov.seed = pj.at("seed").get<std::uint64_t>();
    prov.redraws = pj.at("redraws").get<std::size_t>();
    if (pj.contains("scheme")) {
      const auto& sj = pj.at("scheme");
      PerturbationScheme scheme;
      scheme.p = sj.at("p").get<double>();
      scheme.kind = sj.at("kind").get<std::string>() == "disk_2d" ? PerturbationKind::disk_2d
                                                                   : PerturbationKind::uniform_interval_1d;
      scheme.fixed_nodes = sj.at("fixed_nodes").get<std::vector<std::size_t>>();
      prov.scheme = std::move(scheme);
    }
  }
  const auto grid = j.at("grid");
  return Mesh(dim, std::move(nodes), std::move(conn), std::move(tags), j.at("h").get<double>(),
              grid.at(0).get<std::size_t>(), grid.at(1).get<std::size_t>(), std::move(prov));
}

}  // namespace rmfem
