#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmfem/field.hpp"
#include "rmfem/random.hpp"

namespace rmfem {

enum class NodeTag { interior, dirichlet, neumann, corner };

enum class PerturbationKind { uniform_interval_1d, disk_2d };

/// Random node displacement of size h^p. In 1D each free node moves by
/// h^p * U(-1/2, 1/2); in 2D by a uniform draw from the disk of radius
/// h^p * sqrt(2)/4, with boundary nodes projected back onto their edge.
struct PerturbationScheme {
  double p = 1.0;
  PerturbationKind kind = PerturbationKind::uniform_interval_1d;
  std::vector<std::size_t> fixed_nodes;

  /// Maximum displacement magnitude on a mesh of nominal size h.
  double amplitude(double h) const;
};

struct Provenance {
  bool perturbed = false;
  std::uint64_t seed = 0;
  std::optional<PerturbationScheme> scheme;
  /// Whole-mesh redraws needed to obtain a valid 2D mesh.
  std::size_t redraws = 0;
};

/// Immutable mesh of 2-node intervals (1D) or 4-node quads (2D, counter-clockwise).
/// 2D meshes are structured: node (i, j) has id i * (ny + 1) + j.
class Mesh {
 public:
  Mesh(int dim, std::vector<Point> nodes, std::vector<std::size_t> connectivity, std::vector<NodeTag> tags,
       double h, std::size_t nx, std::size_t ny, Provenance provenance = {});

  int dim() const { return dim_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_elements() const { return connectivity_.size() / nodes_per_element(); }
  std::size_t nodes_per_element() const { return dim_ == 1 ? 2 : 4; }
  std::span<const std::size_t> element(std::size_t e) const {
    return {connectivity_.data() + e * nodes_per_element(), nodes_per_element()};
  }

  const std::vector<Point>& nodes() const { return nodes_; }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<std::size_t>& connectivity() const { return connectivity_; }
  const std::vector<NodeTag>& tags() const { return tags_; }
  NodeTag tag(std::size_t i) const { return tags_[i]; }
  bool is_dirichlet(std::size_t i) const { return tags_[i] == NodeTag::dirichlet || tags_[i] == NodeTag::corner; }

  double h() const { return h_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  const Provenance& provenance() const { return provenance_; }

  /// Domain extent: [0,1] in 1D, [0,1] x [0, height] in 2D (top-left corner node).
  double height() const { return dim_ == 1 ? 0.0 : nodes_[ny_].y; }

 private:
  int dim_;
  std::vector<Point> nodes_;
  std::vector<std::size_t> connectivity_;
  std::vector<NodeTag> tags_;
  double h_;
  std::size_t nx_;
  std::size_t ny_;
  Provenance provenance_;
};

/// n+1 equispaced nodes on [0,1]. Requires n >= 2.
Mesh uniform_mesh_1d(std::size_t n);

/// Square-element quad mesh of (0,1) x (0,1/10) with nx columns and nx/10 rows.
/// Requires nx to be a positive multiple of 10.
Mesh strip_mesh_2d(std::size_t nx);

/// Draws a perturbed mesh from a reference mesh. Invalid 2D draws are
/// discarded and redrawn from the same stream (count kept in provenance).
/// Throws DegenerateSchemeError if no node is free to move.
Mesh perturb(const Mesh& mesh, const PerturbationScheme& scheme, Stream& stream);

/// Applies raw per-node displacements (before pinning/projection) to a
/// reference mesh. Fixed, corner and 1D end nodes are left untouched;
/// 2D boundary nodes lose their normal component. The result is validated.
Mesh apply_displacements(const Mesh& mesh, const PerturbationScheme& scheme, std::span<const Point> displacement,
                         std::uint64_t seed = 0);

/// Checks the mesh invariants; returns an error description or nullopt.
std::optional<std::string> validate(const Mesh& mesh);

/// Node ids coinciding (within tol) with each location, in input order.
/// Throws std::invalid_argument for a location that matches no node.
std::vector<std::size_t> fixed_observation_nodes(const Mesh& mesh, std::span<const Point> locations,
                                                 double tol = 1e-9);

std::string to_json(const Mesh& mesh);
Mesh mesh_from_json(const std::string& text);

std::string to_string(NodeTag tag);
std::string to_string(PerturbationKind kind);

}  // namespace rmfem
