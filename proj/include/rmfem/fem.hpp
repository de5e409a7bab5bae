#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rmfem/field.hpp"
#include "rmfem/mesh.hpp"

namespace rmfem {

/// Gauss-Legendre points per element direction used for assembly.
inline constexpr std::size_t kAssemblyQuadrature = 4;

/// Linear (1D) or bilinear (2D) FEM solution of -div(kappa grad u) = f with
/// u = 0 on the Dirichlet boundary and natural Neumann conditions elsewhere.
class FemSolution {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  FemSolution(std::shared_ptr<const Mesh> mesh, ParamVector params, std::vector<double> nodal_values,
              std::vector<std::size_t> free_index, std::vector<double> force);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const ParamVector& params() const { return params_; }

  /// One value per mesh node; Dirichlet nodes are exactly zero.
  const std::vector<double>& nodal_values() const { return nodal_values_; }
  /// Free-node number of each mesh node, or npos for Dirichlet nodes.
  const std::vector<std::size_t>& free_index() const { return free_index_; }
  /// Assembled load vector over free nodes.
  const std::vector<double>& force_vector() const { return force_; }
  /// u^T f over free nodes.
  double energy() const { return energy_; }

  /// Interpolated value at a physical point. Throws std::out_of_range outside the domain.
  double evaluate(const Point& p) const;
  std::vector<double> evaluate(std::span<const Point> points) const;

 private:
  double evaluate_1d(double x) const;
  double evaluate_2d(const Point& p) const;

  std::shared_ptr<const Mesh> mesh_;
  ParamVector params_;
  std::vector<double> nodal_values_;
  std::vector<std::size_t> free_index_;
  std::vector<double> force_;
  double energy_ = 0.0;
};

FemSolution assemble_and_solve(std::shared_ptr<const Mesh> mesh, const ParamVector& params,
                               std::size_t quad_points = kAssemblyQuadrature);
FemSolution assemble_and_solve(const Mesh& mesh, const ParamVector& params,
                               std::size_t quad_points = kAssemblyQuadrature);

inline double total_energy(const FemSolution& solution) { return solution.energy(); }

/// Bilinear-map inversion: local coordinates of p in quad e, if the Newton
/// iteration converges (tolerance 1e-12, 20 iterations).
struct LocalCoords {
  double xi;
  double eta;
};
std::optional<LocalCoords> invert_quad(const Mesh& mesh, std::size_t e, const Point& p);

/// CSV columns x,u (1D) or x,y,u (2D), one row per node.
void write_solution_csv(const FemSolution& solution, std::ostream& out);

}  // namespace rmfem
