#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmfem/fem.hpp"
#include "rmfem/inverse.hpp"
#include "rmfem/mesh.hpp"

namespace rmfem {

/// L2 displacement error, dual-cell weighted nodal error, and their
/// ratio zeta with eta = 1 - zeta.
struct ErrorReport {
  double h = 0.0;
  double l2_error = 0.0;
  double nodal_error = 0.0;
  double zeta = 0.0;
  double eta = 1.0;
};

/// Compares a 1D solution against a reference solution with the same
/// parameters. The L2 integral runs over the merged breakpoints of both
/// meshes with `quad_points` Gauss points per piece, so the piecewise-linear
/// difference is integrated exactly.
ErrorReport error_report(const FemSolution& solution, const FemSolution& reference, std::size_t quad_points = 8);

/// Dual-cell weight per node: half the total length of adjacent elements.
std::vector<double> dual_cell_weights(const Mesh& mesh);

struct EnergyDistribution {
  double h = 0.0;
  std::vector<double> samples;
  double unperturbed = 0.0;
  double reference = 0.0;
};

/// Total energies of n_samples perturbed-mesh solves; sample i is drawn
/// from the stream derived from (key, i). The reference energy uses the
/// 1000-element uniform mesh.
EnergyDistribution energy_distribution(const Mesh& reference_mesh, const PerturbationScheme& scheme,
                                       const ParamVector& params, std::size_t n_samples, std::uint64_t key);

/// Empirical quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

struct SummaryRow {
  std::size_t param = 0;  // 1-based
  double mean = 0.0;
  double std = 0.0;
  double error = 0.0;
};

/// Per-parameter mean, unbiased standard deviation and |truth - mean|.
std::vector<SummaryRow> posterior_summary(const ChainDraws& draws, std::span<const double> truth);
std::vector<SummaryRow> posterior_summary(const PosteriorSamples& samples, const ParamVector& truth);

/// Sarle's bimodality coefficient (g^2 + 1) / (k + 3 (n-1)^2 / ((n-2)(n-3)))
/// with sample skewness g and excess kurtosis k. Values above 5/9 suggest
/// more than one mode.
double bimodality_coefficient(std::span<const double> xs);

}  // namespace rmfem
