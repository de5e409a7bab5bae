#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rmfem {

/// Log target density. The key identifies the random stream a stochastic
/// (mesh-averaged) estimate must draw from; deterministic targets ignore it.
using LogDensity = std::function<double(std::span<const double> state, std::uint64_t key)>;

struct ChainConfig {
  std::size_t burn_in = 10000;
  std::size_t samples = 10000;
  /// Starting point; its length sets the chain dimension.
  std::vector<double> initial_state = std::vector<double>(4, 0.0);
  double target_acceptance = 0.3;
  std::size_t adapt_interval = 200;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when an invariant fails.
  void validate() const;
};

struct RwmOptions {
  /// Re-estimate the current state's log density every iteration (Monte
  /// Carlo within Metropolis). When false the accepted value is carried,
  /// which is the exact pseudo-marginal chain for unbiased estimators.
  bool refresh_current = false;
};

/// Post-burn-in draws of a random walk Metropolis chain, row-major N x dim.
struct ChainDraws {
  std::size_t dim = 0;
  std::vector<double> draws;
  double acceptance_ratio = 0.0;
  double proposal_scale_final = 1.0;

  std::size_t size() const { return dim == 0 ? 0 : draws.size() / dim; }
  double operator()(std::size_t i, std::size_t k) const { return draws[i * dim + k]; }
  std::vector<double> column(std::size_t k) const;
};

/// Metropolis rule: accept iff log(u) < log_ratio, with u uniform on [0, 1).
/// NaN ratios reject.
bool metropolis_accept(double log_ratio, double u);

/// Isotropic Gaussian random walk Metropolis. The proposal scale starts at 1
/// and is multiplied by exp(window_rate - target) after every adapt_interval
/// burn-in steps; it is frozen afterwards. Throws NumericalError if the
/// target is not finite at the initial state.
ChainDraws run_rwm(const LogDensity& log_post, const ChainConfig& config, RwmOptions options = {});

/// Batch-means estimate of the Monte Carlo standard error of the mean of xs.
double batch_means_standard_error(std::span<const double> xs, std::size_t batches = 50);

}  // namespace rmfem
