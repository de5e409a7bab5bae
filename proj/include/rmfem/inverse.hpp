#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmfem/fem.hpp"
#include "rmfem/field.hpp"
#include "rmfem/mcmc.hpp"
#include "rmfem/mesh.hpp"

namespace rmfem {

enum class Domain { one_d, two_d };

inline constexpr double kDefaultNoise = 1e-5;
/// Elements of the mesh that generates the synthetic data.
inline constexpr std::size_t kReferenceElements = 1000;

/// Point observations y = O[u] + noise.
struct ObservationSet {
  std::vector<Point> locations;
  std::vector<double> values;
  double sigma_e = kDefaultNoise;
  std::uint64_t generation_seed = 0;
};

/// {i/5} in 1D, {(i/5, 1/20)} on the 2D strip, i = 1..4.
std::vector<Point> observation_locations(Domain domain);

/// Horizontal positions xs placed on the line y = 0 (1D) or the strip midline y = 1/20 (2D).
std::vector<Point> observation_locations(Domain domain, std::span<const double> xs);

/// Solves at the reference parameters on the 1000-element mesh, observes at
/// the 1D locations and adds N(0, sigma_e^2) noise from the seeded stream.
/// The 2D set reuses the 1D values at the 2D locations. Empty xs selects {i/5}.
ObservationSet synthesize_observations(Domain domain, std::uint64_t seed, double sigma_e = kDefaultNoise,
                                       std::span<const double> xs = {});

/// Returns the same values attached to the same horizontal positions in another domain.
ObservationSet relocate(const ObservationSet& obs, Domain domain);

/// log N(params; 0, I)
double log_prior(const ParamVector& params);
double log_prior(std::span<const double> state);

/// Gaussian log density of obs.values given model predictions at obs.locations.
double gaussian_log_likelihood(std::span<const double> predicted, const ObservationSet& obs);

/// Deterministic FEM likelihood on a fixed mesh.
double log_likelihood_fem(const ParamVector& params, const ObservationSet& obs, const Mesh& mesh);

/// log(mean(exp(values))) with max shift.
double log_mean_exp(std::span<const double> values);

/// Mesh-averaged likelihood over the given perturbed meshes.
double log_likelihood_mcwm(const ParamVector& params, const ObservationSet& obs, std::span<const Mesh> meshes);

/// Mesh-averaged likelihood over M fresh perturbed meshes; mesh j is drawn
/// from the stream derived from (key, j).
double log_likelihood_mcwm(const ParamVector& params, const ObservationSet& obs, const Mesh& reference_mesh,
                           const PerturbationScheme& scheme, std::size_t samples, std::uint64_t key);

enum class LikelihoodVariant { deterministic_fem, mcwm, mwmc };

struct LikelihoodSpec {
  LikelihoodVariant variant = LikelihoodVariant::deterministic_fem;
  std::size_t M = 10;
  std::optional<PerturbationScheme> scheme;
  /// MCwM only: re-estimate the current state every step (true) or carry
  /// the accepted estimate (pseudo-marginal, false).
  bool refresh_current = true;

  void validate() const;
};

std::string to_string(LikelihoodVariant variant);

struct PosteriorSamples {
  ChainDraws chain;
  ChainConfig config;
  LikelihoodSpec likelihood;

  std::size_t size() const { return chain.size(); }
};

/// Metropolis within Monte Carlo: M perturbed meshes are drawn once, an
/// independent deterministic-likelihood chain runs on each, and the M x N
/// draws are pooled in mesh order. Chains run on up to `threads` workers.
PosteriorSamples run_mwmc(const ObservationSet& obs, const Mesh& reference_mesh, const PerturbationScheme& scheme,
                          std::size_t M, const ChainConfig& config, std::size_t threads = 1);

/// Runs the posterior sampler selected by the likelihood spec.
PosteriorSamples sample_posterior(const ObservationSet& obs, const Mesh& reference_mesh, const LikelihoodSpec& spec,
                                  const ChainConfig& config, std::size_t threads = 1);

/// CSV with header xi1..xiK and one row per draw.
void write_draws_csv(const PosteriorSamples& samples, std::ostream& out);
/// JSON sidecar: seed, chain config, likelihood variant, acceptance ratio, final proposal scale.
std::string posterior_sidecar_json(const PosteriorSamples& samples);

void write_observations_csv(const ObservationSet& obs, std::ostream& out);

}  // namespace rmfem
