#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmfem/analysis.hpp"
#include "rmfem/inverse.hpp"
#include "rmfem/mcmc.hpp"

namespace rmfem {

enum class Experiment { forward_demo, posterior, interpolation, energy, table };
enum class Method { fem, rmfem, rmfem_fixed_obs };

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr std::size_t kForwardDemoSamples = 100;
inline constexpr std::size_t kEnergySamples = 500;

/// Flat key = value experiment description. Keys:
///   experiment, domain, method, h_list, M, burn_in, samples, initial_state,
///   target_acceptance, adapt_interval, mcwm_refresh, sigma_e, obs_x, seed,
///   out_dir, scale, threads
/// h_list entries are written as 1/n or n (element counts).
struct ExperimentConfig {
  Experiment experiment = Experiment::posterior;
  Domain domain = Domain::one_d;
  Method method = Method::fem;
  std::vector<std::size_t> h_list{10, 20, 40};
  std::size_t M = 10;
  ChainConfig chain;
  bool mcwm_refresh = true;
  double sigma_e = kDefaultNoise;
  std::vector<double> obs_x{0.2, 0.4, 0.6, 0.8};
  std::uint64_t seed = kDefaultSeed;
  std::filesystem::path out_dir = "out";
  double scale = 1.0;
  std::size_t threads = 1;

  /// Sets one key from its text value. Throws ConfigError.
  void set(const std::string& key, const std::string& value);
  /// Throws ConfigError when an invariant fails; runs before any compute.
  void validate() const;
  /// Sorted key = value lines of everything that affects results
  /// (out_dir and threads excluded).
  std::string canonical() const;
  std::string hash() const;
  /// Chain settings after applying the scale factor.
  ChainConfig scaled_chain() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string to_string(Experiment e);
std::string to_string(Method m);
std::string to_string(Domain d);

/// Observation locations implied by the config (obs_x, on the strip midline in 2D).
std::vector<Point> config_locations(const ExperimentConfig& config, Domain domain);
ObservationSet config_observations(const ExperimentConfig& config, Domain domain);

/// One posterior run of the Table-1 grid.
struct RunSpec {
  Method method = Method::fem;
  Domain domain = Domain::one_d;
  std::size_t n = 10;

  std::string label() const;
};

struct RunResult {
  RunSpec spec;
  PosteriorSamples samples;
  std::vector<SummaryRow> summary;
};

/// Runs one posterior configuration with the seed derived from (config seed, run).
RunResult run_posterior(const ExperimentConfig& config, const RunSpec& run, const ObservationSet& obs_1d);

/// Subcommands. Each returns the written files (sidecars excluded).
std::vector<std::filesystem::path> cmd_forward_demo(const ExperimentConfig& config);
std::vector<std::filesystem::path> cmd_posterior(const ExperimentConfig& config);
std::vector<std::filesystem::path> cmd_interpolation(const ExperimentConfig& config);
std::vector<std::filesystem::path> cmd_energy(const ExperimentConfig& config);
std::vector<std::filesystem::path> cmd_table(const ExperimentConfig& config);

std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& config);

}  // namespace rmfem
