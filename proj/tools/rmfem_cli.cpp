// Command-line driver for the experiment pipeline.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rmfem/errors.hpp"
#include "rmfem/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> scale;
  std::optional<std::size_t> threads;
};

rmfem::ExperimentConfig resolve(const Overrides& o, rmfem::Experiment experiment) {
  rmfem::ExperimentConfig config = o.config_path.empty() ? rmfem::ExperimentConfig{} : rmfem::load_config(o.config_path);
  config.experiment = experiment;
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.out_dir = *o.out;
  if (o.scale) config.scale = *o.scale;
  if (o.threads) config.threads = *o.threads;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-mesh finite element Bayesian inversion experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RMFEM_VERSION);

  Overrides overrides;
  const std::pair<const char*, rmfem::Experiment> commands[] = {
      {"forward-demo", rmfem::Experiment::forward_demo},
      {"posterior", rmfem::Experiment::posterior},
      {"interpolation", rmfem::Experiment::interpolation},
      {"energy", rmfem::Experiment::energy},
      {"table", rmfem::Experiment::table},
  };
  std::optional<rmfem::Experiment> chosen;
  for (const auto& [name, experiment] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", overrides.config_path, "key = value config file");
    sub->add_option("--seed", overrides.seed, "master seed");
    sub->add_option("--out", overrides.out, "output directory");
    sub->add_option("--scale", overrides.scale, "multiplier on burn-in and sample counts");
    sub->add_option("--threads", overrides.threads, "worker threads");
    sub->callback([&chosen, e = experiment] { chosen = e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const rmfem::ExperimentConfig config = resolve(overrides, *chosen);
    const auto files = rmfem::run_experiment(config);
    for (const auto& f : files) std::cout << f.string() << '\n';
    return 0;
  } catch (const rmfem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rmfem::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
