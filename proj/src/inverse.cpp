#include "rmfem/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rmfem/parallel.hpp"
#include "rmfem/random.hpp"

namespace rmfem {

namespace {

constexpr std::size_t kObservationCount = 4;
constexpr double kStripMidline = 0.05;

// Stream labels under a chain or experiment seed.
constexpr std::uint64_t kMwmcMeshStream = 11;
constexpr std::uint64_t kMwmcChainStream = 12;

}  // namespace

std::vector<Point> observation_locations(Domain domain, std::span<const double> xs) {
  std::vector<Point> locs;
  for (double x : xs) locs.push_back({x, domain == Domain::one_d ? 0.0 : kStripMidline});
  return locs;
}

std::vector<Point> observation_locations(Domain domain) {
  std::vector<double> xs;
  for (std::size_t i = 1; i <= kObservationCount; ++i) xs.push_back(static_cast<double>(i) / 5.0);
  return observation_locations(domain, xs);
}

ObservationSet synthesize_observations(Domain domain, std::uint64_t seed, double sigma_e, std::span<const double> xs) {
  if (!(sigma_e >= 0.0)) throw std::invalid_argument("synthesize_observations: sigma_e must be non-negative");
  const FemSolution truth = assemble_and_solve(uniform_mesh_1d(kReferenceElements), reference_params());
  ObservationSet obs;
  obs.locations = xs.empty() ? observation_locations(Domain::one_d) : observation_locations(Domain::one_d, xs);
  obs.values = truth.evaluate(obs.locations);
  obs.sigma_e = sigma_e;
  obs.generation_seed = seed;
  Stream noise(seed);
  for (double& v : obs.values) v += sigma_e * noise.normal();
  return relocate(obs, domain);
}

ObservationSet relocate(const ObservationSet& obs, Domain domain) {
  ObservationSet out = obs;
  for (auto& p : out.locations) p.y = domain == Domain::one_d ? 0.0 : kStripMidline;
  return out;
}

double log_prior(std::span<const double> state) {
  double ss = 0.0;
  for (double v : state) ss += v * v;
  return -0.5 * ss - 0.5 * static_cast<double>(state.size()) * std::log(2.0 * std::numbers::pi);
}

double log_prior(const ParamVector& params) { return log_prior(std::span<const double>(params.values())); }

double gaussian_log_likelihood(std::span<const double> predicted, const ObservationSet& obs) {
  if (predicted.size() != obs.values.size()) throw std::invalid_argument("likelihood: prediction size mismatch");
  const double var = obs.sigma_e * obs.sigma_e;
  double ss = 0.0;
  for (std::size_t j = 0; j < predicted.size(); ++j) {
    const double r = obs.values[j] - predicted[j];
    ss += r * r;
  }
  const double norm = static_cast<double>(predicted.size()) * std::log(obs.sigma_e * std::sqrt(2.0 * std::numbers::pi));
  return -0.5 * ss / var - norm;
}

double log_likelihood_fem(const ParamVector& params, const ObservationSet& obs, const Mesh& mesh) {
  const FemSolution sol = assemble_and_solve(mesh, params);
  return gaussian_log_likelihood(sol.evaluate(obs.locations), obs);
}

double log_mean_exp(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("log_mean_exp: empty input");
  const double top = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum) - std::log(static_cast<double>(values.size()));
}

double log_likelihood_mcwm(const ParamVector& params, const ObservationSet& obs, std::span<const Mesh> meshes) {
  std::vector<double> terms;
  terms.reserve(meshes.size());
  for (const Mesh& mesh : meshes) terms.push_back(log_likelihood_fem(params, obs, mesh));
  return log_mean_exp(terms);
}

double log_likelihood_mcwm(const ParamVector& params, const ObservationSet& obs, const Mesh& reference_mesh,
                           const PerturbationScheme& scheme, std::size_t samples, std::uint64_t key) {
  if (samples == 0) throw std::invalid_argument("log_likelihood_mcwm: need at least one mesh");
  std::vector<double> terms;
  terms.reserve(samples);
  for (std::size_t j = 0; j < samples; ++j) {
    Stream stream(key, {j});
    const auto mesh = std::make_shared<const Mesh>(perturb(reference_mesh, scheme, stream));
    const FemSolution sol = assemble_and_solve(mesh, params);
    terms.push_back(gaussian_log_likelihood(sol.evaluate(obs.locations), obs));
  }
  return log_mean_exp(terms);
}

void LikelihoodSpec::validate() const {
  if (M == 0) throw std::invalid_argument("LikelihoodSpec: M must be at least 1");
  if (variant != LikelihoodVariant::deterministic_fem && !scheme)
    throw std::invalid_argument("LikelihoodSpec: random-mesh variants need a perturbation scheme");
}

std::string to_string(LikelihoodVariant variant) {
  switch (variant) {
    case LikelihoodVariant::deterministic_fem: return "deterministic_fem";
    case LikelihoodVariant::mcwm: return "mcwm";
    case LikelihoodVariant::mwmc: return "mwmc";
  }
  return "?";
}

namespace {

ParamVector to_params(std::span<const double> state) {
  if (state.size() != kModes) throw std::invalid_argument("posterior: state must have 4 entries");
  std::array<double, kModes> xi{};
  std::copy(state.begin(), state.end(), xi.begin());
  return ParamVector(xi);
}

bool finite_state(std::span<const double> state) {
  return std::all_of(state.begin(), state.end(), [](double v) { return std::isfinite(v); });
}

LogDensity fem_posterior(const ObservationSet& obs, const Mesh& mesh) {
  return [&obs, &mesh](std::span<const double> state, std::uint64_t) {
    if (!finite_state(state)) return -std::numeric_limits<double>::infinity();
    const ParamVector p = to_params(state);
    return log_prior(p) + log_likelihood_fem(p, obs, mesh);
  };
}

}  // namespace

PosteriorSamples run_mwmc(const ObservationSet& obs, const Mesh& reference_mesh, const PerturbationScheme& scheme,
                          std::size_t M, const ChainConfig& config, std::size_t threads) {
  if (M == 0) throw std::invalid_argument("run_mwmc: M must be at least 1");
  config.validate();
  std::vector<Mesh> meshes;
  meshes.reserve(M);
  for (std::size_t j = 0; j < M; ++j) {
    Stream stream(config.seed, {kMwmcMeshStream, j});
    meshes.push_back(perturb(reference_mesh, scheme, stream));
  }
  std::vector<ChainDraws> chains(M);
  parallel_for(M, threads, [&](std::size_t j) {
    ChainConfig cfg = config;
    cfg.seed = derive_key(config.seed, {kMwmcChainStream, j});
    chains[j] = run_rwm(fem_posterior(obs, meshes[j]), cfg);
  });

  PosteriorSamples out;
  out.config = config;
  out.likelihood = {LikelihoodVariant::mwmc, M, scheme, false};
  out.chain.dim = chains.front().dim;
  double accept = 0.0;
  double scale = 0.0;
  for (const auto& c : chains) {
    out.chain.draws.insert(out.chain.draws.end(), c.draws.begin(), c.draws.end());
    accept += c.acceptance_ratio;
    scale += c.proposal_scale_final;
  }
  out.chain.acceptance_ratio = accept / static_cast<double>(M);
  out.chain.proposal_scale_final = scale / static_cast<double>(M);
  return out;
}

PosteriorSamples sample_posterior(const ObservationSet& obs, const Mesh& reference_mesh, const LikelihoodSpec& spec,
                                  const ChainConfig& config, std::size_t threads) {
  spec.validate();
  switch (spec.variant) {
    case LikelihoodVariant::deterministic_fem: {
      PosteriorSamples out{run_rwm(fem_posterior(obs, reference_mesh), config), config, spec};
      return out;
    }
    case LikelihoodVariant::mcwm: {
      const PerturbationScheme& scheme = *spec.scheme;
      LogDensity target = [&](std::span<const double> state, std::uint64_t key) {
        if (!finite_state(state)) return -std::numeric_limits<double>::infinity();
        const ParamVector p = to_params(state);
        return log_prior(p) + log_likelihood_mcwm(p, obs, reference_mesh, scheme, spec.M, key);
      };
      PosteriorSamples out{run_rwm(target, config, {spec.refresh_current}), config, spec};
      return out;
    }
    case LikelihoodVariant::mwmc:
      return run_mwmc(obs, reference_mesh, *spec.scheme, spec.M, config, threads);
  }
  throw std::logic_error("sample_posterior: unknown variant");
}

void write_draws_csv(const PosteriorSamples& samples, std::ostream& out) {
  const auto& chain = samples.chain;
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < chain.dim; ++k) out << (k ? ",xi" : "xi") << (k + 1);
  out << '\n';
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t k = 0; k < chain.dim; ++k) out << (k ? "," : "") << chain(i, k);
    out << '\n';
  }
  out.precision(old_precision);
}

std::string posterior_sidecar_json(const PosteriorSamples& samples) {
  nlohmann::json j;
  j["seed"] = samples.config.seed;
  j["config"] = {{"burn_in", samples.config.burn_in},
                 {"samples", samples.config.samples},
                 {"initial_state", samples.config.initial_state},
                 {"target_acceptance", samples.config.target_acceptance},
                 {"adapt_interval", samples.config.adapt_interval}};
  nlohmann::json lj;
  lj["variant"] = to_string(samples.likelihood.variant);
  if (samples.likelihood.variant != LikelihoodVariant::deterministic_fem) {
    lj["M"] = samples.likelihood.M;
    lj["refresh_current"] = samples.likelihood.refresh_current;
    if (samples.likelihood.scheme) {
      lj["scheme"] = {{"p", samples.likelihood.scheme->p},
                      {"kind", to_string(samples.likelihood.scheme->kind)},
                      {"fixed_nodes", samples.likelihood.scheme->fixed_nodes}};
    }
  }
  j["likelihood"] = std::move(lj);
  j["acceptance_ratio"] = samples.chain.acceptance_ratio;
  j["proposal_scale_final"] = samples.chain.proposal_scale_final;
  return j.dump(2);
}

void write_observations_csv(const ObservationSet& obs, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "x,y,value\n";
  for (std::size_t j = 0; j < obs.values.size(); ++j)
    out << obs.locations[j].x << ',' << obs.locations[j].y << ',' << obs.values[j] << '\n';
  out.precision(old_precision);
}

}  // namespace rmfem
