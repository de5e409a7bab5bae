#include "rmfem/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rmfem/errors.hpp"
#include "rmfem/parallel.hpp"
#include "rmfem/random.hpp"

namespace rmfem {

namespace {

namespace fs = std::filesystem;

// Stream labels under the experiment seed.
constexpr std::uint64_t kObservationStream = 1;
constexpr std::uint64_t kPosteriorStream = 2;
constexpr std::uint64_t kForwardStream = 3;
constexpr std::uint64_t kInterpolationStream = 4;
constexpr std::uint64_t kEnergyStream = 5;

constexpr std::size_t kInterpolationThinning = 10;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !in.eof()) throw ConfigError("config: cannot parse " + key + " = '" + value + "'");
  if constexpr (std::is_unsigned_v<T>) {
    if (trim(value).starts_with('-')) throw ConfigError("config: " + key + " must be non-negative");
  }
  return out;
}

std::size_t parse_element_count(const std::string& item) {
  std::string text = item;
  if (text.starts_with("1/")) text = text.substr(2);
  return parse_number<std::size_t>("h_list", text);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: " + key + " must be true or false");
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

template <typename T>
std::string join(const std::vector<T>& xs, const std::string& prefix = "") {
  std::ostringstream out;
  out << std::setprecision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? "," : "") << prefix << xs[i];
  return out.str();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t method_label(Method m, Domain d) {
  return static_cast<std::uint64_t>(m) * 2 + static_cast<std::uint64_t>(d);
}

Mesh reference_mesh(Domain domain, std::size_t n) {
  return domain == Domain::one_d ? uniform_mesh_1d(n) : strip_mesh_2d(n);
}

PerturbationScheme scheme_for(Method method, Domain domain, const Mesh& mesh, std::span<const Point> locations) {
  PerturbationScheme scheme;
  scheme.kind = domain == Domain::one_d ? PerturbationKind::uniform_interval_1d : PerturbationKind::disk_2d;
  if (method == Method::rmfem_fixed_obs) scheme.fixed_nodes = fixed_observation_nodes(mesh, locations);
  return scheme;
}

std::string h_label(std::size_t n) { return "1/" + std::to_string(n); }

class Outputs {
 public:
  explicit Outputs(const ExperimentConfig& config) : config_(config) { fs::create_directories(config.out_dir); }

  /// Writes file contents plus a provenance sidecar; extra fields are merged into the sidecar.
  fs::path write(const std::string& name, const std::string& contents, nlohmann::json extra = nlohmann::json::object()) {
    const fs::path path = config_.out_dir / name;
    {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open " + path.string());
      out << contents;
      if (!out) throw std::runtime_error("write failed: " + path.string());
    }
    nlohmann::json side = std::move(extra);
    side["file"] = name;
    side["config_hash"] = config_.hash();
    side["seed"] = config_.seed;
    side["code_version"] = RMFEM_VERSION;
    side["experiment"] = to_string(config_.experiment);
    std::ofstream sidecar(path.string() + ".json", std::ios::binary);
    sidecar << side.dump(2) << '\n';
    written_.push_back(path);
    return path;
  }

  std::vector<fs::path> files() const { return written_; }

 private:
  const ExperimentConfig& config_;
  std::vector<fs::path> written_;
};

std::string summary_csv(const std::vector<RunResult>& results) {
  std::ostringstream out;
  out << std::setprecision(10);
  out << "method,h,param,mean,std,error\n";
  for (const auto& r : results)
    for (const auto& row : r.summary)
      out << r.spec.label() << ',' << h_label(r.spec.n) << ",xi" << row.param << ',' << row.mean << ',' << row.std
          << ',' << row.error << '\n';
  return out.str();
}

std::string observations_csv(const ObservationSet& obs) {
  std::ostringstream out;
  write_observations_csv(obs, out);
  return out.str();
}

void require_1d(const ExperimentConfig& config, const std::string& what) {
  if (config.domain != Domain::one_d) throw ConfigError(what + " supports domain = 1d only");
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::forward_demo: return "forward_demo";
    case Experiment::posterior: return "posterior";
    case Experiment::interpolation: return "interpolation";
    case Experiment::energy: return "energy";
    case Experiment::table: return "table";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::fem: return "fem";
    case Method::rmfem: return "rmfem";
    case Method::rmfem_fixed_obs: return "rmfem_fixed_obs";
  }
  return "?";
}

std::string to_string(Domain d) { return d == Domain::one_d ? "1d" : "2d"; }

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "experiment") {
    for (auto e : {Experiment::forward_demo, Experiment::posterior, Experiment::interpolation, Experiment::energy,
                   Experiment::table}) {
      if (to_string(e) == value || (e == Experiment::forward_demo && value == "forward-demo")) {
        experiment = e;
        return;
      }
    }
    throw ConfigError("config: unknown experiment '" + value + "'");
  }
  if (key == "domain") {
    if (value == "1d") domain = Domain::one_d;
    else if (value == "2d") domain = Domain::two_d;
    else throw ConfigError("config: domain must be 1d or 2d");
    return;
  }
  if (key == "method") {
    for (auto m : {Method::fem, Method::rmfem, Method::rmfem_fixed_obs}) {
      if (to_string(m) == value) {
        method = m;
        return;
      }
    }
    throw ConfigError("config: unknown method '" + value + "'");
  }
  if (key == "h_list") {
    h_list.clear();
    for (const auto& item : split_list(value)) h_list.push_back(parse_element_count(item));
    return;
  }
  if (key == "M") M = parse_number<std::size_t>(key, value);
  else if (key == "burn_in") chain.burn_in = parse_number<std::size_t>(key, value);
  else if (key == "samples") chain.samples = parse_number<std::size_t>(key, value);
  else if (key == "target_acceptance") chain.target_acceptance = parse_number<double>(key, value);
  else if (key == "adapt_interval") chain.adapt_interval = parse_number<std::size_t>(key, value);
  else if (key == "initial_state") {
    chain.initial_state.clear();
    for (const auto& item : split_list(value)) chain.initial_state.push_back(parse_number<double>(key, item));
  } else if (key == "mcwm_refresh") mcwm_refresh = parse_bool(key, value);
  else if (key == "sigma_e") sigma_e = parse_number<double>(key, value);
  else if (key == "obs_x") {
    obs_x.clear();
    for (const auto& item : split_list(value)) obs_x.push_back(parse_number<double>(key, item));
  } else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out_dir") out_dir = value;
  else if (key == "scale") scale = parse_number<double>(key, value);
  else if (key == "threads") threads = parse_number<std::size_t>(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

void ExperimentConfig::validate() const {
  if (h_list.empty()) throw ConfigError("config: h_list must not be empty");
  for (auto n : h_list) {
    if (domain == Domain::one_d && n < 2) throw ConfigError("config: 1D meshes need at least 2 elements");
    if (domain == Domain::two_d && (n == 0 || n % 10 != 0))
      throw ConfigError("config: 2D meshes need a multiple of 10 elements per row");
  }
  if (M == 0) throw ConfigError("config: M must be at least 1");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("config: scale must be positive");
  if (!(sigma_e > 0.0) || !std::isfinite(sigma_e)) throw ConfigError("config: sigma_e must be positive");
  if (threads == 0) throw ConfigError("config: threads must be at least 1");
  if (chain.initial_state.size() != kModes) throw ConfigError("config: initial_state needs 4 entries");
  if (obs_x.empty()) throw ConfigError("config: obs_x must not be empty");
  for (double x : obs_x)
    if (!(x > 0.0 && x < 1.0)) throw ConfigError("config: observation locations must lie inside (0, 1)");
  if (!std::is_sorted(obs_x.begin(), obs_x.end())) throw ConfigError("config: obs_x must be sorted");
  try {
    scaled_chain().validate();
    ParamVector(std::array<double, kModes>{chain.initial_state[0], chain.initial_state[1], chain.initial_state[2],
                                           chain.initial_state[3]});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  const bool needs_fixed = method == Method::rmfem_fixed_obs || experiment == Experiment::table;
  if (needs_fixed) {
    if (method == Method::rmfem_fixed_obs && domain == Domain::two_d)
      throw ConfigError("config: rmfem_fixed_obs is defined for the 1D problem only");
    const auto locs = observation_locations(Domain::one_d, obs_x);
    for (auto n : h_list) {
      const Mesh mesh = uniform_mesh_1d(n);
      try {
        PerturbationScheme scheme;
        scheme.fixed_nodes = fixed_observation_nodes(mesh, locs);
        Stream probe(0);
        (void)perturb(mesh, scheme, probe);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("config: rmfem_fixed_obs needs nodal observations on every mesh (" + h_label(n) +
                          "): " + e.what());
      }
    }
  }
  if (experiment == Experiment::table)
    for (auto n : h_list)
      if (n % 10 != 0) throw ConfigError("config: the table experiment needs 2D-compatible h values (multiples of 1/10)");
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  kv["experiment"] = to_string(experiment);
  kv["domain"] = to_string(domain);
  kv["method"] = to_string(method);
  kv["h_list"] = join(h_list, "1/");
  kv["M"] = std::to_string(M);
  kv["burn_in"] = std::to_string(chain.burn_in);
  kv["samples"] = std::to_string(chain.samples);
  kv["initial_state"] = join(chain.initial_state);
  kv["target_acceptance"] = format_double(chain.target_acceptance);
  kv["adapt_interval"] = std::to_string(chain.adapt_interval);
  kv["mcwm_refresh"] = mcwm_refresh ? "true" : "false";
  kv["sigma_e"] = format_double(sigma_e);
  kv["obs_x"] = join(obs_x);
  kv["seed"] = std::to_string(seed);
  kv["scale"] = format_double(scale);
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  return out.str();
}

std::string ExperimentConfig::hash() const {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canonical());
  return out.str();
}

ChainConfig ExperimentConfig::scaled_chain() const {
  ChainConfig c = chain;
  auto scaled = [&](std::size_t v) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(v) * scale)));
  };
  c.burn_in = scaled(chain.burn_in);
  c.samples = scaled(chain.samples);
  return c;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    config.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return parse_config(in);
}

std::vector<Point> config_locations(const ExperimentConfig& config, Domain domain) {
  return observation_locations(domain, config.obs_x);
}

ObservationSet config_observations(const ExperimentConfig& config, Domain domain) {
  return synthesize_observations(domain, derive_key(config.seed, {kObservationStream}), config.sigma_e, config.obs_x);
}

std::string RunSpec::label() const {
  return to_string(method) + "_" + to_string(domain);
}

RunResult run_posterior(const ExperimentConfig& config, const RunSpec& run, const ObservationSet& obs_1d) {
  const ObservationSet obs = relocate(obs_1d, run.domain);
  const Mesh mesh = reference_mesh(run.domain, run.n);
  LikelihoodSpec spec;
  spec.M = config.M;
  spec.refresh_current = config.mcwm_refresh;
  if (run.method != Method::fem) {
    spec.variant = LikelihoodVariant::mcwm;
    spec.scheme = scheme_for(run.method, run.domain, mesh, obs.locations);
  }
  ChainConfig chain = config.scaled_chain();
  chain.seed = derive_key(config.seed, {kPosteriorStream, method_label(run.method, run.domain), run.n});
  RunResult result{run, sample_posterior(obs, mesh, spec, chain), {}};
  result.summary = posterior_summary(result.samples, reference_params());
  return result;
}

namespace {

std::vector<fs::path> write_runs(Outputs& outputs, const std::vector<RunResult>& results,
                                 const std::string& summary_name) {
  for (const auto& r : results) {
    std::ostringstream draws;
    write_draws_csv(r.samples, draws);
    const auto sidecar = nlohmann::json::parse(posterior_sidecar_json(r.samples));
    outputs.write("draws_" + r.spec.label() + "_n" + std::to_string(r.spec.n) + ".csv", draws.str(), sidecar);
  }
  outputs.write(summary_name, summary_csv(results));
  return outputs.files();
}

}  // namespace

std::vector<fs::path> cmd_posterior(const ExperimentConfig& config) {
  config.validate();
  Outputs outputs(config);
  const ObservationSet obs = config_observations(config, Domain::one_d);
  outputs.write("observations.csv", observations_csv(relocate(obs, config.domain)));
  std::vector<RunSpec> runs;
  for (auto n : config.h_list) runs.push_back({config.method, config.domain, n});
  std::vector<RunResult> results(runs.size());
  parallel_for(runs.size(), config.threads, [&](std::size_t i) { results[i] = run_posterior(config, runs[i], obs); });
  return write_runs(outputs, results, "posterior_summary.csv");
}

std::vector<fs::path> cmd_table(const ExperimentConfig& config) {
  config.validate();
  Outputs outputs(config);
  const ObservationSet obs = config_observations(config, Domain::one_d);
  outputs.write("observations.csv", observations_csv(obs));
  std::vector<RunSpec> runs;
  const std::vector<std::pair<Method, Domain>> columns{{Method::fem, Domain::one_d},
                                                       {Method::rmfem, Domain::one_d},
                                                       {Method::rmfem_fixed_obs, Domain::one_d},
                                                       {Method::rmfem, Domain::two_d}};
  for (const auto& [method, domain] : columns)
    for (auto n : config.h_list) runs.push_back({method, domain, n});
  // Longest runs first so the pool stays busy.
  std::vector<std::size_t> order(runs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto cost = [&](const RunSpec& r) {
      const double per = r.method == Method::fem ? 1.0 : 2.0 * static_cast<double>(config.M);
      return per * static_cast<double>(r.n) * (r.domain == Domain::two_d ? 4.0 * static_cast<double>(r.n) / 10.0 : 1.0);
    };
    return cost(runs[a]) > cost(runs[b]);
  });
  std::vector<RunResult> results(runs.size());
  parallel_for(runs.size(), config.threads, [&](std::size_t i) {
    const std::size_t r = order[i];
    results[r] = run_posterior(config, runs[r], obs);
  });
  return write_runs(outputs, results, "table.csv");
}

std::vector<fs::path> cmd_forward_demo(const ExperimentConfig& config) {
  config.validate();
  require_1d(config, "forward-demo");
  Outputs outputs(config);
  const ObservationSet obs = config_observations(config, Domain::one_d);
  outputs.write("observations.csv", observations_csv(obs));
  const ParamVector truth = reference_params();
  const FemSolution reference = assemble_and_solve(uniform_mesh_1d(kReferenceElements), truth);

  for (auto n : config.h_list) {
    const Mesh mesh = uniform_mesh_1d(n);
    std::vector<std::pair<std::string, FemSolution>> curves;
    curves.emplace_back("reference", reference);
    curves.emplace_back("fem", assemble_and_solve(mesh, truth));
    PerturbationScheme scheme = scheme_for(config.method, Domain::one_d, mesh, obs.locations);
    for (std::size_t s = 0; s < kForwardDemoSamples; ++s) {
      Stream stream(config.seed, {kForwardStream, n, s});
      std::ostringstream name;
      name << "sample_" << std::setw(3) << std::setfill('0') << s;
      curves.emplace_back(name.str(), assemble_and_solve(perturb(mesh, scheme, stream), truth));
    }
    std::ostringstream out;
    out << std::setprecision(17) << "curve,x,u\n";
    for (const auto& [name, sol] : curves)
      for (std::size_t i = 0; i < sol.mesh().num_nodes(); ++i)
        out << name << ',' << sol.mesh().node(i).x << ',' << sol.nodal_values()[i] << '\n';
    outputs.write("forward_n" + std::to_string(n) + ".csv", out.str(),
                  {{"curves", curves.size()}, {"h", h_label(n)}});
  }
  return outputs.files();
}

std::vector<fs::path> cmd_interpolation(const ExperimentConfig& config) {
  config.validate();
  require_1d(config, "interpolation");
  Outputs outputs(config);
  const ObservationSet obs = config_observations(config, Domain::one_d);
  outputs.write("observations.csv", observations_csv(obs));
  const ParamVector truth = reference_params();
  const FemSolution reference = assemble_and_solve(uniform_mesh_1d(kReferenceElements), truth);

  std::ostringstream report_csv;
  report_csv << std::setprecision(12) << "h,l2,nodal,zeta,eta\n";
  for (auto n : config.h_list) {
    const Mesh mesh = uniform_mesh_1d(n);
    const ErrorReport rep = error_report(assemble_and_solve(mesh, truth), reference);
    report_csv << h_label(n) << ',' << rep.l2_error << ',' << rep.nodal_error << ',' << rep.zeta << ',' << rep.eta
               << '\n';
  }
  outputs.write("interpolation_errors.csv", report_csv.str());

  for (auto n : config.h_list) {
    const Mesh unperturbed = uniform_mesh_1d(n);
    PerturbationScheme scheme = scheme_for(config.method, Domain::one_d, unperturbed, obs.locations);
    Stream stream(config.seed, {kInterpolationStream, n});
    const Mesh perturbed = perturb(unperturbed, scheme, stream);

    std::ostringstream curves;
    curves << std::setprecision(17) << "mesh,x,u_true_params,u_posterior_mean\n";
    std::ostringstream at_obs;
    at_obs << std::setprecision(17) << "mesh,x,y_obs,u_reference,u_true_params,u_posterior_mean\n";
    for (const auto& [label, mesh] : {std::pair<std::string, const Mesh*>{"unperturbed", &unperturbed},
                                      std::pair<std::string, const Mesh*>{"perturbed", &perturbed}}) {
      ChainConfig chain = config.scaled_chain();
      chain.seed = derive_key(config.seed, {kInterpolationStream, n, label == "perturbed" ? 1u : 0u});
      const PosteriorSamples post = sample_posterior(obs, *mesh, LikelihoodSpec{}, chain);
      const auto shared = std::make_shared<const Mesh>(*mesh);
      const FemSolution at_truth = assemble_and_solve(shared, truth);
      std::vector<double> mean(mesh->num_nodes(), 0.0);
      std::size_t used = 0;
      for (std::size_t i = 0; i < post.size(); i += kInterpolationThinning) {
        const ParamVector p({post.chain(i, 0), post.chain(i, 1), post.chain(i, 2), post.chain(i, 3)});
        const FemSolution sol = assemble_and_solve(shared, p);
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += sol.nodal_values()[k];
        ++used;
      }
      for (double& v : mean) v /= static_cast<double>(used);
      for (std::size_t k = 0; k < mean.size(); ++k)
        curves << label << ',' << mesh->node(k).x << ',' << at_truth.nodal_values()[k] << ',' << mean[k] << '\n';
      const FemSolution mean_field(shared, truth, mean, at_truth.free_index(), at_truth.force_vector());
      for (std::size_t j = 0; j < obs.locations.size(); ++j) {
        const Point& x = obs.locations[j];
        at_obs << label << ',' << x.x << ',' << obs.values[j] << ',' << reference.evaluate(x) << ','
               << at_truth.evaluate(x) << ',' << mean_field.evaluate(x) << '\n';
      }
    }
    outputs.write("interpolation_curves_n" + std::to_string(n) + ".csv", curves.str(), {{"h", h_label(n)}});
    outputs.write("interpolation_obs_n" + std::to_string(n) + ".csv", at_obs.str(), {{"h", h_label(n)}});
  }
  return outputs.files();
}

std::vector<fs::path> cmd_energy(const ExperimentConfig& config) {
  config.validate();
  require_1d(config, "energy");
  Outputs outputs(config);
  const ParamVector truth = reference_params();
  std::vector<EnergyDistribution> dists(config.h_list.size());
  parallel_for(dists.size(), config.threads, [&](std::size_t i) {
    const std::size_t n = config.h_list[i];
    const Mesh mesh = uniform_mesh_1d(n);
    const auto locs = config_locations(config, Domain::one_d);
    const PerturbationScheme scheme = scheme_for(config.method, Domain::one_d, mesh, locs);
    dists[i] = energy_distribution(mesh, scheme, truth, kEnergySamples, derive_key(config.seed, {kEnergyStream, n}));
  });

  std::ostringstream summary;
  summary << std::setprecision(17) << "h,n_samples,mean,median,p95,max,unperturbed,reference\n";
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const std::size_t n = config.h_list[i];
    const auto& d = dists[i];
    std::ostringstream out;
    out << std::setprecision(17) << "h,sample_id,energy\n";
    for (std::size_t s = 0; s < d.samples.size(); ++s) out << h_label(n) << ',' << s << ',' << d.samples[s] << '\n';
    outputs.write("energy_n" + std::to_string(n) + ".csv", out.str(), {{"h", h_label(n)}});
    double mean = 0.0;
    for (double e : d.samples) mean += e;
    mean /= static_cast<double>(d.samples.size());
    summary << h_label(n) << ',' << d.samples.size() << ',' << mean << ',' << quantile(d.samples, 0.5) << ','
            << quantile(d.samples, 0.95) << ',' << *std::max_element(d.samples.begin(), d.samples.end()) << ','
            << d.unperturbed << ',' << d.reference << '\n';
  }
  outputs.write("energy_summary.csv", summary.str());
  return outputs.files();
}

std::vector<fs::path> run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::forward_demo: return cmd_forward_demo(config);
    case Experiment::posterior: return cmd_posterior(config);
    case Experiment::interpolation: return cmd_interpolation(config);
    case Experiment::energy: return cmd_energy(config);
    case Experiment::table: return cmd_table(config);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace rmfem
