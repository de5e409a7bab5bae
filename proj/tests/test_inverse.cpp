#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "rmfem/analysis.hpp"
#include "rmfem/inverse.hpp"

using namespace rmfem;

namespace {

constexpr double kPi = std::numbers::pi;

ChainConfig short_chain(std::uint64_t seed, std::size_t burn_in = 10000, std::size_t samples = 4000) {
  ChainConfig c;
  c.seed = seed;
  c.burn_in = burn_in;
  c.samples = samples;
  return c;
}

}  // namespace

TEST_CASE("observation locations") {
  const auto one = observation_locations(Domain::one_d);
  REQUIRE(one.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(one[i].x == doctest::Approx((i + 1) / 5.0));
    CHECK(one[i].y == 0.0);
  }
  const auto two = observation_locations(Domain::two_d);
  for (const auto& p : two) CHECK(p.y == 0.05);
}

TEST_CASE("synthetic observations") {
  const FemSolution ref = assemble_and_solve(uniform_mesh_1d(1000), reference_params());
  const ObservationSet exact = synthesize_observations(Domain::one_d, 1, 0.0);
  CHECK(exact.values[0] == ref.evaluate(Point{0.2, 0.0}));

  const ObservationSet noisy = synthesize_observations(Domain::one_d, 1);
  CHECK(noisy.sigma_e == 1e-5);
  CHECK(noisy.generation_seed == 1);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(noisy.values[j] - exact.values[j]) < 5e-5);
    CHECK(noisy.values[j] != exact.values[j]);
  }
  const ObservationSet two = synthesize_observations(Domain::two_d, 1);
  CHECK(two.values == noisy.values);
  CHECK(synthesize_observations(Domain::one_d, 1).values == noisy.values);
  CHECK(synthesize_observations(Domain::one_d, 2).values != noisy.values);
  CHECK(relocate(two, Domain::one_d).locations[2].y == 0.0);
}

TEST_CASE("prior") {
  CHECK(log_prior(ParamVector{}) == doctest::Approx(-2 * std::log(2 * kPi)));
  CHECK(log_prior(ParamVector({1, 0, 0, 0})) == doctest::Approx(-0.5 - 2 * std::log(2 * kPi)));
  const ParamVector a({0.3, -1, 2, 0.5});
  const ParamVector b({-0.3, 1, -2, -0.5});
  CHECK(log_prior(a) == log_prior(b));
}

TEST_CASE("Gaussian likelihood constants") {
  ObservationSet obs;
  obs.locations = observation_locations(Domain::one_d);
  obs.values = {1, 2, 3, 4};
  const std::vector<double> exact{1, 2, 3, 4};
  const double top = gaussian_log_likelihood(exact, obs);
  CHECK(top == doctest::Approx(-4 * std::log(1e-5 * std::sqrt(2 * kPi))).epsilon(1e-14));
  CHECK(top == doctest::Approx(42.37594).epsilon(1e-6));
  const std::vector<double> off{1, 2 + 1e-5, 3, 4};
  CHECK(gaussian_log_likelihood(off, obs) == doctest::Approx(top - 0.5));
  CHECK_THROWS(gaussian_log_likelihood(std::vector<double>{1.0}, obs));
}

TEST_CASE("likelihood at the truth on the reference mesh is a chi-square draw") {
  // 99% central band of chi-square with 4 degrees of freedom
  const double lo = 0.2070, hi = 14.8603;
  const Mesh ref = uniform_mesh_1d(1000);
  const double top = -4 * std::log(1e-5 * std::sqrt(2 * kPi));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ObservationSet obs = synthesize_observations(Domain::one_d, seed);
    const double chi2 = 2 * (top - log_likelihood_fem(reference_params(), obs, ref));
    CHECK(chi2 > lo);
    CHECK(chi2 < hi);
  }
}

TEST_CASE("log-mean-exp") {
  CHECK(log_mean_exp(std::vector<double>{3.0, 3.0, 3.0}) == doctest::Approx(3.0));
  CHECK(log_mean_exp(std::vector<double>{1000.0, 1000.0 + std::log(3.0)}) == doctest::Approx(1000.0 + std::log(2.0)));
  CHECK(log_mean_exp(std::vector<double>{-2000.0, 0.0}) == doctest::Approx(-std::log(2.0)));
  CHECK_THROWS(log_mean_exp(std::vector<double>{}));
}

TEST_CASE("mesh-averaged likelihood special cases") {
  const ObservationSet obs = synthesize_observations(Domain::one_d, 4);
  const Mesh ref = uniform_mesh_1d(10);
  const std::vector<Point> zero(ref.num_nodes());
  const std::vector<Mesh> one{apply_displacements(ref, PerturbationScheme{}, zero)};
  const ParamVector xi = reference_params();
  CHECK(log_likelihood_mcwm(xi, obs, one) == doctest::Approx(log_likelihood_fem(xi, obs, ref)).epsilon(1e-14));
  const std::vector<Mesh> same(5, ref);
  CHECK(log_likelihood_mcwm(xi, obs, same) == doctest::Approx(log_likelihood_fem(xi, obs, ref)).epsilon(1e-14));

  // the keyed variant draws mesh j from (key, j)
  std::vector<Mesh> drawn;
  for (std::size_t j = 0; j < 3; ++j) {
    Stream s(55, {j});
    drawn.push_back(perturb(ref, PerturbationScheme{}, s));
  }
  CHECK(log_likelihood_mcwm(xi, obs, ref, PerturbationScheme{}, 3, 55) == log_likelihood_mcwm(xi, obs, drawn));
  CHECK_THROWS(log_likelihood_mcwm(xi, obs, ref, PerturbationScheme{}, 0, 55));
}

TEST_CASE("mesh-averaged likelihood variance falls like 1/M") {
  const ObservationSet obs = synthesize_observations(Domain::one_d, 4);
  const Mesh ref = uniform_mesh_1d(40);
  const ParamVector xi = reference_params();
  const double shift = log_likelihood_fem(xi, obs, ref);
  std::vector<double> log_m, log_var;
  for (std::size_t m : {10u, 100u, 1000u}) {
    const std::size_t reps = 200;
    std::vector<double> est(reps);
    for (std::size_t r = 0; r < reps; ++r)
      est[r] = std::exp(log_likelihood_mcwm(xi, obs, ref, PerturbationScheme{}, m, derive_key(9, {m, r})) - shift);
    double mean = 0.0, var = 0.0;
    for (double e : est) mean += e / reps;
    for (double e : est) var += (e - mean) * (e - mean) / (reps - 1);
    log_m.push_back(std::log(static_cast<double>(m)));
    log_var.push_back(std::log(var));
  }
  const double slope = (log_var[2] - log_var[0]) / (log_m[2] - log_m[0]);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("likelihood spec validation") {
  LikelihoodSpec s;
  CHECK_NOTHROW(s.validate());
  s.variant = LikelihoodVariant::mcwm;
  CHECK_THROWS(s.validate());
  s.scheme = PerturbationScheme{};
  CHECK_NOTHROW(s.validate());
  s.M = 0;
  CHECK_THROWS(s.validate());
}

TEST_CASE("FEM posterior width does not depend on h") {
  const ObservationSet obs = synthesize_observations(Domain::one_d, 8);
  std::vector<std::vector<SummaryRow>> rows;
  for (std::size_t n : {10u, 20u, 40u}) {
    const auto post = sample_posterior(obs, uniform_mesh_1d(n), LikelihoodSpec{}, short_chain(n, 10000, 10000));
    CHECK(post.size() == 10000);
    CHECK(post.chain.acceptance_ratio > 0.1);
    CHECK(post.chain.acceptance_ratio < 0.6);
    rows.push_back(posterior_summary(post, reference_params()));
  }
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 1; i < 3; ++i) CHECK(rows[i][k].std == doctest::Approx(rows[0][k].std).epsilon(0.35));
}

TEST_CASE("posterior sampling is reproducible") {
  const ObservationSet obs = synthesize_observations(Domain::one_d, 8);
  LikelihoodSpec spec;
  spec.variant = LikelihoodVariant::mcwm;
  spec.scheme = PerturbationScheme{};
  const auto a = sample_posterior(obs, uniform_mesh_1d(10), spec, short_chain(1, 300, 200));
  const auto b = sample_posterior(obs, uniform_mesh_1d(10), spec, short_chain(1, 300, 200));
  CHECK(a.chain.draws == b.chain.draws);
}

TEST_CASE("Metropolis within Monte Carlo") {
  const ObservationSet obs = synthesize_observations(Domain::one_d, 8);
  LikelihoodSpec spec;
  spec.variant = LikelihoodVariant::mwmc;
  spec.scheme = PerturbationScheme{};
  const auto pooled = sample_posterior(obs, uniform_mesh_1d(10), spec, short_chain(6, 10000, 2000), 2);
  CHECK(pooled.size() == 10 * 2000);
  CHECK(pooled.likelihood.variant == LikelihoodVariant::mwmc);
  // each mesh yields a narrow posterior at a different location: some pair of
  // neighbouring chain means is separated by many within-chain widths
  std::vector<double> means;
  double widest = 0.0;
  for (std::size_t j = 0; j < 10; ++j) {
    double m = 0.0, v = 0.0;
    for (std::size_t i = 0; i < 2000; ++i) m += pooled.chain(j * 2000 + i, 0) / 2000;
    for (std::size_t i = 0; i < 2000; ++i) v += std::pow(pooled.chain(j * 2000 + i, 0) - m, 2) / 1999;
    means.push_back(m);
    widest = std::max(widest, std::sqrt(v));
  }
  std::sort(means.begin(), means.end());
  double gap = 0.0;
  for (std::size_t j = 1; j < means.size(); ++j) gap = std::max(gap, means[j] - means[j - 1]);
  CHECK(gap > 6 * widest);

  // threads do not change the draws
  const auto serial = sample_posterior(obs, uniform_mesh_1d(10), spec, short_chain(6, 10000, 2000), 1);
  CHECK(serial.chain.draws == pooled.chain.draws);
}

TEST_CASE("draw CSV and sidecar") {
  const ObservationSet obs = synthesize_observations(Domain::one_d, 8);
  const auto post = sample_posterior(obs, uniform_mesh_1d(10), LikelihoodSpec{}, short_chain(2, 200, 10));
  std::ostringstream csv;
  write_draws_csv(post, csv);
  std::istringstream lines(csv.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "xi1,xi2,xi3,xi4");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 10);

  const auto j = nlohmann::json::parse(posterior_sidecar_json(post));
  CHECK(j.at("seed") == 2);
  CHECK(j.at("likelihood").at("variant") == "deterministic_fem");
  CHECK(j.contains("acceptance_ratio"));
  CHECK(j.contains("proposal_scale_final"));
  CHECK(j.at("config").at("samples") == 10);
}
