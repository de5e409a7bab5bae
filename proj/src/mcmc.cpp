#include "rmfem/mcmc.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rmfem/errors.hpp"
#include "rmfem/random.hpp"

namespace rmfem {

namespace {

// Stream labels under the chain seed.
constexpr std::uint64_t kProposalStream = 0;
constexpr std::uint64_t kTargetStream = 1;
constexpr std::uint64_t kProposedRole = 0;
constexpr std::uint64_t kCurrentRole = 1;

}  // namespace

void ChainConfig::validate() const {
  if (burn_in == 0 || samples == 0) throw std::invalid_argument("ChainConfig: burn_in and samples must be positive");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
    throw std::invalid_argument("ChainConfig: target_acceptance must lie in (0, 1)");
  if (adapt_interval == 0) throw std::invalid_argument("ChainConfig: adapt_interval must be positive");
  if (initial_state.empty()) throw std::invalid_argument("ChainConfig: empty initial state");
}

std::vector<double> ChainDraws::column(std::size_t k) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(i, k);
  return out;
}

bool metropolis_accept(double log_ratio, double u) {
  if (std::isnan(log_ratio)) return false;
  return std::log(u) < log_ratio;
}

ChainDraws run_rwm(const LogDensity& log_post, const ChainConfig& config, RwmOptions options) {
  config.validate();
  const std::size_t dim = config.initial_state.size();
  Stream rng(config.seed, {kProposalStream});
  auto target_key = [&](std::size_t step, std::uint64_t role) {
    return derive_key(config.seed, {kTargetStream, step, role});
  };

  std::vector<double> current = config.initial_state;
  double current_lp = log_post(current, target_key(0, kCurrentRole));
  if (!std::isfinite(current_lp)) {
    std::ostringstream msg;
    msg << "run_rwm: log density not finite at the initial state (" << current_lp << ")";
    throw NumericalError(msg.str());
  }

  ChainDraws out;
  out.dim = dim;
  out.draws.reserve(config.samples * dim);
  double scale = 1.0;
  std::size_t window_accepts = 0;
  std::size_t window_steps = 0;
  std::size_t sample_accepts = 0;
  std::vector<double> proposal(dim);

  const std::size_t total = config.burn_in + config.samples;
  for (std::size_t step = 0; step < total; ++step) {
    for (std::size_t k = 0; k < dim; ++k) proposal[k] = current[k] + scale * rng.normal();
    if (options.refresh_current && step > 0) current_lp = log_post(current, target_key(step, kCurrentRole));
    const double proposal_lp = log_post(proposal, target_key(step, kProposedRole));
    // NaN/-inf at the current state (possible after a refresh) means any finite proposal wins.
    double log_ratio = proposal_lp - current_lp;
    if (std::isfinite(proposal_lp) && !std::isfinite(current_lp)) log_ratio = std::numeric_limits<double>::infinity();
    const bool accept = metropolis_accept(log_ratio, rng.uniform());
    if (accept) {
      current.swap(proposal);
      current_lp = proposal_lp;
    }

    if (step < config.burn_in) {
      window_accepts += accept ? 1 : 0;
      if (++window_steps == config.adapt_interval) {
        const double rate = static_cast<double>(window_accepts) / static_cast<double>(window_steps);
        scale *= std::exp(rate - config.target_acceptance);
        window_accepts = 0;
        window_steps = 0;
      }
    } else {
      sample_accepts += accept ? 1 : 0;
      out.draws.insert(out.draws.end(), current.begin(), current.end());
    }
  }
  out.acceptance_ratio = static_cast<double>(sample_accepts) / static_cast<double>(config.samples);
  out.proposal_scale_final = scale;
  return out;
}

double batch_means_standard_error(std::span<const double> xs, std::size_t batches) {
  const std::size_t n = xs.size();
  if (batches < 2 || n < 2 * batches) throw std::invalid_argument("batch_means_standard_error: too few samples");
  const std::size_t len = n / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b)
    means[b] = std::accumulate(xs.begin() + b * len, xs.begin() + (b + 1) * len, 0.0) / static_cast<double>(len);
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  const double var_batch = ss / static_cast<double>(batches - 1);
  return std::sqrt(var_batch / static_cast<double>(batches));
}

}  // namespace rmfem
