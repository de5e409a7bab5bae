#include "rmfem/field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmfem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

void require_finite(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("field: non-finite coordinate");
}

}  // namespace

ParamVector::ParamVector(const std::array<double, kModes>& xi) : xi_(xi) {
  for (double v : xi_)
    if (!std::isfinite(v)) throw std::invalid_argument("ParamVector: non-finite entry");
}

std::array<double, kModes> sine_modes(double x) {
  // sin((k+1)t) = 2 cos(t) sin(kt) - sin((k-1)t)
  const double t = kPi * x;
  const double s1 = std::sin(t);
  const double c2 = 2.0 * std::cos(t);
  std::array<double, kModes> s{};
  double prev = 0.0;
  double cur = s1;
  for (std::size_t k = 0; k < kModes; ++k) {
    s[k] = cur;
    const double next = c2 * cur - prev;
    prev = cur;
    cur = next;
  }
  return s;
}

double eigenvalue(std::size_t k) {
  const double kk = static_cast<double>(k);
  return kk * kk * kPi * kPi;
}

double eigenfunction(std::size_t k, double x) { return kSqrt2 * std::sin(static_cast<double>(k) * kPi * x); }

double log_kappa(const ParamVector& params, double x) {
  require_finite(x);
  const auto s = sine_modes(x);
  double sum = 0.0;
  for (std::size_t k = 0; k < kModes; ++k) sum += params[k] / (static_cast<double>(k + 1) * kPi) * s[k];
  return kSqrt2 * sum;
}

double kappa(const ParamVector& params, double x) { return std::exp(log_kappa(params, x)); }

double kappa(const ParamVector& params, const Point& p) {
  require_finite(p.y);
  return kappa(params, p.x);
}

double forcing(double x) { return std::sin(2.0 * kPi * x); }

double forcing(const Point& p) { return forcing(p.x); }

ParamVector reference_params() { return ParamVector({1.0, 1.0, 0.25, 0.25}); }

}  // namespace rmfem
