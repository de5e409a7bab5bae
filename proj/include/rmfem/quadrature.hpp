#pragma once

#include <cstddef>
#include <vector>

namespace rmfem {

/// Gauss-Legendre rule on the reference interval [-1, 1].
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

/// n-point Gauss-Legendre rule, exact for polynomials of degree 2n-1.
/// Rules are computed once per n and cached.
const GaussRule& gauss_legendre(std::size_t n);

/// Integrates f over [a, b] with an n-point rule.
template <typename F>
double integrate(F&& f, double a, double b, std::size_t n) {
  const auto& rule = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * f(mid + half * rule.points[q]);
  return half * sum;
}

}  // namespace rmfem
