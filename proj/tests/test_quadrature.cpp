#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rmfem/quadrature.hpp"

using namespace rmfem;

TEST_CASE("weights sum to the interval length and nodes are symmetric") {
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto& rule = gauss_legendre(n);
    REQUIRE(rule.points.size() == n);
    CHECK(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    for (std::size_t i = 0; i < n; ++i) CHECK(rule.points[i] == doctest::Approx(-rule.points[n - 1 - i]).scale(1.0));
  }
}

TEST_CASE("n-point rule integrates degree 2n-1 exactly") {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t d = 0; d <= 2 * n - 1; ++d) {
      const double exact = (std::pow(1.5, d + 1) - std::pow(-0.5, d + 1)) / static_cast<double>(d + 1);
      const double got = integrate([d](double x) { return std::pow(x, static_cast<double>(d)); }, -0.5, 1.5, n);
      CHECK(got == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("four-point rule is not exact for degree eight") {
  const double exact = 2.0 / 9.0;
  const double got = integrate([](double x) { return std::pow(x, 8); }, -1.0, 1.0, 4);
  CHECK(std::abs(got - exact) > 1e-4);
}

TEST_CASE("known four-point nodes") {
  const auto& rule = gauss_legendre(4);
  const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  CHECK(rule.points[0] == doctest::Approx(-b).epsilon(1e-15));
  CHECK(rule.points[1] == doctest::Approx(-a).epsilon(1e-15));
  CHECK(rule.weights[0] == doctest::Approx((18.0 - std::sqrt(30.0)) / 36.0).epsilon(1e-15));
  CHECK(rule.weights[1] == doctest::Approx((18.0 + std::sqrt(30.0)) / 36.0).epsilon(1e-15));
}

TEST_CASE("zero points is rejected") { CHECK_THROWS(gauss_legendre(0)); }
