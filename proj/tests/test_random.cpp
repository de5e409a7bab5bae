#include <doctest.h>

#include <cmath>
#include <set>

#include "rmfem/random.hpp"

using namespace rmfem;

TEST_CASE("streams are reproducible") {
  Stream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("derived keys differ across labels and parents") {
  std::set<std::uint64_t> keys;
  for (std::uint64_t p = 0; p < 20; ++p)
    for (std::uint64_t i = 0; i < 20; ++i)
      for (std::uint64_t j = 0; j < 5; ++j) keys.insert(derive_key(p, {i, j}));
  CHECK(keys.size() == 20 * 20 * 5);
  CHECK(derive_key(1, {2, 3}) != derive_key(1, {3, 2}));
  CHECK(derive_key(1, {0}) != derive_key(1, {0, 0}));
}

TEST_CASE("uniform moments") {
  Stream s(7);
  const int n = 200000;
  double m = 0.0, v = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    m += u;
    v += u * u;
  }
  m /= n;
  v = v / n - m * m;
  CHECK(std::abs(m - 0.5) < 4 * std::sqrt(1.0 / 12.0 / n));
  CHECK(v == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("normal moments") {
  Stream s(9);
  const int n = 200000;
  double m = 0.0, v = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    m += z;
    v += z * z;
  }
  m /= n;
  v = v / n - m * m;
  CHECK(std::abs(m) < 4.0 / std::sqrt(n));
  CHECK(v == doctest::Approx(1.0).epsilon(0.02));
}
