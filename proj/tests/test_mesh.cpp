#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rmfem/errors.hpp"
#include "rmfem/mesh.hpp"
#include "rmfem/shape.hpp"

using namespace rmfem;

namespace {

PerturbationScheme scheme_2d() {
  PerturbationScheme s;
  s.kind = PerturbationKind::disk_2d;
  return s;
}

// Closed-form CDF of the x-marginal of the uniform disk of radius r.
double semicircle_cdf(double t, double r) {
  if (t <= -r) return 0.0;
  if (t >= r) return 1.0;
  return 0.5 + (t * std::sqrt(r * r - t * t) + r * r * std::asin(t / r)) / (std::numbers::pi * r * r);
}

double min_corner_jacobian(const Mesh& mesh) {
  double worst = 1e300;
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    const auto ids = mesh.element(e);
    std::array<Point, 4> v{mesh.node(ids[0]), mesh.node(ids[1]), mesh.node(ids[2]), mesh.node(ids[3])};
    for (int c = 0; c < 4; ++c) {
      const auto g = shape::quad_gradients(shape::kQuadXi[c], shape::kQuadEta[c]);
      worst = std::min(worst, shape::quad_jacobian(v, g).det());
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("uniform 1D mesh") {
  const Mesh m = uniform_mesh_1d(10);
  REQUIRE(m.num_nodes() == 11);
  CHECK(m.num_elements() == 10);
  CHECK(m.h() == doctest::Approx(0.1));
  for (std::size_t i = 0; i <= 10; ++i) CHECK(m.node(i).x == doctest::Approx(i / 10.0).epsilon(1e-15));
  CHECK(m.node(0).x == 0.0);
  CHECK(m.node(10).x == 1.0);
  CHECK(m.tag(0) == NodeTag::dirichlet);
  CHECK(m.tag(10) == NodeTag::dirichlet);
  CHECK(m.tag(5) == NodeTag::interior);
  CHECK_FALSE(validate(m).has_value());

  const Mesh two = uniform_mesh_1d(2);
  CHECK(two.node(1).x == 0.5);
  CHECK(uniform_mesh_1d(1000).num_nodes() == 1001);
  CHECK_THROWS_AS(uniform_mesh_1d(1), std::invalid_argument);
}

TEST_CASE("strip mesh sizes and tags") {
  CHECK(strip_mesh_2d(10).num_nodes() == 22);
  CHECK(strip_mesh_2d(20).num_nodes() == 63);
  CHECK(strip_mesh_2d(40).num_nodes() == 205);
  CHECK(strip_mesh_2d(40).num_elements() == 160);
  CHECK_THROWS_AS(strip_mesh_2d(15), std::invalid_argument);

  const Mesh m = strip_mesh_2d(20);
  CHECK(m.height() == 0.1);
  for (std::size_t i = 0; i < m.num_nodes(); ++i) {
    const Point p = m.node(i);
    const bool lr = p.x == 0.0 || p.x == 1.0;
    const bool tb = p.y == 0.0 || p.y == 0.1;
    const NodeTag expected = lr && tb ? NodeTag::corner : lr ? NodeTag::dirichlet : tb ? NodeTag::neumann : NodeTag::interior;
    CHECK(m.tag(i) == expected);
  }
  // node (i, j) id and counter-clockwise connectivity
  CHECK(m.node(3 * 3 + 1).x == doctest::Approx(3.0 / 20));
  CHECK(m.node(3 * 3 + 1).y == doctest::Approx(0.05));
  CHECK(min_corner_jacobian(m) == doctest::Approx(0.05 * 0.05 / 4));
}

TEST_CASE("zero displacement leaves the mesh unchanged") {
  const Mesh m = uniform_mesh_1d(10);
  const std::vector<Point> zero(m.num_nodes());
  const Mesh same = apply_displacements(m, PerturbationScheme{}, zero);
  for (std::size_t i = 0; i < m.num_nodes(); ++i) CHECK(same.node(i).x == m.node(i).x);
  CHECK(same.provenance().perturbed);
}

TEST_CASE("1D perturbation stays inside half-cells and keeps ends") {
  const Mesh m = uniform_mesh_1d(10);
  for (std::uint64_t s = 0; s < 2000; ++s) {
    Stream stream(s);
    const Mesh p = perturb(m, PerturbationScheme{}, stream);
    REQUIRE(p.node(0).x == 0.0);
    REQUIRE(p.node(10).x == 1.0);
    for (std::size_t i = 1; i < 10; ++i) REQUIRE(std::abs(p.node(i).x - i / 10.0) < 0.05);
    for (std::size_t e = 0; e < 10; ++e) {
      const double len = p.node(e + 1).x - p.node(e).x;
      REQUIRE(len > 0.0);
      REQUIRE(len < 0.2);
    }
    REQUIRE_FALSE(validate(p).has_value());
  }
}

TEST_CASE("perturbation exponent scales the amplitude") {
  PerturbationScheme s;
  s.p = 2.0;
  CHECK(s.amplitude(0.1) == doctest::Approx(0.005));
  CHECK(scheme_2d().amplitude(0.1) == doctest::Approx(std::sqrt(2.0) / 40));
  const Mesh m = uniform_mesh_1d(10);
  Stream stream(5);
  const Mesh p = perturb(m, s, stream);
  for (std::size_t i = 1; i < 10; ++i) CHECK(std::abs(p.node(i).x - i / 10.0) < 0.005);
}

TEST_CASE("perturbation is mean preserving") {
  const std::size_t draws = 100000;
  SUBCASE("1D interior nodes") {
    const Mesh m = uniform_mesh_1d(10);
    std::vector<double> sum(11, 0.0);
    for (std::size_t d = 0; d < draws; ++d) {
      Stream stream(17, {d});
      const Mesh p = perturb(m, PerturbationScheme{}, stream);
      for (std::size_t i = 0; i < 11; ++i) sum[i] += p.node(i).x;
    }
    const double se = 0.1 * std::sqrt(1.0 / 12.0 / draws);
    for (std::size_t i = 1; i < 10; ++i) CHECK(std::abs(sum[i] / draws - m.node(i).x) < 3 * se);
  }
  SUBCASE("2D interior nodes") {
    const Mesh m = strip_mesh_2d(20);
    std::vector<Point> sum(m.num_nodes());
    for (std::size_t d = 0; d < draws / 4; ++d) {
      Stream stream(23, {d});
      const Mesh p = perturb(m, scheme_2d(), stream);
      for (std::size_t i = 0; i < m.num_nodes(); ++i) {
        sum[i].x += p.node(i).x;
        sum[i].y += p.node(i).y;
      }
    }
    const double r = scheme_2d().amplitude(m.h());
    const double se = (r / 2) / std::sqrt(draws / 4.0);  // per-axis std of the uniform disk is r/2
    for (std::size_t i = 0; i < m.num_nodes(); ++i) {
      if (m.tag(i) != NodeTag::interior) continue;
      CHECK(std::abs(sum[i].x / (draws / 4) - m.node(i).x) < 3 * se);
      CHECK(std::abs(sum[i].y / (draws / 4) - m.node(i).y) < 3 * se);
    }
  }
}

TEST_CASE("2D displacements are bounded and the x-marginal is semicircular") {
  const Mesh m = strip_mesh_2d(10);
  const double r = std::sqrt(2.0) / 40;
  const std::size_t probe = 3 * 2;  // bottom-edge node (3, 0); its x-displacement is the unprojected one
  REQUIRE(m.tag(probe) == NodeTag::neumann);
  const std::size_t draws = 100000;
  std::vector<double> dx;
  dx.reserve(draws);
  for (std::size_t d = 0; d < draws; ++d) {
    Stream stream(31, {d});
    const Mesh p = perturb(m, scheme_2d(), stream);
    for (std::size_t i = 0; i < m.num_nodes(); ++i) {
      const double ex = p.node(i).x - m.node(i).x;
      const double ey = p.node(i).y - m.node(i).y;
      REQUIRE(std::hypot(ex, ey) <= r + 1e-15);
    }
    dx.push_back(p.node(probe).x - m.node(probe).x);
  }
  std::sort(dx.begin(), dx.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double f = semicircle_cdf(dx[i], r);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / draws), std::abs(f - static_cast<double>(i + 1) / draws)});
  }
  // asymptotic Kolmogorov critical value at level 0.01
  CHECK(ks < 1.628 / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("2D perturbation keeps boundaries, corners and positive Jacobians") {
  for (std::size_t nx : {10u, 20u, 40u}) {
    const Mesh m = strip_mesh_2d(nx);
    for (std::uint64_t s = 0; s < 300; ++s) {
      Stream stream(s);
      const Mesh p = perturb(m, scheme_2d(), stream);
      REQUIRE_FALSE(validate(p).has_value());
      REQUIRE(min_corner_jacobian(p) > 0.0);
      for (std::size_t i = 0; i < m.num_nodes(); ++i) {
        switch (m.tag(i)) {
          case NodeTag::corner:
            REQUIRE(p.node(i).x == m.node(i).x);
            REQUIRE(p.node(i).y == m.node(i).y);
            break;
          case NodeTag::dirichlet: REQUIRE(std::abs(p.node(i).x - m.node(i).x) < 1e-12); break;
          case NodeTag::neumann: REQUIRE(std::abs(p.node(i).y - m.node(i).y) < 1e-12); break;
          case NodeTag::interior: break;
        }
      }
    }
  }
}

TEST_CASE("inverted 2D meshes are rejected by validation") {
  const Mesh m = strip_mesh_2d(20);
  std::vector<Point> disp(m.num_nodes());
  const std::size_t interior = 5 * 3 + 1;
  REQUIRE(m.tag(interior) == NodeTag::interior);
  disp[interior] = {0.2, 0.0};
  CHECK_THROWS_AS(apply_displacements(m, scheme_2d(), disp), std::invalid_argument);
}

TEST_CASE("fixed nodes are bitwise unmoved") {
  const Mesh m = uniform_mesh_1d(40);
  PerturbationScheme s;
  s.fixed_nodes = {8, 16, 24, 32};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Stream stream(seed);
    const Mesh p = perturb(m, s, stream);
    for (auto id : s.fixed_nodes) REQUIRE(p.node(id).x == m.node(id).x);
  }
}

TEST_CASE("degenerate schemes are a distinguished error") {
  const Mesh m = uniform_mesh_1d(5);
  const std::vector<Point> obs{{0.2, 0}, {0.4, 0}, {0.6, 0}, {0.8, 0}};
  PerturbationScheme s;
  s.fixed_nodes = fixed_observation_nodes(m, obs);
  Stream stream(1);
  CHECK_THROWS_AS(perturb(m, s, stream), DegenerateSchemeError);
}

TEST_CASE("perturb preconditions") {
  const Mesh m = uniform_mesh_1d(10);
  Stream stream(1);
  const Mesh p = perturb(m, PerturbationScheme{}, stream);
  CHECK_THROWS_AS(perturb(p, PerturbationScheme{}, stream), std::invalid_argument);
  PerturbationScheme bad;
  bad.p = 0.5;
  CHECK_THROWS_AS(perturb(m, bad, stream), std::invalid_argument);
  CHECK_THROWS_AS(perturb(m, scheme_2d(), stream), std::invalid_argument);
  CHECK_THROWS_AS(perturb(strip_mesh_2d(10), PerturbationScheme{}, stream), std::invalid_argument);
}

TEST_CASE("perturb is reproducible and records provenance") {
  const Mesh m = strip_mesh_2d(20);
  Stream a(99), b(99);
  const Mesh pa = perturb(m, scheme_2d(), a);
  const Mesh pb = perturb(m, scheme_2d(), b);
  for (std::size_t i = 0; i < m.num_nodes(); ++i) {
    CHECK(pa.node(i).x == pb.node(i).x);
    CHECK(pa.node(i).y == pb.node(i).y);
  }
  CHECK(pa.provenance().perturbed);
  CHECK(pa.provenance().seed == 99);
  REQUIRE(pa.provenance().scheme.has_value());
  CHECK(pa.provenance().scheme->kind == PerturbationKind::disk_2d);
}

TEST_CASE("observation nodes") {
  const std::vector<Point> obs{{0.2, 0}, {0.4, 0}, {0.6, 0}, {0.8, 0}};
  CHECK(fixed_observation_nodes(uniform_mesh_1d(10), obs) == std::vector<std::size_t>{2, 4, 6, 8});
  const std::vector<Point> one{{0.2, 0}};
  CHECK(fixed_observation_nodes(uniform_mesh_1d(40), one) == std::vector<std::size_t>{8});
  CHECK_THROWS_AS(fixed_observation_nodes(uniform_mesh_1d(7), one), std::invalid_argument);
}

TEST_CASE("JSON round trip") {
  for (const Mesh& m : {uniform_mesh_1d(10), strip_mesh_2d(20)}) {
    Stream stream(4);
    const Mesh p = perturb(m, m.dim() == 1 ? PerturbationScheme{} : scheme_2d(), stream);
    const Mesh back = mesh_from_json(to_json(p));
    CHECK(back.dim() == p.dim());
    CHECK(back.h() == p.h());
    CHECK(back.connectivity() == p.connectivity());
    CHECK(back.tags() == p.tags());
    for (std::size_t i = 0; i < p.num_nodes(); ++i) {
      CHECK(back.node(i).x == p.node(i).x);
      CHECK(back.node(i).y == p.node(i).y);
    }
    CHECK(back.provenance().perturbed);
    CHECK(back.provenance().seed == p.provenance().seed);
    CHECK(to_json(back) == to_json(p));
  }
}
