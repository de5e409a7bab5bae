#pragma once

#include <array>

#include "rmfem/field.hpp"

namespace rmfem::shape {

// Bilinear quad on [-1,1]^2, nodes counter-clockwise from (-1,-1).
inline constexpr std::array<double, 4> kQuadXi{-1.0, 1.0, 1.0, -1.0};
inline constexpr std::array<double, 4> kQuadEta{-1.0, -1.0, 1.0, 1.0};

inline std::array<double, 4> quad_values(double xi, double eta) {
  std::array<double, 4> n{};
  for (int a = 0; a < 4; ++a) n[a] = 0.25 * (1.0 + kQuadXi[a] * xi) * (1.0 + kQuadEta[a] * eta);
  return n;
}

struct QuadGradients {
  std::array<double, 4> dxi;
  std::array<double, 4> deta;
};

inline QuadGradients quad_gradients(double xi, double eta) {
  QuadGradients g{};
  for (int a = 0; a < 4; ++a) {
    g.dxi[a] = 0.25 * kQuadXi[a] * (1.0 + kQuadEta[a] * eta);
    g.deta[a] = 0.25 * kQuadEta[a] * (1.0 + kQuadXi[a] * xi);
  }
  return g;
}

/// Jacobian [[dx/dxi, dx/deta], [dy/dxi, dy/deta]] of the bilinear map.
struct Jacobian {
  double xx, xe, yx, ye;
  double det() const { return xx * ye - xe * yx; }
};

inline Jacobian quad_jacobian(const std::array<Point, 4>& v, const QuadGradients& g) {
  Jacobian j{0.0, 0.0, 0.0, 0.0};
  for (int a = 0; a < 4; ++a) {
    j.xx += g.dxi[a] * v[a].x;
    j.xe += g.deta[a] * v[a].x;
    j.yx += g.dxi[a] * v[a].y;
    j.ye += g.deta[a] * v[a].y;
  }
  return j;
}

inline Point quad_map(const std::array<Point, 4>& v, double xi, double eta) {
  const auto n = quad_values(xi, eta);
  Point p;
  for (int a = 0; a < 4; ++a) {
    p.x += n[a] * v[a].x;
    p.y += n[a] * v[a].y;
  }
  return p;
}

}  // namespace rmfem::shape
