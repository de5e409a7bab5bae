#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace rmfem {

/// Number of sine modes in the log-diffusion expansion.
inline constexpr std::size_t kModes = 4;

/// Physical point. 1D problems leave y at zero.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Coefficients of the log-diffusion expansion. All entries are finite.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(const std::array<double, kModes>& xi);

  double operator[](std::size_t k) const { return xi_[k]; }
  const std::array<double, kModes>& values() const { return xi_; }

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::array<double, kModes> xi_{};
};

using ScalarField = std::function<double(const Point&)>;

/// sin(k pi x) for k = 1..kModes.
std::array<double, kModes> sine_modes(double x);

/// Eigenvalue k^2 pi^2 of -d^2/dx^2 on (0,1), k starting at 1.
double eigenvalue(std::size_t k);

/// Orthonormal eigenfunction sqrt(2) sin(k pi x), k starting at 1.
double eigenfunction(std::size_t k, double x);

/// log kappa(x) = sum_k xi_k / sqrt(lambda_k) * phi_k(x), horizontal coordinate only.
double log_kappa(const ParamVector& params, double x);
double kappa(const ParamVector& params, double x);
double kappa(const ParamVector& params, const Point& p);

/// f(x) = sin(2 pi x)
double forcing(double x);
double forcing(const Point& p);

/// Ground-truth parameters [1, 1, 1/4, 1/4].
ParamVector reference_params();

}  // namespace rmfem
