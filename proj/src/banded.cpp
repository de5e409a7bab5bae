#include "rmfem/banded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rmfem/errors.hpp"

namespace rmfem {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), data_(n * (bandwidth + 1), 0.0) {}

void BandedMatrix::add(std::size_t i, std::size_t j, double value) {
  if (i < j) std::swap(i, j);
  if (i >= n_ || i - j > bw_) throw std::out_of_range("BandedMatrix::add: entry outside band");
  data_[i * (bw_ + 1) + (i - j)] += value;
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i >= n_) throw std::out_of_range("BandedMatrix: index out of range");
  if (i - j > bw_) return 0.0;
  return data_[i * (bw_ + 1) + (i - j)];
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t lo = i > bw_ ? i - bw_ : 0;
    for (std::size_t j = lo; j < i; ++j) {
      const double a = data_[i * (bw_ + 1) + (i - j)];
      y[i] += a * x[j];
      y[j] += a * x[i];
    }
    y[i] += data_[i * (bw_ + 1)] * x[i];
  }
  return y;
}

BandedCholesky::BandedCholesky(BandedMatrix a) : l_(std::move(a)) {
  const std::size_t n = l_.n_;
  const std::size_t bw = l_.bw_;
  const std::size_t stride = bw + 1;
  auto& d = l_.data_;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * stride + (i - j)]; };

  double min_pivot = HUGE_VAL;
  double max_pivot = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > bw ? i - bw : 0;
    for (std::size_t j = lo; j <= i; ++j) {
      const std::size_t klo = std::max(lo, j > bw ? j - bw : 0);
      double s = at(i, j);
      for (std::size_t k = klo; k < j; ++k) s -= at(i, k) * at(j, k);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) {
          std::ostringstream msg;
          msg << "banded Cholesky: non-positive pivot " << s << " at row " << i << " of " << n
              << " (matrix not positive definite)";
          throw NumericalError(msg.str());
        }
        at(i, i) = std::sqrt(s);
        min_pivot = std::min(min_pivot, s);
        max_pivot = std::max(max_pivot, s);
      } else {
        at(i, j) = s / at(j, j);
      }
    }
  }
  if (n > 0) pivot_ratio_ = min_pivot / max_pivot;
  if (pivot_ratio_ < 1e-14) {
    std::ostringstream msg;
    msg << "banded Cholesky: ill-conditioned system, pivot ratio " << pivot_ratio_;
    throw NumericalError(msg.str());
  }
}

std::vector<double> BandedCholesky::solve(std::span<const double> rhs) const {
  const std::size_t n = l_.n_;
  const std::size_t bw = l_.bw_;
  const std::size_t stride = bw + 1;
  const auto& d = l_.data_;
  if (rhs.size() != n) throw std::invalid_argument("BandedCholesky::solve: size mismatch");
  std::vector<double> x(rhs.begin(), rhs.end());
  // L z = b
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > bw ? i - bw : 0;
    double s = x[i];
    for (std::size_t k = lo; k < i; ++k) s -= d[i * stride + (i - k)] * x[k];
    x[i] = s / d[i * stride];
  }
  // L^T x = z
  for (std::size_t ii = n; ii-- > 0;) {
    x[ii] /= d[ii * stride];
    const std::size_t lo = ii > bw ? ii - bw : 0;
    for (std::size_t k = lo; k < ii; ++k) x[k] -= d[ii * stride + (ii - k)] * x[ii];
  }
  return x;
}

}  // namespace rmfem
