#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rmfem {

/// Symmetric banded matrix, lower band stored row-wise:
/// entry (i, j) with 0 <= i - j <= bandwidth lives at i * (bandwidth + 1) + (i - j).
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t bandwidth);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bw_; }

  /// Adds to (i, j); the symmetric partner is implied. Entries outside the band throw.
  void add(std::size_t i, std::size_t j, double value);
  double operator()(std::size_t i, std::size_t j) const;

  /// y = A x
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  friend class BandedCholesky;
  std::size_t n_;
  std::size_t bw_;
  std::vector<double> data_;
};

/// Cholesky factorization A = L L^T restricted to the band.
/// Throws NumericalError if A is not numerically positive definite.
class BandedCholesky {
 public:
  explicit BandedCholesky(BandedMatrix a);

  std::vector<double> solve(std::span<const double> rhs) const;

  /// Squared ratio of smallest to largest pivot of L; a cheap
  /// lower-quality proxy for the reciprocal condition number.
  double pivot_ratio() const { return pivot_ratio_; }

 private:
  BandedMatrix l_;
  double pivot_ratio_ = 1.0;
};

}  // namespace rmfem
