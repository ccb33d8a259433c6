#ifndef REMEST_LINALG_HPP
#define REMEST_LINALG_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace remest {

/// Square banded matrix with equal lower/upper bandwidth, stored by rows:
/// entry(i,j) lives at row i, slot j-i+bw for |i-j| <= bw.
class BandedMatrix {
public:
  BandedMatrix(std::size_t n, std::size_t bw);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bw_; }

  double at(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double v);

  /// y = A^T x  (used for residual checks of transposed solves).
  std::vector<double> apply_transpose(std::span<const double> x) const;

private:
  friend class BandedLU;
  std::size_t n_, bw_;
  std::vector<double> a_;  // n rows of (2bw+1) slots
};

/// LU factorization of a banded matrix without pivoting. Valid for the
/// diagonally dominant systems solved here; a vanishing pivot throws
/// NumericError.
class BandedLU {
public:
  explicit BandedLU(BandedMatrix a);

  /// Solves A x = rhs in place.
  void solve(std::span<double> rhs) const;
  /// Solves A^T x = rhs in place.
  void solve_transpose(std::span<double> rhs) const;

private:
  BandedMatrix lu_;
};

/// Dense LU with partial pivoting, for the dynamic-programming fixed-point
/// systems whose rows are not banded.
class DenseLU {
public:
  /// `a` is row-major n x n; consumed by the factorization.
  DenseLU(std::vector<double> a, std::size_t n);

  void solve(std::span<double> rhs) const;

private:
  std::size_t n_;
  std::vector<double> lu_;
  std::vector<std::size_t> perm_;
};

}  // namespace remest

#endif
