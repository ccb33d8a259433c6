#include "remest/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "remest/errors.hpp"

namespace remest {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t bw)
    : n_(n), bw_(bw), a_(n * (2 * bw + 1), 0.0) {}

double BandedMatrix::at(std::size_t i, std::size_t j) const {
  std::ptrdiff_t off = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
  if (off < -static_cast<std::ptrdiff_t>(bw_) || off > static_cast<std::ptrdiff_t>(bw_))
    return 0.0;
  return a_[i * (2 * bw_ + 1) + static_cast<std::size_t>(off + static_cast<std::ptrdiff_t>(bw_))];
}

void BandedMatrix::set(std::size_t i, std::size_t j, double v) {
  std::ptrdiff_t off = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
  a_[i * (2 * bw_ + 1) + static_cast<std::size_t>(off + static_cast<std::ptrdiff_t>(bw_))] = v;
}

std::vector<double> BandedMatrix::apply_transpose(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    std::size_t jlo = i >= bw_ ? i - bw_ : 0;
    std::size_t jhi = std::min(n_ - 1, i + bw_);
    for (std::size_t j = jlo; j <= jhi; ++j) y[j] += at(i, j) * x[i];
  }
  return y;
}

BandedLU::BandedLU(BandedMatrix a) : lu_(std::move(a)) {
  const std::size_t n = lu_.n_;
  const std::size_t bw = lu_.bw_;
  for (std::size_t c = 0; c < n; ++c) {
    double piv = lu_.at(c, c);
    if (!(std::abs(piv) > 1e-300))
      throw NumericError("banded LU: vanishing pivot at column " + std::to_string(c), piv);
    std::size_t ihi = std::min(n - 1, c + bw);
    for (std::size_t i = c + 1; i <= ihi; ++i) {
      double l = lu_.at(i, c) / piv;
      lu_.set(i, c, l);
      if (l == 0.0) continue;
      std::size_t jhi = std::min(n - 1, c + bw);
      for (std::size_t j = c + 1; j <= jhi; ++j)
        lu_.set(i, j, lu_.at(i, j) - l * lu_.at(c, j));
    }
  }
}

void BandedLU::solve(std::span<double> rhs) const {
  const std::size_t n = lu_.n_;
  const std::size_t bw = lu_.bw_;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t jlo = i >= bw ? i - bw : 0;
    double s = rhs[i];
    for (std::size_t j = jlo; j < i; ++j) s -= lu_.at(i, j) * rhs[j];
    rhs[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    std::size_t jhi = std::min(n - 1, ii + bw);
    double s = rhs[ii];
    for (std::size_t j = ii + 1; j <= jhi; ++j) s -= lu_.at(ii, j) * rhs[j];
    rhs[ii] = s / lu_.at(ii, ii);
  }
}

void BandedLU::solve_transpose(std::span<double> rhs) const {
  // A^T = U^T L^T: forward with U^T (unit handling on diagonal of U), back with L^T.
  const std::size_t n = lu_.n_;
  const std::size_t bw = lu_.bw_;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t jlo = i >= bw ? i - bw : 0;
    double s = rhs[i];
    for (std::size_t j = jlo; j < i; ++j) s -= lu_.at(j, i) * rhs[j];
    rhs[i] = s / lu_.at(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    std::size_t jhi = std::min(n - 1, ii + bw);
    double s = rhs[ii];
    for (std::size_t j = ii + 1; j <= jhi; ++j) s -= lu_.at(j, ii) * rhs[j];
    rhs[ii] = s;
  }
}

DenseLU::DenseLU(std::vector<double> a, std::size_t n)
    : n_(n), lu_(std::move(a)), perm_(n) {
  for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t best = c;
    double bestv = std::abs(lu_[c * n_ + c]);
    for (std::size_t i = c + 1; i < n_; ++i) {
      double v = std::abs(lu_[i * n_ + c]);
      if (v > bestv) { bestv = v; best = i; }
    }
    if (!(bestv > 1e-300))
      throw NumericError("dense LU: singular matrix at column " + std::to_string(c), bestv);
    if (best != c) {
      for (std::size_t j = 0; j < n_; ++j) std::swap(lu_[c * n_ + j], lu_[best * n_ + j]);
      std::swap(perm_[c], perm_[best]);
    }
    double piv = lu_[c * n_ + c];
    for (std::size_t i = c + 1; i < n_; ++i) {
      double l = lu_[i * n_ + c] / piv;
      lu_[i * n_ + c] = l;
      if (l == 0.0) continue;
      const double* urow = &lu_[c * n_];
      double* irow = &lu_[i * n_];
      for (std::size_t j = c + 1; j < n_; ++j) irow[j] -= l * urow[j];
    }
  }
}

void DenseLU::solve(std::span<double> rhs) const {
  std::vector<double> b(n_);
  for (std::size_t i = 0; i < n_; ++i) b[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n_; ++i) {
    double s = b[i];
    const double* row = &lu_[i * n_];
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * b[j];
    b[i] = s;
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    double s = b[ii];
    const double* row = &lu_[ii * n_];
    for (std::size_t j = ii + 1; j < n_; ++j) s -= row[j] * b[j];
    b[ii] = s / row[ii];
  }
  std::copy(b.begin(), b.end(), rhs.begin());
}

}  // namespace remest
