#ifndef REMEST_BIRTH_DEATH_HPP
#define REMEST_BIRTH_DEATH_HPP

#include <utility>

namespace remest {

/// Parameters of the closed-form fast path for the birth-death law with
/// absolute-error distortion. The resolvent [I - beta P^(k)]^{-1} is the
/// inverse of a tridiagonal symmetric Toeplitz matrix, which has explicit
/// hyperbolic-function entries driven by
///   K = -2 - (1-beta)/(beta p)   and   m = arccosh(-K/2).
/// At beta = 1, m = 0 and everything degenerates to rational expressions.
struct BDParams {
  BDParams(double p, double beta);

  double p;
  double beta;
  double K;  // <= -2
  double m;  // >= 0; 0 exactly when beta = 1

  /// (1-beta)/(2 beta p) = cosh(m) - 1, kept separately because it is exact
  /// where cosh(m) - 1 would cancel.
  double delta;
};

/// Entry (i, j) of [I - beta P^(k)]^{-1} for i, j in {-(k-1),...,k-1}.
/// Large k*m is evaluated in exponent-difference form and never overflows.
double q_entry(const BDParams& params, int k, int i, int j);

/// (D, N) of the threshold-k rule. Stable for k*m up to and beyond 700.
std::pair<double, double> bd_metrics(const BDParams& params, int k);

/// Long-run average calibration multiplier,
/// lambda^(k) = k(k+1)(k^2+k+1) / (6p(2k+1)); 0 at k = 0.
double bd_lambda_avg(double p, int k);

/// Largest k whose transmission value still meets the constraint alpha,
/// i.e. sup{k : N^(k) >= alpha}; 0 means always-transmit.
int bd_kstar(const BDParams& params, double alpha, int k_guard = 10000);

}  // namespace remest

#endif
