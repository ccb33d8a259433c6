#include "remest/birth_death.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "remest/errors.hpp"

namespace remest {

namespace {

// 1 - exp(-x) evaluated without cancellation for small x >= 0.
inline double one_minus_exp(double x) { return -std::expm1(-x); }

}  // namespace

BDParams::BDParams(double p_, double beta_) : p(p_), beta(beta_) {
  if (!(p > 0.0) || !(p < 0.5)) throw DomainError("birth-death parameter must lie in (0, 1/2)");
  if (!(beta > 0.0) || !(beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  delta = (1.0 - beta) / (2.0 * beta * p);
  K = -2.0 - 2.0 * delta;
  // arccosh(1 + delta) = log(x + sqrt(x^2 - 1)); written against delta = x - 1
  // so the small-argument regime keeps full relative accuracy.
  m = std::log1p(delta + std::sqrt(delta * (delta + 2.0)));
}

double q_entry(const BDParams& params, int k, int i, int j) {
  if (k < 1) throw DomainError("threshold k must be >= 1");
  if (std::abs(i) > k - 1 || std::abs(j) > k - 1)
    throw DomainError("q_entry index outside the silent region");

  if (params.beta == 1.0) {
    double hi = static_cast<double>(std::max(i, j));
    double lo = static_cast<double>(std::min(i, j));
    return (k - hi) * (k + lo) / (2.0 * params.p * k);
  }

  // [cosh((2k-|i-j|)m) - cosh((i+j)m)] / (2 beta p sinh(m) sinh(2km)),
  // rearranged into a product of decaying exponentials so that large k*m
  // neither overflows nor cancels:
  //   cosh(Am) - cosh(Bm) = (e^{Am}/2) (1 - e^{-(A-B)m}) (1 - e^{-(A+B)m}).
  const double m = params.m;
  const double A = static_cast<double>(2 * k - std::abs(i - j));
  const double B = static_cast<double>(std::abs(i + j));
  double num = std::exp(-std::abs(i - j) * m) * one_minus_exp((A - B) * m) *
               one_minus_exp((A + B) * m);
  double den = 2.0 * params.beta * params.p * std::sinh(m) * one_minus_exp(4.0 * k * m);
  return num / den;
}

std::pair<double, double> bd_metrics(const BDParams& params, int k) {
  if (k < 1) throw DomainError("threshold k must be >= 1");
  const double p = params.p;

  if (params.beta == 1.0) {
    double kk = static_cast<double>(k);
    return {(kk * kk - 1.0) / (3.0 * kk), 2.0 * p / (kk * kk)};
  }

  const double m = params.m;
  const double beta = params.beta;
  const double km = k * m;

  // N = 2 beta p sinh^2(m/2) / sinh^2(km/2). The identity
  // 1 - beta = 4 beta p sinh^2(m/2) makes this form free of the subtraction
  // that ruins 1/M - (1-beta) when N is far below 1-beta.
  double ratio = std::exp(-(k - 1) * m / 2.0) * one_minus_exp(m) / one_minus_exp(km);
  double N = 2.0 * beta * p * ratio * ratio;

  // D = [sinh(km) - k sinh(m)] / [2 sinh^2(km/2) sinh(m)], scaled by e^{-km}.
  // Exactly zero at k = 1.
  double D = 0.0;
  if (k > 1) {
    double u = std::exp(-km);
    double v = one_minus_exp(km);  // 1 - u
    double num = v * (1.0 + u) - 2.0 * k * std::sinh(m) * u;
    D = num / (v * v * std::sinh(m));
  }
  return {D, N};
}

double bd_lambda_avg(double p, int k) {
  if (!(p > 0.0) || !(p < 0.5)) throw DomainError("birth-death parameter must lie in (0, 1/2)");
  if (k < 0) throw DomainError("threshold k must be >= 0");
  double kk = static_cast<double>(k);
  return kk * (kk + 1.0) * (kk * kk + kk + 1.0) / (6.0 * p * (2.0 * kk + 1.0));
}

int bd_kstar(const BDParams& params, double alpha, int k_guard) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");

  if (params.beta == 1.0) {
    // floor(sqrt(2p/alpha)), then integer-adjusted so the defining inequality
    // N^(k) = 2p/k^2 >= alpha decides boundary cases, not sqrt rounding.
    int k = static_cast<int>(std::floor(std::sqrt(2.0 * params.p / alpha)));
    while (static_cast<double>(k + 1) * (k + 1) * alpha <= 2.0 * params.p) ++k;
    while (k >= 1 && static_cast<double>(k) * k * alpha > 2.0 * params.p) --k;
    if (k > k_guard)
      throw CoverageError("k* exceeds the guard " + std::to_string(k_guard) +
                          "; alpha is too small");
    return k;
  }

  // The defining inequality reduces to sinh(km/2) <= sqrt((1-beta)/(2 alpha)).
  // The left side increases in k, so a linear scan from k = 1 finds the sup.
  const double bound = std::sqrt((1.0 - params.beta) / (2.0 * alpha));
  const double half_m = params.m / 2.0;
  int k = 0;
  while (k < k_guard && std::sinh((k + 1) * half_m) <= bound) ++k;
  if (k >= k_guard)
    throw CoverageError("k* exceeds the guard " + std::to_string(k_guard) +
                        "; alpha is too small");
  return k;
}

}  // namespace remest
