#include "remest/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "remest/errors.hpp"

namespace remest {

std::vector<double> lambda_sequence(std::span<const PolicyMetrics> metrics) {
  if (metrics.size() < 2)
    throw DomainError("lambda sequence needs metrics for at least thresholds 0 and 1");
  std::vector<double> lambdas;
  lambdas.reserve(metrics.size() - 1);
  for (std::size_t k = 0; k + 1 < metrics.size(); ++k) {
    double dn = metrics[k].N - metrics[k + 1].N;
    double dd = metrics[k + 1].D - metrics[k].D;
    if (!(dn > 0.0))
      throw ConsistencyError("transmission values fail to decrease strictly at k = " +
                             std::to_string(k));
    if (dd < 0.0)
      throw ConsistencyError("distortion values fail to increase at k = " + std::to_string(k));
    lambdas.push_back(dd / dn);
  }
  return lambdas;
}

std::vector<double> lambda_sequence(const MarkovSource& source, const Distortion& d,
                                    double beta, int k_max) {
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  std::vector<PolicyMetrics> metrics;
  metrics.reserve(static_cast<std::size_t>(k_max) + 2);
  for (int k = 0; k <= k_max + 1; ++k) metrics.push_back(policy_metrics(source, d, k, beta));
  return lambda_sequence(metrics);
}

A4Report check_a4(std::span<const double> lambdas) {
  A4Report rep;
  rep.ok = true;
  for (std::size_t k = 0; k + 1 < lambdas.size(); ++k) {
    if (!(lambdas[k + 1] > lambdas[k])) {
      rep.ok = false;
      rep.first_violation = k + 1;
      break;
    }
  }
  return rep;
}

LagrangeCurve::LagrangeCurve(double beta, std::vector<double> breakpoints,
                             std::vector<LagrangeSegment> segments)
    : beta_(beta), breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
  if (breakpoints_.size() != segments_.size() + 1 || segments_.empty())
    throw DomainError("curve needs one more breakpoint than segments");

  A4Report a4 = check_a4(breakpoints_);
  if (!a4.ok)
    throw ConsistencyError(
        "breakpoints are not strictly increasing (first violation at index " +
        std::to_string(*a4.first_violation) + ")");

  for (std::size_t s = 0; s + 1 < segments_.size(); ++s) {
    double gap = segments_[s].value(breakpoints_[s + 1]) -
                 segments_[s + 1].value(breakpoints_[s + 1]);
    double scale = std::max(1.0, std::abs(segments_[s].value(breakpoints_[s + 1])));
    if (std::abs(gap) > 1e-9 * scale)
      throw ConsistencyError("curve is discontinuous at breakpoint " + std::to_string(s + 1));
    if (!(segments_[s + 1].slope < segments_[s].slope))
      throw ConsistencyError("segment slopes fail to decrease strictly at segment " +
                             std::to_string(s + 1));
  }
  for (const auto& seg : segments_)
    if (seg.slope < 0.0) throw ConsistencyError("negative segment slope");
}

double LagrangeCurve::value(double lambda) const {
  return segments_[static_cast<std::size_t>(threshold_for(lambda)) - 1].value(lambda);
}

int LagrangeCurve::threshold_for(double lambda) const {
  if (lambda < 0.0) throw DomainError("lambda must be >= 0");
  if (lambda > breakpoints_.back())
    throw CoverageError("lambda = " + std::to_string(lambda) +
                        " lies beyond the computed breakpoints; rebuild with larger k_max");
  // Smallest k >= 1 with lambda <= lambda^(k): the half-open interval rule,
  // with zero-length leading intervals skipped.
  auto it = std::lower_bound(breakpoints_.begin() + 1, breakpoints_.end(), lambda);
  return static_cast<int>(it - breakpoints_.begin());
}

LagrangeCurve cstar_curve(const MarkovSource& source, const Distortion& d, double beta,
                          int k_max) {
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  std::vector<PolicyMetrics> metrics;
  metrics.reserve(static_cast<std::size_t>(k_max) + 2);
  for (int k = 0; k <= k_max + 1; ++k) metrics.push_back(policy_metrics(source, d, k, beta));
  std::vector<double> lambdas = lambda_sequence(metrics);

  std::vector<LagrangeSegment> segments;
  segments.reserve(static_cast<std::size_t>(k_max));
  for (int k = 0; k < k_max; ++k) {
    LagrangeSegment seg;
    seg.lo = lambdas[static_cast<std::size_t>(k)];
    seg.hi = lambdas[static_cast<std::size_t>(k) + 1];
    seg.threshold = k + 1;
    seg.intercept = metrics[static_cast<std::size_t>(k) + 1].D;
    seg.slope = metrics[static_cast<std::size_t>(k) + 1].N;
    segments.push_back(seg);
  }
  lambdas.resize(static_cast<std::size_t>(k_max) + 1);
  return LagrangeCurve(beta, std::move(lambdas), std::move(segments));
}

LagrangeCurve cstar_curve_covering(const MarkovSource& source, const Distortion& d, double beta,
                                   double lambda, int k_start, int k_guard) {
  if (lambda < 0.0) throw DomainError("lambda must be >= 0");
  int k_max = std::max(1, k_start);
  for (;;) {
    LagrangeCurve curve = cstar_curve(source, d, beta, k_max);
    if (lambda <= curve.last_breakpoint()) return curve;
    if (k_max >= k_guard)
      throw CoverageError("lambda = " + std::to_string(lambda) +
                          " not covered within the k_max guard " + std::to_string(k_guard));
    k_max = std::min(k_guard, 2 * k_max);
  }
}

ThresholdPolicy optimal_threshold_for_lambda(const LagrangeCurve& curve, double lambda) {
  return ThresholdPolicy{curve.threshold_for(lambda)};
}

std::vector<TableRow> table_rows(const MarkovSource& source, const Distortion& d, double beta,
                                 int k_min, int k_max) {
  if (k_min < 0 || k_max < k_min) throw DomainError("need 0 <= k_min <= k_max");
  std::vector<PolicyMetrics> metrics;
  metrics.reserve(static_cast<std::size_t>(k_max - k_min) + 2);
  for (int k = k_min; k <= k_max + 1; ++k)
    metrics.push_back(policy_metrics(source, d, k, beta));
  std::vector<TableRow> rows;
  rows.reserve(static_cast<std::size_t>(k_max - k_min) + 1);
  for (int k = k_min; k <= k_max; ++k) {
    std::size_t i = static_cast<std::size_t>(k - k_min);
    double dn = metrics[i].N - metrics[i + 1].N;
    if (!(dn > 0.0))
      throw ConsistencyError("transmission values fail to decrease strictly at k = " +
                             std::to_string(k));
    rows.push_back({k, metrics[i].D, metrics[i].N, (metrics[i + 1].D - metrics[i].D) / dn});
  }
  return rows;
}

}  // namespace remest
