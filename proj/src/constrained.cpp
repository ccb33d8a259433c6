#include "remest/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "remest/errors.hpp"

namespace remest {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

struct ScanResult {
  int k_star;
  double theta_star;
  PolicyMetrics low;   // metrics at k*
  PolicyMetrics high;  // metrics at k*+1
};

// Monotone scan for sup{k : N^(k) >= alpha}; N^(k) decreases strictly to 0,
// so the scan stops, guarded for extreme alpha.
ScanResult scan(const MarkovSource& source, const Distortion& d, double beta, double alpha,
                int k_guard) {
  PolicyMetrics low = policy_metrics(source, d, 0, beta);
  for (int k = 0;; ++k) {
    if (k > k_guard)
      throw CoverageError("k* exceeds the guard " + std::to_string(k_guard) +
                          "; alpha is too small");
    PolicyMetrics high = policy_metrics(source, d, k + 1, beta);
    if (high.N < alpha) {
      double theta = (alpha - high.N) / (low.N - high.N);
      return {k, theta, low, high};
    }
    low = high;
  }
}

}  // namespace

KTheta kstar_thetastar(const MarkovSource& source, const Distortion& d, double beta,
                       double alpha, int k_guard) {
  require_alpha(alpha);
  ScanResult r = scan(source, d, beta, alpha, k_guard);
  return {r.k_star, r.theta_star};
}

RandomizedThresholdPolicy optimal_strategy(const MarkovSource& source, const Distortion& d,
                                           double beta, double alpha, int k_guard) {
  require_alpha(alpha);
  RandomizedThresholdPolicy policy;
  policy.beta = beta;
  if (alpha >= critical_alpha(source, beta)) {
    // Threshold 1 is already free of distortion and feasible; the budget
    // constraint is slack, so the certifying multiplier is zero.
    policy.k_star = 1;
    policy.theta_star = 1.0;
    policy.certificate_lambda = 0.0;
    return policy;
  }
  ScanResult r = scan(source, d, beta, alpha, k_guard);
  policy.k_star = r.k_star;
  policy.theta_star = r.theta_star;
  policy.certificate_lambda = (r.high.D - r.low.D) / (r.low.N - r.high.N);
  return policy;
}

double dt_value(const MarkovSource& source, const Distortion& d, double beta, double alpha,
                int k_guard) {
  require_alpha(alpha);
  ScanResult r = scan(source, d, beta, alpha, k_guard);
  return r.theta_star * r.low.D + (1.0 - r.theta_star) * r.high.D;
}

double critical_alpha(const MarkovSource& source, double beta) {
  if (!(beta > 0.0) || !(beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
  return beta * (1.0 - source.p0());
}

TradeoffCurve::TradeoffCurve(double beta, double alpha_c, std::vector<Vertex> vertices)
    : beta_(beta), alpha_c_(alpha_c), vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw DomainError("trade-off curve needs at least two vertices");
  for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
    if (!(vertices_[i].alpha < vertices_[i + 1].alpha))
      throw ConsistencyError("vertex transmission values must increase strictly");
    if (vertices_[i].dist < vertices_[i + 1].dist)
      throw ConsistencyError("vertex distortions must be non-increasing");
  }
}

double TradeoffCurve::value(double alpha) const {
  if (!(alpha >= vertices_.front().alpha) || !(alpha < 1.0))
    throw CoverageError("alpha outside the covered range [" +
                        std::to_string(vertices_.front().alpha) + ", 1)");
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), alpha,
                             [](const Vertex& v, double a) { return v.alpha < a; });
  if (it != vertices_.end() && it->alpha == alpha) return it->dist;
  const Vertex& hi = *it;
  const Vertex& lo = *(it - 1);
  double t = (alpha - lo.alpha) / (hi.alpha - lo.alpha);
  return lo.dist + t * (hi.dist - lo.dist);
}

TradeoffCurve dt_curve(const MarkovSource& source, const Distortion& d, double beta, int k_max) {
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  std::vector<TradeoffCurve::Vertex> vertices;
  vertices.reserve(static_cast<std::size_t>(k_max) + 1);
  for (int k = k_max; k >= 0; --k) {
    PolicyMetrics pm = policy_metrics(source, d, k, beta);
    vertices.push_back({k, pm.N, pm.D});
  }
  return TradeoffCurve(beta, critical_alpha(source, beta), std::move(vertices));
}

}  // namespace remest
