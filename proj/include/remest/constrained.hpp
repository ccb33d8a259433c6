#ifndef REMEST_CONSTRAINED_HPP
#define REMEST_CONSTRAINED_HPP

#include <vector>

#include "remest/policy_analytics.hpp"
#include "remest/source_model.hpp"

namespace remest {

/// Bernoulli randomized simple strategy: silent below k_star, transmit above,
/// and at |e| = k_star transmit with probability theta_star. Randomizing
/// between thresholds k_star and k_star+1 this way meets a transmission
/// budget exactly; certificate_lambda is the multiplier that certifies its
/// optimality.
struct RandomizedThresholdPolicy {
  int k_star = 0;
  double theta_star = 1.0;
  double beta = 1.0;
  double certificate_lambda = 0.0;

  /// Probability of transmitting in error state e.
  double transmit_probability(long long e) const {
    long long a = e < 0 ? -e : e;
    if (a > k_star) return 1.0;
    if (a < k_star) return 0.0;
    return theta_star;
  }
};

struct KTheta {
  int k_star = 0;
  double theta_star = 1.0;
};

/// k* = sup{k : N^(k) >= alpha} and the mixing weight
/// theta* = (alpha - N^(k*+1)) / (N^(k*) - N^(k*+1)), so that
/// theta* N^(k*) + (1-theta*) N^(k*+1) = alpha.
KTheta kstar_thetastar(const MarkovSource& source, const Distortion& d, double beta,
                       double alpha, int k_guard = 10000);

/// The optimal strategy for transmission budget alpha. For alpha at or above
/// the critical budget beta(1-p_0) the deterministic threshold-1 rule already
/// achieves zero distortion, and is returned with a zero multiplier (slack
/// constraint); otherwise wraps kstar_thetastar with certificate lambda^(k*).
RandomizedThresholdPolicy optimal_strategy(const MarkovSource& source, const Distortion& d,
                                           double beta, double alpha, int k_guard = 10000);

/// The distortion-transmission value D*(alpha) = theta* D^(k*) + (1-theta*) D^(k*+1).
double dt_value(const MarkovSource& source, const Distortion& d, double beta, double alpha,
                int k_guard = 10000);

/// Critical budget beta(1 - p_0): zero distortion is achievable at and above it.
double critical_alpha(const MarkovSource& source, double beta);

/// The distortion-transmission trade-off curve: vertices (N^(k), D^(k)) for
/// k = k_max..0 in order of strictly increasing alpha, evaluated between
/// vertices by linear interpolation. Convex, decreasing, and zero at and
/// above alpha_c.
class TradeoffCurve {
public:
  struct Vertex {
    int k = 0;
    double alpha = 0.0;
    double dist = 0.0;
  };

  TradeoffCurve(double beta, double alpha_c, std::vector<Vertex> vertices);

  double beta() const { return beta_; }
  double alpha_c() const { return alpha_c_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }

  /// Piecewise-linear evaluation; alpha must lie in [min vertex alpha, 1).
  double value(double alpha) const;

private:
  double beta_;
  double alpha_c_;
  std::vector<Vertex> vertices_;
};

TradeoffCurve dt_curve(const MarkovSource& source, const Distortion& d, double beta, int k_max);

}  // namespace remest

#endif
