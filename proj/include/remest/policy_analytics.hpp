#ifndef REMEST_POLICY_ANALYTICS_HPP
#define REMEST_POLICY_ANALYTICS_HPP

#include <cstdint>
#include <vector>

#include "remest/source_model.hpp"

namespace remest {

/// Threshold transmission rule: transmit exactly when |error| >= k.
/// k = 0 transmits always; "never transmit" is not representable.
struct ThresholdPolicy {
  int k = 0;
};

/// Exact performance of the threshold-k rule at discount beta (beta = 1 is
/// the long-run average case):
///   L, M  expected (discounted) distortion / time until the error first
///         leaves (-k, k) starting from 0;
///   D     distortion value L/M;
///   N     transmission value 1/M - (1-beta).
/// For k = 0 the convention is D = 0, N = 1, cost_at(lambda) = lambda.
struct PolicyMetrics {
  int k = 0;
  double beta = 1.0;
  double L = 0.0;
  double M = 1.0;
  double D = 0.0;
  double N = 1.0;

  /// Lagrangian cost from state 0: D + lambda * N, which equals
  /// (L + lambda)/M - lambda(1-beta) for k >= 1.
  double cost_at(double lambda) const { return D + lambda * N; }
};

/// The sub-matrix P^(k) of the transition law restricted to the silent
/// region S^(k) = {-(k-1), ..., k-1}. Dense, indexed by signed offsets.
class SubMatrix {
public:
  SubMatrix(int k, std::vector<double> data);
  int k() const { return k_; }
  std::size_t dim() const { return static_cast<std::size_t>(2 * k_ - 1); }
  /// Entry for i, j in [-(k-1), k-1].
  double at(int i, int j) const;

private:
  int k_;
  std::vector<double> data_;
};

SubMatrix submatrix(const MarkovSource& source, int k);

/// Row 0 of [I - beta P^(k)]^{-1}, obtained from one transposed banded solve
/// (the full inverse is never formed). Indexed by j + (k-1). All entries are
/// strictly positive. beta = 1 is allowed: P^(k) is transient, so the system
/// stays non-singular.
std::vector<double> q_row_zero(const MarkovSource& source, int k, double beta);

struct LMValues {
  double L = 0.0;
  double M = 0.0;
};

/// L^(k) = <q_row, d^(k)>, M^(k) = <q_row, 1> for k >= 1.
LMValues lm_values(const MarkovSource& source, const Distortion& d, int k, double beta);

PolicyMetrics policy_metrics(const MarkovSource& source, const Distortion& d, int k, double beta);

/// Monte Carlo estimate of (L, M) from simulated first-exit episodes.
/// Episodes that hit `max_steps` are excluded from the means and counted.
struct LMEstimate {
  double L_hat = 0.0;
  double M_hat = 0.0;
  double L_se = 0.0;
  double M_se = 0.0;
  std::size_t episodes = 0;
  std::size_t capped = 0;
};

LMEstimate lm_montecarlo(const MarkovSource& source, const Distortion& d, int k, double beta,
                         std::size_t episodes, std::uint64_t seed,
                         std::size_t max_steps = 10'000'000, unsigned workers = 0);

}  // namespace remest

#endif
