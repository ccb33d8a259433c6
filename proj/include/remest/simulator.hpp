#ifndef REMEST_SIMULATOR_HPP
#define REMEST_SIMULATOR_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "remest/source_model.hpp"

namespace remest {

/// Transmission strategy for the full transmitter-receiver loop.
///   threshold(k)            transmit when |e| >= k
///   bernoulli(k*, theta*)   randomize at |e| = k*: transmit w.p. theta*
///   steering(k*, theta*)    deterministic; at |e| = k* picks the action that
///                           steers the empirical action frequency toward
///                           (1-theta*, theta*)
///   timesharing(k*, sched)  alternates thresholds k* and k*+1 across cycles
///                           (returns of the error to 0), a_m cycles with k*
///                           then b_m cycles with k*+1, repeating the schedule
struct SimStrategy {
  enum class Kind { Threshold, Bernoulli, Steering, TimeSharing };

  Kind kind = Kind::Threshold;
  int k = 0;
  double theta = 1.0;
  std::vector<std::pair<long long, long long>> schedule;

  static SimStrategy threshold(int k);
  static SimStrategy bernoulli(int k_star, double theta_star);
  static SimStrategy steering(int k_star, double theta_star);
  static SimStrategy timesharing(int k_star,
                                 std::vector<std::pair<long long, long long>> schedule);
};

SimStrategy make_steering(int k_star, double theta_star);
SimStrategy make_timesharing(int k_star, std::vector<std::pair<long long, long long>> schedule);

struct ReplicateSummary {
  long long max_abs_error = 0;
  long long transmissions = 0;
};

/// Empirical distortion/transmission estimates. Reproducible bit-exactly
/// from (inputs, seed) for any worker count: replicate r always uses the
/// sub-stream sub_seed(seed, r) and replicates are merged in index order.
struct SimReport {
  double beta = 1.0;
  long long horizon = 0;
  std::size_t replicates = 0;
  std::uint64_t seed = 0;
  double d_hat = 0.0;
  double n_hat = 0.0;
  double d_se = 0.0;
  double n_se = 0.0;
  double tail_mass_bound = 0.0;
  std::vector<ReplicateSummary> summaries;
};

/// Simulates X_t, U_t, Z_t, E_t = X_t - Z_{t-1} from X_0 = 0 with the
/// receiver fixed to "output the last transmitted symbol". Returns
/// (1-beta)-normalized discounted averages for beta < 1 and running averages
/// (compensated summation) for beta = 1, with standard errors across
/// replicates.
SimReport simulate(const MarkovSource& source, const Distortion& d, const SimStrategy& strategy,
                   double beta, long long horizon, std::size_t replicates, std::uint64_t seed,
                   unsigned workers = 0);

struct TraceRow {
  long long t = 0;
  long long x = 0;
  int u = 0;
  long long z = 0;
  long long e = 0;
  long long xhat = 0;
};

/// Step-by-step trajectory of replicate 0 (same stream as simulate()).
std::vector<TraceRow> simulate_trace(const MarkovSource& source, const SimStrategy& strategy,
                                     long long horizon, std::uint64_t seed);

/// Horizon at which beta^horizon < 1e-12 (long enough that truncating a
/// discounted sum is below statistical resolution); 10^6 for beta = 1.
long long default_horizon(double beta);

}  // namespace remest

#endif
