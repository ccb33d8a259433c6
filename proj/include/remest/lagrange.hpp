#ifndef REMEST_LAGRANGE_HPP
#define REMEST_LAGRANGE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "remest/policy_analytics.hpp"
#include "remest/source_model.hpp"

namespace remest {

/// Calibration sequence: lambda^(k) is the multiplier at which thresholds k
/// and k+1 have equal Lagrangian cost from state 0,
///   lambda^(k) = (D^(k+1) - D^(k)) / (N^(k) - N^(k+1)),  k = 0..k_max.
/// Throws ConsistencyError if a denominator is not strictly positive.
std::vector<double> lambda_sequence(const MarkovSource& source, const Distortion& d,
                                    double beta, int k_max);
std::vector<double> lambda_sequence(std::span<const PolicyMetrics> metrics);

struct A4Report {
  bool ok = false;
  std::optional<std::size_t> first_violation;  // smallest k with lambda^(k+1) <= lambda^(k)
};

/// Verifies that the calibration sequence is strictly increasing.
A4Report check_a4(std::span<const double> lambdas);

/// One linear piece of the optimal Lagrangian cost: on (lo, hi] the optimal
/// threshold is `threshold` and the cost is intercept + slope * lambda
/// (intercept = D^(threshold), slope = N^(threshold) = 1/M^(threshold) - (1-beta)).
struct LagrangeSegment {
  double lo = 0.0;
  double hi = 0.0;
  int threshold = 0;
  double slope = 0.0;
  double intercept = 0.0;

  double value(double lambda) const { return intercept + slope * lambda; }
};

/// The optimal Lagrangian cost curve C*(lambda): piecewise linear, continuous,
/// concave and increasing over [0, breakpoints.back()]. Construction verifies
/// the strict increase of the breakpoints (and fails loudly otherwise),
/// continuity at each breakpoint, and strictly decreasing non-negative slopes.
class LagrangeCurve {
public:
  LagrangeCurve(double beta, std::vector<double> breakpoints,
                std::vector<LagrangeSegment> segments);

  double beta() const { return beta_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<LagrangeSegment>& segments() const { return segments_; }
  double last_breakpoint() const { return breakpoints_.back(); }

  /// C*(lambda); lambda must lie in [0, last_breakpoint()].
  double value(double lambda) const;

  /// Optimal threshold at lambda: k+1 on (lambda^(k), lambda^(k+1)]. At
  /// lambda = 0, where the leading interval is the degenerate point
  /// {lambda^(0)} = {0}, the tie resolves to threshold 1 (silence at 0 is
  /// free since D^(1) = 0).
  int threshold_for(double lambda) const;

private:
  double beta_;
  std::vector<double> breakpoints_;
  std::vector<LagrangeSegment> segments_;
};

LagrangeCurve cstar_curve(const MarkovSource& source, const Distortion& d, double beta,
                          int k_max);

/// Doubles k_max (from `k_start`) until the curve covers `lambda` or the scan
/// guard is reached.
LagrangeCurve cstar_curve_covering(const MarkovSource& source, const Distortion& d, double beta,
                                   double lambda, int k_start = 64, int k_guard = 10000);

ThresholdPolicy optimal_threshold_for_lambda(const LagrangeCurve& curve, double lambda);

/// One row of the (k, D^(k), N^(k), lambda^(k)) summary table.
struct TableRow {
  int k = 0;
  double D = 0.0;
  double N = 0.0;
  double lambda = 0.0;
};

std::vector<TableRow> table_rows(const MarkovSource& source, const Distortion& d, double beta,
                                 int k_min, int k_max);

}  // namespace remest

#endif
