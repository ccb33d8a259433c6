#ifndef REMEST_DP_ORACLE_HPP
#define REMEST_DP_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "remest/source_model.hpp"

namespace remest {

/// What happens to transition mass that would leave {-E_max..E_max}:
/// RenormalizeRow folds it onto the boundary state on its side;
/// AbsorbAtBoundary additionally makes the two boundary states absorbing.
enum class BoundaryRule { RenormalizeRow, AbsorbAtBoundary };

/// The source restricted to {-E_max..E_max} with a boundary treatment.
/// Rows sum to one and the symmetry row(-e)(-n) = row(e)(n) is preserved.
class TruncatedChain {
public:
  TruncatedChain(const MarkovSource& source, int e_max,
                 BoundaryRule rule = BoundaryRule::RenormalizeRow);

  int e_max() const { return e_max_; }
  BoundaryRule rule() const { return rule_; }
  std::size_t dim() const { return static_cast<std::size_t>(2 * e_max_ + 1); }

  /// Effective transition probability row e -> n, |e|,|n| <= e_max.
  double entry(int e, int n) const;

  /// sum_n row_e(n) v(n), with v indexed by n + e_max. Terms at distance d
  /// are added pairwise, which keeps sweeps of even inputs exactly even.
  double apply_row(int e, std::span<const double> v) const;

private:
  int e_max_;
  BoundaryRule rule_;
  int band_;
  std::vector<double> tail_;
  double eps_half_ = 0.0;
};

/// A value function over the truncated states together with the minimizing
/// decision in each state.
struct ValueTable {
  int e_max = 0;
  std::vector<double> v;                 // indexed by e + e_max
  std::vector<std::uint8_t> transmit;    // decision rule (1 = transmit)

  double at(int e) const { return v[static_cast<std::size_t>(e + e_max)]; }
  bool transmit_at(int e) const { return transmit[static_cast<std::size_t>(e + e_max)] != 0; }

  /// If the rule is "transmit exactly when |e| >= k" on |e| <= e_max - margin,
  /// returns k; otherwise nullopt.
  std::optional<int> implied_threshold(int margin = 10) const;
};

struct StructureReport {
  bool even_ok = false;       // v(e) == v(-e), exact
  bool increasing_ok = false; // v non-decreasing on 0..e_max-margin
  bool threshold_ok = false;  // decision rule is threshold-shaped
  int margin = 0;
  std::optional<int> first_violation;

  bool all_ok() const { return even_ok && increasing_ok && threshold_ok; }
};

/// Checks evenness (exact mirror), monotonicity away from the boundary, and
/// the threshold shape of the decision rule.
StructureReport verify_structure(const ValueTable& table, int margin = 10);

struct FiniteHorizonResult {
  std::vector<ValueTable> stages;                 // V_0 .. V_T by stage index
  std::vector<std::optional<int>> thresholds;     // per-stage threshold, if shaped
  double cost_at_zero = 0.0;                      // V_0(0)
  bool all_threshold_shaped = false;
};

/// Backward induction for the undiscounted finite-horizon problem with
/// terminal value zero:
///   V_t(e) = min{ lambda + sum_n P(0,n) V_{t+1}(n),
///                 d(e)   + sum_n P(e,n) V_{t+1}(n) }.
/// Ties resolve to transmitting.
FiniteHorizonResult finite_horizon_dp(const TruncatedChain& chain, const Distortion& d,
                                      double lambda, int T, int margin = 10);

/// Fixed point of the normalized discounted operator
///   V(e) = min{ (1-beta) lambda + beta sum_n P(0,n) V(n),
///               (1-beta) d(e)   + beta sum_n P(e,n) V(n) },
/// iterated from V = 0 until the sup-norm step is below tol(1-beta)/(2 beta);
/// the returned table has Bellman residual below tol.
ValueTable value_iteration(const TruncatedChain& chain, const Distortion& d, double lambda,
                           double beta, double tol = 1e-8, std::size_t max_iters = 1'000'000);

/// Bellman residual sup-norm of a table, evaluated independently of the
/// iteration loop.
double bellman_residual(const TruncatedChain& chain, const Distortion& d, double lambda,
                        double beta, const ValueTable& table);

struct DNTables {
  int e_max = 0;
  std::vector<double> D, N;  // indexed by e + e_max
  double d0 = 0.0, n0 = 0.0;
};

/// Direct linear-system solution of the per-state distortion and transmission
/// values of the threshold-k rule on the truncated chain (beta in (0,1)):
///   D(e) = (1-beta) d(e) [|e|<k] + beta sum_n row(e or 0) D(n),
///   N(e) = (1-beta) [|e|>=k]     + beta sum_n row(e or 0) N(n),
/// where the row is the 0-row wherever |e| >= k. One dense factorization
/// serves both right-hand sides.
DNTables fixed_point_dn(const TruncatedChain& chain, const Distortion& d, int k, double beta);

}  // namespace remest

#endif
