#ifndef REMEST_SOURCE_MODEL_HPP
#define REMEST_SOURCE_MODEL_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace remest {

/// Symmetric Toeplitz Markov transition law on the integers, P(i,j) = p_|i-j|,
/// described by its tail coefficients p_0..p_b. Immutable after construction.
///
/// Infinite tails are represented by truncating a generator at a radius; the
/// mass dropped by the truncation is recorded in tail_mass_bound() and every
/// instance satisfies p_0 + 2*sum_{n>=1} p_n + tail_mass_bound == 1 to 1e-12.
class MarkovSource {
public:
  /// Two-parameter birth-death law: stays with 1-2p, steps +-1 with p each.
  /// Accepted for all p in (0, 1/2); note that for p > 1/3 the tail is not
  /// monotone at n=0, which banded() would reject for a user-supplied tail.
  static MarkovSource birth_death(double p);

  /// General banded law from tail coefficients (p_0, p_1, ..., p_b).
  static MarkovSource banded(std::vector<double> tail);

  /// Law with infinite tail, truncated at `radius`: p_n = generator(n) for
  /// n <= radius, zero beyond. The dropped mass becomes tail_mass_bound().
  static MarkovSource truncated(const std::function<double(int)>& generator, int radius);

  int band() const { return static_cast<int>(tail_.size()) - 1; }
  double tail(int n) const {
    return (n >= 0 && n < static_cast<int>(tail_.size())) ? tail_[static_cast<std::size_t>(n)] : 0.0;
  }
  const std::vector<double>& tail_coeffs() const { return tail_; }
  double p0() const { return tail_[0]; }
  double transition(long long i, long long j) const {
    long long d = i > j ? i - j : j - i;
    return tail(static_cast<int>(d));
  }
  double tail_mass_bound() const { return eps_tail_; }

  /// One-step probability of leaving {-(k-1),...,k-1} from offset j inside it.
  /// Computed as a sum of non-negative tail coefficients (no cancellation).
  double exit_mass(int k, int j) const;

private:
  MarkovSource(std::vector<double> tail, double eps_tail, bool check_head);
  std::vector<double> tail_;
  double eps_tail_;
};

enum class DistortionKind { Absolute, Hamming, Power, Table };

/// Per-step distortion d: error -> non-negative real; even by construction
/// (evaluated through |e|), increasing on non-negative errors, d(0) = 0.
class Distortion {
public:
  static Distortion absolute_error();
  static Distortion hamming();
  static Distortion power(double exponent);
  /// Values d(0), d(1), ..., d(E_max); extended by d(E_max) beyond. The
  /// extension is visible via capped()/cap_at().
  static Distortion table(std::vector<double> values);

  double operator()(long long e) const;
  DistortionKind kind() const { return kind_; }
  bool capped() const { return kind_ == DistortionKind::Table; }
  long long cap_at() const;

private:
  Distortion(DistortionKind kind, double exponent, std::vector<double> values);
  DistortionKind kind_;
  double exponent_;
  std::vector<double> values_;
};

/// Outcome of the finite model-assumption checks; booleans reflect checks over
/// |e| <= checked_range only.
struct AssumptionReport {
  bool a1_ok = false;   // tail non-negative, non-increasing, p_1 > 0
  bool a2a_ok = false;  // d even, non-decreasing on |e|
  bool a2b_ok = false;  // d(0) = 0 and d(e) > 0 otherwise
  std::optional<std::string> a3_witness;  // description of the verified weight function
  int checked_range = 0;

  bool all_ok() const { return a1_ok && a2a_ok && a2b_ok; }
};

/// Runs the finite checks over |e| <= radius. For the birth-death law with
/// absolute-error distortion and lambda > 0, verifies the weight function
/// w(e) = max(lambda, |e|) by direct substitution; otherwise the witness is
/// reported absent and growth control is the caller's responsibility.
AssumptionReport check_assumptions(const MarkovSource& source, const Distortion& d,
                                   int radius, double lambda);

}  // namespace remest

#endif
