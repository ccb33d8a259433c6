#include "remest/dp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "remest/errors.hpp"
#include "remest/linalg.hpp"

namespace remest {

namespace {
inline int clampi(int x, int lo, int hi) { return x < lo ? lo : (x > hi ? hi : x); }
}

TruncatedChain::TruncatedChain(const MarkovSource& source, int e_max, BoundaryRule rule)
    : e_max_(e_max), rule_(rule), band_(source.band()), tail_(source.tail_coeffs()) {
  if (e_max < 1) throw DomainError("truncation radius must be >= 1");
  // Residual mass of a truncated generator is folded onto the boundary states.
  double eps = source.tail_mass_bound();
  eps_half_ = eps / 2.0;
}

double TruncatedChain::entry(int e, int n) const {
  if (std::abs(e) > e_max_ || std::abs(n) > e_max_)
    throw DomainError("state outside the truncated range");
  if (rule_ == BoundaryRule::AbsorbAtBoundary && std::abs(e) == e_max_)
    return n == e ? 1.0 : 0.0;

  double v = 0.0;
  int dist = std::abs(n - e);
  if (dist <= band_) v = tail_[static_cast<std::size_t>(dist)];
  if (n == e_max_) {
    for (int dd = std::max(e_max_ - e + 1, 1); dd <= band_; ++dd)
      v += tail_[static_cast<std::size_t>(dd)];
    v += eps_half_;
  }
  if (n == -e_max_) {
    for (int dd = std::max(e + e_max_ + 1, 1); dd <= band_; ++dd)
      v += tail_[static_cast<std::size_t>(dd)];
    v += eps_half_;
  }
  return v;
}

double TruncatedChain::apply_row(int e, std::span<const double> v) const {
  if (rule_ == BoundaryRule::AbsorbAtBoundary && std::abs(e) == e_max_)
    return v[static_cast<std::size_t>(e + e_max_)];
  double s = tail_[0] * v[static_cast<std::size_t>(e + e_max_)];
  for (int d = 1; d <= band_; ++d) {
    int lo = clampi(e - d, -e_max_, e_max_);
    int hi = clampi(e + d, -e_max_, e_max_);
    s += tail_[static_cast<std::size_t>(d)] *
         (v[static_cast<std::size_t>(lo + e_max_)] + v[static_cast<std::size_t>(hi + e_max_)]);
  }
  if (eps_half_ > 0.0)
    s += eps_half_ * (v.front() + v.back());
  return s;
}

std::optional<int> ValueTable::implied_threshold(int margin) const {
  int reach = e_max - margin;
  if (reach < 0) return std::nullopt;
  int k = reach + 1;
  for (int a = 0; a <= reach; ++a) {
    if (transmit_at(a) || transmit_at(-a)) { k = a; break; }
  }
  if (k > reach) return std::nullopt;
  for (int e = -reach; e <= reach; ++e) {
    bool want = std::abs(e) >= k;
    if (transmit_at(e) != want) return std::nullopt;
  }
  return k;
}

StructureReport verify_structure(const ValueTable& table, int margin) {
  StructureReport rep;
  rep.margin = margin;
  rep.even_ok = true;
  for (int e = 1; e <= table.e_max; ++e) {
    if (table.at(e) != table.at(-e)) {
      rep.even_ok = false;
      if (!rep.first_violation) rep.first_violation = e;
      break;
    }
  }
  rep.increasing_ok = true;
  int reach = std::max(0, table.e_max - margin);
  for (int e = 0; e < reach; ++e) {
    double tol = 1e-12 * std::max(1.0, std::abs(table.at(e)));
    if (table.at(e + 1) < table.at(e) - tol) {
      rep.increasing_ok = false;
      if (!rep.first_violation) rep.first_violation = e + 1;
      break;
    }
  }
  rep.threshold_ok = table.implied_threshold(margin).has_value();
  return rep;
}

FiniteHorizonResult finite_horizon_dp(const TruncatedChain& chain, const Distortion& d,
                                      double lambda, int T, int margin) {
  if (T < 0) throw DomainError("horizon must be >= 0");
  if (lambda < 0.0) throw DomainError("lambda must be >= 0");
  const std::size_t n = chain.dim();
  const int E = chain.e_max();

  FiniteHorizonResult res;
  res.stages.assign(static_cast<std::size_t>(T) + 1, ValueTable{});
  std::vector<double> next(n, 0.0);
  for (int t = T; t >= 0; --t) {
    ValueTable& stage = res.stages[static_cast<std::size_t>(t)];
    stage.e_max = E;
    stage.v.assign(n, 0.0);
    stage.transmit.assign(n, 0);
    double transmit_val = lambda + chain.apply_row(0, next);
    for (int e = -E; e <= E; ++e) {
      double silent_val = d(e) + chain.apply_row(e, next);
      std::size_t idx = static_cast<std::size_t>(e + E);
      if (transmit_val <= silent_val) {
        stage.v[idx] = transmit_val;
        stage.transmit[idx] = 1;
      } else {
        stage.v[idx] = silent_val;
      }
    }
    next = stage.v;
  }
  res.cost_at_zero = res.stages[0].at(0);
  res.all_threshold_shaped = true;
  res.thresholds.reserve(res.stages.size());
  for (const auto& stage : res.stages) {
    res.thresholds.push_back(stage.implied_threshold(margin));
    if (!res.thresholds.back()) res.all_threshold_shaped = false;
  }
  return res;
}

ValueTable value_iteration(const TruncatedChain& chain, const Distortion& d, double lambda,
                           double beta, double tol, std::size_t max_iters) {
  if (!(beta > 0.0) || !(beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (lambda < 0.0) throw DomainError("lambda must be >= 0");
  const std::size_t n = chain.dim();
  const int E = chain.e_max();

  // Stopping by the contraction bound: a sup-norm step below
  // tol (1-beta) / (2 beta) leaves the Bellman residual below tol.
  const double step_tol = tol * (1.0 - beta) / (2.0 * beta);

  std::vector<double> v(n, 0.0), vn(n, 0.0);
  double step = 0.0;
  bool converged = false;
  for (std::size_t it = 0; it < max_iters; ++it) {
    double transmit_val = (1.0 - beta) * lambda + beta * chain.apply_row(0, v);
    step = 0.0;
    for (int e = -E; e <= E; ++e) {
      std::size_t idx = static_cast<std::size_t>(e + E);
      double silent_val = (1.0 - beta) * d(e) + beta * chain.apply_row(e, v);
      double nv = std::min(transmit_val, silent_val);
      step = std::max(step, std::abs(nv - v[idx]));
      vn[idx] = nv;
    }
    v.swap(vn);
    if (step <= step_tol) { converged = true; break; }
  }
  if (!converged)
    throw ConvergenceError("value iteration hit the iteration cap with sup-norm step " +
                           std::to_string(step), step);

  ValueTable table;
  table.e_max = E;
  table.v = v;
  table.transmit.assign(n, 0);
  double transmit_val = (1.0 - beta) * lambda + beta * chain.apply_row(0, v);
  for (int e = -E; e <= E; ++e) {
    double silent_val = (1.0 - beta) * d(e) + beta * chain.apply_row(e, v);
    if (transmit_val <= silent_val) table.transmit[static_cast<std::size_t>(e + E)] = 1;
  }
  return table;
}

double bellman_residual(const TruncatedChain& chain, const Distortion& d, double lambda,
                        double beta, const ValueTable& table) {
  const int E = chain.e_max();
  double transmit_val = (1.0 - beta) * lambda + beta * chain.apply_row(0, table.v);
  double res = 0.0;
  for (int e = -E; e <= E; ++e) {
    double silent_val = (1.0 - beta) * d(e) + beta * chain.apply_row(e, table.v);
    res = std::max(res, std::abs(std::min(transmit_val, silent_val) - table.at(e)));
  }
  return res;
}

DNTables fixed_point_dn(const TruncatedChain& chain, const Distortion& d, int k, double beta) {
  if (k < 0) throw DomainError("threshold k must be >= 0");
  if (!(beta > 0.0) || !(beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  const int E = chain.e_max();
  if (k > E) throw DomainError("threshold k must not exceed the truncation radius");
  const std::size_t n = chain.dim();

  DNTables out;
  out.e_max = E;
  if (k == 0) {
    // Always-transmit: the fixed point is D = 0, N = 1 identically.
    out.D.assign(n, 0.0);
    out.N.assign(n, 1.0);
    out.d0 = 0.0;
    out.n0 = 1.0;
    return out;
  }

  std::vector<double> mat(n * n, 0.0);
  std::vector<double> rhs_d(n, 0.0), rhs_n(n, 0.0);
  for (int e = -E; e <= E; ++e) {
    std::size_t r = static_cast<std::size_t>(e + E);
    int row_state = std::abs(e) >= k ? 0 : e;
    for (int c = -E; c <= E; ++c) {
      std::size_t cc = static_cast<std::size_t>(c + E);
      mat[r * n + cc] = (e == c ? 1.0 : 0.0) - beta * chain.entry(row_state, c);
    }
    if (std::abs(e) < k)
      rhs_d[r] = (1.0 - beta) * d(e);
    else
      rhs_n[r] = 1.0 - beta;
  }

  DenseLU lu(std::move(mat), n);
  lu.solve(rhs_d);
  lu.solve(rhs_n);
  out.D = std::move(rhs_d);
  out.N = std::move(rhs_n);
  out.d0 = out.D[static_cast<std::size_t>(E)];
  out.n0 = out.N[static_cast<std::size_t>(E)];
  return out;
}

}  // namespace remest
