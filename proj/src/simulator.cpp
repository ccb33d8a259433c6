#include "remest/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "remest/errors.hpp"
#include "remest/rng.hpp"
#include "remest/step_sampler.hpp"

namespace remest {

SimStrategy SimStrategy::threshold(int k) {
  if (k < 0) throw DomainError("threshold k must be >= 0");
  SimStrategy s;
  s.kind = Kind::Threshold;
  s.k = k;
  return s;
}

SimStrategy SimStrategy::bernoulli(int k_star, double theta_star) {
  if (k_star < 0) throw DomainError("k* must be >= 0");
  if (!(theta_star >= 0.0) || !(theta_star <= 1.0)) throw DomainError("theta* must lie in [0, 1]");
  SimStrategy s;
  s.kind = Kind::Bernoulli;
  s.k = k_star;
  s.theta = theta_star;
  return s;
}

SimStrategy SimStrategy::steering(int k_star, double theta_star) {
  SimStrategy s = bernoulli(k_star, theta_star);
  s.kind = Kind::Steering;
  return s;
}

SimStrategy SimStrategy::timesharing(int k_star,
                                     std::vector<std::pair<long long, long long>> schedule) {
  if (k_star < 0) throw DomainError("k* must be >= 0");
  if (schedule.empty()) throw DomainError("time-sharing schedule must be non-empty");
  long long total = 0;
  for (auto [a, b] : schedule) {
    if (a < 0 || b < 0) throw DomainError("time-sharing cycle counts must be non-negative");
    total += a + b;
  }
  if (total == 0) throw DomainError("time-sharing schedule must contain at least one cycle");
  SimStrategy s;
  s.kind = Kind::TimeSharing;
  s.k = k_star;
  s.schedule = std::move(schedule);
  return s;
}

SimStrategy make_steering(int k_star, double theta_star) {
  return SimStrategy::steering(k_star, theta_star);
}

SimStrategy make_timesharing(int k_star,
                             std::vector<std::pair<long long, long long>> schedule) {
  return SimStrategy::timesharing(k_star, std::move(schedule));
}

namespace {

// Mutable per-replicate state of a strategy.
class StrategyRunner {
public:
  explicit StrategyRunner(const SimStrategy& s) : s_(s) {
    if (s_.kind == SimStrategy::Kind::TimeSharing) advance_phase(/*init=*/true);
  }

  bool decide(long long t, long long e, std::mt19937_64& rng) {
    long long a = e < 0 ? -e : e;
    switch (s_.kind) {
      case SimStrategy::Kind::Threshold:
        return a >= s_.k;
      case SimStrategy::Kind::Bernoulli:
        if (a > s_.k) return true;
        if (a < s_.k) return false;
        return uniform01(rng) < s_.theta;
      case SimStrategy::Kind::Steering: {
        if (a > s_.k) return true;
        if (a < s_.k) return false;
        // Pick the action whose empirical frequency lags its target most;
        // ties go to transmitting.
        double visits = static_cast<double>(a0_ + a1_ + 1);
        double score0 = (1.0 - s_.theta) - static_cast<double>(a0_ + 1) / visits;
        double score1 = s_.theta - static_cast<double>(a1_ + 1) / visits;
        bool u = score1 >= score0;
        (u ? a1_ : a0_) += 1;
        return u;
      }
      case SimStrategy::Kind::TimeSharing: {
        // A cycle ends at each return of the error to 0.
        if (t > 0 && e == 0 && remaining_ > 0) {
          if (--remaining_ == 0) advance_phase(false);
        }
        return a >= current_k_;
      }
    }
    return true;
  }

private:
  void advance_phase(bool init) {
    if (init) {
      phase_idx_ = 0;
      use_low_ = true;
      remaining_ = s_.schedule[0].first;
    }
    // Skip zero-length phases; the schedule repeats cyclically and has at
    // least one positive count.
    while (remaining_ == 0) {
      if (use_low_) {
        use_low_ = false;
        remaining_ = s_.schedule[phase_idx_].second;
      } else {
        use_low_ = true;
        phase_idx_ = (phase_idx_ + 1) % s_.schedule.size();
        remaining_ = s_.schedule[phase_idx_].first;
      }
    }
    current_k_ = use_low_ ? s_.k : s_.k + 1;
  }

  const SimStrategy& s_;
  long long a0_ = 0, a1_ = 0;       // steering action counters at |e| = k*
  std::size_t phase_idx_ = 0;       // time-sharing position in the schedule
  bool use_low_ = true;
  long long remaining_ = 0;
  int current_k_ = 0;
};

struct ReplicateResult {
  double d_val = 0.0;
  double n_val = 0.0;
  ReplicateSummary summary;
};

ReplicateResult run_replicate(const MarkovSource& source, const Distortion& d,
                              const SimStrategy& strategy, double beta, long long horizon,
                              std::uint64_t replicate_seed, std::vector<TraceRow>* trace) {
  std::mt19937_64 rng(replicate_seed);
  StepSampler step(source);
  StrategyRunner runner(strategy);

  long long x = 0, z = 0;
  ReplicateResult out;

  if (beta < 1.0) {
    double bt = 1.0, dsum = 0.0, nsum = 0.0;
    for (long long t = 0; t < horizon; ++t) {
      long long e = x - z;
      out.summary.max_abs_error = std::max(out.summary.max_abs_error, std::abs(e));
      bool u = runner.decide(t, e, rng);
      if (u) {
        z = x;
        ++out.summary.transmissions;
      }
      dsum += bt * d(x - z);
      if (u) nsum += bt;
      if (trace) trace->push_back({t, x, u ? 1 : 0, z, e, z});
      bt *= beta;
      if (bt < 1e-20 && !trace) break;  // below double resolution of the sums
      x += step(rng);
    }
    out.d_val = (1.0 - beta) * dsum;
    out.n_val = (1.0 - beta) * nsum;
  } else {
    // Long-run averages with compensated summation.
    double dsum = 0.0, dc = 0.0, nsum = 0.0, nc = 0.0;
    auto add = [](double& s, double& c, double x_) {
      double y = x_ - c;
      double t_ = s + y;
      c = (t_ - s) - y;
      s = t_;
    };
    for (long long t = 0; t < horizon; ++t) {
      long long e = x - z;
      out.summary.max_abs_error = std::max(out.summary.max_abs_error, std::abs(e));
      bool u = runner.decide(t, e, rng);
      if (u) {
        z = x;
        ++out.summary.transmissions;
      }
      add(dsum, dc, d(x - z));
      if (u) add(nsum, nc, 1.0);
      if (trace) trace->push_back({t, x, u ? 1 : 0, z, e, z});
      x += step(rng);
    }
    out.d_val = dsum / static_cast<double>(horizon);
    out.n_val = nsum / static_cast<double>(horizon);
  }
  return out;
}

}  // namespace

SimReport simulate(const MarkovSource& source, const Distortion& d, const SimStrategy& strategy,
                   double beta, long long horizon, std::size_t replicates, std::uint64_t seed,
                   unsigned workers) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  if (replicates < 1) throw DomainError("at least one replicate required");
  if (!(beta > 0.0) || !(beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");

  std::vector<ReplicateResult> results(replicates);
  auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r)
      results[r] = run_replicate(source, d, strategy, beta, horizon, sub_seed(seed, r), nullptr);
  };

  unsigned nw = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  nw = static_cast<unsigned>(std::min<std::size_t>(nw, replicates));
  if (nw <= 1) {
    run_range(0, replicates);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (replicates + nw - 1) / nw;
    for (unsigned w = 0; w < nw; ++w) {
      std::size_t lo = static_cast<std::size_t>(w) * chunk;
      std::size_t hi = std::min(replicates, lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  SimReport rep;
  rep.beta = beta;
  rep.horizon = horizon;
  rep.replicates = replicates;
  rep.seed = seed;
  rep.tail_mass_bound = source.tail_mass_bound();
  rep.summaries.reserve(replicates);

  long double dsum = 0.0L, nsum = 0.0L;
  for (const auto& r : results) {
    dsum += r.d_val;
    nsum += r.n_val;
    rep.summaries.push_back(r.summary);
  }
  rep.d_hat = static_cast<double>(dsum / replicates);
  rep.n_hat = static_cast<double>(nsum / replicates);
  if (replicates > 1) {
    long double dv = 0.0L, nv = 0.0L;
    for (const auto& r : results) {
      long double dd = r.d_val - rep.d_hat;
      long double dn = r.n_val - rep.n_hat;
      dv += dd * dd;
      nv += dn * dn;
    }
    rep.d_se = std::sqrt(static_cast<double>(dv / (replicates - 1) / replicates));
    rep.n_se = std::sqrt(static_cast<double>(nv / (replicates - 1) / replicates));
  }
  return rep;
}

std::vector<TraceRow> simulate_trace(const MarkovSource& source, const SimStrategy& strategy,
                                     long long horizon, std::uint64_t seed) {
  if (horizon < 1) throw DomainError("horizon must be >= 1");
  std::vector<TraceRow> rows;
  rows.reserve(static_cast<std::size_t>(horizon));
  Distortion d = Distortion::absolute_error();
  run_replicate(source, d, strategy, 1.0, horizon, sub_seed(seed, 0), &rows);
  return rows;
}

long long default_horizon(double beta) {
  if (beta >= 1.0) return 1'000'000;
  return static_cast<long long>(std::ceil(std::log(1e-12) / std::log(beta))) + 1;
}

}  // namespace remest
