#include "remest/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "remest/birth_death.hpp"
#include "remest/constrained.hpp"
#include "remest/dp_oracle.hpp"
#include "remest/lagrange.hpp"
#include "remest/policy_analytics.hpp"
#include "remest/rng.hpp"
#include "remest/simulator.hpp"
#include "remest/source_model.hpp"

namespace remest {

namespace {

using Clock = std::chrono::steady_clock;

struct Checker {
  CriterionResult res;
  Clock::time_point start = Clock::now();

  explicit Checker(std::string name) { res.name = std::move(name); }

  void record(const std::string& cell, double expected, double actual, double err, double tol) {
    ++res.checks;
    res.max_err = std::max(res.max_err, err);
    if (!(err <= tol)) {
      ++res.failures;
      if (res.failure_detail.size() < 20) res.failure_detail.push_back({cell, expected, actual, tol});
    }
  }

  void check_abs(const std::string& cell, double expected, double actual, double tol) {
    record(cell, expected, actual, std::abs(actual - expected), tol);
  }

  void check_rel(const std::string& cell, double expected, double actual, double tol) {
    double scale = std::max(std::abs(expected), std::abs(actual));
    double err = scale == 0.0 ? 0.0 : std::abs(actual - expected) / scale;
    record(cell, expected, actual, err, tol);
  }

  void check_true(const std::string& cell, bool ok) {
    ++res.checks;
    if (!ok) {
      ++res.failures;
      res.max_err = std::max(res.max_err, 1.0);
      if (res.failure_detail.size() < 20) res.failure_detail.push_back({cell, 1.0, 0.0, 0.0});
    }
  }

  CriterionResult finish(double min_pass_fraction = 1.0) {
    res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (res.checks == 0) {
      res.pass = true;
      res.vacuous = true;
      if (res.note.empty()) res.note = "empty grid; vacuous pass";
    } else {
      double ok_fraction =
          static_cast<double>(res.checks - res.failures) / static_cast<double>(res.checks);
      res.pass = ok_fraction >= min_pass_fraction;
    }
    return res;
  }
};

std::string cell_name(const char* what, double p, double beta, int k) {
  std::ostringstream ss;
  ss << what << "[p=" << p << ",beta=" << beta << ",k=" << k << "]";
  return ss.str();
}

// Frozen reference values for the birth-death law at p = 0.3, printed at four
// decimals: D^(k), N^(k), lambda^(k) for k = 0..10 at beta = 0.9, 0.95, 1.
struct RefBlock {
  double beta;
  double D[11], N[11], lambda[11];
};

const RefBlock kReference[3] = {
    {0.9,
     {0, 0, 0.4576, 0.7695, 1.0066, 1.1844, 1.3130, 1.4029, 1.4638, 1.5040, 1.5298},
     {1, 0.5400, 0.1236, 0.0475, 0.0220, 0.0111, 0.0058, 0.0031, 0.0017, 0.0009, 0.0005},
     {0, 1.0989, 4.1021, 9.2839, 16.2509, 24.4478, 33.4121, 42.8289, 52.5042, 62.3245, 72.2255}},
    {0.95,
     {0, 0, 0.4790, 0.8282, 1.1218, 1.3715, 1.5811, 1.7536, 1.8927, 2.0028, 2.0884},
     {1, 0.5700, 0.1365, 0.0565, 0.0288, 0.0163, 0.0098, 0.0061, 0.0039, 0.0025, 0.0016},
     {0, 1.1050, 4.3657, 10.6058, 19.9550, 32.0869, 46.4727, 62.5651, 79.8921, 98.0854,
      116.8739}},
    {1.0,
     {0, 0, 0.5000, 0.8889, 1.2500, 1.6000, 1.9444, 2.2857, 2.6250, 2.9630, 3.3000},
     {1, 0.6000, 0.1500, 0.0667, 0.0375, 0.0240, 0.0167, 0.0122, 0.0094, 0.0074, 0.0060},
     {0, 1.1111, 4.6667, 12.3810, 25.9259, 46.9697, 77.1795, 118.2222, 171.7647, 239.4737,
      323.0159}},
};

CriterionResult reference_table(const VerifyOptions& opt) {
  Checker c("reference-table");
  if (opt.table_k_max < 0) return c.finish();
  int k_hi = std::min(opt.table_k_max, 10);
  MarkovSource source = MarkovSource::birth_death(0.3);
  Distortion d = Distortion::absolute_error();
  for (const RefBlock& block : kReference) {
    std::vector<TableRow> rows = table_rows(source, d, block.beta, 0, k_hi);
    for (int k = 0; k <= k_hi; ++k) {
      const TableRow& row = rows[static_cast<std::size_t>(k)];
      double dval = row.D;
      if (opt.perturb != 0.0 && block.beta == 0.9 && k == 2) dval += opt.perturb;
      c.check_abs(cell_name("D", 0.3, block.beta, k), block.D[k], dval, 5e-5);
      c.check_abs(cell_name("N", 0.3, block.beta, k), block.N[k], row.N, 5e-5);
      c.check_abs(cell_name("lambda", 0.3, block.beta, k), block.lambda[k], row.lambda, 5e-5);
    }
  }
  return c.finish();
}

CriterionResult worked_example(const VerifyOptions&) {
  Checker c("worked-example");
  MarkovSource source = MarkovSource::birth_death(0.3);
  Distortion d = Distortion::absolute_error();
  KTheta kt = kstar_thetastar(source, d, 0.9, 0.5);
  c.check_true("k_star[alpha=0.5,beta=0.9]", kt.k_star == 1);
  c.check_abs("theta_star[alpha=0.5,beta=0.9]", 0.9039, kt.theta_star, 5e-5);
  c.check_abs("D_star[alpha=0.5,beta=0.9]", 0.044, dt_value(source, d, 0.9, 0.5), 5e-4);
  return c.finish();
}

CriterionResult closed_form_agreement(const VerifyOptions&) {
  Checker c("closed-form-agreement");
  Distortion d = Distortion::absolute_error();
  for (double p : {0.1, 0.3, 0.45}) {
    MarkovSource source = MarkovSource::birth_death(p);
    for (double beta : {0.9, 0.95, 0.99, 1.0}) {
      BDParams params(p, beta);
      for (int k = 1; k <= 20; ++k) {
        auto [Dc, Nc] = bd_metrics(params, k);
        PolicyMetrics pm = policy_metrics(source, d, k, beta);
        c.check_rel(cell_name("D", p, beta, k), Dc, pm.D, 1e-9);
        c.check_rel(cell_name("N", p, beta, k), Nc, pm.N, 1e-9);
      }
    }
  }
  return c.finish();
}

CriterionResult dp_oracle_agreement(const VerifyOptions&) {
  Checker c("dp-oracle-agreement");
  MarkovSource source = MarkovSource::birth_death(0.3);
  Distortion d = Distortion::absolute_error();
  const double beta = 0.9;

  LagrangeCurve curve = cstar_curve(source, d, beta, 6);
  TruncatedChain chain_vi(source, 500);
  for (int j = 0; j < 5; ++j) {
    double lo = curve.breakpoints()[static_cast<std::size_t>(j)];
    double hi = curve.breakpoints()[static_cast<std::size_t>(j) + 1];
    double lambda = 0.5 * (lo + hi);
    ValueTable table = value_iteration(chain_vi, d, lambda, beta, 1e-7);
    c.check_abs("V0[lambda=" + std::to_string(lambda) + "]", curve.value(lambda), table.at(0),
                1e-5);
    auto thr = table.implied_threshold();
    c.check_true("threshold[lambda=" + std::to_string(lambda) + "]",
                 thr.has_value() && *thr == j + 1);
  }

  TruncatedChain chain_dn(source, 300);
  for (int k = 0; k <= 10; ++k) {
    DNTables dn = fixed_point_dn(chain_dn, d, k, beta);
    PolicyMetrics pm = policy_metrics(source, d, k, beta);
    c.check_abs(cell_name("D0", 0.3, beta, k), pm.D, dn.d0, 1e-6);
    c.check_abs(cell_name("N0", 0.3, beta, k), pm.N, dn.n0, 1e-6);
  }
  return c.finish();
}

CriterionResult structural_invariants(const VerifyOptions&) {
  Checker c("structural-invariants");
  Distortion d = Distortion::absolute_error();

  {
    MarkovSource source = MarkovSource::birth_death(0.3);
    LagrangeCurve curve = cstar_curve(source, d, 0.9, 6);
    TruncatedChain chain(source, 500);
    for (int j = 0; j < 5; ++j) {
      double lambda = 0.5 * (curve.breakpoints()[static_cast<std::size_t>(j)] +
                             curve.breakpoints()[static_cast<std::size_t>(j) + 1]);
      ValueTable table = value_iteration(chain, d, lambda, 0.9, 1e-7);
      StructureReport rep = verify_structure(table);
      c.check_true("value-structure[lambda=" + std::to_string(lambda) + "]", rep.all_ok());
    }

    TruncatedChain chain_fh(source, 200);
    FiniteHorizonResult fh = finite_horizon_dp(chain_fh, d, 4.0, 50);
    c.check_true("finite-horizon-thresholds", fh.all_threshold_shaped);
    bool stages_ok = true;
    for (const ValueTable& stage : fh.stages) {
      StructureReport rep = verify_structure(stage);
      if (!rep.even_ok || !rep.increasing_ok) stages_ok = false;
    }
    c.check_true("finite-horizon-structure", stages_ok);
  }

  std::vector<MarkovSource> sources;
  for (double p : {0.1, 0.3, 0.45}) sources.push_back(MarkovSource::birth_death(p));
  sources.push_back(MarkovSource::banded({0.4, 0.2, 0.1}));
  for (const MarkovSource& source : sources) {
    for (double beta : {0.9, 0.95, 1.0}) {
      LMValues prev = lm_values(source, d, 1, beta);
      PolicyMetrics prev_pm = policy_metrics(source, d, 1, beta);
      for (int k = 2; k <= 20; ++k) {
        LMValues cur = lm_values(source, d, k, beta);
        PolicyMetrics pm = policy_metrics(source, d, k, beta);
        std::string cell = cell_name("monotone", source.tail(1), beta, k);
        c.check_true(cell + ".L", cur.L > prev.L);
        c.check_true(cell + ".M", cur.M > prev.M);
        c.check_true(cell + ".N", pm.N < prev_pm.N);
        c.check_true(cell + ".D", pm.D > prev_pm.D || (k == 2 && prev_pm.D == 0.0 && pm.D > 0.0));
        prev = cur;
        prev_pm = pm;
      }
    }
  }
  return c.finish();
}

CriterionResult curve_geometry(const VerifyOptions&) {
  Checker c("curve-geometry");
  Distortion d = Distortion::absolute_error();
  MarkovSource bd03 = MarkovSource::birth_death(0.3);

  for (double beta : {0.9, 0.95, 1.0}) {
    LagrangeCurve curve = cstar_curve(bd03, d, beta, 20);
    double prev_slope = 2.0;
    for (const LagrangeSegment& seg : curve.segments()) {
      LMValues lm = lm_values(bd03, d, seg.threshold, beta);
      double expected = 1.0 / lm.M - (1.0 - beta);
      std::string cell = cell_name("slope", 0.3, beta, seg.threshold);
      c.check_abs(cell, expected, seg.slope, 1e-9);
      c.check_true(cell + ".nonneg", seg.slope >= 0.0);
      c.check_true(cell + ".decreasing", seg.slope < prev_slope);
      prev_slope = seg.slope;
    }

    TradeoffCurve dt = dt_curve(bd03, d, beta, 25);
    const auto& vs = dt.vertices();
    double prev_seg_slope = -1e300;
    bool convex = true, decreasing = true, vertex_eval = true;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
      if (!(vs[i].alpha < vs[i + 1].alpha)) decreasing = false;
      if (vs[i].dist < vs[i + 1].dist) decreasing = false;
      double slope = (vs[i + 1].dist - vs[i].dist) / (vs[i + 1].alpha - vs[i].alpha);
      if (slope < prev_seg_slope - 1e-12) convex = false;
      prev_seg_slope = slope;
      if (dt.value(vs[i].alpha) != vs[i].dist) vertex_eval = false;
    }
    c.check_true(cell_name("dt.convex", 0.3, beta, 0), convex);
    c.check_true(cell_name("dt.decreasing", 0.3, beta, 0), decreasing);
    c.check_true(cell_name("dt.vertex-eval", 0.3, beta, 0), vertex_eval);
    double ac = critical_alpha(bd03, beta);
    for (double alpha : {ac, 0.5 * (ac + 1.0), 0.99}) {
      if (alpha >= 1.0) continue;
      c.check_abs("dt.zero[alpha=" + std::to_string(alpha) + "]", 0.0,
                  dt_value(bd03, d, beta, alpha), 1e-15);
    }
  }

  for (double p : {0.1, 0.3, 0.45}) {
    MarkovSource source = MarkovSource::birth_death(p);
    BDParams params(p, 1.0);
    std::vector<double> lambdas = lambda_sequence(source, d, 1.0, 50);
    for (int k = 1; k <= 50; ++k) {
      double kk = k;
      auto [Dc, Nc] = bd_metrics(params, k);
      PolicyMetrics pm = policy_metrics(source, d, k, 1.0);
      double Df = (kk * kk - 1.0) / (3.0 * kk);
      double Nf = 2.0 * p / (kk * kk);
      c.check_rel(cell_name("id.Dclosed", p, 1.0, k), Df, Dc, 1e-12);
      c.check_rel(cell_name("id.Nclosed", p, 1.0, k), Nf, Nc, 1e-12);
      c.check_rel(cell_name("id.Dgeneric", p, 1.0, k), Df, pm.D, 1e-12);
      c.check_rel(cell_name("id.Ngeneric", p, 1.0, k), Nf, pm.N, 1e-12);
      c.check_rel(cell_name("id.lambda", p, 1.0, k), bd_lambda_avg(p, k),
                  lambdas[static_cast<std::size_t>(k)], 1e-12);
    }
  }
  return c.finish();
}

// Best small cycle schedule (a, b) with a/(a+b) close to `ratio`.
std::pair<long long, long long> matched_schedule(double ratio) {
  long long best_a = 1, best_b = 0;
  double best_err = 1e300;
  for (long long q = 1; q <= 200; ++q) {
    long long a = std::llround(ratio * static_cast<double>(q));
    if (a < 0 || a > q) continue;
    double err = std::abs(static_cast<double>(a) / static_cast<double>(q) - ratio);
    if (err < best_err - 1e-15) {
      best_err = err;
      best_a = a;
      best_b = q - a;
    }
    if (best_err == 0.0) break;
  }
  return {best_a, best_b};
}

CriterionResult simulation_consistency(const VerifyOptions& opt) {
  Checker c("simulation-consistency");
  Distortion d = Distortion::absolute_error();

  for (double p : {0.1, 0.3}) {
    MarkovSource source = MarkovSource::birth_death(p);
    for (double beta : {0.9, 1.0}) {
      for (int k = 0; k <= 5; ++k) {
        PolicyMetrics pm = policy_metrics(source, d, k, beta);
        SimReport rep = simulate(source, d, SimStrategy::threshold(k), beta, 100000, 64,
                                 sub_seed(opt.seed, static_cast<std::uint64_t>(
                                                        1000 + k + 10 * (beta == 1.0) +
                                                        100 * (p == 0.3))),
                                 opt.workers);
        std::string cell = cell_name("sim", p, beta, k);
        c.check_abs(cell + ".D", pm.D, rep.d_hat, 3.0 * rep.d_se);
        c.check_abs(cell + ".N", pm.N, rep.n_hat, 3.0 * rep.n_se);
      }
    }
  }

  MarkovSource bd03 = MarkovSource::birth_death(0.3);
  for (double alpha : {0.5, 0.15}) {
    KTheta kt = kstar_thetastar(bd03, d, 1.0, alpha);
    double dstar = dt_value(bd03, d, 1.0, alpha);
    PolicyMetrics low = policy_metrics(bd03, d, kt.k_star, 1.0);
    double ratio = kt.theta_star * low.N / alpha;
    auto [a, b] = matched_schedule(ratio);

    std::vector<std::pair<std::string, SimStrategy>> strategies;
    strategies.emplace_back("bernoulli", SimStrategy::bernoulli(kt.k_star, kt.theta_star));
    strategies.emplace_back("steering", SimStrategy::steering(kt.k_star, kt.theta_star));
    strategies.emplace_back("timesharing", SimStrategy::timesharing(kt.k_star, {{a, b}}));
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      const auto& [name, strategy] = strategies[s];
      std::uint64_t tag = 2000 + 10 * s + (alpha == 0.5 ? 1 : 2);
      SimReport rep =
          simulate(bd03, d, strategy, 1.0, 1'000'000, 4, sub_seed(opt.seed, tag), opt.workers);
      std::string cell = name + "[alpha=" + std::to_string(alpha) + "]";
      c.check_abs(cell + ".N", alpha, rep.n_hat, 1e-2);
      c.check_rel(cell + ".D", dstar, rep.d_hat, 0.02);
    }
  }
  return c.finish(0.99);
}

CriterionResult multiplier_monotonicity(const VerifyOptions&) {
  Checker c("multiplier-monotonicity");
  Distortion d = Distortion::absolute_error();
  for (double p : {0.1, 0.3, 0.45}) {
    MarkovSource source = MarkovSource::birth_death(p);
    for (double beta : {0.9, 0.95, 1.0}) {
      std::vector<double> lambdas = lambda_sequence(source, d, beta, 50);
      A4Report rep = check_a4(lambdas);
      c.check_true(cell_name("increasing", p, beta, 50), rep.ok);
    }
  }
  return c.finish();
}

}  // namespace

std::vector<CriterionResult> run_verification(const VerifyOptions& options) {
  std::vector<CriterionResult> out;
  out.push_back(reference_table(options));
  out.push_back(worked_example(options));
  out.push_back(closed_form_agreement(options));
  if (!options.quick) out.push_back(dp_oracle_agreement(options));
  out.push_back(structural_invariants(options));
  out.push_back(curve_geometry(options));
  if (!options.quick) out.push_back(simulation_consistency(options));
  out.push_back(multiplier_monotonicity(options));
  return out;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace remest
