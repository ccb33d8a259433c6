#include "remest/commands.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "remest/constrained.hpp"
#include "remest/errors.hpp"
#include "remest/lagrange.hpp"
#include "remest/version.hpp"

namespace remest {

namespace {

using nlohmann::json;

std::string header_line(const RunConfig& cfg) {
  return "# remest " + std::string(kVersion) + " config=" + hash_hex(cfg.canonical());
}

json tool_info(const RunConfig& cfg) {
  return json{{"version", std::string(kVersion)}, {"config_hash", hash_hex(cfg.canonical())}};
}

// Writes to cfg.out when set, otherwise to `fallback`. The returned stream
// pair keeps the file alive.
struct Sink {
  std::ofstream file;
  std::ostream* os = nullptr;

  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os = &fallback;
    } else {
      file.open(path);
      if (!file) throw ConfigError("cannot open output file '" + path + "'");
      os = &file;
    }
  }
  std::ostream& get() { return *os; }
};

std::string fmt4(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << v;
  return ss.str();
}

std::string fmt_full(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

void validate_model(const RunConfig& cfg, std::ostream& err) {
  MarkovSource source = cfg.source.make();
  Distortion dist = cfg.distortion.make();
  AssumptionReport rep = check_assumptions(source, dist, 50, cfg.lambda.value_or(1.0));
  if (!rep.a2a_ok || !rep.a2b_ok)
    throw ConfigError("distortion fails the shape checks (even, increasing, zero only at 0)");
  if (!rep.a1_ok)
    err << "warning: source tail is not monotone at n = 0; threshold evaluation is exact, "
           "optimality of threshold rules is not guaranteed\n";
}

double pick_beta(const RunConfig& cfg) {
  if (!(cfg.beta > 0.0) || !(cfg.beta <= 1.0)) throw ConfigError("beta must lie in (0, 1]");
  return cfg.beta;
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("malformed number '" + tok + "' in strategy spec");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

SimStrategy parse_strategy(const std::string& spec) {
  std::size_t colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::vector<double> args =
      colon == std::string::npos ? std::vector<double>{} : split_numbers(spec.substr(colon + 1));
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw ConfigError("strategy '" + kind + "' needs " + std::to_string(n) + " argument(s)");
  };
  if (kind == "threshold") {
    need(1);
    return SimStrategy::threshold(static_cast<int>(args[0]));
  }
  if (kind == "bernoulli") {
    need(2);
    return SimStrategy::bernoulli(static_cast<int>(args[0]), args[1]);
  }
  if (kind == "steering") {
    need(2);
    return SimStrategy::steering(static_cast<int>(args[0]), args[1]);
  }
  if (kind == "timesharing") {
    if (args.size() < 3 || args.size() % 2 == 0)
      throw ConfigError("timesharing needs K followed by cycle-count pairs: timesharing:K,A,B[,A,B...]");
    std::vector<std::pair<long long, long long>> schedule;
    for (std::size_t i = 1; i + 1 < args.size(); i += 2)
      schedule.emplace_back(static_cast<long long>(args[i]), static_cast<long long>(args[i + 1]));
    return SimStrategy::timesharing(static_cast<int>(args[0]), std::move(schedule));
  }
  throw ConfigError("unknown strategy kind '" + kind +
                    "' (use threshold, bernoulli, steering, or timesharing)");
}

int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  validate_model(cfg, err);
  MarkovSource source = cfg.source.make();
  Distortion dist = cfg.distortion.make();
  double beta = pick_beta(cfg);
  std::vector<TableRow> rows = table_rows(source, dist, beta, cfg.k_min, cfg.k_max);

  Sink sink(cfg.out, out);
  std::ostream& os = sink.get();
  if (cfg.format == "json") {
    json doc;
    doc["tool"] = tool_info(cfg);
    doc["beta"] = beta;
    doc["rows"] = json::array();
    for (const TableRow& r : rows)
      doc["rows"].push_back({{"k", r.k}, {"D", r.D}, {"N", r.N}, {"lambda", r.lambda}});
    os << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    os << header_line(cfg) << "\n";
    os << "k,D,N,lambda\n";
    for (const TableRow& r : rows)
      os << r.k << "," << fmt_full(r.D) << "," << fmt_full(r.N) << "," << fmt_full(r.lambda)
         << "\n";
  } else {
    os << header_line(cfg) << "\n";
    os << std::setw(4) << "k" << std::setw(12) << "D" << std::setw(12) << "N" << std::setw(14)
       << "lambda" << "\n";
    for (const TableRow& r : rows)
      os << std::setw(4) << r.k << std::setw(12) << fmt4(r.D) << std::setw(12) << fmt4(r.N)
         << std::setw(14) << fmt4(r.lambda) << "\n";
  }
  return 0;
}

int cmd_curve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  validate_model(cfg, err);
  MarkovSource source = cfg.source.make();
  Distortion dist = cfg.distortion.make();
  double beta = pick_beta(cfg);
  TradeoffCurve curve = dt_curve(source, dist, beta, std::max(1, cfg.k_max));

  auto vertices_csv = [&](std::ostream& os) {
    os << header_line(cfg) << "\n";
    os << "k,alpha,distortion\n";
    for (const auto& v : curve.vertices())
      os << v.k << "," << fmt_full(v.alpha) << "," << fmt_full(v.dist) << "\n";
  };
  auto samples_csv = [&](std::ostream& os) {
    os << header_line(cfg) << "\n";
    os << "alpha,distortion\n";
    double lo = curve.vertices().front().alpha;
    double hi = curve.vertices().back().alpha;
    int n = std::max(2, cfg.samples);
    for (int i = 0; i < n; ++i) {
      double alpha = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
      os << fmt_full(alpha) << "," << fmt_full(curve.value(alpha)) << "\n";
    }
  };

  if (cfg.out.empty()) {
    out << "== vertices ==\n";
    vertices_csv(out);
    out << "== samples ==\n";
    samples_csv(out);
  } else {
    std::ofstream fv(cfg.out + ".vertices.csv");
    std::ofstream fs(cfg.out + ".samples.csv");
    if (!fv || !fs) throw ConfigError("cannot open output files at prefix '" + cfg.out + "'");
    vertices_csv(fv);
    samples_csv(fs);
    err << "wrote " << cfg.out << ".vertices.csv and " << cfg.out << ".samples.csv\n";
  }
  return 0;
}

int cmd_lagrange(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  validate_model(cfg, err);
  MarkovSource source = cfg.source.make();
  Distortion dist = cfg.distortion.make();
  double beta = pick_beta(cfg);
  LagrangeCurve curve = cfg.lambda ? cstar_curve_covering(source, dist, beta, *cfg.lambda)
                                   : cstar_curve(source, dist, beta, std::max(1, cfg.k_max));

  auto breakpoints_csv = [&](std::ostream& os) {
    os << header_line(cfg) << "\n";
    os << "k,lambda,slope,intercept\n";
    for (std::size_t s = 0; s < curve.segments().size(); ++s) {
      const LagrangeSegment& seg = curve.segments()[s];
      os << s << "," << fmt_full(curve.breakpoints()[s]) << "," << fmt_full(seg.slope) << ","
         << fmt_full(seg.intercept) << "\n";
    }
  };
  auto samples_csv = [&](std::ostream& os) {
    os << header_line(cfg) << "\n";
    os << "lambda,cost,threshold\n";
    double hi = curve.last_breakpoint();
    int n = std::max(2, cfg.samples);
    for (int i = 0; i < n; ++i) {
      double lambda = hi * static_cast<double>(i) / static_cast<double>(n - 1);
      os << fmt_full(lambda) << "," << fmt_full(curve.value(lambda)) << ","
         << curve.threshold_for(lambda) << "\n";
    }
  };

  if (cfg.format == "json") {
    Sink sink(cfg.out, out);
    json doc;
    doc["tool"] = tool_info(cfg);
    doc["beta"] = beta;
    doc["breakpoints"] = curve.breakpoints();
    doc["segments"] = json::array();
    for (const auto& seg : curve.segments())
      doc["segments"].push_back({{"lo", seg.lo},
                                 {"hi", seg.hi},
                                 {"threshold", seg.threshold},
                                 {"slope", seg.slope},
                                 {"intercept", seg.intercept}});
    sink.get() << doc.dump(2) << "\n";
  } else if (cfg.out.empty()) {
    out << "== breakpoints ==\n";
    breakpoints_csv(out);
    out << "== samples ==\n";
    samples_csv(out);
  } else {
    std::ofstream fb(cfg.out + ".breakpoints.csv");
    std::ofstream fs(cfg.out + ".samples.csv");
    if (!fb || !fs) throw ConfigError("cannot open output files at prefix '" + cfg.out + "'");
    breakpoints_csv(fb);
    samples_csv(fs);
    err << "wrote " << cfg.out << ".breakpoints.csv and " << cfg.out << ".samples.csv\n";
  }
  return 0;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  validate_model(cfg, err);
  if (!cfg.alpha) throw ConfigError("solve needs --alpha");
  MarkovSource source = cfg.source.make();
  Distortion dist = cfg.distortion.make();
  double beta = pick_beta(cfg);

  RandomizedThresholdPolicy policy = optimal_strategy(source, dist, beta, *cfg.alpha);
  double dstar = dt_value(source, dist, beta, *cfg.alpha);
  double ac = critical_alpha(source, beta);

  Sink sink(cfg.out, out);
  std::ostream& os = sink.get();
  if (cfg.format == "json") {
    json doc;
    doc["tool"] = tool_info(cfg);
    doc["alpha"] = *cfg.alpha;
    doc["beta"] = beta;
    doc["k_star"] = policy.k_star;
    doc["theta_star"] = policy.theta_star;
    doc["D_star"] = dstar;
    doc["alpha_critical"] = ac;
    doc["lambda_certificate"] = policy.certificate_lambda;
    os << doc.dump(2) << "\n";
  } else {
    os << header_line(cfg) << "\n" << std::fixed << std::setprecision(6);
    os << "k_star = " << policy.k_star << "\n";
    os << "theta_star = " << policy.theta_star << "\n";
    os << "D_star = " << dstar << "\n";
    os << "alpha_critical = " << ac << "\n";
    os << "lambda_certificate = " << policy.certificate_lambda << "\n";
    os.unsetf(std::ios::fixed);
  }
  return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  validate_model(cfg, err);
  if (cfg.strategy.empty()) throw ConfigError("simulate needs --strategy");
  MarkovSource source = cfg.source.make();
  Distortion dist = cfg.distortion.make();
  double beta = pick_beta(cfg);
  SimStrategy strategy = parse_strategy(cfg.strategy);
  long long horizon = cfg.horizon > 0 ? cfg.horizon : default_horizon(beta);

  SimReport rep =
      simulate(source, dist, strategy, beta, horizon, cfg.replicates, cfg.seed, cfg.workers);

  if (!cfg.trace.empty()) {
    std::ofstream ft(cfg.trace);
    if (!ft) throw ConfigError("cannot open trace file '" + cfg.trace + "'");
    ft << header_line(cfg) << "\n";
    ft << "t,x,u,z,e,xhat\n";
    for (const TraceRow& row :
         simulate_trace(source, strategy, std::min<long long>(horizon, 100000), cfg.seed))
      ft << row.t << "," << row.x << "," << row.u << "," << row.z << "," << row.e << ","
         << row.xhat << "\n";
    err << "wrote trace to " << cfg.trace << "\n";
  }

  Sink sink(cfg.out, out);
  std::ostream& os = sink.get();
  if (cfg.format == "json") {
    json doc;
    doc["tool"] = tool_info(cfg);
    doc["beta"] = beta;
    doc["horizon"] = rep.horizon;
    doc["replicates"] = rep.replicates;
    doc["seed"] = rep.seed;
    doc["D_hat"] = rep.d_hat;
    doc["N_hat"] = rep.n_hat;
    doc["D_se"] = rep.d_se;
    doc["N_se"] = rep.n_se;
    doc["tail_mass_bound"] = rep.tail_mass_bound;
    doc["replicate_summaries"] = json::array();
    for (const auto& s : rep.summaries)
      doc["replicate_summaries"].push_back(
          {{"max_abs_error", s.max_abs_error}, {"transmissions", s.transmissions}});
    os << doc.dump(2) << "\n";
  } else {
    os << header_line(cfg) << "\n";
    os << "D_hat = " << fmt_full(rep.d_hat) << " (se " << fmt_full(rep.d_se) << ")\n";
    os << "N_hat = " << fmt_full(rep.n_hat) << " (se " << fmt_full(rep.n_se) << ")\n";
    os << "horizon = " << rep.horizon << ", replicates = " << rep.replicates
       << ", seed = " << rep.seed << "\n";
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, const VerifyOptions& options, std::ostream& out,
               std::ostream& err) {
  std::vector<CriterionResult> results = run_verification(options);

  Sink sink(cfg.out, out);
  std::ostream& os = sink.get();
  if (cfg.format == "json") {
    json doc;
    doc["tool"] = tool_info(cfg);
    doc["pass"] = all_pass(results);
    doc["criteria"] = json::array();
    for (const auto& r : results) {
      json jr{{"name", r.name},      {"pass", r.pass},           {"vacuous", r.vacuous},
              {"seconds", r.seconds}, {"checks", r.checks},       {"failures", r.failures},
              {"max_err", r.max_err}, {"note", r.note}};
      jr["failure_detail"] = json::array();
      for (const auto& f : r.failure_detail)
        jr["failure_detail"].push_back({{"cell", f.cell},
                                        {"expected", f.expected},
                                        {"actual", f.actual},
                                        {"tol", f.tol}});
      doc["criteria"].push_back(jr);
    }
    os << doc.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      os << (r.pass ? (r.vacuous ? "[WARN]" : "[PASS]") : "[FAIL]") << " " << r.name
         << " (checks=" << r.checks << ", failures=" << r.failures << ", max_err=" << r.max_err
         << ", " << std::fixed << std::setprecision(2) << r.seconds << "s)";
      os.unsetf(std::ios::fixed);
      if (!r.note.empty()) os << "  # " << r.note;
      os << "\n";
      for (const auto& f : r.failure_detail)
        os << "       delta at " << f.cell << ": expected " << f.expected << ", got " << f.actual
           << " (tol " << f.tol << ")\n";
    }
  }
  if (!all_pass(results)) {
    err << "verification failed\n";
    return 3;
  }
  return 0;
}

}  // namespace remest
