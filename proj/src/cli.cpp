#include "subweyl/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "subweyl/errors.hpp"
#include "subweyl/io.hpp"

namespace subweyl::cli {

namespace {

using io::Json;
using rigor::Interval;

enum Exit { kOk = 0, kAbove = 1, kInput = 2, kPrecision = 3, kCheckFailed = 4, kNumerical = 5 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw ParseError("cannot write '" + path + "'");
}

int default_precision() {
  const char* env = std::getenv("ZETA_CERTIFY_PRECISION");
  if (!env || !*env) return rigor::kDefaultDigits;
  char* end = nullptr;
  const long d = std::strtol(env, &end, 10);
  if (*end != '\0') throw ParseError(std::string("ZETA_CERTIFY_PRECISION is not an integer: ") + env);
  rigor::require_valid_digits(static_cast<int>(d));
  return static_cast<int>(d);
}

std::vector<Comparator> parse_comparators(const std::vector<std::string>& names) {
  std::vector<Comparator> out;
  for (const std::string& n : names) out.push_back(parse_comparator(n));
  return out;
}

Json comparator_names(const std::vector<Comparator>& cs) {
  Json j = Json::array();
  for (Comparator c : cs) j.push_back(to_string(c));
  return j;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Flags shared by the commands that certify.
struct PipelineFlags {
  int precision = 0;
  std::string h3 = "proof", h0 = "theta1", mu2 = "sound";

  void add(CLI::App* app) {
    app->add_option("--precision", precision, "working precision in decimal digits (default $ZETA_CERTIFY_PRECISION or 60)");
    app->add_option("--h3-convention", h3, "h argument of A4 in D3")->check(CLI::IsMember({"proof", "statement"}));
    app->add_option("--h0-convention", h0, "denominator of h0")->check(CLI::IsMember({"theta1", "theta2"}));
    app->add_option("--mu2", mu2, "finite-interval mu2 factor")->check(CLI::IsMember({"sound", "displayed"}));
  }

  PipelineConfig config() const {
    PipelineConfig c;
    c.digits = precision > 0 ? precision : default_precision();
    rigor::require_valid_digits(c.digits);
    c.h3 = parse_h3_convention(h3);
    c.h0 = parse_h0_convention(h0);
    c.mu2 = mu2 == "sound" ? Mu2Form::Sound : Mu2Form::Displayed;
    return c;
  }
};

bool at_most(const rigor::UpperScalar& A, const std::string& threshold, int digits) {
  return A.value() <= Interval::from_decimal(threshold, digits).lo();
}

// ---- certify ----

struct CertifyArgs {
  std::string params_path;
  std::optional<std::string> t0, t1;
  std::vector<std::string> sets;
  std::string threshold = "66.7";
  std::string format = "text";
  PipelineFlags pipeline;
};

void print_certify_text(std::ostream& out, const CoefficientReport& r, const std::string& threshold, bool ok) {
  auto line = [&](const std::string& name, const rigor::UpperScalar& v) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-11s %-24s %s\n", name.c_str(), v.to_string(12).c_str(),
                  v.direction() == rigor::Direction::Up ? "up" : "down");
    out << buf;
  };
  const ParamSet& p = r.params;
  out << "row       log t in [" << p.log_t0 << ", " << p.log_t1 << "]\n"
      << "params    h1=" << p.h1 << " h2=" << p.h2 << " eta1=" << p.eta1 << " eta2=" << p.eta2 << " theta1=" << p.theta1
      << " theta2=" << p.theta2 << " theta3=" << p.theta3 << "\n"
      << "config    precision " << r.config.digits << " (used " << r.digits << "), h3 " << to_string(r.config.h3)
      << ", h0 " << to_string(r.config.h0) << ", mu2 " << to_string(r.config.mu2) << "\n";
  if (r.K_t1) out << "cutoffs   K(t1) = " << *r.K_t1 << ", R(t1) = " << *r.R_t1 << "\n";
  out << "derived\n";
  line("h0", r.h0);
  line("h3", r.h3);
  line("h5", r.h5);
  line("q0", r.q0);
  line("alpha", r.alpha);
  out << "coefficients\n";
  for (auto [n, v] : {std::pair{"A4", &r.A4}, {"B4", &r.B4}, {"A5", &r.A5}, {"B5", &r.B5}, {"C0", &r.C0}, {"D3", &r.D3},
                      {"D4", &r.D4}, {"C1", &r.C1}, {"C2", &r.C2}, {"E1", &r.E1}, {"E2", &r.E2}, {"E3", &r.E3}})
    line(n, *v);
  line(p.infinite() ? "C5" : "C4", r.C4_or_C5);
  for (const auto& [n, v] : r.mu) line(n, v);
  out << "breakdown\n";
  line("S1", r.breakdown.S1);
  line("S2", r.breakdown.S2);
  line("S3", r.breakdown.S3);
  line("RS", r.breakdown.RS);
  out << "A_total   " << r.A_total.to_string(6) << " (up; " << r.A_total.to_string(20) << ")\n"
      << "threshold " << threshold << ": " << (ok ? "A_total <= threshold" : "A_total > threshold") << "\n";
}

int cmd_certify(const CertifyArgs& a, std::ostream& out) {
  std::string input;
  ParamSet p;
  if (a.params_path.empty()) {
    p = published_tail_row();
    input = io::params_json(p).dump();
  } else {
    input = read_file(a.params_path);
    p = io::parse_params(input);
  }
  if (a.t0) p.log_t0 = *a.t0;
  if (a.t1) p.log_t1 = *a.t1;
  for (const std::string& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("--set expects name=value, got '" + s + "'");
    Json j = io::params_json(p);
    const std::string key = s.substr(0, eq);
    if (!j.contains(key)) throw ParseError("--set: unknown parameter '" + key + "'");
    j[key] = s.substr(eq + 1);
    p = io::parse_params(j.dump());
  }
  p.validate_syntax();
  Interval::from_decimal(a.threshold, rigor::kMinDigits);

  const PipelineConfig cfg = a.pipeline.config();
  const CoefficientReport r = assemble(p, cfg);
  const bool ok = at_most(r.A_total, a.threshold, cfg.digits);
  if (a.format == "json") {
    Json payload = io::certify_payload(r);
    payload["threshold"] = io::tagged_exact(a.threshold);
    payload["at_or_below_threshold"] = ok;
    Json config = io::pipeline_config_json(cfg);
    out << io::make_report("certify", std::move(payload), input, std::move(config)).dump(2) << "\n";
  } else {
    print_certify_text(out, r, a.threshold, ok);
  }
  return ok ? kOk : kAbove;
}

// ---- table ----

struct TableArgs {
  std::string scheme_path;
  std::optional<std::string> threshold;
  std::string format = "text";
  int precision = 0;
};

int cmd_table(const TableArgs& a, std::ostream& out) {
  const std::string input = read_file(a.scheme_path);
  const io::SchemeFile f = io::parse_scheme_file(input);
  PipelineConfig cfg = f.pipeline_config();
  if (a.precision > 0) cfg.digits = a.precision;
  rigor::require_valid_digits(cfg.digits);

  Json rows = Json::array();
  std::optional<rigor::UpperScalar> global;
  std::vector<std::size_t> overclaimed;
  std::ostringstream text;
  text << "  #  log_t0        log_t1        A (file)    A (certified)\n";
  for (std::size_t i = 0; i < f.rows.size(); ++i) {
    const io::SchemeFileRow& row = f.rows[i];
    const CoefficientReport r = assemble(row.params, cfg);
    const bool within = at_most(r.A_total, row.A, cfg.digits);
    if (!within) overclaimed.push_back(i);
    if (!global || r.A_total.value() > global->value()) global = r.A_total;
    rows.push_back({{"index", i},
                    {"log_t0", row.params.log_t0},
                    {"log_t1", row.params.log_t1},
                    {"A_file", io::tagged_exact(row.A)},
                    {"A_certified", io::tagged(r.A_total)},
                    {"within_printed_rounding", within}});
    char buf[200];
    std::snprintf(buf, sizeof buf, "%3zu  %-12s  %-12s  %-10s  %s%s\n", i, row.params.log_t0.c_str(),
                  row.params.log_t1.c_str(), row.A.c_str(), r.A_total.to_string(12).c_str(), within ? "" : "  EXCEEDS FILE");
    text << buf;
  }
  const bool ok = !a.threshold || at_most(*global, *a.threshold, cfg.digits);
  if (a.format == "json") {
    Json payload = {{"rows", std::move(rows)}, {"global_A", io::tagged(*global)}, {"global_A_6", io::tagged(*global, 6)}};
    if (a.threshold) {
      payload["threshold"] = io::tagged_exact(*a.threshold);
      payload["at_or_below_threshold"] = ok;
    }
    out << io::make_report("table", std::move(payload), input, io::pipeline_config_json(cfg)).dump(2) << "\n";
  } else {
    out << text.str() << "global A = " << global->to_string(6) << " (up)\n";
    if (a.threshold) out << "threshold " << *a.threshold << ": " << (ok ? "met" : "exceeded") << "\n";
  }
  if (!overclaimed.empty())
    throw ParseError("row " + std::to_string(overclaimed.front()) + " certifies above the A printed in the file");
  return ok ? kOk : kAbove;
}

// ---- optimize ----

struct OptimizeArgs {
  std::string t0, t1;
  std::vector<std::string> breakpoints;
  bool automatic = false;
  AutoBreakpoints auto_cfg;
  std::vector<std::string> auto_comparators;
  long budget = 20000;
  std::uint64_t seed = 1;
  int restarts = 1;
  std::string penalty = "infinite";
  bool no_seed_row = false;
  std::string out_path;
  PipelineFlags pipeline;
};

int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
  SearchConfig cfg;
  cfg.budget = a.budget;
  cfg.seed = a.seed;
  cfg.restarts = a.restarts;
  cfg.penalty = parse_penalty(a.penalty);
  cfg.pipeline = a.pipeline.config();
  if (!a.no_seed_row) cfg.seeds = {published_tail_row()};
  cfg.validate();

  if (!a.t1.empty() && a.t1 != "inf") {
    if (a.automatic || !a.breakpoints.empty()) throw ParseError("--t1 cannot be combined with --auto or --breakpoints");
    const OptimizeResult r = optimize_interval(a.t0, a.t1, cfg);
    Json payload = {{"params", io::params_json(r.params)},
                    {"A", io::tagged(r.A)},
                    {"A_6", io::tagged(r.A, 6)},
                    {"estimate", io::tagged_nearest(r.estimate)},
                    {"evaluations", r.evaluations}};
    Json config = io::pipeline_config_json(cfg.pipeline);
    config["budget"] = cfg.budget;
    config["seed"] = cfg.seed;
    const std::string text = io::make_report("optimize", std::move(payload), a.t0 + "/" + a.t1, std::move(config)).dump(2) + "\n";
    if (a.out_path.empty())
      out << text;
    else
      write_file(a.out_path, text);
    return kOk;
  }

  Breakpoints bp = a.breakpoints;
  if (a.automatic) {
    if (!a.breakpoints.empty()) throw ParseError("--auto and --breakpoints are exclusive");
    AutoBreakpoints ab = a.auto_cfg;
    if (!a.auto_comparators.empty()) ab.comparators = parse_comparators(a.auto_comparators);
    bp = ab;
  }
  const Scheme s = build_scheme(a.t0, bp, cfg);
  const std::string text = io::write_scheme_file(io::to_scheme_file(s, cfg));
  if (a.out_path.empty()) {
    out << text;
  } else {
    write_file(a.out_path, text);
    out << s.rows.size() << " rows, global A = " << s.global_A.to_string(6) << " (up), " << s.evaluations
        << " evaluations, written to " << a.out_path << "\n";
  }
  return kOk;
}

// ---- crossover ----

struct CrossoverArgs {
  std::optional<std::string> constant;
  std::string scheme_path;
  std::vector<std::string> against{"hpy_2022", "patel_307"};
  std::string format = "text";
  int precision = 0;
};

int cmd_crossover(const CrossoverArgs& a, std::ostream& out) {
  if (a.constant.has_value() == !a.scheme_path.empty()) throw ParseError("give exactly one of --constant and --scheme");
  const std::vector<Comparator> against = parse_comparators(a.against);
  const int digits = a.precision > 0 ? a.precision : default_precision();
  std::string input;
  Json subject;
  double L = 0;
  try {
    if (a.constant) {
      input = *a.constant;
      const Interval A = Interval::from_decimal(*a.constant, digits);
      subject = {{"constant", io::tagged_exact(*a.constant)}};
      L = crossover(A, against, digits);
    } else {
      input = read_file(a.scheme_path);
      const Scheme s = io::parse_scheme_file(input).to_scheme();
      subject = {{"scheme_global_A", io::tagged(s.global_A, 6)}, {"log_t_start", s.log_t_start}};
      L = crossover(s, against, digits);
    }
  } catch (const NoCrossover& e) {
    if (a.format == "json") {
      Json payload = {{"subject", subject}, {"against", comparator_names(against)}, {"log_t", nullptr}, {"reason", e.what()}};
      out << io::make_report("crossover", std::move(payload), input, {{"precision", digits}}).dump(2) << "\n";
    } else {
      out << "no crossover: " << e.what() << "\n";
    }
    return kAbove;
  }
  if (a.format == "json") {
    Json payload = {{"subject", std::move(subject)},
                    {"against", comparator_names(against)},
                    {"log_t", io::tagged_nearest(L, 10)},
                    {"tolerance", io::tagged_exact(std::string("0.001"))}};
    out << io::make_report("crossover", std::move(payload), input, {{"precision", digits}}).dump(2) << "\n";
  } else {
    out << "crossover at log t = " << fmt("%.4f", L) << " (tolerance 1e-3)\n";
  }
  return kOk;
}

// ---- verify-lemmas ----

struct LemmaArgs {
  lab::SuiteConfig suite;
  double max_t = 1e6;
  std::string check;
  std::optional<std::uint64_t> trial_seed;
  std::string format = "text";
};

int cmd_verify_lemmas(const LemmaArgs& a, std::ostream& out) {
  lab::SuiteConfig cfg = a.suite;
  cfg.max_t = a.max_t;
  Json config = {{"trials", cfg.trials}, {"seed", cfg.seed}, {"max_t", a.max_t}, {"max_N", cfg.max_N}};

  if (a.trial_seed) {
    if (a.check.empty()) throw ParseError("--trial-seed needs --check");
    const auto [desc, r] = lab::run_trial(a.check, *a.trial_seed, cfg);
    if (a.format == "json") {
      Json payload = {{"check", a.check}, {"trial_seed", *a.trial_seed}, {"config", desc}, {"result", io::check_result_json(r)}};
      out << io::make_report("lemma-check", std::move(payload), a.check, std::move(config)).dump(2) << "\n";
    } else {
      out << a.check << " seed " << *a.trial_seed << ": " << desc << "\n  lhs " << fmt("%.12g", double(r.lhs)) << "  rhs "
          << fmt("%.12g", double(r.rhs)) << "  margin " << fmt("%.6g", double(r.margin)) << "  "
          << (r.pass ? "pass" : "FAIL") << "\n";
    }
    return r.pass ? kOk : kCheckFailed;
  }

  const lab::SuiteReport rep = lab::run_lemma_suite(cfg);
  if (a.format == "json") {
    out << io::make_report("lemma-check", io::suite_payload(rep), "", std::move(config)).dump(2) << "\n";
  } else {
    for (const std::string& name : lab::suite_checks()) {
      const lab::CheckStats& st = rep.stats.at(name);
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-20s runs %4d  failures %3d  min margin %.6g\n", name.c_str(), st.runs, st.failures,
                    static_cast<double>(st.min_margin));
      out << buf;
    }
    for (const lab::LemmaFailure& f : rep.failures)
      out << "FAIL " << f.check << " (reproduce: --check " << f.check << " --trial-seed " << f.trial_seed << ") " << f.config
          << "\n";
  }
  return rep.pass() ? kOk : kCheckFailed;
}

// ---- zeta-check ----

struct ZetaArgs {
  std::vector<double> ts;
  int grid = 0;
  double from = 200, to = 1e8;
  std::string format = "text";
};

int cmd_zeta_check(const ZetaArgs& a, std::ostream& out) {
  std::vector<double> ts = a.ts;
  if (a.grid > 0) {
    if (a.grid < 2 || !(a.from > 0) || !(a.from < a.to)) throw ParseError("--grid needs at least 2 points and 0 < from < to");
    for (int i = 0; i < a.grid; ++i) ts.push_back(std::min(a.to, a.from * std::pow(a.to / a.from, i / double(a.grid - 1))));
  }
  if (ts.empty()) throw ParseError("give --t or --grid");
  bool all_ok = true;
  Json rows = Json::array();
  std::ostringstream text;
  text << "t                  |zeta| oracle       error      rs_upper          0.618 t^(1/6) log t\n";
  for (double t : ts) {
    const lab::ZetaValue z = lab::zeta_oracle(t);
    const double vdc = 0.618 * std::pow(t, 1.0 / 6) * std::log(t);
    std::optional<rigor::UpperScalar> rs;
    if (t >= 200) rs = lab::rs_upper(t);
    const bool rs_ok = !rs || rs->to_double() >= z.value - z.error;
    const bool vdc_ok = z.value - z.error <= vdc;
    all_ok = all_ok && rs_ok && vdc_ok;
    rows.push_back({{"t", io::tagged_nearest(t)},
                    {"zeta", io::tagged_nearest(z.value, 15)},
                    {"zeta_error", {{"value", fmt("%.3g", z.error)}, {"direction", "up"}}},
                    {"rs_upper", rs ? io::tagged(*rs, 15) : Json(nullptr)},
                    {"vdc_bound", io::tagged_nearest(vdc, 15)},
                    {"rs_upper_ok", rs_ok},
                    {"vdc_ok", vdc_ok}});
    char buf[200];
    std::snprintf(buf, sizeof buf, "%-17.10g  %-18.15g  %-9.2g  %-16s  %.10g%s\n", t, z.value, z.error,
                  rs ? rs->to_string(12).c_str() : "-", vdc, rs_ok && vdc_ok ? "" : "  VIOLATION");
    text << buf;
  }
  if (a.format == "json")
    out << io::make_report("zeta-check", {{"rows", std::move(rows)}, {"pass", all_ok}}, "", {{"tolerance", 1e-6}}).dump(2)
        << "\n";
  else
    out << text.str();
  return all_ok ? kOk : kCheckFailed;
}

// ---- export ----

struct ExportArgs {
  std::string scheme_path;
  std::string out_prefix;
  bool plot = false;
  std::optional<double> from, to;
  int points = 201;
};

int cmd_export(const ExportArgs& a, std::ostream& out) {
  const io::SchemeFile f = io::parse_scheme_file(read_file(a.scheme_path));
  const double from = a.from.value_or(std::stod(f.rows.front().params.log_t0));
  const double to = a.to.value_or(std::max(from + 1, 150.0));
  if (a.out_prefix.empty()) {
    out << (a.plot ? io::export_plot_csv(f, from, to, a.points) : io::export_csv(f));
    return kOk;
  }
  write_file(a.out_prefix + ".csv", io::export_csv(f));
  write_file(a.out_prefix + "_plot.csv", io::export_plot_csv(f, from, to, a.points));
  out << "wrote " << a.out_prefix << ".csv and " << a.out_prefix << "_plot.csv\n";
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explicit sub-Weyl bounds for zeta on the critical line", "subweyl"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"text", "json"};

  CertifyArgs ca;
  auto* certify = app.add_subcommand("certify", "certify one parameter row");
  certify->add_option("--params", ca.params_path, "parameter JSON (default: the built-in exp(875) tail row)")
      ->check(CLI::ExistingFile);
  certify->add_option("--t0", ca.t0, "override log t0");
  certify->add_option("--t1", ca.t1, "override log t1 (\"inf\" for a tail row)");
  certify->add_option("--set", ca.sets, "override a parameter, name=value");
  certify->add_option("--threshold", ca.threshold, "exit 0 iff A_total <= threshold");
  certify->add_option("--format", ca.format)->check(CLI::IsMember(formats));
  ca.pipeline.add(certify);

  TableArgs ta;
  auto* table = app.add_subcommand("table", "re-certify every row of a scheme file");
  table->add_option("--scheme", ta.scheme_path)->required()->check(CLI::ExistingFile);
  table->add_option("--threshold", ta.threshold);
  table->add_option("--precision", ta.precision);
  table->add_option("--format", ta.format)->check(CLI::IsMember(formats));

  OptimizeArgs oa;
  auto* optimize = app.add_subcommand("optimize", "search parameters for one interval or a whole scheme");
  optimize->add_option("--t0", oa.t0, "log t at the start")->required();
  optimize->add_option("--t1", oa.t1, "log t at the end of a single finite interval");
  optimize->add_option("--breakpoints", oa.breakpoints, "explicit log t breakpoints")->delimiter(',');
  optimize->add_flag("--auto", oa.automatic, "choose breakpoints automatically");
  optimize->add_option("--tail", oa.auto_cfg.tail_log_t0, "AUTO: log t0 of the tail row");
  optimize->add_option("--slack", oa.auto_cfg.slack, "AUTO: allowed excess over the tail row's A");
  optimize->add_option("--min-width", oa.auto_cfg.min_width, "AUTO: smallest interval width in log t");
  optimize->add_option("--total-budget", oa.auto_cfg.total_budget, "AUTO: evaluations over all intervals");
  optimize->add_option("--auto-against", oa.auto_comparators, "AUTO: comparators steering bisection")->delimiter(',');
  optimize->add_option("--budget", oa.budget, "evaluations per interval");
  optimize->add_option("--seed", oa.seed);
  optimize->add_option("--restarts", oa.restarts);
  optimize->add_option("--penalty", oa.penalty)->check(CLI::IsMember({"infinite", "resample"}));
  optimize->add_flag("--no-seed-row", oa.no_seed_row, "do not seed the search with the built-in tail row");
  optimize->add_option("--out", oa.out_path, "write the scheme file here instead of stdout");
  oa.pipeline.add(optimize);

  CrossoverArgs xa;
  auto* cross = app.add_subcommand("crossover", "log t beyond which a bound beats the comparators");
  cross->add_option("--constant", xa.constant, "constant A in A t^(27/164)");
  cross->add_option("--scheme", xa.scheme_path)->check(CLI::ExistingFile);
  cross->add_option("--against", xa.against, "vdc_0618, hpy_2022, patel_307")->delimiter(',');
  cross->add_option("--precision", xa.precision);
  cross->add_option("--format", xa.format)->check(CLI::IsMember(formats));

  LemmaArgs la;
  auto* lemmas = app.add_subcommand("verify-lemmas", "randomized checks of the exponential-sum inequalities");
  lemmas->add_option("--trials", la.suite.trials);
  lemmas->add_option("--seed", la.suite.seed);
  lemmas->add_option("--max-t", la.max_t);
  lemmas->add_option("--max-n", la.suite.max_N);
  lemmas->add_option("--check", la.check, "with --trial-seed: rerun a single trial");
  lemmas->add_option("--trial-seed", la.trial_seed);
  lemmas->add_option("--format", la.format)->check(CLI::IsMember(formats));

  ZetaArgs za;
  auto* zeta = app.add_subcommand("zeta-check", "zeta oracle against rs_upper and the 0.618 bound");
  zeta->add_option("--t", za.ts);
  zeta->add_option("--grid", za.grid, "number of log-spaced points");
  zeta->add_option("--from", za.from);
  zeta->add_option("--to", za.to);
  zeta->add_option("--format", za.format)->check(CLI::IsMember(formats));

  ExportArgs ea;
  auto* exp = app.add_subcommand("export", "CSV of a scheme file and plot data");
  exp->add_option("--scheme", ea.scheme_path)->required()->check(CLI::ExistingFile);
  exp->add_option("--out", ea.out_prefix, "write PREFIX.csv and PREFIX_plot.csv");
  exp->add_flag("--plot", ea.plot, "print plot data instead of the row table");
  exp->add_option("--plot-from", ea.from);
  exp->add_option("--plot-to", ea.to);
  exp->add_option("--points", ea.points);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*certify) return cmd_certify(ca, out);
    if (*table) return cmd_table(ta, out);
    if (*optimize) return cmd_optimize(oa, out);
    if (*cross) return cmd_crossover(xa, out);
    if (*lemmas) return cmd_verify_lemmas(la, out);
    if (*zeta) return cmd_zeta_check(za, out);
    if (*exp) return cmd_export(ea, out);
  } catch (const AdmissibilityError& e) {
    err << "inadmissible: " << e.predicate() << "\n" << e.what() << "\n";
    return kInput;
  } catch (const PrecisionExhausted& e) {
    err << "precision exhausted: " << e.what() << "\n";
    return kPrecision;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const PreconditionFailed& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const NoAdmissiblePoint& e) {
    err << "error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kInput;
}

}  // namespace subweyl::cli
