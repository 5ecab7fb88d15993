#include "subweyl/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "subweyl/errors.hpp"

namespace subweyl::io {

using rigor::Interval;

namespace {

constexpr const char* kParamFields[] = {"log_t0", "log_t1", "h1",     "h2",    "eta1",
                                        "eta2",   "theta1", "theta2", "theta3"};

std::string* field(ParamSet& p, const std::string& name) {
  if (name == "log_t0") return &p.log_t0;
  if (name == "log_t1") return &p.log_t1;
  if (name == "h1") return &p.h1;
  if (name == "h2") return &p.h2;
  if (name == "eta1") return &p.eta1;
  if (name == "eta2") return &p.eta2;
  if (name == "theta1") return &p.theta1;
  if (name == "theta2") return &p.theta2;
  if (name == "theta3") return &p.theta3;
  return nullptr;
}

const std::string& field(const ParamSet& p, const std::string& name) { return *field(const_cast<ParamSet&>(p), name); }

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

std::string string_member(const Json& obj, const char* key, const std::string& where) {
  const Json& v = member(obj, key, where);
  if (!v.is_string()) throw ParseError(where + ": field '" + key + "' must be a decimal string");
  return v.get<std::string>();
}

template <typename T>
T integer_member(const Json& obj, const char* key, const std::string& where) {
  const Json& v = member(obj, key, where);
  if (!v.is_number_integer()) throw ParseError(where + ": field '" + key + "' must be an integer");
  return v.get<T>();
}

ParamSet params_from(const Json& obj, const std::string& where) {
  ParamSet p;
  for (const char* name : kParamFields) *field(p, name) = string_member(obj, name, where);
  p.validate_syntax();
  return p;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

bool same_decimal(const std::string& a, const std::string& b) {
  if (a == b) return true;
  if (a == "inf" || b == "inf") return false;
  const Interval x = Interval::from_decimal(a, 60), y = Interval::from_decimal(b, 60);
  return x.lo() == y.lo() && x.hi() == y.hi();
}

std::string fmt_g(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig, v);
  return buf;
}

}  // namespace

PipelineConfig SchemeFile::pipeline_config() const {
  PipelineConfig c;
  c.digits = meta.precision;
  c.h3 = parse_h3_convention(meta.h3_convention);
  c.h0 = parse_h0_convention(meta.h0_convention);
  if (meta.mu2_form == "sound")
    c.mu2 = Mu2Form::Sound;
  else if (meta.mu2_form == "displayed")
    c.mu2 = Mu2Form::Displayed;
  else
    throw ParseError("unknown mu2 form '" + meta.mu2_form + "'");
  return c;
}

Scheme SchemeFile::to_scheme() const {
  Scheme s;
  if (rows.empty()) throw ParseError("scheme file has no rows");
  s.log_t_start = rows.front().params.log_t0;
  for (const SchemeFileRow& r : rows)
    s.rows.push_back({r.params, rigor::UpperScalar::upper_of(Interval::from_decimal(r.A, rigor::kDefaultDigits),
                                                             rigor::kDefaultDigits)});
  s.refresh_global();
  return s;
}

SchemeFile to_scheme_file(const Scheme& s, const SearchConfig& cfg) {
  SchemeFile f;
  for (const SchemeRow& r : s.rows) f.rows.push_back({r.params, r.A.to_string(6)});
  f.meta.seed = cfg.seed;
  f.meta.budget = cfg.budget;
  f.meta.precision = cfg.pipeline.digits;
  f.meta.h3_convention = to_string(cfg.pipeline.h3);
  f.meta.h0_convention = to_string(cfg.pipeline.h0);
  f.meta.mu2_form = to_string(cfg.pipeline.mu2);
  return f;
}

SchemeFile parse_scheme_file(const std::string& text) {
  const Json j = parse_json(text);
  SchemeFile f;
  f.version = integer_member<int>(j, "version", "scheme file");
  if (f.version != kSchemeFileVersion) throw ParseError("unsupported scheme file version " + std::to_string(f.version));
  const Json& rows = member(j, "rows", "scheme file");
  if (!rows.is_array() || rows.empty()) throw ParseError("scheme file: 'rows' must be a non-empty array");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "row " + std::to_string(i);
    SchemeFileRow r{params_from(rows[i], where), string_member(rows[i], "A", where)};
    try {
      Interval::from_decimal(r.A, rigor::kMinDigits);
    } catch (const Error&) {
      throw ParseError(where + ": A is not a decimal literal");
    }
    f.rows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < f.rows.size(); ++i) {
    const bool last = i + 1 == f.rows.size();
    if (f.rows[i].params.infinite() != last) throw ParseError("scheme file: exactly the last row must end at inf");
    if (!last && !same_decimal(f.rows[i].params.log_t1, f.rows[i + 1].params.log_t0))
      throw ParseError("scheme file: row " + std::to_string(i) + " does not meet row " + std::to_string(i + 1));
  }
  const Json& m = member(j, "meta", "scheme file");
  f.meta.seed = integer_member<std::uint64_t>(m, "seed", "meta");
  f.meta.budget = integer_member<long>(m, "budget", "meta");
  f.meta.precision = integer_member<int>(m, "precision", "meta");
  f.meta.h3_convention = string_member(m, "h3_convention", "meta");
  f.meta.h0_convention = string_member(m, "h0_convention", "meta");
  if (m.contains("mu2_form")) f.meta.mu2_form = string_member(m, "mu2_form", "meta");
  f.meta.tool_version = string_member(m, "tool_version", "meta");
  f.pipeline_config();  // validates the convention names
  rigor::require_valid_digits(f.meta.precision);
  return f;
}

Json params_json(const ParamSet& p) {
  Json j = Json::object();
  for (const char* name : kParamFields) j[name] = field(p, name);
  return j;
}

std::string write_scheme_file(const SchemeFile& f) {
  Json j;
  j["version"] = f.version;
  j["rows"] = Json::array();
  for (const SchemeFileRow& r : f.rows) {
    Json row = params_json(r.params);
    row["A"] = r.A;
    j["rows"].push_back(std::move(row));
  }
  j["meta"] = {{"seed", f.meta.seed},
               {"budget", f.meta.budget},
               {"precision", f.meta.precision},
               {"h3_convention", f.meta.h3_convention},
               {"h0_convention", f.meta.h0_convention},
               {"mu2_form", f.meta.mu2_form},
               {"tool_version", f.meta.tool_version}};
  return j.dump(2) + "\n";
}

ParamSet parse_params(const std::string& text) {
  const Json j = parse_json(text);
  if (j.is_object() && j.contains("rows")) {
    const SchemeFile f = parse_scheme_file(text);
    if (f.rows.size() != 1) throw ParseError("parameter file holds " + std::to_string(f.rows.size()) + " rows, expected 1");
    return f.rows.front().params;
  }
  return params_from(j, "parameters");
}

Json tagged(const rigor::UpperScalar& x, int sig) {
  return {{"value", x.to_string(sig)}, {"direction", x.direction() == rigor::Direction::Up ? "up" : "down"}};
}

Json tagged_exact(long v) { return {{"value", std::to_string(v)}, {"direction", "exact"}}; }
Json tagged_exact(const std::string& decimal) { return {{"value", decimal}, {"direction", "exact"}}; }
Json tagged_nearest(double v, int sig) { return {{"value", fmt_g(v, sig)}, {"direction", "nearest"}}; }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) h = (h ^ c) * 0x100000001b3ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json make_report(const std::string& kind, Json payload, const std::string& input, Json config) {
  Json j;
  j["kind"] = kind;
  j["payload"] = std::move(payload);
  j["provenance"] = {{"input_hash", "fnv1a64:" + fnv1a_hex(input)}, {"config", std::move(config)}, {"tool_version", kToolVersion}};
  return j;
}

Json pipeline_config_json(const PipelineConfig& c) {
  return {{"precision", c.digits},
          {"h3_convention", to_string(c.h3)},
          {"h0_convention", to_string(c.h0)},
          {"mu2_form", to_string(c.mu2)}};
}

Json certify_payload(const CoefficientReport& r) {
  Json j;
  j["params"] = params_json(r.params);
  j["precision_used"] = r.digits;
  j["K_t1"] = r.K_t1 ? tagged_exact(*r.K_t1) : Json(nullptr);
  j["R_t1"] = r.R_t1 ? tagged_exact(*r.R_t1) : Json(nullptr);
  Json derived;
  for (auto [name, v] : {std::pair{"h0", &r.h0}, {"h3", &r.h3}, {"h5", &r.h5}, {"q0", &r.q0}, {"alpha", &r.alpha}})
    derived[name] = tagged(*v);
  j["derived"] = std::move(derived);
  Json c;
  for (auto [name, v] : {std::pair{"A4", &r.A4}, {"B4", &r.B4}, {"A5", &r.A5}, {"B5", &r.B5}, {"C0", &r.C0},
                         {"D3", &r.D3}, {"D4", &r.D4}, {"C1", &r.C1}, {"C2", &r.C2}, {"E1", &r.E1},
                         {"E2", &r.E2}, {"E3", &r.E3}, {"D3_term", &r.D3_term}, {"D4_term", &r.D4_term}})
    c[name] = tagged(*v);
  c[r.params.infinite() ? "C5" : "C4"] = tagged(r.C4_or_C5);
  for (const auto& [name, v] : r.mu) c[name] = tagged(v);
  j["coefficients"] = std::move(c);
  j["breakdown"] = {{"S1", tagged(r.breakdown.S1)},
                    {"S2", tagged(r.breakdown.S2)},
                    {"S3", tagged(r.breakdown.S3)},
                    {"RS", tagged(r.breakdown.RS)}};
  j["A_total"] = tagged(r.A_total);
  j["A_total_6"] = tagged(r.A_total, 6);
  return j;
}

Json check_result_json(const lab::CheckResult& r) {
  Json j = {{"lhs", tagged_nearest(static_cast<double>(r.lhs))},
            {"rhs", tagged_nearest(static_cast<double>(r.rhs))},
            {"margin", tagged_nearest(static_cast<double>(r.margin))},
            {"eps", tagged_nearest(static_cast<double>(r.eps), 3)},
            {"pass", r.pass}};
  if (r.running_lhs) j["running_lhs"] = tagged_nearest(static_cast<double>(*r.running_lhs));
  return j;
}

Json suite_payload(const lab::SuiteReport& r) {
  Json stats = Json::array();
  for (const std::string& name : lab::suite_checks()) {
    auto it = r.stats.find(name);
    if (it == r.stats.end()) continue;
    stats.push_back({{"check", name},
                     {"runs", it->second.runs},
                     {"failures", it->second.failures},
                     {"min_margin", tagged_nearest(static_cast<double>(it->second.min_margin))}});
  }
  Json failures = Json::array();
  for (const lab::LemmaFailure& f : r.failures)
    failures.push_back({{"check", f.check},
                        {"trial_seed", f.trial_seed},
                        {"config", f.config},
                        {"result", check_result_json(f.result)}});
  return {{"trials", r.config.trials},
          {"seed", r.config.seed},
          {"max_t", tagged_nearest(static_cast<double>(r.config.max_t))},
          {"max_N", r.config.max_N},
          {"pass", r.pass()},
          {"stats", std::move(stats)},
          {"failures", std::move(failures)}};
}

namespace {

// RFC 4180: quote fields containing separators, quotes or line breaks.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void csv_row(std::ostringstream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
  out << "\r\n";
}

}  // namespace

std::string export_csv(const SchemeFile& f) {
  const PipelineConfig cfg = f.pipeline_config();
  std::ostringstream out;
  csv_row(out, {"log_t0", "log_t1", "h1", "h2", "eta1", "eta2", "theta1", "theta2", "theta3", "h0", "h3", "A"});
  for (const SchemeFileRow& r : f.rows) {
    const CoefficientReport rep = assemble(r.params, cfg);
    std::vector<std::string> fields;
    for (const char* name : kParamFields) fields.push_back(field(r.params, name));
    fields.push_back(rep.h0.to_string(6));
    fields.push_back(rep.h3.to_string(6));
    fields.push_back(r.A);
    csv_row(out, fields);
  }
  return out.str();
}

std::string export_plot_csv(const SchemeFile& f, double from, double to, int points) {
  if (points < 2 || !(from < to)) throw PreconditionFailed("plot range needs from < to and at least 2 points");
  const Scheme s = f.to_scheme();
  const Comparator all[] = {Comparator::Vdc0618, Comparator::Hpy2022, Comparator::Patel307};
  std::ostringstream out;
  std::vector<std::string> header{"log_t"};
  for (Comparator c : all) header.push_back(std::string("log_") + to_string(c));
  header.push_back("log_scheme");
  csv_row(out, header);

  const double start = std::stod(s.log_t_start);
  for (int i = 0; i < points; ++i) {
    const double L = from + (to - from) * i / (points - 1);
    std::vector<std::string> row{fmt_g(L, 10)};
    for (Comparator c : all)
      row.push_back(L >= comparator_min_log_t(c) ? fmt_g(comparator_log(c, Interval::from_double(L, 30)).mid_double(), 12)
                                                 : "");
    std::string scheme_cell;
    if (L >= start) {
      for (const SchemeRow& r : s.rows) {
        if (r.params.infinite() || L < std::stod(r.params.log_t1)) {
          scheme_cell = fmt_g(std::log(r.A.to_double()) + 27.0 / 164.0 * L, 12);
          break;
        }
      }
    }
    row.push_back(scheme_cell);
    csv_row(out, row);
  }
  return out.str();
}

}  // namespace subweyl::io
