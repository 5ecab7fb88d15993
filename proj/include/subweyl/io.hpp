#pragma once

// Scheme files, JSON reports and CSV exports.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "subweyl/lab.hpp"
#include "subweyl/optimizer.hpp"

namespace subweyl::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemeFileVersion = 1;

struct SchemeFileRow {
  ParamSet params;
  std::string A;  // upward-rounded, 6 significant digits
};

struct SchemeMeta {
  std::uint64_t seed = 0;
  long budget = 0;
  int precision = rigor::kDefaultDigits;
  std::string h3_convention = "proof";
  std::string h0_convention = "theta1";
  std::string mu2_form = "sound";
  std::string tool_version = kToolVersion;
};

struct SchemeFile {
  int version = kSchemeFileVersion;
  std::vector<SchemeFileRow> rows;
  SchemeMeta meta;

  // Pipeline settings recorded in meta.
  PipelineConfig pipeline_config() const;
  // Rows as a Scheme starting at the first row's log_t0.
  Scheme to_scheme() const;
};

SchemeFile to_scheme_file(const Scheme& s, const SearchConfig& cfg);

// Throws ParseError on malformed JSON, a missing or mistyped field, a
// non-decimal value, or rows that do not tile [t0, inf).
SchemeFile parse_scheme_file(const std::string& text);
// Canonical form; parse then write is the identity on writer output.
std::string write_scheme_file(const SchemeFile& f);

// A single parameter row: either a bare object with the ParamSet fields or a
// scheme file holding exactly one row.
ParamSet parse_params(const std::string& text);
Json params_json(const ParamSet& p);

// {"value": "...", "direction": "up" | "down" | "exact" | "nearest"}
Json tagged(const rigor::UpperScalar& x, int sig = 20);
Json tagged_exact(long v);
Json tagged_exact(const std::string& decimal);
Json tagged_nearest(double v, int sig = 17);

std::string fnv1a_hex(const std::string& bytes);

// {"kind", "payload", "provenance": {"input_hash", "config", "tool_version"}}
Json make_report(const std::string& kind, Json payload, const std::string& input, Json config);

Json pipeline_config_json(const PipelineConfig& c);
Json certify_payload(const CoefficientReport& r);
Json check_result_json(const lab::CheckResult& r);
Json suite_payload(const lab::SuiteReport& r);

// log_t0, log_t1, the seven row parameters, derived h0 and h3 (upward, 6
// significant digits) and A.
std::string export_csv(const SchemeFile& f);
// log t against the log of each comparator bound and of A t^(27/164) for
// the scheme, on `points` equally spaced values of log t in [from, to].
std::string export_plot_csv(const SchemeFile& f, double from, double to, int points);

}  // namespace subweyl::io
