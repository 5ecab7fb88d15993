#pragma once

// Parameter search per interval, interval schemes over [t_start, inf), and
// crossover heights against published bounds.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "subweyl/pipeline.hpp"

namespace subweyl {

// Search coordinates: h1, h2, eta1, eta2 linear; theta1..3 as natural logs.
inline constexpr int kSearchDim = 7;
using SearchPoint = std::array<double, kSearchDim>;

struct SearchBox {
  SearchPoint lower{1.0005, 1.0005, 0.05, 0.05, -0.6931471805599453, -6.0, -120.0};
  SearchPoint upper{1.5, 1.5, 4.0, 4.0, 1.3862943611198906, 16.0, 5.0};

  bool contains(const SearchPoint& x) const;
};

enum class Penalty {
  Infinite,  // inadmissible trials score +inf
  Resample,  // redraw inadmissible trials, up to 8 times
};

const char* to_string(Penalty p);
Penalty parse_penalty(const std::string& s);

struct SearchConfig {
  long budget = 20000;  // objective evaluations per interval
  std::uint64_t seed = 1;
  SearchBox box;
  int restarts = 1;
  Penalty penalty = Penalty::Infinite;
  int population = 32;
  PipelineConfig pipeline;
  // Injected into the first population in order; their interval fields are
  // ignored.
  std::vector<ParamSet> seeds;

  // Throws PreconditionFailed.
  void validate() const;
};

struct OptimizeResult {
  ParamSet params;
  rigor::UpperScalar A;
  double estimate = 0;  // search objective of the unrounded champion
  long evaluations = 0;
  // (evaluation index, objective) each time the best-so-far improved.
  std::vector<std::pair<long, double>> trace;
};

SearchPoint encode(const ParamSet& p);
// Decimal strings with `sig` significant digits.
ParamSet decode(const SearchPoint& x, const std::string& log_t0, const std::string& log_t1, int sig);

// Best admissible ParamSet found for [exp(log_t0), exp(log_t1)] (log_t1 ==
// "inf" for a tail row), certified with assemble. Deterministic given the
// config. Throws NoAdmissiblePoint.
OptimizeResult optimize_interval(const std::string& log_t0, const std::string& log_t1, const SearchConfig& cfg);

struct SchemeRow {
  ParamSet params;
  rigor::UpperScalar A;
};

struct Scheme {
  std::string log_t_start;
  std::vector<SchemeRow> rows;
  rigor::UpperScalar global_A;
  long evaluations = 0;

  // Tiling, admissibility of every row, and global_A == max row A. Throws
  // InvariantViolation or AdmissibilityError.
  void validate(const PipelineConfig& cfg = {}) const;
  // global_A recomputed from the rows.
  void refresh_global();
};

enum class Comparator { Vdc0618, Hpy2022, Patel307 };

struct AutoBreakpoints {
  std::string tail_log_t0 = "875";
  // Bisect while a row's A exceeds (1 + slack) times the tail row's A.
  double slack = 0.10;
  // Also bisect while a row's A is above the smallest of these comparators,
  // divided by t^(27/164), at the row's start.
  std::vector<Comparator> comparators{Comparator::Hpy2022, Comparator::Patel307};
  double min_width = 0.05;  // in log t
  // Left-over budget then bisects the worst finite row while it is above the
  // tail row's A.
  long total_budget = 1000000;
};

using Breakpoints = std::variant<std::vector<std::string>, AutoBreakpoints>;

// Rows tiling [exp(log_t_start), inf). Explicit breakpoints are log t values;
// ones equal to log_t_start are dropped. Throws NoAdmissiblePoint naming the
// failing interval.
Scheme build_scheme(const std::string& log_t_start, const Breakpoints& breakpoints, const SearchConfig& cfg);

const char* to_string(Comparator c);
Comparator parse_comparator(const std::string& s);
// Smallest log t at which the comparator is valid.
double comparator_min_log_t(Comparator c);
// Enclosure of log of the comparator bound at t = exp(L).
rigor::Interval comparator_log(Comparator c, const rigor::Interval& L);
// Comparator bound divided by t^(27/164), at t = exp(L), as a double.
double comparator_ratio(Comparator c, double L);

// Smallest log t (within 1e-3) beyond which A t^(27/164) stays at or below
// every comparator in `against`. Throws NoCrossover when one side dominates
// on [max validity, 1e6].
double crossover(const rigor::Interval& constant_A, const std::vector<Comparator>& against, int digits = 60);
// Same for a scheme; returns the scheme's start when it already wins there.
double crossover(const Scheme& scheme, const std::vector<Comparator>& against, int digits = 60);

}  // namespace subweyl
