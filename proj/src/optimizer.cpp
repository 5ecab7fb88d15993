#include "subweyl/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include "subweyl/errors.hpp"

namespace subweyl {

using rigor::Interval;
using rigor::UpperScalar;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_sig(double v, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig, v);
  return buf;
}

FastParams fast_params(const SearchPoint& x, double L0, std::optional<double> L1) {
  FastParams f;
  f.log_t0 = L0;
  f.log_t1 = L1;
  f.h1 = x[0];
  f.h2 = x[1];
  f.eta1 = x[2];
  f.eta2 = x[3];
  f.theta1 = std::exp(x[4]);
  f.theta2 = std::exp(x[5]);
  f.theta3 = std::exp(x[6]);
  return f;
}

double score(const SearchPoint& x, double L0, std::optional<double> L1, const PipelineConfig& cfg) {
  try {
    return estimate_A(fast_params(x, L0, L1), cfg);
  } catch (const Error&) {
    return kInf;
  }
}

SearchPoint clip(SearchPoint x, const SearchBox& box) {
  for (int i = 0; i < kSearchDim; ++i) x[i] = std::clamp(x[i], box.lower[i], box.upper[i]);
  return x;
}

struct Member {
  SearchPoint x;
  double f;
};

class Search {
 public:
  Search(const SearchConfig& cfg, double L0, std::optional<double> L1, long budget)
      : cfg_(cfg), L0_(L0), L1_(L1), budget_(budget) {}

  long used() const { return used_; }
  const std::vector<Member>& archive() const { return archive_; }
  const std::vector<std::pair<long, double>>& trace() const { return trace_; }

  // One differential-evolution run (current-to-pbest/1/bin) seeded with
  // `starts`. Returns once `budget` evaluations are spent.
  void run(std::uint64_t seed, long budget, const std::vector<SearchPoint>& starts) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const SearchBox& box = cfg_.box;
    const int np = cfg_.population;
    const long stop = std::min(budget_, used_ + budget);

    auto random_point = [&] {
      SearchPoint x;
      for (int i = 0; i < kSearchDim; ++i) x[i] = box.lower[i] + u01(rng) * (box.upper[i] - box.lower[i]);
      return x;
    };
    auto eval = [&](const SearchPoint& x) {
      ++used_;
      const double f = score(x, L0_, L1_, cfg_.pipeline);
      if (std::isfinite(f)) note(x, f);
      return f;
    };
    auto eval_with_penalty = [&](SearchPoint x, auto&& regenerate) {
      double f = eval(x);
      for (int tries = 0; cfg_.penalty == Penalty::Resample && !std::isfinite(f) && tries < 8 && used_ < stop; ++tries) {
        x = regenerate();
        f = eval(x);
      }
      return Member{x, f};
    };

    std::vector<Member> pop;
    for (std::size_t i = 0; i < starts.size() && static_cast<int>(pop.size()) < np && used_ < stop; ++i) {
      const SearchPoint x = clip(starts[i], box);
      pop.push_back({x, eval(x)});
    }
    while (static_cast<int>(pop.size()) < np && used_ < stop) pop.push_back(eval_with_penalty(random_point(), random_point));
    if (static_cast<int>(pop.size()) < 4) return;

    std::vector<int> order(pop.size());
    while (used_ < stop) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return pop[a].f < pop[b].f; });
      const int top = std::max(2, np * 15 / 100);
      std::vector<Member> next = pop;
      for (int i = 0; i < np && used_ < stop; ++i) {
        auto trial = [&] {
          const int best = order[static_cast<int>(u01(rng) * top) % top];
          int r1, r2;
          do r1 = static_cast<int>(u01(rng) * np) % np; while (r1 == i);
          do r2 = static_cast<int>(u01(rng) * np) % np; while (r2 == i || r2 == r1);
          const double F = 0.4 + 0.5 * u01(rng);
          const double CR = u01(rng) < 0.1 ? u01(rng) : 0.9;
          const int jr = static_cast<int>(u01(rng) * kSearchDim) % kSearchDim;
          SearchPoint y = pop[i].x;
          for (int j = 0; j < kSearchDim; ++j) {
            if (j != jr && u01(rng) >= CR) continue;
            double v = pop[i].x[j] + F * (pop[best].x[j] - pop[i].x[j]) + F * (pop[r1].x[j] - pop[r2].x[j]);
            if (v < box.lower[j]) v = 0.5 * (box.lower[j] + pop[i].x[j]);
            if (v > box.upper[j]) v = 0.5 * (box.upper[j] + pop[i].x[j]);
            y[j] = v;
          }
          return y;
        };
        const Member m = eval_with_penalty(trial(), trial);
        if (m.f <= pop[i].f) next[i] = m;
      }
      pop = std::move(next);
    }
  }

  // Compass search from the best point until `budget` evaluations are used.
  void polish(long budget) {
    if (archive_.empty()) return;
    const long stop = std::min(budget_, budget);
    SearchPoint x = archive_.front().x;
    double fx = archive_.front().f;
    SearchPoint step;
    for (int i = 0; i < kSearchDim; ++i) step[i] = 0.02 * (cfg_.box.upper[i] - cfg_.box.lower[i]);
    while (used_ < stop) {
      bool moved = false;
      for (int i = 0; i < kSearchDim && used_ < stop; ++i) {
        for (double sgn : {1.0, -1.0}) {
          if (used_ >= stop) break;
          SearchPoint y = x;
          y[i] = std::clamp(x[i] + sgn * step[i], cfg_.box.lower[i], cfg_.box.upper[i]);
          if (y[i] == x[i]) continue;
          ++used_;
          const double f = score(y, L0_, L1_, cfg_.pipeline);
          if (std::isfinite(f)) note(y, f);
          if (f < fx) {
            x = y;
            fx = f;
            moved = true;
            break;
          }
        }
      }
      if (moved) continue;
      bool tiny = true;
      for (int i = 0; i < kSearchDim; ++i) {
        step[i] *= 0.5;
        tiny = tiny && step[i] < 1e-12 * (cfg_.box.upper[i] - cfg_.box.lower[i]);
      }
      if (tiny) break;
    }
  }

 private:
  void note(const SearchPoint& x, double f) {
    if (archive_.empty() || f < archive_.front().f) trace_.emplace_back(used_, f);
    // Keep the few best distinct points as certification candidates.
    constexpr std::size_t kKeep = 8;
    for (const Member& m : archive_)
      if (m.x == x) return;
    if (archive_.size() == kKeep && f >= archive_.back().f) return;
    archive_.push_back({x, f});
    std::stable_sort(archive_.begin(), archive_.end(), [](const Member& a, const Member& b) { return a.f < b.f; });
    if (archive_.size() > kKeep) archive_.pop_back();
  }

  const SearchConfig& cfg_;
  double L0_;
  std::optional<double> L1_;
  long budget_;
  long used_ = 0;
  std::vector<Member> archive_;
  std::vector<std::pair<long, double>> trace_;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
  return h;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool same_value(const std::string& a, const std::string& b) {
  if (a == b) return true;
  if (a == "inf" || b == "inf") return false;
  const Interval x = Interval::from_decimal(a, rigor::kDefaultDigits);
  const Interval y = Interval::from_decimal(b, rigor::kDefaultDigits);
  return x.lo() == y.lo() && x.hi() == y.hi();
}

bool decimal_less(const std::string& a, const std::string& b) {
  if (b == "inf") return a != "inf";
  if (a == "inf") return false;
  return rigor::less(Interval::from_decimal(a, rigor::kDefaultDigits), Interval::from_decimal(b, rigor::kDefaultDigits));
}

}  // namespace

bool SearchBox::contains(const SearchPoint& x) const {
  for (int i = 0; i < kSearchDim; ++i)
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  return true;
}

const char* to_string(Penalty p) { return p == Penalty::Infinite ? "infinite" : "resample"; }

Penalty parse_penalty(const std::string& s) {
  if (s == "infinite") return Penalty::Infinite;
  if (s == "resample") return Penalty::Resample;
  throw ParseError("penalty must be 'infinite' or 'resample', got '" + s + "'");
}

void SearchConfig::validate() const {
  if (budget < 1) throw PreconditionFailed("budget must be >= 1");
  if (restarts < 1) throw PreconditionFailed("restarts must be >= 1");
  if (population < 4) throw PreconditionFailed("population must be >= 4");
  for (int i = 0; i < kSearchDim; ++i) {
    if (!std::isfinite(box.lower[i]) || !std::isfinite(box.upper[i]) || !(box.lower[i] < box.upper[i]))
      throw PreconditionFailed("search box bounds must be finite and ordered");
  }
  rigor::require_valid_digits(pipeline.digits);
}

SearchPoint encode(const ParamSet& p) {
  auto d = [](const std::string& s) { return std::stod(s); };
  return {d(p.h1), d(p.h2), d(p.eta1), d(p.eta2), std::log(d(p.theta1)), std::log(d(p.theta2)), std::log(d(p.theta3))};
}

ParamSet decode(const SearchPoint& x, const std::string& log_t0, const std::string& log_t1, int sig) {
  return {log_t0,
          log_t1,
          fmt_sig(x[0], sig),
          fmt_sig(x[1], sig),
          fmt_sig(x[2], sig),
          fmt_sig(x[3], sig),
          fmt_sig(std::exp(x[4]), sig),
          fmt_sig(std::exp(x[5]), sig),
          fmt_sig(std::exp(x[6]), sig)};
}

OptimizeResult optimize_interval(const std::string& log_t0, const std::string& log_t1, const SearchConfig& cfg) {
  cfg.validate();
  const ParamSet shape{log_t0, log_t1, "1", "1", "1", "1", "1", "1", "1"};
  shape.validate_syntax();
  if (log_t1 != "inf" && !decimal_less(log_t0, log_t1))
    throw PreconditionFailed("need log_t0 < log_t1, got [" + log_t0 + ", " + log_t1 + "]");
  const double L0 = std::stod(log_t0);
  const std::optional<double> L1 = log_t1 == "inf" ? std::nullopt : std::optional<double>(std::stod(log_t1));

  std::vector<SearchPoint> starts;
  for (const ParamSet& s : cfg.seeds) starts.push_back(encode(s));

  Search search(cfg, L0, L1, cfg.budget);
  const long de_budget = cfg.budget - cfg.budget / 5;
  const long per = std::max(1L, de_budget / cfg.restarts);
  for (int r = 0; r < cfg.restarts && search.used() < de_budget; ++r) {
    std::vector<SearchPoint> s = starts;
    if (!search.archive().empty()) s.insert(s.begin(), search.archive().front().x);
    search.run(splitmix(cfg.seed + static_cast<std::uint64_t>(r)), r + 1 == cfg.restarts ? de_budget : per, s);
  }
  search.polish(cfg.budget);

  // Certify the best candidates at 6 significant digits. Longer decimals are
  // tried when rounding breaks admissibility or costs accuracy (K and R jump).
  std::optional<OptimizeResult> best;
  for (const Member& m : search.archive()) {
    for (int sig : {6, 9, 12, 17}) {
      const ParamSet p = decode(m.x, log_t0, log_t1, sig);
      try {
        CoefficientReport r = assemble(p, cfg.pipeline);
        if (!best || r.A_total.value() < best->A.value()) best = OptimizeResult{p, r.A_total, m.f, search.used(), search.trace()};
        if (r.A_total.to_double() <= m.f * (1 + 1e-9)) break;
      } catch (const AdmissibilityError&) {
      } catch (const DomainError&) {
      }
    }
  }
  if (!best)
    throw NoAdmissiblePoint("no admissible point for [" + log_t0 + ", " + log_t1 + "] within " +
                            std::to_string(search.used()) + " evaluations");
  return *best;
}

void Scheme::refresh_global() {
  if (rows.empty()) throw InvariantViolation("scheme has no rows");
  const SchemeRow* m = &rows.front();
  for (const SchemeRow& r : rows)
    if (r.A.value() > m->A.value()) m = &r;
  global_A = m->A;
}

void Scheme::validate(const PipelineConfig& cfg) const {
  if (rows.empty()) throw InvariantViolation("scheme has no rows");
  if (!same_value(rows.front().params.log_t0, log_t_start))
    throw InvariantViolation("first row starts at " + rows.front().params.log_t0 + ", scheme at " + log_t_start);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ParamSet& p = rows[i].params;
    const bool last = i + 1 == rows.size();
    if (p.infinite() != last) throw InvariantViolation("only the last row may end at inf (row " + std::to_string(i) + ")");
    if (!last && !decimal_less(p.log_t0, p.log_t1))
      throw InvariantViolation("row " + std::to_string(i) + " is empty or reversed: [" + p.log_t0 + ", " + p.log_t1 + "]");
    if (!last && !same_value(p.log_t1, rows[i + 1].params.log_t0))
      throw InvariantViolation("rows " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not meet");
    require_admissible(p, cfg);
  }
  bool attained = false;
  for (const SchemeRow& r : rows) {
    if (r.A.value() > global_A.value()) throw InvariantViolation("a row exceeds global_A");
    attained = attained || r.A.value() == global_A.value();
  }
  if (!attained) throw InvariantViolation("global_A is not attained by any row");
}

namespace {

class SchemeBuilder {
 public:
  SchemeBuilder(const SearchConfig& cfg, long total) : cfg_(cfg), left_(total) {}

  OptimizeResult optimize(const std::string& a, const std::string& b, std::vector<ParamSet> seeds) {
    SearchConfig c = cfg_;
    c.budget = std::max(1L, std::min(cfg_.budget, left_));
    seeds.insert(seeds.end(), cfg_.seeds.begin(), cfg_.seeds.end());
    c.seeds = std::move(seeds);
    c.seed = splitmix(cfg_.seed ^ fnv1a(a + "/" + b));
    try {
      OptimizeResult r = optimize_interval(a, b, c);
      left_ -= r.evaluations;
      return r;
    } catch (const NoAdmissiblePoint& e) {
      throw NoAdmissiblePoint(std::string("interval [") + a + ", " + b + "]: " + e.what());
    }
  }

  long left() const { return std::max(0L, left_); }

 private:
  const SearchConfig& cfg_;
  long left_;
};

std::string midpoint(const std::string& a, const std::string& b) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, 0.5 * (std::stod(a) + std::stod(b)));
  return std::string(buf, r.ptr);
}

}  // namespace

Scheme build_scheme(const std::string& log_t_start, const Breakpoints& breakpoints, const SearchConfig& cfg) {
  cfg.validate();
  if (std::stod(log_t_start) < std::log(200.0)) throw PreconditionFailed("t_start must be >= 200");

  Scheme s;
  s.log_t_start = log_t_start;

  if (const auto* list = std::get_if<std::vector<std::string>>(&breakpoints)) {
    std::vector<std::string> cuts{log_t_start};
    for (const std::string& b : *list) {
      if (same_value(b, log_t_start)) continue;
      if (!decimal_less(cuts.back(), b)) throw PreconditionFailed("breakpoints must increase past t_start: " + b);
      cuts.push_back(b);
    }
    cuts.push_back("inf");
    SchemeBuilder builder(cfg, std::numeric_limits<long>::max());
    std::vector<ParamSet> prev{published_tail_row()};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      OptimizeResult r = builder.optimize(cuts[i], cuts[i + 1], prev);
      prev = {r.params, published_tail_row()};
      s.evaluations += r.evaluations;
      s.rows.push_back({r.params, r.A});
    }
  } else {
    const AutoBreakpoints& ab = std::get<AutoBreakpoints>(breakpoints);
    SchemeBuilder builder(cfg, ab.total_budget);
    const std::string tail_start = decimal_less(log_t_start, ab.tail_log_t0) ? ab.tail_log_t0 : log_t_start;
    OptimizeResult tail = builder.optimize(tail_start, "inf", {published_tail_row()});
    const double cap = tail.A.to_double() * (1 + ab.slack);

    auto comparator_floor = [&](double L) {
      double m = kInf;
      for (Comparator c : ab.comparators)
        if (L >= comparator_min_log_t(c)) m = std::min(m, comparator_ratio(c, L));
      return m;
    };

    // Depth-first, left to right, so rows come out in order.
    std::vector<ParamSet> last{tail.params};
    auto split = [&](auto&& self, const std::string& a, const std::string& b, const ParamSet& parent) -> void {
      std::vector<ParamSet> seeds{parent, last.front(), tail.params, published_tail_row()};
      OptimizeResult r = builder.optimize(a, b, seeds);
      const double width = std::stod(b) - std::stod(a);
      const double A = r.A.to_double();
      const bool wide = width > 2 * ab.min_width;
      if (wide && builder.left() > 0 && (A > cap || A > comparator_floor(std::stod(a)))) {
        const std::string m = midpoint(a, b);
        self(self, a, m, r.params);
        self(self, m, b, r.params);
        return;
      }
      last = {r.params};
      s.rows.push_back({r.params, r.A});
    };
    if (tail_start != log_t_start) split(split, log_t_start, tail_start, tail.params);

    // Spend what is left flattening the worst finite row toward the tail's A.
    auto width = [](const SchemeRow& r) { return std::stod(r.params.log_t1) - std::stod(r.params.log_t0); };
    std::vector<bool> frozen(s.rows.size(), false);
    while (builder.left() > 0) {
      std::optional<std::size_t> worst;
      for (std::size_t i = 0; i < s.rows.size(); ++i) {
        if (frozen[i] || width(s.rows[i]) <= 2 * ab.min_width) continue;
        if (!worst || s.rows[i].A.value() > s.rows[*worst].A.value()) worst = i;
      }
      if (!worst || s.rows[*worst].A.value() <= tail.A.value()) break;
      const SchemeRow parent = s.rows[*worst];
      const std::string m = midpoint(parent.params.log_t0, parent.params.log_t1);
      OptimizeResult lo = builder.optimize(parent.params.log_t0, m, {parent.params, tail.params});
      OptimizeResult hi = builder.optimize(m, parent.params.log_t1, {parent.params, lo.params, tail.params});
      if (lo.A.value() >= parent.A.value() || hi.A.value() >= parent.A.value()) {
        frozen[*worst] = true;
        continue;
      }
      s.rows[*worst] = {lo.params, lo.A};
      s.rows.insert(s.rows.begin() + static_cast<long>(*worst) + 1, {hi.params, hi.A});
      frozen.insert(frozen.begin() + static_cast<long>(*worst) + 1, false);
    }
    s.rows.push_back({tail.params, tail.A});
    s.evaluations = ab.total_budget - builder.left();
  }

  s.refresh_global();
  s.validate(cfg.pipeline);
  return s;
}

const char* to_string(Comparator c) {
  switch (c) {
    case Comparator::Vdc0618: return "vdc_0618";
    case Comparator::Hpy2022: return "hpy_2022";
    case Comparator::Patel307: return "patel_307";
  }
  return "?";
}

Comparator parse_comparator(const std::string& s) {
  for (Comparator c : {Comparator::Vdc0618, Comparator::Hpy2022, Comparator::Patel307})
    if (s == to_string(c)) return c;
  throw ParseError("unknown comparator '" + s + "' (vdc_0618, hpy_2022, patel_307)");
}

double comparator_min_log_t(Comparator c) {
  switch (c) {
    case Comparator::Vdc0618: return std::log(3.0);
    case Comparator::Hpy2022: return 12 * std::log(10.0);
    case Comparator::Patel307: return 0;
  }
  return 0;
}

Interval comparator_log(Comparator c, const Interval& L) {
  const int d = rigor::kDefaultDigits;
  auto lit = [&](const char* s) { return Interval::from_decimal(s, d); };
  switch (c) {
    case Comparator::Vdc0618: return rigor::log(lit("0.618")) + L / 6 + rigor::log(L);
    case Comparator::Hpy2022: {
      const Interval e = rigor::exp(L / 6);
      return rigor::log(lit("0.478013") * e * L + lit("3.853165") * e - lit("2.914229"));
    }
    case Comparator::Patel307: return rigor::log(lit("307.098")) + L * Interval::from_ratio(27, 164, d);
  }
  throw InvariantViolation("unknown comparator");
}

double comparator_ratio(Comparator c, double L) {
  const Interval x = Interval::from_double(L, rigor::kMinDigits);
  const Interval r = comparator_log(c, x) - x * Interval::from_ratio(27, 164, rigor::kMinDigits);
  return std::exp(r.mid_double());
}

namespace {

// Bound minus comparator, in logs, at log t = L: log A + (27/164) L - log C(L).
// Non-increasing in L for every comparator.
Interval log_gap(const Interval& logA, const std::vector<Comparator>& against, double L, int digits) {
  const Interval x = Interval::from_double(L, digits);
  const Interval ours = logA + x * Interval::from_ratio(27, 164, digits);
  std::optional<Interval> gap;
  for (Comparator c : against) {
    const Interval g = ours - comparator_log(c, x);
    gap = gap ? rigor::max(*gap, g) : g;
  }
  return *gap;
}

bool positive(const Interval& g) { return g.certainly_positive(); }

// Root of a non-increasing gap on [lo, hi] with gap(lo) > 0 >= gap(hi).
double bisect(const Interval& logA, const std::vector<Comparator>& against, double lo, double hi, int digits) {
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const Interval g = log_gap(logA, against, mid, digits);
    if (positive(g)) lo = mid;
    else if ((-g).certainly_nonnegative()) hi = mid;
    else return mid;
  }
  return hi;
}

double validity_floor(const std::vector<Comparator>& against) {
  if (against.empty()) throw PreconditionFailed("no comparator given");
  double lo = 0;
  for (Comparator c : against) lo = std::max(lo, comparator_min_log_t(c));
  return lo;
}

constexpr double kMaxLogT = 1e6;

}  // namespace

double crossover(const Interval& constant_A, const std::vector<Comparator>& against, int digits) {
  rigor::require_valid_digits(digits);
  const double lo = validity_floor(against);
  const Interval logA = rigor::log(constant_A);
  const Interval g_lo = log_gap(logA, against, lo, digits);
  const Interval g_hi = log_gap(logA, against, kMaxLogT, digits);
  if (!positive(g_lo)) throw NoCrossover("the constant bound is already below the comparators at log t = " + fmt_sig(lo, 6));
  if (positive(g_hi)) throw NoCrossover("the comparators stay below the constant bound up to log t = 1e6");
  return bisect(logA, against, lo, kMaxLogT, digits);
}

double crossover(const Scheme& scheme, const std::vector<Comparator>& against, int digits) {
  rigor::require_valid_digits(digits);
  const double floor = std::max(validity_floor(against), std::stod(scheme.log_t_start));
  double result = floor;
  for (const SchemeRow& row : scheme.rows) {
    const double a = std::max(floor, std::stod(row.params.log_t0));
    const double b = row.params.infinite() ? kMaxLogT : std::stod(row.params.log_t1);
    if (a >= b) continue;
    const Interval logA = rigor::log(row.A.as_interval());
    if (!positive(log_gap(logA, against, a, digits))) continue;
    if (positive(log_gap(logA, against, b, digits))) {
      if (row.params.infinite()) throw NoCrossover("the scheme never drops below the comparators");
      result = std::max(result, b);
      continue;
    }
    result = std::max(result, bisect(logA, against, a, b, digits));
  }
  return result;
}

}  // namespace subweyl
