#pragma once

// Numerical checks, at desk-scale heights, of the exponential-sum inequalities
// the bound relies on, plus two independent evaluations of |zeta(1/2 + it)|.

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subweyl/rigor.hpp"

namespace subweyl::lab {

using Real = long double;

enum class PhaseKind {
  LogZeta,      // f(x) = -(t/2pi) log x
  Differenced,  // g_r(x) = f(x + r) - f(x) for the LogZeta f
  Custom,
};

// lambda <= |f^(k)(x)| <= h lambda on the summation range.
struct Envelope {
  Real lambda = 0;
  Real h = 1;
};

struct PhaseSpec {
  PhaseKind kind = PhaseKind::LogZeta;
  Real t = 0;
  long r = 0;
  long a = 0;  // sums run over a < n <= a + N
  long N = 1;
  std::map<int, Envelope> envelopes;
  std::function<Real(Real)> custom;            // f, Custom only
  std::function<Real(int, Real)> custom_deriv;  // f^(k), Custom only

  // Envelopes for k = 2..5 from endpoint values; exact since |f^(k)| is
  // monotone on the range.
  static PhaseSpec log_zeta(Real t, long a, long N);
  static PhaseSpec differenced(Real t, long r, long a, long N);
  // Envelopes are screened against `deriv` at 64 points; a failed screen
  // throws InvariantViolation.
  static PhaseSpec custom_phase(std::function<Real(Real)> f, long a, long N, std::map<int, Envelope> envelopes = {},
                                std::function<Real(int, Real)> deriv = {});

  Real b() const { return static_cast<Real>(a + N); }
  Real f(Real x) const;
  Real derivative(int k, Real x) const;
  // 2 pi f(n), computed without forming f(n) first where possible.
  Real angle(long n) const;
  const Envelope& envelope(int k) const;  // throws EnvelopeMissing
};

struct ExpSum {
  std::complex<Real> value;
  Real error = 0;        // bound on |value - exact|
  Real running_max = 0;  // max over L <= N of |S_f(a, L)|
};

inline constexpr long kMaxSumLength = 10000000;

// S_f(a, N) = sum_{a < n <= a+N} e(f(n)). digits == 0 sums in long double
// with compensated accumulation; otherwise in interval arithmetic at that
// many digits (LogZeta and Differenced only). Throws SizeExceeded.
ExpSum brute_sum(const PhaseSpec& phase, int digits = 0);

struct CheckResult {
  Real lhs = 0;
  Real rhs = 0;
  Real margin = 0;  // rhs - lhs
  Real eps = 0;     // numerical error allowance on the comparison
  bool pass = false;
  std::optional<Real> running_lhs;  // kth-derivative test only
};

// |S_f|^2 against the Weyl differencing bound with q shifts, using Re S_{g_r}.
CheckResult check_weyl(const PhaseSpec& phase, long q);
// |S_f| and the running maximum against the explicit kth derivative test.
CheckResult check_kth_test(const PhaseSpec& phase, int k, Real eta);
// Sum against its Poisson-transformed dual sum; Differenced phases only.
CheckResult check_b_process(const PhaseSpec& phase);
// Stationary-phase approximation of int_a^b e(g(x) - nu x) dx for one nu in
// (g'(b), g'(a)]; Differenced phases only.
CheckResult check_stationary_phase(const PhaseSpec& phase, long nu);
// Integers nu in (g'(b), g'(a)].
std::pair<long, long> dual_range(const PhaseSpec& phase);

// 2 |sum_{n <= sqrt(t/2pi)} n^(-1/2-it)| + 1.48 t^(-1/4) + 0.127 t^(-3/4),
// rounded up. Throws PreconditionFailed for t < 200.
rigor::UpperScalar rs_upper(double t, int digits = 40);

struct ZetaValue {
  double value = 0;  // |zeta(1/2 + it)|
  double error = 0;  // certified bound on |value - exact|
};

// |zeta(1/2 + it)| for 3 <= t <= 1e8 to within 1e-6: Euler-Maclaurin in
// interval arithmetic up to t = 2e4, Riemann-Siegel with one correction term
// and Gabcke's remainder bound above. Throws PreconditionFailed or
// ConvergenceFailure.
ZetaValue zeta_oracle(double t);

struct SuiteConfig {
  int trials = 200;
  std::uint64_t seed = 42;
  Real max_t = 1e6;
  long max_N = 10000;
};

struct LemmaFailure {
  std::string check;
  std::uint64_t trial_seed = 0;
  std::string config;
  CheckResult result;
};

struct CheckStats {
  int runs = 0;
  int failures = 0;
  Real min_margin = 0;  // smallest rhs - lhs seen
};

struct SuiteReport {
  SuiteConfig config;
  std::map<std::string, CheckStats> stats;
  std::vector<LemmaFailure> failures;
  bool pass() const { return failures.empty(); }
};

// Check names used by the suite.
const std::vector<std::string>& suite_checks();
// One randomized trial; its configuration is a function of `trial_seed`.
std::pair<std::string, CheckResult> run_trial(const std::string& check, std::uint64_t trial_seed,
                                              const SuiteConfig& cfg = {});
SuiteReport run_lemma_suite(const SuiteConfig& cfg);

}  // namespace subweyl::lab
