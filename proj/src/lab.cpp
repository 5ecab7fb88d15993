#include "subweyl/lab.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <limits>

#include "subweyl/errors.hpp"
#include "subweyl/exponent.hpp"

namespace subweyl::lab {

using rigor::Interval;

namespace {

constexpr Real kPi = 3.141592653589793238462643383279502884L;
constexpr Real kTwoPi = 2 * kPi;
constexpr Real kEpsLD = std::numeric_limits<Real>::epsilon();

// Neumaier's compensated sum; the order of add() calls fixes the result.
class Accumulator {
 public:
  void add(Real x) {
    const Real t = s_ + x;
    c_ += std::fabs(s_) >= std::fabs(x) ? (s_ - t) + x : (x - t) + s_;
    s_ = t;
  }
  Real value() const { return s_ + c_; }

 private:
  Real s_ = 0, c_ = 0;
};

Real factorial(int n) {
  Real f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// f^(k)(x) for f(x) = -(t/2pi) log x, k >= 1.
Real log_zeta_deriv(Real t, int k, Real x) {
  const Real sign = (k % 2 == 1) ? -1 : 1;
  return sign * t / kTwoPi * factorial(k - 1) / std::pow(x, static_cast<Real>(k));
}

Envelope endpoint_envelope(Real at_left, Real at_right) {
  Real lo = std::fabs(at_left), hi = std::fabs(at_right);
  if (lo > hi) std::swap(lo, hi);
  // Pad for the long double rounding of the endpoint values.
  return {lo * (1 - 64 * kEpsLD), hi / lo * (1 + 256 * kEpsLD)};
}

std::string fmt(const char* f, Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

PhaseSpec PhaseSpec::log_zeta(Real t, long a, long N) {
  if (!(t > 0)) throw PreconditionFailed("log-zeta phase needs t > 0");
  if (a < 1 || N < 1) throw PreconditionFailed("log-zeta phase needs a >= 1 and N >= 1");
  PhaseSpec p;
  p.kind = PhaseKind::LogZeta;
  p.t = t;
  p.a = a;
  p.N = N;
  for (int k = 2; k <= 5; ++k) p.envelopes[k] = endpoint_envelope(p.derivative(k, a), p.derivative(k, p.b()));
  return p;
}

PhaseSpec PhaseSpec::differenced(Real t, long r, long a, long N) {
  if (!(t > 0)) throw PreconditionFailed("differenced phase needs t > 0");
  if (a < 1 || N < 1 || r < 0) throw PreconditionFailed("differenced phase needs a >= 1, N >= 1, r >= 0");
  PhaseSpec p;
  p.kind = PhaseKind::Differenced;
  p.t = t;
  p.r = r;
  p.a = a;
  p.N = N;
  if (r > 0)
    for (int k = 2; k <= 5; ++k) p.envelopes[k] = endpoint_envelope(p.derivative(k, a), p.derivative(k, p.b()));
  return p;
}

PhaseSpec PhaseSpec::custom_phase(std::function<Real(Real)> f, long a, long N, std::map<int, Envelope> envelopes,
                                  std::function<Real(int, Real)> deriv) {
  if (N < 1) throw PreconditionFailed("custom phase needs N >= 1");
  if (!f) throw PreconditionFailed("custom phase needs f");
  if (!envelopes.empty() && !deriv) throw PreconditionFailed("custom envelopes need a derivative hook");
  PhaseSpec p;
  p.kind = PhaseKind::Custom;
  p.a = a;
  p.N = N;
  p.custom = std::move(f);
  p.custom_deriv = std::move(deriv);
  p.envelopes = std::move(envelopes);
  for (const auto& [k, e] : p.envelopes) {
    for (int j = 1; j <= 64; ++j) {
      const Real x = a + N * static_cast<Real>(j) / 64;
      const Real d = std::fabs(p.custom_deriv(k, x));
      if (d < e.lambda * (1 - 1e-12L) || d > e.h * e.lambda * (1 + 1e-12L))
        throw InvariantViolation("envelope screen failed for k = " + std::to_string(k) + " at x = " + fmt("%.17Lg", x));
    }
  }
  return p;
}

Real PhaseSpec::f(Real x) const {
  switch (kind) {
    case PhaseKind::LogZeta: return -t / kTwoPi * std::log(x);
    case PhaseKind::Differenced: return -t / kTwoPi * std::log1p(r / x);
    case PhaseKind::Custom: return custom(x);
  }
  return 0;
}

Real PhaseSpec::derivative(int k, Real x) const {
  if (k == 0) return f(x);
  switch (kind) {
    case PhaseKind::LogZeta: return log_zeta_deriv(t, k, x);
    case PhaseKind::Differenced:
      // f^(k)(x + r) - f^(k)(x) = f^(k)(x) ((1 + r/x)^(-k) - 1)
      return log_zeta_deriv(t, k, x) * std::expm1(-k * std::log1p(r / x));
    case PhaseKind::Custom:
      if (!custom_deriv) throw EnvelopeMissing("custom phase has no derivative hook");
      return custom_deriv(k, x);
  }
  return 0;
}

Real PhaseSpec::angle(long n) const {
  switch (kind) {
    case PhaseKind::LogZeta: return -t * std::log(static_cast<Real>(n));
    case PhaseKind::Differenced: return -t * std::log1p(static_cast<Real>(r) / n);
    case PhaseKind::Custom: return kTwoPi * custom(static_cast<Real>(n));
  }
  return 0;
}

const Envelope& PhaseSpec::envelope(int k) const {
  auto it = envelopes.find(k);
  if (it == envelopes.end()) throw EnvelopeMissing("no envelope for derivative order " + std::to_string(k));
  return it->second;
}

namespace {

ExpSum sum_long_double(const PhaseSpec& p) {
  Accumulator re, im;
  Real max_angle = 0, running = 0;
  for (long n = p.a + 1; n <= p.a + p.N; ++n) {
    const Real th = p.angle(n);
    max_angle = std::max(max_angle, std::fabs(th));
    re.add(std::cos(th));
    im.add(std::sin(th));
    running = std::max(running, std::hypot(re.value(), im.value()));
  }
  // Per term: angle error of a few ulps of |angle|, then sin/cos and the
  // compensated accumulation.
  const Real err = static_cast<Real>(p.N) * (max_angle + 4) * 8 * kEpsLD;
  return {{re.value(), im.value()}, err, running};
}

ExpSum sum_interval(const PhaseSpec& p, int digits) {
  if (p.kind == PhaseKind::Custom) throw PreconditionFailed("interval sums need a log-zeta or differenced phase");
  const Interval t = Interval::from_double(static_cast<double>(p.t), digits);
  if (t.mid_double() != static_cast<double>(p.t)) throw PreconditionFailed("t must be a double");
  Interval re = Interval::from_int(0, digits), im = Interval::from_int(0, digits);
  Real running = 0;
  for (long n = p.a + 1; n <= p.a + p.N; ++n) {
    const Interval ln = p.kind == PhaseKind::LogZeta
                            ? rigor::log(Interval::from_int(n, digits))
                            : rigor::log(Interval::from_int(n + p.r, digits)) - rigor::log(Interval::from_int(n, digits));
    const Interval th = -(t * ln);
    re = re + rigor::cos(th);
    im = im + rigor::sin(th);
    running = std::max(running, std::hypot(static_cast<Real>(re.mid_double()), static_cast<Real>(im.mid_double())));
  }
  const Real err = re.width().to_double(MPFR_RNDU) / 2 + im.width().to_double(MPFR_RNDU) / 2 +
                   4 * std::numeric_limits<double>::epsilon() * (std::fabs(re.mid_double()) + std::fabs(im.mid_double()));
  return {{re.mid_double(), im.mid_double()}, err, running};
}

}  // namespace

ExpSum brute_sum(const PhaseSpec& phase, int digits) {
  if (phase.N > kMaxSumLength) throw SizeExceeded("sum length " + std::to_string(phase.N) + " exceeds 1e7");
  if (phase.N < 1) throw PreconditionFailed("sum length must be >= 1");
  if (digits == 0) return sum_long_double(phase);
  rigor::require_valid_digits(digits);
  return sum_interval(phase, digits);
}

namespace {

CheckResult finish(Real lhs, Real rhs, Real eps) {
  CheckResult c;
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.eps = eps + 1e-15L * (std::fabs(lhs) + std::fabs(rhs));
  c.pass = c.margin >= -c.eps;
  return c;
}

PhaseSpec shifted_difference(const PhaseSpec& p, long r) {
  if (p.kind == PhaseKind::LogZeta) return PhaseSpec::differenced(p.t, r, p.a, p.N - r);
  const PhaseSpec base = p;
  return PhaseSpec::custom_phase([base, r](Real x) { return base.f(x + r) - base.f(x); }, p.a, p.N - r);
}

}  // namespace

CheckResult check_weyl(const PhaseSpec& phase, long q) {
  if (q < 1 || q > phase.N) throw PreconditionFailed("Weyl differencing needs 1 <= q <= N");
  const ExpSum s = brute_sum(phase);
  const Real N = static_cast<Real>(phase.N);
  const Real abs_s = std::abs(s.value);
  const Real lhs = abs_s * abs_s;
  Real inner = N / q, inner_err = 0;
  for (long r = 1; r < q; ++r) {
    const ExpSum g = brute_sum(shifted_difference(phase, r));
    const Real w = 2 * (1 - static_cast<Real>(r) / q) / q;
    inner += w * g.value.real();
    inner_err += w * g.error;
  }
  const Real rhs = (N - 1 + q) * inner;
  return finish(lhs, rhs, 2 * abs_s * s.error + s.error * s.error + (N - 1 + q) * inner_err);
}

CheckResult check_kth_test(const PhaseSpec& phase, int k, Real eta) {
  if (k < 3 || k > 5) throw PreconditionFailed("kth derivative test is checked for k in {3, 4, 5}");
  if (!(eta > 0)) throw PreconditionFailed("eta must be positive");
  const Envelope& e = phase.envelope(k);
  const int digits = rigor::kMinDigits;
  const DerivTestConstants c = derivative_test_constants(k, Interval::from_double(static_cast<double>(eta), digits),
                                                         Interval::from_double(static_cast<double>(e.h), digits), digits);
  const Real A = c.A_k.to_double(), B = c.B_k.to_double();
  const Real K = std::ldexp(Real(1), k - 1);
  const Real N = static_cast<Real>(phase.N);
  const Real rhs = A * std::pow(e.h, 2 / K) * N * std::pow(e.lambda, 1 / (2 * K - 2)) +
                   B * std::pow(N, 1 - 2 / K) * std::pow(e.lambda, -1 / (2 * K - 2));
  const ExpSum s = brute_sum(phase);
  CheckResult r = finish(std::abs(s.value), rhs, s.error);
  r.running_lhs = s.running_max;
  r.pass = r.pass && s.running_max <= rhs + r.eps;
  return r;
}

std::pair<long, long> dual_range(const PhaseSpec& phase) {
  const Real alpha = phase.derivative(1, phase.b());
  const Real beta = phase.derivative(1, static_cast<Real>(phase.a));
  return {static_cast<long>(std::floor(alpha)) + 1, static_cast<long>(std::floor(beta))};
}

namespace {

void require_b_process_phase(const PhaseSpec& phase) {
  if (phase.kind != PhaseKind::Differenced) throw PreconditionFailed("the B process check needs a differenced phase");
  if (phase.r <= 0) throw MonotonicityViolation("g_0 is constant, so g' is not strictly decreasing");
}

// Stationary point of g_r(x) - nu x: g_r'(x) = nu.
Real stationary_point(const PhaseSpec& p, long nu) {
  const Real r = static_cast<Real>(p.r);
  return (std::sqrt(r * r + 2 * p.t * r / (kPi * nu)) - r) / 2;
}

std::complex<Real> dual_term(const PhaseSpec& p, long nu) {
  const Real x = stationary_point(p, nu);
  const Real phase = p.f(x) - nu * x - Real(1) / 8;
  return std::polar(Real(1) / std::sqrt(std::fabs(p.derivative(2, x))), kTwoPi * phase);
}

constexpr Real kStatPhaseConst = 1.8710158372009718L;  // 2 3^(2/3) / pi^(2/3)

}  // namespace

CheckResult check_b_process(const PhaseSpec& phase) {
  require_b_process_phase(phase);
  const Envelope& e2 = phase.envelope(2);
  const Envelope& e3 = phase.envelope(3);
  const ExpSum s = brute_sum(phase);
  const auto [lo, hi] = dual_range(phase);
  Accumulator re, im;
  for (long nu = lo; nu <= hi; ++nu) {
    const std::complex<Real> d = dual_term(phase, nu);
    re.add(d.real());
    im.add(d.imag());
  }
  const Real residual = std::abs(s.value - std::complex<Real>(re.value(), im.value()));
  const Real alpha = phase.derivative(1, phase.b());
  const Real beta = phase.derivative(1, static_cast<Real>(phase.a));
  const Real sup3 = e3.h * e3.lambda;
  const Real rhs = 4.686L / std::sqrt(e2.lambda) + kStatPhaseConst * e2.h * std::cbrt(sup3) * phase.N +
                   5 / kPi * std::log(beta - alpha + 2) + 6;
  const Real dual_err = (hi >= lo ? static_cast<Real>(hi - lo + 1) : 0) * 1e-12L;
  return finish(residual, rhs, s.error + dual_err);
}

CheckResult check_stationary_phase(const PhaseSpec& phase, long nu) {
  require_b_process_phase(phase);
  const auto [lo, hi] = dual_range(phase);
  if (nu < lo || nu > hi) throw PreconditionFailed("nu must lie in (g'(b), g'(a)]");
  const Envelope& e2 = phase.envelope(2);
  const Envelope& e3 = phase.envelope(3);
  const Real a = static_cast<Real>(phase.a), b = phase.b();

  using GK = boost::math::quadrature::gauss_kronrod<Real, 61>;
  // |g'(x) - nu| is largest at an endpoint; pieces span at most four periods,
  // which the 61-point rule resolves to rounding level.
  const Real freq = std::max(std::fabs(phase.derivative(1, a) - nu), std::fabs(phase.derivative(1, b) - nu));
  const long pieces = std::max<long>(8, static_cast<long>(std::ceil(freq * (b - a) / 4)));
  Real I_re = 0, I_im = 0, err_re = 0, err_im = 0;
  for (long j = 0; j < pieces; ++j) {
    const Real x0 = a + (b - a) * j / pieces, x1 = a + (b - a) * (j + 1) / pieces;
    Real e_re = 0, e_im = 0;
    I_re += GK::integrate([&](Real x) { return std::cos(kTwoPi * (phase.f(x) - nu * x)); }, x0, x1, 0, 0, &e_re);
    I_im += GK::integrate([&](Real x) { return std::sin(kTwoPi * (phase.f(x) - nu * x)); }, x0, x1, 0, 0, &e_im);
    err_re += e_re;
    err_im += e_im;
  }
  if (err_re + err_im > 1e-8L) throw ConvergenceFailure("stationary-phase quadrature did not converge");

  const Real lhs = std::abs(std::complex<Real>(I_re, I_im) - dual_term(phase, nu));
  const Real fa = std::fabs(phase.derivative(1, a) - nu), fb = std::fabs(phase.derivative(1, b) - nu);
  const Real ends = (fa > 0 && fb > 0) ? (1 / fa + 1 / fb) / kPi : std::numeric_limits<Real>::infinity();
  const Real rhs = kStatPhaseConst * std::cbrt(e3.h) * std::cbrt(e3.lambda) / e2.lambda + ends;
  return finish(lhs, rhs, err_re + err_im + 1e-12L);
}

// ---- zeta evaluations ----

rigor::UpperScalar rs_upper(double t, int digits) {
  if (!(t >= 200)) throw PreconditionFailed("rs_upper needs t >= 200");
  rigor::require_valid_digits(digits);
  const Interval T = Interval::from_double(t, digits);
  const long M = rigor::floor_to_long(rigor::sqrt(T / (2 * Interval::pi(digits))));
  Interval re = Interval::from_int(0, digits), im = Interval::from_int(0, digits);
  for (long n = 1; n <= M; ++n) {
    const Interval ln = rigor::log(Interval::from_int(n, digits));
    const Interval mag = rigor::exp(-ln / 2);
    const Interval th = T * ln;
    re = re + mag * rigor::cos(th);
    im = im - mag * rigor::sin(th);
  }
  const Interval main = 2 * rigor::hypot(re, im);
  const Interval err = Interval::from_decimal("1.48", digits) * rigor::pow_ratio(T, -1, 4) +
                       Interval::from_decimal("0.127", digits) * rigor::pow_ratio(T, -3, 4);
  return rigor::UpperScalar::upper_of(main + err, digits);
}

namespace {

struct Complex {
  Interval re, im;
};

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator*(const Complex& a, const Interval& s) { return {a.re * s, a.im * s}; }
Complex operator/(const Complex& a, const Complex& b) {
  const Interval d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
Interval magnitude_upper(const Complex& z) { return rigor::hypot(z.re, z.im); }

// n^(-s) for s = 1/2 + it.
Complex inv_pow(long n, const Interval& t, int digits) {
  const Interval ln = rigor::log(Interval::from_int(n, digits));
  const Interval mag = rigor::exp(-ln / 2);
  const Interval th = t * ln;
  return {mag * rigor::cos(th), -(mag * rigor::sin(th))};
}

// B_{2k} / (2k)! for k = 0..kmax.
std::vector<Interval> bernoulli_over_factorial(int kmax, int digits) {
  std::vector<Rational> B(2 * kmax + 3);
  B[0] = 1;
  for (int m = 1; m < static_cast<int>(B.size()); ++m) {
    Rational acc = 0, binom = 1;  // C(m + 1, j)
    for (int j = 0; j < m; ++j) {
      acc += binom * B[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    B[m] = -acc / (m + 1);
  }
  std::vector<Interval> out;
  Rational fact = 1;
  for (int k = 0; k <= kmax + 1; ++k) {
    if (k > 0) fact *= Rational((2 * k - 1) * (2 * k));
    const Rational q = B[2 * k] / fact;
    out.push_back(Interval::from_decimal(numerator(q).str(), digits) /
                  Interval::from_decimal(denominator(q).str(), digits));
  }
  return out;
}

// Euler-Maclaurin with N terms; the remainder after the last correction is
// bounded by |T_{m+1}| |s + 2m + 1| / (sigma + 2m + 1).
ZetaValue zeta_euler_maclaurin(double t, int digits) {
  const Interval T = Interval::from_double(t, digits);
  const long N = static_cast<long>(std::ceil(t / 2)) + 20;
  Complex sum{Interval::from_int(0, digits), Interval::from_int(0, digits)};
  for (long n = 1; n < N; ++n) sum = sum + inv_pow(n, T, digits);

  const Interval half = Interval::from_ratio(1, 2, digits);
  const Complex s{half, T};
  const Complex Ns = inv_pow(N, T, digits);
  const Interval NN = Interval::from_int(N, digits);
  sum = sum + (Ns * NN) / Complex{-half, T};
  sum = sum + Ns * half;

  constexpr int kMax = 60;
  const std::vector<Interval> bf = bernoulli_over_factorial(kMax, digits);
  Complex rising = s;                 // (s)_{2k-1}
  Interval Npow = Interval::from_int(1, digits) / NN;  // N^(-(2k-1))
  const Interval invN2 = Interval::from_int(1, digits) / (NN * NN);
  double remainder = std::numeric_limits<double>::infinity();
  for (int k = 1; k < kMax; ++k) {
    const Complex term = Ns * rising * (bf[k] * Npow);
    sum = sum + term;
    // Next term's size bounds the remainder after this one.
    const Complex next_rising = rising * Complex{half + (2 * k - 1), T} * Complex{half + 2 * k, T};
    const Interval next = magnitude_upper(Ns * next_rising * (bf[k + 1] * (Npow * invN2)));
    const Interval factor = rigor::hypot(half + (2 * k + 1), T) / (half + (2 * k + 1));
    remainder = (next * factor).upper_double();
    rising = next_rising;
    Npow = Npow * invN2;
    if (remainder < 1e-13) break;
  }
  const Interval z = rigor::hypot(sum.re, sum.im);
  return {z.mid_double(), z.width().to_double(MPFR_RNDU) / 2 + remainder + 1e-15};
}

// d^k/dp^k of Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p), an entire
// function, by the trapezoid rule on a circle around p.
Real psi_derivative(int k, Real p) {
  constexpr int M = 64;
  constexpr Real rho = 0.2L;
  std::complex<Real> acc = 0;
  for (int j = 0; j < M; ++j) {
    const Real th = kTwoPi * (j + Real(0.5)) / M;
    const std::complex<Real> w = std::polar(Real(1), th);
    const std::complex<Real> z = p + rho * w;
    const std::complex<Real> psi = std::cos(kTwoPi * (z * z - z - Real(1) / 16)) / std::cos(kTwoPi * z);
    acc += psi * std::pow(w, -k);
  }
  return acc.real() * factorial(k) / (M * std::pow(rho, static_cast<Real>(k)));
}

// Riemann-Siegel Z(t) with the C0 and C1 corrections; Gabcke's bound
// 0.053 t^(-5/4) (t >= 200) covers the rest.
ZetaValue zeta_riemann_siegel(double t, int digits) {
  const Interval T = Interval::from_double(t, digits);
  const Interval pi = Interval::pi(digits);
  const Interval a = rigor::sqrt(T / (2 * pi));
  const long N = rigor::floor_to_long(a);
  const Real p = static_cast<Real>((a - N).mid_double());
  // theta(t) = t/2 log(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3) + O(t^-5)
  const Interval theta = T / 2 * rigor::log(T / (2 * pi)) - T / 2 - pi / 8 + 1 / (48 * T) +
                         7 / (5760 * rigor::pow(T, 3));
  Interval sum = Interval::from_int(0, digits);
  for (long n = 1; n <= N; ++n) {
    const Interval ln = rigor::log(Interval::from_int(n, digits));
    sum = sum + rigor::exp(-ln / 2) * rigor::cos(theta - T * ln);
  }
  const Real u = static_cast<Real>(t) / kTwoPi;
  const Real c0 = psi_derivative(0, p);
  const Real c1 = -psi_derivative(3, p) / (96 * kPi * kPi);
  const Real corr = ((N - 1) % 2 == 0 ? 1 : -1) * std::pow(u, Real(-0.25)) * (c0 + c1 / std::sqrt(u));
  const Real Z = 2 * static_cast<Real>(sum.mid_double()) + corr;
  const double err = sum.width().to_double(MPFR_RNDU) + 0.053 * std::pow(t, -1.25) + 1e-12 + 1e-15 * std::fabs(static_cast<double>(Z));
  return {std::fabs(static_cast<double>(Z)), err};
}

}  // namespace

ZetaValue zeta_oracle(double t) {
  if (!(t >= 3 && t <= 1e8)) throw PreconditionFailed("zeta_oracle needs 3 <= t <= 1e8");
  const ZetaValue z = t <= 2e4 ? zeta_euler_maclaurin(t, 30) : zeta_riemann_siegel(t, 40);
  if (!(z.error <= 1e-6)) throw ConvergenceFailure("zeta_oracle error bound " + std::to_string(z.error) + " exceeds 1e-6");
  return z;
}

// ---- randomized suite ----

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) h = (h ^ ch) * 0x100000001b3ULL;
  return h;
}

// Portable draws: the stream depends only on the seed.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : state_(seed) {}
  Real uniform() {
    state_ = splitmix(state_);
    return static_cast<Real>(state_ >> 11) * 0x1.0p-53L;
  }
  Real log_uniform(Real lo, Real hi) { return std::exp(std::log(lo) + uniform() * (std::log(hi) - std::log(lo))); }
  long integer(long lo, long hi) { return lo + std::min(hi - lo, static_cast<long>(uniform() * (hi - lo + 1))); }
  long log_integer(long lo, long hi) {
    return std::clamp(static_cast<long>(std::floor(log_uniform(static_cast<Real>(lo), static_cast<Real>(hi) + 1))), lo, hi);
  }

 private:
  std::uint64_t state_;
};

// Round to a double so the configuration string reproduces the phase exactly.
Real as_double(Real x) { return static_cast<Real>(static_cast<double>(x)); }

std::string describe(const PhaseSpec& p) {
  return "t=" + fmt("%.17Lg", p.t) + " a=" + std::to_string(p.a) + " N=" + std::to_string(p.N) +
         (p.kind == PhaseKind::Differenced ? " r=" + std::to_string(p.r) : "");
}

CheckResult worse(const CheckResult& a, const CheckResult& b) {
  if (a.pass != b.pass) return a.pass ? b : a;
  return a.margin <= b.margin ? a : b;
}

}  // namespace

const std::vector<std::string>& suite_checks() {
  static const std::vector<std::string> names{"weyl_differencing", "kth_derivative_k3", "kth_derivative_k4",
                                              "kth_derivative_k5", "stationary_phase",  "poisson_summation"};
  return names;
}

std::pair<std::string, CheckResult> run_trial(const std::string& check, std::uint64_t trial_seed, const SuiteConfig& cfg) {
  Draw d(trial_seed);
  const Real max_t = cfg.max_t;
  if (check == "weyl_differencing") {
    const PhaseSpec p = PhaseSpec::log_zeta(as_double(d.log_uniform(100, max_t)), d.integer(1, 2000), d.log_integer(1, cfg.max_N));
    const long q = d.integer(1, std::min<long>(p.N, 30));
    return {describe(p) + " q=" + std::to_string(q), check_weyl(p, q)};
  }
  if (check.rfind("kth_derivative_k", 0) == 0) {
    const int k = check.back() - '0';
    const PhaseSpec p = PhaseSpec::log_zeta(as_double(d.log_uniform(1000, max_t)), d.log_integer(1, 10000), d.log_integer(1, cfg.max_N));
    const Real eta = as_double(d.log_uniform(0.05L, 4));
    return {describe(p) + " k=" + std::to_string(k) + " eta=" + fmt("%.17Lg", eta), check_kth_test(p, k, eta)};
  }
  if (check == "poisson_summation") {
    const PhaseSpec p = PhaseSpec::differenced(as_double(d.log_uniform(1000, max_t)), d.integer(1, 30),
                                               d.log_integer(10, 5000), d.integer(1, std::min<long>(200, cfg.max_N)));
    return {describe(p), check_b_process(p)};
  }
  if (check == "stationary_phase") {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const PhaseSpec p = PhaseSpec::differenced(as_double(d.log_uniform(1000, max_t)), d.integer(1, 30),
                                                 d.log_integer(10, 5000), d.integer(1, std::min<long>(200, cfg.max_N)));
      const auto [lo, hi] = dual_range(p);
      if (hi < lo || static_cast<Real>(hi - lo + 1) * p.N > 1500) continue;
      // Up to 8 frequencies spread over the dual range.
      const long count = std::min<long>(8, hi - lo + 1);
      std::optional<CheckResult> worst;
      std::string nus;
      for (long j = 0; j < count; ++j) {
        const long nu = count == 1 ? lo : lo + (hi - lo) * j / (count - 1);
        const CheckResult c = check_stationary_phase(p, nu);
        worst = worst ? worse(*worst, c) : c;
        nus += (nus.empty() ? "" : ",") + std::to_string(nu);
      }
      return {describe(p) + " nu=" + nus, *worst};
    }
    throw ConvergenceFailure("no stationary-phase configuration drawn for seed " + std::to_string(trial_seed));
  }
  throw PreconditionFailed("unknown check '" + check + "'");
}

SuiteReport run_lemma_suite(const SuiteConfig& cfg) {
  if (cfg.trials < 1) throw PreconditionFailed("trials must be >= 1");
  if (!(cfg.max_t >= 1000) || cfg.max_N < 1) throw PreconditionFailed("max_t must be >= 1000 and max_N >= 1");
  SuiteReport report;
  report.config = cfg;
  for (const std::string& check : suite_checks()) {
    CheckStats& st = report.stats[check];
    for (int i = 0; i < cfg.trials; ++i) {
      const std::uint64_t seed = splitmix(cfg.seed ^ fnv1a(check)) + static_cast<std::uint64_t>(i);
      auto [config, result] = run_trial(check, seed, cfg);
      st.min_margin = st.runs == 0 ? result.margin : std::min(st.min_margin, result.margin);
      ++st.runs;
      if (!result.pass) {
        ++st.failures;
        report.failures.push_back({check, seed, config, result});
      }
    }
  }
  return report;
}

}  // namespace subweyl::lab
