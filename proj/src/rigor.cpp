#include "subweyl/rigor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <regex>
#include <vector>

namespace subweyl::rigor {

namespace {

constexpr mpfr_prec_t kGuardBits = 16;

mpfr_prec_t join_bits(const Interval& a, const Interval& b) { return std::max(a.bits(), b.bits()); }

std::string format_mpfr(mpfr_srcptr v, const char* conv, int prec, mpfr_rnd_t rnd) {
  char* buf = nullptr;
  std::string fmt = std::string("%.*R*") + conv;
  int n = mpfr_asprintf(&buf, fmt.c_str(), prec, rnd, v);
  if (n < 0) throw Error("mpfr_asprintf failed");
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

// Applies a binary op with both roundings to every endpoint pair and keeps
// the extremes. Used for products and quotients, whose extremes can sit at
// any corner.
template <typename Op>
Interval corners(const Interval& a, const Interval& b, Op op) {
  const mpfr_prec_t bits = join_bits(a, b);
  BigFloat lo(bits), hi(bits), tmp(bits);
  bool first = true;
  for (const BigFloat* x : {&a.lo(), &a.hi()}) {
    for (const BigFloat* y : {&b.lo(), &b.hi()}) {
      op(tmp.get(), x->get(), y->get(), MPFR_RNDD);
      if (first || mpfr_less_p(tmp.get(), lo.get())) mpfr_set(lo.get(), tmp.get(), MPFR_RNDD);
      op(tmp.get(), x->get(), y->get(), MPFR_RNDU);
      if (first || mpfr_greater_p(tmp.get(), hi.get())) mpfr_set(hi.get(), tmp.get(), MPFR_RNDU);
      first = false;
    }
  }
  return Interval(std::move(lo), std::move(hi));
}

// Monotone increasing unary op applied endpoint-wise.
template <typename Op>
Interval increasing(const Interval& x, Op op) {
  BigFloat lo(x.bits()), hi(x.bits());
  op(lo.get(), x.lo().get(), MPFR_RNDD);
  op(hi.get(), x.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

void require_positive(const Interval& x, const char* what) {
  if (x.hi().sign() <= 0) throw DomainError(std::string(what) + " of a nonpositive value");
  if (x.lo().sign() <= 0) throw PrecisionExhausted(std::string(what) + " argument enclosure reaches 0");
}

long collapse(const Interval& x, mpfr_rnd_t mode, const char* what) {
  BigFloat a(x.bits()), b(x.bits());
  mpfr_rint(a.get(), x.lo().get(), mode);
  mpfr_rint(b.get(), x.hi().get(), mode);
  if (!a.is_finite() || !b.is_finite()) throw DomainError(std::string(what) + " of a non-finite value");
  if (!(a == b)) throw PrecisionExhausted(std::string(what) + " enclosure " + x.to_string(12) + " straddles an integer");
  if (!mpfr_fits_slong_p(a.get(), MPFR_RNDN)) throw DomainError(std::string(what) + " result out of range");
  return mpfr_get_si(a.get(), MPFR_RNDN);
}

}  // namespace

mpfr_prec_t digits_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + kGuardBits;
}

void require_valid_digits(int digits) {
  if (digits < kMinDigits) throw PreconditionFailed("precision must be at least " + std::to_string(kMinDigits) + " digits");
  if (digits > 100000) throw PreconditionFailed("precision " + std::to_string(digits) + " digits is unreasonably large");
}

// ---- BigFloat ----

BigFloat::BigFloat(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, other.bits());
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.bits());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

std::string BigFloat::to_string(int sig, mpfr_rnd_t rnd) const {
  return format_mpfr(value_, "e", std::max(sig - 1, 0), rnd);
}

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  if (mpfr_unordered_p(a.get(), b.get())) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.get(), b.get());
  return c < 0 ? std::partial_ordering::less : c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent;
}

// ---- Interval ----

Interval::Interval(mpfr_prec_t bits) : lo_(bits), hi_(bits) {}

Interval::Interval(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (mpfr_nan_p(lo_.get()) || mpfr_nan_p(hi_.get())) throw DomainError("NaN in interval endpoint");
  if (mpfr_greater_p(lo_.get(), hi_.get())) throw InvariantViolation("interval with lo > hi");
}

Interval Interval::from_int(long v, int digits) {
  BigFloat lo(digits_to_bits(digits)), hi(digits_to_bits(digits));
  mpfr_set_si(lo.get(), v, MPFR_RNDD);
  mpfr_set_si(hi.get(), v, MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval Interval::from_double(double v, int digits) {
  if (!std::isfinite(v)) throw DomainError("non-finite double");
  BigFloat lo(digits_to_bits(digits)), hi(digits_to_bits(digits));
  mpfr_set_d(lo.get(), v, MPFR_RNDD);
  mpfr_set_d(hi.get(), v, MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval Interval::from_decimal(std::string_view text, int digits) {
  static const std::regex kDecimal(R"([+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)");
  std::string s(text);
  if (!std::regex_match(s, kDecimal)) throw ParseError("not a decimal literal: '" + s + "'");
  BigFloat lo(digits_to_bits(digits)), hi(digits_to_bits(digits));
  mpfr_strtofr(lo.get(), s.c_str(), nullptr, 10, MPFR_RNDD);
  mpfr_strtofr(hi.get(), s.c_str(), nullptr, 10, MPFR_RNDU);
  if (!lo.is_finite() || !hi.is_finite()) throw DomainError("decimal literal out of range: '" + s + "'");
  return Interval(std::move(lo), std::move(hi));
}

Interval Interval::from_ratio(long p, long q, int digits) {
  if (q == 0) throw DomainError("zero denominator");
  return from_int(p, digits) / q;
}

Interval Interval::pi(int digits) {
  BigFloat lo(digits_to_bits(digits)), hi(digits_to_bits(digits));
  mpfr_const_pi(lo.get(), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval Interval::log2(int digits) {
  BigFloat lo(digits_to_bits(digits)), hi(digits_to_bits(digits));
  mpfr_const_log2(lo.get(), MPFR_RNDD);
  mpfr_const_log2(hi.get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

double Interval::mid_double() const {
  BigFloat m(bits() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m.to_double();
}

BigFloat Interval::width() const {
  BigFloat w(bits());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

double Interval::relative_width() const {
  if (lo_.sign() == 0) return is_point() ? 0.0 : std::numeric_limits<double>::infinity();
  BigFloat r = width();
  BigFloat a(bits());
  mpfr_abs(a.get(), lo_.get(), MPFR_RNDN);
  mpfr_div(r.get(), r.get(), a.get(), MPFR_RNDU);
  return r.to_double(MPFR_RNDU);
}

std::string Interval::to_string(int sig) const {
  return "[" + lo_.to_string(sig, MPFR_RNDD) + ", " + hi_.to_string(sig, MPFR_RNDU) + "]";
}

// ---- arithmetic ----

Interval operator+(const Interval& a, const Interval& b) {
  const mpfr_prec_t bits = join_bits(a, b);
  BigFloat lo(bits), hi(bits);
  mpfr_add(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator-(const Interval& a, const Interval& b) {
  const mpfr_prec_t bits = join_bits(a, b);
  BigFloat lo(bits), hi(bits);
  mpfr_sub(lo.get(), a.lo().get(), b.hi().get(), MPFR_RNDD);
  mpfr_sub(hi.get(), a.hi().get(), b.lo().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator*(const Interval& a, const Interval& b) { return corners(a, b, mpfr_mul); }

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo().sign() == 0 && b.hi().sign() == 0) throw DomainError("division by zero");
  if (b.contains_zero()) throw PrecisionExhausted("denominator enclosure " + b.to_string(12) + " straddles 0");
  return corners(a, b, mpfr_div);
}

Interval operator-(const Interval& a) {
  BigFloat lo(a.bits()), hi(a.bits());
  mpfr_neg(lo.get(), a.hi().get(), MPFR_RNDD);
  mpfr_neg(hi.get(), a.lo().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator+(const Interval& a, long b) {
  BigFloat lo(a.bits()), hi(a.bits());
  mpfr_add_si(lo.get(), a.lo().get(), b, MPFR_RNDD);
  mpfr_add_si(hi.get(), a.hi().get(), b, MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator+(long a, const Interval& b) { return b + a; }

Interval operator-(const Interval& a, long b) {
  BigFloat lo(a.bits()), hi(a.bits());
  mpfr_sub_si(lo.get(), a.lo().get(), b, MPFR_RNDD);
  mpfr_sub_si(hi.get(), a.hi().get(), b, MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator-(long a, const Interval& b) {
  BigFloat lo(b.bits()), hi(b.bits());
  mpfr_si_sub(lo.get(), a, b.hi().get(), MPFR_RNDD);
  mpfr_si_sub(hi.get(), a, b.lo().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator*(const Interval& a, long b) { return a * Interval::from_int(b, kMinDigits); }
Interval operator*(long a, const Interval& b) { return b * a; }

Interval operator/(const Interval& a, long b) {
  if (b == 0) throw DomainError("division by zero");
  BigFloat lo(a.bits()), hi(a.bits());
  if (b > 0) {
    mpfr_div_si(lo.get(), a.lo().get(), b, MPFR_RNDD);
    mpfr_div_si(hi.get(), a.hi().get(), b, MPFR_RNDU);
  } else {
    mpfr_div_si(lo.get(), a.hi().get(), b, MPFR_RNDD);
    mpfr_div_si(hi.get(), a.lo().get(), b, MPFR_RNDU);
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval operator/(long a, const Interval& b) {
  BigFloat p(b.bits());
  mpfr_set_si(p.get(), a, MPFR_RNDN);  // exact: a long fits in the working precision
  return Interval(p, p) / b;
}

Interval sqrt(const Interval& x) {
  if (x.hi().sign() < 0) throw DomainError("sqrt of a negative value");
  if (x.lo().sign() < 0) throw PrecisionExhausted("sqrt argument enclosure straddles 0");
  return increasing(x, mpfr_sqrt);
}

Interval log(const Interval& x) {
  require_positive(x, "log");
  return increasing(x, mpfr_log);
}

Interval exp(const Interval& x) { return increasing(x, mpfr_exp); }

Interval pow(const Interval& base, const Interval& exponent) {
  require_positive(base, "pow");
  return exp(exponent * log(base));
}

Interval pow(const Interval& base, long n) {
  if (n == 0) return Interval::from_int(1, kMinDigits);
  const bool odd = (n % 2) != 0;
  if (base.certainly_negative()) {
    Interval p = pow(-base, n);
    return odd ? -p : p;
  }
  if (base.certainly_nonnegative()) {
    if (n < 0 && base.lo().sign() == 0) {
      if (base.hi().sign() == 0) throw DomainError("0 to a negative power");
      throw PrecisionExhausted("negative power of an enclosure touching 0");
    }
    BigFloat lo(base.bits()), hi(base.bits());
    const BigFloat& small = n > 0 ? base.lo() : base.hi();
    const BigFloat& large = n > 0 ? base.hi() : base.lo();
    mpfr_pow_si(lo.get(), small.get(), n, MPFR_RNDD);
    mpfr_pow_si(hi.get(), large.get(), n, MPFR_RNDU);
    return Interval(std::move(lo), std::move(hi));
  }
  if (n < 0) throw PrecisionExhausted("negative power of an enclosure straddling 0");
  BigFloat lo(base.bits()), hi(base.bits()), tmp(base.bits());
  mpfr_pow_si(hi.get(), base.hi().get(), n, MPFR_RNDU);
  mpfr_pow_si(tmp.get(), base.lo().get(), n, MPFR_RNDU);
  if (odd) {
    mpfr_pow_si(lo.get(), base.lo().get(), n, MPFR_RNDD);
  } else {
    mpfr_max(hi.get(), hi.get(), tmp.get(), MPFR_RNDU);
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval pow_ratio(const Interval& base, long p, long q) {
  return pow(base, Interval::from_ratio(p, q, kMinDigits + static_cast<int>(base.bits() / 3.33)));
}

namespace {

// |f'| <= 1 for sin and cos, so f(X) lies within radius of f(mid).
template <typename Op>
Interval lipschitz_trig(const Interval& x, Op op) {
  const mpfr_prec_t bits = x.bits();
  BigFloat mid(bits), r(bits), tmp(bits);
  mpfr_add(mid.get(), x.lo().get(), x.hi().get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  mpfr_sub(r.get(), x.hi().get(), mid.get(), MPFR_RNDU);
  mpfr_sub(tmp.get(), mid.get(), x.lo().get(), MPFR_RNDU);
  mpfr_max(r.get(), r.get(), tmp.get(), MPFR_RNDU);
  BigFloat lo(bits), hi(bits);
  op(lo.get(), mid.get(), MPFR_RNDD);
  op(hi.get(), mid.get(), MPFR_RNDU);
  mpfr_sub(lo.get(), lo.get(), r.get(), MPFR_RNDD);
  mpfr_add(hi.get(), hi.get(), r.get(), MPFR_RNDU);
  if (mpfr_cmp_si(lo.get(), -1) < 0) mpfr_set_si(lo.get(), -1, MPFR_RNDN);
  if (mpfr_cmp_si(hi.get(), 1) > 0) mpfr_set_si(hi.get(), 1, MPFR_RNDN);
  return Interval(std::move(lo), std::move(hi));
}

}  // namespace

Interval sin(const Interval& x) { return lipschitz_trig(x, mpfr_sin); }
Interval cos(const Interval& x) { return lipschitz_trig(x, mpfr_cos); }

Interval hypot(const Interval& x, const Interval& y) { return sqrt(pow(x, 2) + pow(y, 2)); }

Interval min(const Interval& a, const Interval& b) {
  const mpfr_prec_t bits = join_bits(a, b);
  BigFloat lo(bits), hi(bits);
  mpfr_min(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_min(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval max(const Interval& a, const Interval& b) {
  const mpfr_prec_t bits = join_bits(a, b);
  BigFloat lo(bits), hi(bits);
  mpfr_max(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval hull(const Interval& a, const Interval& b) {
  const mpfr_prec_t bits = join_bits(a, b);
  BigFloat lo(bits), hi(bits);
  mpfr_min(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

long ceil_to_long(const Interval& x) { return collapse(x, MPFR_RNDU, "ceil"); }
long floor_to_long(const Interval& x) { return collapse(x, MPFR_RNDD, "floor"); }

Interval ceil(const Interval& x) {
  BigFloat v(x.bits());
  mpfr_set_si(v.get(), ceil_to_long(x), MPFR_RNDN);
  return Interval(v, v);
}

Interval floor(const Interval& x) {
  BigFloat v(x.bits());
  mpfr_set_si(v.get(), floor_to_long(x), MPFR_RNDN);
  return Interval(v, v);
}

bool less(const Interval& a, const Interval& b) {
  if (mpfr_less_p(a.hi().get(), b.lo().get())) return true;
  if (mpfr_greaterequal_p(a.lo().get(), b.hi().get())) return false;
  throw PrecisionExhausted("comparison undecided: " + a.to_string(12) + " vs " + b.to_string(12));
}

bool less_equal(const Interval& a, const Interval& b) {
  if (mpfr_lessequal_p(a.hi().get(), b.lo().get())) return true;
  if (mpfr_greater_p(a.lo().get(), b.hi().get())) return false;
  throw PrecisionExhausted("comparison undecided: " + a.to_string(12) + " vs " + b.to_string(12));
}

// ---- UpperScalar ----

const char* to_string(Direction d) { return d == Direction::Up ? "UP" : "DOWN"; }

double UpperScalar::to_double() const { return value_.to_double(direction_ == Direction::Up ? MPFR_RNDU : MPFR_RNDD); }

std::string UpperScalar::to_string(int sig) const {
  return format_mpfr(value_.get(), "g", sig, direction_ == Direction::Up ? MPFR_RNDU : MPFR_RNDD);
}

Interval UpperScalar::as_interval() const { return Interval(value_, value_); }

// ---- Expr ----

struct Expr::Node {
  Op op;
  std::string text;
  std::vector<Expr> children;
};

Expr Expr::make(Op op, std::string text, std::initializer_list<Expr> children) {
  return Expr(std::make_shared<const Node>(Node{op, std::move(text), std::vector<Expr>(children)}));
}

Expr Expr::literal(std::string decimal) {
  Interval::from_decimal(decimal, kMinDigits);  // validates
  return make(Op::Literal, std::move(decimal), {});
}

Expr Expr::integer(long v) { return make(Op::Literal, std::to_string(v), {}); }
Expr Expr::ratio(long p, long q) { return integer(p) / integer(q); }

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Add, "+", {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Sub, "-", {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Mul, "*", {a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Div, "/", {a, b}); }
Expr operator-(const Expr& a) { return Expr::make(Expr::Op::Neg, "-", {a}); }
Expr pow(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Pow, "pow", {a, b}); }
Expr log(const Expr& a) { return Expr::make(Expr::Op::Log, "log", {a}); }
Expr exp(const Expr& a) { return Expr::make(Expr::Op::Exp, "exp", {a}); }
Expr sqrt(const Expr& a) { return Expr::make(Expr::Op::Sqrt, "sqrt", {a}); }
Expr ceil(const Expr& a) { return Expr::make(Expr::Op::Ceil, "ceil", {a}); }
Expr floor(const Expr& a) { return Expr::make(Expr::Op::Floor, "floor", {a}); }

Interval Expr::enclose(int digits) const {
  const Node& n = *node_;
  auto arg = [&](std::size_t i) { return n.children[i].enclose(digits); };
  switch (n.op) {
    case Op::Literal: return Interval::from_decimal(n.text, digits);
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: return arg(0) / arg(1);
    case Op::Neg: return -arg(0);
    case Op::Pow: {
      // Integer exponents keep negative bases legal.
      const Node& e = *n.children[1].node_;
      if (e.op == Op::Literal && e.text.find_first_of(".eE") == std::string::npos) {
        try {
          return rigor::pow(arg(0), std::stol(e.text));
        } catch (const std::out_of_range&) {
        }
      }
      return rigor::pow(arg(0), arg(1));
    }
    case Op::Log: return rigor::log(arg(0));
    case Op::Exp: return rigor::exp(arg(0));
    case Op::Sqrt: return rigor::sqrt(arg(0));
    case Op::Ceil: return rigor::ceil(arg(0));
    case Op::Floor: return rigor::floor(arg(0));
  }
  throw InvariantViolation("unknown expression node");
}

std::string Expr::to_string() const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Literal: return n.text;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
      return "(" + n.children[0].to_string() + " " + n.text + " " + n.children[1].to_string() + ")";
    case Op::Neg: return "-" + n.children[0].to_string();
    case Op::Pow: return "pow(" + n.children[0].to_string() + ", " + n.children[1].to_string() + ")";
    default: return n.text + "(" + n.children[0].to_string() + ")";
  }
}

UpperScalar eval_expr(const Expr& expr, Direction direction, int digits) {
  require_valid_digits(digits);
  Interval x = expr.enclose(digits);
  return direction == Direction::Up ? UpperScalar::upper_of(x, digits) : UpperScalar::lower_of(x, digits);
}

}  // namespace subweyl::rigor
