#pragma once

// Directed-rounding arithmetic. Every quantity is carried as a closed interval
// [lo, hi] of MPFR floats whose endpoints are rounded outward, so the exact
// real value of the expression that produced it always lies inside. An upper
// bound is the `hi` endpoint, a lower bound the `lo` endpoint.

#include <mpfr.h>

#include <compare>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "subweyl/errors.hpp"

namespace subweyl::rigor {

enum class Direction { Up, Down };

inline constexpr int kMinDigits = 30;
inline constexpr int kDefaultDigits = 60;
inline constexpr int kMaxDigits = 480;

// Working precision in bits for a decimal digit count. Monotone in `digits`,
// which is what makes enclosures at higher precision nest inside lower ones.
mpfr_prec_t digits_to_bits(int digits);

// Owning RAII wrapper around an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits = 128);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t bits() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  // Scientific notation with `sig` significant digits, rounded per `rnd`.
  std::string to_string(int sig, mpfr_rnd_t rnd = MPFR_RNDN) const;

  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

 private:
  mpfr_t value_;
};

class Interval {
 public:
  Interval() : Interval(mpfr_prec_t{128}) {}
  explicit Interval(mpfr_prec_t bits);
  Interval(BigFloat lo, BigFloat hi);

  static Interval from_int(long v, int digits);
  static Interval from_double(double v, int digits);
  // Exact enclosure of a decimal literal ("1.14283", "2.53087e-11", "-7").
  static Interval from_decimal(std::string_view text, int digits);
  // Enclosure of p/q.
  static Interval from_ratio(long p, long q, int digits);
  static Interval pi(int digits);
  static Interval log2(int digits);

  const BigFloat& lo() const { return lo_; }
  const BigFloat& hi() const { return hi_; }
  mpfr_prec_t bits() const { return lo_.bits(); }

  double upper_double() const { return hi_.to_double(MPFR_RNDU); }
  double lower_double() const { return lo_.to_double(MPFR_RNDD); }
  double mid_double() const;

  // Upper bound of hi - lo.
  BigFloat width() const;
  // Upper bound of (hi - lo) / |lo|; +inf when lo == 0.
  double relative_width() const;

  bool is_point() const { return lo_ == hi_; }
  bool certainly_positive() const { return mpfr_sgn(lo_.get()) > 0; }
  bool certainly_nonnegative() const { return mpfr_sgn(lo_.get()) >= 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_.get()) < 0; }
  bool contains_zero() const { return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0; }

  std::string to_string(int sig = 20) const;

 private:
  BigFloat lo_;
  BigFloat hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

Interval operator+(const Interval& a, long b);
Interval operator+(long a, const Interval& b);
Interval operator-(const Interval& a, long b);
Interval operator-(long a, const Interval& b);
Interval operator*(const Interval& a, long b);
Interval operator*(long a, const Interval& b);
Interval operator/(const Interval& a, long b);
Interval operator/(long a, const Interval& b);

Interval sqrt(const Interval& x);
Interval log(const Interval& x);
Interval exp(const Interval& x);
Interval pow(const Interval& base, const Interval& exponent);
Interval pow(const Interval& base, long exponent);
// base^(p/q) for positive base.
Interval pow_ratio(const Interval& base, long p, long q);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
Interval hypot(const Interval& x, const Interval& y);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

// Collapse to an integer only when both endpoints round to the same one.
long ceil_to_long(const Interval& x);
long floor_to_long(const Interval& x);
Interval ceil(const Interval& x);
Interval floor(const Interval& x);

// Three-valued comparisons: true/false when decided, PrecisionExhausted when
// the enclosures overlap.
bool less(const Interval& a, const Interval& b);
bool less_equal(const Interval& a, const Interval& b);

// A real known to be an upper (or lower) bound of an exact value.
class UpperScalar {
 public:
  UpperScalar() : value_(64), direction_(Direction::Up), digits_(kDefaultDigits) {}
  UpperScalar(BigFloat value, Direction direction, int digits)
      : value_(std::move(value)), direction_(direction), digits_(digits) {}

  static UpperScalar upper_of(const Interval& x, int digits) { return {x.hi(), Direction::Up, digits}; }
  static UpperScalar lower_of(const Interval& x, int digits) { return {x.lo(), Direction::Down, digits}; }

  const BigFloat& value() const { return value_; }
  Direction direction() const { return direction_; }
  int precision_digits() const { return digits_; }

  // Rounded in the scalar's own direction, so the double is still a bound.
  double to_double() const;
  // `sig` significant digits, rounded in the scalar's direction.
  std::string to_string(int sig) const;
  // The scalar as a degenerate interval (for recombination).
  Interval as_interval() const;

 private:
  BigFloat value_;
  Direction direction_;
  int digits_;
};

const char* to_string(Direction d);

// Arithmetic expression tree over exact decimal/integer leaves.
class Expr {
 public:
  enum class Op { Literal, Add, Sub, Mul, Div, Neg, Pow, Log, Exp, Sqrt, Ceil, Floor };

  static Expr literal(std::string decimal);
  static Expr integer(long v);
  static Expr ratio(long p, long q);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& a, const Expr& b);
  friend Expr log(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr sqrt(const Expr& a);
  friend Expr ceil(const Expr& a);
  friend Expr floor(const Expr& a);

  Interval enclose(int digits) const;
  std::string to_string() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, std::string text, std::initializer_list<Expr> children);
  std::shared_ptr<const Node> node_;
};

UpperScalar eval_expr(const Expr& expr, Direction direction, int digits = kDefaultDigits);

void require_valid_digits(int digits);

// Runs `f(digits)`, doubling the precision on PrecisionExhausted until
// kMaxDigits. Rethrows the last PrecisionExhausted when even that fails.
template <typename F>
auto with_precision_escalation(int digits, F&& f) -> decltype(f(digits)) {
  for (int d = digits;; d *= 2) {
    try {
      return f(d);
    } catch (const PrecisionExhausted&) {
      if (d * 2 > kMaxDigits) throw;
    }
  }
}

}  // namespace subweyl::rigor
