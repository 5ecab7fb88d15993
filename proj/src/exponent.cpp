#include "subweyl/exponent.hpp"

#include <sstream>

#include "formulas.hpp"

namespace subweyl {

using rigor::Interval;

namespace {

const Rational kHalf(1, 2);

}  // namespace

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

bool ExponentPair::valid() const { return k >= 0 && k <= kHalf && l >= kHalf && l <= 1; }

std::string ExponentPair::to_string() const {
  return (derivation.empty() ? std::string() : derivation) + "(" + subweyl::to_string(k) + ", " +
         subweyl::to_string(l) + ")";
}

ExponentPair apply_A(const ExponentPair& p) {
  if (!p.valid()) throw InvariantViolation("not an exponent pair: " + p.to_string());
  const Rational d = 2 * p.k + 2;
  return {p.k / d, (p.k + p.l + 1) / d, "A" + p.derivation};
}

ExponentPair apply_B(const ExponentPair& p) {
  if (!p.valid()) throw InvariantViolation("not an exponent pair: " + p.to_string());
  ExponentPair q{p.l - kHalf, p.k + kHalf, "B" + p.derivation};
  if (!q.valid()) throw InvariantViolation("B image leaves the pair region: " + q.to_string());
  return q;
}

ExponentPair apply_word(const std::string& word, const ExponentPair& p) {
  ExponentPair q = p;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it == 'A') q = apply_A(q);
    else if (*it == 'B') q = apply_B(q);
    else throw ParseError(std::string("unknown process letter '") + *it + "'");
  }
  return q;
}

Rational zeta_exponent(const ExponentPair& p) {
  if (p.k + 2 * p.l < Rational(3, 2)) throw PreconditionFailed("zeta exponent needs k + 2l >= 3/2, got " + p.to_string());
  return (2 * p.k + 2 * p.l - 1) / 4;
}

Interval derivative_test_delta(int j, const Interval& eta, int digits) {
  return detail::deriv_delta(detail::IntervalOps(digits), j, eta);
}

DerivTestEnclosure derivative_test_enclosure(int k, const Interval& eta, const Interval& h, int digits) {
  detail::DerivTest<Interval> t = detail::deriv_test(detail::IntervalOps(digits), k, eta, h);
  return {k, std::move(t.A), std::move(t.B), std::move(t.lambda0), std::move(t.delta)};
}

DerivTestConstants derivative_test_constants(int k, const Interval& eta, const Interval& h, int digits) {
  rigor::require_valid_digits(digits);
  DerivTestEnclosure e = derivative_test_enclosure(k, eta, h, digits);
  DerivTestConstants c;
  c.k = k;
  c.eta = eta;
  c.h = h;
  c.A_k = rigor::UpperScalar::upper_of(e.A, digits);
  c.B_k = rigor::UpperScalar::upper_of(e.B, digits);
  c.lambda0 = rigor::UpperScalar::upper_of(e.lambda0, digits);
  for (const Interval& d : e.delta) c.delta_chain.push_back(rigor::UpperScalar::upper_of(d, digits));
  return c;
}

}  // namespace subweyl
