#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "subweyl/rigor.hpp"

namespace subweyl {

using Rational = boost::multiprecision::cpp_rational;

// A rational exponent pair (k, l) with 0 <= k <= 1/2 <= l <= 1. `derivation`
// is the word of processes applied to (0, 1), rightmost first.
struct ExponentPair {
  Rational k;
  Rational l;
  std::string derivation;

  static ExponentPair trivial() { return {0, 1, ""}; }
  bool valid() const;
  std::string to_string() const;
  friend bool operator==(const ExponentPair& a, const ExponentPair& b) { return a.k == b.k && a.l == b.l; }
};

// (k, l) -> (k/(2k+2), (k+l+1)/(2k+2))
ExponentPair apply_A(const ExponentPair& p);
// (k, l) -> (l - 1/2, k + 1/2); InvariantViolation if the image is not a pair.
ExponentPair apply_B(const ExponentPair& p);
// Applies a word such as "ABAAAB" right to left.
ExponentPair apply_word(const std::string& word, const ExponentPair& p = ExponentPair::trivial());
// (2k + 2l - 1)/4, requires k + 2l >= 3/2.
Rational zeta_exponent(const ExponentPair& p);

std::string to_string(const Rational& r);

// Interval enclosures of the kth derivative test constants. `delta[j-3]` is
// delta_j for j = 3..k.
struct DerivTestEnclosure {
  int k = 3;
  rigor::Interval A;
  rigor::Interval B;
  rigor::Interval lambda0;
  std::vector<rigor::Interval> delta;
};

DerivTestEnclosure derivative_test_enclosure(int k, const rigor::Interval& eta, const rigor::Interval& h, int digits);

struct DerivTestConstants {
  int k = 3;
  rigor::Interval eta;
  rigor::Interval h;
  rigor::UpperScalar A_k;
  rigor::UpperScalar B_k;
  std::vector<rigor::UpperScalar> delta_chain;
  rigor::UpperScalar lambda0;
};

DerivTestConstants derivative_test_constants(int k, const rigor::Interval& eta, const rigor::Interval& h,
                                             int digits = rigor::kDefaultDigits);

// delta_j alone; j = 3 uses the base-case form.
rigor::Interval derivative_test_delta(int j, const rigor::Interval& eta, int digits);

}  // namespace subweyl
