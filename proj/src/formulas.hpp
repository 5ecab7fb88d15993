#pragma once

// The coefficient formulas, written once over an arithmetic backend `Ops`.
// IntervalOps gives certified enclosures; FastOps gives long double values
// for search loops (never reported as bounds).

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subweyl/errors.hpp"
#include "subweyl/pipeline.hpp"
#include "subweyl/rigor.hpp"

namespace subweyl::detail {

struct IntervalOps {
  using T = rigor::Interval;

  explicit IntervalOps(int digits) : d(digits), pi_(T::pi(digits)) {}

  T n(long a) const { return T::from_int(a, d); }
  T q(long a, long b) const { return T::from_ratio(a, b, d); }
  T lit(const char* s) const { return T::from_decimal(s, d); }
  const T& pi() const { return pi_; }
  T ln2() const { return T::log2(d); }
  T powr(const T& x, long a, long b) const { return rigor::pow(x, q(a, b)); }

  static T exp(const T& x) { return rigor::exp(x); }
  static T log(const T& x) { return rigor::log(x); }
  static T sqrt(const T& x) { return rigor::sqrt(x); }
  static T pow(const T& x, long k) { return rigor::pow(x, k); }
  static T max(const T& a, const T& b) { return rigor::max(a, b); }
  static bool lt(const T& a, const T& b) { return rigor::less(a, b); }
  static bool le(const T& a, const T& b) { return rigor::less_equal(a, b); }
  static bool pos(const T& x) { return x.certainly_positive(); }
  // ceil(x) clamped at 0.
  static long ceil0(const T& x) {
    if (x.certainly_negative() || x.hi().sign() == 0) return 0;
    return std::max(0L, rigor::ceil_to_long(x));
  }
  // Degenerate interval at the upper endpoint.
  static T upper_point(const T& x) { return T(x.hi(), x.hi()); }

  int d;
  T pi_;
};

struct FastOps {
  using T = long double;

  explicit FastOps(int = 0) {}

  T n(long a) const { return static_cast<T>(a); }
  T q(long a, long b) const { return static_cast<T>(a) / static_cast<T>(b); }
  T lit(const char* s) const { return std::strtold(s, nullptr); }
  T pi() const { return 3.141592653589793238462643383279502884L; }
  T ln2() const { return 0.693147180559945309417232121458176568L; }
  T powr(T x, long a, long b) const {
    if (!(x > 0)) throw DomainError("pow of a nonpositive value");
    return std::pow(x, q(a, b));
  }

  static T exp(T x) { return std::exp(x); }
  static T log(T x) {
    if (!(x > 0)) throw DomainError("log of a nonpositive value");
    return std::log(x);
  }
  static T sqrt(T x) {
    if (x < 0) throw DomainError("sqrt of a negative value");
    return std::sqrt(x);
  }
  static T pow(T x, long k) { return std::pow(x, static_cast<T>(k)); }
  static T max(T a, T b) { return std::max(a, b); }
  static bool lt(T a, T b) { return a < b; }
  static bool le(T a, T b) { return a <= b; }
  static bool pos(T x) { return x > 0; }
  static long ceil0(T x) {
    if (!std::isfinite(x) || x > 1e15L) throw DomainError("block count out of range");
    return std::max(0L, static_cast<long>(std::ceil(x)));
  }
  static T upper_point(T x) { return x; }
};

template <class T>
struct DerivTest {
  T A, B, lambda0;
  std::vector<T> delta;
};

template <class Ops>
typename Ops::T deriv_delta(const Ops& o, int j, const typename Ops::T& eta) {
  using T = typename Ops::T;
  if (j == 3) {
    T inner = 1 + o.q(3, 8) * Ops::sqrt(o.pi()) * o.powr(eta, 3, 2);
    return Ops::sqrt((1 + Ops::sqrt(inner)) / 2);
  }
  if (j < 3 || j > 40) throw PreconditionFailed("delta_j needs 3 <= j <= 40");
  const long K = 1L << (j - 1);
  T t = 2 / o.powr(o.n(2337), K - 2, K);
  T u = o.powr(9 * o.pi() * eta / 1024, 1, K);
  return Ops::sqrt(1 + t * u);
}

// A_k, B_k by the base case at k = 3 and the recursion with K = 2^(j-1) of the
// source level j.
template <class Ops>
DerivTest<typename Ops::T> deriv_test(const Ops& o, int k, const typename Ops::T& eta, const typename Ops::T& h) {
  using T = typename Ops::T;
  if (k < 3 || k > 40) throw PreconditionFailed("derivative test order must be in [3, 40]");
  if (!Ops::pos(eta)) throw DomainError("eta must be positive");
  if (!Ops::lt(o.n(1), h)) throw DomainError("h must exceed 1");

  const T sqrt_pi = Ops::sqrt(o.pi());
  const T c32 = o.n(32) / (15 * sqrt_pi);
  DerivTest<T> out{o.n(0), o.n(0), Ops::pow(1 / eta + c32 * Ops::sqrt(eta) * h, -3), {}};
  const T l3 = o.powr(out.lambda0, 1, 3);
  out.delta.push_back(deriv_delta(o, 3, eta));
  const T& d3 = out.delta.back();
  T A = Ops::sqrt(1 / (eta * h) + c32 * Ops::sqrt(eta + l3) + (eta + l3) * l3 / 3) * d3;
  T B = Ops::sqrt(o.n(32)) / (Ops::sqrt(o.n(3)) * o.powr(o.pi(), 1, 4) * o.powr(eta, 1, 4)) * d3;
  for (int j = 3; j < k; ++j) {
    const long K = 1L << (j - 1);
    const T d = out.delta.back();
    T ca = o.powr(o.n(2), 19, 12) * (K - 1) / Ops::sqrt(o.n((2 * K - 1) * (4 * K - 3)));
    T cb = o.powr(o.n(2), 3, 2) * (K - 1) / Ops::sqrt(o.n((2 * K - 3) * (4 * K - 5)));
    A = d * (o.powr(h, -1, K) + ca * Ops::sqrt(A));
    B = d * cb * Ops::sqrt(B);
    out.delta.push_back(deriv_delta(o, j + 1, eta));
  }
  out.A = A;
  out.B = B;
  return out;
}

template <class T>
struct Params {
  T L0;
  std::optional<T> L1;
  T h1, h2, eta1, eta2, theta1, theta2, theta3;
};

template <class T>
struct Core {
  std::optional<long> K, R;
  T h0, h3, h5, q0, alpha;
  T A4, B4, A5, B5;
  T C0, D3, D4, D3t, D4t, C1, C2, E1, E2, E3, C45;
  std::map<std::string, T> mu;
  T S1, S2, S3, RS;
};

template <class Ops>
struct Pipeline {
  using T = typename Ops::T;

  const Ops& o;
  const Params<T>& p;

  // t0^(a/b)
  T t0pow(long a, long b) const { return Ops::exp(p.L0 * o.q(a, b)); }
  T t0pow(const T& e) const { return Ops::exp(p.L0 * e); }

  T h0_denominator_term(H0Convention conv) const {
    return conv == H0Convention::Theta1 ? p.theta1 * t0pow(-7, 17) : p.h1 / (p.theta2 * t0pow(7, 17));
  }
  T h0(H0Convention conv) const { return p.h1 / (1 - h0_denominator_term(conv)); }
  T mu_base() const { return 1 - p.h1 / (p.theta2 * t0pow(7, 17)); }
  T q0() const { return p.theta1 * o.powr(p.theta2, 7, 17) * t0pow(65, 697); }

  std::optional<std::string> violation(const PipelineConfig& cfg) const {
    const T one = o.n(1);
    if (!Ops::le(Ops::log(o.n(200)), p.L0)) return "t0 >= 200";
    if (p.L1 && !Ops::le(p.L0, *p.L1)) return "t1 >= t0";
    if (!Ops::lt(one, p.h1)) return "h1 > 1";
    if (!Ops::lt(one, p.h2)) return "h2 > 1";
    if (!Ops::pos(p.eta1)) return "eta1 > 0";
    if (!Ops::pos(p.eta2)) return "eta2 > 0";
    if (!Ops::pos(p.theta1)) return "theta1 > 0";
    if (!Ops::pos(p.theta2)) return "theta2 > 0";
    if (!Ops::pos(p.theta3)) return "theta3 > 0";
    if (!Ops::le(o.n(2), q0())) return "q0 >= 2";
    if (!Ops::lt(h0_denominator_term(cfg.h0), one)) return "h0 in (1, 2]";
    if (!Ops::le(h0(cfg.h0), o.n(2))) return "h0 in (1, 2]";
    // The theta1 form of h0 dominates the block ratio only when theta1 >= h1/theta2.
    if (cfg.h0 == H0Convention::Theta1 && !Ops::le(p.h1, p.theta1 * p.theta2)) return "theta1 * theta2 >= h1";
    if (!Ops::pos(mu_base())) return "1 - h1/(theta2 t0^(7/17)) > 0";
    if (!Ops::pos(1 - p.h2 / p.theta2 * t0pow(-27, 82))) return "1 - (h2/theta2) t0^(-27/82) > 0";
    if (!Ops::pos(p.theta1 - 1 / (p.theta2 * t0pow(100, 697)))) return "theta1 - 1/(theta2 t0^(100/697)) > 0";
    return std::nullopt;
  }

  T s1() const { return 2 * Ops::sqrt(p.theta3 * (1 + 1 / (2 * t0pow(27, 82)))); }

  void s2(const PipelineConfig& cfg, Core<T>& k) const {
    k.h3 = p.h2 / (1 - p.h2 / p.theta2 * t0pow(-27, 82));
    const T hA = cfg.h3 == H3Convention::Proof ? Ops::pow(k.h3, 4) : k.h3;
    DerivTest<T> dt = deriv_test(o, 4, p.eta2, hA);
    k.A4 = dt.A;
    k.B4 = dt.B;
    const T a = o.powr(p.h2, 3, 14) - 1;
    const T b = o.powr(p.h2, 15, 28) - 1;
    T g1 = 1 / a, g2 = 1 / b;
    if (p.L1) {
      const T arg = (o.q(115, 1394) * *p.L1 - Ops::log(p.theta3 / p.theta2)) / Ops::log(p.h2);
      k.R = Ops::ceil0(arg);
      const T lh = Ops::log(p.h2) * *k.R;
      g1 = (1 - Ops::exp(-lh * o.q(3, 14))) / a;
      g2 = (1 - Ops::exp(-lh * o.q(15, 28))) / b;
    }
    const T& h3 = k.h3;
    k.D3 = o.powr(o.n(3) / o.pi(), 1, 14) * k.A4 * o.powr(h3, 5, 7) * (h3 - 1) * o.powr(p.theta2, 3, 14) * g1;
    k.D4 = o.powr(o.pi() / 3, 1, 14) * k.B4 * o.powr(h3, 2, 7) * o.powr(h3 - 1, 3, 4) * o.powr(p.theta2, 15, 28) * g2;
    k.D3t = k.D3 * t0pow(o.q(19, 119) - o.q(27, 164));
    k.D4t = k.D4 * t0pow(o.q(71, 476) - o.q(27, 164));
  }

  struct Block {
    T q0, alpha, h5, A5, B5, C1, C2, E1, E2, E3;
  };

  Block block(const T& h) const {
    const T sqrt2 = Ops::sqrt(o.n(2));
    const T sqrt_pi = Ops::sqrt(o.pi());
    const T r = 76545 * sqrt2 / 107264;
    const T pi4 = Ops::pow(o.pi(), 4);
    const T b1 = o.powr(53632 * sqrt2 * pi4 / 729, 1, 30) * o.powr(r, 1, 8) / o.pi();
    const T b2 = o.powr(o.n(729) / (53632 * sqrt2 * pi4), 1, 30) / o.powr(o.pi(), 7, 8);
    const T c1 = o.q(1800, 2911) * b1 * sqrt_pi;
    const T c2 = o.q(28800, 54481) * b2 * sqrt_pi;

    const T q0v = q0();
    const T alpha = Ops::sqrt(h - 1 + p.theta1 / (o.powr(p.theta2, 5, 41) * t0pow(222, 697)));
    const T h5 = r * Ops::pow(h, 9);
    DerivTest<T> dt = deriv_test(o, 5, p.eta1, h5);
    const T hm1 = h - 1;
    const T C1 = alpha * Ops::sqrt(hm1 / p.theta1 / (1 - 1 / q0v) +
                                   c1 * o.powr(p.theta1, 11, 30) * dt.A * o.powr(h, 21, 8) * hm1);
    const T C2 = alpha * Ops::sqrt(c2 * o.powr(p.theta1, 61, 120) * dt.B * o.powr(h, 3, 2) * o.powr(hm1, 7, 8));
    const T E1 = alpha * Ops::sqrt(o.lit("12.496") * sqrt_pi) * o.powr(h, 3, 4) *
                 o.powr(p.theta1 - 1 / (p.theta2 * t0pow(100, 697)), -1, 4);
    const T E2 = alpha * Ops::sqrt(o.q(9, 14) * o.powr(p.theta1, 1, 3) *
                                   (o.lit("4.465") * o.powr(hm1, 1, 3) /
                                        (o.powr(o.pi(), 4, 3) * o.powr(p.theta2, 1, 3) * t0pow(7, 51)) +
                                    6 / o.pi() * Ops::pow(h, 3) * hm1));
    const T E3 = alpha * Ops::sqrt(6 + 5 / o.pi() * o.ln2());
    return Block{q0v, alpha, h5, dt.A, dt.B, C1, C2, E1, E2, E3};
  }

  // sup over L >= L0 of ((3/34 L - log(theta2 sqrt(2 pi)))/log h1 + 1) e^(-27 L/164),
  // clamped at 0. The bracket bounds the block count at height e^L.
  T block_count_tail() const {
    const T lh = Ops::log(p.h1);
    const T cp = Ops::log(p.theta2 * Ops::sqrt(2 * o.pi()));
    const T a = o.q(3, 34), e = o.q(27, 164);
    const T lstar = 1 / e - (lh - cp) / a;
    const T L = Ops::max(p.L0, lstar);
    const T g = ((a * L - cp) / lh + 1) * Ops::exp(-e * L);
    return Ops::max(g, o.n(0));
  }

  void s3(const PipelineConfig& cfg, Core<T>& k) const {
    k.h0 = h0(cfg.h0);
    Block b = block(k.h0);
    k.q0 = b.q0;
    k.alpha = b.alpha;
    k.h5 = b.h5;
    k.A5 = b.A5;
    k.B5 = b.B5;
    k.C1 = b.C1;
    k.C2 = b.C2;
    k.E1 = b.E1;
    k.E2 = b.E2;
    k.E3 = b.E3;

    const T& h = p.h1;
    const T lh = Ops::log(h);
    const T lbase = Ops::log(mu_base());
    const T l2pi = Ops::log(2 * o.pi());
    auto ha = [&](const T& a) { return Ops::exp(a * lh); };
    const T a1 = o.q(5, 82), a2 = o.q(17, 328), a3 = o.q(87, 164), a4 = o.q(5, 246);

    if (p.L1) {
      const T arg = (o.q(3, 34) * *p.L1 - Ops::log(p.theta2) - l2pi / 2) / lh;
      k.K = Ops::ceil0(arg);
      const long K = *k.K;
      auto mu1 = [&](const T& a) { return (1 - Ops::exp(-a * lh * K)) / (Ops::exp(a / 2 * l2pi) * (ha(a) - 1)); };
      auto mu2 = [&](const T& a) {
        T m = mu1(a) * Ops::exp(-a * lbase);
        if (cfg.mu2 == Mu2Form::Sound) m = m * Ops::exp(a * (l2pi + lh));
        return m;
      };
      k.mu.emplace("mu1(5/82)", mu1(a1));
      k.mu.emplace("mu2(17/328)", mu2(a2));
      k.mu.emplace("mu1(87/164)", mu1(a3));
      k.mu.emplace("mu2(5/246)", mu2(a4));
      k.C45 = k.C1 * k.mu.at("mu1(5/82)") + k.C2 * k.mu.at("mu2(17/328)") * Ops::exp(a2 * lh * K) * t0pow(-3, 656) +
              k.E1 * k.mu.at("mu1(87/164)") * t0pow(-27, 328) +
              k.E2 * k.mu.at("mu2(5/246)") * Ops::exp(a4 * lh * K) * t0pow(-13, 246) + k.E3 * o.n(K) * t0pow(-27, 164);
    } else {
      auto mu3 = [&](const T& a) { return 1 / (Ops::exp(a / 2 * l2pi) * (ha(a) - 1)); };
      // The subtracted (2 pi)^(a/2) t^(-3a/34) term vanishes as t grows, so it
      // cannot be credited uniformly in t >= t0.
      auto mu4 = [&](const T& a) { return Ops::exp(a * (Ops::log(h / p.theta2) - lbase)) / (1 - 1 / ha(a)); };
      k.mu.emplace("mu3(5/82)", mu3(a1));
      k.mu.emplace("mu4(17/328)", mu4(a2));
      k.mu.emplace("mu3(87/164)", mu3(a3));
      k.mu.emplace("mu4(5/246)", mu4(a4));
      k.C45 = k.C1 * k.mu.at("mu3(5/82)") + k.C2 * k.mu.at("mu4(17/328)") +
              k.E1 * k.mu.at("mu3(87/164)") * t0pow(-27, 328) + k.E2 * k.mu.at("mu4(5/246)") * t0pow(-427, 8364) +
              k.E3 * block_count_tail();
    }
  }

  Core<T> compute(const PipelineConfig& cfg) const {
    if (auto v = violation(cfg)) throw AdmissibilityError(*v, "");
    Core<T> k{};
    k.C0 = s1();
    s2(cfg, k);
    s3(cfg, k);
    k.S1 = Ops::upper_point(2 * k.C0);
    k.S2 = Ops::upper_point(2 * (k.D3t + k.D4t));
    k.S3 = Ops::upper_point(2 * k.C45);
    k.RS = Ops::upper_point(o.lit("1.48") * t0pow(-17, 41) + o.lit("0.127") * t0pow(-75, 82));
    return k;
  }
};

template <class T>
T assemble_total(const T& s1, const T& s2, const T& s3, const T& rs) {
  return ((s1 + s2) + s3) + rs;
}

}  // namespace subweyl::detail
