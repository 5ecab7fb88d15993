#include "subweyl/pipeline.hpp"

#include "subweyl/exponent.hpp"
#include "formulas.hpp"

namespace subweyl {

using rigor::Interval;
using rigor::UpperScalar;

const char* to_string(H3Convention c) { return c == H3Convention::Proof ? "proof" : "statement"; }
const char* to_string(H0Convention c) { return c == H0Convention::Theta1 ? "theta1" : "theta2"; }
const char* to_string(Mu2Form f) { return f == Mu2Form::Sound ? "sound" : "displayed"; }

H3Convention parse_h3_convention(const std::string& s) {
  if (s == "proof") return H3Convention::Proof;
  if (s == "statement") return H3Convention::Statement;
  throw ParseError("h3 convention must be 'proof' or 'statement', got '" + s + "'");
}

H0Convention parse_h0_convention(const std::string& s) {
  if (s == "theta1") return H0Convention::Theta1;
  if (s == "theta2") return H0Convention::Theta2;
  throw ParseError("h0 convention must be 'theta1' or 'theta2', got '" + s + "'");
}

void ParamSet::validate_syntax() const {
  for (const std::string* f : {&log_t0, &h1, &h2, &eta1, &eta2, &theta1, &theta2, &theta3}) {
    Interval::from_decimal(*f, rigor::kMinDigits);
  }
  if (!infinite()) Interval::from_decimal(log_t1, rigor::kMinDigits);
}

ParamSet published_tail_row() {
  return {"875", "inf", "1.01563", "1.00270", "1.59875", "0.828895", "1.14283", "261658", "2.53087e-11"};
}

ParamValues ParamValues::from(const ParamSet& p, int digits) {
  auto d = [&](const std::string& s) { return Interval::from_decimal(s, digits); };
  return {d(p.log_t0),
          p.infinite() ? std::nullopt : std::optional<Interval>(d(p.log_t1)),
          d(p.h1),
          d(p.h2),
          d(p.eta1),
          d(p.eta2),
          d(p.theta1),
          d(p.theta2),
          d(p.theta3)};
}

bool normalisation_exponents_ok() {
  return Rational(19, 119) < Rational(27, 164) && Rational(71, 476) < Rational(27, 164) &&
         zeta_exponent(apply_word("ABAAAB")) == Rational(27, 164);
}

namespace {

using Ops = detail::IntervalOps;
using IPipeline = detail::Pipeline<Ops>;

detail::Params<Interval> to_params(const ParamValues& v) {
  return {v.L0, v.L1, v.h1, v.h2, v.eta1, v.eta2, v.theta1, v.theta2, v.theta3};
}

UpperScalar up(const Interval& x, int digits) { return UpperScalar::upper_of(x, digits); }

template <typename F>
auto at_precision(const ParamSet& p, const PipelineConfig& cfg, F&& f) {
  p.validate_syntax();
  rigor::require_valid_digits(cfg.digits);
  return rigor::with_precision_escalation(cfg.digits, [&](int d) {
    const detail::Params<Interval> v = to_params(ParamValues::from(p, d));
    const Ops o(d);
    return f(IPipeline{o, v}, d);
  });
}

void require_ok(const IPipeline& pl, const PipelineConfig& cfg) {
  if (auto why = pl.violation(cfg)) throw AdmissibilityError(*why, "");
}

}  // namespace

std::optional<std::string> first_violation(const ParamValues& p, const PipelineConfig& cfg) {
  const detail::Params<Interval> v = to_params(p);
  const Ops o(std::max(cfg.digits, rigor::kMinDigits));
  return IPipeline{o, v}.violation(cfg);
}

std::optional<std::string> first_violation(const ParamSet& p, const PipelineConfig& cfg) {
  return at_precision(p, cfg, [&](const IPipeline& pl, int) { return pl.violation(cfg); });
}

void require_admissible(const ParamSet& p, const PipelineConfig& cfg) {
  if (auto v = first_violation(p, cfg)) throw AdmissibilityError(*v, "");
}

UpperScalar coeff_S1(const ParamSet& p, const PipelineConfig& cfg) {
  return at_precision(p, cfg, [&](const IPipeline& pl, int d) {
    require_ok(pl, cfg);
    return up(pl.s1(), d);
  });
}

std::pair<UpperScalar, UpperScalar> coeff_S2(const ParamSet& p, const PipelineConfig& cfg) {
  return at_precision(p, cfg, [&](const IPipeline& pl, int d) {
    require_ok(pl, cfg);
    detail::Core<Interval> k{};
    pl.s2(cfg, k);
    return std::make_pair(up(k.D3, d), up(k.D4, d));
  });
}

BlockCoefficients coeff_S3_block(const ParamSet& p, const Interval& h0, const PipelineConfig& cfg) {
  return at_precision(p, cfg, [&](const IPipeline& pl, int d) {
    const Ops& o = pl.o;
    if (!rigor::less(o.n(1), h0) || !rigor::less_equal(h0, o.n(2))) throw AdmissibilityError("h0 in (1, 2]", h0.to_string(8));
    if (!rigor::less_equal(o.n(2), pl.q0())) throw AdmissibilityError("q0 >= 2", "");
    if (!(pl.p.theta1 - 1 / (pl.p.theta2 * pl.t0pow(100, 697))).certainly_positive())
      throw AdmissibilityError("theta1 - 1/(theta2 t0^(100/697)) > 0", "");
    IPipeline::Block b = pl.block(h0);
    return BlockCoefficients{up(b.C1, d), up(b.C2, d), up(b.E1, d), up(b.E2, d), up(b.E3, d)};
  });
}

UpperScalar coeff_S3(const ParamSet& p, const PipelineConfig& cfg) {
  return at_precision(p, cfg, [&](const IPipeline& pl, int d) {
    require_ok(pl, cfg);
    detail::Core<Interval> k{};
    pl.s3(cfg, k);
    return up(k.C45, d);
  });
}

UpperScalar CoefficientReport::recompute_total() const {
  return UpperScalar::upper_of(detail::assemble_total(breakdown.S1.as_interval(), breakdown.S2.as_interval(),
                                                      breakdown.S3.as_interval(), breakdown.RS.as_interval()),
                               digits);
}

CoefficientReport assemble(const ParamSet& p, const PipelineConfig& cfg) {
  return at_precision(p, cfg, [&](const IPipeline& pl, int d) {
    detail::Core<Interval> k = pl.compute(cfg);
    CoefficientReport r;
    r.params = p;
    r.config = cfg;
    r.digits = d;
    r.K_t1 = k.K;
    r.R_t1 = k.R;
    r.h0 = up(k.h0, d);
    r.h3 = up(k.h3, d);
    r.h5 = up(k.h5, d);
    r.q0 = up(k.q0, d);
    r.alpha = up(k.alpha, d);
    r.A4 = up(k.A4, d);
    r.B4 = up(k.B4, d);
    r.A5 = up(k.A5, d);
    r.B5 = up(k.B5, d);
    r.C0 = up(k.C0, d);
    r.D3 = up(k.D3, d);
    r.D4 = up(k.D4, d);
    r.D3_term = up(k.D3t, d);
    r.D4_term = up(k.D4t, d);
    r.C1 = up(k.C1, d);
    r.C2 = up(k.C2, d);
    r.E1 = up(k.E1, d);
    r.E2 = up(k.E2, d);
    r.E3 = up(k.E3, d);
    r.C4_or_C5 = up(k.C45, d);
    for (const auto& [name, m] : k.mu) r.mu.emplace(name, up(m, d));
    r.breakdown = {up(k.S1, d), up(k.S2, d), up(k.S3, d), up(k.RS, d)};
    r.A_total = r.recompute_total();
    return r;
  });
}

double objective_upper(const ParamValues& p, const PipelineConfig& cfg) {
  const detail::Params<Interval> v = to_params(p);
  const Ops o(cfg.digits);
  detail::Core<Interval> k = IPipeline{o, v}.compute(cfg);
  return detail::assemble_total(k.S1, k.S2, k.S3, k.RS).upper_double();
}

double estimate_A(const FastParams& p, const PipelineConfig& cfg) {
  using L = long double;
  const detail::Params<L> v{p.log_t0,
                            p.log_t1 ? std::optional<L>(*p.log_t1) : std::nullopt,
                            p.h1,
                            p.h2,
                            p.eta1,
                            p.eta2,
                            p.theta1,
                            p.theta2,
                            p.theta3};
  const detail::FastOps o;
  detail::Core<L> k = detail::Pipeline<detail::FastOps>{o, v}.compute(cfg);
  const L a = detail::assemble_total(k.S1, k.S2, k.S3, k.RS);
  if (!std::isfinite(a) || a <= 0) throw DomainError("non-finite estimate");
  return static_cast<double>(a);
}

}  // namespace subweyl
