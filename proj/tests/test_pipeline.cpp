#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "subweyl/errors.hpp"
#include "subweyl/pipeline.hpp"

using namespace subweyl;
using rigor::Interval;
using rigor::UpperScalar;

namespace {

Interval dec(const char* s, int digits = 60) { return Interval::from_decimal(s, digits); }

bool close_to(const UpperScalar& x, const char* ref, const char* rel) {
  Interval r = dec(ref, 200);
  Interval tol = r * dec(rel, 200);
  Interval v = x.as_interval();
  return rigor::less(v - r, tol) && rigor::less(r - v, tol);
}

ParamSet finite_row() { return {"100", "110", "1.05", "1.01", "1.5", "0.8", "1.2", "20", "1e-4"}; }

std::string admissibility_failure(const ParamSet& p, const PipelineConfig& cfg = {}) {
  try {
    assemble(p, cfg);
  } catch (const AdmissibilityError& e) {
    return e.predicate();
  }
  return "";
}

FastParams fast(const ParamSet& p) {
  FastParams f;
  f.log_t0 = std::stod(p.log_t0);
  if (!p.infinite()) f.log_t1 = std::stod(p.log_t1);
  f.h1 = std::stod(p.h1);
  f.h2 = std::stod(p.h2);
  f.eta1 = std::stod(p.eta1);
  f.eta2 = std::stod(p.eta2);
  f.theta1 = std::stod(p.theta1);
  f.theta2 = std::stod(p.theta2);
  f.theta3 = std::stod(p.theta3);
  return f;
}

}  // namespace

TEST_CASE("published tail row coefficients") {
  const CoefficientReport r = assemble(published_tail_row());
  CHECK(!r.K_t1);
  CHECK(close_to(r.C0, "1.006155057632768648202e-05", "1e-20"));
  CHECK(close_to(r.A4, "2.3639768860289370443", "1e-19"));
  CHECK(close_to(r.B4, "1.9875544133435869137", "1e-19"));
  CHECK(close_to(r.A5, "2.5775515935919171121", "1e-19"));
  CHECK(close_to(r.B5, "1.50363202466873035", "1e-17"));
  CHECK(close_to(r.D3, "159.75667071193841181", "1e-19"));
  CHECK(close_to(r.D4, "13059.889297321908291", "1e-19"));
  CHECK(close_to(r.C1, "0.023257555392775134604", "1e-19"));
  CHECK(close_to(r.C2, "0.01308550704826546344", "1e-19"));
  CHECK(close_to(r.E1, "0.57571652838389899837", "1e-19"));
  CHECK(close_to(r.E2, "0.018125241016385791483", "1e-19"));
  CHECK(close_to(r.E3, "0.33320064848665844399", "1e-19"));
  CHECK(close_to(r.C4_or_C5, "31.780376167165649454", "1e-19"));
  CHECK(close_to(r.breakdown.S2, "4.1624416720378250708", "1e-19"));
  CHECK(close_to(r.A_total, "67.723214129470276635", "1e-19"));
  CHECK(r.A_total.to_string(6) == "67.7233");
}

TEST_CASE("conventions on the tail row") {
  PipelineConfig s;
  s.h3 = H3Convention::Statement;
  CHECK(close_to(assemble(published_tail_row(), s).A_total, "67.729351917653568222", "1e-19"));
  PipelineConfig t;
  t.h0 = H0Convention::Theta2;
  CHECK(close_to(assemble(published_tail_row(), t).A_total, "67.723214129470276635", "1e-19"));
}

TEST_CASE("finite interval row") {
  const CoefficientReport r = assemble(finite_row());
  REQUIRE(r.K_t1);
  CHECK(*r.K_t1 == 119);
  CHECK(*r.R_t1 == 2139);
  CHECK(close_to(r.C4_or_C5, "10.905112342778059232", "1e-19"));
  CHECK(close_to(r.A_total, "72.177115871081517991", "1e-19"));
  CHECK(r.mu.count("mu1(5/82)") == 1);
  CHECK(r.mu.count("mu2(17/328)") == 1);

  PipelineConfig d;
  d.mu2 = Mu2Form::Displayed;
  const CoefficientReport rd = assemble(finite_row(), d);
  CHECK(close_to(rd.A_total, "71.480025508885920889", "1e-19"));
  CHECK(rd.A_total.value() < r.A_total.value());

  PipelineConfig t;
  t.h0 = H0Convention::Theta2;
  CHECK(close_to(assemble(finite_row(), t).A_total, "72.177115871081517296", "1e-19"));
}

TEST_CASE("K counts blocks up to t1") {
  const ParamSet p = finite_row();
  const double K = std::ceil((3.0 / 34 * 110 - std::log(20 * std::sqrt(2 * M_PI))) / std::log(1.05));
  CHECK(*assemble(p).K_t1 == static_cast<long>(K));
}

TEST_CASE("infinite row at the same start") {
  ParamSet p = finite_row();
  p.log_t1 = "inf";
  const CoefficientReport r = assemble(p);
  CHECK(close_to(r.C4_or_C5, "38.005911009702009801", "1e-19"));
  CHECK(close_to(r.A_total, "126.64567395312369947", "1e-19"));
}

TEST_CASE("t1 = t0") {
  ParamSet p = finite_row();
  p.log_t1 = p.log_t0;
  const CoefficientReport f = assemble(p);
  CHECK(*f.K_t1 == 101);
  CHECK(*f.R_t1 == 2056);
  CHECK(close_to(f.C4_or_C5, "9.3368897781861378", "1e-16"));
  CHECK(close_to(f.A_total, "68.988885506277537204", "1e-19"));
  p.log_t1 = "inf";
  CHECK(f.C4_or_C5.value() <= assemble(p).C4_or_C5.value());
}

TEST_CASE("mu1 below mu3") {
  ParamSet p = finite_row();
  const CoefficientReport f = assemble(p);
  p.log_t1 = "inf";
  const CoefficientReport i = assemble(p);
  CHECK(f.mu.at("mu1(5/82)").value() <= i.mu.at("mu3(5/82)").value());
  CHECK(f.mu.at("mu1(87/164)").value() <= i.mu.at("mu3(87/164)").value());
}

TEST_CASE("C0") {
  ParamSet p = published_tail_row();
  const UpperScalar c = coeff_S1(p);
  CHECK(close_to(c, "1.006155057632768648202e-05", "1e-20"));
  p.theta3 = "1.012348e-10";
  CHECK(close_to(coeff_S1(p), "2.012310115265537296404e-05", "1e-15"));
  // C0 -> 2 sqrt(theta3) as t0 grows.
  p.theta3 = "0.25";
  p.log_t0 = "875";
  CHECK(close_to(coeff_S1(p), "1", "1e-40"));
}

TEST_CASE("D3 and D4") {
  // D3 only blows up once h2 - 1 is well below (h2/theta2) t0^(-27/82), so
  // use a small t0.
  ParamSet p{"6", "inf", "1.05", "1.01", "1.5", "0.8", "1.2", "1", "1e-4"};
  double prev3 = 0, prev4 = 0;
  for (const char* h2 : {"1.01", "1.001", "1.0001", "1.00001", "1.000001", "1.0000001"}) {
    p.h2 = h2;
    auto [d3, d4] = coeff_S2(p);
    CHECK(d3.to_double() > prev3);
    CHECK(d4.to_double() > prev4);
    prev3 = d3.to_double();
    prev4 = d4.to_double();
  }
  CHECK(prev3 > 1e5);
  CHECK(prev4 > 1e5);

  ParamSet z = finite_row();
  z.log_t1 = z.log_t0;
  z.theta3 = "1e5";
  const CoefficientReport r = assemble(z);
  CHECK(*r.R_t1 == 0);
  CHECK(r.D3.to_double() == 0);
  CHECK(r.D4.to_double() == 0);
  CHECK(close_to(r.A_total, "1283.5848436237255935", "1e-19"));
}

TEST_CASE("E3 over alpha is constant") {
  for (const ParamSet& p : {published_tail_row(), finite_row()}) {
    const CoefficientReport r = assemble(p);
    CHECK(r.E3.to_double() / r.alpha.to_double() == doctest::Approx(2.665178793395155687745662).epsilon(1e-14));
  }
}

TEST_CASE("S3 block matches the report") {
  const ParamSet p = published_tail_row();
  const CoefficientReport r = assemble(p);
  const BlockCoefficients b = coeff_S3_block(p, r.h0.as_interval());
  CHECK(b.C1.to_double() == doctest::Approx(r.C1.to_double()).epsilon(1e-15));
  CHECK(b.E3.to_double() == doctest::Approx(r.E3.to_double()).epsilon(1e-15));
  CHECK_THROWS_AS(coeff_S3_block(p, dec("2.5")), AdmissibilityError);
  CHECK(coeff_S3(p).to_double() == doctest::Approx(r.C4_or_C5.to_double()).epsilon(1e-15));
}

TEST_CASE("breakdown consistency") {
  for (const ParamSet& p : {published_tail_row(), finite_row()}) {
    const CoefficientReport r = assemble(p);
    CHECK(r.recompute_total().value() == r.A_total.value());
    CHECK(r.A_total.value() >= r.breakdown.S1.value());
    CHECK(r.A_total.to_double() >= 2 * r.C0.to_double());
    const double sum = r.breakdown.S1.to_double() + r.breakdown.S2.to_double() + r.breakdown.S3.to_double() +
                       r.breakdown.RS.to_double();
    CHECK(r.A_total.to_double() == doctest::Approx(sum).epsilon(1e-14));
    CHECK(r.breakdown.S3.to_double() == doctest::Approx(2 * r.C4_or_C5.to_double()).epsilon(1e-15));
  }
}

TEST_CASE("more precision never loosens the bound") {
  for (const ParamSet& p : {published_tail_row(), finite_row()}) {
    PipelineConfig lo, hi;
    lo.digits = 30;
    hi.digits = 120;
    CHECK(assemble(p, hi).A_total.value() <= assemble(p, lo).A_total.value());
  }
}

TEST_CASE("nested parameter intervals give nested bounds") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> jitter(-0.02, 0.02);
  const PipelineConfig cfg;
  for (int i = 0; i < 20; ++i) {
    const bool tail = i % 2 == 0;
    const ParamSet base = tail ? published_tail_row() : finite_row();
    ParamValues v = ParamValues::from(base, cfg.digits);
    auto scale = [&](Interval& x) { x = x * Interval::from_double(1 + jitter(rng), cfg.digits); };
    scale(v.eta1);
    scale(v.eta2);
    scale(v.theta1);
    scale(v.theta3);
    ParamValues wide = v;
    const Interval eps = Interval::from_double(1e-9, cfg.digits);
    for (Interval* x : {&wide.eta1, &wide.eta2, &wide.theta1, &wide.theta3})
      *x = rigor::hull(*x * (1 - eps), *x * (1 + eps));
    CHECK(objective_upper(v, cfg) <= objective_upper(wide, cfg));
  }
}

TEST_CASE("fast estimate agrees with the certified value") {
  for (const ParamSet& p : {published_tail_row(), finite_row()}) {
    const double a = assemble(p).A_total.to_double();
    CHECK(estimate_A(fast(p), {}) == doctest::Approx(a).epsilon(1e-12));
  }
  FastParams bad = fast(published_tail_row());
  bad.h1 = 0.9;
  CHECK_THROWS_AS(estimate_A(bad, {}), AdmissibilityError);
}

TEST_CASE("admissibility predicates") {
  ParamSet p = published_tail_row();
  CHECK(!first_violation(p));

  ParamSet q = p;
  q.log_t0 = "5";
  CHECK(admissibility_failure(q) == "t0 >= 200");
  q = finite_row();
  q.log_t1 = "99";
  CHECK(admissibility_failure(q) == "t1 >= t0");
  q = p;
  q.h1 = "1";
  CHECK(admissibility_failure(q) == "h1 > 1");
  q = p;
  q.h2 = "0.99";
  CHECK(admissibility_failure(q) == "h2 > 1");
  q = p;
  q.eta1 = "0";
  CHECK(admissibility_failure(q) == "eta1 > 0");
  q = p;
  q.theta3 = "-1e-3";
  CHECK(admissibility_failure(q) == "theta3 > 0");
  q = p;
  q.theta2 = "1e-100";
  CHECK(admissibility_failure(q) == "q0 >= 2");
  q = p;
  q.h1 = "2.5";
  CHECK(admissibility_failure(q) == "h0 in (1, 2]");

  q = finite_row();
  q.theta1 = "0.01";
  q.theta2 = "100";
  CHECK(admissibility_failure(q) == "theta1 * theta2 >= h1");
  PipelineConfig t;
  t.h0 = H0Convention::Theta2;
  CHECK(admissibility_failure(q, t) != "theta1 * theta2 >= h1");
}

TEST_CASE("parsing") {
  ParamSet p = published_tail_row();
  p.h1 = "1.0x";
  CHECK_THROWS_AS(p.validate_syntax(), ParseError);
  CHECK_THROWS_AS(assemble(p), ParseError);
  CHECK(parse_h3_convention("statement") == H3Convention::Statement);
  CHECK(parse_h0_convention("theta2") == H0Convention::Theta2);
  CHECK_THROWS_AS(parse_h3_convention("other"), ParseError);
}

TEST_CASE("normalisation exponents") { CHECK(normalisation_exponents_ok()); }
