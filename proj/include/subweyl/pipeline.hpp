#pragma once

// Explicit coefficients of the three-way split of the Riemann-Siegel main sum
// and the assembled constant A(t0, t1) with |zeta(1/2+it)| <= A t^(27/164)
// on [t0, t1].

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subweyl/rigor.hpp"

namespace subweyl {

// h-argument of A_4 in the middle-range coefficient D3.
enum class H3Convention { Proof, Statement };
// Denominator of h0 = h1 / (1 - x t0^(-7/17)).
enum class H0Convention { Theta1, Theta2 };
// Finite-interval mu2 factor: the sound derivation or the displayed formula,
// which is smaller by (2 pi h1)^a.
enum class Mu2Form { Sound, Displayed };

const char* to_string(H3Convention c);
const char* to_string(H0Convention c);
const char* to_string(Mu2Form f);
H3Convention parse_h3_convention(const std::string& s);
H0Convention parse_h0_convention(const std::string& s);

struct PipelineConfig {
  int digits = rigor::kDefaultDigits;
  H3Convention h3 = H3Convention::Proof;
  H0Convention h0 = H0Convention::Theta1;
  Mu2Form mu2 = Mu2Form::Sound;
};

// Parameters are kept as the decimal strings they were written with, so a
// row certifies exactly what a file says. log_t1 == "inf" for [t0, inf).
struct ParamSet {
  std::string log_t0;
  std::string log_t1 = "inf";
  std::string h1, h2, eta1, eta2, theta1, theta2, theta3;

  bool infinite() const { return log_t1 == "inf"; }
  // Throws ParseError when any field is not a decimal literal.
  void validate_syntax() const;

  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

// The published tail row at t0 = exp(875).
ParamSet published_tail_row();

// Enclosures of a ParamSet's fields at a working precision.
struct ParamValues {
  rigor::Interval L0;
  std::optional<rigor::Interval> L1;
  rigor::Interval h1, h2, eta1, eta2, theta1, theta2, theta3;

  static ParamValues from(const ParamSet& p, int digits);
};

// Name of the first admissibility predicate `p` violates, if any.
std::optional<std::string> first_violation(const ParamValues& p, const PipelineConfig& cfg);
std::optional<std::string> first_violation(const ParamSet& p, const PipelineConfig& cfg = {});
void require_admissible(const ParamSet& p, const PipelineConfig& cfg = {});

struct BlockCoefficients {
  rigor::UpperScalar C1, C2, E1, E2, E3;
};

rigor::UpperScalar coeff_S1(const ParamSet& p, const PipelineConfig& cfg = {});
std::pair<rigor::UpperScalar, rigor::UpperScalar> coeff_S2(const ParamSet& p, const PipelineConfig& cfg = {});
BlockCoefficients coeff_S3_block(const ParamSet& p, const rigor::Interval& h0, const PipelineConfig& cfg = {});
rigor::UpperScalar coeff_S3(const ParamSet& p, const PipelineConfig& cfg = {});

struct SubsumBreakdown {
  rigor::UpperScalar S1;  // 2 C0
  rigor::UpperScalar S2;  // 2 (D3 t0^(19/119-27/164) + D4 t0^(71/476-27/164))
  rigor::UpperScalar S3;  // 2 C4 or 2 C5
  rigor::UpperScalar RS;  // Riemann-Siegel error terms at t0
};

struct CoefficientReport {
  ParamSet params;
  PipelineConfig config;
  int digits = rigor::kDefaultDigits;  // precision actually used
  std::optional<long> K_t1;            // empty for t1 = inf
  std::optional<long> R_t1;
  rigor::UpperScalar h0, h3, h5, q0, alpha;
  rigor::UpperScalar A4, B4, A5, B5;
  rigor::UpperScalar C0, D3, D4, C1, C2, E1, E2, E3, C4_or_C5;
  rigor::UpperScalar D3_term, D4_term;  // D3, D4 times their t0 normalisation
  std::map<std::string, rigor::UpperScalar> mu;
  SubsumBreakdown breakdown;
  rigor::UpperScalar A_total;

  // Recomputes A_total from the stored breakdown with upward rounding.
  rigor::UpperScalar recompute_total() const;
};

// Full certification, escalating precision on PrecisionExhausted.
CoefficientReport assemble(const ParamSet& p, const PipelineConfig& cfg = {});

// Upper bound on A at cfg.digits as a double; no report is built. Throws
// AdmissibilityError like assemble.
double objective_upper(const ParamValues& p, const PipelineConfig& cfg);

// Plain long double parameters for search loops.
struct FastParams {
  double log_t0 = 0;
  std::optional<double> log_t1;
  double h1 = 0, h2 = 0, eta1 = 0, eta2 = 0, theta1 = 0, theta2 = 0, theta3 = 0;
};

// Estimate of A in long double arithmetic, about 18 significant digits. Not a
// certified bound; search loops rank candidates with it and certify the
// winner with assemble. Throws AdmissibilityError or DomainError.
double estimate_A(const FastParams& p, const PipelineConfig& cfg);

// Exponents that must sit below 27/164 for per-term normalisation at t0.
bool normalisation_exponents_ok();

}  // namespace subweyl
