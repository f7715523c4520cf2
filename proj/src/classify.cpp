#include "ssfde/classify.hpp"

#include <algorithm>
#include <cmath>

#include "ssfde/exactsol.hpp"

namespace ssfde {

std::string_view to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Excluded: return "Excluded";
    case VerdictStatus::NecessaryConditionsMet: return "NecessaryConditionsMet";
    case VerdictStatus::ExistenceKnown: return "ExistenceKnown";
    case VerdictStatus::ExistenceKnownUnique: return "ExistenceKnownUnique";
  }
  return "Excluded";
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::GammaBelowCritical: return "RULE_GAMMA_BELOW_CRITICAL";
    case Rule::GammaNotAlphaOverBeta: return "RULE_GAMMA_NOT_ALPHA_OVER_BETA";
    case Rule::CaseIImpossible: return "RULE_CASE_I_IMPOSSIBLE";
    case Rule::EtaRelationFailed: return "RULE_ETA_RELATION_FAILED";
    case Rule::ForwardSignViolation: return "RULE_FORWARD_SIGNS";
    case Rule::BackwardSignViolation: return "RULE_BACKWARD_SIGNS";
    case Rule::StationaryRateMismatch: return "RULE_STATIONARY_RATE_MISMATCH";
    case Rule::GammaEqualsAlphaOverBeta: return "RULE_GAMMA_EQUALS_ALPHA_OVER_BETA";
    case Rule::EtaRelationHolds: return "RULE_ETA_RELATION_HOLDS";
    case Rule::HuiKimRange: return "RULE_HUI_KIM_RANGE";
    case Rule::BackwardExistence: return "RULE_BACKWARD_EXISTENCE";
    case Rule::BackwardUniqueness: return "RULE_BACKWARD_UNIQUENESS";
    case Rule::BarenblattWitness: return "RULE_BARENBLATT_WITNESS";
    case Rule::StationaryWitness: return "RULE_STATIONARY_WITNESS";
  }
  return "RULE_UNKNOWN";
}

std::string_view to_string(EtaRelationForm form) {
  return form == EtaRelationForm::Corrected ? "corrected" : "paper";
}

EtaRelationForm parse_eta_form(std::string_view text) {
  if (text == "corrected") return EtaRelationForm::Corrected;
  if (text == "paper") return EtaRelationForm::PaperLiteral;
  throw Error(ErrorCode::InvalidArgument,
              "unknown eta relation form '" + std::string(text) + "'");
}

std::string_view to_string(KnownExistence k) {
  switch (k) {
    case KnownExistence::None: return "None";
    case KnownExistence::HuiKimForwardUnique: return "HuiKimForwardUnique";
    case KnownExistence::BackwardExists: return "BackwardExists";
    case KnownExistence::BackwardExistsUnique: return "BackwardExistsUnique";
  }
  return "None";
}

bool Verdict::has_reason(Rule rule) const {
  return std::find(reasons.begin(), reasons.end(), rule) != reasons.end();
}

namespace {

// gamma = α/β, compared relative to gamma only.
bool matches_ratio(double gamma, double ratio, double tol) {
  return std::abs(gamma - ratio) <= tol * std::max(1.0, std::abs(gamma));
}

bool at_least(double value, double threshold, double tol) {
  return value >= threshold || approx_equal(value, threshold, tol);
}

bool strictly_between(double value, double lo, double hi, double tol) {
  return value > lo && value < hi && !approx_equal(value, lo, tol) &&
         !approx_equal(value, hi, tol);
}

}  // namespace

SimilarityMode detect_mode(const ProblemParams& params, double tol) {
  for (auto mode : {SimilarityMode::Forward, SimilarityMode::Backward,
                    SimilarityMode::Eternal}) {
    if (approx_equal(params.alpha, mode_alpha(mode, params.beta, params.m), tol)) {
      return mode;
    }
  }
  return SimilarityMode::Generic;
}

std::optional<double> critical_eta(const ProblemParams& params,
                                   EtaRelationForm form) {
  const auto c = derived_constants(params);
  const double coeff = params.alpha - params.beta * c.p;
  if (!(coeff > 0.0)) return std::nullopt;
  const double ratio = c.rhs_110 / coeff;
  if (form == EtaRelationForm::PaperLiteral) return ratio;
  return std::pow(ratio, 1.0 / (1.0 - params.m));
}

KnownExistence known_existence(const ProblemParams& params,
                               const BlowUpSpec& spec, double tol) {
  const auto c = derived_constants(params);
  validate(spec);
  const double a = params.alpha;
  const double b = params.beta;
  if (b == 0.0) return KnownExistence::None;
  const double ratio = a / b;
  if (!matches_ratio(spec.gamma, ratio, tol)) return KnownExistence::None;

  switch (detect_mode(params, tol)) {
    case SimilarityMode::Forward:
      if (a < 0.0 && b < 0.0 && strictly_between(ratio, c.p, c.gamma_crit, tol)) {
        return KnownExistence::HuiKimForwardUnique;
      }
      return KnownExistence::None;
    case SimilarityMode::Backward: {
      const double defect = params.n - 2.0 - params.n * params.m;
      if (at_least(b, 1.0 / defect, tol)) return KnownExistence::BackwardExistsUnique;
      if (at_least(b, params.m / defect, tol)) return KnownExistence::BackwardExists;
      return KnownExistence::None;
    }
    default:
      return KnownExistence::None;
  }
}

SignCheck sign_check(const ProblemParams& params, SimilarityMode mode) {
  switch (mode) {
    case SimilarityMode::Forward:
      return params.beta >= 0.0 ? SignCheck::SignsForceNonexistence
                                : SignCheck::ConsistentWithExistence;
    case SimilarityMode::Backward:
      return params.beta <= 0.0 ? SignCheck::SignsForceNonexistence
                                : SignCheck::ConsistentWithExistence;
    default:
      throw Error(ErrorCode::ModeNotApplicable,
                  "sign conditions only apply to forward and backward coupling");
  }
}

Verdict classify(const ProblemParams& params, const BlowUpSpec& spec,
                 EtaRelationForm form, double tol) {
  const auto c = derived_constants(params);
  validate(spec);
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw Error(ErrorCode::InvalidTolerance, "tolerance must be finite and > 0");
  }
  const double a = params.alpha;
  const double b = params.beta;
  const double gamma = spec.gamma;
  Verdict v;

  if (approx_equal(gamma, c.p, tol)) {
    const double eta_term = form == EtaRelationForm::Corrected
                                ? std::pow(spec.eta, 1.0 - params.m)
                                : spec.eta;
    const double lhs = (a - b * c.p) * eta_term;
    v.relation_gap = lhs - c.rhs_110;
    if (!approx_equal(lhs, c.rhs_110, tol)) {
      v.status = VerdictStatus::Excluded;
      v.reasons.push_back(Rule::EtaRelationFailed);
      return v;
    }
    v.status = VerdictStatus::NecessaryConditionsMet;
    v.reasons.push_back(Rule::EtaRelationHolds);
    if (b > 0.0 && detect_mode(params, tol) == SimilarityMode::Backward &&
        approx_equal(spec.eta, barenblatt_eta(params), tol)) {
      v.status = VerdictStatus::ExistenceKnown;
      v.reasons.push_back(Rule::BarenblattWitness);
    }
    return v;
  }

  // α = β = 0 lies outside both hypotheses (i) and (ii): f^m is then
  // harmonic and the only singular radial rate is (n-2)/m.
  if (a == 0.0 && b == 0.0) {
    if (approx_equal(gamma, c.gamma_crit, tol)) {
      v.status = VerdictStatus::ExistenceKnown;
      v.reasons.push_back(Rule::StationaryWitness);
      return v;
    }
    if (gamma < c.p) v.reasons.push_back(Rule::GammaBelowCritical);
    v.reasons.push_back(Rule::StationaryRateMismatch);
    v.status = VerdictStatus::Excluded;
    return v;
  }

  if (gamma < c.p) v.reasons.push_back(Rule::GammaBelowCritical);
  if (b == 0.0) {
    v.reasons.push_back(Rule::CaseIImpossible);
  } else if (!matches_ratio(gamma, a / b, tol)) {
    v.reasons.push_back(Rule::GammaNotAlphaOverBeta);
  }
  const auto mode = detect_mode(params, tol);
  if ((mode == SimilarityMode::Forward || mode == SimilarityMode::Backward) &&
      sign_check(params, mode) == SignCheck::SignsForceNonexistence) {
    v.reasons.push_back(mode == SimilarityMode::Forward ? Rule::ForwardSignViolation
                                                        : Rule::BackwardSignViolation);
  }
  if (!v.reasons.empty()) {
    v.status = VerdictStatus::Excluded;
    return v;
  }

  v.status = VerdictStatus::NecessaryConditionsMet;
  v.reasons.push_back(Rule::GammaEqualsAlphaOverBeta);
  switch (known_existence(params, spec, tol)) {
    case KnownExistence::HuiKimForwardUnique:
      v.status = VerdictStatus::ExistenceKnownUnique;
      v.reasons.push_back(Rule::HuiKimRange);
      break;
    case KnownExistence::BackwardExistsUnique:
      v.status = VerdictStatus::ExistenceKnownUnique;
      v.reasons.push_back(Rule::BackwardExistence);
      v.reasons.push_back(Rule::BackwardUniqueness);
      break;
    case KnownExistence::BackwardExists:
      v.status = VerdictStatus::ExistenceKnown;
      v.reasons.push_back(Rule::BackwardExistence);
      break;
    case KnownExistence::None:
      break;
  }
  return v;
}

}  // namespace ssfde
