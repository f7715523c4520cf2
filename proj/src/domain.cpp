#include "ssfde/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ssfde {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidBlowUpSpec: return "InvalidBlowUpSpec";
    case ErrorCode::GenericModeHasNoCoupling: return "GenericModeHasNoCoupling";
    case ErrorCode::TimeOutOfDomain: return "TimeOutOfDomain";
    case ErrorCode::OriginEvaluation: return "OriginEvaluation";
    case ErrorCode::InvalidTolerance: return "InvalidTolerance";
    case ErrorCode::ModeNotApplicable: return "ModeNotApplicable";
    case ErrorCode::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorCode::NonPositiveF: return "NonPositiveF";
    case ErrorCode::ToleranceInvalid: return "ToleranceInvalid";
    case ErrorCode::RangeNotCovered: return "RangeNotCovered";
    case ErrorCode::WindowTooSparse: return "WindowTooSparse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view to_string(SimilarityMode mode) {
  switch (mode) {
    case SimilarityMode::Forward: return "forward";
    case SimilarityMode::Backward: return "backward";
    case SimilarityMode::Eternal: return "eternal";
    case SimilarityMode::Generic: return "generic";
  }
  return "generic";
}

SimilarityMode parse_mode(std::string_view text) {
  if (text == "forward") return SimilarityMode::Forward;
  if (text == "backward") return SimilarityMode::Backward;
  if (text == "eternal") return SimilarityMode::Eternal;
  if (text == "generic") return SimilarityMode::Generic;
  throw Error(ErrorCode::InvalidArgument,
              "unknown similarity mode '" + std::string(text) + "'");
}

BlowUpSpec BlowUpSpec::make(double gamma, double eta) {
  BlowUpSpec spec{gamma, eta};
  validate(spec);
  return spec;
}

void validate(const ProblemParams& params) {
  if (params.n < 3) {
    throw Error(ErrorCode::DimensionTooSmall,
                "dimension n=" + std::to_string(params.n) + " violates n >= 3");
  }
  if (!std::isfinite(params.m) || !std::isfinite(params.alpha) ||
      !std::isfinite(params.beta)) {
    throw Error(ErrorCode::NonFinite, "m, alpha and beta must be finite");
  }
  const double upper = (params.n - 2.0) / params.n;
  if (!(params.m > 0.0) || !(params.m < upper)) {
    throw Error(ErrorCode::ExponentOutOfRange,
                "exponent m=" + std::to_string(params.m) +
                    " violates 0 < m < (n-2)/n = " + std::to_string(upper));
  }
}

void validate(const BlowUpSpec& spec) {
  if (!std::isfinite(spec.gamma) || !std::isfinite(spec.eta) ||
      !(spec.gamma > 0.0) || !(spec.eta > 0.0)) {
    throw Error(ErrorCode::InvalidBlowUpSpec,
                "blow-up spec requires finite gamma > 0 and eta > 0");
  }
}

DerivedConstants derived_constants(const ProblemParams& params) {
  validate(params);
  const double n = params.n;
  const double m = params.m;
  const double defect = n - 2.0 - n * m;
  DerivedConstants c;
  c.p = 2.0 / (1.0 - m);
  c.c_star = 2.0 * defect / (1.0 - m);
  c.gamma_crit = (n - 2.0) / m;
  c.rhs_110 = 2.0 * defect / ((1.0 - m) * (1.0 - m));
  return c;
}

double mode_alpha(SimilarityMode mode, double beta, double m) {
  switch (mode) {
    case SimilarityMode::Forward: return (2.0 * beta - 1.0) / (1.0 - m);
    case SimilarityMode::Backward: return (2.0 * beta + 1.0) / (1.0 - m);
    case SimilarityMode::Eternal: return 2.0 * beta / (1.0 - m);
    case SimilarityMode::Generic: break;
  }
  throw Error(ErrorCode::GenericModeHasNoCoupling,
              "generic mode does not couple alpha to beta");
}

bool approx_equal(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

double reconstruct(SimilarityMode mode, const ProblemParams& params,
                   const RadialFunction& profile, double radius, double t,
                   double extinction_time) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::OriginEvaluation,
                "self-similar solutions are singular at the origin");
  }
  const double a = params.alpha;
  const double b = params.beta;
  switch (mode) {
    case SimilarityMode::Forward:
      if (!(t > 0.0)) {
        throw Error(ErrorCode::TimeOutOfDomain, "forward solutions need t > 0");
      }
      return std::pow(t, -a) * profile(std::pow(t, -b) * radius);
    case SimilarityMode::Backward: {
      const double tau = extinction_time - t;
      if (!(tau > 0.0)) {
        throw Error(ErrorCode::TimeOutOfDomain, "backward solutions need t < T");
      }
      return std::pow(tau, a) * profile(std::pow(tau, b) * radius);
    }
    case SimilarityMode::Eternal:
      if (!std::isfinite(t)) {
        throw Error(ErrorCode::TimeOutOfDomain, "eternal solutions need finite t");
      }
      return std::exp(-a * t) * profile(std::exp(-b * t) * radius);
    case SimilarityMode::Generic: break;
  }
  throw Error(ErrorCode::GenericModeHasNoCoupling,
              "generic (alpha, beta) pairs have no space-time reconstruction");
}

double reconstruct(SimilarityMode mode, const ProblemParams& params,
                   const RadialFunction& profile, std::span<const double> x,
                   double t, double extinction_time) {
  const double r2 = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  return reconstruct(mode, params, profile, std::sqrt(r2), t, extinction_time);
}

}  // namespace ssfde
