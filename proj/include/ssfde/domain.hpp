#pragma once

// Parameter types and similarity algebra for radial profiles of the fast
// diffusion equation u_t = Δ(u^m/m) with n >= 3 and 0 < m < (n-2)/n.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ssfde {

enum class ErrorCode {
  DimensionTooSmall,
  ExponentOutOfRange,
  NonFinite,
  InvalidBlowUpSpec,
  GenericModeHasNoCoupling,
  TimeOutOfDomain,
  OriginEvaluation,
  InvalidTolerance,
  ModeNotApplicable,
  NonPositiveProfile,
  NonPositiveF,
  ToleranceInvalid,
  RangeNotCovered,
  WindowTooSparse,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Dimension n, diffusion exponent m and similarity coefficients of the
/// profile equation Δ(f^m/m) + αf + β x·∇f = 0.
struct ProblemParams {
  int n = 3;
  double m = 0.2;
  double alpha = 0.0;
  double beta = 0.0;
};

enum class SimilarityMode { Forward, Backward, Eternal, Generic };

std::string_view to_string(SimilarityMode mode);
SimilarityMode parse_mode(std::string_view text);

/// Prescribed singular behaviour f(r) ~ eta * r^-gamma as r -> 0.
struct BlowUpSpec {
  double gamma = 0.0;
  double eta = 0.0;

  /// Throws InvalidBlowUpSpec unless gamma > 0 and eta > 0 (both finite).
  static BlowUpSpec make(double gamma, double eta);
};

struct DerivedConstants {
  double p = 0.0;           // 2/(1-m)
  double c_star = 0.0;      // 2(n-2-nm)/(1-m)
  double gamma_crit = 0.0;  // (n-2)/m
  double rhs_110 = 0.0;     // 2(n-2-nm)/(1-m)^2
};

/// Throws Error unless n >= 3, 0 < m < (n-2)/n strictly, and all reals are
/// finite.
void validate(const ProblemParams& params);
void validate(const BlowUpSpec& spec);

DerivedConstants derived_constants(const ProblemParams& params);

/// The α tied to β by the forward, backward or eternal similarity ansatz.
double mode_alpha(SimilarityMode mode, double beta, double m);

/// |a - b| <= tol * max(1, |a|, |b|).
bool approx_equal(double a, double b, double tol);

using RadialFunction = std::function<double(double)>;

/// Builds the space-time value of a self-similar solution from its radial
/// profile:
///   Forward   U(x,t) = t^-α f(t^-β |x|),           t > 0
///   Backward  V(x,t) = (T-t)^α f((T-t)^β |x|),      t < T
///   Eternal   W(x,t) = e^-αt f(e^-βt |x|),           any t
/// `extinction_time` is only read in Backward mode.
double reconstruct(SimilarityMode mode, const ProblemParams& params,
                   const RadialFunction& profile, double radius, double t,
                   double extinction_time = 0.0);

double reconstruct(SimilarityMode mode, const ProblemParams& params,
                   const RadialFunction& profile, std::span<const double> x,
                   double t, double extinction_time = 0.0);

}  // namespace ssfde
