#pragma once

// Exact singular solutions f(r) = K r^-p, p = 2/(1-m). The singular
// Barenblatt profile is the member K = C*^(1/(1-m)) with backward coupling.

#include "ssfde/domain.hpp"

namespace ssfde {

struct PowerLawProfile {
  double k = 1.0;
  double p = 2.5;

  static PowerLawProfile for_params(const ProblemParams& params, double k);

  double value(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;
  /// r f'(r) / f(r); identically -p.
  double q(double /*r*/) const { return -p; }
  /// f_s(r) = s^p f(s r). Maps solutions to solutions with the same (α, β).
  PowerLawProfile scaled(double s) const;

  RadialFunction as_function() const;
};

/// α for which K r^-p solves the profile equation with the given β:
/// α = β p + (C*/(1-m)) K^(m-1).
double power_law_alpha(double k, double beta, const ProblemParams& params);

/// lim r^p B(r) = C*^(1/(1-m)) for the singular Barenblatt profile.
double barenblatt_eta(const ProblemParams& params);

PowerLawProfile barenblatt_profile(const ProblemParams& params);

/// Left side of (f^m/m)'' + ((n-1)/r)(f^m/m)' + αf + β r f' at r.
/// The power-law overload uses closed-form derivatives; the generic one uses
/// central differences with step h = r * 1e-5.
double residual(const PowerLawProfile& profile, const ProblemParams& params, double r);
double residual(const RadialFunction& profile, const ProblemParams& params, double r);

/// |residual| divided by the sum of the magnitudes of the four terms.
double relative_residual(const PowerLawProfile& profile,
                         const ProblemParams& params, double r);
double relative_residual(const RadialFunction& profile,
                         const ProblemParams& params, double r);

}  // namespace ssfde
