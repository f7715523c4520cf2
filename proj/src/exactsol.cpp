#include "ssfde/exactsol.hpp"

#include <array>
#include <cmath>

namespace ssfde {

namespace {

struct Terms {
  std::array<double, 4> parts{};

  double sum() const { return parts[0] + parts[1] + parts[2] + parts[3]; }
  double magnitude() const {
    return std::abs(parts[0]) + std::abs(parts[1]) + std::abs(parts[2]) +
           std::abs(parts[3]);
  }
};

// f, f', (f^m/m)', (f^m/m)'' at r.
Terms assemble(const ProblemParams& params, double r, double f, double df,
               double dg, double d2g) {
  return Terms{{d2g, (params.n - 1.0) / r * dg, params.alpha * f,
                params.beta * r * df}};
}

Terms power_law_terms(const PowerLawProfile& profile,
                      const ProblemParams& params, double r) {
  if (!(r > 0.0) || !(profile.k > 0.0)) {
    throw Error(ErrorCode::NonPositiveProfile, "power law needs r > 0 and K > 0");
  }
  const double m = params.m;
  const double f = profile.value(r);
  const double df = profile.derivative(r);
  const double d2f = profile.second_derivative(r);
  // (f^m/m)' = f^(m-1) f',  (f^m/m)'' = f^(m-1) f'' + (m-1) f^(m-2) f'^2
  const double fm1 = std::pow(f, m - 1.0);
  const double dg = fm1 * df;
  const double d2g = fm1 * d2f + (m - 1.0) * fm1 / f * df * df;
  return assemble(params, r, f, df, dg, d2g);
}

Terms finite_difference_terms(const RadialFunction& profile,
                              const ProblemParams& params, double r) {
  if (!(r > 0.0)) {
    throw Error(ErrorCode::NonPositiveProfile, "residual needs r > 0");
  }
  const double h = r * 1e-5;
  const double fl = profile(r - h);
  const double f0 = profile(r);
  const double fr = profile(r + h);
  if (!(fl > 0.0) || !(f0 > 0.0) || !(fr > 0.0)) {
    throw Error(ErrorCode::NonPositiveProfile, "profile must be positive near r");
  }
  const double m = params.m;
  const double gl = std::pow(fl, m) / m;
  const double g0 = std::pow(f0, m) / m;
  const double gr = std::pow(fr, m) / m;
  const double df = (fr - fl) / (2.0 * h);
  const double dg = (gr - gl) / (2.0 * h);
  const double d2g = (gr - 2.0 * g0 + gl) / (h * h);
  return assemble(params, r, f0, df, dg, d2g);
}

}  // namespace

PowerLawProfile PowerLawProfile::for_params(const ProblemParams& params, double k) {
  return PowerLawProfile{k, derived_constants(params).p};
}

double PowerLawProfile::value(double r) const { return k * std::pow(r, -p); }

double PowerLawProfile::derivative(double r) const {
  return -p * k * std::pow(r, -p - 1.0);
}

double PowerLawProfile::second_derivative(double r) const {
  return p * (p + 1.0) * k * std::pow(r, -p - 2.0);
}

PowerLawProfile PowerLawProfile::scaled(double s) const {
  // s^p * K (s r)^-p collapses to K r^-p; kept explicit for callers that
  // check the covariance numerically.
  return PowerLawProfile{std::pow(s, p) * k * std::pow(s, -p), p};
}

RadialFunction PowerLawProfile::as_function() const {
  return [k = k, p = p](double r) { return k * std::pow(r, -p); };
}

double power_law_alpha(double k, double beta, const ProblemParams& params) {
  const auto c = derived_constants(params);
  if (!(k > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "power-law coefficient K must be > 0");
  }
  return beta * c.p + c.rhs_110 * std::pow(k, params.m - 1.0);
}

double barenblatt_eta(const ProblemParams& params) {
  const auto c = derived_constants(params);
  return std::pow(c.c_star, 1.0 / (1.0 - params.m));
}

PowerLawProfile barenblatt_profile(const ProblemParams& params) {
  return PowerLawProfile::for_params(params, barenblatt_eta(params));
}

double residual(const PowerLawProfile& profile, const ProblemParams& params, double r) {
  return power_law_terms(profile, params, r).sum();
}

double residual(const RadialFunction& profile, const ProblemParams& params, double r) {
  return finite_difference_terms(profile, params, r).sum();
}

double relative_residual(const PowerLawProfile& profile,
                         const ProblemParams& params, double r) {
  const auto t = power_law_terms(profile, params, r);
  return std::abs(t.sum()) / t.magnitude();
}

double relative_residual(const RadialFunction& profile,
                         const ProblemParams& params, double r) {
  const auto t = finite_difference_terms(profile, params, r);
  return std::abs(t.sum()) / t.magnitude();
}

}  // namespace ssfde
