#pragma once

// Radial profile equation as a smooth first-order system in s = log r.
//
// With q = r f'/f the equation Δ(f^m/m) + αf + β r f' = 0 becomes
//   df/ds = q f
//   dq/ds = -(n-2) q - m q^2 - (α + β q) r^2 f^(1-m)
// Pure power laws K r^-p are fixed points of the q-equation.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "ssfde/domain.hpp"

namespace ssfde {

struct State {
  double s = 0.0;  // log r
  double f = 1.0;
  double q = 0.0;

  double r() const;
  static State at_radius(double r, double f, double q);
};

struct StateDerivative {
  double df_ds = 0.0;
  double dq_ds = 0.0;
};

StateDerivative rhs(const State& state, const ProblemParams& params);

/// dq/ds written in terms of log f, which avoids forming f itself.
double dq_ds(double s, double log_f, double q, const ProblemParams& params);

enum class Termination { Done, Blowup, Extinction, StepSizeUnderflow };

std::string_view to_string(Termination cause);

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.1;        // in s
  int points_per_decade = 64;   // dense output density
  std::size_t max_steps = 5'000'000;
};

struct IntegrationStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  Termination cause = Termination::Done;
  IntegratorOptions options;
  double s_start = 0.0;
  double s_end = 0.0;
};

struct Sample {
  double r = 0.0;
  double f = 0.0;
  double q = 0.0;
};

/// Sampled radial solution, r strictly increasing and f > 0.
struct Profile {
  ProblemParams params;
  std::vector<Sample> samples;
  IntegrationStats meta;

  bool empty() const { return samples.empty(); }
  double r_min() const { return samples.front().r; }
  double r_max() const { return samples.back().r; }
  /// True when r lies in [r_min, r_max] up to a relative 1e-12 slack.
  bool covers(double r) const;
  /// Quintic Hermite interpolation in s of log f and q, with derivatives
  /// taken from the profile equation. Throws RangeNotCovered.
  Sample at(double r) const;
};

/// Adaptive Dormand–Prince 5(4) integration from `start` to `s_end` in either
/// direction. Samples land on a log-uniform grid anchored at the start
/// radius; the integration halts early on the 1e±300 guards.
Profile integrate(const ProblemParams& params, const State& start, double s_end,
                  const IntegratorOptions& opts = {});

/// Leading-order state f = eta r0^-gamma, q = -gamma.
State asymptotic_start(const BlowUpSpec& spec, double r0);

/// Samples given closed-form f and q on a log grid over [r_lo, r_hi].
Profile sample_profile(const ProblemParams& params, const RadialFunction& f,
                       const RadialFunction& q, double r_lo, double r_hi,
                       int points_per_decade = 64);

/// F(r) = exp(-β ∫_r^{ε/2} ρ f(ρ)^(1-m) dρ) over a sampled profile.
class IntegratingFactor {
 public:
  IntegratingFactor(const Profile& profile, double beta, double eps);

  double operator()(double r) const;
  /// log F(r), finite even where F itself would overflow.
  double log_at(double r) const;
  double anchor_radius() const { return anchor_r_; }

 private:
  double cumulative_at(double s) const;

  std::vector<double> s_;
  std::vector<double> cumulative_;  // ∫_{s_0}^{s_i} r^2 f^(1-m) ds
  std::vector<double> integrand_;
  std::vector<double> slope_;
  std::vector<double> curvature_;
  double beta_ = 0.0;
  double anchor_r_ = 0.0;
  double anchor_cumulative_ = 0.0;
};

IntegratingFactor integrating_factor(const Profile& profile, double beta, double eps);

/// Maximum over samples of |LHS - RHS| / max(1, |LHS|) for
///   r^(n-2) F(r) q(r) = (ε/2)^(n-2) q(ε/2)
///                     + ∫_r^{ε/2} (α ρ^(n-1) f^(1-m) + m ρ^(n-3) q^2) F(ρ) dρ
double integral_identity_residual(const Profile& profile, const ProblemParams& params,
                                  double eps);

/// Largest |Δlog f - ∫q ds| over adjacent samples, the integral taken with
/// quintic Hermite quadrature. Zero up to integration error for profiles
/// emitted by integrate().
double q_consistency_defect(const Profile& profile);

}  // namespace ssfde
