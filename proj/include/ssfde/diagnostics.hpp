#pragma once

// Blow-up rate estimation and probes on sampled profiles.

#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ssfde/ode.hpp"

namespace ssfde {

struct RateEstimate {
  double gamma_hat = 0.0;
  double eta_hat = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double stderr_slope = 0.0;
  std::size_t samples = 0;
};

/// Least-squares fit of log f against log r over the samples in
/// [r_lo, r_hi] (clipped to the sampled range). Needs >= 8 samples.
RateEstimate estimate_rate(const Profile& profile, double r_lo, double r_hi);

/// `count` sample radii with |q + gamma| <= tol, the smallest qualifying
/// radii returned in decreasing order; nullopt if fewer qualify.
std::optional<std::vector<double>> lemma21_sequence(const Profile& profile, double gamma,
                                                    double tol, std::size_t count);

/// Largest contiguous sampled range on which eta/2 r^-gamma <= f <= 2 eta r^-gamma.
std::optional<std::pair<double, double>> decay_window(const Profile& profile,
                                                      const BlowUpSpec& spec);

struct DecadeDrift {
  double r_hi = 0.0;
  double r_lo = 0.0;
  double max_q_defect = 0.0;       // max |q + gamma|
  double max_log_w_defect = 0.0;   // max |log(r^gamma f / eta)|
};

struct DriftReport {
  ProblemParams params;
  BlowUpSpec spec;
  double r0 = 0.0;
  double decades = 0.0;
  Termination cause = Termination::Done;
  std::vector<DecadeDrift> per_decade;  // ordered from r0 inward
};

/// Integrates inward from the leading-order start at r0 over `decades`
/// decades and records how far the solution wanders from the prescribed
/// rate. Exploratory only; a growing drift is not a proof of anything.
DriftReport prescription_drift(const ProblemParams& params, const BlowUpSpec& spec,
                               double r0, double decades,
                               const IntegratorOptions& opts = {});

nlohmann::json to_json(const RateEstimate& estimate);
nlohmann::json to_json(const DriftReport& report);

}  // namespace ssfde
