#include <cmath>
#include <sstream>

#include "ssfde/cli.hpp"
#include "ssfde/diagnostics.hpp"
#include "ssfde/exactsol.hpp"
#include "ssfde/ode.hpp"
#include "ssfde/profile_io.hpp"

namespace ssfde::cli {

namespace {

std::string context_of(int n, double m) {
  return "n=" + std::to_string(n) + " m=" + format_double(m);
}

CheckResult check(std::string name, std::string context, double value, double threshold) {
  return CheckResult{std::move(name), std::move(context), value <= threshold, value, threshold};
}

void run_family(int n, double m, const VerifyOptions& options, std::vector<CheckResult>& out) {
  const std::string ctx = context_of(n, m);

  double worst_residual = 0.0;
  for (double k : {0.1, 1.0, 32.0}) {
    for (double beta : {-2.0, 0.0, 1.0}) {
      ProblemParams params{n, m, 0.0, beta};
      params.alpha = power_law_alpha(k, beta, params);
      const auto profile = PowerLawProfile::for_params(params, k);
      for (int i = 0; i < 100; ++i) {
        const double r = std::pow(10.0, -4.0 + 8.0 * i / 99.0);
        worst_residual = std::max(worst_residual, relative_residual(profile, params, r));
      }
    }
  }
  out.push_back(check("power_law_residual", ctx, worst_residual, 1e-10));

  ProblemParams params{n, m, 0.0, 1.0};
  params.alpha = mode_alpha(SimilarityMode::Backward, 1.0, m);
  const double eta = barenblatt_eta(params);
  const double eta_critical = critical_eta(params, EtaRelationForm::Corrected).value_or(NAN);
  out.push_back(check("barenblatt_critical_eta", ctx,
                      std::abs(eta - eta_critical) / eta, 1e-12));

  const auto c = derived_constants(params);
  const auto exact = barenblatt_profile(params);
  auto profile = integrate(params, asymptotic_start(BlowUpSpec::make(c.p, eta), 1e-4), 0.0);
  double f_error = 0.0;
  double q_error = 0.0;
  for (const auto& s : profile.samples) {
    f_error = std::max(f_error, std::abs(s.f / exact.value(s.r) - 1.0));
    q_error = std::max(q_error, std::abs(s.q + c.p));
  }
  out.push_back(check("barenblatt_integration_f", ctx, f_error, 1e-6));
  out.push_back(check("barenblatt_integration_q", ctx, q_error, 1e-7));

  const auto rate = estimate_rate(profile, 1e-4, 1e-3);
  out.push_back(check("rate_estimator", ctx,
                      std::max(std::abs(rate.gamma_hat / c.p - 1.0),
                               std::abs(rate.eta_hat / eta - 1.0)),
                      1e-6));

  const bool lemma_ok = lemma21_sequence(profile, c.p, 1e-6, 5).has_value() &&
                        !lemma21_sequence(profile, 1.0, 1e-6, 5).has_value();
  out.push_back(check("lemma21_sequence", ctx, lemma_ok ? 0.0 : 1.0, 0.0));

  if (options.perturb_q) {
    for (auto& s : profile.samples) s.q += 1.0;
  }
  out.push_back(check("identity_residual", ctx,
                      integral_identity_residual(profile, params, 1.0), 1e-6));
}

}  // namespace

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  std::vector<CheckResult> results;
  const std::vector<int> dims = options.quick ? std::vector<int>{3} : std::vector<int>{3, 4, 5};
  const std::vector<double> exps = options.quick ? std::vector<double>{0.2}
                                                 : std::vector<double>{0.1, 0.2};
  for (int n : dims) {
    for (double m : exps) run_family(n, m, options, results);
  }

  // Closed-form identity check: K r^-p with β = 0, n = 3, m = 0.2 gives
  // LHS = RHS = -2.5 r.
  ProblemParams params{3, 0.2, 1.25, 0.0};
  const auto exact = PowerLawProfile::for_params(params, 1.0);
  auto profile = sample_profile(params, exact.as_function(), [](double) { return -2.5; },
                                1e-3, 1.0);
  if (options.perturb_q) {
    for (auto& s : profile.samples) s.q += 1.0;
  }
  results.push_back(check("identity_residual", "closed-form n=3 m=0.2 beta=0",
                          integral_identity_residual(profile, params, 1.0), 1e-8));
  return results;
}

}  // namespace ssfde::cli
