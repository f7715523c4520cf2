#include "ssfde/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ssfde/profile_io.hpp"

namespace ssfde {

RateEstimate estimate_rate(const Profile& profile, double r_lo, double r_hi) {
  if (profile.empty() || !(r_lo > 0.0) || !(r_hi >= r_lo)) {
    throw Error(ErrorCode::WindowTooSparse, "empty profile or window");
  }
  const double lo = std::max(r_lo, profile.r_min());
  const double hi = std::min(r_hi, profile.r_max());
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& s : profile.samples) {
    if (s.r >= lo * (1.0 - 1e-12) && s.r <= hi * (1.0 + 1e-12)) {
      xs.push_back(std::log(s.r));
      ys.push_back(std::log(s.f));
    }
  }
  const std::size_t count = xs.size();
  if (count < 8) {
    throw Error(ErrorCode::WindowTooSparse,
                "rate estimation needs >= 8 samples, window has " + std::to_string(count));
  }
  double x_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    x_mean += xs[i];
    y_mean += ys[i];
  }
  x_mean /= static_cast<double>(count);
  y_mean /= static_cast<double>(count);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
    sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double e = ys[i] - y_mean - slope * (xs[i] - x_mean);
    ssr += e * e;
  }

  RateEstimate est;
  est.gamma_hat = -slope;
  est.eta_hat = std::exp(y_mean + est.gamma_hat * x_mean);
  est.r_lo = std::exp(xs.front());
  est.r_hi = std::exp(xs.back());
  est.stderr_slope = std::sqrt(ssr / static_cast<double>(count - 2) / sxx);
  est.samples = count;
  return est;
}

std::optional<std::vector<double>> lemma21_sequence(const Profile& profile, double gamma,
                                                    double tol, std::size_t count) {
  if (count == 0) {
    throw Error(ErrorCode::InvalidArgument, "sequence length must be >= 1");
  }
  std::vector<double> radii;
  for (const auto& s : profile.samples) {
    if (std::abs(s.q + gamma) <= tol) {
      radii.push_back(s.r);
      if (radii.size() == count) break;
    }
  }
  if (radii.size() < count) return std::nullopt;
  std::reverse(radii.begin(), radii.end());
  return radii;
}

std::optional<std::pair<double, double>> decay_window(const Profile& profile,
                                                      const BlowUpSpec& spec) {
  validate(spec);
  const double bound = std::log(2.0);
  const double log_eta = std::log(spec.eta);
  std::optional<std::pair<double, double>> best;
  double best_width = -1.0;
  std::optional<std::size_t> run_start;

  auto close_run = [&](std::size_t first, std::size_t last) {
    const double a = profile.samples[first].r;
    const double b = profile.samples[last].r;
    const double width = std::log(b / a);
    if (width > best_width) {
      best_width = width;
      best = std::make_pair(a, b);
    }
  };
  for (std::size_t i = 0; i < profile.samples.size(); ++i) {
    const auto& s = profile.samples[i];
    const double w = std::log(s.f) + spec.gamma * std::log(s.r) - log_eta;
    const bool inside = w >= -bound && w <= bound;
    if (inside && !run_start) run_start = i;
    if (!inside && run_start) {
      close_run(*run_start, i - 1);
      run_start.reset();
    }
  }
  if (run_start) close_run(*run_start, profile.samples.size() - 1);
  return best;
}

DriftReport prescription_drift(const ProblemParams& params, const BlowUpSpec& spec,
                               double r0, double decades, const IntegratorOptions& opts) {
  validate(params);
  validate(spec);
  if (!(r0 > 0.0) || !(decades >= 0.0) || !std::isfinite(decades)) {
    throw Error(ErrorCode::InvalidArgument, "drift needs r0 > 0 and decades >= 0");
  }
  DriftReport report{params, spec, r0, decades, Termination::Done, {}};
  if (decades == 0.0) return report;

  const State start = asymptotic_start(spec, r0);
  const Profile profile = integrate(params, start, start.s - decades * std::log(10.0), opts);
  report.cause = profile.meta.cause;

  const double log_eta = std::log(spec.eta);
  const auto bins = static_cast<std::size_t>(std::ceil(decades - 1e-12));
  for (std::size_t k = 0; k < bins; ++k) {
    const double hi = r0 * std::pow(10.0, -static_cast<double>(k));
    const double lo = r0 * std::pow(10.0, -std::min(decades, static_cast<double>(k + 1)));
    DecadeDrift bin{hi, lo, 0.0, 0.0};
    bool any = false;
    for (const auto& s : profile.samples) {
      if (s.r < lo * (1.0 - 1e-12) || s.r > hi * (1.0 + 1e-12)) continue;
      any = true;
      bin.max_q_defect = std::max(bin.max_q_defect, std::abs(s.q + spec.gamma));
      const double w = std::log(s.f) + spec.gamma * std::log(s.r) - log_eta;
      bin.max_log_w_defect = std::max(bin.max_log_w_defect, std::abs(w));
    }
    if (!any) break;
    report.per_decade.push_back(bin);
  }
  return report;
}

nlohmann::json to_json(const RateEstimate& estimate) {
  return {{"gamma_hat", estimate.gamma_hat},
          {"eta_hat", estimate.eta_hat},
          {"r_lo", estimate.r_lo},
          {"r_hi", estimate.r_hi},
          {"stderr", estimate.stderr_slope},
          {"samples", estimate.samples}};
}

nlohmann::json to_json(const DriftReport& report) {
  nlohmann::json j;
  j["format"] = kFormatVersion;
  j["params"] = to_json(report.params);
  j["gamma"] = report.spec.gamma;
  j["eta"] = report.spec.eta;
  j["r0"] = report.r0;
  j["decades"] = report.decades;
  j["termination"] = std::string(to_string(report.cause));
  auto& r_hi = j["r_hi"] = nlohmann::json::array();
  auto& r_lo = j["r_lo"] = nlohmann::json::array();
  auto& q_def = j["max_q_defect"] = nlohmann::json::array();
  auto& w_def = j["max_log_w_defect"] = nlohmann::json::array();
  for (const auto& d : report.per_decade) {
    r_hi.push_back(d.r_hi);
    r_lo.push_back(d.r_lo);
    q_def.push_back(d.max_q_defect);
    w_def.push_back(d.max_log_w_defect);
  }
  return j;
}

}  // namespace ssfde
