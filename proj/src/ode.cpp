#include "ssfde/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ssfde {

namespace {

constexpr double kOverflowGuard = 1e300;
const double kLogOverflow = std::log(kOverflowGuard);
const double kLogUnderflow = std::log(1e-300);

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Internal state (log f, q).
using Vec = std::array<double, 2>;

Vec field(double s, const Vec& y, const ProblemParams& params) {
  return {y[1], dq_ds(s, y[0], y[1], params)};
}

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [c, k] : terms) {
    out[0] += h * c * (*k)[0];
    out[1] += h * c * (*k)[1];
  }
  return out;
}

struct StepResult {
  Vec y;
  double error = 0.0;  // scaled, accept when <= 1
};

StepResult dopri_step(double s, const Vec& y, double h, const ProblemParams& params,
                      const IntegratorOptions& opts) {
  const Vec k1 = field(s, y, params);
  const Vec k2 = field(s + c2 * h, axpy(y, h, {{a21, &k1}}), params);
  const Vec k3 = field(s + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}), params);
  const Vec k4 = field(s + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), params);
  const Vec k5 = field(s + c5 * h,
                       axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}),
                       params);
  const Vec k6 = field(
      s + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}),
      params);
  const Vec y_new =
      axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const Vec k7 = field(s + h, y_new, params);

  StepResult out{y_new, 0.0};
  for (int i = 0; i < 2; ++i) {
    const double est = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
    // An error in log f is already a relative error in f.
    const double scale =
        i == 0 ? opts.abs_tol + opts.rel_tol
               : opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    out.error = std::max(out.error, std::abs(est) / scale);
  }
  if (!std::isfinite(out.error)) out.error = std::numeric_limits<double>::infinity();
  return out;
}

// Value and first two s-derivatives.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Quintic Hermite interpolation on [0, h] at fraction t.
double hermite(const Jet& a, const Jet& b, double h, double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double t5 = t4 * t;
  return a.v * (1 - 10 * t3 + 15 * t4 - 6 * t5) + h * a.d1 * (t - 6 * t3 + 8 * t4 - 3 * t5) +
         h * h * a.d2 * 0.5 * (t2 - 3 * t3 + 3 * t4 - t5) +
         b.v * (10 * t3 - 15 * t4 + 6 * t5) + h * b.d1 * (-4 * t3 + 7 * t4 - 3 * t5) +
         h * h * b.d2 * 0.5 * (t3 - 2 * t4 + t5);
}

// Exact integral of the quintic Hermite interpolant over one interval.
double hermite_integral(const Jet& a, const Jet& b, double h) {
  return h * (0.5 * (a.v + b.v) + h * (a.d1 - b.d1) / 10.0 + h * h * (a.d2 + b.d2) / 120.0);
}

// Local derivatives of q and of X = r^2 f^(1-m) along a solution.
struct LocalJets {
  Jet q;
  Jet x;
};

LocalJets local_jets(double s, double log_f, double q, const ProblemParams& params) {
  const double m = params.m;
  const double x = std::exp(2.0 * s + (1.0 - m) * log_f);
  const double u = 2.0 + (1.0 - m) * q;  // d log X / ds
  const double dq = -(params.n - 2.0) * q - m * q * q - (params.alpha + params.beta * q) * x;
  const double d2q = -(params.n - 2.0) * dq - 2.0 * m * q * dq - params.beta * dq * x -
                     (params.alpha + params.beta * q) * x * u;
  return {Jet{q, dq, d2q}, Jet{x, x * u, x * (u * u + (1.0 - m) * dq)}};
}

std::size_t interval_index(const std::vector<double>& s, double x) {
  auto it = std::upper_bound(s.begin(), s.end(), x);
  std::size_t i = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
  return std::min(i, s.size() - 2);
}

Termination guard(const Vec& y) {
  if (y[0] > kLogOverflow || std::abs(y[1]) > kOverflowGuard) return Termination::Blowup;
  if (y[0] < kLogUnderflow) return Termination::Extinction;
  return Termination::Done;
}

}  // namespace

double State::r() const { return std::exp(s); }

State State::at_radius(double r, double f, double q) { return State{std::log(r), f, q}; }

double dq_ds(double s, double log_f, double q, const ProblemParams& params) {
  const double x = std::exp(2.0 * s + (1.0 - params.m) * log_f);  // r^2 f^(1-m)
  return -(params.n - 2.0) * q - params.m * q * q -
         (params.alpha + params.beta * q) * x;
}

StateDerivative rhs(const State& state, const ProblemParams& params) {
  if (!(state.f > 0.0)) {
    throw Error(ErrorCode::NonPositiveF, "profile value must stay positive");
  }
  return {state.q * state.f, dq_ds(state.s, std::log(state.f), state.q, params)};
}

std::string_view to_string(Termination cause) {
  switch (cause) {
    case Termination::Done: return "Done";
    case Termination::Blowup: return "Blowup";
    case Termination::Extinction: return "Extinction";
    case Termination::StepSizeUnderflow: return "StepSizeUnderflow";
  }
  return "Done";
}

bool Profile::covers(double r) const {
  if (samples.empty()) return false;
  return r >= r_min() * (1.0 - 1e-12) && r <= r_max() * (1.0 + 1e-12);
}

Sample Profile::at(double r) const {
  if (!covers(r)) {
    throw Error(ErrorCode::RangeNotCovered, "radius outside the sampled profile");
  }
  if (samples.size() == 1) return samples.front();
  const double s = std::log(r);
  auto it = std::upper_bound(samples.begin(), samples.end(), r,
                             [](double x, const Sample& a) { return x < a.r; });
  std::size_t i = it == samples.begin() ? 0 : static_cast<std::size_t>(it - samples.begin()) - 1;
  i = std::min(i, samples.size() - 2);
  const Sample& lo = samples[i];
  const Sample& hi = samples[i + 1];
  const double s0 = std::log(lo.r);
  const double h = std::log(hi.r) - s0;
  const double t = std::clamp((s - s0) / h, 0.0, 1.0);
  const double l0 = std::log(lo.f);
  const double l1 = std::log(hi.f);
  const auto j0 = local_jets(s0, l0, lo.q, params);
  const auto j1 = local_jets(s0 + h, l1, hi.q, params);
  const Jet log_f0{l0, lo.q, j0.q.d1};
  const Jet log_f1{l1, hi.q, j1.q.d1};
  return Sample{r, std::exp(hermite(log_f0, log_f1, h, t)), hermite(j0.q, j1.q, h, t)};
}

Profile integrate(const ProblemParams& params, const State& start, double s_end,
                  const IntegratorOptions& opts) {
  validate(params);
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0) || !(opts.max_step > 0.0) ||
      opts.points_per_decade < 1) {
    throw Error(ErrorCode::ToleranceInvalid,
                "rel_tol, abs_tol and max_step must be > 0, points_per_decade >= 1");
  }
  if (!(start.f > 0.0)) {
    throw Error(ErrorCode::NonPositiveF, "initial profile value must be positive");
  }

  Profile out;
  out.params = params;
  out.meta.options = opts;
  out.meta.s_start = start.s;
  out.meta.s_end = s_end;
  out.samples.push_back({std::exp(start.s), start.f, start.q});

  const double span = s_end - start.s;
  if (span == 0.0) return out;
  const double dir = span > 0.0 ? 1.0 : -1.0;
  const double spacing = std::log(10.0) / opts.points_per_decade;

  double s = start.s;
  Vec y{std::log(start.f), start.q};
  std::size_t grid_index = 1;
  auto next_target = [&] {
    const double g = start.s + dir * static_cast<double>(grid_index) * spacing;
    return dir > 0.0 ? std::min(g, s_end) : std::max(g, s_end);
  };
  double target = next_target();
  double h = dir * std::min(opts.max_step, 1e-2);

  while (true) {
    if (out.meta.steps + out.meta.rejected >= opts.max_steps) {
      out.meta.cause = Termination::StepSizeUnderflow;
      break;
    }
    const double dist = target - s;
    const bool hits = std::abs(h) >= std::abs(dist);
    const double h_try = hits ? dist : h;
    const StepResult step = dopri_step(s, y, h_try, params, opts);

    if (step.error <= 1.0) {
      ++out.meta.steps;
      s = hits ? target : s + h_try;
      y = step.y;
      if (const auto cause = guard(y); cause != Termination::Done) {
        out.meta.cause = cause;
        break;
      }
      const double grow = step.error > 0.0
                              ? std::min(5.0, std::max(0.2, 0.9 * std::pow(step.error, -0.2)))
                              : 5.0;
      const double proposed = std::abs(h_try) * grow;
      // A step clipped to the sample grid says nothing about the usable size.
      const double magnitude = hits ? std::max(proposed, std::abs(h)) : proposed;
      h = dir * std::min(opts.max_step, magnitude);
      if (hits) {
        out.samples.push_back({std::exp(s), std::exp(y[0]), y[1]});
        if (target == s_end) break;
        ++grid_index;
        target = next_target();
      }
    } else {
      ++out.meta.rejected;
      const double shrink = std::isfinite(step.error)
                                ? std::max(0.2, 0.9 * std::pow(step.error, -0.2))
                                : 0.25;
      h = h_try * shrink;
      if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(s))) {
        out.meta.cause = std::isfinite(step.error) ? Termination::StepSizeUnderflow
                                                   : Termination::Blowup;
        break;
      }
    }
  }

  if (dir < 0.0) std::reverse(out.samples.begin(), out.samples.end());
  return out;
}

State asymptotic_start(const BlowUpSpec& spec, double r0) {
  validate(spec);
  if (!(r0 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "start radius must be > 0");
  }
  return State{std::log(r0), spec.eta * std::pow(r0, -spec.gamma), -spec.gamma};
}

Profile sample_profile(const ProblemParams& params, const RadialFunction& f,
                       const RadialFunction& q, double r_lo, double r_hi,
                       int points_per_decade) {
  if (!(r_lo > 0.0) || !(r_hi >= r_lo) || points_per_decade < 1) {
    throw Error(ErrorCode::InvalidArgument, "sample range must satisfy 0 < r_lo <= r_hi");
  }
  Profile out;
  out.params = params;
  out.meta.options.points_per_decade = points_per_decade;
  const double s_lo = std::log(r_lo);
  const double s_hi = std::log(r_hi);
  out.meta.s_start = s_lo;
  out.meta.s_end = s_hi;
  const double decades = (s_hi - s_lo) / std::log(10.0);
  const auto intervals =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(decades * points_per_decade - 1e-9)));
  const std::size_t count = r_hi == r_lo ? 1 : intervals + 1;
  out.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = i + 1 == count ? s_hi : s_lo + (s_hi - s_lo) * static_cast<double>(i) / static_cast<double>(intervals);
    const double r = i == 0 ? r_lo : (i + 1 == count ? r_hi : std::exp(s));
    const double value = f(r);
    if (!(value > 0.0)) {
      throw Error(ErrorCode::NonPositiveProfile, "sampled profile must be positive");
    }
    out.samples.push_back({r, value, q(r)});
  }
  return out;
}

IntegratingFactor::IntegratingFactor(const Profile& profile, double beta, double eps)
    : beta_(beta), anchor_r_(eps / 2.0) {
  if (profile.samples.size() < 2 || !profile.covers(anchor_r_)) {
    throw Error(ErrorCode::RangeNotCovered, "profile does not cover eps/2");
  }
  const std::size_t count = profile.samples.size();
  s_.resize(count);
  integrand_.resize(count);
  slope_.resize(count);
  curvature_.resize(count);
  cumulative_.assign(count, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& smp = profile.samples[i];
    s_[i] = std::log(smp.r);
    const auto x = local_jets(s_[i], std::log(smp.f), smp.q, profile.params).x;
    integrand_[i] = x.v;
    slope_[i] = x.d1;
    curvature_[i] = x.d2;
  }
  for (std::size_t i = 1; i < count; ++i) {
    const Jet a{integrand_[i - 1], slope_[i - 1], curvature_[i - 1]};
    const Jet b{integrand_[i], slope_[i], curvature_[i]};
    cumulative_[i] = cumulative_[i - 1] + hermite_integral(a, b, s_[i] - s_[i - 1]);
  }
  anchor_cumulative_ = cumulative_at(std::log(anchor_r_));
}

double IntegratingFactor::cumulative_at(double s) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(s));
  if (s < s_.front() - slack || s > s_.back() + slack) {
    throw Error(ErrorCode::RangeNotCovered, "radius outside the sampled profile");
  }
  const std::size_t i = interval_index(s_, s);
  const double h = s_[i + 1] - s_[i];
  const double t = std::clamp((s - s_[i]) / h, 0.0, 1.0);
  const Jet a{cumulative_[i], integrand_[i], slope_[i]};
  const Jet b{cumulative_[i + 1], integrand_[i + 1], slope_[i + 1]};
  return hermite(a, b, h, t);
}

double IntegratingFactor::log_at(double r) const {
  if (beta_ == 0.0) return 0.0;
  return beta_ * (cumulative_at(std::log(r)) - anchor_cumulative_);
}

double IntegratingFactor::operator()(double r) const { return std::exp(log_at(r)); }

IntegratingFactor integrating_factor(const Profile& profile, double beta, double eps) {
  return IntegratingFactor(profile, beta, eps);
}

double integral_identity_residual(const Profile& profile, const ProblemParams& params,
                                  double eps) {
  const IntegratingFactor factor(profile, params.beta, eps);
  const double anchor = eps / 2.0;
  const double n2 = params.n - 2.0;
  const std::size_t count = profile.samples.size();

  // G = exp(ψ) A with ψ = (n-2) s + log F and A = α X + m q^2. Both ψ and A
  // are smooth in s while exp(ψ) may vary by many orders per sample, so each
  // interval gets Gauss–Legendre nodes on the interpolated solution.
  auto integrand = [&](double s) {
    const Sample smp = profile.at(std::exp(s));
    const double x = std::exp(2.0 * s + (1.0 - params.m) * std::log(smp.f));
    return std::exp(n2 * s + factor.log_at(smp.r)) *
           (params.alpha * x + params.m * smp.q * smp.q);
  };
  static constexpr std::array<double, 4> kNode{0.1834346424956498, 0.5255324099163290,
                                               0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> kWeight{0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};
  auto quad = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t j = 0; j < kNode.size(); ++j) {
      sum += kWeight[j] * (integrand(mid - half * kNode[j]) + integrand(mid + half * kNode[j]));
    }
    return half * sum;
  };

  std::vector<double> s(count), lhs(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& smp = profile.samples[i];
    s[i] = std::log(smp.r);
    lhs[i] = std::exp(n2 * s[i] + factor.log_at(smp.r)) * smp.q;
  }

  // Accumulate ∫_{s_i}^{s_a} G outward from the anchor so that every partial
  // sum is dominated by the terms nearest to it.
  const double sa = std::log(anchor);
  const std::size_t k = interval_index(s, sa);
  std::vector<double> to_anchor(count, 0.0);
  to_anchor[k] = quad(s[k], sa);
  for (std::size_t i = k; i-- > 0;) to_anchor[i] = to_anchor[i + 1] + quad(s[i], s[i + 1]);
  to_anchor[k + 1] = -quad(sa, s[k + 1]);
  for (std::size_t i = k + 2; i < count; ++i) {
    to_anchor[i] = to_anchor[i - 1] - quad(s[i - 1], s[i]);
  }
  const double boundary = std::pow(anchor, n2) * profile.at(anchor).q;

  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double defect =
        std::abs(lhs[i] - (boundary + to_anchor[i])) / std::max(1.0, std::abs(lhs[i]));
    worst = std::max(worst, defect);
  }
  return worst;
}

double q_consistency_defect(const Profile& profile) {
  double worst = 0.0;
  for (std::size_t i = 1; i < profile.samples.size(); ++i) {
    const auto& lo = profile.samples[i - 1];
    const auto& hi = profile.samples[i];
    const double s0 = std::log(lo.r);
    const double s1 = std::log(hi.r);
    const double l0 = std::log(lo.f);
    const double l1 = std::log(hi.f);
    const auto j0 = local_jets(s0, l0, lo.q, profile.params);
    const auto j1 = local_jets(s1, l1, hi.q, profile.params);
    worst = std::max(worst, std::abs((l1 - l0) - hermite_integral(j0.q, j1.q, s1 - s0)));
  }
  return worst;
}

}  // namespace ssfde
