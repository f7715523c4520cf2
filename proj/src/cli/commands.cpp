#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ssfde/cli.hpp"
#include "ssfde/diagnostics.hpp"
#include "ssfde/ode.hpp"
#include "ssfde/profile_io.hpp"

namespace ssfde::cli {

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitGuard = 3;

struct ParamFlags {
  int n = 3;
  double m = 0.2;
  std::optional<double> alpha;
  double beta = 0.0;
  std::string mode = "generic";
};

void add_param_flags(CLI::App* cmd, ParamFlags& flags) {
  cmd->add_option("--n", flags.n, "spatial dimension (>= 3)")->required();
  cmd->add_option("--m", flags.m, "diffusion exponent, 0 < m < (n-2)/n")->required();
  cmd->add_option("--alpha", flags.alpha, "similarity coefficient alpha");
  cmd->add_option("--beta", flags.beta, "similarity coefficient beta")->capture_default_str();
  cmd->add_option("--mode", flags.mode, "forward|backward|eternal|generic")
      ->check(CLI::IsMember({"forward", "backward", "eternal", "generic"}))
      ->capture_default_str();
}

ProblemParams resolve_params(const ParamFlags& flags, double tol) {
  const auto mode = parse_mode(flags.mode);
  ProblemParams params{flags.n, flags.m, 0.0, flags.beta};
  if (mode == SimilarityMode::Generic) {
    if (!flags.alpha) {
      throw Error(ErrorCode::InvalidArgument, "generic mode needs --alpha");
    }
    params.alpha = *flags.alpha;
  } else {
    params.alpha = mode_alpha(mode, flags.beta, flags.m);
    if (flags.alpha && !approx_equal(*flags.alpha, params.alpha, tol)) {
      throw Error(ErrorCode::InvalidArgument,
                  "--alpha " + format_double(*flags.alpha) + " contradicts " +
                      flags.mode + " coupling alpha=" + format_double(params.alpha));
    }
  }
  validate(params);
  return params;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot open output file " + path);
  file << text;
}

std::string join(const std::vector<Rule>& rules) {
  std::string s;
  for (auto r : rules) {
    if (!s.empty()) s += ';';
    s += to_string(r);
  }
  return s;
}

// classify ------------------------------------------------------------------

struct ClassifyFlags {
  ParamFlags params;
  double gamma = 0.0;
  double eta = 0.0;
  std::string eta_relation = "corrected";
  double tol = kDefaultTolerance;
  std::string format = "text";
  std::string out;
};

int cmd_classify(const ClassifyFlags& flags, std::ostream& out) {
  if (!(flags.tol > 0.0)) throw Error(ErrorCode::InvalidTolerance, "--tol must be > 0");
  const auto params = resolve_params(flags.params, flags.tol);
  const auto spec = BlowUpSpec::make(flags.gamma, flags.eta);
  const auto form = parse_eta_form(flags.eta_relation);
  const auto verdict = classify(params, spec, form, flags.tol);
  const auto c = derived_constants(params);

  std::ostringstream text;
  if (flags.format == "json") {
    nlohmann::json j;
    j["format"] = kFormatVersion;
    j["command"] = "classify";
    j["config"] = {{"n", params.n},         {"m", params.m},
                   {"alpha", params.alpha}, {"beta", params.beta},
                   {"mode", flags.params.mode}, {"gamma", spec.gamma},
                   {"eta", spec.eta},       {"eta_relation", to_string(form)},
                   {"tol", flags.tol}};
    j["derived"] = {{"p", c.p}, {"c_star", c.c_star}, {"gamma_crit", c.gamma_crit},
                    {"rhs_110", c.rhs_110}};
    nlohmann::json reasons = nlohmann::json::array();
    for (auto r : verdict.reasons) reasons.push_back(std::string(to_string(r)));
    j["verdict"] = {{"status", to_string(verdict.status)},
                    {"reasons", reasons},
                    {"relation_gap", verdict.relation_gap ? nlohmann::json(*verdict.relation_gap)
                                                          : nlohmann::json()}};
    j["known_existence"] = to_string(known_existence(params, spec, flags.tol));
    text << j.dump(2) << '\n';
  } else if (flags.format == "csv") {
    SweepConfig one;
    one.n = {params.n};
    one.m = {params.m};
    one.beta = {params.beta};
    one.alpha = {params.alpha};
    one.gamma = {GridValue{GridValue::Kind::Number, spec.gamma}};
    one.eta = {GridValue{GridValue::Kind::Number, spec.eta}};
    one.form = form;
    one.tol = flags.tol;
    text << render_csv(run_sweep(one, 1));
  } else {
    text << "# format=" << kFormatVersion << " command=classify\n"
         << "# n=" << params.n << " m=" << format_double(params.m)
         << " alpha=" << format_double(params.alpha) << " beta=" << format_double(params.beta)
         << " mode=" << flags.params.mode << " gamma=" << format_double(spec.gamma)
         << " eta=" << format_double(spec.eta) << " eta_relation=" << to_string(form)
         << " tol=" << format_double(flags.tol) << '\n'
         << "# p=" << format_double(c.p) << " c_star=" << format_double(c.c_star)
         << " gamma_crit=" << format_double(c.gamma_crit)
         << " rhs=" << format_double(c.rhs_110) << '\n'
         << "verdict: " << to_string(verdict.status) << '\n'
         << "reasons: " << join(verdict.reasons) << '\n';
    if (verdict.relation_gap) {
      text << "relation_gap: " << format_double(*verdict.relation_gap) << '\n';
    }
  }
  emit(text.str(), flags.out, out);
  return 0;
}

// sweep ---------------------------------------------------------------------

struct SweepFlags {
  std::string n = "3";
  std::string m = "0.2";
  std::string beta = "0";
  std::string alpha;
  std::string mode = "generic";
  std::string gamma;
  std::string eta;
  std::string eta_relation = "corrected";
  double tol = kDefaultTolerance;
  std::string format = "csv";
  std::string out;
  std::optional<unsigned> workers;
};

int cmd_sweep(const SweepFlags& flags, std::ostream& out) {
  SweepConfig config;
  config.n = parse_int_grid(flags.n);
  config.m = parse_number_grid(flags.m);
  config.beta = parse_number_grid(flags.beta);
  if (!flags.alpha.empty()) config.alpha = parse_number_grid(flags.alpha);
  config.mode = parse_mode(flags.mode);
  using K = GridValue::Kind;
  config.gamma = parse_grid(flags.gamma, {K::Ratio, K::CriticalRate});
  config.eta = parse_grid(flags.eta, {K::CriticalEta, K::BarenblattEta});
  config.form = parse_eta_form(flags.eta_relation);
  config.tol = flags.tol;
  const unsigned workers = flags.workers.value_or(default_workers());
  const auto report = run_sweep(config, workers);
  emit(flags.format == "json" ? render_json(report) : render_csv(report), flags.out, out);
  return 0;
}

// integrate -----------------------------------------------------------------

struct IntegrateFlags {
  ParamFlags params;
  double gamma = 0.0;
  double eta = 0.0;
  double r0 = 1e-2;
  double decades = 4.0;
  std::string direction = "out";
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int points_per_decade = 64;
  std::string out;
  bool strict = false;
};

int cmd_integrate(const IntegrateFlags& flags, std::ostream& out, std::ostream& err) {
  const auto params = resolve_params(flags.params, kDefaultTolerance);
  const auto spec = BlowUpSpec::make(flags.gamma, flags.eta);
  if (!(flags.decades >= 0.0) || !(flags.r0 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "--decades must be >= 0 and --r0 > 0");
  }
  IntegratorOptions opts;
  opts.rel_tol = flags.rel_tol;
  opts.abs_tol = flags.abs_tol;
  opts.points_per_decade = flags.points_per_decade;

  const State start = asymptotic_start(spec, flags.r0);
  const double span = flags.decades * std::log(10.0);
  const double s_end = flags.direction == "in" ? start.s - span : start.s + span;
  const Profile profile = integrate(params, start, s_end, opts);
  const DriftReport drift = prescription_drift(params, spec, flags.r0, flags.decades, opts);

  std::optional<RateEstimate> rate;
  if (profile.samples.size() >= 8) rate = estimate_rate(profile, profile.r_min(), profile.r_max());

  std::ostringstream csv;
  write_profile_csv(csv, profile);
  nlohmann::json sidecar = profile_metadata(profile);
  sidecar["command"] = "integrate";
  sidecar["spec"] = {{"gamma", spec.gamma}, {"eta", spec.eta}};
  sidecar["r0"] = flags.r0;
  sidecar["decades"] = flags.decades;
  sidecar["direction"] = flags.direction;
  sidecar["mode"] = flags.params.mode;
  sidecar["rate"] = rate ? to_json(*rate) : nlohmann::json();
  sidecar["drift"] = to_json(drift);

  std::ostream& summary = flags.out.empty() ? err : out;
  if (flags.out.empty()) {
    out << csv.str();
  } else {
    emit(csv.str(), flags.out, out);
    emit(sidecar.dump(2) + "\n", flags.out + ".json", out);
  }
  summary << "termination: " << to_string(profile.meta.cause) << '\n'
          << "samples: " << profile.samples.size() << " steps: " << profile.meta.steps
          << " rejected: " << profile.meta.rejected << '\n';
  if (rate) {
    summary << "gamma_hat: " << format_double(rate->gamma_hat)
            << " eta_hat: " << format_double(rate->eta_hat)
            << " stderr: " << format_double(rate->stderr_slope) << '\n';
  }
  summary << "drift: termination=" << to_string(drift.cause) << '\n';
  for (std::size_t k = 0; k < drift.per_decade.size(); ++k) {
    const auto& d = drift.per_decade[k];
    summary << "  decade " << k + 1 << " [" << format_double(d.r_lo) << ", "
            << format_double(d.r_hi) << "] max|q+gamma|=" << format_double(d.max_q_defect)
            << " max|log(r^gamma f/eta)|=" << format_double(d.max_log_w_defect) << '\n';
  }
  if (flags.strict && profile.meta.cause != Termination::Done) return kExitGuard;
  return 0;
}

// verify --------------------------------------------------------------------

int cmd_verify(const VerifyOptions& options, const std::string& format, std::ostream& out) {
  const auto results = run_verify(options);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed ? 1 : 0;
  if (format == "json") {
    nlohmann::json j;
    j["format"] = kFormatVersion;
    j["command"] = "verify";
    j["quick"] = options.quick;
    j["perturb_q"] = options.perturb_q;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& r : results) {
      checks.push_back({{"name", r.name}, {"context", r.context}, {"passed", r.passed},
                        {"value", r.value}, {"threshold", r.threshold}});
    }
    j["checks"] = checks;
    j["passed"] = passed;
    j["total"] = results.size();
    out << j.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      out << (r.passed ? "PASS " : "FAIL ") << r.name << " [" << r.context
          << "] value=" << format_double(r.value) << " threshold=" << format_double(r.threshold)
          << '\n';
    }
    out << "verify: " << passed << "/" << results.size() << " checks passed\n";
  }
  return passed == results.size() ? 0 : kExitVerifyFailed;
}

}  // namespace

unsigned default_workers() {
  if (const char* env = std::getenv("SSFDE_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Admissibility classifier and numerical probes for singular self-similar "
               "profiles of the fast diffusion equation",
               "ssfde"};
  app.require_subcommand(1);

  ClassifyFlags cf;
  auto* classify_cmd = app.add_subcommand("classify", "classify a blow-up prescription");
  add_param_flags(classify_cmd, cf.params);
  classify_cmd->add_option("--gamma", cf.gamma, "blow-up exponent")->required();
  classify_cmd->add_option("--eta", cf.eta, "blow-up coefficient")->required();
  classify_cmd->add_option("--eta-relation", cf.eta_relation, "corrected|paper")
      ->check(CLI::IsMember({"corrected", "paper"}))
      ->capture_default_str();
  classify_cmd->add_option("--tol", cf.tol, "relative tolerance")->capture_default_str();
  classify_cmd->add_option("--format", cf.format, "text|json|csv")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  classify_cmd->add_option("--out", cf.out, "write output to this file");

  SweepFlags sf;
  auto* sweep_cmd = app.add_subcommand("sweep", "classify every point of a parameter grid");
  sweep_cmd->add_option("--n", sf.n, "dimension grid")->capture_default_str();
  sweep_cmd->add_option("--m", sf.m, "exponent grid")->capture_default_str();
  sweep_cmd->add_option("--beta", sf.beta, "beta grid")->capture_default_str();
  sweep_cmd->add_option("--alpha", sf.alpha, "alpha grid (generic mode only)");
  sweep_cmd->add_option("--mode", sf.mode, "forward|backward|eternal|generic")
      ->check(CLI::IsMember({"forward", "backward", "eternal", "generic"}))
      ->capture_default_str();
  sweep_cmd->add_option("--gamma", sf.gamma, "gamma grid; tokens: ratio, p")->required();
  sweep_cmd->add_option("--eta", sf.eta, "eta grid; tokens: critical, barenblatt")->required();
  sweep_cmd->add_option("--eta-relation", sf.eta_relation, "corrected|paper")
      ->check(CLI::IsMember({"corrected", "paper"}))
      ->capture_default_str();
  sweep_cmd->add_option("--tol", sf.tol, "relative tolerance")->capture_default_str();
  sweep_cmd->add_option("--format", sf.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sweep_cmd->add_option("--out", sf.out, "write the report to this file");
  sweep_cmd->add_option("--workers", sf.workers,
                        "worker threads (default: SSFDE_WORKERS or all cores)");

  IntegrateFlags inf;
  auto* integrate_cmd =
      app.add_subcommand("integrate", "integrate a profile from its leading-order start");
  add_param_flags(integrate_cmd, inf.params);
  integrate_cmd->add_option("--gamma", inf.gamma, "blow-up exponent")->required();
  integrate_cmd->add_option("--eta", inf.eta, "blow-up coefficient")->required();
  integrate_cmd->add_option("--r0", inf.r0, "start radius")->capture_default_str();
  integrate_cmd->add_option("--decades", inf.decades, "decades to integrate")
      ->capture_default_str();
  integrate_cmd->add_option("--direction", inf.direction, "out|in")
      ->check(CLI::IsMember({"out", "in"}))
      ->capture_default_str();
  integrate_cmd->add_option("--rel-tol", inf.rel_tol)->capture_default_str();
  integrate_cmd->add_option("--abs-tol", inf.abs_tol)->capture_default_str();
  integrate_cmd->add_option("--points-per-decade", inf.points_per_decade)
      ->capture_default_str();
  integrate_cmd->add_option("--out", inf.out, "CSV path; metadata goes to <out>.json");
  integrate_cmd->add_flag("--strict", inf.strict, "exit 3 on guard termination");

  VerifyOptions vo;
  std::string verify_format = "text";
  auto* verify_cmd = app.add_subcommand("verify", "run the built-in exact-solution checks");
  verify_cmd->add_flag("--quick", vo.quick, "single (n, m) family");
  verify_cmd->add_flag("--perturb-q", vo.perturb_q, "corrupt q before the identity check");
  verify_cmd->add_option("--format", verify_format, "text|json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::vector<const char*> argv{"ssfde"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const auto chosen = app.get_subcommands();
    out << (chosen.empty() ? app.help() : chosen.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*classify_cmd) return cmd_classify(cf, out);
    if (*sweep_cmd) return cmd_sweep(sf, out);
    if (*integrate_cmd) return cmd_integrate(inf, out, err);
    if (*verify_cmd) return cmd_verify(vo, verify_format, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace ssfde::cli
