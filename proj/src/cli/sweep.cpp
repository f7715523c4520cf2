#include <atomic>
#include <sstream>
#include <thread>

#include "ssfde/cli.hpp"
#include "ssfde/exactsol.hpp"
#include "ssfde/profile_io.hpp"

namespace ssfde::cli {

namespace {

struct GridPoint {
  int n;
  double m;
  double beta;
  std::optional<double> alpha;
  GridValue gamma;
  GridValue eta;
};

void check_config(const SweepConfig& config) {
  if (config.n.empty() || config.m.empty() || config.beta.empty() ||
      config.gamma.empty() || config.eta.empty()) {
    throw Error(ErrorCode::InvalidArgument, "sweep grids must be non-empty");
  }
  if (config.mode == SimilarityMode::Generic && config.alpha.empty()) {
    throw Error(ErrorCode::InvalidArgument, "generic mode needs an alpha grid");
  }
  if (config.mode != SimilarityMode::Generic && !config.alpha.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "alpha is fixed by the similarity coupling; drop --alpha or use --mode generic");
  }
  if (!(config.tol > 0.0)) {
    throw Error(ErrorCode::InvalidTolerance, "tolerance must be > 0");
  }
}

std::vector<GridPoint> enumerate(const SweepConfig& config) {
  std::vector<std::optional<double>> alphas;
  if (config.alpha.empty()) {
    alphas.emplace_back();
  } else {
    for (double a : config.alpha) alphas.emplace_back(a);
  }
  std::vector<GridPoint> points;
  points.reserve(grid_cardinality(config));
  for (int n : config.n)
    for (double m : config.m)
      for (double beta : config.beta)
        for (const auto& alpha : alphas)
          for (const auto& gamma : config.gamma)
            for (const auto& eta : config.eta) points.push_back({n, m, beta, alpha, gamma, eta});
  return points;
}

SweepRow evaluate(const SweepConfig& config, const GridPoint& pt) {
  SweepRow row;
  row.n = pt.n;
  row.m = pt.m;
  row.beta = pt.beta;
  try {
    ProblemParams params{pt.n, pt.m, 0.0, pt.beta};
    params.alpha = pt.alpha ? *pt.alpha : mode_alpha(config.mode, pt.beta, pt.m);
    row.alpha = params.alpha;
    const auto constants = derived_constants(params);

    double gamma = pt.gamma.value;
    if (pt.gamma.kind == GridValue::Kind::Ratio) {
      if (params.beta == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "gamma=ratio needs beta != 0");
      }
      gamma = params.alpha / params.beta;
    } else if (pt.gamma.kind == GridValue::Kind::CriticalRate) {
      gamma = constants.p;
    }
    row.gamma = gamma;

    double eta = pt.eta.value;
    if (pt.eta.kind == GridValue::Kind::CriticalEta) {
      const auto critical = critical_eta(params, config.form);
      if (!critical) {
        throw Error(ErrorCode::InvalidArgument, "no critical eta: alpha - beta p <= 0");
      }
      eta = *critical;
    } else if (pt.eta.kind == GridValue::Kind::BarenblattEta) {
      eta = barenblatt_eta(params);
    }
    row.eta = eta;

    const auto verdict = classify(params, BlowUpSpec::make(gamma, eta), config.form, config.tol);
    row.verdict = std::string(to_string(verdict.status));
    for (auto rule : verdict.reasons) row.reasons.emplace_back(to_string(rule));
    row.relation_gap = verdict.relation_gap;
  } catch (const Error& e) {
    row.verdict = "Invalid";
    row.reasons = {"ERR_" + std::string(to_string(e.code()))};
  }
  return row;
}

std::string join_labels(const std::vector<GridValue>& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ',';
    out += v.label();
  }
  return out;
}

template <typename T>
std::string join_numbers(const std::vector<T>& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ',';
    if constexpr (std::is_same_v<T, int>) {
      out += std::to_string(v);
    } else {
      out += format_double(v);
    }
  }
  return out;
}

std::string optional_number(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string join_reasons(const std::vector<std::string>& reasons) {
  std::string out;
  for (const auto& r : reasons) {
    if (!out.empty()) out += ';';
    out += r;
  }
  return out;
}

}  // namespace

std::size_t grid_cardinality(const SweepConfig& config) {
  return config.n.size() * config.m.size() * config.beta.size() *
         std::max<std::size_t>(1, config.alpha.size()) * config.gamma.size() *
         config.eta.size();
}

SweepReport run_sweep(const SweepConfig& config, unsigned workers) {
  check_config(config);
  const auto points = enumerate(config);
  SweepReport report{config, std::vector<SweepRow>(points.size())};

  const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(points.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      report.rows[i] = evaluate(config, points[i]);
    }
  };
  if (count == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(work);
  }
  return report;
}

nlohmann::json config_to_json(const SweepConfig& config) {
  nlohmann::json j;
  j["n"] = config.n;
  j["m"] = config.m;
  j["beta"] = config.beta;
  j["alpha"] = config.alpha.empty() ? nlohmann::json("coupled") : nlohmann::json(config.alpha);
  j["mode"] = std::string(to_string(config.mode));
  nlohmann::json gamma = nlohmann::json::array();
  for (const auto& g : config.gamma) gamma.push_back(g.label());
  nlohmann::json eta = nlohmann::json::array();
  for (const auto& e : config.eta) eta.push_back(e.label());
  j["gamma"] = gamma;
  j["eta"] = eta;
  j["eta_relation"] = std::string(to_string(config.form));
  j["tol"] = config.tol;
  return j;
}

std::string render_csv(const SweepReport& report) {
  const auto& c = report.config;
  std::ostringstream out;
  out << "# format=" << kFormatVersion << '\n'
      << "# command=sweep\n"
      << "# n=" << join_numbers(c.n) << '\n'
      << "# m=" << join_numbers(c.m) << '\n'
      << "# beta=" << join_numbers(c.beta) << '\n'
      << "# alpha=" << (c.alpha.empty() ? std::string("coupled") : join_numbers(c.alpha)) << '\n'
      << "# mode=" << to_string(c.mode) << '\n'
      << "# gamma=" << join_labels(c.gamma) << '\n'
      << "# eta=" << join_labels(c.eta) << '\n'
      << "# eta_relation=" << to_string(c.form) << '\n'
      << "# tol=" << format_double(c.tol) << '\n'
      << "# rows=" << report.rows.size() << '\n'
      << "n,m,alpha,beta,gamma,eta,verdict,reasons,relation_gap\n";
  for (const auto& row : report.rows) {
    out << row.n << ',' << format_double(row.m) << ',' << optional_number(row.alpha) << ','
        << format_double(row.beta) << ',' << optional_number(row.gamma) << ','
        << optional_number(row.eta) << ',' << row.verdict << ',' << join_reasons(row.reasons)
        << ',' << optional_number(row.relation_gap) << '\n';
  }
  return out.str();
}

std::string render_json(const SweepReport& report) {
  nlohmann::json j;
  j["format"] = kFormatVersion;
  j["command"] = "sweep";
  j["config"] = config_to_json(report.config);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r;
    r["n"] = row.n;
    r["m"] = row.m;
    r["alpha"] = row.alpha ? nlohmann::json(*row.alpha) : nlohmann::json();
    r["beta"] = row.beta;
    r["gamma"] = row.gamma ? nlohmann::json(*row.gamma) : nlohmann::json();
    r["eta"] = row.eta ? nlohmann::json(*row.eta) : nlohmann::json();
    r["verdict"] = row.verdict;
    r["reasons"] = row.reasons;
    r["relation_gap"] = row.relation_gap ? nlohmann::json(*row.relation_gap) : nlohmann::json();
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

}  // namespace ssfde::cli
