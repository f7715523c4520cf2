#pragma once

// Command-line layer: sweep grids, reports and the subcommand driver.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ssfde/classify.hpp"
#include "ssfde/domain.hpp"

namespace ssfde::cli {

/// One grid coordinate: a number, or a symbolic value resolved per row
/// ("ratio" = α/β and "p" = 2/(1-m) for gamma; "critical" and "barenblatt"
/// for eta).
struct GridValue {
  enum class Kind { Number, Ratio, CriticalRate, CriticalEta, BarenblattEta };
  Kind kind = Kind::Number;
  double value = 0.0;

  std::string label() const;
};

/// Parses "a,b,c", "start:stop:count" (inclusive, evenly spaced) or a mix
/// of both separated by commas. Symbolic tokens must be listed in `allowed`.
std::vector<GridValue> parse_grid(std::string_view text,
                                  std::vector<GridValue::Kind> allowed = {});
std::vector<double> parse_number_grid(std::string_view text);
std::vector<int> parse_int_grid(std::string_view text);

struct SweepConfig {
  std::vector<int> n{3};
  std::vector<double> m{0.2};
  std::vector<double> beta{0.0};
  std::vector<double> alpha;  // must be empty for coupled modes
  SimilarityMode mode = SimilarityMode::Generic;
  std::vector<GridValue> gamma;
  std::vector<GridValue> eta;
  EtaRelationForm form = EtaRelationForm::Corrected;
  double tol = kDefaultTolerance;
};

struct SweepRow {
  int n = 0;
  double m = 0.0;
  std::optional<double> alpha;
  double beta = 0.0;
  std::optional<double> gamma;
  std::optional<double> eta;
  std::string verdict;  // VerdictStatus name, or "Invalid"
  std::vector<std::string> reasons;
  std::optional<double> relation_gap;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepRow> rows;
};

std::size_t grid_cardinality(const SweepConfig& config);

/// Evaluates every grid point, `workers` at a time. Row order is the nested
/// loop order n, m, beta, alpha, gamma, eta regardless of worker count.
SweepReport run_sweep(const SweepConfig& config, unsigned workers);

nlohmann::json config_to_json(const SweepConfig& config);
std::string render_csv(const SweepReport& report);
std::string render_json(const SweepReport& report);

struct VerifyOptions {
  bool quick = false;
  bool perturb_q = false;
};

struct CheckResult {
  std::string name;
  std::string context;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

/// Built-in oracle suite over the exact power-law family.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

/// Worker count used when --workers is absent: SSFDE_WORKERS if set and
/// positive, else the hardware concurrency.
unsigned default_workers();

/// Entry point shared by the executable and the tests. Exit codes:
/// 0 success, 1 verify failure, 2 invalid configuration, 3 guard
/// termination under --strict.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ssfde::cli
