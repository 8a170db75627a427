#pragma once

#include <string>
#include <vector>

namespace kc {

struct ExperimentRow {
  std::string params;
  std::string quantity;
  std::string value;
  /// Comparison operator against `bound`: ">=", "<=", "==" or "" for rows
  /// that only report a number.
  std::string relation;
  std::string bound;
  bool pass = true;
  /// Informational rows are reported but do not decide the outcome.
  bool counted = true;
};

struct ExperimentReport {
  std::string id;
  int criterion = 0;
  std::string title;
  std::vector<ExperimentRow> rows;
  double seconds = 0;
  double time_limit = 0;

  [[nodiscard]] bool passed() const;
  [[nodiscard]] std::size_t counted_rows() const;
  [[nodiscard]] std::size_t failed_rows() const;
};

/// Preset names in criterion order.
const std::vector<std::string>& experiment_names();

/// Runs a preset. Throws std::invalid_argument for unknown names. Cells run
/// on `workers` threads (0: default_workers()); rows come back in cell order.
ExperimentReport run_experiment(const std::string& name, unsigned workers = 0);

std::string report_csv(const ExperimentReport& report);
std::string report_json(const ExperimentReport& report);
/// Writes <dir>/<id>.csv and <dir>/<id>.json.
void write_report(const ExperimentReport& report, const std::string& dir);

}  // namespace kc
