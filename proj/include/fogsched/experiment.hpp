#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fogsched/execution.hpp"
#include "fogsched/policies.hpp"
#include "fogsched/scenario.hpp"

namespace fogsched {

// One (scenario, policy, h, distribution) cell. Optional fields are written
// as empty CSV fields when absent.
struct ResultRow {
  std::string scenario;
  PolicyKind policy = PolicyKind::PIER;
  int h = 1;
  DurationLaw distribution;
  std::size_t replications = 0;
  double mean_ratio = 0.0;
  double ci_half_width = 0.0;
  bool ci_ok = false;
  double blocked_fraction = 0.0;
  double throughput_rate = 0.0;
  std::optional<double> exact_ratio;
  std::optional<double> optimal_ratio;
  std::optional<double> normalized_deviation;
  std::optional<double> relative_difference;  // vs the exponential cell of the same scenario, policy and h
  std::string status = "ok";  // ok | ci_not_met | error:<code> | oracle_skipped:<code>
};

struct ExperimentReport {
  std::vector<ResultRow> rows;
  bool all_ci_ok = true;
  bool any_error = false;
};

struct ExperimentHooks {
  // Called from the writer thread as each row becomes final, in row order.
  std::function<void(const ResultRow&)> on_row;
};

// Runs every cell of the experiment block. Cells of one scenario share
// replication seeds (common random numbers across policies and distributions).
// Errors are recorded in the row status and do not abort other cells.
ExperimentReport run_experiment(const ScenarioFile& scenario, const ExperimentHooks& hooks = {});

// Column names in output order.
const std::vector<std::string>& csv_columns();
std::string csv_header();
std::string csv_line(const ResultRow& row);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

struct CdfPoint {
  double value;
  double probability;  // fraction of samples <= value
};

struct CdfSummary {
  std::size_t count = 0;
  double win_fraction = 0.0;  // fraction of ratios strictly below 1
  std::vector<CdfPoint> cdf;  // one step per distinct value
};

// Ratios are PIER's efficiency over a competitor's; < 1 means PIER is better.
CdfSummary summarize_cdf(std::vector<double> ratios);

// PIER mean ratio over `other`'s for every (scenario, h, distribution) where
// both cells succeeded, optionally restricted to one h.
std::vector<double> comparison_ratios(const std::vector<ResultRow>& rows, PolicyKind other,
                                      std::optional<int> h = std::nullopt);

// Comparison and robustness summary: one line per (h, competitor) with the
// win fraction and quantiles, and one per (h, distribution) with relative
// difference statistics.
void write_summary(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace fogsched
