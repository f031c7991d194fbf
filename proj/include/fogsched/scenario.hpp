#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogsched/model.hpp"
#include "fogsched/oracle.hpp"
#include "fogsched/policies.hpp"

namespace fogsched {

// A family of generated scenarios in place of a fixed network. Scenario i at
// scaling h is drawn from derive_seed(derive_seed(seed, h), i).
struct FamilySpec {
  std::size_t count = 0;
  std::uint64_t seed = 1;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

struct ExperimentBlock {
  std::vector<PolicyKind> policies{PolicyKind::PIER};
  std::vector<int> h{1};
  std::vector<DurationLaw> distributions{DurationLaw{}};
  std::optional<double> horizon;  // default: 10^4 mean service times
  std::optional<double> warmup;   // default: 10% of the horizon
  std::size_t replications = 30;
  std::size_t max_replications = 240;
  double ci_target = 0.05;
  std::uint64_t seed = 1;
  bool oracle = false;
  std::size_t oracle_state_cap = kDefaultStateCap;
  std::string output = "results.csv";
  std::size_t workers = 1;
  std::optional<FamilySpec> family;

  friend bool operator==(const ExperimentBlock&, const ExperimentBlock&) = default;
};

struct ScenarioFile {
  std::string name = "scenario";
  std::optional<NetworkConfig> network;  // absent when `experiment.family` is set
  ExperimentBlock experiment;

  friend bool operator==(const ScenarioFile&, const ScenarioFile&) = default;
};

// "exp", "det", "pareto:<shape>"
std::string format_distribution(const DurationLaw& law);
std::optional<DurationLaw> parse_distribution(std::string_view text);

// Throws ParseError (with line/column) for malformed JSON and ValidationError
// (with the field path) for schema or model violations.
ScenarioFile parse_scenario(std::string_view json_text);
std::string serialize_scenario(const ScenarioFile& scenario);

// `path_or_preset` is a preset name (fig1, fig2, fig3) or a file path.
ScenarioFile load_scenario(const std::string& path_or_preset);

std::optional<ScenarioFile> preset(std::string_view name);
std::vector<std::string> preset_names();

// Single class, five areas with one group each, unit capacity and channels,
// zero idle power.
NetworkConfig fig1_config();

}  // namespace fogsched
