#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fogsched/error.hpp"
#include "fogsched/experiment.hpp"
#include "fogsched/random_scenario.hpp"
#include "fogsched/scenario.hpp"

using namespace fogsched;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCiFailure = 2;

struct SimulateArgs {
  std::string scenario;
  std::string policy;
  std::vector<int> h;
  std::vector<std::string> dist;
  std::optional<std::size_t> replications;
  std::optional<std::size_t> max_replications;
  std::optional<double> horizon;
  std::optional<double> warmup;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> family_count;
  bool oracle = false;
  std::string output;
  std::string summary;
  bool quiet = false;
};

void apply_overrides(ScenarioFile& s, const SimulateArgs& a) {
  ExperimentBlock& e = s.experiment;
  if (!a.policy.empty()) {
    if (a.policy == "all") {
      e.policies = {PolicyKind::PIER, PolicyKind::PTR, PolicyKind::PLPC};
    } else {
      const auto kind = parse_policy(a.policy);
      if (!kind || *kind == PolicyKind::Tabulated)
        throw Error(ErrorCode::InvalidArgument, "--policy must be pier, ptr, plpc or all");
      e.policies = {*kind};
    }
  }
  if (!a.h.empty()) {
    for (int h : a.h)
      if (h < 1) throw Error(ErrorCode::InvalidArgument, "--h values must be >= 1");
    e.h = a.h;
  }
  if (!a.dist.empty()) {
    e.distributions.clear();
    for (const std::string& d : a.dist) {
      const auto law = parse_distribution(d);
      if (!law) throw Error(ErrorCode::InvalidArgument, "--dist must be exp, det or pareto:SHAPE with SHAPE > 1");
      e.distributions.push_back(*law);
    }
  }
  if (a.replications) {
    if (*a.replications < 2) throw Error(ErrorCode::InvalidArgument, "--replications must be >= 2");
    e.replications = *a.replications;
    e.max_replications = std::max(e.max_replications, e.replications);
  }
  if (a.max_replications) e.max_replications = std::max(*a.max_replications, e.replications);
  if (a.horizon) {
    e.horizon = a.horizon;
    if (!a.warmup) e.warmup = 0.1 * *a.horizon;
  }
  if (a.warmup) e.warmup = a.warmup;
  if (e.horizon && e.warmup && !(*e.horizon > *e.warmup && *e.warmup >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "need horizon > warmup >= 0");
  if (a.seed) e.seed = *a.seed;
  if (a.workers) e.workers = *a.workers;
  if (a.family_count) {
    if (!e.family) throw Error(ErrorCode::InvalidArgument, "--count applies to generated scenario families only");
    e.family->count = *a.family_count;
  }
  if (a.oracle) e.oracle = true;
  if (!a.output.empty()) e.output = a.output;
}

int simulate(const SimulateArgs& a) {
  ScenarioFile s = load_scenario(a.scenario);
  apply_overrides(s, a);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (s.experiment.output != "-") {
    file.open(s.experiment.output, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + s.experiment.output);
    out = &file;
  }
  *out << csv_header();
  ExperimentHooks hooks;
  hooks.on_row = [&](const ResultRow& r) {
    *out << csv_line(r);
    out->flush();
    if (!a.quiet && out != &std::cout)
      std::cerr << r.scenario << " h=" << r.h << ' ' << to_string(r.policy) << ' '
                << format_distribution(r.distribution) << ": " << r.mean_ratio << " +- " << r.ci_half_width << " ["
                << r.status << "]\n";
  };
  const ExperimentReport report = run_experiment(s, hooks);

  if (!a.summary.empty()) {
    std::ofstream sum(a.summary, std::ios::binary | std::ios::trunc);
    if (!sum) throw Error(ErrorCode::InvalidArgument, "cannot write " + a.summary);
    write_summary(sum, report.rows);
  }
  if (report.any_error) {
    std::cerr << "error: at least one cell failed; see the status column\n";
    return kExitError;
  }
  if (!report.all_ci_ok) {
    std::cerr << "confidence-interval criterion not met in at least one cell\n";
    return kExitCiFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fog offloading simulator: index and benchmark policies, exact small-instance oracle"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Run an experiment and write result rows as CSV");
  simulate_cmd->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  simulate_cmd->add_option("--scenario", sim.scenario, "Scenario JSON file or preset name (fig1, fig2, fig3)")->required();
  simulate_cmd->add_option("--policy", sim.policy, "pier, ptr, plpc or all");
  simulate_cmd->add_option("--h", sim.h, "Scaling values")->delimiter(',');
  simulate_cmd->add_option("--dist", sim.dist, "exp, det or pareto:SHAPE")->delimiter(',');
  simulate_cmd->add_option("--replications", sim.replications, "Initial replications per cell");
  simulate_cmd->add_option("--max-replications", sim.max_replications, "Replication budget per cell");
  simulate_cmd->add_option("--horizon", sim.horizon, "Simulated end time");
  simulate_cmd->add_option("--warmup", sim.warmup, "Warm-up time excluded from statistics");
  simulate_cmd->add_option("--seed", sim.seed, "Master seed");
  simulate_cmd->add_option("--workers", sim.workers, "Experiment cells run concurrently");
  simulate_cmd->add_option("--count", sim.family_count, "Number of generated scenarios (family presets)");
  simulate_cmd->add_flag("--oracle", sim.oracle, "Add exact and optimal ratios where the state space fits");
  simulate_cmd->add_option("--output", sim.output, "CSV path, '-' for stdout");
  simulate_cmd->add_option("--summary", sim.summary, "Write win fractions and relative differences here");
  simulate_cmd->add_flag("--quiet", sim.quiet, "No progress lines on stderr");

  std::string preset_name;
  CLI::App* preset_cmd = app.add_subcommand("preset", "Print a preset scenario as JSON");
  preset_cmd->add_option("name", preset_name, "fig1, fig2 or fig3")->required();

  std::uint64_t gen_seed = 1;
  CLI::App* generate_cmd = app.add_subcommand("generate", "Print a random scenario as JSON");
  generate_cmd->add_option("--seed", gen_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate_cmd) return simulate(sim);
    if (*preset_cmd) {
      const auto p = preset(preset_name);
      if (!p) throw Error(ErrorCode::InvalidArgument, "unknown preset " + preset_name);
      std::cout << serialize_scenario(*p);
      return kExitOk;
    }
    if (*generate_cmd) {
      ScenarioFile s;
      s.name = "random-" + std::to_string(gen_seed);
      s.network = generate_random_scenario(gen_seed);
      std::cout << serialize_scenario(s);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitOk;
}
