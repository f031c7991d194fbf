#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fogsched/execution.hpp"
#include "fogsched/model.hpp"
#include "fogsched/policies.hpp"
#include "fogsched/rng.hpp"

namespace fogsched {

struct DurationDistribution {
  DurationFamily family = DurationFamily::Exponential;
  double mean = 1.0;
  double shape = 0.0;  // Pareto tail index, > 1
};

// Exponential: -mean ln U. Deterministic: mean. Pareto: x_m U^(-1/shape) with
// x_m = mean (shape - 1) / shape.
double sample_duration(const DurationDistribution& dist, Rng& rng);

// Instantaneous integrands of the long-run averages: completion rate of the
// tasks in service, and total power draw (operational + idle + cloud).
double throughput_rate(const NetworkState& state, const Network& net);
double power_rate(const NetworkState& state, const Network& net);

struct Metrics {
  double horizon = 0.0;  // observed time after warm-up
  double throughput_integral = 0.0;
  double power_integral = 0.0;
  double task_integral = 0.0;  // integral of the number of tasks in service

  // Per-class counts over the observation window. For every class:
  //   in_flight_start + arrivals = edge + cloud completions + blocked + in_flight_end
  std::vector<std::int64_t> arrivals;
  std::vector<std::int64_t> blocked;
  std::vector<std::int64_t> edge_completions;
  std::vector<std::int64_t> cloud_completions;
  std::vector<std::int64_t> in_flight_start;
  std::vector<std::int64_t> in_flight_end;

  std::int64_t total_arrivals() const;
  std::int64_t total_blocked() const;
  std::int64_t total_completions() const;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

// Time-weighted accumulation of the integrands over a piecewise-constant state.
class Integrator {
 public:
  explicit Integrator(const Network& net) : net_(net) {}
  void accumulate(const NetworkState& state, double dt, Metrics& m) const;

 private:
  const Network& net_;
};

struct SimulationOptions {
  double horizon = 0.0;  // simulated end time
  double warmup = 0.0;   // statistics cover [warmup, horizon]
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;  // replication index
  bool check_invariants = true;
};

struct RunLengths {
  double horizon;
  double warmup;
};

// 10^4 mean service times, 10% of it as warm-up.
RunLengths default_run_lengths(const Network& net);

Metrics run_simulation(const Network& net, const DecisionRule& rule, const SimulationOptions& options);

// Power integral over throughput integral; DegenerateRun if nothing was served.
double energy_efficiency(const Metrics& m);

// Completions per unit of observed time.
double throughput_count_rate(const Metrics& m);

double blocked_fraction(const Metrics& m);

struct ReplicationOptions {
  std::size_t replications = 30;
  // Replications are added (doubling) while the half-width exceeds
  // ci_target * mean, up to this budget.
  std::size_t max_replications = 240;
  double horizon = 0.0;
  double warmup = 0.0;
  std::uint64_t seed = 1;
  double ci_target = 0.05;
  Execution execution = Execution::Parallel;
  bool check_invariants = true;
};

struct ReplicationSummary {
  std::vector<double> ratios;
  double mean = 0.0;
  double half_width = 0.0;
  bool meets_ci = false;
  double blocked_fraction = 0.0;
  double throughput_rate = 0.0;
};

// Runs replications [first, first + count) with streams keyed by replication
// index. The parallel path distributes replications over OpenMP threads.
std::vector<Metrics> run_replications(const Network& net, const DecisionRule& rule, const SimulationOptions& base,
                                      std::size_t first, std::size_t count, Execution execution);

ReplicationSummary summarize(const std::vector<Metrics>& runs, double ci_target);

ReplicationSummary replicate(const Network& net, const DecisionRule& rule, const ReplicationOptions& options);

}  // namespace fogsched
