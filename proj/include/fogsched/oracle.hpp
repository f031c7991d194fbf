#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "fogsched/decision.hpp"
#include "fogsched/execution.hpp"
#include "fogsched/model.hpp"
#include "fogsched/policies.hpp"

namespace fogsched {

inline constexpr std::size_t kDefaultStateCap = 5'000'000;

// Actions open to the optimiser. AdmitWhenFeasible drops Block whenever some
// destination can take the task, matching the heuristics' own action set.
enum class ActionSet { All, AdmitWhenFeasible };

// Enumerated continuous-time model of a small instance with exponential
// durations. The constrained state space factorises over destination areas
// (capacity and channel constraints never couple two areas), so each area's
// feasible local configurations are listed once and a global state is the
// mixed-radix number formed by its areas' local indices. The empty state is
// index 0.
class ExactModel {
 public:
  explicit ExactModel(const Network& net, std::size_t max_states = kDefaultStateCap,
                      ActionSet actions = ActionSet::All);

  const Network& network() const { return net_; }
  std::size_t size() const { return size_; }
  std::size_t num_classes() const { return net_.num_classes(); }
  ActionSet actions() const { return actions_; }

  NetworkState state(std::size_t s) const;
  // Throws InvalidArgument for states outside the enumerated space.
  std::size_t index_of(const NetworkState& state) const;

  // Integrands of the throughput and power averages, evaluated with the
  // simulator's functions.
  double reward_rate(std::size_t s) const { return reward_[s]; }
  double cost_rate(std::size_t s) const { return cost_[s]; }
  std::span<const double> reward_rates() const { return reward_; }
  std::span<const double> cost_rates() const { return cost_; }

  double arrival_rate(std::size_t j) const { return net_.arrival_rate(j); }
  double departure_rate(std::size_t s) const;
  // Max over states of total departure rate plus all arrival rates.
  double uniformization_rate() const { return uniformization_; }

  // Calls f(target, rate) for every completion transition out of s.
  template <typename F>
  void for_each_departure(std::size_t s, F&& f) const;

  // Calls f(source, rate) for every completion transition into t.
  template <typename F>
  void for_each_departure_into(std::size_t t, F&& f) const;

  // Calls f(source, class) for every state that reaches t by admitting one
  // task of `class` (the transition is only taken if the policy says so).
  template <typename F>
  void for_each_admission_into(std::size_t t, F&& f) const;

  // State after admitting a j-task per `d`; s itself for Block; nullopt when
  // the decision is infeasible in s.
  std::optional<std::size_t> target(std::size_t s, std::size_t j, const Decision& d) const;

  // Feasible decisions for a j-task in s in tie-break order: edge groups by
  // index, the cloud (via its routed area), then Block (subject to actions()).
  void feasible_actions(std::size_t s, std::size_t j, std::vector<Decision>& out) const;

  // Calls f(decision, target) for each feasible decision, in the same order.
  template <typename F>
  void for_each_action(std::size_t s, std::size_t j, F&& f) const;

 private:
  struct Cohort {
    std::size_t cls;
    bool cloud;
    std::size_t group;  // edge cohorts only
    double rate;
  };
  struct AreaSpace {
    std::vector<Cohort> cohorts;
    std::size_t local_count = 0;
    std::size_t stride = 1;
    std::vector<int> counts;               // local_count x cohorts
    std::vector<std::int32_t> plus;        // local index after one more task, -1 if infeasible
    std::vector<std::int32_t> minus;       // local index after one fewer task, -1 if none
    std::vector<double> departure;         // total completion rate per local state
    std::vector<std::uint8_t> free_channel;  // local_count x classes
    std::vector<std::int32_t> edge_cohort;   // classes x groups, -1 if group not here or inaccessible
    std::vector<std::int32_t> cloud_cohort;  // per class, -1 if class may not use the cloud
    std::vector<std::uint64_t> radix;        // mixed-radix weights of the cohort counts
    std::unordered_map<std::uint64_t, std::int32_t> by_key;
    double max_departure = 0.0;
  };

  std::size_t local_index(std::size_t s, const AreaSpace& a) const { return (s / a.stride) % a.local_count; }

  const Network& net_;
  ActionSet actions_;
  std::vector<AreaSpace> areas_;
  std::size_t size_ = 0;
  double uniformization_ = 0.0;
  std::vector<double> reward_;
  std::vector<double> cost_;
};

// Enumerates the constrained state space as explicit states; for tests and
// small instances.
std::vector<NetworkState> enumerate_states(const Network& net, std::size_t max_states = kDefaultStateCap);

// Decisions and successor states of a stationary policy, one entry per
// (state, class), class-minor.
struct PolicyTable {
  std::size_t num_classes = 0;
  std::vector<Decision> decisions;
  std::vector<std::uint32_t> targets;  // successor state; the state itself for Block

  const Decision& decision(std::size_t s, std::size_t j) const { return decisions[s * num_classes + j]; }
  std::uint32_t target(std::size_t s, std::size_t j) const { return targets[s * num_classes + j]; }
};

PolicyTable tabulate(const ExactModel& model, PolicyKind kind);
PolicyTable tabulate(const ExactModel& model, const DecisionRule& rule);

// Rule that looks the current state up in the table. The model and table must
// outlive the rule.
DecisionRule rule_from_table(const ExactModel& model, const PolicyTable& table);

struct PolicyEvaluation {
  double ratio = 0.0;        // mean cost / mean reward
  double mean_reward = 0.0;  // long-run throughput
  double mean_cost = 0.0;    // long-run power
  double residual = 0.0;     // max |pi Q| after the solve
  std::vector<double> stationary;
};

// Stationary distribution by a sparse linear solve (direct for small models,
// preconditioned BiCGSTAB above `direct_limit` states).
PolicyEvaluation evaluate_policy_exact(const ExactModel& model, const PolicyTable& table,
                                       std::size_t direct_limit = 60'000);
double evaluate_policy_exact(const ExactModel& model, PolicyKind kind);

// Stationary distribution by power iteration of the uniformised chain; the
// independent route used to cross-check the linear solve.
std::vector<double> stationary_by_iteration(const ExactModel& model, const PolicyTable& table, double tolerance,
                                            std::size_t max_sweeps, Execution execution);

enum class SolverMethod { PolicyIteration, ValueIteration };

struct SolverOptions {
  double tolerance = 1e-10;
  SolverMethod method = SolverMethod::PolicyIteration;
  std::size_t max_outer_iterations = 200;
  std::size_t max_sweeps = 2'000'000;  // value iteration only, per parameter value
  Execution execution = Execution::Parallel;
  PolicyKind initial_policy = PolicyKind::PIER;
};

struct SolverResult {
  double optimal_ratio = 0.0;
  PolicyTable table;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::vector<double> ratio_history;  // ratio of each successive policy, starting with the initial one
};

// Minimises long-run power over long-run throughput. The ratio objective is
// parametrised: for a parameter theta the average-cost problem with rate cost
// (power - theta * throughput) is solved on the uniformised chain, and theta
// moves to the ratio achieved by the minimising policy until it stops
// decreasing. The inner problem is solved either by policy iteration (exact
// sparse solves) or by relative value iteration.
SolverResult solve_optimal(const ExactModel& model, const SolverOptions& options = {});

// (policy_ratio - optimal_ratio) / optimal_ratio
double normalized_deviation(double policy_ratio, double optimal_ratio);

// Erlang B by the recursion B(0) = 1, B(n) = a B(n-1) / (n + a B(n-1)).
double erlang_b(int servers, double offered_load);

// ---- implementation of the transition iterators ----

template <typename F>
void ExactModel::for_each_departure(std::size_t s, F&& f) const {
  for (const AreaSpace& a : areas_) {
    const std::size_t local = local_index(s, a);
    const std::size_t nc = a.cohorts.size();
    for (std::size_t c = 0; c < nc; ++c) {
      const int n = a.counts[local * nc + c];
      if (n == 0) continue;
      const std::size_t next = static_cast<std::size_t>(a.minus[local * nc + c]);
      f(s - local * a.stride + next * a.stride, n * a.cohorts[c].rate);
    }
  }
}

template <typename F>
void ExactModel::for_each_departure_into(std::size_t t, F&& f) const {
  for (const AreaSpace& a : areas_) {
    const std::size_t local = local_index(t, a);
    const std::size_t nc = a.cohorts.size();
    for (std::size_t c = 0; c < nc; ++c) {
      const std::int32_t prev = a.plus[local * nc + c];
      if (prev < 0) continue;
      const int n = a.counts[local * nc + c] + 1;
      f(t - local * a.stride + static_cast<std::size_t>(prev) * a.stride, n * a.cohorts[c].rate);
    }
  }
}

template <typename F>
void ExactModel::for_each_action(std::size_t s, std::size_t j, F&& f) const {
  const std::size_t K = net_.num_groups();
  bool admitted = false;
  for (std::size_t k = 0; k < K; ++k) {
    const AreaSpace& a = areas_[net_.area_of(k)];
    const std::int32_t c = a.edge_cohort[j * K + k];
    if (c < 0) continue;
    const std::size_t local = local_index(s, a);
    const std::int32_t next = a.plus[local * a.cohorts.size() + static_cast<std::size_t>(c)];
    if (next >= 0) {
      f(Decision::edge(k), s - local * a.stride + static_cast<std::size_t>(next) * a.stride);
      admitted = true;
    }
  }
  if (net_.cloud_accessible(j)) {
    for (std::size_t l : net_.areas_by_rate(j)) {
      const AreaSpace& a = areas_[l];
      const std::size_t local = local_index(s, a);
      if (!a.free_channel[local * net_.num_classes() + j]) continue;
      const std::size_t c = static_cast<std::size_t>(a.cloud_cohort[j]);
      const std::size_t next = static_cast<std::size_t>(a.plus[local * a.cohorts.size() + c]);
      f(Decision::cloud(l), s - local * a.stride + next * a.stride);
      admitted = true;
      break;
    }
  }
  if (!admitted || actions_ == ActionSet::All) f(Decision::block(), s);
}

template <typename F>
void ExactModel::for_each_admission_into(std::size_t t, F&& f) const {
  for (const AreaSpace& a : areas_) {
    const std::size_t local = local_index(t, a);
    const std::size_t nc = a.cohorts.size();
    for (std::size_t c = 0; c < nc; ++c) {
      if (a.counts[local * nc + c] == 0) continue;
      const std::size_t prev = static_cast<std::size_t>(a.minus[local * nc + c]);
      f(t - local * a.stride + prev * a.stride, a.cohorts[c].cls);
    }
  }
}

}  // namespace fogsched
