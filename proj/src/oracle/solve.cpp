#include <algorithm>
#include <cmath>
#include <numeric>

#include "fogsched/error.hpp"
#include "fogsched/kernels.hpp"
#include "fogsched/oracle.hpp"
#include "linear.hpp"

namespace fogsched {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool blocks_everything_when_empty(const ExactModel& model, const PolicyTable& table) {
  for (std::size_t j = 0; j < model.num_classes(); ++j)
    if (!table.decision(0, j).is_block()) return false;
  return true;
}

// Policy iteration on the parametrised problem: with theta equal to the
// current policy's ratio its gain is zero, so one improvement step against
// the bias either lowers the ratio or certifies optimality.
SolverResult solve_by_policy_iteration(const ExactModel& model, const SolverOptions& options) {
  SolverResult r;
  r.table = tabulate(model, options.initial_policy);
  PolicyEvaluation eval = evaluate_policy_exact(model, r.table);
  r.ratio_history.push_back(eval.ratio);
  for (r.iterations = 1; r.iterations <= options.max_outer_iterations; ++r.iterations) {
    const double theta = eval.ratio;
    const double gain = eval.mean_cost - theta * eval.mean_reward;
    const std::vector<double> bias = detail::solve_bias(model, r.table, theta, gain, 60'000);
    PolicyTable candidate = r.table;
    const double tol = 1e-10 * (1.0 + max_abs(bias));
    if (kernels::improve_policy(model, bias, candidate, tol, options.execution) == 0) {
      r.optimal_ratio = eval.ratio;
      r.residual = eval.residual;
      return r;
    }
    // Blocking every class in the empty state ties at gain zero but has no
    // throughput, so the ratio is undefined; keep the incumbent there.
    if (blocks_everything_when_empty(model, candidate)) {
      for (std::size_t j = 0; j < model.num_classes(); ++j) {
        candidate.decisions[j] = r.table.decisions[j];
        candidate.targets[j] = r.table.targets[j];
      }
      if (candidate.decisions == r.table.decisions) {
        r.optimal_ratio = eval.ratio;
        r.residual = eval.residual;
        return r;
      }
    }
    PolicyEvaluation next = evaluate_policy_exact(model, candidate);
    r.ratio_history.push_back(next.ratio);
    // An improvement confined to states that are transient under the new
    // policy leaves the ratio unchanged but raises the bias; keep going, as
    // plain policy iteration does. A rise beyond rounding means the linear
    // solves can no longer separate the candidates.
    if (next.ratio > theta + 1e-12 * std::max(1.0, std::abs(theta))) {
      r.optimal_ratio = eval.ratio;
      r.residual = next.ratio - theta;
      return r;
    }
    r.table = std::move(candidate);
    eval = std::move(next);
  }
  throw Error(ErrorCode::NonConvergence, "policy iteration exceeded the iteration cap");
}

// Relative value iteration for the average-cost problem at fixed theta,
// warm-started from `values`. Stops when the span of successive differences,
// scaled to a gain, drops below `tolerance`.
void relative_value_iteration(const ExactModel& model, double theta, std::vector<double>& values,
                              double tolerance, std::size_t max_sweeps, Execution execution) {
  std::vector<double> next(values.size());
  const double lambda = model.uniformization_rate();
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    const kernels::SweepDelta delta = kernels::bellman_sweep(model, theta, values, next, execution);
    kernels::normalize_relative(next, execution);
    values.swap(next);
    if (delta.span() * lambda < tolerance) return;
  }
  throw Error(ErrorCode::NonConvergence, "relative value iteration exceeded the sweep cap");
}

SolverResult solve_by_value_iteration(const ExactModel& model, const SolverOptions& options) {
  SolverResult r;
  r.table = tabulate(model, options.initial_policy);
  PolicyEvaluation eval = evaluate_policy_exact(model, r.table);
  r.ratio_history.push_back(eval.ratio);
  std::vector<double> values(model.size(), 0.0);
  double scale = 0.0;
  for (std::size_t s = 0; s < model.size(); ++s) scale = std::max(scale, model.cost_rate(s) + model.reward_rate(s));
  for (r.iterations = 1; r.iterations <= options.max_outer_iterations; ++r.iterations) {
    const double theta = eval.ratio;
    const double gain_tol = options.tolerance * std::max(1.0, scale * std::max(1.0, theta));
    relative_value_iteration(model, theta, values, gain_tol, options.max_sweeps, options.execution);
    PolicyTable candidate = r.table;
    // Values are only accurate to the stopping tolerance, so near-ties keep
    // the incumbent action. A candidate without throughput (blocking
    // everything ties at gain zero) counts as no progress.
    kernels::improve_policy(model, values, candidate, 1e-9 * (1.0 + max_abs(values)), options.execution);
    double step = 0.0;
    PolicyEvaluation next;
    try {
      next = evaluate_policy_exact(model, candidate);
      r.ratio_history.push_back(next.ratio);
      step = theta - next.ratio;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateRun) throw;
    }
    if (step > 0.0) {
      r.table = std::move(candidate);
      eval = std::move(next);
    }
    if (step <= options.tolerance * std::max(1.0, std::abs(theta))) {
      r.optimal_ratio = eval.ratio;
      r.residual = std::abs(step);
      return r;
    }
  }
  throw Error(ErrorCode::NonConvergence, "parametric iteration exceeded the iteration cap");
}

}  // namespace

SolverResult solve_optimal(const ExactModel& model, const SolverOptions& options) {
  if (!(options.tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be > 0");
  return options.method == SolverMethod::PolicyIteration ? solve_by_policy_iteration(model, options)
                                                         : solve_by_value_iteration(model, options);
}

double normalized_deviation(double policy_ratio, double optimal_ratio) {
  if (!(optimal_ratio > 0.0)) throw Error(ErrorCode::InvalidArgument, "optimal ratio must be > 0");
  return (policy_ratio - optimal_ratio) / optimal_ratio;
}

double erlang_b(int servers, double offered_load) {
  if (servers < 0 || !(offered_load >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need servers >= 0 and load >= 0");
  double b = 1.0;
  for (int n = 1; n <= servers; ++n) b = offered_load * b / (n + offered_load * b);
  return b;
}

}  // namespace fogsched
