#pragma once

#include <cstddef>
#include <span>

#include "fogsched/execution.hpp"
#include "fogsched/oracle.hpp"

// Data-parallel sweeps over the enumerated state space. Every kernel has an
// OpenMP path and a serial reference; per-state outputs are bit-identical
// between the two because each state is computed independently.
namespace fogsched::kernels {

struct SweepDelta {
  double min = 0.0;
  double max = 0.0;
  double span() const { return max - min; }
};

// One step of value iteration on the uniformised chain for rate cost
// (cost - theta * reward):
//   out[s] = V[s] + (cost - theta reward)(s)/Lambda
//            + sum_departures rate/Lambda (V[t] - V[s])
//            + sum_j lambda_j/Lambda (min_a V[target_a] - V[s]).
// Returns the range of out - V.
SweepDelta bellman_sweep(const ExactModel& model, double theta, std::span<const double> values,
                         std::span<double> out, Execution execution);

// Subtracts values[0] from every entry.
void normalize_relative(std::span<double> values, Execution execution);

// Points every (state, class) entry at the action with the smallest value of
// its successor. The current action is kept unless another one is lower by
// more than `tolerance`; otherwise ties go to the first action in tie-break
// order. Returns the number of entries that changed.
std::size_t improve_policy(const ExactModel& model, std::span<const double> values, PolicyTable& table,
                           double tolerance, Execution execution);

// One step of the uniformised chain's forward equation, pulled per target
// state. Returns the L1 distance between `pi` and `out`.
double stationary_sweep(const ExactModel& model, const PolicyTable& table, std::span<const double> pi,
                        std::span<double> out, Execution execution);

}  // namespace fogsched::kernels
