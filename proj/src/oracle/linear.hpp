#pragma once

#include <cstddef>
#include <vector>

#include "fogsched/oracle.hpp"

namespace fogsched::detail {

// Stationary distribution of the policy-induced chain. The empty state (which
// every state reaches through completions) is pinned to 1, the remaining
// balance equations are solved, and the result is normalised.
std::vector<double> solve_stationary(const ExactModel& model, const PolicyTable& table, std::size_t direct_limit);

// Bias h of the policy for rate cost (cost - theta * reward) and gain `gain`:
//   Q h = gain - (cost - theta * reward),  h[0] = 0.
std::vector<double> solve_bias(const ExactModel& model, const PolicyTable& table, double theta, double gain,
                               std::size_t direct_limit);

// max_t |(pi Q)_t| for the policy's generator.
double balance_residual(const ExactModel& model, const PolicyTable& table, const std::vector<double>& pi);

}  // namespace fogsched::detail
