#include "fogsched/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fogsched::kernels {

namespace {

double bellman_update(const ExactModel& model, double theta, std::span<const double> v, std::size_t s) {
  const double inv = 1.0 / model.uniformization_rate();
  const double vs = v[s];
  double acc = (model.cost_rate(s) - theta * model.reward_rate(s)) * inv;
  model.for_each_departure(s, [&](std::size_t t, double rate) { acc += rate * inv * (v[t] - vs); });
  for (std::size_t j = 0; j < model.num_classes(); ++j) {
    double best = std::numeric_limits<double>::infinity();
    model.for_each_action(s, j, [&](const Decision&, std::size_t t) { best = std::min(best, v[t]); });
    acc += model.arrival_rate(j) * inv * (best - vs);
  }
  return vs + acc;
}

bool improve_entry(const ExactModel& model, std::span<const double> v, PolicyTable& table, std::size_t s,
                   std::size_t j, double tolerance) {
  const std::size_t e = s * table.num_classes + j;
  const double current = v[table.targets[e]];
  Decision best_d = table.decisions[e];
  std::size_t best_t = table.targets[e];
  double best = std::numeric_limits<double>::infinity();
  model.for_each_action(s, j, [&](const Decision& d, std::size_t t) {
    if (v[t] < best) {
      best = v[t];
      best_d = d;
      best_t = t;
    }
  });
  if (best < current - tolerance && !(best_d == table.decisions[e])) {
    table.decisions[e] = best_d;
    table.targets[e] = static_cast<std::uint32_t>(best_t);
    return true;
  }
  return false;
}

double stationary_update(const ExactModel& model, const PolicyTable& table, std::span<const double> pi,
                         std::size_t t) {
  const double inv = 1.0 / model.uniformization_rate();
  double outflow = model.departure_rate(t);
  for (std::size_t j = 0; j < model.num_classes(); ++j)
    if (table.target(t, j) != t) outflow += model.arrival_rate(j);
  double acc = pi[t] * (1.0 - outflow * inv);
  model.for_each_departure_into(t, [&](std::size_t s, double rate) { acc += pi[s] * rate * inv; });
  model.for_each_admission_into(t, [&](std::size_t s, std::size_t j) {
    if (table.target(s, j) == t) acc += pi[s] * model.arrival_rate(j) * inv;
  });
  return acc;
}

}  // namespace

SweepDelta bellman_sweep(const ExactModel& model, double theta, std::span<const double> values,
                         std::span<double> out, Execution execution) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(model.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  if (execution == Execution::Serial) {
    for (std::ptrdiff_t s = 0; s < n; ++s) {
      out[s] = bellman_update(model, theta, values, static_cast<std::size_t>(s));
      lo = std::min(lo, out[s] - values[s]);
      hi = std::max(hi, out[s] - values[s]);
    }
    return {lo, hi};
  }
#pragma omp parallel for schedule(static) reduction(min : lo) reduction(max : hi)
  for (std::ptrdiff_t s = 0; s < n; ++s) {
    out[s] = bellman_update(model, theta, values, static_cast<std::size_t>(s));
    lo = std::min(lo, out[s] - values[s]);
    hi = std::max(hi, out[s] - values[s]);
  }
  return {lo, hi};
}

void normalize_relative(std::span<double> values, Execution execution) {
  const double ref = values[0];
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(values.size());
  if (execution == Execution::Serial) {
    for (std::ptrdiff_t s = 0; s < n; ++s) values[s] -= ref;
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t s = 0; s < n; ++s) values[s] -= ref;
}

std::size_t improve_policy(const ExactModel& model, std::span<const double> values, PolicyTable& table,
                           double tolerance, Execution execution) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(model.size());
  const std::size_t J = model.num_classes();
  std::size_t changed = 0;
  if (execution == Execution::Serial) {
    for (std::ptrdiff_t s = 0; s < n; ++s)
      for (std::size_t j = 0; j < J; ++j)
        changed += improve_entry(model, values, table, static_cast<std::size_t>(s), j, tolerance);
    return changed;
  }
#pragma omp parallel for schedule(static) reduction(+ : changed)
  for (std::ptrdiff_t s = 0; s < n; ++s)
    for (std::size_t j = 0; j < J; ++j)
      changed += improve_entry(model, values, table, static_cast<std::size_t>(s), j, tolerance);
  return changed;
}

double stationary_sweep(const ExactModel& model, const PolicyTable& table, std::span<const double> pi,
                        std::span<double> out, Execution execution) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(model.size());
  double diff = 0.0;
  if (execution == Execution::Serial) {
    for (std::ptrdiff_t t = 0; t < n; ++t) {
      out[t] = stationary_update(model, table, pi, static_cast<std::size_t>(t));
      diff += std::abs(out[t] - pi[t]);
    }
    return diff;
  }
#pragma omp parallel for schedule(static) reduction(+ : diff)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    out[t] = stationary_update(model, table, pi, static_cast<std::size_t>(t));
    diff += std::abs(out[t] - pi[t]);
  }
  return diff;
}

}  // namespace fogsched::kernels
