#include <vector>

#include "doctest.h"
#include "fogsched/kernels.hpp"
#include "fogsched/oracle.hpp"
#include "fogsched/scenario.hpp"
#include "support.hpp"

using namespace fogsched;

namespace {

std::vector<double> ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>((i * 7919) % 1013) * 0.01 - 3.0;
  return v;
}

}  // namespace

TEST_CASE("OpenMP kernels reproduce the serial reference") {
  const Network net(testing::with_scaling(fig1_config(), 2));
  const ExactModel model(net);
  const std::vector<double> v = ramp(model.size());

  SUBCASE("bellman_sweep") {
    std::vector<double> a(model.size());
    std::vector<double> b(model.size());
    const kernels::SweepDelta da = kernels::bellman_sweep(model, 2.5, v, a, Execution::Serial);
    const kernels::SweepDelta db = kernels::bellman_sweep(model, 2.5, v, b, Execution::Parallel);
    CHECK(a == b);
    CHECK(da.min == db.min);
    CHECK(da.max == db.max);
  }
  SUBCASE("normalize_relative") {
    std::vector<double> a = v;
    std::vector<double> b = v;
    kernels::normalize_relative(a, Execution::Serial);
    kernels::normalize_relative(b, Execution::Parallel);
    CHECK(a == b);
    CHECK(a[0] == 0.0);
  }
  SUBCASE("improve_policy") {
    PolicyTable a = tabulate(model, PolicyKind::PTR);
    PolicyTable b = a;
    const std::size_t ca = kernels::improve_policy(model, v, a, 1e-12, Execution::Serial);
    const std::size_t cb = kernels::improve_policy(model, v, b, 1e-12, Execution::Parallel);
    CHECK(ca == cb);
    CHECK(ca > 0);
    CHECK(a.decisions == b.decisions);
    CHECK(a.targets == b.targets);
  }
  SUBCASE("stationary_sweep") {
    const PolicyTable t = tabulate(model, PolicyKind::PIER);
    std::vector<double> pi(model.size(), 1.0 / static_cast<double>(model.size()));
    std::vector<double> a(model.size());
    std::vector<double> b(model.size());
    const double la = kernels::stationary_sweep(model, t, pi, a, Execution::Serial);
    const double lb = kernels::stationary_sweep(model, t, pi, b, Execution::Parallel);
    CHECK(a == b);
    CHECK(la == doctest::Approx(lb).epsilon(1e-12));
    // Uniformisation preserves total mass.
    double total = 0.0;
    for (double x : a) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("a Bellman sweep at the optimum leaves the relative values unchanged") {
  const Network net(testing::two_class_config());
  const ExactModel model(net);
  const SolverResult r = solve_optimal(model);
  SolverOptions o;
  o.method = SolverMethod::ValueIteration;
  const SolverResult vi = solve_optimal(model, o);
  CHECK(vi.optimal_ratio == doctest::Approx(r.optimal_ratio).epsilon(1e-7));
  // Gain of the theta-problem at the optimum is zero: the sweep delta span
  // of a converged value vector collapses around zero.
  std::vector<double> v(model.size(), 0.0);
  std::vector<double> next(model.size());
  kernels::SweepDelta d{};
  for (int i = 0; i < 20000; ++i) {
    d = kernels::bellman_sweep(model, r.optimal_ratio, v, next, Execution::Serial);
    v.swap(next);
    kernels::normalize_relative(v, Execution::Serial);
    if (d.span() < 1e-12) break;
  }
  CHECK(std::abs(d.max) < 1e-9);
  CHECK(std::abs(d.min) < 1e-9);
}
