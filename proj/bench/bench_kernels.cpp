// Serial reference vs OpenMP paths of the state-space kernels and of the
// replication runner. Argument 0 is serial, 1 is parallel.

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "fogsched/kernels.hpp"
#include "fogsched/oracle.hpp"
#include "fogsched/policies.hpp"
#include "fogsched/scenario.hpp"
#include "fogsched/simengine.hpp"

using namespace fogsched;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

// fig1 preset network at h = 3: 1e5 states.
struct Fixture {
  Network net;
  ExactModel model;
  PolicyTable table;
  std::vector<double> values;

  Fixture() : net(scaled(3)), model(net), table(tabulate(model, PolicyKind::PIER)), values(model.size()) {
    for (std::size_t s = 0; s < values.size(); ++s) values[s] = static_cast<double>(s % 97) * 0.01;
  }

  static NetworkConfig scaled(int h) {
    NetworkConfig c = fig1_config();
    c.scaling = h;
    return c;
  }
};

const Fixture& fixture() {
  static const auto f = std::make_unique<Fixture>();
  return *f;
}

void BM_BellmanSweep(benchmark::State& state) {
  const Fixture& f = fixture();
  std::vector<double> out(f.values.size());
  for (auto _ : state) {
    auto d = kernels::bellman_sweep(f.model, 7.5, f.values, out, mode(state));
    benchmark::DoNotOptimize(d);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.model.size()));
}

void BM_ImprovePolicy(benchmark::State& state) {
  const Fixture& f = fixture();
  for (auto _ : state) {
    PolicyTable t = f.table;
    benchmark::DoNotOptimize(kernels::improve_policy(f.model, f.values, t, 1e-12, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.model.size()));
}

void BM_StationarySweep(benchmark::State& state) {
  const Fixture& f = fixture();
  std::vector<double> pi(f.model.size(), 1.0 / static_cast<double>(f.model.size()));
  std::vector<double> out(pi.size());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::stationary_sweep(f.model, f.table, pi, out, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.model.size()));
}

void BM_Replications(benchmark::State& state) {
  const Network net(fig1_config());
  const DecisionRule rule = make_rule(PolicyKind::PIER, net);
  SimulationOptions o;
  o.horizon = 2000.0;
  o.warmup = 200.0;
  o.seed = 5;
  for (auto _ : state) benchmark::DoNotOptimize(run_replications(net, rule, o, 0, 8, mode(state)));
}

}  // namespace

BENCHMARK(BM_BellmanSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ImprovePolicy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StationarySweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Replications)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
