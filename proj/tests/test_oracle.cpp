#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "dense_chain.hpp"
#include "doctest.h"
#include "fogsched/error.hpp"
#include "fogsched/oracle.hpp"
#include "fogsched/random_scenario.hpp"
#include "fogsched/scenario.hpp"
#include "fogsched/simengine.hpp"
#include "fogsched/stats.hpp"
#include "support.hpp"

using namespace fogsched;

namespace {

// Two single-group areas with unit capacity and channels, idle power and a
// reachable cloud: 3 x 3 states and up to four actions per state.
NetworkConfig brute_force_config() {
  NetworkConfig c;
  c.classes.push_back({1.5, 8.0, {1, 1}, true});
  c.groups.push_back({1, 1.0, 2.0, 0});
  c.groups.push_back({1, 0.5, 0.1, 0});
  c.areas.push_back({{0}, {1}, {0.6}});
  c.areas.push_back({{1}, {1}, {1.2}});
  c.cloud_delay = 1.0;
  return validate_config(c);
}

// Minimum ratio over every deterministic stationary policy.
double brute_force_optimum(const ExactModel& model) {
  const std::size_t n = model.size();
  std::vector<std::vector<std::pair<Decision, std::size_t>>> options(n);
  for (std::size_t s = 0; s < n; ++s)
    model.for_each_action(s, 0, [&](const Decision& d, std::size_t t) { options[s].push_back({d, t}); });
  PolicyTable table;
  table.num_classes = 1;
  table.decisions.resize(n);
  table.targets.resize(n);
  std::vector<std::size_t> choice(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t s = 0; s < n; ++s) {
      table.decisions[s] = options[s][choice[s]].first;
      table.targets[s] = static_cast<std::uint32_t>(options[s][choice[s]].second);
    }
    const double r = testing::dense_ratio(model, table);
    if (r >= 0.0) best = std::min(best, r);
    std::size_t s = 0;
    while (s < n && ++choice[s] == options[s].size()) choice[s++] = 0;
    if (s == n) break;
  }
  return best;
}

RandomScenarioRanges small_ranges() {
  RandomScenarioRanges r;
  r.classes = 2;
  r.groups = 3;
  r.areas = 2;
  r.channel_choices = {1, 2};
  r.capacity_choices = {1, 2, 3};
  return r;
}

}  // namespace

TEST_CASE("enumerate_states") {
  SUBCASE("one group, unit capacity and channel, cloud reachable") {
    const Network net(testing::single_group(1, 1, 1.0, 1.0, 3.0, true));
    const auto states = enumerate_states(net);
    REQUIRE(states.size() == 3);
    std::set<std::pair<int, int>> seen;
    for (const NetworkState& s : states) seen.insert({s.edge(0, 0), s.cloud(0, 0)});
    CHECK(seen == std::set<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}});
    CHECK(states[0].total_tasks() == 0);
  }
  SUBCASE("fig1 at h = 1") { CHECK(enumerate_states(Network(fig1_config())).size() == 243); }
  SUBCASE("no channels") {
    const Network net(testing::single_group(2, 0, 1.0, 1.0, 3.0, true));
    CHECK(enumerate_states(net).size() == 1);
  }
  SUBCASE("state cap") {
    const Network net(testing::with_scaling(fig1_config(), 2));
    CHECK_THROWS_AS(ExactModel(net, 1000), Error);
  }
  SUBCASE("non-exponential durations are rejected") {
    const Network net(testing::with_durations(fig1_config(), {DurationFamily::Deterministic, 0.0}));
    CHECK_THROWS_AS(ExactModel{net}, Error);
  }
}

TEST_CASE("enumeration equals a filtered brute-force product") {
  const Network net(testing::two_class_config());
  const ExactModel model(net);
  // Brute force over the product of per-cohort bounds.
  std::size_t count = 0;
  const int cap = 3;
  std::vector<int> v(net.num_classes() * (net.num_groups() + net.num_areas()), 0);
  while (true) {
    NetworkState s(net);
    bool ok = true;
    std::size_t i = 0;
    for (std::size_t j = 0; j < net.num_classes(); ++j) {
      for (std::size_t k = 0; k < net.num_groups(); ++k, ++i) {
        if (v[i] > 0 && !net.accessible(j, k)) ok = false;
        s.set_edge(j, k, v[i]);
      }
      for (std::size_t l = 0; l < net.num_areas(); ++l, ++i) {
        if (v[i] > 0 && !net.cloud_accessible(j)) ok = false;
        s.set_cloud(j, l, v[i]);
      }
    }
    if (ok && satisfies_invariants(s, net)) {
      ++count;
      CHECK(model.state(model.index_of(s)) == s);
    }
    std::size_t d = 0;
    while (d < v.size() && ++v[d] > cap) v[d++] = 0;
    if (d == v.size()) break;
  }
  CHECK(model.size() == count);
}

TEST_CASE("reward and cost rates equal the simulator integrands") {
  const Network net(testing::two_class_config());
  const ExactModel model(net);
  for (std::size_t s = 0; s < model.size(); ++s) {
    const NetworkState st = model.state(s);
    CHECK(model.reward_rate(s) == throughput_rate(st, net));
    CHECK(model.cost_rate(s) == power_rate(st, net));
  }
}

TEST_CASE("transition structure") {
  const Network net(testing::two_class_config());
  const ExactModel model(net);
  double max_out = 0.0;
  for (std::size_t s = 0; s < model.size(); ++s) {
    const NetworkState st = model.state(s);
    double rate = 0.0;
    model.for_each_departure(s, [&](std::size_t t, double r) {
      CHECK(r > 0.0);
      CHECK(model.state(t).total_tasks() == st.total_tasks() - 1);
      rate += r;
    });
    CHECK(rate == doctest::Approx(model.departure_rate(s)));
    CHECK(rate == doctest::Approx(throughput_rate(st, net)));
    max_out = std::max(max_out, rate);
    for (std::size_t j = 0; j < net.num_classes(); ++j) {
      std::vector<Decision> actions;
      model.feasible_actions(s, j, actions);
      const FeasibleSet f = feasible_destinations(st, net, j);
      CHECK(actions.size() == f.groups.size() + (f.cloud_areas.empty() ? 0 : 1) + 1);
      CHECK(actions.back() == Decision::block());
      for (const Decision& d : actions) {
        const auto t = model.target(s, j, d);
        REQUIRE(t.has_value());
        NetworkState next = st;
        admit(next, net, j, d);
        CHECK(model.state(*t) == next);
      }
    }
  }
  CHECK(model.uniformization_rate() >= max_out + net.total_arrival_rate() - 1e-12);
}

TEST_CASE("admit-when-feasible action set drops Block only where something fits") {
  const Network net(testing::two_class_config());
  const ExactModel model(net, kDefaultStateCap, ActionSet::AdmitWhenFeasible);
  for (std::size_t s = 0; s < model.size(); ++s)
    for (std::size_t j = 0; j < net.num_classes(); ++j) {
      std::vector<Decision> actions;
      model.feasible_actions(s, j, actions);
      const bool has_block = std::find(actions.begin(), actions.end(), Decision::block()) != actions.end();
      CHECK(has_block == feasible_destinations(model.state(s), net, j).empty());
    }
}

TEST_CASE("evaluate_policy_exact") {
  SUBCASE("two-state birth-death chain") {
    const Network net(testing::single_group(1, 1, 1.0, 1.0, 3.0));
    const ExactModel model(net);
    const PolicyEvaluation e = evaluate_policy_exact(model, tabulate(model, PolicyKind::PIER));
    CHECK(e.stationary[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.ratio == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.residual < 1e-12);
  }
  SUBCASE("zero throughput") {
    const Network net(testing::single_group(1, 0, 1.0, 1.0, 3.0));
    const ExactModel model(net);
    CHECK_THROWS_AS(evaluate_policy_exact(model, PolicyKind::PIER), Error);
  }
  SUBCASE("agrees with a dense solve") {
    for (const NetworkConfig& c : {testing::two_class_config(), brute_force_config(), fig1_config()}) {
      const Network net(c);
      const ExactModel model(net);
      for (PolicyKind p : {PolicyKind::PIER, PolicyKind::PTR, PolicyKind::PLPC}) {
        const PolicyTable t = tabulate(model, p);
        CHECK(evaluate_policy_exact(model, t).ratio == doctest::Approx(testing::dense_ratio(model, t)).epsilon(1e-11));
      }
    }
  }
  SUBCASE("iterative solve path agrees with the direct one") {
    const Network net(testing::with_scaling(testing::two_class_config(), 2));
    const ExactModel model(net);
    const PolicyTable t = tabulate(model, PolicyKind::PIER);
    const PolicyEvaluation direct = evaluate_policy_exact(model, t);
    const PolicyEvaluation iterative = evaluate_policy_exact(model, t, 1);
    CHECK(iterative.ratio == doctest::Approx(direct.ratio).epsilon(1e-9));
    CHECK(iterative.residual < 1e-8);
  }
  SUBCASE("power iteration agrees with the linear solve") {
    const Network net(testing::two_class_config());
    const ExactModel model(net);
    const PolicyTable t = tabulate(model, PolicyKind::PTR);
    const PolicyEvaluation e = evaluate_policy_exact(model, t);
    const std::vector<double> pi = stationary_by_iteration(model, t, 1e-13, 1'000'000, Execution::Serial);
    for (std::size_t s = 0; s < model.size(); ++s) CHECK(pi[s] == doctest::Approx(e.stationary[s]).epsilon(1e-8));
  }
}

TEST_CASE("Erlang B") {
  CHECK(erlang_b(0, 1.3) == 1.0);
  CHECK(erlang_b(1, 1.0) == 0.5);
  CHECK(erlang_b(2, 1.0) == doctest::Approx(0.2));
  CHECK(erlang_b(3, 0.0) == 0.0);
  // Closed form a^c/c! / sum_n a^n/n! for c = 5, a = 2.
  double sum = 0.0;
  double term = 1.0;
  for (int n = 0; n <= 5; ++n) {
    if (n > 0) term *= 2.0 / n;
    sum += term;
  }
  CHECK(erlang_b(5, 2.0) == doctest::Approx(term / sum).epsilon(1e-14));
}

TEST_CASE("exact loss-system blocking reproduces Erlang B") {
  for (int c : {1, 2, 5})
    for (double a : {0.5, 1.0, 2.0}) {
      const Network net(testing::single_group(c, c, a, 1.0));
      const ExactModel model(net);
      const PolicyEvaluation e = evaluate_policy_exact(model, tabulate(model, PolicyKind::PIER));
      NetworkState full(net);
      full.set_edge(0, 0, c);
      CHECK(std::abs(e.stationary[model.index_of(full)] - erlang_b(c, a)) < 1e-10);
    }
}

TEST_CASE("normalized_deviation") {
  CHECK(normalized_deviation(2.5, 2.5) == 0.0);
  CHECK(normalized_deviation(2.2, 2.0) == doctest::Approx(0.1));
  CHECK_THROWS_AS(normalized_deviation(1.0, 0.0), Error);
}

TEST_CASE("solve_optimal: single loss group always admits") {
  const Network net(testing::single_group(1, 1, 1.0, 1.0, 3.0));
  const ExactModel model(net);
  const SolverResult r = solve_optimal(model);
  CHECK(r.optimal_ratio == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.table.decision(0, 0) == Decision::edge(0));
}

TEST_CASE("solve_optimal matches exhaustive policy enumeration") {
  const Network net(brute_force_config());
  for (ActionSet as : {ActionSet::All, ActionSet::AdmitWhenFeasible}) {
    const ExactModel model(net, kDefaultStateCap, as);
    const double brute = brute_force_optimum(model);
    for (SolverMethod m : {SolverMethod::PolicyIteration, SolverMethod::ValueIteration}) {
      SolverOptions o;
      o.method = m;
      const SolverResult r = solve_optimal(model, o);
      CHECK(r.optimal_ratio == doctest::Approx(brute).epsilon(1e-8));
      CHECK(testing::dense_ratio(model, r.table) == doctest::Approx(r.optimal_ratio).epsilon(1e-8));
    }
  }
}

TEST_CASE("policy and value iteration agree on random small instances") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Network net(generate_random_scenario(seed, small_ranges()));
    const ExactModel model(net);
    SolverOptions pi;
    SolverOptions vi;
    vi.method = SolverMethod::ValueIteration;
    const SolverResult a = solve_optimal(model, pi);
    const SolverResult b = solve_optimal(model, vi);
    CHECK(a.optimal_ratio == doctest::Approx(b.optimal_ratio).epsilon(1e-7));
    for (std::size_t i = 1; i < a.ratio_history.size(); ++i)
      CHECK(a.ratio_history[i] <= a.ratio_history[i - 1] + 1e-12);
    for (std::size_t i = 1; i < b.ratio_history.size(); ++i)
      CHECK(b.ratio_history[i] <= b.ratio_history[i - 1] + 1e-9);
    for (PolicyKind p : {PolicyKind::PIER, PolicyKind::PTR, PolicyKind::PLPC})
      CHECK(a.optimal_ratio <= evaluate_policy_exact(model, p) + 1e-9);
  }
}

TEST_CASE("policy iteration never adopts a policy that blocks everything when empty") {
  // This instance once drove policy iteration into a zero-throughput table.
  RandomScenarioRanges r = small_ranges();
  r.channel_choices = {1, 2, 3};
  r.capacity_choices = {1, 2, 3, 4};
  const Network net(generate_random_scenario(48, r));
  const ExactModel model(net, 10'000);
  SolverOptions vi;
  vi.method = SolverMethod::ValueIteration;
  const SolverResult a = solve_optimal(model);
  const SolverResult b = solve_optimal(model, vi);
  CHECK(a.optimal_ratio == doctest::Approx(b.optimal_ratio).epsilon(1e-7));
  bool admits = false;
  for (std::size_t j = 0; j < net.num_classes(); ++j) admits = admits || !a.table.decision(0, j).is_block();
  CHECK(admits);
}

TEST_CASE("optimal table only uses feasible decisions") {
  const Network net(testing::two_class_config());
  const ExactModel model(net);
  const SolverResult r = solve_optimal(model);
  for (std::size_t s = 0; s < model.size(); ++s)
    for (std::size_t j = 0; j < net.num_classes(); ++j) {
      const Decision& d = r.table.decision(s, j);
      CHECK((d.is_block() || is_feasible(model.state(s), net, j, d)));
    }
  // The tabulated rule drives the simulator without invariant violations.
  const DecisionRule rule = rule_from_table(model, r.table);
  CHECK_NOTHROW(run_simulation(net, rule, {200.0, 20.0, 3, 0, true}));
}

TEST_CASE("exact PIER ratio on fig1 lies inside the simulation interval") {
  const Network net(fig1_config());
  const ExactModel model(net);
  const double exact = evaluate_policy_exact(model, PolicyKind::PIER);
  ReplicationOptions o;
  o.replications = 30;
  o.max_replications = 30;
  o.horizon = 2000.0;
  o.warmup = 200.0;
  o.seed = 77;
  const ReplicationSummary s = replicate(net, make_rule(PolicyKind::PIER, net), o);
  CHECK(std::abs(s.mean - exact) <= s.half_width);
}
