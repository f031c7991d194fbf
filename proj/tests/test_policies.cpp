#include "doctest.h"
#include "fogsched/error.hpp"
#include "fogsched/policies.hpp"
#include "fogsched/scenario.hpp"
#include "support.hpp"

using namespace fogsched;

TEST_CASE("parse_policy and to_string") {
  CHECK(parse_policy("pier") == PolicyKind::PIER);
  CHECK(parse_policy("PTR") == PolicyKind::PTR);
  CHECK(parse_policy("Plpc") == PolicyKind::PLPC);
  CHECK_FALSE(parse_policy("optimal").has_value());
  CHECK(to_string(PolicyKind::PIER) == "PIER");
}

TEST_CASE("incremental_power_rate") {
  SUBCASE("fig1 idle group 0") {
    const Network net(fig1_config());
    CHECK(incremental_power_rate(NetworkState(net), net, 0, Decision::edge(0)) == doctest::Approx(1.08316));
  }
  SUBCASE("active group charges operational power only") {
    NetworkConfig c = testing::single_group(4, 4, 1.0, 1.0, 3.0, true, 2.0);
    c.classes[0].resource_req[0] = 2;
    const Network net(c);
    NetworkState s(net);
    CHECK(incremental_power_rate(s, net, 0, Decision::edge(0)) == doctest::Approx(8.0));
    s.set_edge(0, 0, 1);
    CHECK(incremental_power_rate(s, net, 0, Decision::edge(0)) == doctest::Approx(6.0));
  }
  SUBCASE("cloud") {
    const Network net(fig1_config());
    CHECK(incremental_power_rate(NetworkState(net), net, 0, Decision::cloud(0)) == doctest::Approx(51.4714));
  }
  SUBCASE("prohibited pair") {
    const Network net(testing::two_class_config());
    CHECK_THROWS_AS(incremental_power_rate(NetworkState(net), net, 1, Decision::edge(0)), Error);
  }
}

TEST_CASE("pier_index on the empty fig1 state") {
  const Network net(fig1_config());
  const NetworkState s(net);
  CHECK(pier_index(s, net, 0, Decision::edge(0)) == doctest::Approx(1.57268).epsilon(1e-4));
  CHECK(pier_index(s, net, 0, Decision::edge(2)) == doctest::Approx(1.53965).epsilon(1e-4));
  CHECK(pier_index(s, net, 0, Decision::edge(3)) == doctest::Approx(0.10358).epsilon(1e-4));
  CHECK(pier_index(s, net, 0, Decision::edge(1)) == doctest::Approx(0.03738).epsilon(1e-3));
  CHECK(pier_index(s, net, 0, Decision::edge(4)) == doctest::Approx(0.01304).epsilon(1e-3));
  CHECK(pier_index(s, net, 0, Decision::cloud(0)) == doctest::Approx(0.003502).epsilon(1e-3));
  CHECK(cloud_route(s, net, 0) == std::optional<std::size_t>(2));
}

TEST_CASE("pier_index is homogeneous of degree -1 in power") {
  NetworkConfig c = testing::two_class_config();
  const Network net(c);
  for (ArcGroup& g : c.groups) {
    g.op_power_per_unit *= 2;
    g.base_idle_power *= 2;
  }
  for (TaskClass& t : c.classes) t.cloud_power *= 2;
  const Network doubled(c);
  NetworkState s(net);
  s.set_edge(0, 0, 1);
  for (const Decision d : {Decision::edge(0), Decision::edge(1), Decision::edge(2), Decision::cloud(0)})
    CHECK(pier_index(s, doubled, 0, d) == doctest::Approx(pier_index(s, net, 0, d) / 2).epsilon(1e-14));
}

TEST_CASE("decisions on the empty fig1 state") {
  const Network net(fig1_config());
  const NetworkState s(net);
  CHECK(pier_decide(s, net, 0) == Decision::edge(0));
  CHECK(ptr_decide(s, net, 0) == Decision::edge(2));
  CHECK(plpc_decide(s, net, 0) == Decision::edge(0));
}

TEST_CASE("PIER ranking follows the index order as groups fill") {
  const Network net(fig1_config());
  NetworkState s(net);
  std::vector<std::size_t> order;
  for (int i = 0; i < 5; ++i) {
    const Decision d = pier_decide(s, net, 0);
    REQUIRE(d.is_edge());
    order.push_back(d.index());
    admit(s, net, 0, d);
  }
  CHECK(order == std::vector<std::size_t>{0, 2, 3, 1, 4});
  CHECK(pier_decide(s, net, 0) == Decision::block());
}

TEST_CASE("everything blocks when no channel is free") {
  const Network net(fig1_config());
  NetworkState s(net);
  for (std::size_t l = 0; l < 5; ++l) s.set_cloud(0, l, 1);
  for (PolicyKind p : {PolicyKind::PIER, PolicyKind::PTR, PolicyKind::PLPC})
    CHECK(decide(p, s, net, 0) == Decision::block());
}

TEST_CASE("ties go to the lowest group index") {
  NetworkConfig c;
  c.classes.push_back({1.0, 50.0, {1, 1, 1, 1, 1}, true});
  for (int k = 0; k < 5; ++k) c.groups.push_back({1, k == 1 || k == 3 ? 2.0 : 9.0, 0.5, 0});
  // groups 1 and 3 identical, in areas with identical rates
  c.areas.push_back({{0}, {1}, {2.0}});
  c.areas.push_back({{1, 2}, {2}, {1.0}});
  c.areas.push_back({{3, 4}, {2}, {1.0}});
  const Network net(validate_config(c));
  const NetworkState s(net);
  CHECK(pier_decide(s, net, 0) == Decision::edge(1));
  CHECK(plpc_decide(s, net, 0) == Decision::edge(1));
  CHECK(ptr_decide(s, net, 0) == Decision::edge(1));
}

TEST_CASE("cloud ranks after the edge at equal index") {
  // mu = mu' = 1 (D0 = 0); edge c = 1 + 2 = 3 when idle, cloud c = 3.
  NetworkConfig c = testing::single_group(2, 3, 1.0, 1.0, 2.0, true, 1.0);
  c.classes[0].cloud_power = 3.0;
  const Network net(validate_config(c));
  const NetworkState s(net);
  REQUIRE(pier_index(s, net, 0, Decision::edge(0)) == pier_index(s, net, 0, Decision::cloud(0)));
  CHECK(pier_decide(s, net, 0) == Decision::edge(0));
  CHECK(plpc_decide(s, net, 0) == Decision::edge(0));
  CHECK(ptr_decide(s, net, 0) == Decision::edge(0));
}

TEST_CASE("PTR picks the cloud when it is the only option") {
  const Network net(testing::single_group(1, 3, 1.0, 1.0, 3.0, true));
  NetworkState s(net);
  s.set_edge(0, 0, 1);
  CHECK(ptr_decide(s, net, 0) == Decision::cloud(0));
  CHECK(pier_decide(s, net, 0) == Decision::cloud(0));
  CHECK(plpc_decide(s, net, 0) == Decision::cloud(0));
}

TEST_CASE("PLPC prefers the cloud over expensive idle groups") {
  NetworkConfig c = fig1_config();
  for (ArcGroup& g : c.groups) g.base_idle_power = 100.0;
  const Network net(c);
  CHECK(plpc_decide(NetworkState(net), net, 0) == Decision::cloud(2));
}

TEST_CASE("PLPC switches exactly when idle power crosses the gap") {
  // Group 0: op 5, idle 1. Group 1: op 2, idle x, always idle here.
  // Group 0 active: 5 vs 2 + x. Group 0 idle: 6 vs 2 + x.
  NetworkConfig c;
  c.classes.push_back({1.0, 50.0, {1, 1}, true});
  c.groups.push_back({3, 5.0, 1.0, 0});
  c.groups.push_back({3, 2.0, 0.0, 0});
  c.areas.push_back({{0}, {3}, {1.0}});
  c.areas.push_back({{1}, {3}, {1.0}});
  for (double idle : {2.9, 3.1, 3.9, 4.1}) {
    c.groups[1].base_idle_power = idle;
    const Network net(validate_config(c));
    NetworkState s(net);
    CHECK(plpc_decide(s, net, 0) == (idle < 4.0 ? Decision::edge(1) : Decision::edge(0)));
    s.set_edge(0, 0, 1);
    CHECK(plpc_decide(s, net, 0) == (idle < 3.0 ? Decision::edge(1) : Decision::edge(0)));
  }
}

TEST_CASE("make_rule binds the network") {
  const Network net(fig1_config());
  const DecisionRule rule = make_rule(PolicyKind::PTR, net);
  CHECK(rule(NetworkState(net), 0) == Decision::edge(2));
  CHECK_THROWS_AS(make_rule(PolicyKind::Tabulated, net), Error);
}
