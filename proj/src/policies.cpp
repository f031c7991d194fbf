#include "fogsched/policies.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "fogsched/error.hpp"

namespace fogsched {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::PIER: return "PIER";
    case PolicyKind::PTR: return "PTR";
    case PolicyKind::PLPC: return "PLPC";
    case PolicyKind::Tabulated: return "OPT";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "pier") return PolicyKind::PIER;
  if (lower == "ptr") return PolicyKind::PTR;
  if (lower == "plpc") return PolicyKind::PLPC;
  return std::nullopt;
}

double incremental_power_rate(const NetworkState& state, const Network& net, std::size_t j,
                              const Decision& destination) {
  if (destination.is_cloud()) return net.cloud_power(j);
  if (!destination.is_edge()) throw Error(ErrorCode::InvalidArgument, "blocking has no power rate");
  const std::size_t k = destination.index();
  if (!net.accessible(j, k))
    throw Error(ErrorCode::InaccessiblePair, "class " + std::to_string(j) + " cannot use group " + std::to_string(k));
  const double operational = net.units(j, k) * net.op_power(k);
  return group_load(state, net, k) == 0 ? net.idle_power(k) + operational : operational;
}

std::optional<std::size_t> cloud_route(const NetworkState& state, const Network& net, std::size_t j) {
  if (!net.cloud_accessible(j)) return std::nullopt;
  for (std::size_t l : net.areas_by_rate(j))
    if (channel_occupancy(state, net, j, l) < net.channels(j, l)) return l;
  return std::nullopt;
}

namespace {

double service_rate(const Network& net, std::size_t j, const Decision& d) {
  return d.is_edge() ? net.edge_rate(j, net.area_of(d.index())) : net.cloud_rate(j, d.index());
}

// Scans the feasible destinations in tie-break order (edge groups by index,
// then the cloud) and keeps the first one with the best score.
template <typename Better>
Decision best_destination(const NetworkState& state, const Network& net, std::size_t j, Better better) {
  std::optional<Decision> best;
  double best_score = 0.0;
  auto consider = [&](const Decision& d, double score) {
    if (!best || better(score, best_score)) {
      best = d;
      best_score = score;
    }
  };
  const FeasibleSet feasible = feasible_destinations(state, net, j);
  for (std::size_t k : feasible.groups) {
    const Decision d = Decision::edge(k);
    consider(d, better.score(state, net, j, d));
  }
  if (auto l = cloud_route(state, net, j)) {
    const Decision d = Decision::cloud(*l);
    consider(d, better.score(state, net, j, d));
  }
  return best.value_or(Decision::block());
}

struct PierOrder {
  double score(const NetworkState& s, const Network& n, std::size_t j, const Decision& d) const {
    return pier_index(s, n, j, d);
  }
  bool operator()(double a, double b) const { return a > b; }
};

struct RateOrder {
  double score(const NetworkState&, const Network& n, std::size_t j, const Decision& d) const {
    return service_rate(n, j, d);
  }
  bool operator()(double a, double b) const { return a > b; }
};

struct PowerOrder {
  double score(const NetworkState& s, const Network& n, std::size_t j, const Decision& d) const {
    return incremental_power_rate(s, n, j, d);
  }
  bool operator()(double a, double b) const { return a < b; }
};

}  // namespace

double pier_index(const NetworkState& state, const Network& net, std::size_t j, const Decision& destination) {
  if (destination.is_cloud()) {
    const auto l = cloud_route(state, net, j);
    const std::size_t area = l.value_or(destination.index());
    return net.cloud_rate(j, area) / net.cloud_power(j);
  }
  if (!destination.is_edge()) throw Error(ErrorCode::InvalidArgument, "blocking has no index");
  return net.edge_rate(j, net.area_of(destination.index())) / incremental_power_rate(state, net, j, destination);
}

Decision pier_decide(const NetworkState& state, const Network& net, std::size_t j) {
  return best_destination(state, net, j, PierOrder{});
}

Decision ptr_decide(const NetworkState& state, const Network& net, std::size_t j) {
  return best_destination(state, net, j, RateOrder{});
}

Decision plpc_decide(const NetworkState& state, const Network& net, std::size_t j) {
  return best_destination(state, net, j, PowerOrder{});
}

Decision decide(PolicyKind kind, const NetworkState& state, const Network& net, std::size_t j) {
  switch (kind) {
    case PolicyKind::PIER: return pier_decide(state, net, j);
    case PolicyKind::PTR: return ptr_decide(state, net, j);
    case PolicyKind::PLPC: return plpc_decide(state, net, j);
    case PolicyKind::Tabulated: break;
  }
  throw Error(ErrorCode::InvalidArgument, "tabulated policies need a decision table");
}

DecisionRule make_rule(PolicyKind kind, const Network& net) {
  if (kind == PolicyKind::Tabulated) throw Error(ErrorCode::InvalidArgument, "tabulated policies need a decision table");
  return [kind, &net](const NetworkState& state, std::size_t j) { return decide(kind, state, net, j); };
}

}  // namespace fogsched
