#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "fogsched/decision.hpp"
#include "fogsched/model.hpp"

namespace fogsched {

enum class PolicyKind { PIER, PTR, PLPC, Tabulated };

std::string_view to_string(PolicyKind kind);
// Accepts "pier", "ptr", "plpc" (any case).
std::optional<PolicyKind> parse_policy(std::string_view name);

// Maps the state seen by an arriving task of class j to a decision. Rules must
// be pure so they can be shared by concurrent replications.
using DecisionRule = std::function<Decision(const NetworkState&, std::size_t)>;

// Increase in total power draw if a j-task is placed at `destination`. For the
// edge this includes the idle power of a currently inactive group; for the
// cloud it is the cloud power of the class.
double incremental_power_rate(const NetworkState& state, const Network& net, std::size_t j,
                              const Decision& destination);

// Cloud-bound tasks take the feasible area with the fastest channel for their
// class (ties to the lower index). nullopt when no channel is free or the
// class may not use the cloud.
std::optional<std::size_t> cloud_route(const NetworkState& state, const Network& net, std::size_t j);

// Service rate per unit of incremental power. For Cloud the area carried by
// the decision is ignored; the index uses the routed area.
double pier_index(const NetworkState& state, const Network& net, std::size_t j, const Decision& destination);

Decision pier_decide(const NetworkState& state, const Network& net, std::size_t j);
Decision ptr_decide(const NetworkState& state, const Network& net, std::size_t j);
Decision plpc_decide(const NetworkState& state, const Network& net, std::size_t j);

Decision decide(PolicyKind kind, const NetworkState& state, const Network& net, std::size_t j);

// Binds one of the heuristic policies to a network. The network must outlive
// the rule.
DecisionRule make_rule(PolicyKind kind, const Network& net);

}  // namespace fogsched
