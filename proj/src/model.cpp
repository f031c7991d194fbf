#include "fogsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fogsched/error.hpp"

namespace fogsched {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

std::string at(const char* kind, std::size_t i) { return std::string(kind) + "[" + std::to_string(i) + "]"; }

}  // namespace

std::string to_string(const Decision& d) {
  switch (d.kind()) {
    case Decision::Kind::Edge: return "edge:" + std::to_string(d.index());
    case Decision::Kind::Cloud: return "cloud:" + std::to_string(d.index());
    case Decision::Kind::Block: return "block";
  }
  return "?";
}

NetworkConfig validate_config(NetworkConfig config) {
  const std::size_t J = config.classes.size();
  const std::size_t K = config.groups.size();
  const std::size_t L = config.areas.size();
  if (J == 0) fail(ErrorCode::DimensionMismatch, "no task classes");
  if (K == 0) fail(ErrorCode::DimensionMismatch, "no ARC groups");
  if (L == 0) fail(ErrorCode::DimensionMismatch, "no destination areas");
  if (config.scaling < 1) fail(ErrorCode::NonPositiveParameter, "scaling must be >= 1");
  if (!(config.cloud_delay >= 0.0) || !std::isfinite(config.cloud_delay))
    fail(ErrorCode::NonPositiveParameter, "cloud_delay must be finite and >= 0");
  if (config.durations.family == DurationFamily::Pareto && !(config.durations.shape > 1.0))
    fail(ErrorCode::InvalidArgument, "Pareto shape must exceed 1 for a finite mean");

  for (std::size_t k = 0; k < K; ++k) {
    const ArcGroup& g = config.groups[k];
    if (g.base_capacity < 1) fail(ErrorCode::NonPositiveParameter, at("groups", k) + ".capacity must be >= 1");
    if (!(g.op_power_per_unit > 0.0))
      fail(ErrorCode::NonPositiveParameter, at("groups", k) + ".power_per_unit must be > 0");
    if (!(g.base_idle_power >= 0.0))
      fail(ErrorCode::NonPositiveParameter, at("groups", k) + ".idle_power must be >= 0");
  }

  std::vector<int> owner(K, -1);
  for (std::size_t l = 0; l < L; ++l) {
    const DestinationArea& a = config.areas[l];
    if (a.groups.empty()) fail(ErrorCode::EmptyArea, at("areas", l) + " has no groups");
    for (std::size_t k : a.groups) {
      if (k >= K) fail(ErrorCode::DimensionMismatch, at("areas", l) + " lists unknown group " + std::to_string(k));
      if (owner[k] != -1)
        fail(ErrorCode::OverlappingAreas, "group " + std::to_string(k) + " listed in areas " +
                                              std::to_string(owner[k]) + " and " + std::to_string(l));
      owner[k] = static_cast<int>(l);
    }
    if (a.base_channels.size() != J)
      fail(ErrorCode::DimensionMismatch, at("areas", l) + ".channels needs one entry per class");
    if (a.mean_duration.size() != J)
      fail(ErrorCode::DimensionMismatch, at("areas", l) + ".mean_duration needs one entry per class");
    for (std::size_t j = 0; j < J; ++j) {
      if (a.base_channels[j] < 0)
        fail(ErrorCode::NonPositiveParameter, at("areas", l) + ".channels" + at("", j) + " must be >= 0");
      if (!(a.mean_duration[j] > 0.0) || !std::isfinite(a.mean_duration[j]))
        fail(ErrorCode::NonPositiveParameter, at("areas", l) + ".mean_duration" + at("", j) + " must be > 0");
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (owner[k] < 0) fail(ErrorCode::UnassignedGroup, "group " + std::to_string(k) + " belongs to no area");
    config.groups[k].area = static_cast<std::size_t>(owner[k]);
  }

  for (std::size_t j = 0; j < J; ++j) {
    const TaskClass& c = config.classes[j];
    if (!(c.base_arrival_rate >= 0.0) || !std::isfinite(c.base_arrival_rate))
      fail(ErrorCode::NonPositiveParameter, at("classes", j) + ".arrival_rate must be >= 0");
    if (!(c.cloud_power > 0.0)) fail(ErrorCode::NonPositiveParameter, at("classes", j) + ".cloud_power must be > 0");
    if (c.resource_req.size() != K)
      fail(ErrorCode::DimensionMismatch, at("classes", j) + ".units needs one entry per group");
    for (std::size_t k = 0; k < K; ++k) {
      const ResourceUnits& w = c.resource_req[k];
      if (!w) continue;
      if (*w < 1) fail(ErrorCode::NonPositiveParameter, at("classes", j) + ".units" + at("", k) + " must be >= 1");
      if (c.cloud_accessible && !(*w * config.groups[k].op_power_per_unit < c.cloud_power))
        fail(ErrorCode::PowerOrderingViolation,
             at("classes", j) + ": units * power_per_unit of group " + std::to_string(k) +
                 " must be below cloud_power");
    }
  }
  return config;
}

ScaledParameters apply_scaling(const NetworkConfig& config, int h) {
  if (h < 1) throw Error(ErrorCode::InvalidArgument, "scaling parameter must be >= 1");
  ScaledParameters p;
  p.num_areas = config.areas.size();
  for (const TaskClass& c : config.classes) p.arrival_rate.push_back(h * c.base_arrival_rate);
  for (const ArcGroup& g : config.groups) {
    p.capacity.push_back(h * g.base_capacity);
    p.idle_power.push_back(h * g.base_idle_power);
  }
  p.channels.resize(config.classes.size() * p.num_areas);
  for (std::size_t j = 0; j < config.classes.size(); ++j)
    for (std::size_t l = 0; l < p.num_areas; ++l)
      p.channels[j * p.num_areas + l] = h * config.areas[l].base_channels[j];
  return p;
}

double cloud_effective_rate(double edge_rate, double cloud_delay) {
  return 1.0 / (1.0 / edge_rate + cloud_delay);
}

Network::Network(NetworkConfig config) : config_(validate_config(std::move(config))) {
  scaled_ = apply_scaling(config_, config_.scaling);
  const std::size_t J = num_classes();
  const std::size_t L = num_areas();
  edge_rate_.resize(J * L);
  cloud_rate_.resize(J * L);
  areas_by_rate_.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t l = 0; l < L; ++l) {
      edge_rate_[j * L + l] = 1.0 / config_.areas[l].mean_duration[j];
      cloud_rate_[j * L + l] = cloud_effective_rate(edge_rate_[j * L + l], config_.cloud_delay);
    }
    auto& order = areas_by_rate_[j];
    order.resize(L);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return edge_rate(j, a) > edge_rate(j, b); });
  }
}

double Network::total_arrival_rate() const {
  return std::accumulate(scaled_.arrival_rate.begin(), scaled_.arrival_rate.end(), 0.0);
}

int Network::units(std::size_t j, std::size_t k) const {
  const ResourceUnits& w = config_.classes[j].resource_req[k];
  if (!w) throw Error(ErrorCode::InaccessiblePair, "class " + std::to_string(j) + " cannot use group " + std::to_string(k));
  return *w;
}

double Network::mean_service_time() const {
  double sum = 0.0;
  for (const DestinationArea& a : config_.areas)
    for (double d : a.mean_duration) sum += d;
  return sum / static_cast<double>(num_classes() * num_areas());
}

NetworkState::NetworkState(std::size_t num_classes, std::size_t num_groups, std::size_t num_areas)
    : classes_(num_classes),
      groups_(num_groups),
      areas_(num_areas),
      edge_(num_classes * num_groups, 0),
      cloud_(num_classes * num_areas, 0) {}

int NetworkState::total_tasks() const {
  return std::accumulate(edge_.begin(), edge_.end(), 0) + std::accumulate(cloud_.begin(), cloud_.end(), 0);
}

int group_load(const NetworkState& state, const Network& net, std::size_t k) {
  int load = 0;
  for (std::size_t j = 0; j < net.num_classes(); ++j) {
    const int n = state.edge(j, k);
    if (n != 0) load += n * net.units(j, k);
  }
  return load;
}

int channel_occupancy(const NetworkState& state, const Network& net, std::size_t j, std::size_t l) {
  int used = state.cloud(j, l);
  for (std::size_t k : net.groups_in(l)) used += state.edge(j, k);
  return used;
}

namespace {

bool channel_free(const NetworkState& state, const Network& net, std::size_t j, std::size_t l) {
  return channel_occupancy(state, net, j, l) < net.channels(j, l);
}

bool group_fits(const NetworkState& state, const Network& net, std::size_t j, std::size_t k) {
  return net.accessible(j, k) && group_load(state, net, k) + net.units(j, k) <= net.capacity(k);
}

}  // namespace

FeasibleSet feasible_destinations(const NetworkState& state, const Network& net, std::size_t j) {
  FeasibleSet out;
  for (std::size_t k = 0; k < net.num_groups(); ++k)
    if (group_fits(state, net, j, k) && channel_free(state, net, j, net.area_of(k))) out.groups.push_back(k);
  if (net.cloud_accessible(j))
    for (std::size_t l = 0; l < net.num_areas(); ++l)
      if (channel_free(state, net, j, l)) out.cloud_areas.push_back(l);
  return out;
}

bool is_feasible(const NetworkState& state, const Network& net, std::size_t j, const Decision& d) {
  switch (d.kind()) {
    case Decision::Kind::Edge:
      return d.index() < net.num_groups() && group_fits(state, net, j, d.index()) &&
             channel_free(state, net, j, net.area_of(d.index()));
    case Decision::Kind::Cloud:
      return d.index() < net.num_areas() && net.cloud_accessible(j) && channel_free(state, net, j, d.index());
    case Decision::Kind::Block:
      return true;
  }
  return false;
}

void admit(NetworkState& state, const Network& net, std::size_t j, const Decision& d) {
  if (!is_feasible(state, net, j, d))
    throw Error(ErrorCode::InvariantViolation, "infeasible admission " + to_string(d) + " for class " + std::to_string(j));
  if (d.is_edge()) state.set_edge(j, d.index(), state.edge(j, d.index()) + 1);
  else if (d.is_cloud()) state.set_cloud(j, d.index(), state.cloud(j, d.index()) + 1);
}

void release(NetworkState& state, const Network& net, std::size_t j, const Decision& d) {
  if (d.is_edge() && d.index() < net.num_groups() && state.edge(j, d.index()) > 0) {
    state.set_edge(j, d.index(), state.edge(j, d.index()) - 1);
    return;
  }
  if (d.is_cloud() && d.index() < net.num_areas() && state.cloud(j, d.index()) > 0) {
    state.set_cloud(j, d.index(), state.cloud(j, d.index()) - 1);
    return;
  }
  throw Error(ErrorCode::InvariantViolation, "release of " + to_string(d) + " with no live class-" + std::to_string(j) + " task");
}

bool satisfies_invariants(const NetworkState& state, const Network& net) {
  if (state.num_classes() != net.num_classes() || state.num_groups() != net.num_groups() ||
      state.num_areas() != net.num_areas())
    return false;
  for (std::size_t j = 0; j < net.num_classes(); ++j) {
    for (std::size_t k = 0; k < net.num_groups(); ++k) {
      if (state.edge(j, k) < 0) return false;
      if (state.edge(j, k) > 0 && !net.accessible(j, k)) return false;
    }
    for (std::size_t l = 0; l < net.num_areas(); ++l) {
      if (state.cloud(j, l) < 0) return false;
      if (state.cloud(j, l) > 0 && !net.cloud_accessible(j)) return false;
      if (channel_occupancy(state, net, j, l) > net.channels(j, l)) return false;
    }
  }
  for (std::size_t k = 0; k < net.num_groups(); ++k)
    if (group_load(state, net, k) > net.capacity(k)) return false;
  return true;
}

void check_invariants(const NetworkState& state, const Network& net) {
  if (!satisfies_invariants(state, net))
    throw Error(ErrorCode::InvariantViolation, "state violates capacity or channel constraints");
}

}  // namespace fogsched
