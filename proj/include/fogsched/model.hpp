#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fogsched/decision.hpp"

namespace fogsched {

// ARC units a class occupies in a group; nullopt marks a prohibited pair.
using ResourceUnits = std::optional<int>;
inline constexpr std::nullopt_t kInaccessible = std::nullopt;

enum class DurationFamily { Exponential, Deterministic, Pareto };

// Family of task-duration laws; the mean of each draw comes from the service
// rate of the route the task took. `shape` is the Pareto tail index.
struct DurationLaw {
  DurationFamily family = DurationFamily::Exponential;
  double shape = 0.0;

  friend bool operator==(const DurationLaw&, const DurationLaw&) = default;
};

// How a cloud-bound task's holding time is drawn.
//   EffectiveRate : one draw with mean 1/mu' = 1/mu + D0.
//   EdgePlusDelay : an edge-transmission draw (mean 1/mu) plus a fixed D0.
enum class CloudTiming { EffectiveRate, EdgePlusDelay };

struct TaskClass {
  double base_arrival_rate = 0.0;
  double cloud_power = 0.0;
  std::vector<ResourceUnits> resource_req;  // one entry per ARC group
  bool cloud_accessible = true;

  friend bool operator==(const TaskClass&, const TaskClass&) = default;
};

struct ArcGroup {
  int base_capacity = 1;
  double op_power_per_unit = 0.0;
  double base_idle_power = 0.0;
  // Destination area holding the group. Derived from area membership by
  // validate_config.
  std::size_t area = 0;

  friend bool operator==(const ArcGroup&, const ArcGroup&) = default;
};

struct DestinationArea {
  std::vector<std::size_t> groups;
  std::vector<int> base_channels;      // per class
  std::vector<double> mean_duration;   // per class; the edge service rate is 1/mean_duration

  friend bool operator==(const DestinationArea&, const DestinationArea&) = default;
};

struct NetworkConfig {
  std::vector<TaskClass> classes;
  std::vector<ArcGroup> groups;
  std::vector<DestinationArea> areas;
  double cloud_delay = 0.0;
  int scaling = 1;
  DurationLaw durations;
  CloudTiming cloud_timing = CloudTiming::EffectiveRate;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

// Checks every structural and physical invariant and fills ArcGroup::area.
// Throws Error with the first violated invariant.
NetworkConfig validate_config(NetworkConfig config);

struct ScaledParameters {
  std::size_t num_areas = 0;
  std::vector<double> arrival_rate;  // per class
  std::vector<int> capacity;         // per group
  std::vector<double> idle_power;    // per group
  std::vector<int> channels;         // class-major, num_classes x num_areas

  int channel_count(std::size_t j, std::size_t l) const { return channels[j * num_areas + l]; }
};

ScaledParameters apply_scaling(const NetworkConfig& config, int h);

// mu' = 1 / (1/mu + D0)
double cloud_effective_rate(double edge_rate, double cloud_delay);

// A validated configuration with the scaling parameter applied and the
// per-route rates precomputed. Immutable; safe to share across threads.
class Network {
 public:
  explicit Network(NetworkConfig config);

  const NetworkConfig& config() const { return config_; }
  int scaling() const { return config_.scaling; }

  std::size_t num_classes() const { return config_.classes.size(); }
  std::size_t num_groups() const { return config_.groups.size(); }
  std::size_t num_areas() const { return config_.areas.size(); }

  double arrival_rate(std::size_t j) const { return scaled_.arrival_rate[j]; }
  double total_arrival_rate() const;
  int capacity(std::size_t k) const { return scaled_.capacity[k]; }
  int channels(std::size_t j, std::size_t l) const { return scaled_.channel_count(j, l); }
  double idle_power(std::size_t k) const { return scaled_.idle_power[k]; }
  double op_power(std::size_t k) const { return config_.groups[k].op_power_per_unit; }
  double cloud_power(std::size_t j) const { return config_.classes[j].cloud_power; }
  bool cloud_accessible(std::size_t j) const { return config_.classes[j].cloud_accessible; }

  bool accessible(std::size_t j, std::size_t k) const {
    return config_.classes[j].resource_req[k].has_value();
  }
  // Units of group k used by a j-task; the pair must be accessible.
  int units(std::size_t j, std::size_t k) const;

  std::size_t area_of(std::size_t k) const { return config_.groups[k].area; }
  const std::vector<std::size_t>& groups_in(std::size_t l) const { return config_.areas[l].groups; }

  double edge_rate(std::size_t j, std::size_t l) const { return edge_rate_[j * num_areas() + l]; }
  double cloud_rate(std::size_t j, std::size_t l) const { return cloud_rate_[j * num_areas() + l]; }

  // Areas ordered by decreasing edge service rate for class j, ties by index.
  const std::vector<std::size_t>& areas_by_rate(std::size_t j) const { return areas_by_rate_[j]; }

  // Average of 1/mu over all (class, area) pairs; the time unit used for
  // default simulation horizons.
  double mean_service_time() const;

 private:
  NetworkConfig config_;
  ScaledParameters scaled_;
  std::vector<double> edge_rate_;
  std::vector<double> cloud_rate_;
  std::vector<std::vector<std::size_t>> areas_by_rate_;
};

// Number of tasks of each class in service at every edge group, plus the
// cloud-bound tasks grouped by the area whose channel they hold.
class NetworkState {
 public:
  NetworkState() = default;
  NetworkState(std::size_t num_classes, std::size_t num_groups, std::size_t num_areas);
  explicit NetworkState(const Network& net)
      : NetworkState(net.num_classes(), net.num_groups(), net.num_areas()) {}

  std::size_t num_classes() const { return classes_; }
  std::size_t num_groups() const { return groups_; }
  std::size_t num_areas() const { return areas_; }

  int edge(std::size_t j, std::size_t k) const { return edge_[j * groups_ + k]; }
  int cloud(std::size_t j, std::size_t l) const { return cloud_[j * areas_ + l]; }

  // Raw setters; no constraint checks. Use admit/release for checked updates.
  void set_edge(std::size_t j, std::size_t k, int n) { edge_[j * groups_ + k] = n; }
  void set_cloud(std::size_t j, std::size_t l, int n) { cloud_[j * areas_ + l] = n; }

  int total_tasks() const;

  friend bool operator==(const NetworkState&, const NetworkState&) = default;

 private:
  std::size_t classes_ = 0;
  std::size_t groups_ = 0;
  std::size_t areas_ = 0;
  std::vector<int> edge_;
  std::vector<int> cloud_;
};

// Units occupied in group k across all classes.
int group_load(const NetworkState& state, const Network& net, std::size_t k);

// Occupied (j, l)-channels: cloud-bound tasks via l plus edge tasks in l's groups.
int channel_occupancy(const NetworkState& state, const Network& net, std::size_t j, std::size_t l);

struct FeasibleSet {
  std::vector<std::size_t> groups;       // edge groups, increasing
  std::vector<std::size_t> cloud_areas;  // areas with a free channel, increasing

  bool empty() const { return groups.empty() && cloud_areas.empty(); }
};

FeasibleSet feasible_destinations(const NetworkState& state, const Network& net, std::size_t j);

bool is_feasible(const NetworkState& state, const Network& net, std::size_t j, const Decision& d);

// Checked state updates; both throw InvariantViolation when the update would
// break a constraint. Block is a no-op for admit and an error for release.
void admit(NetworkState& state, const Network& net, std::size_t j, const Decision& d);
void release(NetworkState& state, const Network& net, std::size_t j, const Decision& d);

bool satisfies_invariants(const NetworkState& state, const Network& net);
void check_invariants(const NetworkState& state, const Network& net);

}  // namespace fogsched
