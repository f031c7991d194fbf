#include "fogsched/random_scenario.hpp"

#include <algorithm>

#include "fogsched/error.hpp"
#include "fogsched/rng.hpp"

namespace fogsched {

namespace {

int pick(Rng& rng, const std::vector<int>& choices) {
  return choices[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(choices.size()) - 1))];
}

}  // namespace

NetworkConfig generate_random_scenario(std::uint64_t seed, const RandomScenarioRanges& r) {
  if (r.areas == 0 || r.groups < r.areas || r.classes == 0)
    throw Error(ErrorCode::InvalidArgument, "need classes >= 1 and groups >= areas >= 1");
  Rng rng(seed, 0, StreamPurpose::Scenario);
  NetworkConfig c;
  c.cloud_delay = r.cloud_delay;

  // Areas 0..L-1 once each, then the surplus groups to random areas; a
  // Fisher-Yates shuffle assigns the list to groups.
  std::vector<std::size_t> owner(r.groups);
  for (std::size_t k = 0; k < r.groups; ++k)
    owner[k] = k < r.areas ? k : static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(r.areas) - 1));
  for (std::size_t k = r.groups; k > 1; --k)
    std::swap(owner[k - 1], owner[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(k) - 1))]);

  c.groups.resize(r.groups);
  for (ArcGroup& g : c.groups) {
    g.base_capacity = pick(rng, r.capacity_choices);
    g.op_power_per_unit = rng.uniform(r.power_min, r.power_max);
    g.base_idle_power = r.idle_factor * g.op_power_per_unit * g.base_capacity;
  }
  c.areas.resize(r.areas);
  for (std::size_t k = 0; k < r.groups; ++k) c.areas[owner[k]].groups.push_back(k);
  for (DestinationArea& a : c.areas) {
    for (std::size_t j = 0; j < r.classes; ++j) {
      a.base_channels.push_back(pick(rng, r.channel_choices));
      a.mean_duration.push_back(rng.uniform(r.duration_min, r.duration_max));
    }
  }
  c.classes.resize(r.classes);
  for (TaskClass& t : c.classes) {
    t.base_arrival_rate = rng.uniform(r.arrival_min, r.arrival_max);
    double heaviest = 0.0;
    for (std::size_t k = 0; k < r.groups; ++k) {
      const int w = pick(rng, r.units_choices);
      t.resource_req.push_back(w);
      heaviest = std::max(heaviest, w * c.groups[k].op_power_per_unit);
    }
    const double lo = heaviest + r.cloud_power_margin;
    if (!(lo < r.cloud_power_max)) {
      // Cannot happen with the default ranges; move the interval up instead
      // of breaking the power ordering.
      t.cloud_power = lo + rng.uniform(0.0, r.cloud_power_margin);
    } else {
      t.cloud_power = rng.uniform(lo, r.cloud_power_max);
    }
  }
  return validate_config(std::move(c));
}

}  // namespace fogsched
