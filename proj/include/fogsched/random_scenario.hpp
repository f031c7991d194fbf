#pragma once

#include <cstdint>
#include <vector>

#include "fogsched/model.hpp"

namespace fogsched {

// Parameter ranges of the random "general case" scenarios. The second block
// holds the arrival, duration and cloud-power ranges.
struct RandomScenarioRanges {
  std::size_t classes = 2;
  std::size_t groups = 5;
  std::size_t areas = 4;
  std::vector<int> units_choices{1, 2};
  std::vector<int> channel_choices{6, 7, 8};
  std::vector<int> capacity_choices{3, 4, 5, 6};
  double power_min = 0.1;
  double power_max = 20.0;
  double idle_factor = 0.5;  // idle power = idle_factor * power_per_unit * capacity
  double cloud_delay = 5.0;

  double duration_min = 0.5;
  double duration_max = 5.0;
  double arrival_min = 2.0;
  double arrival_max = 8.0;
  double cloud_power_margin = 1.0;  // cloud power is drawn above max accessible units * power_per_unit
  double cloud_power_max = 60.0;
};

// Deterministic in (seed, ranges). Every area receives at least one group;
// surplus groups go to uniformly chosen areas.
NetworkConfig generate_random_scenario(std::uint64_t seed, const RandomScenarioRanges& ranges = {});

}  // namespace fogsched
