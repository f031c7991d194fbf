#pragma once

#include <optional>
#include <vector>

#include "fogsched/model.hpp"

namespace fogsched::testing {

// Single class, single group in a single area; the loss-system and
// infinite-server instances of the simulator checks.
inline NetworkConfig single_group(int capacity, int channels, double arrival, double mean_duration,
                                  double power = 3.0, bool cloud = false, double idle = 0.0) {
  NetworkConfig c;
  c.classes.push_back({arrival, 100.0, {1}, cloud});
  c.groups.push_back({capacity, power, idle, 0});
  c.areas.push_back({{0}, {channels}, {mean_duration}});
  return validate_config(c);
}

// Two classes, three groups in two areas, mixed unit sizes, one prohibited
// pair and a class without cloud access. Small enough to enumerate by hand.
inline NetworkConfig two_class_config() {
  NetworkConfig c;
  c.classes.push_back({1.3, 40.0, {1, 2, 1}, true});
  c.classes.push_back({0.7, 25.0, {kInaccessible, 1, 2}, false});
  c.groups.push_back({2, 4.0, 1.5, 0});
  c.groups.push_back({3, 6.0, 0.0, 0});
  c.groups.push_back({2, 2.5, 3.0, 0});
  c.areas.push_back({{0, 1}, {2, 2}, {0.8, 1.6}});
  c.areas.push_back({{2}, {2, 1}, {1.1, 0.5}});
  c.cloud_delay = 2.0;
  return validate_config(c);
}

inline NetworkConfig with_scaling(NetworkConfig c, int h) {
  c.scaling = h;
  return c;
}

inline NetworkConfig with_durations(NetworkConfig c, DurationLaw law) {
  c.durations = law;
  return c;
}

}  // namespace fogsched::testing
