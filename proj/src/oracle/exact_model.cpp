#include <cmath>
#include <string>

#include "fogsched/error.hpp"
#include "fogsched/oracle.hpp"
#include "fogsched/simengine.hpp"

namespace fogsched {

namespace {

// Per-area enumeration is bounded separately so that a single huge area fails
// fast instead of allocating.
constexpr double kLocalEnumerationLimit = 5e7;

}  // namespace

ExactModel::ExactModel(const Network& net, std::size_t max_states, ActionSet actions)
    : net_(net), actions_(actions) {
  if (net.config().durations.family != DurationFamily::Exponential ||
      net.config().cloud_timing != CloudTiming::EffectiveRate)
    throw Error(ErrorCode::UnsupportedDistribution, "the exact model needs exponential durations at every route");

  const std::size_t J = net.num_classes();
  const std::size_t K = net.num_groups();
  const std::size_t L = net.num_areas();
  areas_.resize(L);

  double total = 1.0;
  for (std::size_t l = 0; l < L; ++l) {
    AreaSpace& a = areas_[l];
    a.edge_cohort.assign(J * K, -1);
    a.cloud_cohort.assign(J, -1);
    std::vector<int> bound;
    for (std::size_t j = 0; j < J; ++j)
      for (std::size_t k : net.groups_in(l)) {
        if (!net.accessible(j, k)) continue;
        a.edge_cohort[j * K + k] = static_cast<std::int32_t>(a.cohorts.size());
        a.cohorts.push_back({j, false, k, net.edge_rate(j, l)});
        bound.push_back(std::min(net.capacity(k) / net.units(j, k), net.channels(j, l)));
      }
    for (std::size_t j = 0; j < J; ++j) {
      if (!net.cloud_accessible(j)) continue;
      a.cloud_cohort[j] = static_cast<std::int32_t>(a.cohorts.size());
      a.cohorts.push_back({j, true, 0, net.cloud_rate(j, l)});
      bound.push_back(net.channels(j, l));
    }
    const std::size_t nc = a.cohorts.size();

    double raw = 1.0;
    for (int b : bound) raw *= b + 1;
    if (raw > kLocalEnumerationLimit)
      throw Error(ErrorCode::StateSpaceTooLarge,
                  "area " + std::to_string(l) + " admits up to " + std::to_string(raw) + " local configurations");

    auto feasible = [&](const std::vector<int>& n) {
      std::vector<int> load(K, 0);
      std::vector<int> channels(J, 0);
      for (std::size_t c = 0; c < nc; ++c) {
        const Cohort& co = a.cohorts[c];
        channels[co.cls] += n[c];
        if (!co.cloud) load[co.group] += n[c] * net.units(co.cls, co.group);
      }
      for (std::size_t k : net.groups_in(l))
        if (load[k] > net.capacity(k)) return false;
      for (std::size_t j = 0; j < J; ++j)
        if (channels[j] > net.channels(j, l)) return false;
      return true;
    };

    // Odometer over the cohort bounds, least significant cohort first, so the
    // all-zero configuration gets local index 0.
    std::vector<std::uint64_t>& radix = a.radix;
    radix.assign(nc, 1);
    for (std::size_t c = 1; c < nc; ++c) radix[c] = radix[c - 1] * static_cast<std::uint64_t>(bound[c - 1] + 1);
    std::unordered_map<std::uint64_t, std::int32_t>& by_key = a.by_key;
    std::vector<std::uint64_t> keys;
    std::vector<int> n(nc, 0);
    while (true) {
      if (feasible(n)) {
        std::uint64_t key = 0;
        for (std::size_t c = 0; c < nc; ++c) key += radix[c] * static_cast<std::uint64_t>(n[c]);
        by_key.emplace(key, static_cast<std::int32_t>(keys.size()));
        keys.push_back(key);
        a.counts.insert(a.counts.end(), n.begin(), n.end());
      }
      std::size_t c = 0;
      while (c < nc && n[c] == bound[c]) n[c++] = 0;
      if (c == nc) break;
      ++n[c];
    }
    a.local_count = keys.size();
    a.plus.assign(a.local_count * nc, -1);
    a.minus.assign(a.local_count * nc, -1);
    a.departure.assign(a.local_count, 0.0);
    a.free_channel.assign(a.local_count * J, 0);
    for (std::size_t i = 0; i < a.local_count; ++i) {
      std::vector<int> channels(J, 0);
      for (std::size_t c = 0; c < nc; ++c) {
        const int count = a.counts[i * nc + c];
        channels[a.cohorts[c].cls] += count;
        a.departure[i] += count * a.cohorts[c].rate;
        if (count < bound[c]) {
          auto it = by_key.find(keys[i] + radix[c]);
          if (it != by_key.end()) a.plus[i * nc + c] = it->second;
        }
        if (count > 0) a.minus[i * nc + c] = by_key.at(keys[i] - radix[c]);
      }
      for (std::size_t j = 0; j < J; ++j) a.free_channel[i * J + j] = channels[j] < net.channels(j, l);
      a.max_departure = std::max(a.max_departure, a.departure[i]);
    }
    a.stride = static_cast<std::size_t>(total);
    total *= static_cast<double>(a.local_count);
    if (total > static_cast<double>(max_states))
      throw Error(ErrorCode::StateSpaceTooLarge,
                  "constrained state space has at least " + std::to_string(static_cast<long double>(total)) +
                      " states (cap " + std::to_string(max_states) + ")");
  }
  size_ = static_cast<std::size_t>(total);

  uniformization_ = net.total_arrival_rate();
  for (const AreaSpace& a : areas_) uniformization_ += a.max_departure;
  if (!(uniformization_ > 0.0)) uniformization_ = 1.0;

  reward_.resize(size_);
  cost_.resize(size_);
  for (std::size_t s = 0; s < size_; ++s) {
    const NetworkState st = state(s);
    reward_[s] = throughput_rate(st, net_);
    cost_[s] = power_rate(st, net_);
  }
}

NetworkState ExactModel::state(std::size_t s) const {
  NetworkState st(net_);
  for (std::size_t l = 0; l < areas_.size(); ++l) {
    const AreaSpace& a = areas_[l];
    const std::size_t local = local_index(s, a);
    const std::size_t nc = a.cohorts.size();
    for (std::size_t c = 0; c < nc; ++c) {
      const Cohort& co = a.cohorts[c];
      const int n = a.counts[local * nc + c];
      if (co.cloud) st.set_cloud(co.cls, l, n);
      else st.set_edge(co.cls, co.group, n);
    }
  }
  return st;
}

std::size_t ExactModel::index_of(const NetworkState& st) const {
  if (!satisfies_invariants(st, net_)) throw Error(ErrorCode::InvalidArgument, "state outside the constrained space");
  std::size_t s = 0;
  for (std::size_t l = 0; l < areas_.size(); ++l) {
    const AreaSpace& a = areas_[l];
    std::uint64_t key = 0;
    for (std::size_t c = 0; c < a.cohorts.size(); ++c) {
      const Cohort& co = a.cohorts[c];
      const int n = co.cloud ? st.cloud(co.cls, l) : st.edge(co.cls, co.group);
      key += a.radix[c] * static_cast<std::uint64_t>(n);
    }
    const auto it = a.by_key.find(key);
    if (it == a.by_key.end()) throw Error(ErrorCode::InvalidArgument, "state outside the constrained space");
    s += static_cast<std::size_t>(it->second) * a.stride;
  }
  return s;
}

double ExactModel::departure_rate(std::size_t s) const {
  double rate = 0.0;
  for (const AreaSpace& a : areas_) rate += a.departure[local_index(s, a)];
  return rate;
}

std::optional<std::size_t> ExactModel::target(std::size_t s, std::size_t j, const Decision& d) const {
  std::optional<std::size_t> out;
  for_each_action(s, j, [&](const Decision& cand, std::size_t t) {
    if (cand == d) out = t;
  });
  return out;
}

void ExactModel::feasible_actions(std::size_t s, std::size_t j, std::vector<Decision>& out) const {
  out.clear();
  for_each_action(s, j, [&](const Decision& d, std::size_t) { out.push_back(d); });
}

std::vector<NetworkState> enumerate_states(const Network& net, std::size_t max_states) {
  const ExactModel model(net, max_states);
  std::vector<NetworkState> out;
  out.reserve(model.size());
  for (std::size_t s = 0; s < model.size(); ++s) out.push_back(model.state(s));
  return out;
}

}  // namespace fogsched
