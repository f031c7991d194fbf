#include "fogsched/simengine.hpp"

#include <cmath>
#include <numeric>
#include <queue>

#include "fogsched/error.hpp"
#include "fogsched/stats.hpp"

namespace fogsched {

double sample_duration(const DurationDistribution& dist, Rng& rng) {
  if (!(dist.mean > 0.0)) throw Error(ErrorCode::InvalidArgument, "duration mean must be > 0");
  switch (dist.family) {
    case DurationFamily::Exponential:
      return -dist.mean * std::log(rng.open_unit());
    case DurationFamily::Deterministic:
      return dist.mean;
    case DurationFamily::Pareto: {
      if (!(dist.shape > 1.0)) throw Error(ErrorCode::InvalidArgument, "Pareto shape must exceed 1");
      const double scale = dist.mean * (dist.shape - 1.0) / dist.shape;
      return scale * std::pow(rng.open_unit(), -1.0 / dist.shape);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown duration family");
}

double throughput_rate(const NetworkState& state, const Network& net) {
  double rate = 0.0;
  for (std::size_t j = 0; j < net.num_classes(); ++j) {
    for (std::size_t k = 0; k < net.num_groups(); ++k)
      if (const int n = state.edge(j, k)) rate += net.edge_rate(j, net.area_of(k)) * n;
    for (std::size_t l = 0; l < net.num_areas(); ++l)
      if (const int z = state.cloud(j, l)) rate += net.cloud_rate(j, l) * z;
  }
  return rate;
}

double power_rate(const NetworkState& state, const Network& net) {
  double power = 0.0;
  for (std::size_t k = 0; k < net.num_groups(); ++k) {
    const int load = group_load(state, net, k);
    if (load > 0) power += net.op_power(k) * load + net.idle_power(k);
  }
  for (std::size_t j = 0; j < net.num_classes(); ++j)
    for (std::size_t l = 0; l < net.num_areas(); ++l)
      if (const int z = state.cloud(j, l)) power += net.cloud_power(j) * z;
  return power;
}

std::int64_t Metrics::total_arrivals() const { return std::accumulate(arrivals.begin(), arrivals.end(), std::int64_t{0}); }
std::int64_t Metrics::total_blocked() const { return std::accumulate(blocked.begin(), blocked.end(), std::int64_t{0}); }
std::int64_t Metrics::total_completions() const {
  return std::accumulate(edge_completions.begin(), edge_completions.end(), std::int64_t{0}) +
         std::accumulate(cloud_completions.begin(), cloud_completions.end(), std::int64_t{0});
}

void Integrator::accumulate(const NetworkState& state, double dt, Metrics& m) const {
  if (dt <= 0.0) return;
  m.horizon += dt;
  m.throughput_integral += throughput_rate(state, net_) * dt;
  m.power_integral += power_rate(state, net_) * dt;
  m.task_integral += state.total_tasks() * dt;
}

RunLengths default_run_lengths(const Network& net) {
  const double horizon = 1e4 * net.mean_service_time();
  return {horizon, 0.1 * horizon};
}

namespace {

struct Event {
  double time;
  std::uint64_t seq;
  bool arrival;
  std::size_t cls;
  Decision where;
};

// Earliest first; completions before arrivals at equal times; then FIFO.
struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.arrival != b.arrival) return a.arrival;
    return a.seq > b.seq;
  }
};

double holding_time(const Network& net, std::size_t j, const Decision& d, Rng& rng) {
  const DurationLaw& law = net.config().durations;
  DurationDistribution dist{law.family, 0.0, law.shape};
  if (d.is_edge()) {
    dist.mean = 1.0 / net.edge_rate(j, net.area_of(d.index()));
    return sample_duration(dist, rng);
  }
  if (net.config().cloud_timing == CloudTiming::EdgePlusDelay) {
    dist.mean = 1.0 / net.edge_rate(j, d.index());
    return sample_duration(dist, rng) + net.config().cloud_delay;
  }
  dist.mean = 1.0 / net.cloud_rate(j, d.index());
  return sample_duration(dist, rng);
}

std::vector<std::int64_t> tasks_per_class(const NetworkState& s) {
  std::vector<std::int64_t> out(s.num_classes(), 0);
  for (std::size_t j = 0; j < s.num_classes(); ++j) {
    for (std::size_t k = 0; k < s.num_groups(); ++k) out[j] += s.edge(j, k);
    for (std::size_t l = 0; l < s.num_areas(); ++l) out[j] += s.cloud(j, l);
  }
  return out;
}

}  // namespace

Metrics run_simulation(const Network& net, const DecisionRule& rule, const SimulationOptions& options) {
  if (!(options.horizon > options.warmup) || !(options.warmup >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "need horizon > warmup >= 0");

  const std::size_t J = net.num_classes();
  Metrics m;
  m.arrivals.assign(J, 0);
  m.blocked.assign(J, 0);
  m.edge_completions.assign(J, 0);
  m.cloud_completions.assign(J, 0);

  Rng arrivals_rng(options.seed, options.stream, StreamPurpose::Arrivals);
  Rng durations_rng(options.seed, options.stream, StreamPurpose::Durations);
  const Integrator integrator(net);
  NetworkState state(net);

  std::priority_queue<Event, std::vector<Event>, Later> queue;
  std::uint64_t seq = 0;
  auto schedule_arrival = [&](std::size_t j, double now) {
    const double rate = net.arrival_rate(j);
    if (rate > 0.0) queue.push({now - std::log(arrivals_rng.open_unit()) / rate, seq++, true, j, Decision::block()});
  };
  for (std::size_t j = 0; j < J; ++j) schedule_arrival(j, 0.0);

  bool observing = false;
  double clock = 0.0;
  auto advance = [&](double t) {
    const double from = std::max(clock, options.warmup);
    if (t > from) integrator.accumulate(state, t - from, m);
    clock = t;
  };

  while (!queue.empty() && queue.top().time <= options.horizon) {
    const Event ev = queue.top();
    queue.pop();
    advance(ev.time);
    if (!observing && ev.time >= options.warmup) {
      m.in_flight_start = tasks_per_class(state);
      observing = true;
    }
    const std::size_t j = ev.cls;
    if (ev.arrival) {
      if (observing) ++m.arrivals[j];
      const Decision d = rule(state, j);
      if (d.is_block()) {
        if (observing) ++m.blocked[j];
      } else {
        admit(state, net, j, d);
        queue.push({ev.time + holding_time(net, j, d, durations_rng), seq++, false, j, d});
      }
      schedule_arrival(j, ev.time);
    } else {
      release(state, net, j, ev.where);
      if (observing) ++(ev.where.is_edge() ? m.edge_completions : m.cloud_completions)[j];
    }
    if (options.check_invariants) check_invariants(state, net);
  }
  advance(options.horizon);
  if (!observing) m.in_flight_start = tasks_per_class(state);
  m.in_flight_end = tasks_per_class(state);
  return m;
}

double energy_efficiency(const Metrics& m) {
  if (!(m.throughput_integral > 0.0)) throw Error(ErrorCode::DegenerateRun, "no throughput in the observation window");
  return m.power_integral / m.throughput_integral;
}

double throughput_count_rate(const Metrics& m) {
  if (!(m.horizon > 0.0)) return 0.0;
  return static_cast<double>(m.total_completions()) / m.horizon;
}

double blocked_fraction(const Metrics& m) {
  const auto arrivals = m.total_arrivals();
  return arrivals == 0 ? 0.0 : static_cast<double>(m.total_blocked()) / static_cast<double>(arrivals);
}

std::vector<Metrics> run_replications(const Network& net, const DecisionRule& rule, const SimulationOptions& base,
                                      std::size_t first, std::size_t count, Execution execution) {
  std::vector<Metrics> runs(count);
  auto one = [&](std::size_t i) {
    SimulationOptions opt = base;
    opt.stream = first + i;
    runs[i] = run_simulation(net, rule, opt);
  };
  if (execution == Execution::Serial) {
    for (std::size_t i = 0; i < count; ++i) one(i);
    return runs;
  }
  // Exceptions may not cross the OpenMP region; the first one is rethrown.
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      one(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(fogsched_replication_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return runs;
}

ReplicationSummary summarize(const std::vector<Metrics>& runs, double ci_target) {
  ReplicationSummary s;
  std::int64_t arrivals = 0;
  std::int64_t blocked = 0;
  double rate = 0.0;
  for (const Metrics& m : runs) {
    s.ratios.push_back(energy_efficiency(m));
    arrivals += m.total_arrivals();
    blocked += m.total_blocked();
    rate += throughput_count_rate(m);
  }
  const SampleSummary ci = t_interval(s.ratios);
  s.mean = ci.mean;
  s.half_width = ci.half_width;
  s.meets_ci = s.half_width <= ci_target * std::abs(s.mean);
  s.blocked_fraction = arrivals == 0 ? 0.0 : static_cast<double>(blocked) / static_cast<double>(arrivals);
  s.throughput_rate = rate / static_cast<double>(runs.size());
  return s;
}

ReplicationSummary replicate(const Network& net, const DecisionRule& rule, const ReplicationOptions& options) {
  if (options.replications < 2) throw Error(ErrorCode::InvalidArgument, "need at least two replications");
  const SimulationOptions base{options.horizon, options.warmup, options.seed, 0, options.check_invariants};
  std::vector<Metrics> runs = run_replications(net, rule, base, 0, options.replications, options.execution);
  ReplicationSummary s = summarize(runs, options.ci_target);
  while (!s.meets_ci && runs.size() < options.max_replications) {
    const std::size_t target = std::min(2 * runs.size(), options.max_replications);
    auto more = run_replications(net, rule, base, runs.size(), target - runs.size(), options.execution);
    runs.insert(runs.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    s = summarize(runs, options.ci_target);
  }
  return s;
}

}  // namespace fogsched
