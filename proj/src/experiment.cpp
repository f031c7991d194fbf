#include "fogsched/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>

#include <omp.h>

#include "fogsched/error.hpp"
#include "fogsched/oracle.hpp"
#include "fogsched/random_scenario.hpp"
#include "fogsched/rng.hpp"
#include "fogsched/simengine.hpp"

namespace fogsched {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

// All cells that share one network instance (scenario i at scaling h).
struct Group {
  std::string id;
  std::size_t scenario_index = 0;
  int h = 1;
  NetworkConfig config;
};

struct OracleValues {
  std::map<PolicyKind, double> exact;
  std::optional<double> optimal;
  std::string status;
};

OracleValues run_oracle(const Network& net, const ExperimentBlock& block) {
  OracleValues out;
  try {
    const ExactModel model(net, block.oracle_state_cap);
    for (PolicyKind p : block.policies) out.exact[p] = evaluate_policy_exact(model, p);
    out.optimal = solve_optimal(model).optimal_ratio;
  } catch (const Error& e) {
    out.exact.clear();
    out.optimal.reset();
    out.status = "oracle_skipped:" + std::string(to_string(e.code()));
  }
  return out;
}

std::vector<ResultRow> run_group(const Group& g, const ExperimentBlock& block, std::uint64_t seed, Execution exec) {
  std::vector<ResultRow> rows;
  std::optional<OracleValues> oracle;
  for (const DurationLaw& law : block.distributions) {
    NetworkConfig cfg = g.config;
    cfg.durations = law;
    cfg.scaling = g.h;
    std::unique_ptr<Network> net;
    std::string build_error;
    try {
      net = std::make_unique<Network>(cfg);
    } catch (const Error& e) {
      build_error = "error:" + std::string(to_string(e.code()));
    }
    if (net && block.oracle && law.family == DurationFamily::Exponential && !oracle) oracle = run_oracle(*net, block);

    ReplicationOptions opt;
    opt.replications = block.replications;
    opt.max_replications = block.max_replications;
    opt.ci_target = block.ci_target;
    opt.seed = seed;
    opt.execution = exec;
    if (net) {
      const RunLengths defaults = default_run_lengths(*net);
      opt.horizon = block.horizon.value_or(defaults.horizon);
      opt.warmup = block.warmup.value_or(block.horizon ? 0.1 * opt.horizon : defaults.warmup);
    }

    for (PolicyKind p : block.policies) {
      ResultRow row;
      row.scenario = g.id;
      row.policy = p;
      row.h = g.h;
      row.distribution = law;
      if (!net) {
        row.status = build_error;
        rows.push_back(std::move(row));
        continue;
      }
      try {
        const ReplicationSummary s = replicate(*net, make_rule(p, *net), opt);
        row.replications = s.ratios.size();
        row.mean_ratio = s.mean;
        row.ci_half_width = s.half_width;
        row.ci_ok = s.meets_ci;
        row.blocked_fraction = s.blocked_fraction;
        row.throughput_rate = s.throughput_rate;
        row.status = s.meets_ci ? "ok" : "ci_not_met";
      } catch (const Error& e) {
        row.status = "error:" + std::string(to_string(e.code()));
      }
      if (oracle && law.family == DurationFamily::Exponential && row.status == "ok") {
        if (oracle->optimal) {
          row.exact_ratio = oracle->exact.at(p);
          row.optimal_ratio = oracle->optimal;
          row.normalized_deviation = normalized_deviation(*row.exact_ratio, *oracle->optimal);
        } else {
          row.status = oracle->status;
        }
      }
      rows.push_back(std::move(row));
    }
  }
  // Relative difference against the exponential cell of the same policy.
  for (ResultRow& row : rows) {
    if (row.distribution.family == DurationFamily::Exponential || row.replications == 0) continue;
    for (const ResultRow& base : rows)
      if (base.policy == row.policy && base.distribution.family == DurationFamily::Exponential &&
          base.replications > 0 && base.mean_ratio > 0.0) {
        row.relative_difference = (row.mean_ratio - base.mean_ratio) / base.mean_ratio;
        break;
      }
  }
  return rows;
}

bool is_failure(const ResultRow& r) { return r.status.starts_with("error:"); }

}  // namespace

ExperimentReport run_experiment(const ScenarioFile& scenario, const ExperimentHooks& hooks) {
  const ExperimentBlock& block = scenario.experiment;
  std::vector<Group> groups;
  const std::size_t count = block.family ? block.family->count : 1;
  if (!block.family && !scenario.network) throw Error(ErrorCode::ValidationError, "scenario has no network");
  for (std::size_t i = 0; i < count; ++i)
    for (int h : block.h) {
      Group g;
      g.scenario_index = i;
      g.h = h;
      if (block.family) {
        g.id = scenario.name + "-" + std::to_string(i);
        g.config = generate_random_scenario(derive_seed(derive_seed(block.family->seed, static_cast<std::uint64_t>(h)), i));
      } else {
        g.id = scenario.name;
        g.config = *scenario.network;
      }
      groups.push_back(std::move(g));
    }

  const std::size_t workers = std::max<std::size_t>(1, block.workers);
  const Execution inner = workers > 1 ? Execution::Serial : Execution::Parallel;
  std::vector<std::vector<ResultRow>> results(groups.size());
  std::vector<char> done(groups.size(), 0);
  std::size_t next_to_emit = 0;
  std::mutex writer;

  const auto finish = [&](std::size_t gi) {
    const std::lock_guard lock(writer);
    done[gi] = 1;
    while (next_to_emit < groups.size() && done[next_to_emit]) {
      if (hooks.on_row)
        for (const ResultRow& r : results[next_to_emit]) hooks.on_row(r);
      ++next_to_emit;
    }
  };

  const auto n = static_cast<std::ptrdiff_t>(groups.size());
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(workers)) if (workers > 1)
  for (std::ptrdiff_t gi = 0; gi < n; ++gi) {
    const Group& g = groups[static_cast<std::size_t>(gi)];
    const std::uint64_t seed = derive_seed(derive_seed(block.seed, g.scenario_index), static_cast<std::uint64_t>(g.h));
    results[static_cast<std::size_t>(gi)] = run_group(g, block, seed, inner);
    finish(static_cast<std::size_t>(gi));
  }

  ExperimentReport report;
  for (auto& rs : results)
    for (ResultRow& r : rs) {
      if (!r.ci_ok) report.all_ci_ok = false;
      if (is_failure(r)) report.any_error = true;
      report.rows.push_back(std::move(r));
    }
  return report;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns{
      "scenario",        "policy",           "h",           "distribution",  "replications",
      "mean_ratio",      "ci_half_width",    "ci_ok",       "blocked_fraction", "throughput_rate",
      "exact_ratio",     "optimal_ratio",    "normalized_deviation", "relative_difference", "status"};
  return columns;
}

std::string csv_header() {
  std::string out;
  for (const std::string& c : csv_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + '\n';
}

namespace {

// RFC 4180 quoting; only user-supplied scenario names can need it.
std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string csv_line(const ResultRow& r) {
  const std::vector<std::string> fields{csv_field(r.scenario),
                                        lower(to_string(r.policy)),
                                        std::to_string(r.h),
                                        format_distribution(r.distribution),
                                        std::to_string(r.replications),
                                        number(r.mean_ratio),
                                        number(r.ci_half_width),
                                        r.ci_ok ? "1" : "0",
                                        number(r.blocked_fraction),
                                        number(r.throughput_rate),
                                        optional_number(r.exact_ratio),
                                        optional_number(r.optimal_ratio),
                                        optional_number(r.normalized_deviation),
                                        optional_number(r.relative_difference),
                                        r.status};
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out + '\n';
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << csv_header();
  for (const ResultRow& r : rows) out << csv_line(r);
}

CdfSummary summarize_cdf(std::vector<double> ratios) {
  if (ratios.empty()) throw Error(ErrorCode::InvalidArgument, "summarize_cdf needs at least one ratio");
  std::sort(ratios.begin(), ratios.end());
  CdfSummary s;
  s.count = ratios.size();
  const double n = static_cast<double>(ratios.size());
  s.win_fraction = static_cast<double>(std::lower_bound(ratios.begin(), ratios.end(), 1.0) - ratios.begin()) / n;
  for (std::size_t i = 0; i < ratios.size(); ++i)
    if (i + 1 == ratios.size() || ratios[i + 1] != ratios[i])
      s.cdf.push_back({ratios[i], static_cast<double>(i + 1) / n});
  return s;
}

std::vector<double> comparison_ratios(const std::vector<ResultRow>& rows, PolicyKind other, std::optional<int> h) {
  std::vector<double> out;
  for (const ResultRow& a : rows) {
    if (a.policy != PolicyKind::PIER || a.replications == 0 || (h && a.h != *h)) continue;
    for (const ResultRow& b : rows)
      if (b.policy == other && b.scenario == a.scenario && b.h == a.h && b.distribution == a.distribution &&
          b.replications > 0 && b.mean_ratio > 0.0) {
        out.push_back(a.mean_ratio / b.mean_ratio);
        break;
      }
  }
  return out;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void write_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "kind,h,subject,count,win_fraction,mean,min,q10,q50,q90,max\n";
  std::vector<int> hs;
  for (const ResultRow& r : rows)
    if (std::find(hs.begin(), hs.end(), r.h) == hs.end()) hs.push_back(r.h);
  const auto stats = [&](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    return number(sum / static_cast<double>(v.size())) + ',' + number(v.front()) + ',' + number(quantile(v, 0.1)) +
           ',' + number(quantile(v, 0.5)) + ',' + number(quantile(v, 0.9)) + ',' + number(v.back());
  };
  for (int h : hs) {
    for (PolicyKind other : {PolicyKind::PTR, PolicyKind::PLPC}) {
      const std::vector<double> v = comparison_ratios(rows, other, h);
      if (v.empty()) continue;
      const CdfSummary s = summarize_cdf(v);
      out << "comparison," << h << ",pier/" << lower(to_string(other)) << ',' << s.count << ','
          << number(s.win_fraction) << ',' << stats(v) << '\n';
    }
    std::vector<DurationLaw> laws;
    for (const ResultRow& r : rows)
      if (r.h == h && r.relative_difference && std::find(laws.begin(), laws.end(), r.distribution) == laws.end())
        laws.push_back(r.distribution);
    for (const DurationLaw& law : laws)
      for (PolicyKind p : {PolicyKind::PIER, PolicyKind::PTR, PolicyKind::PLPC}) {
        std::vector<double> v;
        for (const ResultRow& r : rows)
          if (r.h == h && r.policy == p && r.distribution == law && r.relative_difference)
            v.push_back(*r.relative_difference);
        if (v.empty()) continue;
        out << "relative_difference," << h << ',' << lower(to_string(p)) << ':' << format_distribution(law) << ','
            << v.size() << ",," << stats(v) << '\n';
      }
  }
}

}  // namespace fogsched
