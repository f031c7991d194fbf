#include "fogsched/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fogsched/error.hpp"
#include "json.hpp"

namespace fogsched {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ValidationError, path + ": " + what);
}

// Typed field access that reports the JSON path of the offending value.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& node() const { return node_; }

  bool has(const char* key) const { return node_.is_object() && node_.contains(key) && !node_.at(key).is_null(); }

  Reader at(const char* key) const {
    require_object();
    if (!node_.contains(key)) invalid(path_ + "." + key, "missing");
    return {node_.at(key), path_ + "." + key};
  }

  std::vector<Reader> items() const {
    if (!node_.is_array()) invalid(path_, "expected an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < node_.size(); ++i) out.emplace_back(node_.at(i), path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  double number() const {
    if (!node_.is_number()) invalid(path_, "expected a number");
    return node_.get<double>();
  }

  long long integer() const {
    if (!node_.is_number_integer()) invalid(path_, "expected an integer");
    return node_.get<long long>();
  }

  std::size_t count() const {
    const long long v = integer();
    if (v < 0) invalid(path_, "must be >= 0");
    return static_cast<std::size_t>(v);
  }

  bool boolean() const {
    if (!node_.is_boolean()) invalid(path_, "expected true or false");
    return node_.get<bool>();
  }

  std::string string() const {
    if (!node_.is_string()) invalid(path_, "expected a string");
    return node_.get<std::string>();
  }

  void require_object() const {
    if (!node_.is_object()) invalid(path_, "expected an object");
  }

 private:
  const json& node_;
  std::string path_;
};

int to_int(const Reader& r) {
  const long long v = r.integer();
  if (v < INT32_MIN || v > INT32_MAX) invalid(r.path(), "out of range");
  return static_cast<int>(v);
}

DurationLaw read_distribution(const Reader& r) {
  const auto law = parse_distribution(r.string());
  if (!law) invalid(r.path(), "expected exp, det or pareto:<shape>");
  return *law;
}

NetworkConfig read_network(const Reader& r) {
  r.require_object();
  NetworkConfig c;
  for (const Reader& item : r.at("classes").items()) {
    TaskClass t;
    t.base_arrival_rate = item.at("arrival_rate").number();
    t.cloud_power = item.at("cloud_power").number();
    for (const Reader& w : item.at("units").items())
      t.resource_req.push_back(w.node().is_null() ? kInaccessible : ResourceUnits(to_int(w)));
    if (item.has("cloud_accessible")) t.cloud_accessible = item.at("cloud_accessible").boolean();
    c.classes.push_back(std::move(t));
  }
  for (const Reader& item : r.at("groups").items()) {
    ArcGroup g;
    g.base_capacity = to_int(item.at("capacity"));
    g.op_power_per_unit = item.at("power_per_unit").number();
    g.base_idle_power = item.has("idle_power") ? item.at("idle_power").number() : 0.0;
    c.groups.push_back(g);
  }
  for (const Reader& item : r.at("areas").items()) {
    DestinationArea a;
    for (const Reader& g : item.at("groups").items()) a.groups.push_back(g.count());
    for (const Reader& v : item.at("channels").items()) a.base_channels.push_back(to_int(v));
    for (const Reader& v : item.at("mean_duration").items()) a.mean_duration.push_back(v.number());
    c.areas.push_back(std::move(a));
  }
  c.cloud_delay = r.has("cloud_delay") ? r.at("cloud_delay").number() : 0.0;
  c.scaling = r.has("scaling") ? to_int(r.at("scaling")) : 1;
  if (r.has("durations")) c.durations = read_distribution(r.at("durations"));
  if (r.has("cloud_timing")) {
    const std::string t = r.at("cloud_timing").string();
    if (t == "effective_rate") c.cloud_timing = CloudTiming::EffectiveRate;
    else if (t == "edge_plus_delay") c.cloud_timing = CloudTiming::EdgePlusDelay;
    else invalid(r.path() + ".cloud_timing", "expected effective_rate or edge_plus_delay");
  }
  try {
    return validate_config(std::move(c));
  } catch (const Error& e) {
    invalid(r.path(), e.what());
  }
}

ExperimentBlock read_experiment(const Reader& r) {
  ExperimentBlock b;
  if (r.node().is_null()) return b;
  r.require_object();
  if (r.has("policies")) {
    b.policies.clear();
    for (const Reader& p : r.at("policies").items()) {
      const auto kind = parse_policy(p.string());
      if (!kind) invalid(p.path(), "expected pier, ptr or plpc");
      b.policies.push_back(*kind);
    }
  }
  if (r.has("h")) {
    b.h.clear();
    for (const Reader& v : r.at("h").items()) {
      b.h.push_back(to_int(v));
      if (b.h.back() < 1) invalid(v.path(), "must be >= 1");
    }
  }
  if (r.has("distributions")) {
    b.distributions.clear();
    for (const Reader& d : r.at("distributions").items()) b.distributions.push_back(read_distribution(d));
  }
  if (r.has("horizon")) b.horizon = r.at("horizon").number();
  if (r.has("warmup")) b.warmup = r.at("warmup").number();
  if (r.has("replications")) b.replications = r.at("replications").count();
  if (r.has("max_replications")) b.max_replications = r.at("max_replications").count();
  if (r.has("ci_target")) b.ci_target = r.at("ci_target").number();
  if (r.has("seed")) b.seed = static_cast<std::uint64_t>(r.at("seed").count());
  if (r.has("oracle")) b.oracle = r.at("oracle").boolean();
  if (r.has("oracle_state_cap")) b.oracle_state_cap = r.at("oracle_state_cap").count();
  if (r.has("output")) b.output = r.at("output").string();
  if (r.has("workers")) b.workers = r.at("workers").count();
  if (r.has("family")) {
    const Reader f = r.at("family");
    b.family = FamilySpec{f.at("count").count(), static_cast<std::uint64_t>(f.has("seed") ? f.at("seed").count() : 1)};
  }
  if (b.replications < 2) invalid(r.path() + ".replications", "must be >= 2");
  if (b.max_replications < b.replications) b.max_replications = b.replications;
  if (b.horizon && !(*b.horizon > 0.0)) invalid(r.path() + ".horizon", "must be > 0");
  if (b.warmup && !(*b.warmup >= 0.0)) invalid(r.path() + ".warmup", "must be >= 0");
  if (b.horizon && b.warmup && !(*b.horizon > *b.warmup)) invalid(r.path() + ".warmup", "must be below the horizon");
  if (b.policies.empty()) invalid(r.path() + ".policies", "must not be empty");
  if (b.h.empty()) invalid(r.path() + ".h", "must not be empty");
  if (b.distributions.empty()) invalid(r.path() + ".distributions", "must not be empty");
  return b;
}

json write_network(const NetworkConfig& c) {
  json classes = json::array();
  for (const TaskClass& t : c.classes) {
    json units = json::array();
    for (const ResourceUnits& w : t.resource_req) units.push_back(w ? json(*w) : json(nullptr));
    classes.push_back({{"arrival_rate", t.base_arrival_rate},
                       {"cloud_power", t.cloud_power},
                       {"units", units},
                       {"cloud_accessible", t.cloud_accessible}});
  }
  json groups = json::array();
  for (const ArcGroup& g : c.groups)
    groups.push_back({{"capacity", g.base_capacity}, {"power_per_unit", g.op_power_per_unit}, {"idle_power", g.base_idle_power}});
  json areas = json::array();
  for (const DestinationArea& a : c.areas)
    areas.push_back({{"groups", a.groups}, {"channels", a.base_channels}, {"mean_duration", a.mean_duration}});
  return {{"classes", classes},
          {"groups", groups},
          {"areas", areas},
          {"cloud_delay", c.cloud_delay},
          {"scaling", c.scaling},
          {"durations", format_distribution(c.durations)},
          {"cloud_timing", c.cloud_timing == CloudTiming::EffectiveRate ? "effective_rate" : "edge_plus_delay"}};
}

json write_experiment(const ExperimentBlock& b) {
  json policies = json::array();
  for (PolicyKind p : b.policies) {
    std::string name(to_string(p));
    for (char& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    policies.push_back(name);
  }
  json dists = json::array();
  for (const DurationLaw& d : b.distributions) dists.push_back(format_distribution(d));
  json out = {{"policies", policies},
              {"h", b.h},
              {"distributions", dists},
              {"replications", b.replications},
              {"max_replications", b.max_replications},
              {"ci_target", b.ci_target},
              {"seed", b.seed},
              {"oracle", b.oracle},
              {"oracle_state_cap", b.oracle_state_cap},
              {"output", b.output},
              {"workers", b.workers}};
  if (b.horizon) out["horizon"] = *b.horizon;
  if (b.warmup) out["warmup"] = *b.warmup;
  if (b.family) out["family"] = {{"count", b.family->count}, {"seed", b.family->seed}};
  return out;
}

}  // namespace

std::string format_distribution(const DurationLaw& law) {
  switch (law.family) {
    case DurationFamily::Exponential: return "exp";
    case DurationFamily::Deterministic: return "det";
    case DurationFamily::Pareto: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, law.shape);
      return "pareto:" + std::string(buf, res.ptr);
    }
  }
  return "?";
}

std::optional<DurationLaw> parse_distribution(std::string_view text) {
  if (text == "exp") return DurationLaw{DurationFamily::Exponential, 0.0};
  if (text == "det") return DurationLaw{DurationFamily::Deterministic, 0.0};
  constexpr std::string_view prefix = "pareto:";
  if (text.starts_with(prefix)) {
    const std::string_view num = text.substr(prefix.size());
    double shape = 0.0;
    const auto res = std::from_chars(num.data(), num.data() + num.size(), shape);
    if (res.ec != std::errc() || res.ptr != num.data() + num.size() || !(shape > 1.0)) return std::nullopt;
    return DurationLaw{DurationFamily::Pareto, shape};
  }
  return std::nullopt;
}

ScenarioFile parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line/column pair.
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < json_text.size(); ++i) {
      if (json_text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  const Reader root(doc, "$");
  root.require_object();
  ScenarioFile s;
  if (root.has("name")) s.name = root.at("name").string();
  if (root.has("network")) s.network = read_network(root.at("network"));
  if (root.has("experiment")) s.experiment = read_experiment(root.at("experiment"));
  if (!s.network && !s.experiment.family) invalid("$", "needs a network or an experiment.family");
  return s;
}

std::string serialize_scenario(const ScenarioFile& s) {
  json doc = {{"name", s.name}, {"experiment", write_experiment(s.experiment)}};
  if (s.network) doc["network"] = write_network(*s.network);
  return doc.dump(2) + "\n";
}

ScenarioFile load_scenario(const std::string& path_or_preset) {
  if (auto p = preset(path_or_preset)) return *p;
  std::ifstream in(path_or_preset, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path_or_preset);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

NetworkConfig fig1_config() {
  const double duration[] = {0.587051, 2.65982, 0.547387, 1.1986949, 4.78274};
  const double power[] = {1.08316, 10.0584, 1.18651, 8.0544, 16.0324};
  NetworkConfig c;
  c.classes.push_back({5.182638, 51.4714, std::vector<ResourceUnits>(5, 1), true});
  for (std::size_t k = 0; k < 5; ++k) {
    c.groups.push_back({1, power[k], 0.0, k});
    c.areas.push_back({{k}, {1}, {duration[k]}});
  }
  c.cloud_delay = 5.0;
  return validate_config(std::move(c));
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3"}; }

std::optional<ScenarioFile> preset(std::string_view name) {
  ScenarioFile s;
  s.name = std::string(name);
  ExperimentBlock& e = s.experiment;
  e.output = std::string(name) + ".csv";
  e.seed = 2023;
  if (name == "fig1") {
    s.network = fig1_config();
    e.policies = {PolicyKind::PIER, PolicyKind::PTR, PolicyKind::PLPC};
    e.h = {1, 2, 3};
    e.oracle = true;
    return s;
  }
  if (name == "fig2") {
    e.family = FamilySpec{500, 2};
    e.policies = {PolicyKind::PIER, PolicyKind::PTR, PolicyKind::PLPC};
    e.h = {1, 10, 20};
    e.horizon = 2000.0;
    e.warmup = 200.0;
    e.replications = 4;
    e.max_replications = 16;
    return s;
  }
  if (name == "fig3") {
    e.family = FamilySpec{500, 3};
    e.policies = {PolicyKind::PIER};
    e.h = {1};
    e.distributions = {DurationLaw{DurationFamily::Exponential, 0.0}, DurationLaw{DurationFamily::Deterministic, 0.0},
                       DurationLaw{DurationFamily::Pareto, 2.002}, DurationLaw{DurationFamily::Pareto, 1.981}};
    e.horizon = 5000.0;
    e.warmup = 500.0;
    e.replications = 4;
    e.max_replications = 16;
    return s;
  }
  return std::nullopt;
}

}  // namespace fogsched
