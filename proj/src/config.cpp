#include "femto/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <string>

#include "femto/units.hpp"

namespace femto {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ValidationError(path + ": unknown field '" + it.key() + "'");
}

const json& require(const json& obj, const std::string& path,
                    const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ValidationError(path + "." + key + ": missing required field");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number())
    throw ValidationError(path + ": expected a number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer())
    throw ValidationError(path + ": expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_seed(const json& v, const std::string& path) {
  if (!(v.is_number_integer() || v.is_number_unsigned()) || v.is_number_float())
    throw ValidationError(path + ": expected a 64-bit integer seed");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  return static_cast<std::uint64_t>(v.get<std::int64_t>());
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string())
    throw ValidationError(path + ": expected a string");
  return v.get<std::string>();
}

// Fields that accept either a dB-domain or a linear-domain spelling. Exactly
// one of the two may be present; `required` demands one.
struct UnitField {
  const json& obj;
  std::string path;

  std::optional<double> pick(const std::string& db_key,
                             const std::string& linear_key, bool required,
                             bool dbm) const {
    const bool has_db = obj.contains(db_key);
    const bool has_linear = obj.contains(linear_key);
    if (has_db && has_linear)
      throw ValidationError(path + ": give either " + db_key + " or " +
                            linear_key + ", not both");
    if (has_db) {
      const double db = as_number(obj.at(db_key), path + "." + db_key);
      return dbm ? dbm_to_mw(db) : db_to_linear(db);
    }
    if (has_linear)
      return as_number(obj.at(linear_key), path + "." + linear_key);
    if (required)
      throw ValidationError(path + ": one of " + db_key + " or " + linear_key +
                            " is required");
    return std::nullopt;
  }
};

SystemParams parse_params(const json& obj) {
  const std::string path = "params";
  check_keys(obj, path,
             {"max_power_dbm", "max_power_mw", "rrm_power_dbm", "rrm_power_mw",
              "detection_threshold_dbm", "detection_threshold_mw",
              "grid_points", "pathloss_ref_db", "pathloss_exponent",
              "ref_distance_m"});
  SystemParams p;
  const UnitField u{obj, path};
  if (auto v = u.pick("max_power_dbm", "max_power_mw", false, true))
    p.max_power_mw = *v;
  if (auto v = u.pick("rrm_power_dbm", "rrm_power_mw", false, true))
    p.rrm_power_mw = *v;
  if (auto v = u.pick("detection_threshold_dbm", "detection_threshold_mw",
                      false, true))
    p.detection_threshold_mw = *v;
  if (obj.contains("grid_points"))
    p.grid_points = as_integer(obj.at("grid_points"), path + ".grid_points");
  if (obj.contains("pathloss_ref_db"))
    p.pathloss_ref_db =
        as_number(obj.at("pathloss_ref_db"), path + ".pathloss_ref_db");
  if (obj.contains("pathloss_exponent"))
    p.pathloss_exponent =
        as_number(obj.at("pathloss_exponent"), path + ".pathloss_exponent");
  if (obj.contains("ref_distance_m"))
    p.ref_distance_m =
        as_number(obj.at("ref_distance_m"), path + ".ref_distance_m");
  validate_params(p);
  return p;
}

Node parse_node(const json& obj, std::size_t i) {
  const std::string path = "nodes[" + std::to_string(i) + "]";
  if (!obj.is_object()) throw ValidationError(path + ": expected an object");
  const std::string kind =
      as_string(require(obj, path, "kind"), path + ".kind");

  Node n;
  n.id = as_integer(require(obj, path, "id"), path + ".id");
  n.x = as_number(require(obj, path, "x"), path + ".x");
  n.y = as_number(require(obj, path, "y"), path + ".y");

  if (kind == "fbs") {
    check_keys(obj, path, {"id", "kind", "x", "y"});
    n.kind = NodeKind::Fbs;
    return n;
  }
  if (kind != "fms")
    throw ValidationError(path + ".kind: expected \"fbs\" or \"fms\"");

  check_keys(obj, path,
             {"id", "kind", "x", "y", "serving_fbs", "priority",
              "target_sinr_db", "target_sinr", "retransmission", "noise_dbm",
              "noise_mw"});
  n.kind = NodeKind::Fms;
  n.serving_fbs =
      as_integer(require(obj, path, "serving_fbs"), path + ".serving_fbs");
  n.priority = as_number(require(obj, path, "priority"), path + ".priority");

  const bool has_retx = obj.contains("retransmission");
  const UnitField u{obj, path};
  if (has_retx) {
    const json& v = obj.at("retransmission");
    if (!v.is_boolean() || !v.get<bool>())
      throw ValidationError(path + ".retransmission: must be true when present");
    if (obj.contains("target_sinr_db") || obj.contains("target_sinr"))
      throw ValidationError(path +
                            ": retransmission excludes an explicit target SINR");
    n.target_sinr = 0.0;
  } else {
    n.target_sinr = *u.pick("target_sinr_db", "target_sinr", true, false);
  }
  n.noise_mw = *u.pick("noise_dbm", "noise_mw", true, true);
  return n;
}

std::vector<GainOverrideEntry> parse_gain_override(const json& arr) {
  if (!arr.is_array())
    throw ValidationError("gain_override: expected an array");
  std::vector<GainOverrideEntry> entries;
  entries.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "gain_override[" + std::to_string(i) + "]";
    const json& obj = arr.at(i);
    if (!obj.is_object()) throw ValidationError(path + ": expected an object");
    check_keys(obj, path, {"a", "b", "gain_db", "gain"});
    GainOverrideEntry e;
    e.a = as_integer(require(obj, path, "a"), path + ".a");
    e.b = as_integer(require(obj, path, "b"), path + ".b");
    e.gain = *UnitField{obj, path}.pick("gain_db", "gain", true, false);
    entries.push_back(e);
  }
  return entries;
}

GeneratorConfig parse_generator(const json& obj, const SystemParams& params) {
  const std::string path = "generator";
  if (!obj.is_object()) throw ValidationError(path + ": expected an object");
  check_keys(obj, path,
             {"n_cells", "area_m", "seed", "fms_radius_m", "priority_set",
              "target_sinr_db_min", "target_sinr_db_max", "noise_dbm"});
  GeneratorConfig g;
  g.params = params;
  g.n_cells = as_integer(require(obj, path, "n_cells"), path + ".n_cells");
  g.area_m = as_number(require(obj, path, "area_m"), path + ".area_m");
  g.seed = as_seed(require(obj, path, "seed"), path + ".seed");
  if (obj.contains("fms_radius_m"))
    g.fms_radius_m = as_number(obj.at("fms_radius_m"), path + ".fms_radius_m");
  if (obj.contains("priority_set")) {
    const json& set = obj.at("priority_set");
    if (!set.is_array() || set.empty())
      throw ValidationError(path + ".priority_set: expected a nonempty array");
    g.priority_set.clear();
    for (std::size_t i = 0; i < set.size(); ++i)
      g.priority_set.push_back(as_number(
          set.at(i), path + ".priority_set[" + std::to_string(i) + "]"));
  }
  if (obj.contains("target_sinr_db_min"))
    g.target_sinr_db_min =
        as_number(obj.at("target_sinr_db_min"), path + ".target_sinr_db_min");
  if (obj.contains("target_sinr_db_max"))
    g.target_sinr_db_max =
        as_number(obj.at("target_sinr_db_max"), path + ".target_sinr_db_max");
  if (obj.contains("noise_dbm"))
    g.noise_dbm = as_number(obj.at("noise_dbm"), path + ".noise_dbm");
  return g;
}

// Fixed-point rendering for the CSV reports: six decimals, with the
// zero-SINR dB case pinned to "-inf" independent of the C library.
std::string fmt6(double v) {
  if (!std::isfinite(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::None: return "none";
    case Scheme::Orthogonal: return "orthogonal";
    case Scheme::Priority: return "priority";
    case Scheme::ThroughputApprox: return "throughput-approx";
    case Scheme::ThroughputExact: return "throughput-exact";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "none") return Scheme::None;
  if (name == "orthogonal") return Scheme::Orthogonal;
  if (name == "priority") return Scheme::Priority;
  if (name == "throughput-approx") return Scheme::ThroughputApprox;
  if (name == "throughput-exact") return Scheme::ThroughputExact;
  throw ValidationError("scheme: unknown scheme '" + name + "'");
}

Scenario parse_config(const json& doc) {
  if (!doc.is_object())
    throw ValidationError("config: expected a JSON object");
  check_keys(doc, "config",
             {"params", "nodes", "generator", "gain_override", "scheme",
              "rounds", "resource_count", "seed"});

  const bool has_nodes = doc.contains("nodes");
  const bool has_generator = doc.contains("generator");
  if (has_nodes == has_generator)
    throw ValidationError(
        "config: exactly one of 'nodes' and 'generator' is required");

  SystemParams params;
  if (doc.contains("params")) {
    if (!doc.at("params").is_object())
      throw ValidationError("params: expected an object");
    params = parse_params(doc.at("params"));
  }

  Scenario s;
  if (has_generator) {
    if (doc.contains("seed"))
      throw ValidationError(
          "config.seed: use generator.seed when a generator is configured");
    s = generate_random_scenario(parse_generator(doc.at("generator"), params));
  } else {
    s.params = params;
    const json& nodes = doc.at("nodes");
    if (!nodes.is_array() || nodes.empty())
      throw ValidationError("nodes: expected a nonempty array");
    for (std::size_t i = 0; i < nodes.size(); ++i)
      s.nodes.push_back(parse_node(nodes.at(i), i));
    if (doc.contains("seed")) s.seed = as_seed(doc.at("seed"), "config.seed");
  }

  if (doc.contains("gain_override"))
    s.gain_override = parse_gain_override(doc.at("gain_override"));

  s.scheme = doc.contains("scheme")
                 ? scheme_from_name(as_string(doc.at("scheme"), "config.scheme"))
                 : Scheme::None;
  s.rounds = doc.contains("rounds")
                 ? as_integer(doc.at("rounds"), "config.rounds")
                 : 1;
  s.resource_count = doc.contains("resource_count")
                         ? as_integer(doc.at("resource_count"),
                                      "config.resource_count")
                         : 1;

  validate_scenario(s);
  return s;
}

Scenario parse_config_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

Scenario parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_string(text);
}

json scenario_to_json(const Scenario& s) {
  // Linear-unit spellings throughout, so a reparse reproduces the scenario
  // value exactly instead of through a dB round trip.
  json params = {
      {"max_power_mw", s.params.max_power_mw},
      {"rrm_power_mw", s.params.rrm_power_mw},
      {"detection_threshold_mw", s.params.detection_threshold_mw},
      {"grid_points", s.params.grid_points},
      {"pathloss_ref_db", s.params.pathloss_ref_db},
      {"pathloss_exponent", s.params.pathloss_exponent},
      {"ref_distance_m", s.params.ref_distance_m},
  };
  json nodes = json::array();
  for (const Node& n : s.nodes) {
    if (n.kind == NodeKind::Fbs) {
      nodes.push_back({{"id", n.id}, {"kind", "fbs"}, {"x", n.x}, {"y", n.y}});
    } else {
      nodes.push_back({{"id", n.id},
                       {"kind", "fms"},
                       {"x", n.x},
                       {"y", n.y},
                       {"serving_fbs", n.serving_fbs},
                       {"priority", n.priority},
                       {"target_sinr", n.target_sinr},
                       {"noise_mw", n.noise_mw}});
    }
  }
  json doc = {{"params", params},
              {"nodes", nodes},
              {"scheme", scheme_name(s.scheme)},
              {"rounds", s.rounds},
              {"resource_count", s.resource_count},
              {"seed", s.seed}};
  if (s.gain_override) {
    json entries = json::array();
    for (const GainOverrideEntry& e : *s.gain_override)
      entries.push_back({{"a", e.a}, {"b", e.b}, {"gain", e.gain}});
    doc["gain_override"] = entries;
  }
  return doc;
}

std::string results_csv(const std::vector<RoundMetrics>& metrics) {
  std::string out = "round,fms_id,resource,power_mw,sinr_db,throughput_bps_hz\n";
  for (std::size_t round = 0; round < metrics.size(); ++round) {
    for (const FmsRoundStat& e : metrics[round].per_fms) {
      out += std::to_string(round);
      out += ',';
      out += std::to_string(e.fms);
      out += ',';
      out += std::to_string(e.resource);
      out += ',';
      out += fmt6(e.power_mw);
      out += ',';
      out += fmt6(linear_to_db(e.sinr));
      out += ',';
      out += fmt6(e.throughput_bps_hz);
      out += '\n';
    }
  }
  return out;
}

json summary_json(const std::vector<RoundMetrics>& metrics, Scheme scheme,
                  std::uint64_t seed) {
  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  json warnings = json::array();
  for (std::size_t round = 0; round < metrics.size(); ++round) {
    const double v = metrics[round].system_weighted_throughput;
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    for (const std::string& w : metrics[round].warnings)
      warnings.push_back("round " + std::to_string(round) + ": " + w);
  }
  return json{{"scheme", scheme_name(scheme)},
              {"seed", seed},
              {"rounds", metrics.size()},
              {"mean_system_weighted_throughput",
               sum / static_cast<double>(metrics.size())},
              {"min_system_weighted_throughput", lo},
              {"max_system_weighted_throughput", hi},
              {"warnings", warnings}};
}

std::string comparison_csv(const std::vector<ComparisonRow>& rows) {
  std::string out =
      "scheme,mean_system_weighted_throughput,sinr_min_db,sinr_median_db,"
      "sinr_max_db,silenced_fbs_count\n";
  for (const ComparisonRow& r : rows) {
    out += scheme_name(r.scheme);
    out += ',';
    out += fmt6(r.mean_system_weighted_throughput);
    out += ',';
    out += fmt6(r.sinr_min_db);
    out += ',';
    out += fmt6(r.sinr_median_db);
    out += ',';
    out += fmt6(r.sinr_max_db);
    out += ',';
    out += std::to_string(r.silenced_fbs_count);
    out += '\n';
  }
  return out;
}

void emit_results(const std::vector<RoundMetrics>& metrics,
                  const Scenario& scenario, const RunConfig& run,
                  const std::vector<ComparisonRow>* comparison) {
  const std::filesystem::path dir(run.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string());

  if (run.emit_csv) write_file(dir / "results.csv", results_csv(metrics));
  if (run.emit_summary)
    write_file(dir / "summary.json",
               summary_json(metrics, scenario.scheme, scenario.seed).dump(2) +
                   "\n");
  write_file(dir / "scenario_echo.json", scenario_to_json(scenario).dump(2) + "\n");
  if (comparison)
    write_file(dir / "comparison.csv", comparison_csv(*comparison));
}

}  // namespace femto
