#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "femto/scenario.hpp"

namespace femto {

// Scheme <-> config/UI spelling ("none", "orthogonal", "priority",
// "throughput-approx", "throughput-exact").
std::string scheme_name(Scheme scheme);
Scheme scheme_from_name(const std::string& name);

// Parses a config document into a Scenario. The schema is strict: unknown
// fields are rejected, units are dB/dBm (or linear via the *_mw / plain
// variants), and exactly one of "nodes" and "generator" must be present.
// Generator configs are expanded into explicit nodes here, so the returned
// Scenario is always concrete.
Scenario parse_config(const nlohmann::json& doc);
Scenario parse_config_string(const std::string& text);
Scenario parse_config_file(const std::string& path);

// Re-serializes a scenario in the config schema using the linear-unit field
// variants, so parse(scenario_to_json(s)) reproduces s exactly.
nlohmann::json scenario_to_json(const Scenario& scenario);

struct RunConfig {
  std::string config_path;
  std::optional<Scheme> scheme_override;
  std::optional<std::int64_t> rounds_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::int64_t> grid_points_override;
  std::string out_dir = "out";
  bool compare = false;
  bool emit_csv = true;
  bool emit_summary = true;
};

// In-memory renderings, byte-stable across repeat runs of the same inputs.
std::string results_csv(const std::vector<RoundMetrics>& metrics);
nlohmann::json summary_json(const std::vector<RoundMetrics>& metrics,
                            Scheme scheme, std::uint64_t seed);
std::string comparison_csv(const std::vector<ComparisonRow>& rows);

// Writes results.csv, summary.json and scenario_echo.json (plus
// comparison.csv under --compare) into run.out_dir.
void emit_results(const std::vector<RoundMetrics>& metrics,
                  const Scenario& scenario, const RunConfig& run,
                  const std::vector<ComparisonRow>* comparison = nullptr);

}  // namespace femto
