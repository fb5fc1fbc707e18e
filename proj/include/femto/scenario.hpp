#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "femto/airlink.hpp"
#include "femto/model.hpp"

namespace femto {

enum class Scheme { None, Orthogonal, Priority, ThroughputApprox, ThroughputExact };

struct Scenario {
  SystemParams params;
  std::vector<Node> nodes;
  std::optional<std::vector<GainOverrideEntry>> gain_override;
  std::int64_t resource_count = 1;
  std::int64_t rounds = 1;
  Scheme scheme = Scheme::None;
  std::uint64_t seed = 0;
};

// Throws ValidationError naming the offending field.
void validate_scenario(const Scenario& scenario);

struct FmsRoundStat {
  NodeId fms = 0;
  ResourceId resource = 0;
  double power_mw = 0.0;  // serving fBS's decision on this resource
  double sinr = 0.0;      // linear
  double throughput_bps_hz = 0.0;
};

struct RoundMetrics {
  std::vector<FmsRoundStat> per_fms;  // ascending fms id
  double system_weighted_throughput = 0.0;
  std::vector<std::string> warnings;
};

// Deterministic 64-bit generator: the state advances through mix64, so the
// stream is fully pinned by the seed.
struct Mix64Rng {
  std::uint64_t state;
  explicit Mix64Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state = mix64(state);
    return state;
  }
  double next_unit() { return static_cast<double>(next()) * 0x1.0p-64; }
};

struct GeneratorConfig {
  std::int64_t n_cells = 1;
  double area_m = 50.0;
  std::uint64_t seed = 0;
  double fms_radius_m = 8.0;
  std::vector<double> priority_set = {1.0, 2.0, 3.0};
  double target_sinr_db_min = 0.0;
  double target_sinr_db_max = 10.0;
  double noise_dbm = -95.0;
  SystemParams params{};
  std::int64_t resource_count = 1;
  std::int64_t rounds = 3;
  Scheme scheme = Scheme::ThroughputApprox;
};

// fBSs uniform in the square, each fMS uniform in a disk around its fBS
// (rejection sampling, so the draw uses only arithmetic and comparisons).
Scenario generate_random_scenario(const GeneratorConfig& cfg);
Scenario generate_random_scenario(std::int64_t n_cells, double area_m,
                                  std::uint64_t seed);

// Runs scenario.rounds coordination rounds sequentially, threading the
// previous round's power map for retransmission handling. Dispatches on
// scenario.scheme; None runs every fBS at full power, Orthogonal runs the
// spectrum-splitting baseline.
std::vector<RoundMetrics> run_scenario(const Scenario& scenario);

// Interference-free baseline: each fBS gets a disjoint 1/K share of the
// spectrum and transmits at full power, so per-fMS throughput carries the
// 1/K spectral share factor.
std::vector<RoundMetrics> baseline_orthogonal(const Scenario& scenario);

struct ComparisonRow {
  Scheme scheme = Scheme::None;
  double mean_system_weighted_throughput = 0.0;
  double sinr_min_db = 0.0;
  double sinr_median_db = 0.0;
  double sinr_max_db = 0.0;
  std::int64_t silenced_fbs_count = 0;  // fBSs with any zero-power decision
};

// Runs each scheme on the identical scenario and seed.
std::vector<ComparisonRow> compare_schemes(const Scenario& scenario,
                                           const std::vector<Scheme>& schemes);

}  // namespace femto
