#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "femto/airlink.hpp"
#include "femto/powerctrl.hpp"
#include "femto/scenario.hpp"

namespace femto {

// Coordination round phases, in wire order.
enum class Phase { Request, RrmBroadcast, PowerControl, Pilot, CqiFeedback, Data };

using PowerKey = std::pair<NodeId, ResourceId>;
using PowerMap = std::map<PowerKey, double>;

// Last non-sentinel target SINR each fMS advertised, threaded across rounds.
using TargetHistory = std::map<NodeId, double>;

// Explicit state machine for one round. Phases advance strictly in
// declaration order and the power map only accepts writes once the
// power-control phase has been reached.
class RoundState {
 public:
  explicit RoundState(std::int64_t round_index, PowerMap prev_power_map = {});

  Phase phase() const { return phase_; }
  std::int64_t round_index() const { return round_index_; }
  void advance(Phase next);  // throws Error on an out-of-order transition
  void set_power(NodeId fbs, ResourceId resource, double power_mw);
  const PowerMap& power_map() const;  // throws before PowerControl
  const PowerMap& prev_power_map() const { return prev_power_map_; }

 private:
  Phase phase_ = Phase::Request;
  std::int64_t round_index_ = 0;
  PowerMap power_map_;
  PowerMap prev_power_map_;
};

struct CqiReport {
  NodeId fms = 0;
  ResourceId resource = 0;
  double measured_sinr = 0.0;  // linear, unquantized
};

struct RoundResult {
  PowerMap power_map;
  std::vector<CqiReport> cqi_reports;
  RoundMetrics metrics;
};

// Round-robin over the resource count by ascending fMS id. Throws when two
// fMSs of the same fBS land on the same resource (one served link per fBS
// per resource).
std::map<NodeId, ResourceId> allocate_resources(const Topology& topo,
                                                std::int64_t resource_count);

// Pilot-based SINR at one fMS: serving power over the sum of co-channel
// interference and noise. A zero-power fBS contributes nothing.
double measure_sinr(NodeId fms, ResourceId resource, const PowerMap& power_map,
                    const GainMatrix& gains, const Topology& topo);

// The RRM broadcast and decode stage in isolation: one raw context per
// (fBS, resource) pair the fBS serves, ordered by (fbs, resource).
std::vector<CoordinationContext> build_round_contexts(
    const Topology& topo, const GainMatrix& gains, const SystemParams& params,
    const std::map<NodeId, ResourceId>& allocation);

// Sentinel path: an own RRM with zero target keeps the previous decision
// untouched and skips the optimizer. Without a previous decision the request
// is treated as fresh (the scheme's normal rule runs) and a warning is
// recorded.
PowerDecision handle_retransmission(const CoordinationContext& ctx,
                                    const PowerMap& prev_power_map,
                                    Scheme scheme, std::int64_t round_index,
                                    std::uint64_t seed,
                                    const SystemParams& params,
                                    std::vector<std::string>* warnings);

// One full coordination round: request, RRM broadcast, power control, pilot,
// CQI measurement, data metrics. Deterministic in all of its inputs.
// `scheme` must be Priority, ThroughputApprox or ThroughputExact.
RoundResult run_coordination_round(const Scenario& scenario, Scheme scheme,
                                   std::int64_t round_index, std::uint64_t seed,
                                   const PowerMap& prev_power_map = {},
                                   const TargetHistory& last_targets = {});

// Prebuilt-topology overload used by multi-round drivers.
RoundResult run_coordination_round(const Topology& topo, const GainMatrix& gains,
                                   const SystemParams& params,
                                   std::int64_t resource_count, Scheme scheme,
                                   std::int64_t round_index, std::uint64_t seed,
                                   const PowerMap& prev_power_map = {},
                                   const TargetHistory& last_targets = {});

// Reference round with no coordination: every serving fBS at full power.
RoundResult run_full_power_round(const Topology& topo, const GainMatrix& gains,
                                 const SystemParams& params,
                                 std::int64_t resource_count);

}  // namespace femto
