#include "femto/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace femto {

namespace {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Request: return "request";
    case Phase::RrmBroadcast: return "rrm-broadcast";
    case Phase::PowerControl: return "power-control";
    case Phase::Pilot: return "pilot";
    case Phase::CqiFeedback: return "cqi-feedback";
    case Phase::Data: return "data";
  }
  return "?";
}

std::string slot_name(NodeId fbs, ResourceId resource) {
  return "fBS " + std::to_string(fbs) + " resource " + std::to_string(resource);
}

}  // namespace

RoundState::RoundState(std::int64_t round_index, PowerMap prev_power_map)
    : round_index_(round_index), prev_power_map_(std::move(prev_power_map)) {}

void RoundState::advance(Phase next) {
  if (static_cast<int>(next) != static_cast<int>(phase_) + 1)
    throw Error(std::string("round phase ") + phase_name(phase_) +
                " cannot advance to " + phase_name(next));
  phase_ = next;
}

void RoundState::set_power(NodeId fbs, ResourceId resource, double power_mw) {
  if (phase_ < Phase::PowerControl)
    throw Error("power map is not writable before the power-control phase");
  power_map_[{fbs, resource}] = power_mw;
}

const PowerMap& RoundState::power_map() const {
  if (phase_ < Phase::PowerControl)
    throw Error("power map is not readable before the power-control phase");
  return power_map_;
}

std::map<NodeId, ResourceId> allocate_resources(const Topology& topo,
                                                std::int64_t resource_count) {
  if (resource_count < 1)
    throw ValidationError("resource_count: must be at least 1");
  std::map<NodeId, ResourceId> allocation;
  std::map<PowerKey, NodeId> slot_owner;
  std::int64_t index = 0;
  for (NodeId fms : topo.fms_ids()) {
    const ResourceId resource = index % resource_count;
    ++index;
    const NodeId fbs = topo.node(fms).serving_fbs;
    auto [it, fresh] = slot_owner.emplace(PowerKey{fbs, resource}, fms);
    if (!fresh)
      throw ValidationError("nodes: fBS " + std::to_string(fbs) +
                            " would serve fMSs " + std::to_string(it->second) +
                            " and " + std::to_string(fms) + " on resource " +
                            std::to_string(resource) +
                            "; increase resource_count");
    allocation[fms] = resource;
  }
  return allocation;
}

double measure_sinr(NodeId fms, ResourceId resource, const PowerMap& power_map,
                    const GainMatrix& gains, const Topology& topo) {
  const Node& node = topo.node(fms);
  if (node.kind != NodeKind::Fms)
    throw ValidationError("measure_sinr: node " + std::to_string(fms) +
                          " is not an fMS");
  auto serving = power_map.find({node.serving_fbs, resource});
  if (serving == power_map.end())
    throw IncompleteRoundError("measure_sinr: no power decision for " +
                               slot_name(node.serving_fbs, resource));
  double interference = 0.0;
  for (const auto& [key, power] : power_map) {
    if (key.second != resource || key.first == node.serving_fbs) continue;
    interference += power * gains.at(key.first, fms);
  }
  const double signal = serving->second * gains.at(node.serving_fbs, fms);
  return signal / (interference + node.noise_mw);
}

std::vector<CoordinationContext> build_round_contexts(
    const Topology& topo, const GainMatrix& gains, const SystemParams& params,
    const std::map<NodeId, ResourceId>& allocation) {
  // Every fMS broadcasts; every fBS hears every RRM at its own received power.
  struct Transmission {
    RrmMessage message;
    double transmit_power_mw;
  };
  std::vector<Transmission> onair;
  for (NodeId fms : topo.fms_ids()) {
    const Node& node = topo.node(fms);
    const RrmMessage msg = build_rrm(node, allocation.at(fms));
    const double p_tran =
        rrm_transmit_power(gains.at(node.serving_fbs, fms), params);
    onair.push_back({msg, p_tran});
  }

  std::vector<CoordinationContext> contexts;
  for (NodeId fbs : topo.fbs_ids()) {
    std::vector<ReceivedRrm> received;
    received.reserve(onair.size());
    for (const Transmission& tx : onair)
      received.push_back(
          {tx.message, rrm_received_power(gains.at(tx.message.sender_fms, fbs),
                                          tx.transmit_power_mw)});
    std::set<ResourceId> resources;
    for (NodeId fms : topo.fms_served_by(fbs)) resources.insert(allocation.at(fms));
    for (ResourceId resource : resources)
      contexts.push_back(
          collect_context(fbs, resource, received, params, topo, gains));
  }
  return contexts;
}

namespace {

// Neighbor entries carrying the retransmission sentinel cannot enter the
// approximate objective; they fall back to the sender's last advertised
// target, or drop out of the sum when no history exists.
CoordinationContext sanitize_for_approx(const CoordinationContext& ctx,
                                        const TargetHistory& last_targets,
                                        std::vector<std::string>* warnings) {
  CoordinationContext out = ctx;
  std::vector<NeighborEntry> kept;
  kept.reserve(out.neighbors.size());
  for (NeighborEntry n : out.neighbors) {
    if (n.target_sinr == 0.0) {
      auto it = last_targets.find(n.sender_fms);
      if (it == last_targets.end()) {
        if (warnings)
          warnings->push_back(slot_name(ctx.fbs, ctx.resource) +
                              ": dropped sentinel RRM from fMS " +
                              std::to_string(n.sender_fms) +
                              " (no target history)");
        continue;
      }
      n.target_sinr = it->second;
    }
    kept.push_back(n);
  }
  out.neighbors = std::move(kept);
  return out;
}

CoordinationContext prepare_for_scheme(const CoordinationContext& ctx,
                                       Scheme scheme, const Topology& topo,
                                       const GainMatrix& gains,
                                       const TargetHistory& last_targets,
                                       std::vector<std::string>* warnings) {
  switch (scheme) {
    case Scheme::Priority:
      return ctx;
    case Scheme::ThroughputApprox:
      return sanitize_for_approx(ctx, last_targets, warnings);
    case Scheme::ThroughputExact: {
      CoordinationContext out = ctx;
      attach_exact_gains(out, topo, gains);
      return out;
    }
    default:
      throw ValidationError("scheme: not a per-round coordination scheme");
  }
}

PowerDecision decide(const CoordinationContext& ctx, Scheme scheme,
                     std::int64_t round_index, std::uint64_t seed,
                     const SystemParams& params) {
  switch (scheme) {
    case Scheme::Priority:
      return priority_control(ctx, round_index, seed, params);
    case Scheme::ThroughputApprox:
      return optimize_power(ctx, ObjectiveMode::Approx, params);
    case Scheme::ThroughputExact:
      return optimize_power(ctx, ObjectiveMode::Exact, params);
    default:
      throw ValidationError("scheme: not a per-round coordination scheme");
  }
}

RoundResult finish_round(const Topology& topo, const GainMatrix& gains,
                         const std::map<NodeId, ResourceId>& allocation,
                         const PowerMap& power_map,
                         std::vector<std::string> warnings) {
  RoundResult result;
  result.power_map = power_map;
  result.metrics.warnings = std::move(warnings);
  for (NodeId fms : topo.fms_ids()) {
    const Node& node = topo.node(fms);
    const ResourceId resource = allocation.at(fms);
    const double sinr = measure_sinr(fms, resource, power_map, gains, topo);
    result.cqi_reports.push_back({fms, resource, sinr});
    const double throughput = std::log2(1.0 + sinr);
    result.metrics.per_fms.push_back(
        {fms, resource, power_map.at({node.serving_fbs, resource}), sinr,
         throughput});
    result.metrics.system_weighted_throughput += node.priority * throughput;
  }
  return result;
}

}  // namespace

PowerDecision handle_retransmission(const CoordinationContext& ctx,
                                    const PowerMap& prev_power_map,
                                    Scheme scheme, std::int64_t round_index,
                                    std::uint64_t seed,
                                    const SystemParams& params,
                                    std::vector<std::string>* warnings) {
  auto it = prev_power_map.find({ctx.fbs, ctx.resource});
  if (it != prev_power_map.end())
    return PowerDecision{ctx.fbs, ctx.resource, it->second};
  if (warnings)
    warnings->push_back(slot_name(ctx.fbs, ctx.resource) +
                        ": retransmission sentinel with no previous decision; "
                        "treated as a fresh request");
  return decide(ctx, scheme, round_index, seed, params);
}

RoundResult run_coordination_round(const Topology& topo, const GainMatrix& gains,
                                   const SystemParams& params,
                                   std::int64_t resource_count, Scheme scheme,
                                   std::int64_t round_index, std::uint64_t seed,
                                   const PowerMap& prev_power_map,
                                   const TargetHistory& last_targets) {
  if (scheme != Scheme::Priority && scheme != Scheme::ThroughputApprox &&
      scheme != Scheme::ThroughputExact)
    throw ValidationError(
        "scheme: coordination rounds run priority, throughput-approx or "
        "throughput-exact only");

  RoundState state(round_index, prev_power_map);
  const auto allocation = allocate_resources(topo, resource_count);

  state.advance(Phase::RrmBroadcast);
  const auto contexts = build_round_contexts(topo, gains, params, allocation);

  state.advance(Phase::PowerControl);
  std::vector<std::string> warnings;
  for (const CoordinationContext& raw : contexts) {
    const CoordinationContext ctx = prepare_for_scheme(
        raw, scheme, topo, gains, last_targets, &warnings);
    const PowerDecision decision =
        ctx.own.target_sinr == 0.0
            ? handle_retransmission(ctx, state.prev_power_map(), scheme,
                                    round_index, seed, params, &warnings)
            : decide(ctx, scheme, round_index, seed, params);
    state.set_power(decision.fbs, decision.resource, decision.power_mw);
  }

  state.advance(Phase::Pilot);      // pilots go out at the decided powers
  state.advance(Phase::CqiFeedback);
  state.advance(Phase::Data);
  return finish_round(topo, gains, allocation, state.power_map(),
                      std::move(warnings));
}

RoundResult run_coordination_round(const Scenario& scenario, Scheme scheme,
                                   std::int64_t round_index, std::uint64_t seed,
                                   const PowerMap& prev_power_map,
                                   const TargetHistory& last_targets) {
  validate_params(scenario.params);
  const Topology topo(scenario.nodes);
  const GainMatrix gains =
      scenario.gain_override
          ? compute_gains(topo, scenario.params, *scenario.gain_override)
          : compute_gains(topo, scenario.params);
  return run_coordination_round(topo, gains, scenario.params,
                                scenario.resource_count, scheme, round_index,
                                seed, prev_power_map, last_targets);
}

RoundResult run_full_power_round(const Topology& topo, const GainMatrix& gains,
                                 const SystemParams& params,
                                 std::int64_t resource_count) {
  const auto allocation = allocate_resources(topo, resource_count);
  PowerMap power_map;
  for (const auto& [fms, resource] : allocation)
    power_map[{topo.node(fms).serving_fbs, resource}] = params.max_power_mw;
  return finish_round(topo, gains, allocation, power_map, {});
}

}  // namespace femto
