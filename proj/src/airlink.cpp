#include "femto/airlink.hpp"

#include <algorithm>
#include <string>

namespace femto {

std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RrmMessage build_rrm(const Node& fms, ResourceId resource) {
  if (fms.kind != NodeKind::Fms)
    throw ValidationError("build_rrm: node " + std::to_string(fms.id) +
                          " is not an fMS");
  return RrmMessage{
      .sender_fms = fms.id,
      .target_sinr = fms.target_sinr,
      .resource = resource,
      .hashed_bs_id = mix64(static_cast<std::uint64_t>(fms.serving_fbs)),
      .priority = fms.priority,
  };
}

double rrm_transmit_power(double serving_gain, const SystemParams& params) {
  if (!(serving_gain > 0.0))
    throw InvalidGainError("rrm_transmit_power: serving gain must be positive");
  return std::min(params.rrm_power_mw / serving_gain, params.max_power_mw);
}

double rrm_received_power(double cross_gain, double transmit_power_mw) {
  if (!(cross_gain > 0.0))
    throw InvalidGainError("rrm_received_power: cross gain must be positive");
  return cross_gain * transmit_power_mw;
}

CoordinationContext collect_context(NodeId fbs, ResourceId resource,
                                    std::span<const ReceivedRrm> received,
                                    const SystemParams& params,
                                    const Topology& topo,
                                    const GainMatrix& gains) {
  CoordinationContext ctx;
  ctx.fbs = fbs;
  ctx.resource = resource;

  const std::uint64_t own_hash = mix64(static_cast<std::uint64_t>(fbs));
  bool own_found = false;

  for (const ReceivedRrm& rx : received) {
    const RrmMessage& msg = rx.message;
    if (msg.resource != resource) continue;
    if (rx.received_power_mw < params.detection_threshold_mw) continue;

    if (msg.hashed_bs_id == own_hash) {
      if (own_found)
        throw ValidationError("collect_context: fBS " + std::to_string(fbs) +
                              " decoded two own RRMs on resource " +
                              std::to_string(resource));
      own_found = true;
      ctx.own = OwnLink{
          .fms = msg.sender_fms,
          .priority = msg.priority,
          .target_sinr = msg.target_sinr,
          .gain = gains.at(fbs, msg.sender_fms),
          .noise_mw = topo.node(msg.sender_fms).noise_mw,
          .hashed_bs_id = msg.hashed_bs_id,
      };
      continue;
    }
    ctx.neighbors.push_back(NeighborEntry{
        .sender_fms = msg.sender_fms,
        .priority = msg.priority,
        .target_sinr = msg.target_sinr,
        .received_power_mw = rx.received_power_mw,
        .hashed_bs_id = msg.hashed_bs_id,
    });
  }

  if (!own_found)
    throw OwnRrmMissingError("collect_context: fBS " + std::to_string(fbs) +
                             " has no decoded RRM from its own fMS on resource " +
                             std::to_string(resource));
  return ctx;
}

void attach_exact_gains(CoordinationContext& ctx, const Topology& topo,
                        const GainMatrix& gains) {
  std::map<NodeId, ExactNeighborGains> exact;
  for (const NeighborEntry& n : ctx.neighbors) {
    const Node& sender = topo.node(n.sender_fms);
    exact.emplace(n.sender_fms,
                  ExactNeighborGains{
                      .serving_gain = gains.at(sender.serving_fbs, n.sender_fms),
                      .coordinator_gain = gains.at(n.sender_fms, ctx.fbs),
                      .victim_gain = gains.at(sender.serving_fbs, ctx.own.fms),
                      .noise_mw = sender.noise_mw,
                  });
  }
  ctx.exact_gains = std::move(exact);
}

}  // namespace femto
