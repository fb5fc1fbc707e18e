#pragma once

#include <cstdint>
#include <span>

#include "femto/model.hpp"
#include "femto/powerctrl.hpp"

namespace femto {

// SplitMix64 finalizer, pinned bit-exactly: it hashes BS ids into RRMs and
// feeds the tie lottery, so replays must agree across runs.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Over-the-air resource coordination request broadcast by an fMS.
struct RrmMessage {
  NodeId sender_fms = 0;
  double target_sinr = 0.0;  // linear; 0 = retransmission sentinel
  ResourceId resource = 0;
  std::uint64_t hashed_bs_id = 0;  // mix64 of the serving fBS id
  double priority = 0.0;
};

RrmMessage build_rrm(const Node& fms, ResourceId resource);

struct ReceivedRrm {
  RrmMessage message;
  double received_power_mw = 0.0;  // p_rec at the decoding fBS
};

// min{P_RRM / h, P}: inverts the serving-link gain so that an uncapped RRM
// arrives at the nominal power, but never exceeds the hardware ceiling.
double rrm_transmit_power(double serving_gain, const SystemParams& params);

// Received RRM power over a cross link.
double rrm_received_power(double cross_gain, double transmit_power_mw);

// Decodes the RRM set for one (fBS, resource): keeps messages on the resource
// whose received power clears the detection threshold, splits out the fBS's
// own served fMS, and attaches the own-link terms from the topology. Throws
// OwnRrmMissingError when the own fMS's RRM did not make it into the set.
CoordinationContext collect_context(NodeId fbs, ResourceId resource,
                                    std::span<const ReceivedRrm> received,
                                    const SystemParams& params,
                                    const Topology& topo,
                                    const GainMatrix& gains);

// Adds the true link terms every neighbor entry needs in exact-objective mode.
void attach_exact_gains(CoordinationContext& ctx, const Topology& topo,
                        const GainMatrix& gains);

}  // namespace femto
