#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "femto/model.hpp"

namespace femto {

// One decoded RRM as seen by the coordinating fBS.
struct NeighborEntry {
  NodeId sender_fms = 0;
  double priority = 0.0;
  double target_sinr = 0.0;        // linear; 0 = retransmission sentinel
  double received_power_mw = 0.0;  // RRM power measured at the coordinator
  std::uint64_t hashed_bs_id = 0;
};

// The coordinator's own served link on this resource.
struct OwnLink {
  NodeId fms = 0;
  double priority = 0.0;
  double target_sinr = 0.0;  // from the own RRM; 0 = retransmission sentinel
  double gain = 0.0;         // h_c: coordinator -> its own fMS
  double noise_mw = 0.0;     // sigma_c^2 at the own fMS
  std::uint64_t hashed_bs_id = 0;
};

// True per-neighbor link terms; only available in exact-objective mode.
struct ExactNeighborGains {
  double serving_gain = 0.0;      // sender fMS <-> its serving fBS
  double coordinator_gain = 0.0;  // sender fMS <-> the coordinating fBS
  double victim_gain = 0.0;       // sender's fBS <-> the coordinator's fMS
  double noise_mw = 0.0;          // receiver noise at the sender fMS
};

// Everything one fBS knows when deciding its data power on one resource.
// `neighbors` never contains the own entry; the objective sums run over the
// neighbors only, the own link enters through its dedicated term.
struct CoordinationContext {
  NodeId fbs = 0;
  ResourceId resource = 0;
  std::vector<NeighborEntry> neighbors;
  OwnLink own;
  std::optional<std::map<NodeId, ExactNeighborGains>> exact_gains;
};

struct PowerDecision {
  NodeId fbs = 0;
  ResourceId resource = 0;
  double power_mw = 0.0;  // in [0, P]
};

enum class ObjectiveMode { Approx, Exact };

// Priority comparison over the decoded set (own entry included). The unique
// maximum transmits at full power, everyone else is shut down. Ties are
// resolved by a rendezvous hash keyed on (round_index, seed, resource), so
// every fBS that decoded the same tied set elects the same winner and each
// tied candidate wins with frequency 1/M.
PowerDecision priority_control(const CoordinationContext& ctx,
                               std::int64_t round_index, std::uint64_t seed,
                               const SystemParams& params);

// Weighted sum rate with true channel gains, neighbors held at full power.
double objective_exact(double power_mw, const CoordinationContext& ctx,
                       const SystemParams& params);

// Same shape with each neighbor term rebuilt from its RRM alone: received RRM
// power stands in for the gain ratio and the advertised target SINR for the
// neighbor's current quality. Own term is interference-free.
double objective_approx(double power_mw, const CoordinationContext& ctx,
                        const SystemParams& params);

// Product form of the approximate objective: 2^objective_approx when combined
// as a full product. LiteralSum keeps the own-cell factor additive instead;
// it exists for comparison reporting only and is never optimized against.
enum class ProductForm { Product, LiteralSum };
double objective_product(double power_mw, const CoordinationContext& ctx,
                         const SystemParams& params,
                         ProductForm form = ProductForm::Product);

// Global scalar search: evaluate the chosen objective on a uniform grid over
// the closed interval [0, P] (both endpoints always on the grid), then refine
// the best grid point by golden-section search inside its bracket. The result
// never scores below any grid point.
PowerDecision optimize_power(const CoordinationContext& ctx, ObjectiveMode mode,
                             const SystemParams& params);

// Exhaustive evaluation at n uniform points on [0, P], endpoints included.
// Ties break toward smaller power. Serves as the optimizer's oracle.
PowerDecision brute_force_optimize(const CoordinationContext& ctx,
                                   ObjectiveMode mode,
                                   const SystemParams& params, std::int64_t n);

}  // namespace femto
