#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "femto/errors.hpp"

namespace femto {

using NodeId = std::int64_t;
using ResourceId = std::int64_t;

// System-wide constants. Powers in mW, gains as linear ratios.
struct SystemParams {
  double max_power_mw = 100.0;          // P, downlink data power ceiling
  double rrm_power_mw = 1e-5;           // nominal RRM power, must stay below P
  double detection_threshold_mw = 0.0;  // RRM decode threshold; 0 decodes all
  std::int64_t grid_points = 4097;      // optimizer grid size over [0, P]
  double pathloss_ref_db = 37.0;        // loss at the reference distance
  double pathloss_exponent = 3.0;
  double ref_distance_m = 1.0;
};

// Throws ValidationError with the offending field name.
void validate_params(const SystemParams& params);

enum class NodeKind { Fbs, Fms };

struct Node {
  NodeId id = 0;
  NodeKind kind = NodeKind::Fbs;
  double x = 0.0;
  double y = 0.0;
  // fMS-only fields.
  NodeId serving_fbs = -1;
  double priority = 0.0;     // data priority eta
  double target_sinr = 0.0;  // linear; 0 is the retransmission sentinel
  double noise_mw = 0.0;     // receiver noise variance sigma^2
};

// Validated node set with id lookup. Immutable after construction.
class Topology {
 public:
  explicit Topology(std::vector<Node> nodes);

  const Node& node(NodeId id) const;
  bool has(NodeId id) const { return index_.count(id) != 0; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<NodeId>& fbs_ids() const { return fbs_ids_; }
  const std::vector<NodeId>& fms_ids() const { return fms_ids_; }  // ascending
  std::vector<NodeId> fms_served_by(NodeId fbs) const;

 private:
  std::vector<Node> nodes_;
  std::map<NodeId, std::size_t> index_;
  std::vector<NodeId> fbs_ids_;
  std::vector<NodeId> fms_ids_;
};

// Log-distance path loss turned into a linear gain. Distances below the
// reference distance clamp to it, which also removes the d = 0 singularity.
double pathloss_gain(double distance_m, const SystemParams& params);

struct GainOverrideEntry {
  NodeId a = 0;
  NodeId b = 0;
  double gain = 0.0;  // linear, in (0, 1]
};

// Symmetric linear channel gains between node pairs. Reciprocity holds by
// construction: both directions of a pair are the same stored value.
class GainMatrix {
 public:
  double at(NodeId a, NodeId b) const;
  bool has(NodeId a, NodeId b) const;

  friend GainMatrix compute_gains(const Topology&, const SystemParams&,
                                  std::span<const GainOverrideEntry>);

 private:
  std::map<NodeId, std::size_t> index_;
  std::vector<double> cells_;  // n*n, NaN where no value was supplied
  std::size_t n_ = 0;
};

// Builds the gain matrix from node positions, or verbatim from an override
// when one is supplied. Overrides are validated: entries positive and <= 1,
// symmetric within 1e-12 relative, ids known, and every fBS/fMS cross pair
// covered.
GainMatrix compute_gains(const Topology& topo, const SystemParams& params,
                         std::span<const GainOverrideEntry> override_entries = {});

}  // namespace femto
