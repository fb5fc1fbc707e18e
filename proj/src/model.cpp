#include "femto/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace femto {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string id_pair(NodeId a, NodeId b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

void validate_params(const SystemParams& p) {
  if (!(p.max_power_mw > 0.0))
    throw ValidationError("params.max_power: must be positive");
  if (!(p.rrm_power_mw > 0.0))
    throw ValidationError("params.rrm_power: must be positive");
  if (!(p.rrm_power_mw < p.max_power_mw))
    throw ValidationError("params.rrm_power: must be below params.max_power");
  if (!(p.detection_threshold_mw >= 0.0))
    throw ValidationError("params.detection_threshold: must be nonnegative");
  if (p.grid_points < 2)
    throw ValidationError("params.grid_points: must be at least 2");
  if (!(p.ref_distance_m > 0.0))
    throw ValidationError("params.ref_distance_m: must be positive");
  if (!(p.pathloss_exponent >= 0.0))
    throw ValidationError("params.pathloss_exponent: must be nonnegative");
}

Topology::Topology(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (!index_.emplace(n.id, i).second)
      throw ValidationError("nodes[" + std::to_string(i) + "].id: duplicate id " +
                            std::to_string(n.id));
    if (!std::isfinite(n.x) || !std::isfinite(n.y))
      throw ValidationError("nodes[" + std::to_string(i) +
                            "]: position must be finite");
    if (n.kind == NodeKind::Fbs)
      fbs_ids_.push_back(n.id);
    else
      fms_ids_.push_back(n.id);
  }
  std::sort(fbs_ids_.begin(), fbs_ids_.end());
  std::sort(fms_ids_.begin(), fms_ids_.end());

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.kind != NodeKind::Fms) continue;
    const std::string path = "nodes[" + std::to_string(i) + "]";
    auto it = index_.find(n.serving_fbs);
    if (it == index_.end() || nodes_[it->second].kind != NodeKind::Fbs)
      throw ValidationError(path + ".serving_fbs: unknown fBS id " +
                            std::to_string(n.serving_fbs));
    if (!(n.priority >= 0.0))
      throw ValidationError(path + ".priority: must be nonnegative");
    if (!(n.target_sinr >= 0.0))
      throw ValidationError(path + ".target_sinr: must be nonnegative");
    if (!(n.noise_mw > 0.0))
      throw ValidationError(path + ".noise: must be positive");
  }
}

const Node& Topology::node(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    throw ValidationError("unknown node id " + std::to_string(id));
  return nodes_[it->second];
}

std::vector<NodeId> Topology::fms_served_by(NodeId fbs) const {
  std::vector<NodeId> out;
  for (NodeId id : fms_ids_)
    if (node(id).serving_fbs == fbs) out.push_back(id);
  return out;
}

double pathloss_gain(double distance_m, const SystemParams& params) {
  const double d = std::max(distance_m, params.ref_distance_m);
  const double loss_db = params.pathloss_ref_db +
                         10.0 * params.pathloss_exponent *
                             std::log10(d / params.ref_distance_m);
  return std::pow(10.0, -loss_db / 10.0);
}

double GainMatrix::at(NodeId a, NodeId b) const {
  auto ia = index_.find(a);
  auto ib = index_.find(b);
  if (ia == index_.end() || ib == index_.end())
    throw ValidationError("gain lookup for unknown node pair " + id_pair(a, b));
  const double v = cells_[ia->second * n_ + ib->second];
  if (std::isnan(v))
    throw ValidationError("gain_override: no gain supplied for pair " +
                          id_pair(a, b));
  return v;
}

bool GainMatrix::has(NodeId a, NodeId b) const {
  auto ia = index_.find(a);
  auto ib = index_.find(b);
  return ia != index_.end() && ib != index_.end() &&
         !std::isnan(cells_[ia->second * n_ + ib->second]);
}

GainMatrix compute_gains(const Topology& topo, const SystemParams& params,
                         std::span<const GainOverrideEntry> override_entries) {
  GainMatrix m;
  const auto& nodes = topo.nodes();
  m.n_ = nodes.size();
  for (std::size_t i = 0; i < nodes.size(); ++i) m.index_.emplace(nodes[i].id, i);
  m.cells_.assign(m.n_ * m.n_, kNan);

  if (override_entries.empty()) {
    // Both directions of a pair get the one computed value, so reciprocity
    // is exact rather than a property of floating-point by luck.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i; j < nodes.size(); ++j) {
        const double dx = nodes[i].x - nodes[j].x;
        const double dy = nodes[i].y - nodes[j].y;
        const double g = pathloss_gain(std::sqrt(dx * dx + dy * dy), params);
        m.cells_[i * m.n_ + j] = g;
        m.cells_[j * m.n_ + i] = g;
      }
    }
    return m;
  }

  for (std::size_t k = 0; k < override_entries.size(); ++k) {
    const auto& e = override_entries[k];
    const std::string path = "gain_override[" + std::to_string(k) + "]";
    auto ia = m.index_.find(e.a);
    auto ib = m.index_.find(e.b);
    if (ia == m.index_.end())
      throw ValidationError(path + ".a: unknown node id " + std::to_string(e.a));
    if (ib == m.index_.end())
      throw ValidationError(path + ".b: unknown node id " + std::to_string(e.b));
    if (!(e.gain > 0.0) || e.gain > 1.0)
      throw ValidationError(path + ".gain: must lie in (0, 1]");
    double& fwd = m.cells_[ia->second * m.n_ + ib->second];
    double& rev = m.cells_[ib->second * m.n_ + ia->second];
    if (!std::isnan(fwd)) {
      if (std::abs(fwd - e.gain) > 1e-12 * std::max(std::abs(fwd), e.gain))
        throw ValidationError(path + ": asymmetric or conflicting override for pair " +
                              id_pair(e.a, e.b));
      // Keep the first stored value so both directions stay bit-identical.
    } else {
      fwd = e.gain;
      rev = e.gain;
    }
  }

  // Every fBS/fMS cross pair has to be present; same-kind pairs are unused.
  for (NodeId f : topo.fbs_ids())
    for (NodeId u : topo.fms_ids())
      if (!m.has(f, u))
        throw ValidationError("gain_override: no gain supplied for pair " +
                              id_pair(f, u));
  return m;
}

}  // namespace femto
