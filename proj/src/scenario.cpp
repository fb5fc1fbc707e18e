#include "femto/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "femto/protocol.hpp"
#include "femto/units.hpp"

namespace femto {

void validate_scenario(const Scenario& scenario) {
  validate_params(scenario.params);
  const Topology topo(scenario.nodes);
  if (topo.fbs_ids().empty())
    throw ValidationError("nodes: at least one fBS is required");
  if (topo.fms_ids().empty())
    throw ValidationError("nodes: at least one fMS is required");
  if (scenario.resource_count < 1)
    throw ValidationError("resource_count: must be at least 1");
  if (scenario.rounds < 1)
    throw ValidationError("rounds: must be at least 1");
  if (scenario.gain_override)
    compute_gains(topo, scenario.params, *scenario.gain_override);
  allocate_resources(topo, scenario.resource_count);  // surfaces slot conflicts
}

namespace {

GainMatrix build_gains(const Topology& topo, const Scenario& scenario) {
  return scenario.gain_override
             ? compute_gains(topo, scenario.params, *scenario.gain_override)
             : compute_gains(topo, scenario.params);
}

}  // namespace

std::vector<RoundMetrics> run_scenario(const Scenario& scenario) {
  validate_scenario(scenario);

  if (scenario.scheme == Scheme::Orthogonal) return baseline_orthogonal(scenario);

  const Topology topo(scenario.nodes);
  const GainMatrix gains = build_gains(topo, scenario);

  std::vector<RoundMetrics> all;
  all.reserve(static_cast<std::size_t>(scenario.rounds));

  if (scenario.scheme == Scheme::None) {
    for (std::int64_t r = 0; r < scenario.rounds; ++r)
      all.push_back(run_full_power_round(topo, gains, scenario.params,
                                         scenario.resource_count)
                        .metrics);
    return all;
  }

  PowerMap prev;
  TargetHistory last_targets;
  for (std::int64_t r = 0; r < scenario.rounds; ++r) {
    RoundResult rr = run_coordination_round(
        topo, gains, scenario.params, scenario.resource_count, scenario.scheme,
        r, scenario.seed, prev, last_targets);
    prev = std::move(rr.power_map);
    for (NodeId fms : topo.fms_ids()) {
      const double target = topo.node(fms).target_sinr;
      if (target > 0.0) last_targets[fms] = target;
    }
    all.push_back(std::move(rr.metrics));
  }
  return all;
}

std::vector<RoundMetrics> baseline_orthogonal(const Scenario& scenario) {
  validate_scenario(scenario);
  const Topology topo(scenario.nodes);
  const GainMatrix gains = build_gains(topo, scenario);
  const auto allocation = allocate_resources(topo, scenario.resource_count);

  const double share = 1.0 / static_cast<double>(topo.fbs_ids().size());
  RoundMetrics metrics;
  for (NodeId fms : topo.fms_ids()) {
    const Node& node = topo.node(fms);
    // Disjoint spectrum: full power, no co-channel interference, but only a
    // 1/K share of the band contributes to the rate.
    const double sinr = scenario.params.max_power_mw *
                        gains.at(node.serving_fbs, fms) / node.noise_mw;
    const double throughput = share * std::log2(1.0 + sinr);
    metrics.per_fms.push_back({fms, allocation.at(fms),
                               scenario.params.max_power_mw, sinr, throughput});
    metrics.system_weighted_throughput += node.priority * throughput;
  }
  return std::vector<RoundMetrics>(static_cast<std::size_t>(scenario.rounds),
                                   metrics);
}

Scenario generate_random_scenario(const GeneratorConfig& cfg) {
  if (cfg.n_cells < 1)
    throw ValidationError("generator.n_cells: must be at least 1");
  if (!(cfg.area_m > 0.0))
    throw ValidationError("generator.area_m: must be positive");
  if (!(cfg.fms_radius_m >= 0.0))
    throw ValidationError("generator.fms_radius_m: must be nonnegative");
  if (cfg.priority_set.empty())
    throw ValidationError("generator.priority_set: must not be empty");

  Mix64Rng rng(cfg.seed);
  Scenario s;
  s.params = cfg.params;
  s.resource_count = cfg.resource_count;
  s.rounds = cfg.rounds;
  s.scheme = cfg.scheme;
  s.seed = cfg.seed;

  const double noise_mw = dbm_to_mw(cfg.noise_dbm);
  for (std::int64_t k = 0; k < cfg.n_cells; ++k) {
    Node fbs;
    fbs.id = k;
    fbs.kind = NodeKind::Fbs;
    fbs.x = rng.next_unit() * cfg.area_m;
    fbs.y = rng.next_unit() * cfg.area_m;

    // Uniform in the disk by rejection, so the draw needs no trig and stays
    // reproducible from the raw 64-bit stream alone.
    const double r = cfg.fms_radius_m;
    double dx = 0.0, dy = 0.0;
    do {
      dx = (2.0 * rng.next_unit() - 1.0) * r;
      dy = (2.0 * rng.next_unit() - 1.0) * r;
    } while (dx * dx + dy * dy > r * r);

    Node fms;
    fms.id = cfg.n_cells + k;
    fms.kind = NodeKind::Fms;
    fms.x = fbs.x + dx;
    fms.y = fbs.y + dy;
    fms.serving_fbs = fbs.id;
    fms.priority =
        cfg.priority_set[rng.next() % cfg.priority_set.size()];
    const double target_db =
        cfg.target_sinr_db_min +
        (cfg.target_sinr_db_max - cfg.target_sinr_db_min) * rng.next_unit();
    fms.target_sinr = db_to_linear(target_db);
    fms.noise_mw = noise_mw;

    s.nodes.push_back(fbs);
    s.nodes.push_back(fms);
  }
  return s;
}

Scenario generate_random_scenario(std::int64_t n_cells, double area_m,
                                  std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.n_cells = n_cells;
  cfg.area_m = area_m;
  cfg.seed = seed;
  return generate_random_scenario(cfg);
}

std::vector<ComparisonRow> compare_schemes(const Scenario& scenario,
                                           const std::vector<Scheme>& schemes) {
  validate_scenario(scenario);
  const Topology topo(scenario.nodes);

  std::vector<ComparisonRow> rows;
  rows.reserve(schemes.size());
  for (Scheme scheme : schemes) {
    Scenario run = scenario;
    run.scheme = scheme;
    const std::vector<RoundMetrics> metrics = run_scenario(run);

    ComparisonRow row;
    row.scheme = scheme;
    double sum = 0.0;
    std::vector<double> sinrs;
    std::set<NodeId> silenced;
    for (const RoundMetrics& m : metrics) {
      sum += m.system_weighted_throughput;
      for (const FmsRoundStat& e : m.per_fms) {
        sinrs.push_back(e.sinr);
        if (e.power_mw == 0.0) silenced.insert(topo.node(e.fms).serving_fbs);
      }
    }
    row.mean_system_weighted_throughput =
        sum / static_cast<double>(metrics.size());
    std::sort(sinrs.begin(), sinrs.end());
    const std::size_t n = sinrs.size();
    const double median = (n % 2 == 1)
                              ? sinrs[n / 2]
                              : 0.5 * (sinrs[n / 2 - 1] + sinrs[n / 2]);
    row.sinr_min_db = linear_to_db(sinrs.front());
    row.sinr_median_db = linear_to_db(median);
    row.sinr_max_db = linear_to_db(sinrs.back());
    row.silenced_fbs_count = static_cast<std::int64_t>(silenced.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace femto
