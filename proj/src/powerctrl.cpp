#include "femto/powerctrl.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "femto/airlink.hpp"

namespace femto {

namespace {

// Neighbor terms of the approximate objective, precomputed so that grid
// scans and the brute-force oracle share one evaluation path with the
// public objective functions.
struct ApproxEvaluator {
  std::vector<double> slope;   // p_rec,i / (P_RRM * P)
  std::vector<double> floor_;  // 1 / target SINR_i
  std::vector<double> weight;  // eta_i
  double own_gain_over_noise = 0.0;
  double own_weight = 0.0;

  ApproxEvaluator(const CoordinationContext& ctx, const SystemParams& params) {
    slope.reserve(ctx.neighbors.size());
    floor_.reserve(ctx.neighbors.size());
    weight.reserve(ctx.neighbors.size());
    for (const NeighborEntry& n : ctx.neighbors) {
      if (!(n.target_sinr > 0.0))
        throw SentinelLeakError(
            "objective_approx: neighbor fMS " + std::to_string(n.sender_fms) +
            " carries a zero target SINR (retransmission sentinel)");
      slope.push_back(n.received_power_mw /
                      (params.rrm_power_mw * params.max_power_mw));
      floor_.push_back(1.0 / n.target_sinr);
      weight.push_back(n.priority);
    }
    own_gain_over_noise = ctx.own.gain / ctx.own.noise_mw;
    own_weight = ctx.own.priority;
  }

  double operator()(double p) const {
    double v = 0.0;
    for (std::size_t i = 0; i < slope.size(); ++i)
      v += weight[i] * std::log2(1.0 + 1.0 / (slope[i] * p + floor_[i]));
    v += own_weight * std::log2(1.0 + own_gain_over_noise * p);
    return v;
  }
};

struct ExactEvaluator {
  std::vector<double> numerator;  // P * h_i
  std::vector<double> coef;       // h_ic
  std::vector<double> noise;      // sigma_i^2
  std::vector<double> weight;     // eta_i
  double own_gain = 0.0;          // h_c
  double own_interference = 0.0;  // sum of P * h_ci + sigma_c^2
  double own_weight = 0.0;

  ExactEvaluator(const CoordinationContext& ctx, const SystemParams& params) {
    if (!ctx.exact_gains)
      throw ModeError("objective_exact: context has no exact gains attached");
    const auto& exact = *ctx.exact_gains;
    own_interference = ctx.own.noise_mw;
    for (const NeighborEntry& n : ctx.neighbors) {
      auto it = exact.find(n.sender_fms);
      if (it == exact.end())
        throw ModeError("objective_exact: no exact gains for neighbor fMS " +
                        std::to_string(n.sender_fms));
      const ExactNeighborGains& g = it->second;
      numerator.push_back(params.max_power_mw * g.serving_gain);
      coef.push_back(g.coordinator_gain);
      noise.push_back(g.noise_mw);
      weight.push_back(n.priority);
      own_interference += params.max_power_mw * g.victim_gain;
    }
    own_gain = ctx.own.gain;
    own_weight = ctx.own.priority;
  }

  double operator()(double p) const {
    double v = 0.0;
    for (std::size_t i = 0; i < numerator.size(); ++i)
      v += weight[i] * std::log2(1.0 + numerator[i] / (coef[i] * p + noise[i]));
    v += own_weight * std::log2(1.0 + own_gain * p / own_interference);
    return v;
  }
};

// (value, position) ordering used everywhere a single best point is picked:
// strictly better value wins, equal value prefers the smaller power.
bool improves(double value, double at, double best_value, double best_at) {
  return value > best_value || (value == best_value && at < best_at);
}

template <typename F>
double golden_section_max(const F& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double best_x = a;
  double best_f = f(a);
  if (double fb = f(b); improves(fb, b, best_f, best_x)) {
    best_f = fb;
    best_x = b;
  }
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  const double tol = 1e-10 * (hi - lo);
  for (int it = 0; it < 100 && (b - a) > tol; ++it) {
    if (improves(f1, x1, best_f, best_x)) {
      best_f = f1;
      best_x = x1;
    }
    if (improves(f2, x2, best_f, best_x)) {
      best_f = f2;
      best_x = x2;
    }
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return best_x;
}

template <typename F>
PowerDecision search_grid_then_refine(const F& f, const CoordinationContext& ctx,
                                      const SystemParams& params) {
  const double max_power = params.max_power_mw;
  const std::int64_t n = params.grid_points;
  if (n < 2) throw ValidationError("params.grid_points: must be at least 2");

  const auto grid_point = [&](std::int64_t j) {
    return max_power * (static_cast<double>(j) / static_cast<double>(n - 1));
  };

  std::int64_t best_j = 0;
  double best_v = f(grid_point(0));
  for (std::int64_t j = 1; j < n; ++j) {
    const double v = f(grid_point(j));
    if (v > best_v) {
      best_v = v;
      best_j = j;
    }
  }

  // The objective is not unimodal in general, so golden section only refines
  // inside the bracket around the winning grid point.
  const double lo = grid_point(std::max<std::int64_t>(best_j - 1, 0));
  const double hi = grid_point(std::min<std::int64_t>(best_j + 1, n - 1));
  const double refined = std::clamp(golden_section_max(f, lo, hi), 0.0, max_power);

  double best_x = grid_point(best_j);
  if (const double fr = f(refined); improves(fr, refined, best_v, best_x))
    best_x = refined;

  return PowerDecision{ctx.fbs, ctx.resource, best_x};
}

template <typename F>
PowerDecision scan_uniform(const F& f, const CoordinationContext& ctx,
                           const SystemParams& params, std::int64_t n) {
  if (n < 2) throw ValidationError("brute_force_optimize: n must be at least 2");
  const double max_power = params.max_power_mw;
  double best_x = 0.0;
  double best_v = f(0.0);
  for (std::int64_t j = 1; j < n; ++j) {
    const double x =
        max_power * (static_cast<double>(j) / static_cast<double>(n - 1));
    const double v = f(x);
    if (v > best_v) {  // ties keep the earlier, i.e. smaller, power
      best_v = v;
      best_x = x;
    }
  }
  return PowerDecision{ctx.fbs, ctx.resource, best_x};
}

}  // namespace

PowerDecision priority_control(const CoordinationContext& ctx,
                               std::int64_t round_index, std::uint64_t seed,
                               const SystemParams& params) {
  double top = ctx.own.priority;
  for (const NeighborEntry& n : ctx.neighbors) top = std::max(top, n.priority);

  if (ctx.own.priority < top)
    return PowerDecision{ctx.fbs, ctx.resource, 0.0};

  std::size_t tied = 1;  // the own entry
  for (const NeighborEntry& n : ctx.neighbors)
    if (n.priority == top) ++tied;
  if (tied == 1)
    return PowerDecision{ctx.fbs, ctx.resource, params.max_power_mw};

  // Rendezvous lottery: every fBS that decoded the same tied set computes the
  // same per-round salt and elects the same winner, no backhaul involved.
  const std::uint64_t salt =
      mix64(static_cast<std::uint64_t>(ctx.resource) ^
            mix64(static_cast<std::uint64_t>(round_index) ^ seed));
  const auto lottery_key = [salt](std::uint64_t hashed_id) {
    return mix64(hashed_id ^ salt);
  };

  std::uint64_t best_key = lottery_key(ctx.own.hashed_bs_id);
  std::uint64_t best_id = ctx.own.hashed_bs_id;
  bool own_wins = true;
  for (const NeighborEntry& n : ctx.neighbors) {
    if (n.priority != top) continue;
    const std::uint64_t key = lottery_key(n.hashed_bs_id);
    if (key > best_key || (key == best_key && n.hashed_bs_id > best_id)) {
      best_key = key;
      best_id = n.hashed_bs_id;
      own_wins = false;
    }
  }
  return PowerDecision{ctx.fbs, ctx.resource,
                       own_wins ? params.max_power_mw : 0.0};
}

double objective_exact(double power_mw, const CoordinationContext& ctx,
                       const SystemParams& params) {
  return ExactEvaluator(ctx, params)(power_mw);
}

double objective_approx(double power_mw, const CoordinationContext& ctx,
                        const SystemParams& params) {
  return ApproxEvaluator(ctx, params)(power_mw);
}

double objective_product(double power_mw, const CoordinationContext& ctx,
                         const SystemParams& params, ProductForm form) {
  const ApproxEvaluator ev(ctx, params);
  double neighbor_product = 1.0;
  for (std::size_t i = 0; i < ev.slope.size(); ++i)
    neighbor_product *= std::pow(
        1.0 + 1.0 / (ev.slope[i] * power_mw + ev.floor_[i]), ev.weight[i]);
  const double own_factor =
      std::pow(1.0 + ev.own_gain_over_noise * power_mw, ev.own_weight);
  return form == ProductForm::Product ? neighbor_product * own_factor
                                      : neighbor_product + own_factor;
}

PowerDecision optimize_power(const CoordinationContext& ctx, ObjectiveMode mode,
                             const SystemParams& params) {
  if (mode == ObjectiveMode::Exact)
    return search_grid_then_refine(ExactEvaluator(ctx, params), ctx, params);
  return search_grid_then_refine(ApproxEvaluator(ctx, params), ctx, params);
}

PowerDecision brute_force_optimize(const CoordinationContext& ctx,
                                   ObjectiveMode mode,
                                   const SystemParams& params, std::int64_t n) {
  if (mode == ObjectiveMode::Exact)
    return scan_uniform(ExactEvaluator(ctx, params), ctx, params, n);
  return scan_uniform(ApproxEvaluator(ctx, params), ctx, params, n);
}

}  // namespace femto
