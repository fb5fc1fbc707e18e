// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. argv[1] must point at the femtosim binary (used by the CLI
// determinism criterion); ctest wires it up automatically.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "femto/airlink.hpp"
#include "femto/config.hpp"
#include "femto/model.hpp"
#include "femto/powerctrl.hpp"
#include "femto/protocol.hpp"
#include "femto/scenario.hpp"

using namespace femto;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

// The shared scenario corpus: seeds 1..100, cell counts cycling 2..8.
struct Corpus {
  std::vector<Scenario> scenarios;
  std::vector<CoordinationContext> contexts;       // raw, per (fBS, resource)
  std::vector<CoordinationContext> exact_contexts; // with true gains attached
  SystemParams params;  // generator default parameters (shared by all)
};

Corpus build_corpus() {
  Corpus corpus;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const std::int64_t n_cells = 2 + static_cast<std::int64_t>((seed - 1) % 7);
    Scenario s = generate_random_scenario(n_cells, 50.0, seed);
    const Topology topo(s.nodes);
    const GainMatrix gains = compute_gains(topo, s.params);
    const auto allocation = allocate_resources(topo, s.resource_count);
    for (CoordinationContext& ctx :
         build_round_contexts(topo, gains, s.params, allocation)) {
      corpus.contexts.push_back(ctx);
      attach_exact_gains(ctx, topo, gains);
      corpus.exact_contexts.push_back(std::move(ctx));
    }
    corpus.params = s.params;
    corpus.scenarios.push_back(std::move(s));
  }
  return corpus;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        fn(i);
    });
  for (std::thread& t : pool) t.join();
}

// ---------------------------------------------------------------------------

void criterion_1_oracle_equivalence(const Corpus& corpus) {
  const auto start = std::chrono::steady_clock::now();
  const double max_power = corpus.params.max_power_mw;

  std::vector<char> ok(corpus.contexts.size(), 0);
  std::vector<double> power_delta(corpus.contexts.size(), 0.0);
  std::vector<double> value_gap(corpus.contexts.size(), 0.0);
  parallel_for(corpus.contexts.size(), [&](std::size_t i) {
    const CoordinationContext& ctx = corpus.contexts[i];
    const PowerDecision fast =
        optimize_power(ctx, ObjectiveMode::Approx, corpus.params);
    const PowerDecision oracle =
        brute_force_optimize(ctx, ObjectiveMode::Approx, corpus.params, 1000000);
    power_delta[i] = std::abs(fast.power_mw - oracle.power_mw);
    value_gap[i] = objective_approx(oracle.power_mw, ctx, corpus.params) -
                   objective_approx(fast.power_mw, ctx, corpus.params);
    ok[i] = (power_delta[i] <= 1e-3 * max_power || value_gap[i] <= 1e-6) ? 1 : 0;
  });

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::size_t agreed = 0;
  double worst_delta = 0.0, worst_gap = 0.0;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    if (ok[i]) ++agreed;
    worst_delta = std::max(worst_delta, power_delta[i]);
    worst_gap = std::max(worst_gap, value_gap[i]);
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "optimizer vs 10^6-point oracle: %zu/%zu contexts agree "
                "(max |dP| %.3g mW, max gap %.3g, %.1f s)",
                agreed, ok.size(), worst_delta, worst_gap, seconds);
  report(1, agreed == ok.size() && seconds < 60.0, buf);
}

void criterion_2_monotone_transform(const Corpus& corpus) {
  const double max_power = corpus.params.max_power_mw;
  std::atomic<std::size_t> bad_value{0};
  std::atomic<std::size_t> bad_argmax{0};
  parallel_for(corpus.contexts.size(), [&](std::size_t i) {
    const CoordinationContext& ctx = corpus.contexts[i];
    std::size_t best_log = 0, best_prod = 0;
    double best_log_v = -1e300, best_prod_v = -1e300;
    for (std::size_t j = 0; j < 1000; ++j) {
      const double power =
          max_power * (static_cast<double>(j) / 999.0);
      const double a = objective_approx(power, ctx, corpus.params);
      const double prod = objective_product(power, ctx, corpus.params);
      const double b = std::log2(prod);
      const double rel =
          std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
      if (rel > 1e-9) ++bad_value;
      if (a > best_log_v) {
        best_log_v = a;
        best_log = j;
      }
      if (prod > best_prod_v) {
        best_prod_v = prod;
        best_prod = j;
      }
    }
    if (best_log != best_prod) ++bad_argmax;
  });
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "log2(product) vs log-sum on 1000-point grids: %zu value "
                "mismatches, %zu argmax mismatches over %zu contexts",
                bad_value.load(), bad_argmax.load(), corpus.contexts.size());
  report(2, bad_value == 0 && bad_argmax == 0, buf);
}

void criterion_3_substitution(const Corpus& corpus) {
  const SystemParams& p = corpus.params;
  std::size_t checked = 0, capped_contexts = 0, violations = 0;
  Mix64Rng rng(0xC3);
  for (const CoordinationContext& ctx : corpus.exact_contexts) {
    bool all_uncapped = true;
    for (const NeighborEntry& n : ctx.neighbors) {
      const double h_i = ctx.exact_gains->at(n.sender_fms).serving_gain;
      if (p.rrm_power_mw / h_i > p.max_power_mw) all_uncapped = false;
    }
    if (!all_uncapped) {
      ++capped_contexts;
      continue;
    }
    for (int k = 0; k < 100; ++k) {
      const double power = rng.next_unit() * p.max_power_mw;
      for (const NeighborEntry& n : ctx.neighbors) {
        const ExactNeighborGains& g = ctx.exact_gains->at(n.sender_fms);
        const double lhs =
            power * n.received_power_mw / (p.rrm_power_mw * p.max_power_mw);
        const double rhs =
            power * g.coordinator_gain / (p.max_power_mw * g.serving_gain);
        const double rel = std::abs(lhs - rhs) /
                           std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        if (rel > 1e-12) ++violations;
      }
      ++checked;
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "received-power vs gain-ratio neighbor terms: %zu violations "
                "across %zu sampled powers (%zu capped contexts skipped)",
                violations, checked, capped_contexts);
  report(3, violations == 0 && checked > 0, buf);
}

void criterion_4_tie_lottery(const Corpus& corpus) {
  const SystemParams& p = corpus.params;
  bool all_pass = true;
  std::string detail;
  for (int m : {2, 3, 5}) {
    const NodeId fbs_ids[5] = {10, 20, 30, 50, 70};
    std::vector<int> wins(m, 0);
    for (int k = 0; k < 10000; ++k) {
      const std::int64_t round = k % 128;
      const std::uint64_t seed =
          (static_cast<std::uint64_t>(k / 128) << 16) ^ 0x5EEDBA5EULL;
      for (int cand = 0; cand < m; ++cand) {
        CoordinationContext ctx;
        ctx.fbs = fbs_ids[cand];
        ctx.resource = 0;
        ctx.own =
            OwnLink{100 + cand, 2.0, 3.0, 1.0, 1.0,
                    mix64(static_cast<std::uint64_t>(fbs_ids[cand]))};
        for (int other = 0; other < m; ++other) {
          if (other == cand) continue;
          ctx.neighbors.push_back(
              {200 + other, 2.0, 3.0, p.rrm_power_mw,
               mix64(static_cast<std::uint64_t>(fbs_ids[other]))});
        }
        if (priority_control(ctx, round, seed, p).power_mw > 0.0) ++wins[cand];
      }
    }
    const double expectation = 10000.0 / m;
    const double sigma = std::sqrt(10000.0 * (1.0 / m) * (1.0 - 1.0 / m));
    for (int cand = 0; cand < m; ++cand) {
      if (std::abs(wins[cand] - expectation) > 3.0 * sigma) all_pass = false;
    }
    detail += "M=" + std::to_string(m) + ":";
    for (int w : wins) detail += " " + std::to_string(w);
    detail += "  ";
  }
  report(4, all_pass, "tie-lottery frequencies within 3 sigma of 1/M (" +
                          detail + ")");
}

void criterion_5_best_response(const Corpus& corpus) {
  std::atomic<std::size_t> violations{0};
  parallel_for(corpus.exact_contexts.size(), [&](std::size_t i) {
    const CoordinationContext& ctx = corpus.exact_contexts[i];
    const PowerDecision d = optimize_power(ctx, ObjectiveMode::Exact, corpus.params);
    const double best = objective_exact(d.power_mw, ctx, corpus.params);
    const double at_zero = objective_exact(0.0, ctx, corpus.params);
    const double at_full =
        objective_exact(corpus.params.max_power_mw, ctx, corpus.params);
    if (best < at_zero - 1e-9 || best < at_full - 1e-9) ++violations;
  });
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "exact-mode best response dominates both endpoints on %zu "
                "contexts (%zu violations)",
                corpus.exact_contexts.size(), violations.load());
  report(5, violations == 0, buf);
}

void criterion_6_retransmission(const Corpus& corpus) {
  std::size_t checked = 0, mismatches = 0;
  for (std::size_t k = 0; k < 10; ++k) {
    const Scenario& fresh = corpus.scenarios[k * 9 % corpus.scenarios.size()];
    for (Scheme scheme : {Scheme::Priority, Scheme::ThroughputApprox,
                          Scheme::ThroughputExact}) {
      const RoundResult first =
          run_coordination_round(fresh, scheme, 0, fresh.seed);
      Scenario retx = fresh;
      TargetHistory history;
      for (Node& n : retx.nodes)
        if (n.kind == NodeKind::Fms) {
          history[n.id] = n.target_sinr;
          n.target_sinr = 0.0;
        }
      const RoundResult second = run_coordination_round(
          retx, scheme, 1, retx.seed, first.power_map, history);
      ++checked;
      if (first.power_map.size() != second.power_map.size()) {
        ++mismatches;
        continue;
      }
      auto ita = first.power_map.begin();
      auto itb = second.power_map.begin();
      for (; ita != first.power_map.end(); ++ita, ++itb)
        if (ita->first != itb->first || ita->second != itb->second) {
          ++mismatches;
          break;
        }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "all-sentinel rounds replay the previous power map bitwise "
                "(%zu/%zu runs)",
                checked - mismatches, checked);
  report(6, mismatches == 0, buf);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<missing:" + p.string() + ">";
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void criterion_7_cli_determinism(const char* tool_path) {
  if (!tool_path) {
    report(7, false, "femtosim path not supplied on the command line");
    return;
  }
  const auto base =
      std::filesystem::temp_directory_path() / "femto_acceptance_cli";
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  const auto cfg = base / "config.json";
  std::ofstream(cfg) << R"({
    "generator": {"n_cells": 5, "area_m": 50.0, "seed": 31},
    "scheme": "throughput-approx",
    "rounds": 3
  })";
  const std::string quiet = " > " + (base / "stdout.txt").string();
  const std::string run_a = std::string("\"") + tool_path + "\" --config \"" +
                            cfg.string() + "\" --out \"" + (base / "a").string() +
                            "\"" + quiet;
  const std::string run_b = std::string("\"") + tool_path + "\" --config \"" +
                            cfg.string() + "\" --out \"" + (base / "b").string() +
                            "\"" + quiet;
  const int rc_a = std::system(run_a.c_str());
  const int rc_b = std::system(run_b.c_str());
  bool pass = rc_a == 0 && rc_b == 0;
  for (const char* name : {"results.csv", "summary.json"}) {
    if (slurp(base / "a" / name) != slurp(base / "b" / name)) pass = false;
  }
  report(7, pass,
         "two CLI runs with identical config and seed emit byte-identical "
         "results.csv and summary.json");
  std::filesystem::remove_all(base);
}

void criterion_8_physics_invariants(const Corpus& corpus) {
  std::size_t problems = 0;

  // Gain reciprocity on 1000 random topologies.
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const Scenario s = generate_random_scenario(
        2 + static_cast<std::int64_t>(seed % 7), 50.0, seed);
    const Topology topo(s.nodes);
    const GainMatrix gains = compute_gains(topo, s.params);
    for (const Node& a : topo.nodes())
      for (const Node& b : topo.nodes())
        if (gains.at(a.id, b.id) != gains.at(b.id, a.id)) ++problems;
  }
  const std::size_t reciprocity_problems = problems;

  // SINR never drops when one interferer backs off.
  Mix64Rng rng(0x51);
  for (int trial = 0; trial < 300; ++trial) {
    const Scenario& s = corpus.scenarios[trial % corpus.scenarios.size()];
    const Topology topo(s.nodes);
    const GainMatrix gains = compute_gains(topo, s.params);
    const auto allocation = allocate_resources(topo, s.resource_count);
    PowerMap pm;
    for (const auto& [fms, resource] : allocation)
      pm[{topo.node(fms).serving_fbs, resource}] = s.params.max_power_mw;
    const auto& fbs = topo.fbs_ids();
    const NodeId reduced_fbs = fbs[rng.next() % fbs.size()];
    PowerMap reduced = pm;
    reduced[{reduced_fbs, 0}] = s.params.max_power_mw * rng.next_unit();
    for (NodeId fms : topo.fms_ids()) {
      if (topo.node(fms).serving_fbs == reduced_fbs) continue;
      const double before = measure_sinr(fms, allocation.at(fms), pm, gains, topo);
      const double after =
          measure_sinr(fms, allocation.at(fms), reduced, gains, topo);
      if (after < before) ++problems;
    }
  }
  const std::size_t monotonicity_problems = problems - reciprocity_problems;

  // Transmit rule stays below the ceiling on 1e5 random gains.
  for (int i = 0; i < 100000; ++i) {
    const double h = std::pow(10.0, -9.0 * rng.next_unit());
    const double p_tran = rrm_transmit_power(h, corpus.params);
    if (!(p_tran > 0.0) || p_tran > corpus.params.max_power_mw) ++problems;
  }

  // Priority control only ever emits 0 or P.
  for (int trial = 0; trial < 10000; ++trial) {
    CoordinationContext ctx;
    ctx.fbs = 1;
    ctx.resource = 0;
    ctx.own = OwnLink{10, static_cast<double>(rng.next() % 4), 3.0, 1.0, 1.0,
                      mix64(1)};
    const int n = static_cast<int>(rng.next() % 5);
    for (int i = 0; i < n; ++i)
      ctx.neighbors.push_back({20 + i, static_cast<double>(rng.next() % 4), 3.0,
                               corpus.params.rrm_power_mw, mix64(100 + i)});
    const double power =
        priority_control(ctx, trial, 0xF00D, corpus.params).power_mw;
    if (power != 0.0 && power != corpus.params.max_power_mw) ++problems;
  }

  char buf[224];
  std::snprintf(buf, sizeof(buf),
                "reciprocity x1000, SINR monotonicity x300, RRM power cap "
                "x1e5, binary priority powers x1e4: %zu violations "
                "(reciprocity %zu, monotonicity %zu)",
                problems, reciprocity_problems, monotonicity_problems);
  report(8, problems == 0, buf);
}

void criterion_9_comparison_report(const Corpus& corpus) {
  const std::vector<Scheme> schemes = {Scheme::None, Scheme::Orthogonal,
                                       Scheme::Priority,
                                       Scheme::ThroughputApprox};
  std::size_t mismatches = 0;
  std::vector<double> grand(schemes.size(), 0.0);
  std::vector<std::vector<ComparisonRow>> tables(corpus.scenarios.size());
  parallel_for(corpus.scenarios.size(), [&](std::size_t i) {
    tables[i] = compare_schemes(corpus.scenarios[i], schemes);
  });
  for (std::size_t i = 0; i < corpus.scenarios.size(); ++i) {
    const auto& rows = tables[i];
    for (std::size_t k = 0; k < schemes.size(); ++k) {
      Scenario rerun = corpus.scenarios[i];
      rerun.scheme = schemes[k];
      const auto metrics = run_scenario(rerun);
      double sum = 0.0;
      for (const RoundMetrics& m : metrics) sum += m.system_weighted_throughput;
      const double independent = sum / static_cast<double>(metrics.size());
      if (independent != rows[k].mean_system_weighted_throughput) ++mismatches;
      grand[k] += rows[k].mean_system_weighted_throughput;
    }
  }
  std::printf("    scheme                 mean weighted throughput over 100 "
              "scenarios (bit/s/Hz)\n");
  for (std::size_t k = 0; k < schemes.size(); ++k)
    std::printf("    %-22s %.6f\n", scheme_name(schemes[k]).c_str(),
                grand[k] / static_cast<double>(corpus.scenarios.size()));
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "comparison table produced; every cell reproduced exactly by "
                "an independent rerun (%zu mismatches)",
                mismatches);
  report(9, mismatches == 0, buf);
}

}  // namespace

int main(int argc, char** argv) {
  const char* tool_path = argc > 1 ? argv[1] : nullptr;
  std::printf("building the 100-scenario corpus...\n");
  const Corpus corpus = build_corpus();
  std::printf("corpus ready: %zu scenarios, %zu coordination contexts\n\n",
              corpus.scenarios.size(), corpus.contexts.size());

  criterion_1_oracle_equivalence(corpus);
  criterion_2_monotone_transform(corpus);
  criterion_3_substitution(corpus);
  criterion_4_tie_lottery(corpus);
  criterion_5_best_response(corpus);
  criterion_6_retransmission(corpus);
  criterion_7_cli_determinism(tool_path);
  criterion_8_physics_invariants(corpus);
  criterion_9_comparison_report(corpus);

  std::printf("\n%s (%d failing)\n",
              g_failures == 0 ? "ALL CRITERIA PASS" : "CRITERIA FAILING",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
