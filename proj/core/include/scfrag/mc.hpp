#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scfrag/beta.hpp"

namespace scfrag {

/// How the basal disruption probabilities are drawn each trial.
///
/// CommonDraw: one p ~ Beta(base) shared by every basal firm (the reading
/// under which the layer means match the analytic family exactly).
/// IidDraw: each basal firm gets its own p_j ~ Beta(base).
/// FixedVector: caller-supplied probabilities, one per basal firm.
enum class BasalMode { CommonDraw, IidDraw, FixedVector };

/// Explicit layered network.  layer_sizes[k] counts the firms producing
/// good k; suppliers[k-1][i] lists firm (k, i)'s suppliers in layer k-1.
struct Network {
  std::vector<int> layer_sizes;
  std::vector<std::vector<std::vector<int>>> suppliers;

  int depth() const noexcept { return static_cast<int>(layer_sizes.size()) - 1; }
};

/// Disjoint-supplier tree: firm i in layer k sources the block
/// [i*s_k, (i+1)*s_k) of layer k-1, so supplier sets never overlap and a
/// layer-k firm has exactly prod_{j<=k} s_j basal ancestors.  Guards
/// against more than 1e7 basal firms.
Network build_tree_network(int K, std::span<const int> s_vec, int top_firms = 1);

/// Every firm independently draws a uniform s_k-subset of the layer below.
Network build_random_network(std::span<const int> m_vec, std::span<const int> s_vec,
                             std::uint64_t seed);

struct LayerStats {
  double fraction;  // empirical disruption fraction
  double se;        // sqrt(fraction * (1 - fraction) / trials)
};

/// Per-trial record, kept only on request (binned conditional checks).
struct TrialRecord {
  double common_p;  // NaN unless CommonDraw
  std::vector<int> disrupted;  // per-layer disrupted-firm counts
};

struct SimulationReport {
  long trials;
  BasalMode mode;
  std::vector<LayerStats> layers;
  std::vector<std::vector<long>> firm_fail_counts;  // per layer, per firm; optional
  std::vector<TrialRecord> records;                 // optional
};

struct TrialOptions {
  int threads = 1;
  bool keep_records = false;
  bool per_firm = false;
};

/// Run `trials` independent disruption cascades: draw basal probabilities
/// per the mode, draw basal disruptions Bernoulli(p), propagate downstream
/// (a firm is disrupted iff all its suppliers are), and aggregate
/// per-layer disruption fractions.  Trial t uses substream(seed, t), and
/// all accumulation is integer counting, so the report is identical for
/// any thread count.
SimulationReport run_trials(const Network& net, BasalMode mode, const BetaParams& base,
                            long trials, std::uint64_t seed,
                            const std::vector<double>& fixed_p = {},
                            const TrialOptions& opts = {});

struct ExchangeabilityReport {
  double tv_distance;  // between the joint laws of the two subsets
  double p_value;      // paired permutation test on the TV statistic
  long trials;
};

/// Estimate the joint disruption law of two disjoint subsets of
/// `subset_size` firms in `layer` of a random network (wiring redrawn each
/// trial, matching the random-subset sourcing assumption), and test the
/// two laws for equality.
ExchangeabilityReport exchangeability_check(std::span<const int> m_vec,
                                            std::span<const int> s_vec, int layer,
                                            int subset_size, const BetaParams& base,
                                            long trials, std::uint64_t seed);

struct ConvergenceRow {
  int m;
  double max_deviation;  // max over layers of |empirical - analytic mu_k|
};

/// Deviation of random-graph layer means from the analytic (infinite-m)
/// values, for increasing layer width m.  Common-draw basal mode; one
/// network redraw per trial.
std::vector<ConvergenceRow> finite_m_convergence(std::span<const int> m_list,
                                                 std::span<const int> s_vec,
                                                 const BetaParams& base, long trials,
                                                 std::uint64_t seed);

}  // namespace scfrag
