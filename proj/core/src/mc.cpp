#include "scfrag/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "subset_draw.hpp"

namespace scfrag {

using detail::draw_subset;

namespace {

constexpr long kMaxBasalFirms = 10'000'000;

void validate_network(const Network& net) {
  if (net.layer_sizes.empty() || net.suppliers.size() + 1 != net.layer_sizes.size()) {
    throw std::invalid_argument("malformed network");
  }
  for (std::size_t k = 0; k < net.suppliers.size(); ++k) {
    if (static_cast<int>(net.suppliers[k].size()) != net.layer_sizes[k + 1]) {
      throw std::invalid_argument("supplier table does not match layer sizes");
    }
    for (const auto& sup : net.suppliers[k]) {
      if (sup.empty()) {
        throw std::invalid_argument("every firm needs at least one supplier");
      }
      for (const int j : sup) {
        if (j < 0 || j >= net.layer_sizes[k]) {
          throw std::invalid_argument("supplier index outside the layer below");
        }
      }
    }
  }
}

struct TrialScratch {
  std::vector<std::uint8_t> current;
  std::vector<std::uint8_t> next;
};

// One cascade.  Returns the common draw (NaN unless CommonDraw) and fills
// `disrupted` with per-layer disrupted-firm counts.  `fail_counts`, when
// non-null, accumulates per-firm failures.
double run_one_trial(const Network& net, BasalMode mode, const BetaShape& shape,
                     const std::vector<double>& fixed_p, SplitMix64& rng,
                     TrialScratch& scratch, std::vector<long>& disrupted,
                     std::vector<std::vector<long>>* fail_counts) {
  const int m0 = net.layer_sizes[0];
  double common_p = std::numeric_limits<double>::quiet_NaN();

  scratch.current.assign(static_cast<std::size_t>(m0), 0);
  switch (mode) {
    case BasalMode::CommonDraw: {
      common_p = sample_beta(rng, shape.alpha, shape.beta);
      for (int j = 0; j < m0; ++j) {
        scratch.current[j] = rng.next_double() < common_p ? 1 : 0;
      }
      break;
    }
    case BasalMode::IidDraw: {
      for (int j = 0; j < m0; ++j) {
        const double p = sample_beta(rng, shape.alpha, shape.beta);
        scratch.current[j] = rng.next_double() < p ? 1 : 0;
      }
      break;
    }
    case BasalMode::FixedVector: {
      for (int j = 0; j < m0; ++j) {
        scratch.current[j] = rng.next_double() < fixed_p[j] ? 1 : 0;
      }
      break;
    }
  }

  disrupted.assign(net.layer_sizes.size(), 0);
  disrupted[0] = std::count(scratch.current.begin(), scratch.current.end(), 1);
  if (fail_counts) {
    for (int j = 0; j < m0; ++j) {
      (*fail_counts)[0][j] += scratch.current[j];
    }
  }

  for (std::size_t k = 1; k < net.layer_sizes.size(); ++k) {
    const auto& layer = net.suppliers[k - 1];
    scratch.next.assign(layer.size(), 0);
    long count = 0;
    for (std::size_t i = 0; i < layer.size(); ++i) {
      std::uint8_t all_failed = 1;
      for (const int sup : layer[i]) {
        if (!scratch.current[sup]) {
          all_failed = 0;
          break;
        }
      }
      scratch.next[i] = all_failed;
      count += all_failed;
      if (fail_counts) {
        (*fail_counts)[k][i] += all_failed;
      }
    }
    disrupted[k] = count;
    scratch.current.swap(scratch.next);
  }
  return common_p;
}

}  // namespace

Network build_tree_network(int K, std::span<const int> s_vec, int top_firms) {
  if (K < 1 || static_cast<int>(s_vec.size()) != K) {
    throw std::invalid_argument("need one sourcing count per downstream layer");
  }
  if (top_firms < 1) {
    throw std::invalid_argument("top_firms must be >= 1");
  }
  for (const int s : s_vec) {
    if (s < 1) {
      throw std::invalid_argument("tree sourcing counts must be >= 1");
    }
  }

  Network net;
  net.layer_sizes.assign(K + 1, 0);
  net.layer_sizes[K] = top_firms;
  long width = top_firms;
  for (int k = K; k >= 1; --k) {
    width *= s_vec[k - 1];
    if (width > kMaxBasalFirms) {
      throw std::invalid_argument("tree would exceed the basal-firm cap");
    }
    net.layer_sizes[k - 1] = static_cast<int>(width);
  }

  net.suppliers.resize(K);
  for (int k = 1; k <= K; ++k) {
    const int s = s_vec[k - 1];
    auto& layer = net.suppliers[k - 1];
    layer.resize(net.layer_sizes[k]);
    for (int i = 0; i < net.layer_sizes[k]; ++i) {
      layer[i].resize(s);
      for (int j = 0; j < s; ++j) {
        layer[i][j] = i * s + j;  // disjoint consecutive blocks
      }
    }
  }
  return net;
}

Network build_random_network(std::span<const int> m_vec, std::span<const int> s_vec,
                             std::uint64_t seed) {
  if (m_vec.size() < 2 || s_vec.size() + 1 != m_vec.size()) {
    throw std::invalid_argument("need K+1 layer sizes and K sourcing counts");
  }
  const int K = static_cast<int>(s_vec.size());
  for (int k = 1; k <= K; ++k) {
    if (m_vec[k] < 1 || s_vec[k - 1] < 1 || s_vec[k - 1] > m_vec[k - 1]) {
      throw std::invalid_argument("infeasible layer sizes: need m_{k-1} >= s_k >= 1");
    }
  }
  if (m_vec[0] > kMaxBasalFirms) {
    throw std::invalid_argument("basal layer exceeds the firm cap");
  }

  Network net;
  net.layer_sizes.assign(m_vec.begin(), m_vec.end());
  net.suppliers.resize(K);
  SplitMix64 rng(seed);
  std::vector<int> pool;
  for (int k = 1; k <= K; ++k) {
    auto& layer = net.suppliers[k - 1];
    layer.resize(m_vec[k]);
    for (int i = 0; i < m_vec[k]; ++i) {
      layer[i] = draw_subset(rng, m_vec[k - 1], s_vec[k - 1], pool);
    }
  }
  return net;
}

SimulationReport run_trials(const Network& net, BasalMode mode, const BetaParams& base,
                            long trials, std::uint64_t seed,
                            const std::vector<double>& fixed_p,
                            const TrialOptions& opts) {
  validate_network(net);
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  if (mode == BasalMode::FixedVector &&
      static_cast<int>(fixed_p.size()) != net.layer_sizes[0]) {
    throw std::invalid_argument("fixed_p must supply one probability per basal firm");
  }
  const BetaShape shape = shape_from_mean_overdispersion(base);
  const std::size_t n_layers = net.layer_sizes.size();

  struct WorkerState {
    std::vector<long> layer_totals;
    std::vector<std::vector<long>> fail_counts;
    std::vector<TrialRecord> records;
  };

  const int threads = std::max(1, opts.threads);
  std::vector<WorkerState> states(threads);
  for (auto& st : states) {
    st.layer_totals.assign(n_layers, 0);
    if (opts.per_firm) {
      st.fail_counts.resize(n_layers);
      for (std::size_t k = 0; k < n_layers; ++k) {
        st.fail_counts[k].assign(net.layer_sizes[k], 0);
      }
    }
  }

  auto work = [&](int w, long t_begin, long t_end) {
    WorkerState& st = states[w];
    TrialScratch scratch;
    std::vector<long> disrupted;
    auto* counts = opts.per_firm ? &st.fail_counts : nullptr;
    for (long t = t_begin; t < t_end; ++t) {
      SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(t));
      const double p =
          run_one_trial(net, mode, shape, fixed_p, rng, scratch, disrupted, counts);
      for (std::size_t k = 0; k < n_layers; ++k) {
        st.layer_totals[k] += disrupted[k];
      }
      if (opts.keep_records) {
        TrialRecord rec;
        rec.common_p = p;
        rec.disrupted.assign(disrupted.begin(), disrupted.end());
        st.records.push_back(std::move(rec));
      }
    }
  };

  if (threads == 1) {
    work(0, 0, trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long chunk = (trials + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const long b = std::min<long>(trials, w * chunk);
      const long e = std::min<long>(trials, b + chunk);
      pool.emplace_back(work, w, b, e);
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  // Merge in worker order; totals are integers, so the result is identical
  // to a sequential run regardless of scheduling.
  SimulationReport report;
  report.trials = trials;
  report.mode = mode;
  report.layers.resize(n_layers);
  std::vector<long> totals(n_layers, 0);
  for (const auto& st : states) {
    for (std::size_t k = 0; k < n_layers; ++k) {
      totals[k] += st.layer_totals[k];
    }
  }
  for (std::size_t k = 0; k < n_layers; ++k) {
    const double denom = static_cast<double>(trials) * net.layer_sizes[k];
    const double frac = static_cast<double>(totals[k]) / denom;
    report.layers[k].fraction = frac;
    report.layers[k].se =
        std::sqrt(frac * (1.0 - frac) / static_cast<double>(trials));
  }
  if (opts.per_firm) {
    report.firm_fail_counts.resize(n_layers);
    for (std::size_t k = 0; k < n_layers; ++k) {
      report.firm_fail_counts[k].assign(net.layer_sizes[k], 0);
      for (const auto& st : states) {
        for (int i = 0; i < net.layer_sizes[k]; ++i) {
          report.firm_fail_counts[k][i] += st.fail_counts[k][i];
        }
      }
    }
  }
  if (opts.keep_records) {
    for (auto& st : states) {
      for (auto& rec : st.records) {
        report.records.push_back(std::move(rec));
      }
    }
  }
  return report;
}

ExchangeabilityReport exchangeability_check(std::span<const int> m_vec,
                                            std::span<const int> s_vec, int layer,
                                            int subset_size, const BetaParams& base,
                                            long trials, std::uint64_t seed) {
  const int K = static_cast<int>(s_vec.size());
  if (m_vec.size() != s_vec.size() + 1) {
    throw std::invalid_argument("need K+1 layer sizes and K sourcing counts");
  }
  for (int k = 1; k <= K; ++k) {
    if (m_vec[k] < 1 || s_vec[k - 1] < 1 || s_vec[k - 1] > m_vec[k - 1]) {
      throw std::invalid_argument("infeasible layer sizes: need m_{k-1} >= s_k >= 1");
    }
  }
  if (layer < 1 || layer > K) {
    throw std::invalid_argument("layer must be in 1..K");
  }
  if (subset_size < 1 || 2 * subset_size > m_vec[layer]) {
    throw std::invalid_argument("need two disjoint subsets in the layer");
  }
  if (subset_size > 16) {
    throw std::invalid_argument("subset joint law limited to 16 firms");
  }
  const BetaShape shape = shape_from_mean_overdispersion(base);
  const int cells = 1 << subset_size;

  // Subset A = firms [0, subset_size), B = the next subset_size firms.
  // The wiring is redrawn every trial (sourcing is a uniform random
  // subset), so firm labels carry no information and the two joint laws
  // must agree.
  std::vector<long> count_a(cells, 0);
  std::vector<long> count_b(cells, 0);
  std::vector<std::pair<int, int>> outcomes;
  outcomes.reserve(trials);

  TrialScratch scratch;
  std::vector<long> disrupted;
  std::vector<int> pool;
  for (long t = 0; t < trials; ++t) {
    SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(t));
    // Wiring first, then basal randomness, in a fixed order.
    Network net;
    net.layer_sizes.assign(m_vec.begin(), m_vec.end());
    net.suppliers.resize(K);
    for (int k = 1; k <= K; ++k) {
      auto& lay = net.suppliers[k - 1];
      lay.resize(m_vec[k]);
      for (int i = 0; i < m_vec[k]; ++i) {
        lay[i] = draw_subset(rng, m_vec[k - 1], s_vec[k - 1], pool);
      }
    }

    scratch.current.assign(static_cast<std::size_t>(m_vec[0]), 0);
    const double p = sample_beta(rng, shape.alpha, shape.beta);
    for (int j = 0; j < m_vec[0]; ++j) {
      scratch.current[j] = rng.next_double() < p ? 1 : 0;
    }
    for (int k = 1; k <= layer; ++k) {
      const auto& lay = net.suppliers[k - 1];
      scratch.next.assign(lay.size(), 0);
      for (std::size_t i = 0; i < lay.size(); ++i) {
        std::uint8_t all_failed = 1;
        for (const int sup : lay[i]) {
          if (!scratch.current[sup]) {
            all_failed = 0;
            break;
          }
        }
        scratch.next[i] = all_failed;
      }
      scratch.current.swap(scratch.next);
    }

    int code_a = 0;
    int code_b = 0;
    for (int i = 0; i < subset_size; ++i) {
      code_a |= scratch.current[i] << i;
      code_b |= scratch.current[subset_size + i] << i;
    }
    ++count_a[code_a];
    ++count_b[code_b];
    outcomes.emplace_back(code_a, code_b);
  }

  auto tv_of = [&](const std::vector<long>& ca, const std::vector<long>& cb) {
    double tv = 0.0;
    for (int i = 0; i < cells; ++i) {
      tv += std::fabs(static_cast<double>(ca[i]) - static_cast<double>(cb[i]));
    }
    return tv / (2.0 * static_cast<double>(trials));
  };
  const double observed = tv_of(count_a, count_b);

  // Paired permutation test: under exchangeability, swapping the A and B
  // outcomes within a trial leaves the joint law unchanged.
  constexpr int kRounds = 200;
  SplitMix64 perm_rng = SplitMix64::substream(seed, 0xEC5AB1E5ULL);
  int at_least = 0;
  std::vector<long> pa(cells), pb(cells);
  for (int r = 0; r < kRounds; ++r) {
    std::fill(pa.begin(), pa.end(), 0);
    std::fill(pb.begin(), pb.end(), 0);
    for (const auto& [a, b] : outcomes) {
      if (perm_rng.next() & 1ULL) {
        ++pa[b];
        ++pb[a];
      } else {
        ++pa[a];
        ++pb[b];
      }
    }
    if (tv_of(pa, pb) >= observed) {
      ++at_least;
    }
  }

  ExchangeabilityReport rep;
  rep.tv_distance = observed;
  rep.p_value = (at_least + 1.0) / (kRounds + 1.0);
  rep.trials = trials;
  return rep;
}

std::vector<ConvergenceRow> finite_m_convergence(std::span<const int> m_list,
                                                 std::span<const int> s_vec,
                                                 const BetaParams& base, long trials,
                                                 std::uint64_t seed) {
  const int K = static_cast<int>(s_vec.size());
  std::vector<ConvergenceRow> rows;
  rows.reserve(m_list.size());

  for (const int m : m_list) {
    for (const int s : s_vec) {
      if (s < 1 || s > m) {
        throw std::invalid_argument("sourcing counts must lie in 1..m");
      }
    }
    std::vector<int> m_vec(K + 1, m);
    const BetaShape shape = shape_from_mean_overdispersion(base);
    std::vector<long> totals(K + 1, 0);
    TrialScratch scratch;
    std::vector<int> pool;
    for (long t = 0; t < trials; ++t) {
      SplitMix64 rng =
          SplitMix64::substream(seed ^ static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(t));
      Network net;
      net.layer_sizes = m_vec;
      net.suppliers.resize(K);
      for (int k = 1; k <= K; ++k) {
        auto& lay = net.suppliers[k - 1];
        lay.resize(m);
        for (int i = 0; i < m; ++i) {
          lay[i] = draw_subset(rng, m, s_vec[k - 1], pool);
        }
      }
      const double p = sample_beta(rng, shape.alpha, shape.beta);
      scratch.current.assign(static_cast<std::size_t>(m), 0);
      for (int j = 0; j < m; ++j) {
        scratch.current[j] = rng.next_double() < p ? 1 : 0;
      }
      totals[0] += std::count(scratch.current.begin(), scratch.current.end(), 1);
      for (int k = 1; k <= K; ++k) {
        const auto& lay = net.suppliers[k - 1];
        scratch.next.assign(lay.size(), 0);
        long cnt = 0;
        for (std::size_t i = 0; i < lay.size(); ++i) {
          std::uint8_t all_failed = 1;
          for (const int sup : lay[i]) {
            if (!scratch.current[sup]) {
              all_failed = 0;
              break;
            }
          }
          scratch.next[i] = all_failed;
          cnt += all_failed;
        }
        totals[k] += cnt;
        scratch.current.swap(scratch.next);
      }
    }

    double worst = 0.0;
    std::uint64_t S = 1;
    for (int k = 0; k <= K; ++k) {
      if (k > 0) {
        S *= static_cast<std::uint64_t>(s_vec[k - 1]);
      }
      const double analytic =
          k == 0 ? base.mu : betapower_mean(base, static_cast<double>(S));
      const double frac =
          static_cast<double>(totals[k]) / (static_cast<double>(trials) * m);
      worst = std::max(worst, std::fabs(frac - analytic));
    }
    rows.push_back(ConvergenceRow{m, worst});
  }
  return rows;
}

}  // namespace scfrag
