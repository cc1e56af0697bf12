#include "scfrag/perfect_info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "subset_draw.hpp"

namespace scfrag {

using detail::draw_subset;

namespace {

void check_args(int m, int K, int s1, BasalMode mode, const std::vector<double>& fixed_p) {
  if (m < 1 || K < 1) {
    throw std::invalid_argument("need m >= 1 firms per layer and K >= 1 layers");
  }
  if (s1 < 1 || s1 > m) {
    throw std::invalid_argument("need m >= s1 >= 1");
  }
  if (mode == BasalMode::FixedVector && static_cast<int>(fixed_p.size()) != m) {
    throw std::invalid_argument("fixed_p must supply one probability per basal firm");
  }
}

// Basal probabilities for one trial.
void draw_basal_p(BasalMode mode, const BetaShape& shape,
                  const std::vector<double>& fixed_p, int m, SplitMix64& rng,
                  std::vector<double>& p) {
  p.resize(m);
  switch (mode) {
    case BasalMode::CommonDraw: {
      const double common = sample_beta(rng, shape.alpha, shape.beta);
      std::fill(p.begin(), p.end(), common);
      break;
    }
    case BasalMode::IidDraw:
      for (int j = 0; j < m; ++j) {
        p[j] = sample_beta(rng, shape.alpha, shape.beta);
      }
      break;
    case BasalMode::FixedVector:
      std::copy(fixed_p.begin(), fixed_p.end(), p.begin());
      break;
  }
}

// Indices of the s lowest probabilities, ties broken by lowest index.
std::vector<int> safest(const std::vector<double>& p, int s) {
  std::vector<int> idx(p.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return p[a] < p[b]; });
  idx.resize(s);
  return idx;
}

}  // namespace

PerfectInfoOutcome simulate_perfect_info(int m, int K, int s1, BasalMode mode,
                                         const BetaParams& base, long trials,
                                         std::uint64_t seed,
                                         const std::vector<double>& fixed_p,
                                         const EconomyParams* verify_econ) {
  check_args(m, K, s1, mode, fixed_p);
  if (trials < 1) {
    throw std::invalid_argument("trials must be >= 1");
  }
  const BetaShape shape = shape_from_mean_overdispersion(base);

  PerfectInfoOutcome out{};
  out.trials = trials;
  long failed_firms = 0;

  std::vector<double> p;
  std::vector<std::uint8_t> basal;
  std::vector<std::uint8_t> cur;
  std::vector<std::uint8_t> nxt;
  for (long t = 0; t < trials; ++t) {
    SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(t));
    draw_basal_p(mode, shape, fixed_p, m, rng, p);
    basal.resize(m);
    for (int j = 0; j < m; ++j) {
      basal[j] = rng.next_double() < p[j] ? 1 : 0;
    }

    // Layer 1: all m firms source the identical safest-s1 set.
    const std::vector<int> chosen = safest(p, s1);
    std::uint8_t layer1_fail = 1;
    for (const int j : chosen) {
      if (!basal[j]) {
        layer1_fail = 0;
        break;
      }
    }
    cur.assign(m, layer1_fail);

    // Layers >= 2 single-source; wired i -> i so the all-or-nothing claim
    // is exercised through an actual cascade rather than assumed.
    for (int k = 2; k <= K; ++k) {
      nxt.resize(m);
      for (int i = 0; i < m; ++i) {
        nxt[i] = cur[i];
      }
      cur.swap(nxt);
    }

    const long n_failed = std::count(cur.begin(), cur.end(), 1);
    failed_firms += n_failed;
    if (n_failed == m) {
      ++out.all_fail;
    } else if (n_failed == 0) {
      ++out.none_fail;
    } else {
      ++out.mixed;
    }
  }
  out.firm_fail_freq =
      static_cast<double>(failed_firms) / (static_cast<double>(trials) * m);

  if (verify_econ) {
    // The equilibrium argument forces single sourcing from layer 2 on:
    // identical layer-1 outcomes mean perfectly correlated inputs.  Check
    // it numerically at overdispersion ~ 1 with the inherited
    // diversification level.
    const BetaParams correlated(base.mu, 1.0 - 1e-9);
    const double mu_up = std::min(1.0, std::max(1e-12, betapower_mean(base, s1)));
    const SourcingDecision d = optimal_sourcing_correlated(
        static_cast<double>(s1), mu_up, correlated, verify_econ->pi, verify_econ->c);
    out.single_sourcing_verified = d.optimal <= 1;
  }
  return out;
}

RegimeComparison compare_with_opaque(int m, int K, std::span<const int> s_vec,
                                     BasalMode mode, const BetaParams& base,
                                     long trials, std::uint64_t seed,
                                     const std::vector<double>& fixed_p) {
  if (static_cast<int>(s_vec.size()) != K) {
    throw std::invalid_argument("need one sourcing count per downstream layer");
  }
  check_args(m, K, s_vec[0], mode, fixed_p);
  for (const int s : s_vec) {
    if (s < 1 || s > m) {
      throw std::invalid_argument("sourcing counts must lie in 1..m");
    }
  }
  const BetaShape shape = shape_from_mean_overdispersion(base);

  long perfect_failed = 0;
  long opaque_failed = 0;
  double diff_sum = 0.0;
  double diff_sq = 0.0;

  std::vector<double> p;
  std::vector<std::uint8_t> basal;
  std::vector<std::uint8_t> cur;
  std::vector<std::uint8_t> nxt;
  std::vector<int> pool(m);
  for (long t = 0; t < trials; ++t) {
    // Common random numbers: one substream drives the basal layer for both
    // regimes, a forked substream drives the opaque wiring.
    SplitMix64 rng = SplitMix64::substream(seed, static_cast<std::uint64_t>(t));
    SplitMix64 wiring = SplitMix64::substream(seed ^ 0x0BAC0DE5C0FFEEULL,
                                              static_cast<std::uint64_t>(t));
    draw_basal_p(mode, shape, fixed_p, m, rng, p);
    basal.resize(m);
    for (int j = 0; j < m; ++j) {
      basal[j] = rng.next_double() < p[j] ? 1 : 0;
    }

    // Perfect information: safest s_1 at layer 1 (identical set for all
    // firms), any s_k distinct suppliers afterwards; with identical
    // upstream outcomes the choice is irrelevant, firm i takes an offset
    // block.
    std::uint8_t fail1 = 1;
    for (const int j : safest(p, s_vec[0])) {
      if (!basal[j]) {
        fail1 = 0;
        break;
      }
    }
    cur.assign(m, fail1);
    for (int k = 2; k <= K; ++k) {
      nxt.resize(m);
      for (int i = 0; i < m; ++i) {
        std::uint8_t all_failed = 1;
        for (int j = 0; j < s_vec[k - 1]; ++j) {
          if (!cur[(i + j) % m]) {
            all_failed = 0;
            break;
          }
        }
        nxt[i] = all_failed;
      }
      cur.swap(nxt);
    }
    const long perfect_n = std::count(cur.begin(), cur.end(), 1);

    // Opaque: every firm draws a uniform random subset of suppliers.
    cur.assign(m, 0);
    for (int i = 0; i < m; ++i) {
      std::uint8_t all_failed = 1;
      for (const int j : draw_subset(wiring, m, s_vec[0], pool)) {
        if (!basal[j]) {
          all_failed = 0;
          break;
        }
      }
      cur[i] = all_failed;
    }
    for (int k = 2; k <= K; ++k) {
      nxt.assign(m, 0);
      for (int i = 0; i < m; ++i) {
        std::uint8_t all_failed = 1;
        for (const int j : draw_subset(wiring, m, s_vec[k - 1], pool)) {
          if (!cur[j]) {
            all_failed = 0;
            break;
          }
        }
        nxt[i] = all_failed;
      }
      cur.swap(nxt);
    }
    const long opaque_n = std::count(cur.begin(), cur.end(), 1);

    perfect_failed += perfect_n;
    opaque_failed += opaque_n;
    const double d = static_cast<double>(perfect_n - opaque_n) / m;
    diff_sum += d;
    diff_sq += d * d;
  }

  RegimeComparison cmp{};
  cmp.trials = trials;
  const double nt = static_cast<double>(trials);
  cmp.perfect_freq = static_cast<double>(perfect_failed) / (nt * m);
  cmp.opaque_freq = static_cast<double>(opaque_failed) / (nt * m);
  cmp.perfect_se = std::sqrt(cmp.perfect_freq * (1.0 - cmp.perfect_freq) / nt);
  cmp.opaque_se = std::sqrt(cmp.opaque_freq * (1.0 - cmp.opaque_freq) / nt);
  cmp.diff = cmp.perfect_freq - cmp.opaque_freq;
  const double mean_d = diff_sum / nt;
  const double var_d = std::max(0.0, diff_sq / nt - mean_d * mean_d);
  cmp.diff_se = std::sqrt(var_d / nt);
  return cmp;
}

}  // namespace scfrag
