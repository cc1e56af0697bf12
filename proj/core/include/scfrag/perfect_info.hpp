#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "scfrag/firm.hpp"
#include "scfrag/mc.hpp"

namespace scfrag {

/// Tally of final-layer outcomes under perfect information.  The chain is
/// all-or-nothing there, so mixed must be 0 in every configuration.
struct PerfectInfoOutcome {
  long trials;
  long all_fail;
  long none_fail;
  long mixed;
  double firm_fail_freq;
  // Set when a verification economy was supplied: true iff the numerical
  // sourcing optimum under perfectly correlated inputs is single sourcing,
  // confirming the forced choice for layers >= 2.
  std::optional<bool> single_sourcing_verified;
};

/// Perfect-information cascade: every layer-1 firm sources the s1 basal
/// firms with the lowest realized disruption probability (ties broken by
/// lowest index; the same set for all firms), layers >= 2 single-source.
/// Basal probabilities are drawn per `mode`; CommonDraw makes all basal
/// firms ex-post identical and "safest" degenerate, so IidDraw or
/// FixedVector are the intended modes.  Suppliers are ranked by marginal
/// probability only; correlation-aware selection is not modelled.
PerfectInfoOutcome simulate_perfect_info(int m, int K, int s1, BasalMode mode,
                                         const BetaParams& base, long trials,
                                         std::uint64_t seed,
                                         const std::vector<double>& fixed_p = {},
                                         const EconomyParams* verify_econ = nullptr);

struct RegimeComparison {
  long trials;
  double perfect_freq;
  double opaque_freq;
  double perfect_se;
  double opaque_se;
  double diff;     // perfect - opaque
  double diff_se;  // paired standard error under common random numbers
};

/// Perfect-information vs opaque (uniform random sourcing) regimes on
/// common random numbers: identical basal draws and basal disruptions per
/// trial, same per-layer source counts s_vec.  Reports final-layer firm
/// failure frequencies and their paired difference.
RegimeComparison compare_with_opaque(int m, int K, std::span<const int> s_vec,
                                     BasalMode mode, const BetaParams& base,
                                     long trials, std::uint64_t seed,
                                     const std::vector<double>& fixed_p = {});

}  // namespace scfrag
