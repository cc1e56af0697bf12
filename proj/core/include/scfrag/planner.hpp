#pragma once

#include <span>
#include <string>
#include <vector>

#include "scfrag/chain.hpp"

namespace scfrag {

/// Socially optimal plan: per-layer sourcing sequence, value V1 (average
/// welfare per layer, identical to welfare), and the mean-disruption path
/// mu_traj[k] = betapower_mean(base, prod_{j<=k} s_seq[j]).
struct PlannerSolution {
  std::vector<int> s_seq;
  double value;
  double welfare;
  std::vector<double> mu_traj;
  bool hit_smax;  // some argmax reached s_max; consider raising it
};

/// Per-layer payoff l(s, S) = (1 - betapower_mean(base, S*s)) pi - (c/2) s^2;
/// s = 0 yields 0 exactly (expected disruption 1 with no suppliers).
double stage_payoff(int s, double S, const BetaParams& base, double pi, double c);

/// Backward induction over the multiplicative diversification state:
/// V_k(S) = max_{s in 0..s_max} { l(s, S) + V_{k+1}(S*s) }, V_{K+1} = 0,
/// evaluated on the exact reachable set of products.  s = 0 moves to an
/// absorbing dead state with zero continuation.  States whose mean
/// disruption falls below 1e-15 merge into one saturated state.  Ties pick
/// the smaller s.  Throws std::runtime_error if the reachable set exceeds
/// 1e6 states or the diversification level overflows.
PlannerSolution planner_solve(const EconomyParams& econ, int s_max = 12);

/// Average welfare of a decentralized trajectory over the economy's K
/// layers: W = (1/K) sum_k [(1 - mu_k) pi - (c/2) s_k^2].  Basal firms make
/// no sourcing decision, so the sum runs over layers 1..K; a fixed point
/// reached early repeats its payoff through layer K.
double decentralized_welfare(const ChainTrajectory& traj, const EconomyParams& econ);

struct WelfareCell {
  double mu0;
  double rho0;
  double mu_bar_dec;
  double mu_bar_plan;
  double w_dec;
  double w_plan;
  bool ok;
  std::string error;
};

/// Invariant (up to 1e-9 numerical slack): w_plan >= w_dec cell-wise.
struct WelfareGrid {
  std::vector<double> mu0_axis;
  std::vector<double> rho0_axis;
  std::vector<WelfareCell> cells;  // row-major, mu0 outer, rho0 inner

  const WelfareCell& at(std::size_t i_mu, std::size_t i_rho) const {
    return cells[i_mu * rho0_axis.size() + i_rho];
  }
};

/// Decentralized vs planner outcomes per (mu0, rho0) cell.  The planner's
/// s_max is raised per cell to cover the decentralized choices, so the
/// decentralized sequence is always planner-feasible and weak dominance
/// holds structurally.  Per-cell errors are flagged in the cell, never
/// thrown.
WelfareGrid comparison_grid(std::span<const double> mu0_list,
                            std::span<const double> rho0_list, double pi, double c,
                            int K, int s_max = 12);

}  // namespace scfrag
