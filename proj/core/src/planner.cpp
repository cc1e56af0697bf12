#include "scfrag/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace scfrag {

namespace {

// Sentinel states of the backward induction.  Dead absorbs the s = 0
// choice (everything downstream is disrupted, payoff 0); Saturated merges
// all diversification levels whose mean disruption is below kSaturation.
constexpr std::uint64_t kDead = 0;
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
constexpr double kSaturation = 1e-15;
constexpr std::size_t kStateCap = 1'000'000;

struct DpEntry {
  double value;
  int argmax;
};

struct DpContext {
  const EconomyParams* econ;
  int s_max;
  bool hit_smax = false;
  std::map<std::pair<int, std::uint64_t>, DpEntry> memo;
};

double mean_at(const EconomyParams& econ, std::uint64_t S) {
  if (S == kDead) {
    return 1.0;
  }
  if (S == kSaturated) {
    return 0.0;
  }
  return betapower_mean(econ.base, static_cast<double>(S));
}

double payoff(const EconomyParams& econ, int s, std::uint64_t S) {
  if (s == 0 || S == kDead) {
    return 0.0;
  }
  if (S == kSaturated) {
    return econ.pi - 0.5 * econ.c * s * s;
  }
  return stage_payoff(s, static_cast<double>(S), econ.base, econ.pi, econ.c);
}

std::uint64_t advance(const EconomyParams& econ, std::uint64_t S, int s) {
  if (s == 0 || S == kDead) {
    return kDead;
  }
  if (S == kSaturated) {
    return kSaturated;
  }
  if (S > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(s)) {
    throw std::runtime_error("planner state overflow: raise saturation or lower s_max");
  }
  const std::uint64_t next = S * static_cast<std::uint64_t>(s);
  if (betapower_mean(econ.base, static_cast<double>(next)) < kSaturation) {
    return kSaturated;
  }
  return next;
}

// V_k(S) with V_{K+1} = 0; ties pick the smaller s.
DpEntry solve(DpContext& ctx, int k, std::uint64_t S) {
  const EconomyParams& econ = *ctx.econ;
  if (k > econ.K) {
    return DpEntry{0.0, 0};
  }
  const auto key = std::make_pair(k, S);
  if (const auto it = ctx.memo.find(key); it != ctx.memo.end()) {
    return it->second;
  }
  if (ctx.memo.size() >= kStateCap) {
    throw std::runtime_error("planner state cap exceeded");
  }

  double best = -std::numeric_limits<double>::infinity();
  int best_s = 0;
  for (int s = 0; s <= ctx.s_max; ++s) {
    const double v =
        payoff(econ, s, S) + solve(ctx, k + 1, advance(econ, S, s)).value;
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  if (best_s == ctx.s_max) {
    ctx.hit_smax = true;
  }
  const DpEntry entry{best, best_s};
  ctx.memo.emplace(key, entry);
  return entry;
}

}  // namespace

double stage_payoff(int s, double S, const BetaParams& base, double pi, double c) {
  if (!(S >= 1.0)) {
    throw std::invalid_argument("S must be >= 1");
  }
  if (s < 0) {
    throw std::invalid_argument("s must be >= 0");
  }
  if (s == 0) {
    return 0.0;  // expected disruption is 1, and no sourcing cost
  }
  return (1.0 - betapower_mean(base, S * s)) * pi - 0.5 * c * s * s;
}

PlannerSolution planner_solve(const EconomyParams& econ, int s_max) {
  if (s_max < 1) {
    throw std::invalid_argument("s_max must be >= 1");
  }
  DpContext ctx;
  ctx.econ = &econ;
  ctx.s_max = s_max;

  const double v1 = solve(ctx, 1, 1).value;

  PlannerSolution sol;
  sol.hit_smax = ctx.hit_smax;
  sol.s_seq.reserve(econ.K);
  sol.mu_traj.reserve(econ.K);
  std::uint64_t S = 1;
  for (int k = 1; k <= econ.K; ++k) {
    const int s = solve(ctx, k, S).argmax;
    sol.s_seq.push_back(s);
    S = advance(econ, S, s);
    sol.mu_traj.push_back(mean_at(econ, S));
  }
  sol.value = v1 / econ.K;
  sol.welfare = sol.value;
  return sol;
}

double decentralized_welfare(const ChainTrajectory& traj, const EconomyParams& econ) {
  // Layers 1..K; once the trajectory settles, the fixed-point payoff
  // repeats.  An unconverged trajectory must cover the horizon.
  if (!traj.converged && static_cast<int>(traj.layers.size()) < econ.K) {
    throw std::invalid_argument("trajectory too short for the welfare horizon");
  }
  double sum = 0.0;
  double last = 0.0;
  for (int k = 1; k <= econ.K; ++k) {
    if (k <= static_cast<int>(traj.layers.size())) {
      const LayerState& L = traj.layers[k - 1];
      last = (1.0 - L.mu) * econ.pi - 0.5 * econ.c * L.s * L.s;
    }
    sum += last;
  }
  return sum / econ.K;
}

WelfareGrid comparison_grid(std::span<const double> mu0_list,
                            std::span<const double> rho0_list, double pi, double c,
                            int K, int s_max) {
  WelfareGrid grid;
  grid.mu0_axis.assign(mu0_list.begin(), mu0_list.end());
  grid.rho0_axis.assign(rho0_list.begin(), rho0_list.end());
  grid.cells.reserve(mu0_list.size() * rho0_list.size());

  for (const double mu0 : mu0_list) {
    for (const double rho0 : rho0_list) {
      WelfareCell cell{mu0, rho0, 0.0, 0.0, 0.0, 0.0, true, {}};
      try {
        const EconomyParams econ(K, pi, c, BetaParams(mu0, rho0));
        const ChainTrajectory traj = propagate_chain(econ, std::max(64, K));
        // Raise s_max to cover the decentralized choices so that sequence
        // stays planner-feasible and weak dominance holds structurally.
        int eff_smax = s_max;
        for (const LayerState& L : traj.layers) {
          eff_smax = std::max(eff_smax, L.s);
        }
        const PlannerSolution plan = planner_solve(econ, eff_smax);
        cell.mu_bar_dec = traj.mu_bar;
        cell.mu_bar_plan = plan.mu_traj.empty() ? econ.base.mu : plan.mu_traj.back();
        cell.w_dec = decentralized_welfare(traj, econ);
        cell.w_plan = plan.welfare;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

}  // namespace scfrag
