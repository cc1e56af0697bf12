#include "scfrag/chain.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace scfrag {

ChainTrajectory propagate_chain(const EconomyParams& econ, int max_layers) {
  if (max_layers < 1) {
    throw std::invalid_argument("max_layers must be >= 1");
  }
  ChainTrajectory traj;
  traj.mu0 = econ.base.mu;
  traj.converged = false;

  std::uint64_t S = 1;
  double mu = econ.base.mu;
  for (int k = 1; k <= max_layers; ++k) {
    const SourcingDecision d = optimal_sourcing_correlated(
        static_cast<double>(S), mu, econ.base, econ.pi, econ.c);
    if (d.optimal == 0) {
      traj.layers.push_back(LayerState{k, 0, S, 1.0});
      traj.converged = true;
      break;
    }
    if (d.optimal > 1 &&
        S > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(d.optimal)) {
      break;  // diversification level would overflow: report as not settled
    }
    mu = eta(static_cast<double>(d.optimal), static_cast<double>(S), econ.base) * mu;
    S *= static_cast<std::uint64_t>(d.optimal);
    traj.layers.push_back(LayerState{k, d.optimal, S, mu});
    if (d.optimal == 1) {
      traj.converged = true;
      break;
    }
  }

  traj.mu_bar = traj.layers.empty() ? econ.base.mu : traj.layers.back().mu;
  traj.fragile = traj.mu_bar >= traj.mu0;  // weak inequality, no epsilon
  return traj;
}

std::vector<std::pair<double, double>> limit_map(std::span<const double> mu0_grid,
                                                 double rho0, double pi, double c,
                                                 int max_layers) {
  std::vector<std::pair<double, double>> out;
  out.reserve(mu0_grid.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (const double mu0 : mu0_grid) {
    if (mu0 <= prev) {
      throw std::invalid_argument("mu0 grid must be strictly increasing");
    }
    prev = mu0;
    const EconomyParams econ(1, pi, c, BetaParams(mu0, rho0));
    out.emplace_back(mu0, propagate_chain(econ, max_layers).mu_bar);
  }
  return out;
}

double critical_mu(double rho0, double pi, double c, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("tol must be positive");
  }
  auto fragile_at = [&](double mu0) {
    const EconomyParams econ(1, pi, c, BetaParams(mu0, rho0));
    return propagate_chain(econ).fragile;
  };

  constexpr double kStep = 1e-2;
  std::vector<std::pair<double, double>> brackets;
  double lo = kStep;
  bool lo_fragile = fragile_at(lo);
  bool any_resilient = !lo_fragile;
  for (double hi = 2 * kStep; hi < 1.0 - kStep / 2; hi += kStep) {
    const bool hi_fragile = fragile_at(hi);
    if (!lo_fragile && hi_fragile) {
      brackets.emplace_back(lo, hi);
    }
    any_resilient = any_resilient || !hi_fragile;
    lo = hi;
    lo_fragile = hi_fragile;
  }

  if (brackets.empty()) {
    throw ScanError(any_resilient ? "entire scanned range resilient: no fragile onset"
                                  : "entire scanned range fragile: no resilient region",
                    {});
  }
  if (brackets.size() > 1) {
    std::string msg = "multiple resilient-to-fragile transitions:";
    for (const auto& [a, b] : brackets) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " [%.4f, %.4f]", a, b);
      msg += buf;
    }
    throw ScanError(msg, brackets);
  }

  auto [a, b] = brackets.front();
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    if (fragile_at(mid)) {
      b = mid;
    } else {
      a = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace scfrag
