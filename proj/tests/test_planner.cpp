#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "scfrag/planner.hpp"

using namespace scfrag;

namespace {

// Exhaustive enumeration of all sourcing sequences, the planner oracle.
// Returns the best average welfare; best_seq receives the argmax with ties
// resolved lexicographically towards smaller s.
double enumerate_plans(const EconomyParams& econ, int s_max,
                       std::vector<int>* best_seq = nullptr) {
  std::vector<int> cur(econ.K, 0);
  std::vector<double> payoffs(econ.K, 0.0);
  std::vector<int> best(econ.K, 0);
  double best_total = -1e300;
  std::function<void(int, double, bool)> rec = [&](int k, double S, bool dead) {
    if (k == econ.K) {
      // Fold right to left, matching the Bellman recursion's addition
      // order, so exact equality with the DP value is meaningful.
      double total = 0.0;
      for (int j = econ.K - 1; j >= 0; --j) {
        total = payoffs[j] + total;
      }
      if (total > best_total) {
        best_total = total;
        best = cur;
      }
      return;
    }
    for (int s = 0; s <= s_max; ++s) {
      cur[k] = s;
      if (dead || s == 0) {
        payoffs[k] = 0.0;
        rec(k + 1, S, true);
      } else {
        payoffs[k] = stage_payoff(s, S, econ.base, econ.pi, econ.c);
        rec(k + 1, S * s, false);
      }
    }
  };
  rec(0, 1.0, false);
  if (best_seq) {
    *best_seq = best;
  }
  return best_total / econ.K;
}

}  // namespace

TEST_CASE("stage payoff: base cases") {
  const BetaParams base(0.4, 0.3);
  CHECK(stage_payoff(0, 1.0, base, 1.0, 0.1) == 0.0);
  CHECK(stage_payoff(0, 8.0, base, 2.0, 0.1) == 0.0);
  CHECK(stage_payoff(1, 1.0, base, 1.0, 0.1) ==
        doctest::Approx((1.0 - 0.4) * 1.0 - 0.05).epsilon(1e-13));
  for (const int s : {1, 2, 5}) {
    for (const double S : {1.0, 3.0}) {
      const double direct = (1.0 - betapower_mean(base, S * s)) * 1.0 - 0.05 * s * s;
      CHECK(stage_payoff(s, S, base, 1.0, 0.1) == doctest::Approx(direct).epsilon(1e-13));
    }
  }
}

TEST_CASE("planner with K = 1 maximises the single stage payoff") {
  const EconomyParams econ(1, 1.0, 0.04, BetaParams(0.5, 1e-9));
  const PlannerSolution sol = planner_solve(econ, 12);
  REQUIRE(sol.s_seq.size() == 1);
  int best_s = 0;
  double best = 0.0;
  for (int s = 1; s <= 12; ++s) {
    const double v = stage_payoff(s, 1.0, econ.base, econ.pi, econ.c);
    if (v > best) {
      best = v;
      best_s = s;
    }
  }
  CHECK(sol.s_seq[0] == best_s);
  CHECK(sol.value == doctest::Approx(best).epsilon(1e-13));
  // With one layer the planner's problem and the firm's coincide.
  CHECK(sol.s_seq[0] ==
        optimal_sourcing_correlated(1.0, econ.base.mu, econ.base, econ.pi, econ.c)
            .optimal);
}

TEST_CASE("degenerate economy: sourcing never pays") {
  const EconomyParams econ(4, 1e-9, 0.1, BetaParams(0.5, 0.3));
  const PlannerSolution sol = planner_solve(econ, 6);
  for (const int s : sol.s_seq) {
    CHECK(s == 0);
  }
  CHECK(sol.value == 0.0);
  for (const double mu : sol.mu_traj) {
    CHECK(mu == 1.0);  // dead state
  }
}

TEST_CASE("planner DP equals exhaustive enumeration for K = 3, s_max = 4") {
  for (const double mu0 : {0.2, 0.35, 0.5, 0.65, 0.8}) {
    for (const double rho0 : {0.15, 0.3, 0.45, 0.6, 0.75}) {
      const EconomyParams econ(3, 1.0, 0.05, BetaParams(mu0, rho0));
      const PlannerSolution sol = planner_solve(econ, 4);
      std::vector<int> best_seq;
      const double brute = enumerate_plans(econ, 4, &best_seq);
      CHECK(sol.value == brute);
      CHECK(sol.s_seq == best_seq);
    }
  }
}

TEST_CASE("Bellman consistency and the mu trajectory") {
  const EconomyParams econ(5, 1.0, 0.03, BetaParams(0.45, 0.25));
  const PlannerSolution sol = planner_solve(econ, 8);
  REQUIRE(sol.s_seq.size() == 5);

  // Re-evaluating the extracted sequence right-to-left reproduces the value.
  double total = 0.0;
  {
    std::vector<double> payoffs;
    double S = 1.0;
    bool dead = false;
    for (int k = 0; k < econ.K; ++k) {
      const int s = sol.s_seq[k];
      if (dead || s == 0) {
        payoffs.push_back(0.0);
        dead = true;
        continue;
      }
      payoffs.push_back(stage_payoff(s, S, econ.base, econ.pi, econ.c));
      S *= s;
    }
    for (int k = econ.K - 1; k >= 0; --k) {
      total += payoffs[k];
    }
  }
  CHECK(sol.value == total / econ.K);
  CHECK(sol.welfare == sol.value);

  // mu_traj follows betapower_mean along the cumulative products.
  double S = 1.0;
  for (int k = 0; k < econ.K; ++k) {
    S *= sol.s_seq[k];
    CHECK(sol.mu_traj[k] ==
          doctest::Approx(betapower_mean(econ.base, S)).epsilon(1e-12));
  }
}

TEST_CASE("dead-state absorption") {
  // Force an early shutdown by making the basal layer hopeless.
  const EconomyParams econ(4, 1.0, 1.9, BetaParams(0.97, 0.1));
  const PlannerSolution sol = planner_solve(econ, 5);
  bool dead = false;
  for (int k = 0; k < econ.K; ++k) {
    if (sol.s_seq[k] == 0) {
      dead = true;
    }
    if (dead) {
      CHECK(sol.s_seq[k] == 0);
      CHECK(sol.mu_traj[k] == 1.0);
    }
  }
  CHECK(dead);
}

TEST_CASE("decentralized welfare: degenerate trajectories") {
  // All-shutdown: zero welfare.
  const EconomyParams shut(3, 1.0, 0.8, BetaParams(0.9, 0.2));
  CHECK(decentralized_welfare(propagate_chain(shut), shut) == 0.0);

  // Single-sourcing everywhere: constant per-layer payoff.
  const EconomyParams single(6, 1.0, 0.16, BetaParams(0.3, 0.3));
  const ChainTrajectory t = propagate_chain(single);
  REQUIRE(t.layers.back().s == 1);
  CHECK(decentralized_welfare(t, single) ==
        doctest::Approx((1.0 - 0.3) * 1.0 - 0.08).epsilon(1e-12));
}

TEST_CASE("planner weakly dominates the decentralized equilibrium") {
  std::vector<double> mus, rhos;
  for (int i = 0; i < 10; ++i) {
    mus.push_back(0.05 + 0.09 * i);
    rhos.push_back(0.05 + 0.09 * i);
  }
  const WelfareGrid grid = comparison_grid(mus, rhos, 1.0, 0.04, 8, 12);
  REQUIRE(grid.cells.size() == 100);
  for (const WelfareCell& cell : grid.cells) {
    REQUIRE(cell.ok);
    CHECK(cell.w_plan >= cell.w_dec - 1e-9);
  }
}

TEST_CASE("firms overdiversify at high correlation and low basal risk") {
  // Existence asserted by scan; coordinates are a property of the regime,
  // not hard-coded expectations.
  const std::vector<double> mus{0.1, 0.2, 0.3};
  const std::vector<double> rhos{0.85, 0.95};
  bool found = false;
  for (const double rc : {0.0005, 0.001}) {
    const WelfareGrid grid = comparison_grid(mus, rhos, 1.0, 2 * rc, 8, 12);
    for (const WelfareCell& cell : grid.cells) {
      if (cell.ok && cell.mu_bar_dec < cell.mu_bar_plan - 1e-9) {
        found = true;
      }
    }
  }
  CHECK(found);
}

TEST_CASE("welfare loss is large near the critical threshold at high costs") {
  const double rc = 0.08;
  const double mu_c = critical_threshold_closed_form(rc).value();  // 0.6
  std::vector<double> mus;
  for (double m = mu_c - 0.05; m <= mu_c + 0.1001; m += 0.02) {
    mus.push_back(m);
  }
  const std::vector<double> rhos{0.01};
  const WelfareGrid grid = comparison_grid(mus, rhos, 1.0, 2 * rc, 8, 12);
  double max_loss = 0.0;
  for (const WelfareCell& cell : grid.cells) {
    REQUIRE(cell.ok);
    max_loss = std::max(max_loss, cell.w_plan - cell.w_dec);
  }
  CHECK(max_loss > 0.2);
}

TEST_CASE("diversification state overflow is caught") {
  // Slow moment decay keeps states below the saturation threshold while
  // the products outgrow 64 bits.
  const EconomyParams econ(70, 1.0, 1e-6, BetaParams(0.1, 0.9));
  CHECK_THROWS_AS(planner_solve(econ, 4), std::runtime_error);
}

TEST_CASE("per-cell errors are flagged, not thrown") {
  // rho0 = 0 is outside the Beta domain; the cell reports it.
  const std::vector<double> mus{0.5};
  const std::vector<double> rhos{0.0};
  const WelfareGrid grid = comparison_grid(mus, rhos, 1.0, 0.04, 3, 4);
  REQUIRE(grid.cells.size() == 1);
  CHECK(!grid.cells[0].ok);
  CHECK(!grid.cells[0].error.empty());
}
