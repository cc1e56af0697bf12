#include <cmath>
#include <vector>

#include "doctest.h"
#include "scfrag/chain.hpp"

using namespace scfrag;

TEST_CASE("shutdown branch: mu0 above the threshold") {
  // rc = 0.3 -> threshold 0.7; mu0 = 0.8 shuts down at the first layer.
  const EconomyParams econ(1, 1.0, 0.6, BetaParams(0.8, 0.2));
  const ChainTrajectory t = propagate_chain(econ);
  REQUIRE(t.layers.size() == 1);
  CHECK(t.layers[0].s == 0);
  CHECK(t.mu_bar == 1.0);
  CHECK(t.fragile);
  CHECK(t.converged);
}

TEST_CASE("resilient chain in the uncorrelated limit") {
  const double rc = 0.01;
  const EconomyParams econ(1, 1.0, 2 * rc, BetaParams(0.3, 1e-9));
  const ChainTrajectory t = propagate_chain(econ);
  CHECK(t.converged);
  CHECK(t.mu_bar < 0.3);
  CHECK(!t.fragile);
  CHECK(t.mu_bar * (1.0 - t.mu_bar) <= 3 * rc + 1e-9);
}

TEST_CASE("uncorrelated trajectory equals the scalar iteration") {
  // Dual implementation: iterate mu <- mu^{s(mu)} with the closed-form
  // decision rule and compare layer by layer.
  const double pi = 1.0;
  const double c = 0.02;
  const EconomyParams econ(1, pi, c, BetaParams(0.6, 1e-9));
  const ChainTrajectory t = propagate_chain(econ);

  double mu = 0.6;
  for (const LayerState& L : t.layers) {
    const SourcingDecision d = optimal_sourcing_uncorrelated(mu, pi, c);
    CHECK(L.s == d.optimal);
    if (d.optimal == 0) {
      mu = 1.0;
    } else {
      mu = std::pow(mu, d.optimal);
    }
    CHECK(std::fabs(L.mu - mu) < 1e-5);
    mu = L.mu;  // resynchronise so tolerance does not accumulate
  }
}

TEST_CASE("conservation: layer means stay on the analytic family") {
  for (const double mu0 : {0.2, 0.5, 0.8}) {
    for (const double rho0 : {1e-9, 0.05, 0.3, 0.7}) {
      for (const double rc : {0.01, 0.08}) {
        const EconomyParams econ(1, 1.0, 2 * rc, BetaParams(mu0, rho0));
        const ChainTrajectory t = propagate_chain(econ);
        for (const LayerState& L : t.layers) {
          if (L.s == 0) {
            CHECK(L.mu == 1.0);
            continue;
          }
          const double expect = betapower_mean(econ.base, static_cast<double>(L.S));
          CHECK(std::fabs(L.mu - expect) / expect < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("fixed points are idempotent and the fragility flag is exact") {
  const EconomyParams econ(1, 1.0, 0.04, BetaParams(0.4, 0.2));
  const ChainTrajectory t = propagate_chain(econ);
  REQUIRE(t.converged);
  const LayerState& last = t.layers.back();
  if (last.s == 1) {
    // One extra step from the fixed point reproduces the state exactly.
    const SourcingDecision d = optimal_sourcing_correlated(
        static_cast<double>(last.S), last.mu, econ.base, econ.pi, econ.c);
    CHECK(d.optimal == 1);
    CHECK(eta(1.0, static_cast<double>(last.S), econ.base) * last.mu == last.mu);
  }
  CHECK(t.fragile == (t.mu_bar >= t.mu0));
}

TEST_CASE("single-sourcing plateau counts as weakly fragile") {
  // Low mu0 single-sources immediately: mu_bar == mu0 exactly, and the
  // weak inequality classifies it as fragile.
  const EconomyParams econ(1, 1.0, 0.16, BetaParams(0.05, 0.1));
  const ChainTrajectory t = propagate_chain(econ);
  REQUIRE(t.layers.back().s == 1);
  CHECK(t.mu_bar == t.mu0);
  CHECK(t.fragile);
}

TEST_CASE("limit map: bounds, shutdown region, and resilience at low mu0") {
  const double rc = 0.02;
  std::vector<double> grid;
  for (double m = 0.05; m < 0.99; m += 0.05) {
    grid.push_back(m);
  }
  const auto rows = limit_map(grid, 0.2, 1.0, 2 * rc);
  REQUIRE(rows.size() == grid.size());
  const double mu0_threshold = shutdown_threshold(rc);
  for (const auto& [mu0, mu_bar] : rows) {
    CHECK(mu_bar >= 0.0);
    CHECK(mu_bar <= 1.0);
    if (mu0 > mu0_threshold) {
      CHECK(mu_bar == 1.0);
    }
    CHECK(mu_bar <= mu0 + 1e-12);  // never amplifies below the shutdown point
  }
}

TEST_CASE("limit map exhibits the fragility discontinuity") {
  // Regime located by parameter sweep: low costs, moderate correlation.
  const double rc = 0.02;
  std::vector<double> grid;
  for (double m = 0.8; m < 0.995; m += 0.01) {
    grid.push_back(m);
  }
  const auto rows = limit_map(grid, 0.3, 1.0, 2 * rc);
  double max_jump = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    max_jump = std::max(max_jump, std::fabs(rows[i].second - rows[i - 1].second));
  }
  CHECK(max_jump > 0.2);
}

TEST_CASE("hitting max_layers with s >= 2 is reported, not thrown") {
  // Slow-moment-decay regime: the chain keeps multisourcing well past a
  // short layer budget.
  const EconomyParams econ(1, 1.0, 0.00267, BetaParams(0.1, 0.9));
  const ChainTrajectory t = propagate_chain(econ, 3);
  CHECK(!t.converged);
  CHECK(t.layers.size() == 3);
  CHECK(t.layers.back().s >= 2);
  // A longer budget settles it.
  CHECK(propagate_chain(econ, 64).converged);
}

TEST_CASE("limit map rejects a non-increasing grid") {
  const std::vector<double> bad{0.2, 0.2, 0.3};
  CHECK_THROWS_AS(limit_map(bad, 0.2, 1.0, 0.04), std::invalid_argument);
}

TEST_CASE("critical mu matches the closed form in the uncorrelated limit") {
  for (const double rc : {0.01, 0.05}) {
    const double closed = critical_threshold_closed_form(rc).value();
    const double dynamic = critical_mu(1e-9, 1.0, 2 * rc, 1e-5);
    CHECK(std::fabs(closed - dynamic) < 1e-4);
  }
}

TEST_CASE("critical mu is non-increasing in the basal correlation") {
  const double rc = 0.02;
  double prev = 1.0;
  for (const double rho0 : {0.05, 0.1, 0.2, 0.4}) {
    const double mc = critical_mu(rho0, 1.0, 2 * rc, 1e-5);
    CHECK(mc <= prev + 1e-12);
    CHECK(mc <= shutdown_threshold(rc));
    prev = mc;
  }
}

TEST_CASE("critical mu reports a fully fragile range") {
  // rc = 0.08 with rho0 = 0.3 never multisources: every mu0 is weakly
  // fragile and there is no resilient-to-fragile onset to locate.
  CHECK_THROWS_AS(critical_mu(0.3, 1.0, 0.16, 1e-4), ScanError);
}
