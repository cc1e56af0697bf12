#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "scfrag/beta.hpp"
#include "scfrag/rng.hpp"

using namespace scfrag;

TEST_CASE("shape conversion matches the defining equations") {
  const BetaShape sh = shape_from_mean_overdispersion(BetaParams(0.5, 1.0 / 3.0));
  CHECK(sh.alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sh.beta == doctest::Approx(1.0).epsilon(1e-12));

  const BetaShape sh2 = shape_from_mean_overdispersion(BetaParams(0.5, 0.2));
  CHECK(sh2.alpha == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sh2.beta == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("shape conversion round-trips mean and overdispersion") {
  SplitMix64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const double mu = 0.01 + 0.98 * rng.next_double();
    const double rho = 0.01 + 0.98 * rng.next_double();
    const BetaShape sh = shape_from_mean_overdispersion(BetaParams(mu, rho));
    CHECK(sh.alpha + sh.beta == doctest::Approx((1.0 - rho) / rho).epsilon(1e-12));
    CHECK(sh.alpha / (sh.alpha + sh.beta) == doctest::Approx(mu).epsilon(1e-12));
  }
}

TEST_CASE("parameter domains are enforced") {
  CHECK_THROWS_AS(BetaParams(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(BetaParams(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(BetaParams(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BetaParams(0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(BetaPowerParams(BetaParams(0.5, 0.5), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rising_factorial(0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(rising_factorial(-1.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(rising_factorial(2.0, -1.0), std::domain_error);
}

TEST_CASE("rising factorial basics") {
  CHECK(rising_factorial(3.0, 2.0) == doctest::Approx(12.0).epsilon(1e-13));
  CHECK(rising_factorial(2.5, 3.0) == doctest::Approx(39.375).epsilon(1e-13));
  CHECK(rising_factorial(0.3, 0.0) == 1.0);
  CHECK(rising_factorial(17.0, 0.0) == 1.0);
}

TEST_CASE("rising factorial agrees with the direct product for integer n") {
  SplitMix64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const double x = 0.05 + 20.0 * rng.next_double();
    const int n = 1 + static_cast<int>(rng.next_below(12));
    double prod = 1.0;
    for (int j = 0; j < n; ++j) {
      prod *= x + j;
    }
    CHECK(rising_factorial(x, n) == doctest::Approx(prod).epsilon(1e-12));
  }
}

TEST_CASE("betapower mean: first moment and uniform second moment") {
  CHECK(betapower_mean(BetaParams(0.37, 0.41), 1.0) ==
        doctest::Approx(0.37).epsilon(1e-13));
  // mu = 1/2, rho = 1/3 is the uniform law; its second moment is 1/3.
  CHECK(betapower_mean(BetaParams(0.5, 1.0 / 3.0), 2.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("betapower mean: rho -> 0 limit is mu^power") {
  CHECK(std::fabs(betapower_mean(BetaParams(0.5, 1e-9), 3.0) - 0.125) < 1e-6);
  CHECK(std::fabs(betapower_mean(BetaParams(0.3, 1e-9), 5.0) - std::pow(0.3, 5)) <
        1e-6);
}

TEST_CASE("betapower mean is strictly decreasing in the power") {
  for (const double mu : {0.2, 0.5, 0.8}) {
    for (const double rho : {0.05, 0.3, 0.7}) {
      const BetaParams base(mu, rho);
      double prev = 1.0;
      for (const double p : {0.5, 1.0, 2.0, 4.0, 9.0, 33.0}) {
        const double m = betapower_mean(base, p);
        CHECK(m < prev);
        prev = m;
      }
    }
  }
}

TEST_CASE("the quadrature oracle reproduces hand-derived moments") {
  // Validates the test oracle itself, independently of the library:
  // uniform law E[X^3] = 1/4; Beta(2,2) second moment 2*3/(4*5) = 0.3.
  CHECK(oracles::beta_moment_quadrature(0.5, 1.0 / 3.0, 3.0) ==
        doctest::Approx(0.25).epsilon(1e-11));
  CHECK(oracles::beta_moment_quadrature(0.5, 0.2, 2.0) ==
        doctest::Approx(0.3).epsilon(1e-11));
  // Beta(1,2): mu = 1/3, rho = 1/4; E[X^2] = 1*2/(3*4) = 1/6.
  CHECK(oracles::beta_moment_quadrature(1.0 / 3.0, 0.25, 2.0) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-11));
}

TEST_CASE("betapower mean matches adaptive quadrature") {
  for (const double mu : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (const double rho : {0.05, 0.2, 0.5, 0.8, 0.95}) {
      for (const double power : {1.0, 2.0, 7.0, 31.5}) {
        const double lib = betapower_mean(BetaParams(mu, rho), power);
        const double quad = oracles::beta_moment_quadrature(mu, rho, power);
        CHECK(std::fabs(lib - quad) < 1e-9);
      }
    }
  }
}

TEST_CASE("log-space evaluation survives power 1e6") {
  const double m = betapower_mean(BetaParams(0.4, 0.2), 1e6);
  CHECK(std::isfinite(m));
  CHECK(m >= 0.0);
  CHECK(m < 1.0);
  const double lr = log_rising_factorial(1.0e3, 1e6);
  CHECK(std::isfinite(lr));
}

TEST_CASE("eta: base cases and the worked example") {
  const BetaParams base(0.5, 0.5);
  CHECK(eta(1.0, 1.0, base) == 1.0);
  CHECK(eta(1.0, 7.0, BetaParams(0.3, 0.2)) == 1.0);
  // One-term product (mu0 r0 + 1) / (r0 + 1) with r0 = 1.
  CHECK(eta(2.0, 1.0, base) == doctest::Approx(0.75).epsilon(1e-12));
  // Cross-check E[X^2]/E[X] by quadrature.
  const double quad = oracles::beta_moment_quadrature(0.5, 0.5, 2.0) /
                      oracles::beta_moment_quadrature(0.5, 0.5, 1.0);
  CHECK(eta(2.0, 1.0, base) == doctest::Approx(quad).epsilon(1e-10));
  CHECK_THROWS_AS(eta(0.0, 1.0, base), std::domain_error);
}

TEST_CASE("eta: uncorrelated limit") {
  for (const int s : {2, 3, 5}) {
    for (const int S : {1, 2, 4}) {
      const double e = eta(s, S, BetaParams(0.6, 1e-9));
      CHECK(std::fabs(e - std::pow(0.6, S * (s - 1))) < 1e-6);
    }
  }
}

TEST_CASE("eta is strictly decreasing in s") {
  for (const double mu : {0.15, 0.5, 0.85}) {
    for (const double rho : {0.05, 0.4, 0.9}) {
      for (const double S : {1.0, 2.0, 8.0}) {
        const BetaParams base(mu, rho);
        double prev = eta(1.0, S, base);
        for (int s = 2; s <= 12; ++s) {
          const double cur = eta(s, S, base);
          CHECK(cur < prev);
          prev = cur;
        }
      }
    }
  }
}

TEST_CASE("upstream diversification helps at low correlation, hurts at high") {
  // At low rho0, a more diversified upstream pool (larger S) lets the
  // downstream firm reach a lower risk-reduction factor; past a level of
  // basal correlation the ordering flips and upstream diversification
  // makes the firm's own doubling less effective.
  const double mu = 0.5;
  CHECK(eta(2.0, 8.0, BetaParams(mu, 0.01)) < eta(2.0, 1.0, BetaParams(mu, 0.01)));
  CHECK(eta(2.0, 8.0, BetaParams(mu, 0.9)) > eta(2.0, 1.0, BetaParams(mu, 0.9)));
}

TEST_CASE("eta -> 1 as correlation -> 1") {
  const double grid[] = {0.9, 0.99, 0.999};
  double prev = 0.0;
  for (const double rho : grid) {
    const double e = eta(3.0, 2.0, BetaParams(0.4, rho));
    CHECK(e > prev);
    prev = e;
  }
  CHECK(prev > 0.99);
}

TEST_CASE("moment identity: betapower_mean(S*s) = eta(s, S) * betapower_mean(S)") {
  for (const double mu : {0.2, 0.6}) {
    for (const double rho : {0.1, 0.5, 0.9}) {
      const BetaParams base(mu, rho);
      for (const double S : {1.0, 3.0, 6.0}) {
        for (const int s : {2, 4}) {
          const double lhs = betapower_mean(base, S * s);
          const double rhs = eta(s, S, base) * betapower_mean(base, S);
          CHECK(std::fabs(lhs - rhs) / lhs < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("eta recursion agrees with direct evaluation") {
  const BetaParams base(0.5, 0.5);
  // Base step 1 -> 2 reproduces the worked example.
  CHECK(eta_recursion_step(1.0, 1.0, 1.0, base) == doctest::Approx(0.75).epsilon(1e-12));
  for (const double mu : {0.25, 0.7}) {
    for (const double rho : {0.15, 0.6}) {
      for (const double S : {1.0, 2.0, 5.0}) {
        const BetaParams b(mu, rho);
        double e = 1.0;
        for (int s = 1; s < 5; ++s) {
          e = eta_recursion_step(e, s, S, b);
        }
        const double direct = eta(5.0, S, b);
        CHECK(std::fabs(e - direct) / direct < 1e-12);
      }
    }
  }
}

TEST_CASE("betapower sampling: determinism and law of large numbers") {
  const BetaPowerParams bp(BetaParams(0.5, 1.0 / 3.0), 2.0);

  SplitMix64 a(42);
  SplitMix64 b(42);
  for (int i = 0; i < 50; ++i) {
    CHECK(betapower_sample(bp, a) == betapower_sample(bp, b));
  }

  const long n = 1'000'000;
  SplitMix64 rng(2024);
  double sum = 0.0;
  double sum1 = 0.0;
  const BetaPowerParams bp1(BetaParams(0.5, 1.0 / 3.0), 1.0);
  for (long i = 0; i < n; ++i) {
    const double x = betapower_sample(bp, rng);
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
    sum += x;
    sum1 += betapower_sample(bp1, rng);
  }
  const double mean = sum / n;
  const double se = std::sqrt(betapower_mean(bp) * (1 - betapower_mean(bp)) / n);
  CHECK(std::fabs(mean - betapower_mean(bp)) < 4 * se);
  const double mean1 = sum1 / n;
  const double se1 = 0.5 / std::sqrt(static_cast<double>(n));  // sd of a beta <= 1/2
  CHECK(std::fabs(mean1 - 0.5) < 4 * se1);
}

TEST_CASE("sampler matches the quadrature CDF") {
  // Empirical CDF at fixed probe points vs the quadrature-backed CDF;
  // exercises shapes below one on both sides.
  const BetaParams base(0.3, 0.8);
  const long n = 200'000;
  SplitMix64 rng(99);
  std::vector<double> draws(n);
  const BetaPowerParams bp(base, 1.0);
  for (long i = 0; i < n; ++i) {
    draws[i] = betapower_sample(bp, rng);
  }
  for (const double x : {0.05, 0.25, 0.5, 0.9}) {
    long below = 0;
    for (const double d : draws) {
      below += d <= x;
    }
    const double emp = static_cast<double>(below) / n;
    const double cdf = beta_cdf(base, x);
    const double se = std::sqrt(cdf * (1 - cdf) / n);
    CHECK(std::fabs(emp - cdf) < 4 * se + 1e-12);
  }
}

TEST_CASE("beta_cdf endpoints and the uniform case") {
  const BetaParams uniform(0.5, 1.0 / 3.0);
  CHECK(beta_cdf(uniform, 0.0) == 0.0);
  CHECK(beta_cdf(uniform, 1.0) == 1.0);
  for (const double x : {0.1, 0.42, 0.77}) {
    CHECK(beta_cdf(uniform, x) == doctest::Approx(x).epsilon(1e-10));
  }
  // Symmetric law: median at 1/2.
  CHECK(beta_cdf(BetaParams(0.5, 0.2), 0.5) == doctest::Approx(0.5).epsilon(1e-10));
  // Power transform: P(X^s <= y) = P(X <= y^(1/s)).
  const BetaPowerParams bp(BetaParams(0.4, 0.3), 3.0);
  CHECK(betapower_cdf(bp, 0.2) ==
        doctest::Approx(beta_cdf(bp.base, std::pow(0.2, 1.0 / 3.0))).epsilon(1e-12));
}
