#include "scfrag/firm.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace scfrag {

namespace {

constexpr double kRootTol = 1e-10;   // absolute tolerance in s for all roots
constexpr double kTieSnap = 1e-9;    // desired values this close to an integer
                                     // are treated as exact ties (smaller s wins)

// Bisect a strictly decreasing function with f(lo) > 0 > f(hi).
double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi) {
  while (hi - lo > kRootTol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Shared ceiling rule: optimal = ceil(desired) if desired > 0, else 0,
// with values within kTieSnap of an integer snapped to it first.
int apply_ceiling_rule(double desired) {
  const double rounded = std::round(desired);
  const double snapped = std::fabs(desired - rounded) <= kTieSnap ? rounded : desired;
  if (snapped <= 0.0) {
    return 0;
  }
  return static_cast<int>(std::ceil(snapped));
}

// Root of a strictly decreasing marginal profit. f(0) decides the branch:
// positive roots are bracketed by doubling s_hi, non-positive desired
// values are searched on (lo_bound, 0] and fall back to -1/2.  Only the
// sign of a non-positive desired value carries meaning, but it must be
// deterministic.
double desired_root(const std::function<double(double)>& f, double lo_bound) {
  const double at_zero = f(0.0);
  if (at_zero > 0.0) {
    constexpr double kHiCap = 1048576.0;  // 2^20
    double hi = 8.0;
    while (f(hi) > 0.0) {
      if (hi >= kHiCap) {
        return kHiCap;
      }
      hi *= 2.0;
    }
    return bisect_decreasing(f, 0.0, hi);
  }
  if (at_zero == 0.0) {
    return 0.0;
  }
  const double lo = std::max(-0.5, lo_bound);
  if (lo >= 0.0) {
    return -0.5;
  }
  bool lo_positive = false;
  try {
    lo_positive = f(lo + 1e-9) > 0.0;
  } catch (const std::domain_error&) {
    lo_positive = false;
  }
  if (!lo_positive) {
    return -0.5;
  }
  return bisect_decreasing(f, lo + 1e-9, 0.0);
}

}  // namespace

EconomyParams::EconomyParams(int K_, double pi_, double c_, BetaParams base_)
    : K(K_), pi(pi_), c(c_), base(base_) {
  if (K < 1) {
    throw std::invalid_argument("K must be a positive integer");
  }
  if (!(pi > 0.0) || !std::isfinite(pi)) {
    throw std::invalid_argument("pi must be positive");
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("c must be positive");
  }
}

double marginal_profit_uncorrelated(double s, double mu, double pi, double c) {
  if (!(mu > 0.0) || !(mu < 1.0)) {
    throw std::invalid_argument("mu must lie in (0, 1)");
  }
  return std::pow(mu, s) * (1.0 - mu) * pi - c * (s + 0.5);
}

double desired_sourcing_uncorrelated(double mu, double pi, double c) {
  // Positive at s = -1/2 always (the cost term vanishes), so a root exists
  // on (-1/2, inf) for every mu in (0, 1).
  return desired_root(
      [&](double s) { return marginal_profit_uncorrelated(s, mu, pi, c); }, -0.5);
}

SourcingDecision optimal_sourcing_uncorrelated(double mu, double pi, double c) {
  const double desired = desired_sourcing_uncorrelated(mu, pi, c);
  return SourcingDecision{desired, apply_ceiling_rule(desired)};
}

double shutdown_threshold(double rc) {
  if (!(rc > 0.0) || !(rc < 1.0)) {
    throw std::domain_error("rc must lie in (0, 1)");
  }
  return 1.0 - rc;
}

std::optional<double> critical_threshold_closed_form(double rc) {
  const double disc = 0.25 - 3.0 * rc;
  if (disc < 0.0) {
    return std::nullopt;
  }
  return 0.5 + std::sqrt(disc);
}

namespace {

// eta through the Gamma extension, without the s > 0 restriction of the
// public eta: needed on (-1/2, 1) by the root finder.
double eta_ext(double s, double S, const BetaParams& base) {
  if (s == 1.0) {
    return 1.0;
  }
  const double n = S * (s - 1.0);
  return std::exp(detail::log_rising_ext(base.alpha() + S, n) -
                  detail::log_rising_ext(base.r0() + S, n));
}

// Gamma-extended marginal profit, valid for real s > 0 (and slightly
// below, while the rising-factorial arguments stay positive).
double marginal_profit_smooth(double s, double S, double mu_up, const BetaParams& base,
                              double pi, double c) {
  return (eta_ext(s, S, base) - eta_ext(s + 1.0, S, base)) * mu_up * pi -
         c * (s + 0.5);
}

}  // namespace

double marginal_profit_correlated(double s, double S, double mu_up,
                                  const BetaParams& base, double pi, double c) {
  if (!(s >= 0.0)) {
    throw std::invalid_argument("s must be >= 0");
  }
  if (!(S >= 1.0)) {
    throw std::invalid_argument("S must be >= 1");
  }
  if (!(mu_up > 0.0) || !(mu_up <= 1.0)) {
    throw std::invalid_argument("mu_up must lie in (0, 1]");
  }
  if (s == 0.0) {
    // No-sourcing branch: with zero suppliers the firm is disrupted for
    // sure, so the first supplier is worth (1 - mu_up) pi.
    return (1.0 - eta_ext(1.0, S, base) * mu_up) * pi - 0.5 * c;
  }
  return marginal_profit_smooth(s, S, mu_up, base, pi, c);
}

double desired_sourcing_correlated(double S, double mu_up, const BetaParams& base,
                                   double pi, double c) {
  if (!(S >= 1.0)) {
    throw std::invalid_argument("S must be >= 1");
  }
  if (!(mu_up > 0.0) || !(mu_up <= 1.0)) {
    throw std::invalid_argument("mu_up must lie in (0, 1]");
  }
  // The rising-factorial arguments stay positive for s > -alpha / S.
  const double lo_bound = -base.alpha() / S + 1e-12;
  return desired_root(
      [&](double s) { return marginal_profit_smooth(s, S, mu_up, base, pi, c); },
      lo_bound);
}

SourcingDecision optimal_sourcing_correlated(double S, double mu_up,
                                             const BetaParams& base, double pi,
                                             double c) {
  const double desired = desired_sourcing_correlated(S, mu_up, base, pi, c);
  int optimal = apply_ceiling_rule(desired);
  if (optimal >= 1) {
    // The integer s = 0 branch uses the no-sourcing convention, which can
    // disagree with the smooth extension when mu_up is far off the chain
    // value betapower_mean(base, S).  Never source when the first supplier
    // loses money under the convention.
    if (marginal_profit_correlated(0.0, S, mu_up, base, pi, c) < 0.0) {
      optimal = 0;
    }
  }
  return SourcingDecision{desired, optimal};
}

SourcingDecision single_layer_sourcing(const BetaParams& supplier, double pi, double c) {
  // One layer above suppliers distributed Beta(supplier): S = 1 and the
  // upstream mean is the supplier mean itself.
  return optimal_sourcing_correlated(1.0, supplier.mu, supplier, pi, c);
}

std::optional<double> peak_correlation(double mu, double pi, double c) {
  auto desired_at = [&](double rho) {
    return desired_sourcing_correlated(1.0, mu, BetaParams(mu, rho), pi, c);
  };

  constexpr int kGrid = 49;
  constexpr double kLo = 0.01;
  constexpr double kHi = 0.99;
  double best = -std::numeric_limits<double>::infinity();
  int best_i = -1;
  for (int i = 0; i < kGrid; ++i) {
    const double rho = kLo + (kHi - kLo) * i / (kGrid - 1);
    const double d = desired_at(rho);
    if (d > best) {
      best = d;
      best_i = i;
    }
  }
  if (best_i == 0 || best_i == kGrid - 1) {
    return std::nullopt;  // monotone on the grid: no interior peak
  }

  const double step = (kHi - kLo) / (kGrid - 1);
  double a = kLo + step * (best_i - 1);
  double b = kLo + step * (best_i + 1);
  // Golden-section on the bracketing cell; desired is concave in rho.
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = desired_at(x1);
  double f2 = desired_at(x2);
  while (b - a > 1e-6) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = desired_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = desired_at(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace scfrag
