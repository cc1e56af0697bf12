#pragma once

#include <optional>

#include "scfrag/beta.hpp"

namespace scfrag {

/// Model constants: K downstream goods, per-period profit pi, quadratic
/// sourcing cost coefficient c, and the basal Beta law.
struct EconomyParams {
  int K;
  double pi;
  double c;
  BetaParams base;

  EconomyParams(int K_, double pi_, double c_, BetaParams base_);

  /// Real marginal cost rc = (c/2) / pi.  Derived, never stored; economies
  /// where sourcing is ever worthwhile have rc in (0, 1).
  double real_cost() const noexcept { return (c / 2.0) / pi; }
};

/// desired: the real root of the marginal profit in s.
/// optimal: ceil(desired) if desired > 0, else 0.
struct SourcingDecision {
  double desired;
  int optimal;
};

/// Marginal profit of the (s+1)-th supplier when upstream risks are
/// uncorrelated: mu^s (1 - mu) pi - c (s + 1/2).  Strictly decreasing in s.
double marginal_profit_uncorrelated(double s, double mu, double pi, double c);

/// Unique real root of marginal_profit_uncorrelated in s, bracketed on
/// (-1/2, inf) and bisected to 1e-10.  May be <= 0.
double desired_sourcing_uncorrelated(double mu, double pi, double c);

SourcingDecision optimal_sourcing_uncorrelated(double mu, double pi, double c);

/// mu0_threshold = 1 - rc: above it the firm does not source at all.
double shutdown_threshold(double rc);

/// Closed-form critical basal mean mu_c = 1/2 + sqrt(1/4 - 3 rc) in the
/// uncorrelated limit; empty when rc > 1/12 (no real root).
std::optional<double> critical_threshold_closed_form(double rc);

/// Marginal profit of the (s+1)-th supplier in the correlated case:
/// (eta(s, S) - eta(s+1, S)) mu_up pi - c (s + 1/2).
///
/// Integer s = 0 uses the no-sourcing convention (expected disruption 1
/// with no suppliers), so marginal_profit_correlated(0, ...) equals
/// (1 - mu_up) pi - c/2.  Real s > 0 uses the Gamma extension of eta; the
/// two agree whenever mu_up is the on-chain value betapower_mean(base, S).
double marginal_profit_correlated(double s, double S, double mu_up,
                                  const BetaParams& base, double pi, double c);

/// Real root of the Gamma-extended marginal profit.  When the first
/// supplier is already unprofitable the root is searched on (-1/2, 0] and
/// -1/2 is returned if no valid bracket exists there; only the sign of a
/// non-positive desired value is meaningful.
double desired_sourcing_correlated(double S, double mu_up, const BetaParams& base,
                                   double pi, double c);

SourcingDecision optimal_sourcing_correlated(double S, double mu_up,
                                             const BetaParams& base, double pi,
                                             double c);

/// One-layer problem with suppliers distributed Beta(supplier): expected
/// disruption with s sources is betapower_mean(supplier, s).
SourcingDecision single_layer_sourcing(const BetaParams& supplier, double pi, double c);

/// The overdispersion maximising the desired (real) sourcing of
/// single_layer_sourcing at the given mean, located by a coarse grid plus
/// golden-section refinement.  Empty when the desired sourcing is monotone
/// on the grid (no interior peak).
std::optional<double> peak_correlation(double mu, double pi, double c);

}  // namespace scfrag
