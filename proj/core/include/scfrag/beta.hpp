#pragma once

#include <cstdint>

#include "scfrag/rng.hpp"

namespace scfrag {

/// Beta law in mean/overdispersion form.
///
/// With shape parameters (alpha, beta): mu = alpha / (alpha + beta) and
/// rho = 1 / (1 + alpha + beta), so alpha = mu * r0 and beta = (1 - mu) * r0
/// with r0 = (1 - rho) / rho.  rho -> 0 concentrates the law at mu
/// (independent risks), rho -> 1 degenerates to a Bernoulli(mu) two-point
/// law (perfectly correlated risks).  Both endpoints are excluded here;
/// limit behaviour is covered by the documented asymptotics and never by
/// passing rho = 0 or rho = 1.
struct BetaParams {
  double mu;
  double rho;

  BetaParams(double mu_, double rho_);

  /// alpha + beta, the appendix's r0.
  double r0() const noexcept { return (1.0 - rho) / rho; }
  double alpha() const noexcept { return mu * r0(); }
  double beta() const noexcept { return (1.0 - mu) * r0(); }
};

struct BetaShape {
  double alpha;
  double beta;
};

/// Shape parameters of the Beta law; alpha + beta = (1 - rho) / rho and
/// alpha / (alpha + beta) = mu round-trip to within 1e-12.
BetaShape shape_from_mean_overdispersion(const BetaParams& p);

/// Law of X^power with X ~ Beta(base).  The model uses integer powers
/// (the cumulative diversification level); real powers are allowed so the
/// desired-sourcing interpolation can be evaluated on the same family.
struct BetaPowerParams {
  BetaParams base;
  double power;

  BetaPowerParams(BetaParams base_, double power_);
};

/// Rising factorial x^(n) = Gamma(x + n) / Gamma(x), computed in log space.
/// Exact product semantics for integer n.  Requires x > 0 and n >= 0.
double rising_factorial(double x, double n);

/// log of the rising factorial; same domain as rising_factorial.
double log_rising_factorial(double x, double n);

/// E[X^power] for X ~ Beta(base): the expected disruption probability at
/// diversification level `power`.  Strictly decreasing in power, equal to
/// base.mu at power = 1.
double betapower_mean(const BetaPowerParams& bp);
double betapower_mean(const BetaParams& base, double power);

/// One draw of X^power, X ~ Beta(base).  Reproducible given the stream.
double betapower_sample(const BetaPowerParams& bp, SplitMix64& rng);

/// Risk reduction factor: the multiplicative drop of the mean disruption
/// probability from one layer to the next, given s_next sources and
/// upstream diversification S.  Equals
/// betapower_mean(base, S * s_next) / betapower_mean(base, S); in
/// particular eta(1, S) = 1 exactly.  Requires s_next > 0 (the
/// no-sourcing branch, where the downstream mean is 1, is the caller's).
double eta(double s_next, double S, const BetaParams& base);

/// Advance eta(s, S) to eta(s + 1, S) by one recursion step.
double eta_recursion_step(double eta_s, double s, double S, const BetaParams& base);

/// P(X <= x) for X ~ Beta(p), evaluated by quadrature of the density.
/// Helper for simulator validation; no full density/CDF machinery beyond it.
double beta_cdf(const BetaParams& p, double x);

/// P(X^power <= y) = beta_cdf(base, y^(1/power)).
double betapower_cdf(const BetaPowerParams& bp, double y);

namespace detail {
// Log rising factorial without the public-domain restrictions: n may be
// negative as long as x > 0 and x + n > 0.  Used by the real-s extension
// of the sourcing problem.
double log_rising_ext(double x, double n);
}  // namespace detail

}  // namespace scfrag
