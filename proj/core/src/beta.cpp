#include "scfrag/beta.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace scfrag {

namespace {

void require_open_unit(double v, const char* name) {
  if (!(v > 0.0) || !(v < 1.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must lie strictly in (0, 1), got " +
                                std::to_string(v));
  }
}

bool is_small_integer(double n) {
  return n == std::floor(n) && std::fabs(n) <= 512.0;
}

// Stirling tail of log Gamma: lgamma(z) = (z - 1/2) log z - z + log(2 pi)/2 + corr(z).
double stirling_corr(double z) {
  const double zi = 1.0 / z;
  const double zi2 = zi * zi;
  return zi / 12.0 * (1.0 - zi2 / 30.0 * (1.0 - zi2 * 2.0 / 7.0));
}

}  // namespace

BetaParams::BetaParams(double mu_, double rho_) : mu(mu_), rho(rho_) {
  require_open_unit(mu, "mu");
  require_open_unit(rho, "rho");
}

BetaPowerParams::BetaPowerParams(BetaParams base_, double power_)
    : base(base_), power(power_) {
  if (!(power > 0.0) || !std::isfinite(power)) {
    throw std::invalid_argument("power must be a positive real, got " +
                                std::to_string(power));
  }
}

BetaShape shape_from_mean_overdispersion(const BetaParams& p) {
  const double r0 = p.r0();
  return BetaShape{p.mu * r0, (1.0 - p.mu) * r0};
}

namespace detail {

double log_rising_ext(double x, double n) {
  if (n == 0.0) {
    return 0.0;
  }
  if (!(x > 0.0) || !(x + n > 0.0)) {
    throw std::domain_error("rising factorial needs x > 0 and x + n > 0");
  }
  if (is_small_integer(n)) {
    // Direct product in logs: exact term by term, no cancellation even
    // when x dwarfs n (the lgamma difference loses digits there).
    if (n > 0.0) {
      double acc = 0.0;
      for (double i = 0.0; i < n; i += 1.0) {
        acc += std::log(x + i);
      }
      return acc;
    }
    return -log_rising_ext(x + n, -n);
  }
  if (x >= 1e6 && x + n >= 1e6) {
    // Both arguments deep in the Stirling regime; subtracting the raw
    // lgamma values would cancel ~10 digits here.
    return (x - 0.5) * std::log1p(n / x) + n * std::log(x + n) - n +
           stirling_corr(x + n) - stirling_corr(x);
  }
  return std::lgamma(x + n) - std::lgamma(x);
}

}  // namespace detail

double log_rising_factorial(double x, double n) {
  if (!(x > 0.0)) {
    throw std::domain_error("rising factorial needs x > 0");
  }
  if (!(n >= 0.0)) {
    throw std::domain_error("rising factorial needs n >= 0");
  }
  return detail::log_rising_ext(x, n);
}

double rising_factorial(double x, double n) {
  return std::exp(log_rising_factorial(x, n));
}

double betapower_mean(const BetaParams& base, double power) {
  if (!(power > 0.0)) {
    throw std::invalid_argument("power must be positive");
  }
  const double alpha = base.alpha();
  const double r0 = base.r0();  // alpha + beta
  return std::exp(detail::log_rising_ext(alpha, power) -
                  detail::log_rising_ext(r0, power));
}

double betapower_mean(const BetaPowerParams& bp) {
  return betapower_mean(bp.base, bp.power);
}

double betapower_sample(const BetaPowerParams& bp, SplitMix64& rng) {
  const BetaShape sh = shape_from_mean_overdispersion(bp.base);
  const double x = sample_beta(rng, sh.alpha, sh.beta);
  return std::pow(x, bp.power);
}

double eta(double s_next, double S, const BetaParams& base) {
  if (!(s_next > 0.0)) {
    throw std::domain_error(
        "eta needs s_next > 0; with no sourcing the downstream mean is 1");
  }
  if (!(S >= 1.0)) {
    throw std::domain_error("eta needs S >= 1");
  }
  if (s_next == 1.0) {
    return 1.0;  // zero-length rising factorial
  }
  const double n = S * (s_next - 1.0);
  const double alpha = base.alpha();
  const double r0 = base.r0();
  return std::exp(detail::log_rising_ext(alpha + S, n) -
                  detail::log_rising_ext(r0 + S, n));
}

double eta_recursion_step(double eta_s, double s, double S, const BetaParams& base) {
  const double alpha = base.alpha();
  const double r0 = base.r0();
  return eta_s * std::exp(detail::log_rising_ext(alpha + S * s, S) -
                          detail::log_rising_ext(r0 + S * s, S));
}

namespace {

// Tanh-sinh quadrature of f(x, b - x) over (a, b).  The double-exponential
// weight decay absorbs integrable endpoint singularities (the Beta density
// has them whenever a shape parameter is below one).  The second argument
// receives the distance to the right endpoint computed without
// cancellation.
template <typename F>
double tanh_sinh(const F& f, double a, double b) {
  const double half_pi = 1.5707963267948966;
  const double width = b - a;
  const double t_max = 6.1;  // beyond this the weights underflow

  // Abscissa map g(t) = 1/2 + tanh(half_pi * sinh t) / 2; its derivative
  // is the weight.  eval_at(t) returns the weighted symmetric pair +-t.
  auto eval_at = [&](double t) {
    if (t == 0.0) {
      return f(a + width * 0.5, width * 0.5) * (half_pi * 0.5);
    }
    const double u = std::exp(-2.0 * half_pi * std::sinh(t));  // in (0, 1)
    const double gp = 1.0 / (1.0 + u);  // g(t)
    const double gm = u / (1.0 + u);    // 1 - g(t) = g(-t)
    const double w = half_pi * std::cosh(t) * 2.0 * u / ((1.0 + u) * (1.0 + u));
    return (f(a + width * gp, width * gm) + f(a + width * gm, width * gp)) * w;
  };

  double h = 1.0;
  double acc = eval_at(0.0);
  for (double t = h; t <= t_max; t += h) {
    acc += eval_at(t);
  }
  double integral = acc * h;
  for (int level = 0; level < 12; ++level) {
    double sum = 0.0;
    for (double t = h * 0.5; t <= t_max; t += h) {
      sum += eval_at(t);
    }
    h *= 0.5;
    const double refined = integral * 0.5 + sum * h;
    const double scale = std::max(std::fabs(refined), 1e-300);
    const bool settled = std::fabs(refined - integral) < 1e-14 * scale;
    integral = refined;
    if (level >= 3 && settled) {
      break;
    }
  }
  return integral * width;
}

}  // namespace

double beta_cdf(const BetaParams& p, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  if (x >= 1.0) {
    return 1.0;
  }
  const BetaShape sh = shape_from_mean_overdispersion(p);
  const double lnorm = std::lgamma(sh.alpha) + std::lgamma(sh.beta) -
                       std::lgamma(sh.alpha + sh.beta);
  // Integrate over the shorter tail.  The quadrature hands back the
  // distance to the interval's right endpoint; on the upper tail that IS
  // 1 - u, on the lower tail (u <= 1/2) the direct difference is safe.
  const bool lower = x <= 0.5;
  const double lo = lower ? 0.0 : x;
  const double hi = lower ? x : 1.0;
  auto density = [&](double u, double to_right) {
    const double omu = lower ? 1.0 - u : to_right;
    return std::exp((sh.alpha - 1.0) * std::log(u) + (sh.beta - 1.0) * std::log(omu) -
                    lnorm);
  };
  const double tail = tanh_sinh(density, lo, hi);
  return lower ? tail : 1.0 - tail;
}

double betapower_cdf(const BetaPowerParams& bp, double y) {
  if (y <= 0.0) {
    return 0.0;
  }
  if (y >= 1.0) {
    return 1.0;
  }
  return beta_cdf(bp.base, std::pow(y, 1.0 / bp.power));
}

}  // namespace scfrag
