#include "scfrag/rng.hpp"

#include <cmath>

namespace scfrag {

std::uint64_t SplitMix64::next_below(std::uint64_t bound) noexcept {
  // Rejection against the largest multiple of bound; unbiased.
  const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

double sample_standard_normal(SplitMix64& rng) noexcept {
  for (;;) {
    const double u = 2.0 * rng.next_double() - 1.0;
    const double v = 2.0 * rng.next_double() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

namespace {

// Marsaglia-Tsang for shape >= 1; returns the draw itself.
double gamma_shape_ge1(SplitMix64& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_double_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

}  // namespace

double sample_gamma_log(SplitMix64& rng, double shape) {
  if (shape >= 1.0) {
    return std::log(gamma_shape_ge1(rng, shape));
  }
  // Boost: G(a) = G(a + 1) * U^{1/a}, applied in logs.
  const double g = gamma_shape_ge1(rng, shape + 1.0);
  const double u = rng.next_double_open();
  return std::log(g) + std::log(u) / shape;
}

double sample_beta(SplitMix64& rng, double alpha, double beta) {
  const double la = sample_gamma_log(rng, alpha);
  const double lb = sample_gamma_log(rng, beta);
  // a / (a + b) = 1 / (1 + exp(lb - la))
  const double t = lb - la;
  if (t > 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

}  // namespace scfrag
