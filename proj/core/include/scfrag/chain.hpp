#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scfrag/firm.hpp"

namespace scfrag {

/// One decision layer of the chain: sourcing choice s, cumulative
/// diversification S = prod of choices so far, mean disruption mu.
struct LayerState {
  int k;
  int s;
  std::uint64_t S;
  double mu;
};

/// Path of the layer-indexed dynamical system.  `layers` holds the
/// decision layers k = 1, 2, ...; the basal mean enters as mu0.
/// fragile means mu_bar >= mu0 (weak inequality, equality counts).
struct ChainTrajectory {
  double mu0;
  std::vector<LayerState> layers;
  double mu_bar;
  bool fragile;
  bool converged;
};

/// Iterate the representative-firm decision layer by layer: at layer k+1
/// take optimal_sourcing_correlated(S_k, mu_k, base, pi, c), update
/// (S, mu), stop at a fixed point (s in {0, 1}) or after max_layers.
/// Reaching max_layers with s >= 2 is reported as converged = false, not
/// an error.
ChainTrajectory propagate_chain(const EconomyParams& econ, int max_layers = 64);

/// mu_bar as a function of mu0 over a strictly increasing grid.
std::vector<std::pair<double, double>> limit_map(std::span<const double> mu0_grid,
                                                 double rho0, double pi, double c,
                                                 int max_layers = 64);

/// Thrown when critical_mu cannot locate a unique transition; the message
/// lists every bracketing cell found.
class ScanError : public std::runtime_error {
 public:
  ScanError(std::string what, std::vector<std::pair<double, double>> brackets)
      : std::runtime_error(std::move(what)), brackets_(std::move(brackets)) {}
  const std::vector<std::pair<double, double>>& brackets() const noexcept {
    return brackets_;
  }

 private:
  std::vector<std::pair<double, double>> brackets_;
};

/// Smallest mu0 at which the chain switches from resilient to fragile,
/// located by a coarse scan (step 1e-2) and bisection of the bracketing
/// cell to tol.
///
/// The scan keys on the resilient -> fragile transition.  Very low mu0
/// make the chain single-source immediately, which gives mu_bar = mu0 and
/// counts as (weakly) fragile; that plateau ends in a fragile -> resilient
/// step and is not a candidate.  No transition, or more than one, raises
/// ScanError with all brackets listed.
double critical_mu(double rho0, double pi, double c, double tol);

}  // namespace scfrag
