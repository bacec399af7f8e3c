#pragma once

#include <Eigen/Dense>

#include "pnml/dataset.hpp"
#include "pnml/regression.hpp"

namespace pnml::oracle {

// Composite-Simpson grid for the label integral: the grid is centered on the
// ERM prediction and extends half_width_sigmas pNML standard deviations
// sigma / (1 - h) to each side, with points_per_sigma nodes per deviation.
// The node count is forced odd as Simpson requires.
struct QuadratureSpec {
  double half_width_sigmas = 12.0;  // >= 8
  int points_per_sigma = 64;        // >= 16
  void validate() const;
};

// Genie density evaluated the hard way: the full (N+1)-sample ridge system
// is re-solved for this one hypothetical label through a pivoted-QR
// least-squares route, with no normal-equations or rank-one shortcut. This
// is the primitive every closed form here is checked against.
double genie_refit_density(const Dataset& data, const Eigen::VectorXd& x, double y,
                           const RidgeConfig& cfg);

// Brute-force normalizer: integrates genie_refit_density over hypothetical
// labels. Approximates K = 1 / (1 - h). Refuses queries with h too close to
// 1 (the integral diverges there).
double numeric_k(const Dataset& data, const Eigen::VectorXd& x, const RidgeConfig& cfg,
                 const QuadratureSpec& quad = QuadratureSpec{});

// Pointwise two-path check over a label grid: genie-refit density versus the
// closed-form density. Returns the maximum relative deviation.
double numeric_density_check(const Dataset& data, const Eigen::VectorXd& x,
                             const RidgeConfig& cfg, const Eigen::VectorXd& ys);

}  // namespace pnml::oracle
