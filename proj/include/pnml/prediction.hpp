#pragma once

#include <Eigen/Dense>
#include <string>
#include <string_view>

#include "pnml/dataset.hpp"
#include "pnml/regression.hpp"

namespace pnml {

// Analytic pNML predictive summary for one test point. The density is
// Gaussian with mean y_hat (the ERM prediction) and standard deviation
// sigma / (1 - h); evaluate it through density_at. h is the quadratic form
// x^T (X X^T + lambda I)^{-1} x with X including the test point, clamped to
// [0, 1]. h == 1 marks the non-learnable case: K and the regret are +inf and
// the density degenerates to an improper uniform.
struct PnmlPrediction {
  double y_hat = 0.0;
  double h = 0.0;
  double k_factor = 1.0;  // normalizer K = 1 / (1 - h), may be +inf
  double regret = 0.0;    // log K in nats, may be +inf
  double sigma2 = 1.0;

  bool learnable() const { return h < 1.0; }
};

// Hypothesis chosen by the reference learner that sees the test label:
// the ridge solution over training plus the (x, y) pair.
struct GenieFit {
  Eigen::VectorXd theta_hat;
  double hypothetical_label = 0.0;
};

// Ridge fit on the augmented dataset {training, (x, y)}. With lambda = 0 the
// augmented Gram must be numerically full rank.
GenieFit genie_fit(const Dataset& data, const Eigen::VectorXd& x, double y,
                   const RidgeConfig& cfg);

// Full pNML evaluation. h is computed from the augmented Gram via its
// eigendecomposition (pseudo-inverse on numerically null directions), so the
// over-parameterized lambda = 0 regime is a flagged h = 1 outcome, never an
// error. At lambda = 0 with a rank-deficient training Gram the ERM mean is
// the minimum-norm least-squares solution (the lambda -> 0 limit).
PnmlPrediction pnml_predict(const Dataset& data, const Eigen::VectorXd& x,
                            const RidgeConfig& cfg);

// pNML density value at label y. Throws for non-learnable predictions.
double density_at(const PnmlPrediction& pred, double y);

// Regret / learnability measure Gamma = log(1 / (1 - h)). Total: +inf is a
// legal value; independent of sigma2.
double regret(const Dataset& data, const Eigen::VectorXd& x, double lambda);

// Unnormalized pNML numerator p_{theta_hat(x, y)}(y | x), evaluated directly
// through the genie refit residual.
double genie_density_at(const Dataset& data, const Eigen::VectorXd& x, double y,
                        const RidgeConfig& cfg);

// -log density_at(pred, y_true).
double log_loss(const PnmlPrediction& pred, double y_true);

// CSV row form "(y_hat, h, k_factor, regret)" with "inf" for +inf.
inline constexpr std::string_view kPredictionCsvHeader = "y_hat,h,k_factor,regret";
std::string to_csv_row(const PnmlPrediction& pred);

}  // namespace pnml
