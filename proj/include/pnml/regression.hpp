#pragma once

#include <Eigen/Dense>

#include "pnml/dataset.hpp"

namespace pnml {

// Hyperparameters shared by ridge fitting and the pNML evaluation.
struct RidgeConfig {
  double lambda = 0.0;  // L2 penalty, >= 0
  double sigma2 = 1.0;  // Gaussian noise variance, > 0
  void validate() const;
};

// Ridge solution theta = (X X^T + lambda I)^{-1} X Y together with the
// inverse-Gram operator P = (X X^T + lambda I)^{-1} it was solved with.
// P is kept explicit because the pNML formulas consume quadratic forms
// x^T P x and the recursive update rewrites P in place of a refit.
// Immutable; safe to read from concurrent threads.
class FittedModel {
 public:
  FittedModel(Eigen::VectorXd theta, Eigen::MatrixXd p_matrix, double lambda,
              Eigen::Index n_samples);

  const Eigen::VectorXd& theta() const { return theta_; }
  const Eigen::MatrixXd& p_matrix() const { return p_; }
  double lambda() const { return lambda_; }
  Eigen::Index n_samples() const { return n_samples_; }
  Eigen::Index dim() const { return theta_.size(); }

 private:
  Eigen::VectorXd theta_;
  Eigen::MatrixXd p_;
  double lambda_;
  Eigen::Index n_samples_;
};

struct ConfidenceInterval {
  double center = 0.0;     // predicted y
  double halfwidth = 0.0;  // >= 0
  double coverage = 0.0;   // nominal level in (0, 1)
};

// Monomial feature columns [1, t, t^2, ..., t^degree] for each input point;
// result is (degree+1) x N. Rejects non-finite points.
Eigen::MatrixXd build_vandermonde(const Eigen::VectorXd& points, int degree);

// Batch ridge fit. With lambda = 0 the Gram matrix must be numerically
// invertible: eta_min > eta_max * M * 2^-45, otherwise a "singular Gram"
// error naming the smallest eigenvalue is thrown. N = 0 with lambda > 0 is
// legal and yields theta = 0, P = I/lambda. The solve uses a Cholesky
// factorization of the (SPD) regularized Gram.
FittedModel fit_ridge(const Dataset& data, const RidgeConfig& cfg);

// ERM prediction x^T theta.
double predict(const FittedModel& model, const Eigen::VectorXd& x);

// Rank-one recursive least-squares step: absorbs one (x, y) pair so that the
// result matches fit_ridge on the augmented dataset. P is updated by the
// Sherman-Morrison identity. Throws if accumulated round-off has destroyed
// positive definiteness; refit in batch in that case.
FittedModel rls_update(const FittedModel& model, const Eigen::VectorXd& x, double y);

// Leverage h_ii = x_i^T (X X^T + lambda I)^{-1} x_i of training sample i.
double leverage(const Dataset& data, Eigen::Index i, double lambda);

// Classical two-sided interval: halfwidth = z * sqrt(sigma2_hat * x^T P x)
// with z the standard-normal quantile at (1 + coverage) / 2.
ConfidenceInterval confidence_interval(const FittedModel& model, const Eigen::VectorXd& x,
                                       double sigma2_hat, double coverage);

// Shared rank gate for the lambda = 0 paths: an eigenvalue at or below this
// is treated as null.
double gram_rank_threshold(double eta_max, Eigen::Index dim);

}  // namespace pnml
