#include "pnml/prediction.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pnml/format.hpp"

namespace pnml {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// h this close to 1 is the non-learnable case; round-off must not turn a
// perfectly-fittable query into a huge finite K.
constexpr double kLearnableEdge = 1.0 - 1e-12;

void check_dim(const Eigen::VectorXd& x, Eigen::Index m, const char* where) {
  if (x.size() != m) {
    throw std::invalid_argument(std::string(where) + ": vector has dimension " +
                                std::to_string(x.size()) + ", expected " + std::to_string(m));
  }
}

// x^T (X X^T + lambda I)^{-1} x with X = [X_N, x], through the spectrum of
// the augmented Gram so that rank-deficient lambda = 0 cases resolve to the
// pseudo-inverse value. In exact arithmetic x lies in the range of the
// augmented Gram, hence h is in [0, 1]; clamp what round-off leaves.
double augmented_quadratic_form(const Dataset& data, const Eigen::VectorXd& x, double lambda) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(data.dim(), data.dim());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(data.features());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(x);
  gram = gram.selfadjointView<Eigen::Lower>();
  gram.diagonal().array() += lambda;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("pnml: eigendecomposition of the augmented Gram failed");
  }
  const double eta_max = es.eigenvalues().maxCoeff();
  const double threshold = gram_rank_threshold(eta_max, data.dim());

  double h = 0.0;
  for (Eigen::Index i = 0; i < data.dim(); ++i) {
    const double eta = es.eigenvalues()(i);
    if (eta > threshold) {
      const double proj = es.eigenvectors().col(i).dot(x);
      h += proj * proj / eta;
    }
  }
  if (h < 0.0) h = 0.0;
  if (h > kLearnableEdge) h = 1.0;
  return h;
}

// ERM coefficients; minimum-norm solution when lambda = 0 leaves the
// training Gram rank deficient.
Eigen::VectorXd erm_theta(const Dataset& data, double lambda) {
  if (lambda > 0.0) {
    return fit_ridge(data, RidgeConfig{lambda, 1.0}).theta();
  }
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(data.dim(), data.dim());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(data.features());
  gram = gram.selfadjointView<Eigen::Lower>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double eta_max = es.eigenvalues().maxCoeff();
  const double threshold = gram_rank_threshold(eta_max, data.dim());
  if (es.eigenvalues().minCoeff() > threshold) {
    return fit_ridge(data, RidgeConfig{0.0, 1.0}).theta();
  }
  const Eigen::VectorXd rhs = data.features() * data.labels();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(data.dim());
  for (Eigen::Index i = 0; i < data.dim(); ++i) {
    const double eta = es.eigenvalues()(i);
    if (eta > threshold) {
      theta += es.eigenvectors().col(i) * (es.eigenvectors().col(i).dot(rhs) / eta);
    }
  }
  return theta;
}

double gaussian_density(double residual, double sigma2) {
  return std::exp(-residual * residual / (2.0 * sigma2)) /
         std::sqrt(2.0 * std::numbers::pi * sigma2);
}

}  // namespace

GenieFit genie_fit(const Dataset& data, const Eigen::VectorXd& x, double y,
                   const RidgeConfig& cfg) {
  check_dim(x, data.dim(), "genie_fit");
  if (!std::isfinite(y)) {
    throw std::invalid_argument("genie_fit: hypothetical label must be finite");
  }
  const FittedModel model = fit_ridge(data.with_sample(x, y), cfg);
  return GenieFit{model.theta(), y};
}

PnmlPrediction pnml_predict(const Dataset& data, const Eigen::VectorXd& x,
                            const RidgeConfig& cfg) {
  cfg.validate();
  check_dim(x, data.dim(), "pnml_predict");

  PnmlPrediction pred;
  pred.sigma2 = cfg.sigma2;
  pred.y_hat = x.dot(erm_theta(data, cfg.lambda));
  pred.h = augmented_quadratic_form(data, x, cfg.lambda);
  if (pred.h == 1.0) {
    pred.k_factor = kInf;
    pred.regret = kInf;
  } else {
    pred.k_factor = 1.0 / (1.0 - pred.h);
    pred.regret = std::log(pred.k_factor);
  }
  return pred;
}

double density_at(const PnmlPrediction& pred, double y) {
  if (!pred.learnable()) {
    throw std::runtime_error("degenerate pNML: uniform improper density");
  }
  const double shrink = 1.0 - pred.h;
  const double dev = shrink * (y - pred.y_hat);
  return shrink * std::exp(-dev * dev / (2.0 * pred.sigma2)) /
         std::sqrt(2.0 * std::numbers::pi * pred.sigma2);
}

double regret(const Dataset& data, const Eigen::VectorXd& x, double lambda) {
  check_dim(x, data.dim(), "regret");
  const double h = augmented_quadratic_form(data, x, lambda);
  if (h == 1.0) return kInf;
  return std::log(1.0 / (1.0 - h));
}

double genie_density_at(const Dataset& data, const Eigen::VectorXd& x, double y,
                        const RidgeConfig& cfg) {
  const GenieFit fit = genie_fit(data, x, y, cfg);
  return gaussian_density(y - x.dot(fit.theta_hat), cfg.sigma2);
}

double log_loss(const PnmlPrediction& pred, double y_true) {
  return -std::log(density_at(pred, y_true));
}

std::string to_csv_row(const PnmlPrediction& pred) {
  return format_double(pred.y_hat) + "," + format_double(pred.h) + "," +
         format_double(pred.k_factor) + "," + format_double(pred.regret);
}

}  // namespace pnml
