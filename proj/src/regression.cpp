#include "pnml/regression.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "pnml/format.hpp"

namespace pnml {

namespace {

void check_dim(const Eigen::VectorXd& x, Eigen::Index m, const char* where) {
  if (x.size() != m) {
    throw std::invalid_argument(std::string(where) + ": vector has dimension " +
                                std::to_string(x.size()) + ", expected " + std::to_string(m));
  }
}

// X X^T + lambda I, built through a rank update so it is exactly symmetric.
Eigen::MatrixXd regularized_gram(const Dataset& data, double lambda) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(data.dim(), data.dim());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(data.features());
  gram = gram.selfadjointView<Eigen::Lower>();
  gram.diagonal().array() += lambda;
  return gram;
}

Eigen::LLT<Eigen::MatrixXd> factorize_gram(const Dataset& data, double lambda) {
  Eigen::MatrixXd gram = regularized_gram(data, lambda);
  if (lambda == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double eta_min = es.eigenvalues().minCoeff();
    const double eta_max = es.eigenvalues().maxCoeff();
    if (!(eta_min > gram_rank_threshold(eta_max, data.dim()))) {
      throw std::runtime_error("singular Gram matrix at lambda = 0: smallest eigenvalue " +
                               format_double(eta_min) + " (largest " + format_double(eta_max) +
                               "); increase lambda or add samples");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("Gram matrix factorization failed: matrix is not positive definite");
  }
  return llt;
}

}  // namespace

double gram_rank_threshold(double eta_max, Eigen::Index dim) {
  return eta_max * static_cast<double>(dim) * std::ldexp(1.0, -45);
}

void RidgeConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("RidgeConfig: lambda must be finite and >= 0, got " +
                                format_double(lambda));
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw std::invalid_argument("RidgeConfig: sigma2 must be finite and > 0, got " +
                                format_double(sigma2));
  }
}

FittedModel::FittedModel(Eigen::VectorXd theta, Eigen::MatrixXd p_matrix, double lambda,
                         Eigen::Index n_samples)
    : theta_(std::move(theta)), p_(std::move(p_matrix)), lambda_(lambda), n_samples_(n_samples) {
  if (p_.rows() != theta_.size() || p_.cols() != theta_.size()) {
    throw std::invalid_argument("FittedModel: P must be M x M with M = dim(theta)");
  }
  if (n_samples_ < 0) {
    throw std::invalid_argument("FittedModel: negative sample count");
  }
}

Eigen::MatrixXd build_vandermonde(const Eigen::VectorXd& points, int degree) {
  if (degree < 0) {
    throw std::invalid_argument("build_vandermonde: degree must be >= 0");
  }
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points(i))) {
      throw std::invalid_argument("build_vandermonde: point " + std::to_string(i) +
                                  " is not finite");
    }
  }
  Eigen::MatrixXd features(degree + 1, points.size());
  features.row(0).setOnes();
  for (int d = 1; d <= degree; ++d) {
    features.row(d) = features.row(d - 1).cwiseProduct(points.transpose());
  }
  return features;
}

FittedModel fit_ridge(const Dataset& data, const RidgeConfig& cfg) {
  cfg.validate();
  const auto llt = factorize_gram(data, cfg.lambda);
  const Eigen::VectorXd theta = llt.solve(data.features() * data.labels());
  Eigen::MatrixXd p = llt.solve(Eigen::MatrixXd::Identity(data.dim(), data.dim()));
  p = ((p + p.transpose()) / 2.0).eval();
  return FittedModel(theta, std::move(p), cfg.lambda, data.size());
}

double predict(const FittedModel& model, const Eigen::VectorXd& x) {
  check_dim(x, model.dim(), "predict");
  return x.dot(model.theta());
}

FittedModel rls_update(const FittedModel& model, const Eigen::VectorXd& x, double y) {
  check_dim(x, model.dim(), "rls_update");
  if (!x.allFinite() || !std::isfinite(y)) {
    throw std::invalid_argument("rls_update: sample must be finite");
  }

  const Eigen::VectorXd px = model.p_matrix() * x;
  const double denom = 1.0 + x.dot(px);
  // denom >= 1 whenever P is positive semidefinite; anything near zero means
  // round-off has corrupted P.
  if (!(denom > 1e-12)) {
    throw std::runtime_error("rls_update: P lost positive definiteness (1 + x^T P x = " +
                             format_double(denom) + "); refit in batch with fit_ridge");
  }
  Eigen::MatrixXd p_next = model.p_matrix() - (px * px.transpose()) / denom;
  p_next = ((p_next + p_next.transpose()) / 2.0).eval();
  const double diag_floor = -1e-10 * std::max(1.0, p_next.diagonal().cwiseAbs().maxCoeff());
  if (p_next.diagonal().minCoeff() < diag_floor) {
    throw std::runtime_error("rls_update: P lost positive definiteness (negative diagonal); "
                             "refit in batch with fit_ridge");
  }

  const double innovation = y - x.dot(model.theta());
  const Eigen::VectorXd theta_next = model.theta() + p_next * x * innovation;
  return FittedModel(theta_next, std::move(p_next), model.lambda(), model.n_samples() + 1);
}

double leverage(const Dataset& data, Eigen::Index i, double lambda) {
  if (i < 0 || i >= data.size()) {
    throw std::out_of_range("leverage: index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(data.size()) + ")");
  }
  const auto llt = factorize_gram(data, lambda);
  const Eigen::VectorXd xi = data.feature(i);
  return xi.dot(llt.solve(xi));
}

ConfidenceInterval confidence_interval(const FittedModel& model, const Eigen::VectorXd& x,
                                       double sigma2_hat, double coverage) {
  check_dim(x, model.dim(), "confidence_interval");
  if (!(sigma2_hat > 0.0) || !std::isfinite(sigma2_hat)) {
    throw std::invalid_argument("confidence_interval: sigma2_hat must be > 0");
  }
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw std::invalid_argument("confidence_interval: coverage must be in (0, 1), got " +
                                format_double(coverage));
  }
  const double quad = std::max(0.0, x.dot(model.p_matrix() * x));
  const double z = boost::math::quantile(boost::math::normal_distribution<double>(),
                                         0.5 * (1.0 + coverage));
  return ConfidenceInterval{predict(model, x), z * std::sqrt(sigma2_hat * quad), coverage};
}

}  // namespace pnml
