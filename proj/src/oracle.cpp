#include "pnml/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "pnml/format.hpp"
#include "pnml/prediction.hpp"

namespace pnml::oracle {

namespace {

// Divergence guard: the integrand's width scales as 1 / (1 - h).
constexpr double kMaxOracleH = 1.0 - 1e-6;

PnmlPrediction checked_prediction(const Dataset& data, const Eigen::VectorXd& x,
                                  const RidgeConfig& cfg) {
  const PnmlPrediction pred = pnml_predict(data, x, cfg);
  if (!(pred.h < kMaxOracleH)) {
    throw std::runtime_error("oracle diverges: non-learnable query (h = " +
                             format_double(pred.h) + ")");
  }
  return pred;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(half_width_sigmas >= 8.0)) {
    throw std::invalid_argument("QuadratureSpec: half_width_sigmas must be >= 8, got " +
                                format_double(half_width_sigmas));
  }
  if (points_per_sigma < 16) {
    throw std::invalid_argument("QuadratureSpec: points_per_sigma must be >= 16, got " +
                                std::to_string(points_per_sigma));
  }
}

double genie_refit_density(const Dataset& data, const Eigen::VectorXd& x, double y,
                           const RidgeConfig& cfg) {
  cfg.validate();
  if (x.size() != data.dim()) {
    throw std::invalid_argument("genie_refit_density: dimension mismatch");
  }
  const Eigen::Index m = data.dim();
  const Eigen::Index n = data.size();
  const bool regularized = cfg.lambda > 0.0;

  // Stacked Tikhonov system: [X_N^T; x^T; sqrt(lambda) I] theta ~ [Y; y; 0].
  // At lambda = 0 a rank-deficient stack is fine: the residual at the test
  // row is the same for every least-squares solution.
  const Eigen::Index rows = n + 1 + (regularized ? m : 0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  a.topRows(n) = data.features().transpose();
  b.head(n) = data.labels();
  a.row(n) = x.transpose();
  b(n) = y;
  if (regularized) {
    a.bottomRows(m) = std::sqrt(cfg.lambda) * Eigen::MatrixXd::Identity(m, m);
  }

  const Eigen::VectorXd theta = a.colPivHouseholderQr().solve(b);
  const double residual = y - x.dot(theta);
  return std::exp(-residual * residual / (2.0 * cfg.sigma2)) /
         std::sqrt(2.0 * std::numbers::pi * cfg.sigma2);
}

double numeric_k(const Dataset& data, const Eigen::VectorXd& x, const RidgeConfig& cfg,
                 const QuadratureSpec& quad) {
  quad.validate();
  const PnmlPrediction pred = checked_prediction(data, x, cfg);

  const double sigma_eff = std::sqrt(cfg.sigma2) / (1.0 - pred.h);
  const double half_width = quad.half_width_sigmas * sigma_eff;
  const auto intervals =
      2 * static_cast<Eigen::Index>(std::llround(quad.half_width_sigmas * quad.points_per_sigma));
  const double step = 2.0 * half_width / static_cast<double>(intervals);
  const double lo = pred.y_hat - half_width;

  // Evaluate first, then reduce with the Simpson weights in fixed index
  // order so the result does not depend on evaluation scheduling.
  std::vector<double> values(intervals + 1);
  for (Eigen::Index j = 0; j <= intervals; ++j) {
    values[j] = genie_refit_density(data, x, lo + step * static_cast<double>(j), cfg);
  }
  double sum = values.front() + values.back();
  for (Eigen::Index j = 1; j < intervals; ++j) {
    sum += values[j] * (j % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * step / 3.0;
}

double numeric_density_check(const Dataset& data, const Eigen::VectorXd& x,
                             const RidgeConfig& cfg, const Eigen::VectorXd& ys) {
  const PnmlPrediction pred = checked_prediction(data, x, cfg);
  const double shrink = 1.0 - pred.h;
  const double norm = std::sqrt(2.0 * std::numbers::pi * cfg.sigma2);

  double worst = 0.0;
  for (Eigen::Index j = 0; j < ys.size(); ++j) {
    const double refit = genie_refit_density(data, x, ys(j), cfg);
    const double dev = shrink * (ys(j) - pred.y_hat);
    const double closed = std::exp(-dev * dev / (2.0 * cfg.sigma2)) / norm;
    const double scale = std::max(std::abs(refit), std::abs(closed));
    if (scale > 0.0) {
      worst = std::max(worst, std::abs(refit - closed) / scale);
    }
  }
  return worst;
}

}  // namespace pnml::oracle
