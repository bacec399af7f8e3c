#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pnml/format.hpp"
#include "pnml/prediction.hpp"
#include "testutil.hpp"

using pnml::Dataset;
using pnml::PnmlPrediction;
using pnml::RidgeConfig;
using testutil::rel_err;

namespace {

constexpr double kLog2 = 0.6931471805599453;

Dataset one_scalar_sample(double x, double y) {
  Eigen::MatrixXd features(1, 1);
  features << x;
  Eigen::VectorXd labels(1);
  labels << y;
  return Dataset(features, labels);
}

// M = 2, single training sample e1; the e2 direction is unseen.
Dataset basis_sample() {
  Eigen::MatrixXd features(2, 1);
  features << 1.0, 0.0;
  return Dataset(features, Eigen::VectorXd::Ones(1));
}

}  // namespace

TEST_CASE("genie_fit matches the augmented ridge solution") {
  // No training data: single-sample ridge.
  Eigen::VectorXd x(2);
  x << 0.6, -0.2;
  const RidgeConfig cfg{0.5, 1.0};
  const auto fit = genie_fit(Dataset::empty(2), x, 1.4, cfg);
  const Eigen::MatrixXd gram = x * x.transpose() + 0.5 * Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd expected = gram.ldlt().solve(x * 1.4);
  CHECK((fit.theta_hat - expected).norm() <= 1e-12);
  CHECK(fit.hypothetical_label == 1.4);

  // LS mean of {0, 2}.
  const auto mean_fit = genie_fit(one_scalar_sample(1.0, 0.0), Eigen::VectorXd::Ones(1), 2.0,
                                  RidgeConfig{0.0, 1.0});
  CHECK(mean_fit.theta_hat(0) == doctest::Approx(1.0).epsilon(1e-12));

  // A genie label equal to the ERM prediction adds nothing.
  std::mt19937_64 rng(3);
  const auto inst = testutil::random_instance(rng, 0.1);
  const auto model = fit_ridge(inst.data, RidgeConfig{0.1, 1.0});
  const auto unchanged = genie_fit(inst.data, inst.x, predict(model, inst.x), RidgeConfig{0.1, 1.0});
  CHECK((unchanged.theta_hat - model.theta()).norm() <= 1e-10 * (1.0 + model.theta().norm()));

  // Singular augmented Gram at lambda = 0.
  CHECK_THROWS_WITH_AS(genie_fit(Dataset::empty(2), x, 1.0, RidgeConfig{0.0, 1.0}),
                       doctest::Contains("singular Gram"), std::runtime_error);
}

TEST_CASE("pnml_predict on the canonical examples") {
  const RidgeConfig cfg{0.0, 1.0};

  // Zero feature vector: nothing to learn, regret 0.
  const auto at_zero = pnml_predict(one_scalar_sample(1.0, 0.7), Eigen::VectorXd::Zero(1), cfg);
  CHECK(at_zero.h == 0.0);
  CHECK(at_zero.k_factor == 1.0);
  CHECK(at_zero.regret == 0.0);
  CHECK(at_zero.y_hat == 0.0);
  CHECK(at_zero.learnable());
  CHECK(density_at(at_zero, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));

  // Repeated unit feature: h = 1/2, K = 2.
  const auto halved = pnml_predict(one_scalar_sample(1.0, 0.7), Eigen::VectorXd::Ones(1), cfg);
  CHECK(halved.h == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(halved.k_factor == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(halved.regret == doctest::Approx(kLog2).epsilon(1e-12));

  // Query orthogonal to the training span: non-learnable.
  const auto unseen = pnml_predict(basis_sample(), Eigen::Vector2d(0.0, 1.0), cfg);
  CHECK(unseen.h == 1.0);
  CHECK(std::isinf(unseen.k_factor));
  CHECK(std::isinf(unseen.regret));
  CHECK_FALSE(unseen.learnable());
}

TEST_CASE("density_at values and degenerate case") {
  const auto halved = pnml_predict(one_scalar_sample(1.0, 0.7), Eigen::VectorXd::Ones(1),
                                   RidgeConfig{0.0, 1.0});
  // Mode scales by (1 - h).
  CHECK(density_at(halved, halved.y_hat) ==
        doctest::Approx(0.5 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));

  const auto unseen = pnml_predict(basis_sample(), Eigen::Vector2d(0.0, 1.0),
                                   RidgeConfig{0.0, 1.0});
  CHECK_THROWS_WITH_AS(density_at(unseen, 0.0), doctest::Contains("degenerate pNML"),
                       std::runtime_error);
  CHECK_THROWS_AS(log_loss(unseen, 0.0), std::runtime_error);
}

TEST_CASE("pnml density normalizes and has the advertised moments") {
  std::mt19937_64 rng(13);
  int checked = 0;
  while (checked < 20) {
    const double lambda = checked % 2 == 0 ? 0.0 : 0.1;
    const auto inst = testutil::random_instance(rng, lambda);
    const RidgeConfig cfg{lambda, 1.7};
    const auto pred = pnml_predict(inst.data, inst.x, cfg);
    if (!(pred.h < 0.95)) continue;
    ++checked;

    const double width = std::sqrt(pred.sigma2) / (1.0 - pred.h);
    auto f = [&](double y) { return density_at(pred, y); };
    const double mass =
        testutil::simpson(f, pred.y_hat - 12.0 * width, pred.y_hat + 12.0 * width, 4096);
    CHECK(std::abs(mass - 1.0) <= 1e-6);

    auto first = [&](double y) { return y * density_at(pred, y); };
    const double mean =
        testutil::simpson(first, pred.y_hat - 12.0 * width, pred.y_hat + 12.0 * width, 4096);
    CHECK(std::abs(mean - pred.y_hat) <= 1e-6 * (1.0 + std::abs(pred.y_hat)));

    auto second = [&](double y) {
      return (y - pred.y_hat) * (y - pred.y_hat) * density_at(pred, y);
    };
    const double variance =
        testutil::simpson(second, pred.y_hat - 12.0 * width, pred.y_hat + 12.0 * width, 4096);
    CHECK(rel_err(variance, width * width) <= 1e-6);
  }
}

TEST_CASE("regret examples and laws") {
  const Dataset unit = one_scalar_sample(1.0, 0.42);
  CHECK(pnml::regret(unit, Eigen::VectorXd::Zero(1), 0.0) == 0.0);
  CHECK(pnml::regret(unit, Eigen::VectorXd::Ones(1), 0.0) ==
        doctest::Approx(kLog2).epsilon(1e-12));
  // Augmented Gram 1 + 1 + lambda = 3 at lambda = 1: h = 1/3.
  CHECK(pnml::regret(unit, Eigen::VectorXd::Ones(1), 1.0) ==
        doctest::Approx(std::log(1.5)).epsilon(1e-12));

  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = testutil::random_instance(rng, 0.0);

    // Monotone in lambda, strictly for x != 0.
    double previous = pnml::regret(inst.data, inst.x, 0.0);
    CHECK(previous >= 0.0);
    for (double lambda : {1e-4, 0.1, 1.0, 10.0}) {
      const double current = pnml::regret(inst.data, inst.x, lambda);
      CHECK(current < previous);
      previous = current;
    }

    // regret() is the same value pnml_predict reports, and sigma2 never
    // enters it.
    const auto pred = pnml_predict(inst.data, inst.x, RidgeConfig{0.1, 1.0});
    CHECK(pnml::regret(inst.data, inst.x, 0.1) == pred.regret);
    CHECK(pred.regret == std::log(pred.k_factor));
    CHECK(pred.h >= 0.0);
    CHECK(pred.h <= 1.0);
    CHECK(pred.k_factor >= 1.0);
    CHECK(pred.regret >= 0.0);
    for (double sigma2 : {0.1, 10.0}) {
      const auto other = pnml_predict(inst.data, inst.x, RidgeConfig{0.1, sigma2});
      CHECK(other.regret == pred.regret);
      CHECK(other.h == pred.h);
    }
  }
}

TEST_CASE("pnml mean is the ERM prediction") {
  std::mt19937_64 rng(19);
  for (double lambda : {0.0, 0.1}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto inst = testutil::random_instance(rng, lambda);
      const auto model = fit_ridge(inst.data, RidgeConfig{lambda, 1.0});
      const auto pred = pnml_predict(inst.data, inst.x, RidgeConfig{lambda, 1.0});
      CHECK(pred.y_hat == predict(model, inst.x));
    }
  }
}

TEST_CASE("pnml h agrees with the inverse-Gram quadratic form") {
  // The computation path is the augmented Gram spectrum; the recursive
  // identity h = x^T P_{N+1} x is the cross-check.
  std::mt19937_64 rng(23);
  for (double lambda : {0.0, 0.1, 1.0}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto inst = testutil::random_instance(rng, lambda);
      const auto pred = pnml_predict(inst.data, inst.x, RidgeConfig{lambda, 1.0});
      const auto augmented = fit_ridge(inst.data.with_sample(inst.x, 0.0),
                                       RidgeConfig{lambda, 1.0});
      const double via_p = inst.x.dot(augmented.p_matrix() * inst.x);
      CHECK(std::abs(pred.h - via_p) <= 1e-10);
    }
  }
}

TEST_CASE("genie density: direct path equals the closed form") {
  std::mt19937_64 rng(29);

  // At the ERM prediction the genie residual shrinks to zero.
  const auto inst = testutil::random_instance(rng, 0.1);
  const RidgeConfig cfg{0.1, 2.0};
  const auto pred = pnml_predict(inst.data, inst.x, cfg);
  CHECK(genie_density_at(inst.data, inst.x, pred.y_hat, cfg) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * 2.0)).epsilon(1e-10));

  // Perfect-fit regime: constant density over labels.
  const Dataset basis = basis_sample();
  const RidgeConfig ls{0.0, 1.0};
  for (double y : {-3.0, 0.0, 5.0}) {
    CHECK(genie_density_at(basis, Eigen::Vector2d(0.0, 1.0), y, ls) ==
          doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
  }

  // Two-path identity on random instances.
  for (int rep = 0; rep < 20; ++rep) {
    const double lambda = rep % 2 == 0 ? 0.0 : 0.3;
    const auto random_inst = testutil::random_instance(rng, lambda);
    const RidgeConfig rc{lambda, 1.3};
    const auto p = pnml_predict(random_inst.data, random_inst.x, rc);
    if (!(p.h < 1.0 - 1e-9)) continue;
    const double width = std::sqrt(rc.sigma2) / (1.0 - p.h);
    for (double offset : {-3.0, -0.5, 0.0, 1.0, 2.5}) {
      const double y = p.y_hat + offset * width;
      const double direct = genie_density_at(random_inst.data, random_inst.x, y, rc);
      const double dev = (1.0 - p.h) * (y - p.y_hat);
      const double closed =
          std::exp(-dev * dev / (2.0 * rc.sigma2)) / std::sqrt(2.0 * std::numbers::pi * rc.sigma2);
      CHECK(rel_err(direct, closed) <= 1e-10);
    }
  }
}

TEST_CASE("log loss values and genie decomposition") {
  const auto at_zero = pnml_predict(one_scalar_sample(1.0, 0.7), Eigen::VectorXd::Zero(1),
                                    RidgeConfig{0.0, 1.0});
  CHECK(log_loss(at_zero, at_zero.y_hat) ==
        doctest::Approx(0.5 * std::log(2.0 * std::numbers::pi)).epsilon(1e-12));
  CHECK(log_loss(at_zero, 40.0) > 700.0);

  std::mt19937_64 rng(37);
  for (int rep = 0; rep < 20; ++rep) {
    const double lambda = rep % 2 == 0 ? 0.0 : 0.2;
    const auto inst = testutil::random_instance(rng, lambda);
    const RidgeConfig cfg{lambda, 1.0};
    const auto pred = pnml_predict(inst.data, inst.x, cfg);
    if (!(pred.h < 1.0 - 1e-9)) continue;
    std::normal_distribution<double> normal;
    const double y = pred.y_hat + normal(rng);
    const double lhs = log_loss(pred, y);
    const double rhs = -std::log(genie_density_at(inst.data, inst.x, y, cfg)) + pred.regret;
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("prediction csv row uses the inf literal") {
  const auto unseen = pnml_predict(basis_sample(), Eigen::Vector2d(0.0, 1.0),
                                   RidgeConfig{0.0, 1.0});
  CHECK(pnml::to_csv_row(unseen) == "0,1,inf,inf");
  CHECK(pnml::kPredictionCsvHeader == "y_hat,h,k_factor,regret");
}
