#include "pnml/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "pnml/format.hpp"
#include "pnml/prediction.hpp"
#include "pnml/regression.hpp"
#include "pnml/spectral.hpp"

namespace pnml::experiment {

namespace {

constexpr double kDuplicateTol = 1e-12;
constexpr int kMaxResampleAttempts = 64;

double eval_polynomial(const std::vector<double>& coeffs, double t) {
  double value = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    value = value * t + *it;
  }
  return value;
}

struct TrainingSet {
  Eigen::VectorXd t;
  Eigen::VectorXd y;
};

bool has_duplicates(const Eigen::VectorXd& t) {
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    for (Eigen::Index j = i + 1; j < t.size(); ++j) {
      if (std::abs(t(i) - t(j)) <= kDuplicateTol) return true;
    }
  }
  return false;
}

TrainingSet load_training_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(path.string() + ": cannot open training file");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path.string() + ":1: missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,y") {
    throw DataError(path.string() + ":1: expected header \"t,y\", got \"" + line + "\"");
  }
  std::vector<double> ts;
  std::vector<double> ys;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    double t = 0.0;
    double y = 0.0;
    if (comma == std::string::npos || !try_parse_double(line.substr(0, comma), t) ||
        !try_parse_double(line.substr(comma + 1), y)) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected two numeric cells \"t,y\"");
    }
    if (!std::isfinite(t) || !std::isfinite(y)) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": value is not finite");
    }
    ts.push_back(t);
    ys.push_back(y);
  }
  if (ts.empty()) {
    throw DataError(path.string() + ": training file holds no samples");
  }
  TrainingSet set;
  set.t = Eigen::Map<Eigen::VectorXd>(ts.data(), static_cast<Eigen::Index>(ts.size()));
  set.y = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return set;
}

TrainingSet make_training_set(const ExperimentConfig& cfg) {
  if (cfg.train_file) {
    return load_training_file(*cfg.train_file);
  }
  Rng rng(cfg.seed);
  Eigen::VectorXd t(cfg.n_train);
  for (int attempt = 1; attempt <= kMaxResampleAttempts; ++attempt) {
    for (int i = 0; i < cfg.n_train; ++i) {
      t(i) = rng.uniform(cfg.grid.lo, cfg.grid.hi);
    }
    if (!has_duplicates(t)) {
      Eigen::VectorXd y(cfg.n_train);
      for (int i = 0; i < cfg.n_train; ++i) {
        y(i) = eval_polynomial(cfg.label_coeffs, t(i));
      }
      if (cfg.noise_sigma > 0.0) {
        for (int i = 0; i < cfg.n_train; ++i) {
          y(i) += cfg.noise_sigma * rng.normal();
        }
      }
      return TrainingSet{t, y};
    }
    std::cerr << "warning: degenerate sample (duplicate training points), resampling (attempt "
              << attempt << ")\n";
  }
  throw DataError("training point sampling failed: duplicates after " +
                  std::to_string(kMaxResampleAttempts) + " attempts");
}

std::vector<double> make_grid(const GridSpec& grid) {
  std::vector<double> ts(grid.count);
  const double step = (grid.hi - grid.lo) / static_cast<double>(grid.count - 1);
  for (int j = 0; j < grid.count; ++j) {
    ts[j] = grid.lo + step * static_cast<double>(j);
  }
  ts.back() = grid.hi;
  return ts;
}

std::string run_label(int degree, double lambda) {
  return "deg" + std::to_string(degree) + "_lam" + format_double(lambda);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError(path.string() + ": cannot open file for writing");
  }
  return out;
}

void write_curves(const std::filesystem::path& path, const std::vector<double>& grid,
                  const std::vector<RunCurve>& runs, bool predictions) {
  auto out = open_output(path);
  out << "t";
  for (const auto& run : runs) {
    out << "," << (predictions ? "yhat_" : "regret_") << run.label;
  }
  out << "\n";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out << format_double(grid[j]);
    for (const auto& run : runs) {
      out << "," << format_double(predictions ? run.y_hat[j] : run.regret[j]);
    }
    out << "\n";
  }
}

void write_training(const std::filesystem::path& path, const TrainingSet& train) {
  auto out = open_output(path);
  out << "t,y\n";
  for (Eigen::Index i = 0; i < train.t.size(); ++i) {
    out << format_double(train.t(i)) << "," << format_double(train.y(i)) << "\n";
  }
}

// Shared sweep core: one run per (degree, lambda) pair, columns in pair
// order. Grid points are evaluated in order; every value lands in the CSV
// exactly as computed (shortest round-trip form), so library calls on the
// same inputs reproduce the file bit for bit.
SweepResult run_sweep(const ExperimentConfig& cfg,
                      const std::vector<std::pair<int, double>>& combos,
                      const std::string& prefix) {
  cfg.validate();
  const TrainingSet train = make_training_set(cfg);
  SweepResult result;
  result.grid = make_grid(cfg.grid);
  result.t_train.assign(train.t.data(), train.t.data() + train.t.size());
  result.y_train.assign(train.y.data(), train.y.data() + train.y.size());

  for (const auto& [degree, lambda] : combos) {
    RunCurve curve;
    curve.degree = degree;
    curve.lambda = lambda;
    curve.label = run_label(degree, lambda);
    curve.y_hat.reserve(result.grid.size());
    curve.regret.reserve(result.grid.size());

    const Dataset data(build_vandermonde(train.t, degree), train.y);
    FittedModel model = [&] {
      try {
        return fit_ridge(data, RidgeConfig{lambda, cfg.sigma2});
      } catch (const std::runtime_error& e) {
        throw DataError("run " + curve.label + ": " + e.what());
      }
    }();
    for (double t : result.grid) {
      Eigen::VectorXd point(1);
      point(0) = t;
      const Eigen::VectorXd x = build_vandermonde(point, degree).col(0);
      curve.y_hat.push_back(predict(model, x));
      curve.regret.push_back(regret(data, x, lambda));
    }
    result.runs.push_back(std::move(curve));
  }

  std::filesystem::create_directories(cfg.out_dir);
  result.predictions_csv = cfg.out_dir / (prefix + "_predictions.csv");
  result.regret_csv = cfg.out_dir / (prefix + "_regret.csv");
  result.train_csv = cfg.out_dir / (prefix + "_train.csv");
  write_curves(result.predictions_csv, result.grid, result.runs, true);
  write_curves(result.regret_csv, result.grid, result.runs, false);
  write_training(result.train_csv, train);
  return result;
}

}  // namespace

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

void ExperimentConfig::validate() const {
  if (n_train < 1) {
    throw ConfigError("config: n_train must be >= 1, got " + std::to_string(n_train));
  }
  if (degrees.empty()) {
    throw ConfigError("config: degrees must not be empty");
  }
  for (int d : degrees) {
    if (d < 0) throw ConfigError("config: degree must be >= 0, got " + std::to_string(d));
  }
  if (lambdas.empty()) {
    throw ConfigError("config: lambdas must not be empty");
  }
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw ConfigError("config: lambda must be finite and >= 0, got " + format_double(l));
    }
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw ConfigError("config: sigma2 must be finite and > 0, got " + format_double(sigma2));
  }
  if (!(grid.lo < grid.hi)) {
    throw ConfigError("config: grid requires lo < hi, got " + format_double(grid.lo) + ":" +
                      format_double(grid.hi));
  }
  if (grid.count < 2) {
    throw ConfigError("config: grid count must be >= 2, got " + std::to_string(grid.count));
  }
  if (label_coeffs.empty()) {
    throw ConfigError("config: label polynomial needs at least one coefficient");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ConfigError("config: noise sigma must be finite and >= 0");
  }
}

ExperimentConfig reg_sweep_defaults() {
  ExperimentConfig cfg;
  cfg.n_train = 3;
  cfg.degrees = {2};
  cfg.lambdas = {0.0, 0.1, 1.0};
  return cfg;
}

ExperimentConfig degree_sweep_defaults() {
  ExperimentConfig cfg;
  cfg.n_train = 10;
  cfg.degrees = {2, 3, 10};
  cfg.lambdas = {1e-4};
  return cfg;
}

ExperimentConfig score_defaults() {
  ExperimentConfig cfg;
  cfg.degrees = {2};  // unused by scoring; features come from the CSV
  cfg.lambdas = {0.0};
  return cfg;
}

SweepResult run_reg_sweep(const ExperimentConfig& cfg) {
  if (cfg.degrees.size() != 1) {
    throw ConfigError("reg sweep: expected exactly one degree, got " +
                      std::to_string(cfg.degrees.size()));
  }
  std::vector<std::pair<int, double>> combos;
  for (double lambda : cfg.lambdas) combos.emplace_back(cfg.degrees.front(), lambda);
  return run_sweep(cfg, combos, "fig1");
}

SweepResult run_degree_sweep(const ExperimentConfig& cfg) {
  if (cfg.lambdas.size() != 1) {
    throw ConfigError("degree sweep: expected exactly one lambda, got " +
                      std::to_string(cfg.lambdas.size()));
  }
  std::vector<std::pair<int, double>> combos;
  for (int degree : cfg.degrees) combos.emplace_back(degree, cfg.lambdas.front());
  return run_sweep(cfg, combos, "fig2");
}

ScoreResult run_score(const ExperimentConfig& cfg, const std::filesystem::path& train_csv,
                      const std::filesystem::path& test_csv) {
  cfg.validate();
  if (cfg.lambdas.size() != 1) {
    throw ConfigError("score: expected exactly one lambda, got " +
                      std::to_string(cfg.lambdas.size()));
  }
  const double lambda = cfg.lambdas.front();

  auto load = [](const std::filesystem::path& path) {
    try {
      return read_dataset_csv(path);
    } catch (const CsvError& e) {
      throw DataError(e.what());
    } catch (const std::invalid_argument& e) {
      throw DataError(path.string() + ": " + e.what());
    }
  };
  const Dataset train = load(train_csv);
  const Dataset test = load(test_csv);
  if (train.size() < 1) {
    throw DataError(train_csv.string() + ": scoring requires at least one training sample");
  }
  if (test.dim() != train.dim()) {
    throw DataError(test_csv.string() + ": feature dimension " + std::to_string(test.dim()) +
                    " does not match training dimension " + std::to_string(train.dim()));
  }

  ScoreResult result;
  const RidgeConfig ridge{lambda, cfg.sigma2};
  for (Eigen::Index i = 0; i < test.size(); ++i) {
    const Eigen::VectorXd x = test.feature(i);
    const PnmlPrediction pred = pnml_predict(train, x, ridge);
    const auto spectrum = spectral::analyze(train, x);
    result.rows.push_back(
        ScoreRow{pred.y_hat, pred.h, pred.regret, spectrum.gamma, pred.learnable()});
  }

  std::filesystem::create_directories(cfg.out_dir);
  result.scores_csv = cfg.out_dir / "scores.csv";
  auto out = open_output(result.scores_csv);
  out << "y_hat,h,regret,gamma,flag\n";
  for (const auto& row : result.rows) {
    out << format_double(row.y_hat) << "," << format_double(row.h) << ","
        << format_double(row.regret) << "," << format_double(row.gamma) << ","
        << (row.learnable ? "learnable" : "non-learnable") << "\n";
  }
  return result;
}

}  // namespace pnml::experiment
