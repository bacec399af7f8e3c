#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnml/dataset.hpp"

namespace pnml::experiment {

// Invalid configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or degenerate data, including malformed CSV (CLI exit code 2).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Seedable generator with pinned stream semantics, so emitted CSV is
// byte-identical across platforms: mt19937_64 raw output (the engine is
// fully specified by the standard) mapped to doubles explicitly, because
// standard-library distributions are implementation-defined. uniform01()
// consumes one raw draw and keeps its top 53 bits; normal() consumes
// exactly two raw draws (Box-Muller, cosine branch).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform01();                    // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // standard normal

 private:
  std::mt19937_64 engine_;
};

struct GridSpec {
  double lo = -1.0;
  double hi = 1.0;
  int count = 201;
};

// One experiment description. Training points t_i are drawn uniformly on
// [grid.lo, grid.hi]; labels come from the configured polynomial (constant
// coefficient first) plus optional Gaussian noise, or verbatim from
// train_file ("t,y" CSV) when set. Stream order per run: n_train uniform
// draws for the points (redrawn wholesale if two points collide), then one
// normal per point when noise_sigma > 0.
struct ExperimentConfig {
  int n_train = 3;
  std::vector<int> degrees = {2};
  std::vector<double> lambdas = {0.0, 0.1, 1.0};
  double sigma2 = 1.0;
  GridSpec grid{};
  std::uint64_t seed = 1;
  std::vector<double> label_coeffs = {0.0, -0.5, 1.0};  // y = t^2 - 0.5 t
  double noise_sigma = 0.0;
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> train_file;

  void validate() const;  // throws ConfigError
};

// Defaults matching the CLI subcommands.
ExperimentConfig reg_sweep_defaults();    // fig1: 3 points, degree 2, lambda {0, 0.1, 1}
ExperimentConfig degree_sweep_defaults(); // fig2: 10 points, degrees {2, 3, 10}, lambda 1e-4
ExperimentConfig score_defaults();        // fit: lambda 0

struct RunCurve {
  int degree = 0;
  double lambda = 0.0;
  std::string label;            // "deg{D}_lam{lambda}"
  std::vector<double> y_hat;    // one per grid point
  std::vector<double> regret;   // one per grid point, may contain +inf
};

struct SweepResult {
  std::vector<double> grid;     // t values, grid.count of them
  std::vector<double> t_train;
  std::vector<double> y_train;
  std::vector<RunCurve> runs;
  std::filesystem::path predictions_csv;
  std::filesystem::path regret_csv;
  std::filesystem::path train_csv;
};

// Fixed degree (degrees must hold exactly one entry), one run per lambda.
// Writes fig1_predictions.csv, fig1_regret.csv and the fig1_train.csv
// sidecar into out_dir.
SweepResult run_reg_sweep(const ExperimentConfig& cfg);

// Fixed lambda (lambdas must hold exactly one entry), one run per degree.
// Writes the fig2_* counterparts.
SweepResult run_degree_sweep(const ExperimentConfig& cfg);

struct ScoreRow {
  double y_hat = 0.0;
  double h = 0.0;
  double regret = 0.0;  // may be +inf
  double gamma = 0.0;   // may be +inf
  bool learnable = true;
};

struct ScoreResult {
  std::vector<ScoreRow> rows;
  std::filesystem::path scores_csv;
};

// Scores every row of test_csv against the model fitted on train_csv (both
// in the dataset CSV format; test labels are ignored). Uses the single
// configured lambda. Writes scores.csv into out_dir with one row per test
// point: y_hat, h, regret, gamma, flag in {learnable, non-learnable}.
ScoreResult run_score(const ExperimentConfig& cfg, const std::filesystem::path& train_csv,
                      const std::filesystem::path& test_csv);

}  // namespace pnml::experiment
