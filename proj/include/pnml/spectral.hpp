#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "pnml/dataset.hpp"

namespace pnml::spectral {

// Learnable-space decomposition of a query point against the training data:
// eigenpairs of the empirical correlation matrix R_N = (1/N) X X^T, the
// projections of x on each eigendirection, and the per-direction regret
// contributions (x^T u_i)^2 / eta_i. A projection onto a numerically null
// direction yields a +inf contribution: the query leaves the learnable
// space. The decomposition is the lambda = 0 formula; regularized regret
// comes from pnml_predict (see lambda_note).
struct SpectralReport {
  Eigen::VectorXd eigenvalues;   // eta_1..eta_M, descending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns, aligned with eigenvalues
  Eigen::VectorXd projections;   // x^T u_i
  Eigen::VectorXd contributions; // (x^T u_i)^2 / eta_i, +inf on null directions
  double gamma = 0.0;            // sum of contributions, may be +inf
  double regret = 0.0;           // log(1 + gamma / N), may be +inf
  Eigen::Index n_samples = 0;
  std::string_view lambda_note =
      "decomposition assumes lambda = 0; regularized regret comes from pnml_predict";
};

struct ProfileEntry {
  double gamma = 0.0;
  double regret = 0.0;
  std::optional<Eigen::Index> top_contribution;  // empty when gamma == 0
};

// Empirical correlation matrix R_N = (1/N) X X^T. Requires N >= 1.
Eigen::MatrixXd correlation_matrix(const Dataset& data);

// Full spectral analysis of one query point.
SpectralReport analyze(const Dataset& data, const Eigen::VectorXd& x);

// analyze() over a batch of query points, order preserved.
std::vector<ProfileEntry> learnability_profile(const Dataset& data,
                                               const std::vector<Eigen::VectorXd>& xs);

// One row per eigendirection "index,eigenvalue,projection,contribution"
// followed by a summary row "gamma,<value>,regret,<value>".
void write_csv(const SpectralReport& report, std::ostream& out);

}  // namespace pnml::spectral
