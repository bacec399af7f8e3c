#include "pnml/spectral.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "pnml/format.hpp"
#include "pnml/regression.hpp"

namespace pnml::spectral {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// |x^T u_i| above this (relative to ||x||) on a null direction means the
// query genuinely leaves the training span.
constexpr double kNullProjectionTol = 1e-8;

}  // namespace

Eigen::MatrixXd correlation_matrix(const Dataset& data) {
  if (data.size() < 1) {
    throw std::invalid_argument("correlation_matrix: requires at least one sample");
  }
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(data.dim(), data.dim());
  r.selfadjointView<Eigen::Lower>().rankUpdate(data.features(), 1.0 / data.size());
  r = r.selfadjointView<Eigen::Lower>();
  return r;
}

SpectralReport analyze(const Dataset& data, const Eigen::VectorXd& x) {
  if (x.size() != data.dim()) {
    throw std::invalid_argument("analyze: query has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(data.dim()));
  }
  const Eigen::MatrixXd r = correlation_matrix(data);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("analyze: eigendecomposition failed");
  }

  SpectralReport report;
  report.n_samples = data.size();
  // Eigen sorts ascending; the report contract is descending and >= 0
  // (round-off can leave tiny negatives on a PSD matrix).
  report.eigenvalues = es.eigenvalues().reverse().cwiseMax(0.0);
  report.eigenvectors = es.eigenvectors().rowwise().reverse();
  report.projections = report.eigenvectors.transpose() * x;

  const double eta_max = report.eigenvalues(0);
  const double null_threshold = gram_rank_threshold(eta_max, data.dim());
  const double projection_tol = kNullProjectionTol * x.norm();

  report.contributions.resize(data.dim());
  double gamma = 0.0;
  bool unbounded = false;
  for (Eigen::Index i = 0; i < data.dim(); ++i) {
    const double eta = report.eigenvalues(i);
    const double proj = report.projections(i);
    if (eta < null_threshold || eta <= 0.0) {
      if (std::abs(proj) > projection_tol) {
        report.contributions(i) = kInf;
        unbounded = true;
      } else {
        report.contributions(i) = 0.0;
      }
    } else {
      report.contributions(i) = proj * proj / eta;
      gamma += report.contributions(i);
    }
  }
  report.gamma = unbounded ? kInf : gamma;
  report.regret = unbounded ? kInf : std::log1p(report.gamma / report.n_samples);
  return report;
}

std::vector<ProfileEntry> learnability_profile(const Dataset& data,
                                               const std::vector<Eigen::VectorXd>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != data.dim()) {
      throw std::invalid_argument("learnability_profile: query " + std::to_string(i) +
                                  " has dimension " + std::to_string(xs[i].size()) +
                                  ", expected " + std::to_string(data.dim()));
    }
  }
  std::vector<ProfileEntry> profile;
  profile.reserve(xs.size());
  for (const auto& x : xs) {
    const SpectralReport report = analyze(data, x);
    ProfileEntry entry{report.gamma, report.regret, std::nullopt};
    if (report.gamma > 0.0) {
      Eigen::Index top = 0;
      report.contributions.maxCoeff(&top);
      entry.top_contribution = top;
    }
    profile.push_back(entry);
  }
  return profile;
}

void write_csv(const SpectralReport& report, std::ostream& out) {
  out << "index,eigenvalue,projection,contribution\n";
  for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
    out << i << "," << format_double(report.eigenvalues(i)) << ","
        << format_double(report.projections(i)) << ","
        << format_double(report.contributions(i)) << "\n";
  }
  out << "gamma," << format_double(report.gamma) << ",regret," << format_double(report.regret)
      << "\n";
}

}  // namespace pnml::spectral
