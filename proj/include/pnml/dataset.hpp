#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace pnml {

// Malformed CSV input; the message carries "source:line: what".
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fixed set of (feature vector, scalar label) pairs. Features are stored
// column-wise: features() is M x N with column i the i-th sample. Immutable
// after construction and safe to read from concurrent threads.
class Dataset {
 public:
  // Requires M >= 1, labels.size() == features.cols(), all entries finite.
  Dataset(Eigen::MatrixXd features, Eigen::VectorXd labels);

  // N = 0 dataset of the given feature dimension.
  static Dataset empty(Eigen::Index dim);

  Eigen::Index dim() const { return features_.rows(); }   // M
  Eigen::Index size() const { return features_.cols(); }  // N

  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& labels() const { return labels_; }
  Eigen::VectorXd feature(Eigen::Index i) const { return features_.col(i); }
  double label(Eigen::Index i) const { return labels_(i); }

  // Copy with (x, y) appended as sample N+1.
  Dataset with_sample(const Eigen::VectorXd& x, double y) const;

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd labels_;
};

// CSV format: header "x0,x1,...,x{M-1},y", one row per sample, 64-bit
// decimal floats. The reader reports malformed input with 1-based line
// numbers; the writer emits shortest round-trip forms.
Dataset read_dataset_csv(std::istream& in, const std::string& source = "<stream>");
Dataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const Dataset& data, std::ostream& out);
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);

}  // namespace pnml
