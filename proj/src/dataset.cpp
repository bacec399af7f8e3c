#include "pnml/dataset.hpp"

#include <cmath>
#include <fstream>
#include <utility>
#include <vector>

#include "pnml/format.hpp"

namespace pnml {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

[[noreturn]] void csv_fail(const std::string& source, std::size_t line_no, const std::string& what) {
  throw CsvError(source + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd features, Eigen::VectorXd labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() < 1) {
    throw std::invalid_argument("Dataset: feature dimension must be >= 1");
  }
  if (labels_.size() != features_.cols()) {
    throw std::invalid_argument("Dataset: label count " + std::to_string(labels_.size()) +
                                " does not match sample count " + std::to_string(features_.cols()));
  }
  if (!features_.allFinite() || !labels_.allFinite()) {
    throw std::invalid_argument("Dataset: all entries must be finite");
  }
}

Dataset Dataset::empty(Eigen::Index dim) {
  return Dataset(Eigen::MatrixXd(dim, 0), Eigen::VectorXd(0));
}

Dataset Dataset::with_sample(const Eigen::VectorXd& x, double y) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("Dataset::with_sample: sample has dimension " +
                                std::to_string(x.size()) + ", expected " + std::to_string(dim()));
  }
  Eigen::MatrixXd features(dim(), size() + 1);
  features.leftCols(size()) = features_;
  features.col(size()) = x;
  Eigen::VectorXd labels(size() + 1);
  labels.head(size()) = labels_;
  labels(size()) = y;
  return Dataset(std::move(features), std::move(labels));
}

Dataset read_dataset_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) {
    throw CsvError(source + ":1: missing header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_line(line);
  if (header.size() < 2 || header.back() != "y") {
    csv_fail(source, 1, "expected header \"x0,...,x{M-1},y\"");
  }
  const std::size_t m = header.size() - 1;
  for (std::size_t j = 0; j < m; ++j) {
    if (header[j] != "x" + std::to_string(j)) {
      csv_fail(source, 1, "expected column \"x" + std::to_string(j) + "\", got \"" + header[j] + "\"");
    }
  }

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto cells = split_line(line);
    if (cells.size() != m + 1) {
      csv_fail(source, line_no,
               "expected " + std::to_string(m + 1) + " cells, got " + std::to_string(cells.size()));
    }
    std::vector<double> row(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
      if (!try_parse_double(cells[j], row[j])) {
        csv_fail(source, line_no, "cell " + std::to_string(j + 1) + " is not a number: \"" + cells[j] + "\"");
      }
      if (!std::isfinite(row[j])) {
        csv_fail(source, line_no, "cell " + std::to_string(j + 1) + " is not finite");
      }
    }
    rows.push_back(std::move(row));
  }

  Eigen::MatrixXd features(m, rows.size());
  Eigen::VectorXd labels(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) features(j, i) = rows[i][j];
    labels(i) = rows[i][m];
  }
  return Dataset(std::move(features), std::move(labels));
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CsvError(path.string() + ": cannot open file");
  }
  return read_dataset_csv(in, path.string());
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  for (Eigen::Index j = 0; j < data.dim(); ++j) out << "x" << j << ",";
  out << "y\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      out << format_double(data.features()(j, i)) << ",";
    }
    out << format_double(data.label(i)) << "\n";
  }
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw CsvError(path.string() + ": cannot open file for writing");
  }
  write_dataset_csv(data, out);
}

}  // namespace pnml
