#include "parmatch/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace parmatch {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kDegenerateNorm = 1e-12;

void check_finite(const Eigen::MatrixXd& data) {
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (!std::isfinite(data(i, j))) {
        throw FormatError("non-finite entry at row " + std::to_string(i) +
                          ", column " + std::to_string(j));
      }
    }
  }
}

}  // namespace

TuningMatrix::TuningMatrix(Eigen::MatrixXd data,
                           std::optional<std::vector<std::string>> unit_labels)
    : data_(std::move(data)), unit_labels_(std::move(unit_labels)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw FormatError("tuning matrix must have at least one stimulus and one unit");
  }
  check_finite(data_);
  if (unit_labels_) {
    if (static_cast<Eigen::Index>(unit_labels_->size()) != data_.cols()) {
      throw FormatError("label count " + std::to_string(unit_labels_->size()) +
                        " does not match unit count " + std::to_string(data_.cols()));
    }
    std::unordered_set<std::string> seen;
    for (const auto& label : *unit_labels_) {
      if (!seen.insert(label).second) {
        throw FormatError("duplicate unit label '" + label + "'");
      }
    }
  }
}

TuningMatrix TuningMatrix::select_units(std::span<const int> indices) const {
  Eigen::MatrixXd sub(data_.rows(), static_cast<Eigen::Index>(indices.size()));
  std::optional<std::vector<std::string>> labels;
  if (unit_labels_) labels.emplace();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    sub.col(static_cast<Eigen::Index>(k)) = data_.col(indices[k]);
    if (labels) labels->push_back((*unit_labels_)[static_cast<std::size_t>(indices[k])]);
  }
  return TuningMatrix(std::move(sub), std::move(labels));
}

NormalizedTuningMatrix NormalizedTuningMatrix::tag_raw(TuningMatrix m) {
  return NormalizedTuningMatrix(std::move(m), Normalization::raw);
}

NormalizedTuningMatrix NormalizedTuningMatrix::checked(TuningMatrix m) {
  const Eigen::MatrixXd& data = m.data();
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const double mean = data.col(j).mean();
    const double norm = data.col(j).norm();
    if (std::abs(mean) > kNormTolerance || std::abs(norm - 1.0) > kNormTolerance) {
      throw NormalizationError("column " + std::to_string(j) +
                               " is not centered unit-norm (mean " + std::to_string(mean) +
                               ", norm " + std::to_string(norm) + ")");
    }
  }
  return NormalizedTuningMatrix(std::move(m), Normalization::centered_unit_norm);
}

NormalizedTuningMatrix NormalizedTuningMatrix::select_units(std::span<const int> indices) const {
  return NormalizedTuningMatrix(matrix_.select_units(indices), tag_);
}

NormalizedTuningMatrix center_and_normalize(const TuningMatrix& m) {
  Eigen::MatrixXd out = m.data();
  std::vector<int> degenerate;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    out.col(j).array() -= out.col(j).mean();
    const double norm = out.col(j).norm();
    if (norm <= kDegenerateNorm) {
      degenerate.push_back(static_cast<int>(j));
      continue;
    }
    out.col(j) /= norm;
  }
  if (!degenerate.empty()) {
    std::string msg = "constant/zero-variance columns:";
    for (int j : degenerate) msg += " " + std::to_string(j);
    throw DegenerateUnitError(msg, std::move(degenerate));
  }
  return NormalizedTuningMatrix(TuningMatrix(std::move(out), m.unit_labels()),
                                Normalization::centered_unit_norm);
}

NormalizedTuningMatrix center_and_normalize(const NormalizedTuningMatrix& m) {
  return center_and_normalize(m.matrix());
}

namespace {

bool parse_double(const std::string& cell, double& value) {
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  while (last != first && (*(last - 1) == ' ' || *(last - 1) == '\t' || *(last - 1) == '\r')) --last;
  if (first == last) return false;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

TuningMatrix load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::optional<std::vector<std::string>> labels;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    if (rows.empty() && !labels) {
      // A first row with any non-numeric cell is a header of unit labels.
      bool numeric = true;
      for (const auto& c : cells) {
        double v;
        if (!parse_double(c, v)) {
          numeric = false;
          break;
        }
      }
      if (!numeric) {
        labels.emplace();
        for (auto& c : cells) {
          std::string trimmed = c;
          while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
            trimmed.erase(trimmed.begin());
          while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t' ||
                                      trimmed.back() == '\r'))
            trimmed.pop_back();
          labels->push_back(trimmed);
        }
        width = cells.size();
        continue;
      }
    }
    if (width == 0) width = cells.size();
    if (cells.size() != width) {
      throw FormatError("ragged row at line " + std::to_string(line_no) + ": expected " +
                        std::to_string(width) + " cells, got " + std::to_string(cells.size()));
    }
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) {
      double v;
      if (!parse_double(cells[j], v)) {
        throw FormatError("non-numeric cell at line " + std::to_string(line_no) + ", column " +
                          std::to_string(j));
      }
      if (!std::isfinite(v)) {
        throw FormatError("non-finite value at line " + std::to_string(line_no) + ", column " +
                          std::to_string(j));
      }
      row[j] = v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("no data rows in " + path.string());

  Eigen::MatrixXd data(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return TuningMatrix(std::move(data), std::move(labels));
}

TuningMatrix load_rawbin(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("cannot open " + path.string());
  std::uint64_t dims[2];
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in) throw FormatError("truncated header in " + path.string());
  const std::uint64_t m = dims[0], n = dims[1];
  if (m == 0 || n == 0 || m > (1ull << 32) || n > (1ull << 32)) {
    throw FormatError("implausible dimensions " + std::to_string(m) + "x" + std::to_string(n));
  }
  Eigen::MatrixXd data(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::vector<double> row(n);
  for (std::uint64_t i = 0; i < m; ++i) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(n * sizeof(double)));
    if (!in) throw FormatError("truncated data at row " + std::to_string(i));
    for (std::uint64_t j = 0; j < n; ++j)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
  }
  return TuningMatrix(std::move(data));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

TuningMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format) {
  if (!std::filesystem::exists(path)) throw IOError("no such file: " + path.string());
  switch (format) {
    case MatrixFormat::csv:
      return load_csv(path);
    case MatrixFormat::rawbin:
      return load_rawbin(path);
  }
  throw Error("unreachable");
}

void save_matrix(const TuningMatrix& m, const std::filesystem::path& path, MatrixFormat format) {
  if (format == MatrixFormat::csv) {
    std::ofstream out(path);
    if (!out) throw IOError("cannot write " + path.string());
    if (m.unit_labels()) {
      const auto& labels = *m.unit_labels();
      for (std::size_t j = 0; j < labels.size(); ++j) {
        if (j) out << ',';
        out << labels[j];
      }
      out << '\n';
    }
    for (Eigen::Index i = 0; i < m.stimulus_count(); ++i) {
      for (Eigen::Index j = 0; j < m.unit_count(); ++j) {
        if (j) out << ',';
        out << format_double(m.data()(i, j));
      }
      out << '\n';
    }
    if (!out) throw IOError("write failed: " + path.string());
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("cannot write " + path.string());
  const std::uint64_t dims[2] = {static_cast<std::uint64_t>(m.stimulus_count()),
                                 static_cast<std::uint64_t>(m.unit_count())};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  std::vector<double> row(static_cast<std::size_t>(m.unit_count()));
  for (Eigen::Index i = 0; i < m.stimulus_count(); ++i) {
    for (Eigen::Index j = 0; j < m.unit_count(); ++j) row[static_cast<std::size_t>(j)] = m.data()(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw IOError("write failed: " + path.string());
}

}  // namespace parmatch
