#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parmatch/errors.hpp"

namespace parmatch {

// A population of N units probed with M stimuli. Column j holds unit j's
// tuning curve across the M stimuli. Units-as-columns is the convention
// everywhere in this library.
class TuningMatrix {
 public:
  explicit TuningMatrix(Eigen::MatrixXd data,
                        std::optional<std::vector<std::string>> unit_labels = std::nullopt);

  Eigen::Index stimulus_count() const { return data_.rows(); }
  Eigen::Index unit_count() const { return data_.cols(); }
  const Eigen::MatrixXd& data() const { return data_; }
  const std::optional<std::vector<std::string>>& unit_labels() const { return unit_labels_; }

  // Column subset, preserving label association. Indices must be in range.
  TuningMatrix select_units(std::span<const int> indices) const;

 private:
  Eigen::MatrixXd data_;
  std::optional<std::vector<std::string>> unit_labels_;
};

enum class Normalization { raw, centered_unit_norm };

// A tuning matrix with a normalization tag. When tagged centered_unit_norm,
// every column has zero mean and unit Euclidean norm (within 1e-10), which
// makes inner products between columns Pearson correlations.
class NormalizedTuningMatrix {
 public:
  // Wrap without any claim about the columns.
  static NormalizedTuningMatrix tag_raw(TuningMatrix m);

  // Wrap data that is already centered and unit-norm; throws
  // NormalizationError if any column violates the invariant.
  static NormalizedTuningMatrix checked(TuningMatrix m);

  Normalization tag() const { return tag_; }
  const TuningMatrix& matrix() const { return matrix_; }
  const Eigen::MatrixXd& data() const { return matrix_.data(); }
  Eigen::Index stimulus_count() const { return matrix_.stimulus_count(); }
  Eigen::Index unit_count() const { return matrix_.unit_count(); }

  // Column subsets of a normalized matrix stay normalized.
  NormalizedTuningMatrix select_units(std::span<const int> indices) const;

 private:
  friend NormalizedTuningMatrix center_and_normalize(const TuningMatrix&);
  NormalizedTuningMatrix(TuningMatrix m, Normalization tag)
      : matrix_(std::move(m)), tag_(tag) {}

  TuningMatrix matrix_;
  Normalization tag_;
};

// Subtract each column's mean, then scale it to unit norm. Throws
// DegenerateUnitError listing every column whose centered norm is <= 1e-12.
NormalizedTuningMatrix center_and_normalize(const TuningMatrix& m);
NormalizedTuningMatrix center_and_normalize(const NormalizedTuningMatrix& m);

enum class MatrixFormat { csv, rawbin };

// CSV: optional header row of unit labels, then one row per stimulus.
// rawbin: two little-endian uint64 dims followed by row-major little-endian
// doubles.
TuningMatrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const TuningMatrix& m, const std::filesystem::path& path, MatrixFormat format);

}  // namespace parmatch
