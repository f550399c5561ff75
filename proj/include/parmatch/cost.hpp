#pragma once

#include <Eigen/Dense>

#include "parmatch/matrix.hpp"

namespace parmatch {

enum class CostKind { cosine_distance, squared_euclidean };

// Pairwise transport costs between two populations: entry (i, j) is the
// ground cost of matching source unit i to target unit j. Entries are
// finite and nonnegative; the maximum entry is cached for tolerance scaling.
class CostMatrix {
 public:
  CostMatrix(Eigen::MatrixXd data, CostKind kind);

  const Eigen::MatrixXd& data() const { return data_; }
  CostKind kind() const { return kind_; }
  double max_entry() const { return max_entry_; }
  Eigen::Index source_count() const { return data_.rows(); }
  Eigen::Index target_count() const { return data_.cols(); }

 private:
  Eigen::MatrixXd data_;
  CostKind kind_;
  double max_entry_;
};

// C_ij = 1 - x_i^T y_j, clamped to [0, 2]. Both inputs must be tagged
// centered_unit_norm, so the inner product is the Pearson correlation.
CostMatrix cosine_cost(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y);

// C_ij = ||x_i - y_j||^2. On centered unit-norm inputs this equals twice the
// cosine cost entrywise.
CostMatrix squared_euclidean_cost(const TuningMatrix& x, const TuningMatrix& y);

}  // namespace parmatch
