#include "parmatch/cost.hpp"

#include <cmath>

namespace parmatch {

CostMatrix::CostMatrix(Eigen::MatrixXd data, CostKind kind)
    : data_(std::move(data)), kind_(kind), max_entry_(0.0) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw DimensionMismatch("cost matrix must be at least 1x1");
  }
  for (Eigen::Index j = 0; j < data_.cols(); ++j) {
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
      const double v = data_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw NumericalError("invalid cost entry at (" + std::to_string(i) + "," +
                             std::to_string(j) + "): " + std::to_string(v));
      }
      if (v > max_entry_) max_entry_ = v;
    }
  }
}

CostMatrix cosine_cost(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y) {
  if (x.tag() != Normalization::centered_unit_norm ||
      y.tag() != Normalization::centered_unit_norm) {
    throw NormalizationError("cosine cost requires centered unit-norm inputs");
  }
  if (x.stimulus_count() != y.stimulus_count()) {
    throw DimensionMismatch("stimulus counts differ: " + std::to_string(x.stimulus_count()) +
                            " vs " + std::to_string(y.stimulus_count()));
  }
  const Eigen::MatrixXd& xd = x.data();
  const Eigen::MatrixXd& yd = y.data();
  Eigen::MatrixXd c(xd.cols(), yd.cols());
  // Per-pair column dots (not one gemm) so that cost(x, y) and cost(y, x)^T
  // are bitwise identical.
  for (Eigen::Index j = 0; j < yd.cols(); ++j) {
    for (Eigen::Index i = 0; i < xd.cols(); ++i) {
      double v = 1.0 - xd.col(i).dot(yd.col(j));
      if (v < 0.0) v = 0.0;
      if (v > 2.0) v = 2.0;
      c(i, j) = v;
    }
  }
  return CostMatrix(std::move(c), CostKind::cosine_distance);
}

CostMatrix squared_euclidean_cost(const TuningMatrix& x, const TuningMatrix& y) {
  if (x.stimulus_count() != y.stimulus_count()) {
    throw DimensionMismatch("stimulus counts differ: " + std::to_string(x.stimulus_count()) +
                            " vs " + std::to_string(y.stimulus_count()));
  }
  const Eigen::MatrixXd& xd = x.data();
  const Eigen::MatrixXd& yd = y.data();
  Eigen::MatrixXd c(xd.cols(), yd.cols());
  for (Eigen::Index j = 0; j < yd.cols(); ++j) {
    for (Eigen::Index i = 0; i < xd.cols(); ++i) {
      double v = (xd.col(i) - yd.col(j)).squaredNorm();
      if (v < 0.0) v = 0.0;
      c(i, j) = v;
    }
  }
  return CostMatrix(std::move(c), CostKind::squared_euclidean);
}

}  // namespace parmatch
