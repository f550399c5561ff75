#include "parmatch/solver.hpp"

#include <chrono>
#include <cmath>

#include "parmatch/transport_simplex.hpp"

namespace parmatch {

namespace {

constexpr double kMarginalTol = 1e-9;

// Kahan-compensated Frobenius inner product.
double frobenius_dot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double sum = 0.0, comp = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double term = a(i, j) * b(i, j) - comp;
      const double next = sum + term;
      comp = (next - sum) - term;
      sum = next;
    }
  }
  return sum;
}

}  // namespace

TransportPlan::TransportPlan(Eigen::MatrixXd entries, double objective)
    : entries_(std::move(entries)), total_mass_(0.0), objective_(objective) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw NumericalError("transport plan must be at least 1x1");
  }
  const double row_cap = 1.0 / static_cast<double>(entries_.rows());
  const double col_cap = 1.0 / static_cast<double>(entries_.cols());
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
      const double v = entries_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw NumericalError("invalid plan entry at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")");
      }
    }
  }
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if (entries_.row(i).sum() > row_cap + kMarginalTol) {
      throw NumericalError("row sum exceeds marginal cap at row " + std::to_string(i));
    }
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    if (entries_.col(j).sum() > col_cap + kMarginalTol) {
      throw NumericalError("column sum exceeds marginal cap at column " + std::to_string(j));
    }
  }
  total_mass_ = entries_.sum();
  if (total_mass_ < -kMarginalTol || total_mass_ > 1.0 + kMarginalTol) {
    throw NumericalError("total transported mass out of range: " + std::to_string(total_mass_));
  }
}

void TransportPlan::require_balanced() const {
  const double row_cap = source_marginal_cap();
  const double col_cap = target_marginal_cap();
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if (std::abs(entries_.row(i).sum() - row_cap) > kMarginalTol) {
      throw NumericalError("balanced plan row sum deviates at row " + std::to_string(i));
    }
  }
  for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
    if (std::abs(entries_.col(j).sum() - col_cap) > kMarginalTol) {
      throw NumericalError("balanced plan column sum deviates at column " + std::to_string(j));
    }
  }
}

SolveResult solve_balanced(const CostMatrix& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const int nx = static_cast<int>(c.source_count());
  const int ny = static_cast<int>(c.target_count());

  // Scale marginals by Nx*Ny: every source ships Ny units, every target
  // receives Nx, and flows stay integral.
  const std::int64_t scale = static_cast<std::int64_t>(nx) * ny;
  std::vector<std::int64_t> supply(static_cast<std::size_t>(nx), ny);
  std::vector<std::int64_t> demand(static_cast<std::size_t>(ny), nx);

  std::vector<double> cost_flat(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      cost_flat[static_cast<std::size_t>(i) * ny + j] = c.data()(i, j);

  detail::TransportSolution sol =
      detail::solve_transportation(nx, ny, cost_flat.data(), supply, demand);

  Eigen::MatrixXd entries(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      entries(i, j) = static_cast<double>(sol.flow[static_cast<std::size_t>(i) * ny + j]) /
                      static_cast<double>(scale);

  const double objective = frobenius_dot(c.data(), entries);
  TransportPlan plan(std::move(entries), objective);
  plan.require_balanced();

  SolveResult result{std::move(plan), objective, std::sqrt(objective),
                     std::move(sol.dual_source), std::move(sol.dual_target), SolverStats{}};
  result.stats.iterations = sol.pivots;
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

double soft_matching_distance(const TuningMatrix& x, const TuningMatrix& y, CostKind kind) {
  if (kind == CostKind::cosine_distance) {
    return solve_balanced(cosine_cost(center_and_normalize(x), center_and_normalize(y))).distance;
  }
  return solve_balanced(squared_euclidean_cost(x, y)).distance;
}

}  // namespace parmatch
