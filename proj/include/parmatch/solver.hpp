#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "parmatch/cost.hpp"
#include "parmatch/matrix.hpp"

namespace parmatch {

// Nonnegative coupling between two populations. Row sums are bounded by
// 1/Nx, column sums by 1/Ny; the total transported mass is s in [0, 1]
// (s = 1 for balanced plans, where the bounds hold with equality).
class TransportPlan {
 public:
  TransportPlan(Eigen::MatrixXd entries, double objective);

  const Eigen::MatrixXd& entries() const { return entries_; }
  double source_marginal_cap() const { return 1.0 / static_cast<double>(entries_.rows()); }
  double target_marginal_cap() const { return 1.0 / static_cast<double>(entries_.cols()); }
  double total_mass() const { return total_mass_; }
  double objective() const { return objective_; }

  Eigen::VectorXd row_sums() const { return entries_.rowwise().sum(); }
  Eigen::VectorXd col_sums() const { return entries_.colwise().sum().transpose(); }

  // Throws NumericalError when balanced marginal equalities are violated.
  void require_balanced() const;

 private:
  Eigen::MatrixXd entries_;
  double total_mass_;
  double objective_;
};

struct SolverStats {
  long iterations = 0;
  double wall_seconds = 0.0;
  // Partial solves snap s to a rational with bounded denominator; balanced
  // solves report 1/1.
  double requested_mass = 1.0;
  double used_mass = 1.0;
  std::int64_t mass_numerator = 1;
  std::int64_t mass_denominator = 1;
};

struct SolveResult {
  TransportPlan plan;
  double objective = 0.0;  // <C, T>_F
  double distance = 0.0;   // sqrt(objective); a metric for squared-Euclidean cost
  // Optimality certificate: dual_source[i] + dual_target[j] <= C_ij for all
  // (i, j), with equality wherever the plan is positive. For partial solves
  // these are the duals of the dummy-augmented problem restricted to the
  // real units.
  std::vector<double> dual_source;
  std::vector<double> dual_target;
  SolverStats stats;
};

// Globally optimal balanced transport: row sums exactly 1/Nx, column sums
// exactly 1/Ny. Exact (integral flows inside), never entropic.
SolveResult solve_balanced(const CostMatrix& c);

// sqrt of the optimal balanced objective for the chosen cost kind. Cosine
// cost centers and normalizes the inputs first.
double soft_matching_distance(const TuningMatrix& x, const TuningMatrix& y, CostKind kind);

}  // namespace parmatch
