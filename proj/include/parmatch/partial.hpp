#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "parmatch/cost.hpp"
#include "parmatch/solver.hpp"

namespace parmatch {

// Fraction of the total unit mass that must be matched; the method's single
// regularization hyperparameter.
class MassFraction {
 public:
  explicit MassFraction(double value);
  double value() const { return value_; }

 private:
  double value_;
};

// Balanced reformulation of the partial problem: one dummy source row and one
// dummy target column absorb the unmatched mass. Transport to a dummy is
// free (xi = 0); the dummy-to-dummy cell is priced so it never carries flow
// at an optimum.
struct AugmentedProblem {
  Eigen::MatrixXd cost_aug;           // (Nx+1) x (Ny+1)
  double dummy_cost = 0.0;            // xi
  double dummy_penalty = 0.0;         // A > 2*xi + max entry of C
  std::vector<double> source_masses;  // 1/Nx repeated Nx times, then 1 - s
  std::vector<double> target_masses;  // 1/Ny repeated Ny times, then 1 - s
};

AugmentedProblem make_augmented(const CostMatrix& c, MassFraction s);

// Exact minimizer over couplings with row sums <= 1/Nx, column sums <= 1/Ny
// and total mass s. The objective counts real-to-real transport only, and the
// returned plan is the stripped Nx x Ny block. s = 1 reproduces
// solve_balanced.
SolveResult solve_partial(const CostMatrix& c, MassFraction s);

// Default mass threshold below which a unit counts as unmatched.
inline constexpr double kDefaultMassThreshold = 1e-6;

struct MatchSets {
  std::vector<int> kept_source;       // {i : row mass >= tau}
  std::vector<int> kept_target;       // {j : column mass >= tau}
  std::vector<double> mass_source;    // r_i, length Nx
  std::vector<double> mass_target;    // c_j, length Ny
};

MatchSets extract_matches(const TransportPlan& plan, double tau = kDefaultMassThreshold);

namespace detail {

// Nearest rational p/q with 1 <= q <= max_denominator (continued fractions).
std::pair<std::int64_t, std::int64_t> snap_to_rational(double value,
                                                       std::int64_t max_denominator = 1000000);

}  // namespace detail

}  // namespace parmatch
