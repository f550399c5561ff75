#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parmatch/lcurve.hpp"
#include "parmatch/partial.hpp"

namespace parmatch {

// Outcome of a partial (or balanced, s = 1) match in correlation terms.
struct MatchReport {
  std::vector<int> kept_source;
  std::vector<int> kept_target;
  std::vector<double> unit_mass_source;  // r_i, row sums of the plan
  std::vector<double> unit_mass_target;  // c_j, column sums of the plan
  double s_used = 0.0;
  double objective = 0.0;
  double corr_score_total = 0.0;                 // sum_ij T_ij x_i^T y_j
  std::optional<double> corr_score_mean;         // total / s; absent at s = 0
};

// Matched-correlation score: solves the partial problem under cosine cost,
// which maximizes total matched correlation for fixed transported mass.
MatchReport corr_score(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y,
                       MassFraction s);

enum class RankMethod { brute_force, correlation_baseline, partial_mass_sweep };

std::string to_string(RankMethod method);

// Deletion order from least to most matched, with the alignment score of the
// population remaining after each deletion.
struct RankOrder {
  std::vector<int> order;
  RankMethod method = RankMethod::brute_force;
  std::vector<double> scores_along_deletion;     // matched-correlation score
  std::vector<double> distances_along_deletion;  // sqrt(2 (1 - score))
  bool complexity_warning = false;               // N > 64: O(N^4 log N) loop
};

// Greedy baseline: repeatedly delete the unit (same index in both
// populations) whose removal yields the best remaining alignment. Requires
// Nx = Ny >= 2. Candidate evaluations within one step may run in parallel;
// the selection is a deterministic reduction (ties pick the smallest index).
RankOrder brute_force_rank(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y,
                           int threads = 1);

struct CorrelationSelection {
  std::vector<int> kept_source;
  std::vector<int> kept_target;
  std::vector<double> corr_forward;  // corr(X T cols, Y cols), length Ny
  std::vector<double> corr_reverse;  // corr(X cols, Y T^T cols), length Nx
};

// Correlation baseline: fit one balanced plan T, project each population
// into the other's space, and keep the top-k columns by Pearson correlation
// in each direction.
CorrelationSelection correlation_rank(const NormalizedTuningMatrix& x,
                                      const NormalizedTuningMatrix& y, int k);

struct PartialRankEntry {
  double s = 0.0;
  MatchSets matches;
};

// Kept-unit families over a grid of mass fractions (threshold tau = 1e-6).
std::vector<PartialRankEntry> partial_rank(const NormalizedTuningMatrix& x,
                                           const NormalizedTuningMatrix& y,
                                           std::span<const double> grid, int threads = 1);

struct RotationTestResult {
  double base_score = 0.0;              // corr_score_total without rotation
  std::vector<double> rotated_scores;   // one per trial
};

// Axis-alignment probe: apply a Haar-uniform rotation of stimulus space to
// x (re-centering and re-normalizing afterwards) and rescore. identity_q
// replaces every rotation with the identity (test hook).
RotationTestResult rotation_test(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y,
                                 MassFraction s, int trials, std::uint64_t seed,
                                 bool identity_q = false);

// Fraction of kept units whose label equals their population's designated
// region, pooled over both sides. Throws EmptyMatchError when both kept sets
// are empty.
double match_precision(const std::vector<int>& kept_source, const std::vector<int>& kept_target,
                       const std::vector<std::string>& labels_source,
                       const std::vector<std::string>& labels_target,
                       const std::pair<std::string, std::string>& region_pair);

namespace detail {

// Pearson correlation between two columns; throws DegenerateUnitError when
// either column is constant.
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Total matched correlation of a balanced cosine fit between column subsets;
// 0 for empty subsets.
double balanced_corr_total(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y);

}  // namespace detail

}  // namespace parmatch
