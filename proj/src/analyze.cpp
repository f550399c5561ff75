#include "parmatch/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parmatch/parallel.hpp"
#include "parmatch/rng.hpp"

namespace parmatch {

namespace {

// Total matched correlation recomputed from actual inner products over the
// plan support (the plan is sparse: at most Nx + Ny basic cells).
double matched_correlation(const Eigen::MatrixXd& xd, const Eigen::MatrixXd& yd,
                           const Eigen::MatrixXd& plan) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < plan.cols(); ++j) {
    for (Eigen::Index i = 0; i < plan.rows(); ++i) {
      const double t = plan(i, j);
      if (t > 0.0) total += t * xd.col(i).dot(yd.col(j));
    }
  }
  return total;
}

void require_shared_stimuli(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y) {
  if (x.stimulus_count() != y.stimulus_count()) {
    throw DimensionMismatch("stimulus counts differ: " + std::to_string(x.stimulus_count()) +
                            " vs " + std::to_string(y.stimulus_count()));
  }
}

std::vector<int> top_k_indices(const std::vector<double>& scores, int k) {
  std::vector<int> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

std::string to_string(RankMethod method) {
  switch (method) {
    case RankMethod::brute_force:
      return "brute_force";
    case RankMethod::correlation_baseline:
      return "correlation_baseline";
    case RankMethod::partial_mass_sweep:
      return "partial_mass_sweep";
  }
  return "unknown";
}

MatchReport corr_score(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y,
                       MassFraction s) {
  require_shared_stimuli(x, y);
  const CostMatrix cost = cosine_cost(x, y);
  const SolveResult solved = solve_partial(cost, s);
  const MatchSets sets = extract_matches(solved.plan);

  MatchReport report;
  report.kept_source = sets.kept_source;
  report.kept_target = sets.kept_target;
  report.unit_mass_source = sets.mass_source;
  report.unit_mass_target = sets.mass_target;
  report.s_used = solved.stats.used_mass;
  report.objective = solved.objective;
  report.corr_score_total = matched_correlation(x.data(), y.data(), solved.plan.entries());
  if (report.s_used > 0.0) {
    report.corr_score_mean = report.corr_score_total / report.s_used;
  }
  return report;
}

namespace detail {

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw DimensionMismatch("pearson inputs differ in length");
  const Eigen::VectorXd ac = a.array() - a.mean();
  const Eigen::VectorXd bc = b.array() - b.mean();
  const double na = ac.norm();
  const double nb = bc.norm();
  if (na <= 1e-12 || nb <= 1e-12) {
    throw DegenerateUnitError("constant column in correlation", {});
  }
  return ac.dot(bc) / (na * nb);
}

double balanced_corr_total(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y) {
  if (x.unit_count() == 0 || y.unit_count() == 0) return 0.0;
  const SolveResult solved = solve_balanced(cosine_cost(x, y));
  return matched_correlation(x.data(), y.data(), solved.plan.entries());
}

}  // namespace detail

RankOrder brute_force_rank(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y,
                           int threads) {
  require_shared_stimuli(x, y);
  if (x.unit_count() != y.unit_count()) {
    throw DimensionMismatch("greedy deletion requires equally sized populations");
  }
  const int n = static_cast<int>(x.unit_count());
  if (n < 2) throw DimensionMismatch("greedy deletion needs at least 2 units");

  RankOrder rank;
  rank.method = RankMethod::brute_force;
  rank.complexity_warning = n > 64;

  std::vector<int> remaining(static_cast<std::size_t>(n));
  std::iota(remaining.begin(), remaining.end(), 0);

  while (!remaining.empty()) {
    std::vector<double> candidate_scores(remaining.size());
    parallel_for(remaining.size(), threads, [&](std::size_t c) {
      std::vector<int> subset;
      subset.reserve(remaining.size() - 1);
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        if (k != c) subset.push_back(remaining[k]);
      }
      if (subset.empty()) {
        candidate_scores[c] = 0.0;
        return;
      }
      candidate_scores[c] =
          detail::balanced_corr_total(x.select_units(subset), y.select_units(subset));
    });

    std::size_t best = 0;
    for (std::size_t c = 1; c < candidate_scores.size(); ++c) {
      if (candidate_scores[c] > candidate_scores[best]) best = c;
    }

    rank.order.push_back(remaining[best]);
    const double score = candidate_scores[best];
    if (remaining.size() == 1) {
      rank.scores_along_deletion.push_back(0.0);
      rank.distances_along_deletion.push_back(0.0);
    } else {
      rank.scores_along_deletion.push_back(score);
      rank.distances_along_deletion.push_back(std::sqrt(std::max(0.0, 2.0 * (1.0 - score))));
    }
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return rank;
}

CorrelationSelection correlation_rank(const NormalizedTuningMatrix& x,
                                      const NormalizedTuningMatrix& y, int k) {
  require_shared_stimuli(x, y);
  const int nx = static_cast<int>(x.unit_count());
  const int ny = static_cast<int>(y.unit_count());
  if (k < 1 || k > std::min(nx, ny)) {
    throw Error("k must satisfy 1 <= k <= min(Nx, Ny), got " + std::to_string(k));
  }

  const SolveResult solved = solve_balanced(cosine_cost(x, y));
  const Eigen::MatrixXd& plan = solved.plan.entries();

  CorrelationSelection sel;
  const Eigen::MatrixXd projected_x = x.data() * plan;  // M x Ny
  sel.corr_forward.resize(static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    try {
      sel.corr_forward[static_cast<std::size_t>(j)] =
          detail::pearson(projected_x.col(j), y.data().col(j));
    } catch (const DegenerateUnitError&) {
      throw DegenerateUnitError("projected source column " + std::to_string(j) + " is constant",
                                {j});
    }
  }
  const Eigen::MatrixXd projected_y = y.data() * plan.transpose();  // M x Nx
  sel.corr_reverse.resize(static_cast<std::size_t>(nx));
  for (int i = 0; i < nx; ++i) {
    try {
      sel.corr_reverse[static_cast<std::size_t>(i)] =
          detail::pearson(x.data().col(i), projected_y.col(i));
    } catch (const DegenerateUnitError&) {
      throw DegenerateUnitError("projected target column " + std::to_string(i) + " is constant",
                                {i});
    }
  }
  sel.kept_target = top_k_indices(sel.corr_forward, k);
  sel.kept_source = top_k_indices(sel.corr_reverse, k);
  return sel;
}

std::vector<PartialRankEntry> partial_rank(const NormalizedTuningMatrix& x,
                                           const NormalizedTuningMatrix& y,
                                           std::span<const double> grid, int threads) {
  require_shared_stimuli(x, y);
  if (grid.empty()) throw GridError("empty mass grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
      throw GridError("grid value out of [0, 1] at index " + std::to_string(i));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw GridError("grid must be strictly ascending at index " + std::to_string(i));
    }
  }
  const CostMatrix cost = cosine_cost(x, y);
  std::vector<PartialRankEntry> entries(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const SolveResult solved = solve_partial(cost, MassFraction(grid[i]));
    entries[i].s = grid[i];
    entries[i].matches = extract_matches(solved.plan);
  });
  return entries;
}

RotationTestResult rotation_test(const NormalizedTuningMatrix& x, const NormalizedTuningMatrix& y,
                                 MassFraction s, int trials, std::uint64_t seed, bool identity_q) {
  require_shared_stimuli(x, y);
  if (trials < 1) throw Error("rotation test needs at least one trial");

  RotationTestResult result;
  result.base_score = corr_score(x, y, s).corr_score_total;
  result.rotated_scores.reserve(static_cast<std::size_t>(trials));

  Rng rng(seed);
  const Eigen::Index m = x.stimulus_count();
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXd q;
    if (identity_q) {
      q = Eigen::MatrixXd::Identity(m, m);
    } else {
      q = haar_orthogonal(rng, m);
    }
    // Rotating stimulus space preserves column norms but not column means,
    // so re-center (and re-normalize) before scoring.
    const TuningMatrix rotated(q * x.data(), std::nullopt);
    const NormalizedTuningMatrix rotated_norm = center_and_normalize(rotated);
    result.rotated_scores.push_back(corr_score(rotated_norm, y, s).corr_score_total);
  }
  return result;
}

double match_precision(const std::vector<int>& kept_source, const std::vector<int>& kept_target,
                       const std::vector<std::string>& labels_source,
                       const std::vector<std::string>& labels_target,
                       const std::pair<std::string, std::string>& region_pair) {
  if (kept_source.empty() && kept_target.empty()) {
    throw EmptyMatchError("both kept sets are empty");
  }
  std::size_t correct = 0;
  for (int i : kept_source) {
    if (i < 0 || static_cast<std::size_t>(i) >= labels_source.size()) {
      throw Error("kept source index " + std::to_string(i) + " has no label");
    }
    if (labels_source[static_cast<std::size_t>(i)] == region_pair.first) ++correct;
  }
  for (int j : kept_target) {
    if (j < 0 || static_cast<std::size_t>(j) >= labels_target.size()) {
      throw Error("kept target index " + std::to_string(j) + " has no label");
    }
    if (labels_target[static_cast<std::size_t>(j)] == region_pair.second) ++correct;
  }
  return static_cast<double>(correct) /
         static_cast<double>(kept_source.size() + kept_target.size());
}

}  // namespace parmatch
