#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "parmatch/partial.hpp"

namespace parmatch {

// Sampled regularization path: zeta(s) is the optimal partial transport cost
// at mass fraction s, rho(s) = 1 - s the regularization strength, and
// curvature the centered second difference of zeta over the interior points.
class LCurve {
 public:
  static LCurve from_values(std::vector<double> grid, std::vector<double> zeta);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& zeta() const { return zeta_; }
  const std::vector<double>& rho() const { return rho_; }
  const std::vector<double>& curvature() const { return curvature_; }
  std::size_t size() const { return grid_.size(); }

  bool uniform_grid(double tol = 1e-9) const;

  // CSV with columns s,zeta,rho,curvature (curvature blank at the endpoints).
  void save_csv(const std::filesystem::path& path) const;

 private:
  LCurve() = default;
  std::vector<double> grid_, zeta_, rho_, curvature_;
};

struct ElbowDiagnostics {
  bool ok = true;
  bool tail_elbow_warning = false;
  bool flat_curve_warning = false;
};

struct ElbowResult {
  MassFraction s0;
  int index = 0;  // 0-based grid index; always interior (1 <= index <= N-2)
  double curvature_at_elbow = 0.0;  // signed second difference at the elbow
  ElbowDiagnostics diagnostics;
};

// Solve at every grid point. Grid must be strictly ascending, length >= 3,
// within [0, 1]. Solves are independent and may be dispatched across
// threads; results are identical regardless of thread count.
LCurve sweep(const CostMatrix& c, std::span<const double> grid, int threads = 1);

// Interior index with maximal |second difference|; ties pick the largest s.
// Requires a uniform grid. Warnings: tail_elbow_warning when the argmax sits
// at the first or last interior point, flat_curve_warning when the curvature
// is uniformly small relative to the zeta range.
ElbowResult find_elbow(const LCurve& lc);

// Trapezoidal area of zeta against rho; lower means better alignment across
// regularization strengths. Any ascending grid is accepted.
double auc_score(const LCurve& lc);

// 20 uniform points 0.05, 0.10, ..., 1.00.
std::vector<double> default_mass_grid();

}  // namespace parmatch
