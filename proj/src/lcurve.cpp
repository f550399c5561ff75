#include "parmatch/lcurve.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "parmatch/parallel.hpp"

namespace parmatch {

namespace {

constexpr double kZetaMonotoneTol = 1e-9;
constexpr double kFlatCurveRel = 1e-3;

void validate_grid(std::span<const double> grid) {
  if (grid.size() < 3) {
    throw GridError("grid needs at least 3 points, got " + std::to_string(grid.size()));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
      throw GridError("grid value out of [0, 1] at index " + std::to_string(i));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw GridError("grid must be strictly ascending at index " + std::to_string(i));
    }
  }
}

}  // namespace

LCurve LCurve::from_values(std::vector<double> grid, std::vector<double> zeta) {
  validate_grid(grid);
  if (zeta.size() != grid.size()) {
    throw GridError("zeta length " + std::to_string(zeta.size()) + " does not match grid length " +
                    std::to_string(grid.size()));
  }
  for (std::size_t i = 1; i < zeta.size(); ++i) {
    if (zeta[i] < zeta[i - 1] - kZetaMonotoneTol) {
      throw NumericalError("zeta decreases along ascending grid at index " + std::to_string(i));
    }
  }
  LCurve lc;
  lc.grid_ = std::move(grid);
  lc.zeta_ = std::move(zeta);
  lc.rho_.resize(lc.grid_.size());
  for (std::size_t i = 0; i < lc.grid_.size(); ++i) lc.rho_[i] = 1.0 - lc.grid_[i];
  lc.curvature_.resize(lc.grid_.size() - 2);
  for (std::size_t i = 1; i + 1 < lc.zeta_.size(); ++i) {
    lc.curvature_[i - 1] = lc.zeta_[i + 1] - 2.0 * lc.zeta_[i] + lc.zeta_[i - 1];
  }
  return lc;
}

bool LCurve::uniform_grid(double tol) const {
  const double step = grid_[1] - grid_[0];
  for (std::size_t i = 2; i < grid_.size(); ++i) {
    if (std::abs((grid_[i] - grid_[i - 1]) - step) > tol) return false;
  }
  return true;
}

void LCurve::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IOError("cannot write " + path.string());
  out << "s,zeta,rho,curvature\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    out << fmt(grid_[i]) << ',' << fmt(zeta_[i]) << ',' << fmt(rho_[i]) << ',';
    if (i >= 1 && i + 1 < grid_.size()) out << fmt(curvature_[i - 1]);
    out << '\n';
  }
  if (!out) throw IOError("write failed: " + path.string());
}

LCurve sweep(const CostMatrix& c, std::span<const double> grid, int threads) {
  validate_grid(grid);
  std::vector<double> zeta(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    zeta[i] = solve_partial(c, MassFraction(grid[i])).objective;
  });
  return LCurve::from_values(std::vector<double>(grid.begin(), grid.end()), std::move(zeta));
}

ElbowResult find_elbow(const LCurve& lc) {
  if (!lc.uniform_grid()) {
    throw GridError("elbow selection requires a uniform grid");
  }
  const auto& curv = lc.curvature();
  // >= while scanning upward: ties resolve to the largest s (least
  // aggressive regularization).
  std::size_t best = 0;
  for (std::size_t i = 1; i < curv.size(); ++i) {
    if (std::abs(curv[i]) >= std::abs(curv[best])) best = i;
  }
  const int i_star = static_cast<int>(best) + 1;  // grid index of the elbow

  ElbowResult result{MassFraction(lc.grid()[static_cast<std::size_t>(i_star)]), i_star,
                     curv[best], ElbowDiagnostics{}};
  result.diagnostics.tail_elbow_warning = best == 0 || best + 1 == curv.size();
  const double zeta_range = lc.zeta().back() - lc.zeta().front();
  double max_abs = 0.0;
  for (double v : curv) max_abs = std::max(max_abs, std::abs(v));
  result.diagnostics.flat_curve_warning = max_abs < kFlatCurveRel * (zeta_range + 1e-12);
  result.diagnostics.ok =
      !result.diagnostics.tail_elbow_warning && !result.diagnostics.flat_curve_warning;
  return result;
}

double auc_score(const LCurve& lc) {
  double area = 0.0;
  for (std::size_t i = 1; i < lc.size(); ++i) {
    const double width = std::abs(lc.rho()[i] - lc.rho()[i - 1]);
    area += 0.5 * (lc.zeta()[i] + lc.zeta()[i - 1]) * width;
  }
  return area;
}

std::vector<double> default_mass_grid() {
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i) grid[static_cast<std::size_t>(i)] = 0.05 * (i + 1);
  grid.back() = 1.0;
  return grid;
}

}  // namespace parmatch
