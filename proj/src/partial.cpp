#include "parmatch/partial.hpp"

#include <chrono>
#include <cmath>

#include "parmatch/transport_simplex.hpp"

namespace parmatch {

namespace {

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

MassFraction::MassFraction(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw MassOutOfRange("mass fraction must satisfy 0 <= s <= 1, got " + std::to_string(value));
  }
}

namespace detail {

std::pair<std::int64_t, std::int64_t> snap_to_rational(double value,
                                                       std::int64_t max_denominator) {
  if (max_denominator < 1) max_denominator = 1;
  if (!(value >= 0.0)) return {0, 1};

  std::int64_t p0 = 0, q0 = 1;  // previous convergent
  std::int64_t p1 = 1, q1 = 0;  // formal 1/0
  double x = value;
  bool truncated = false;
  while (true) {
    const double fa = std::floor(x);
    if (fa > 9.0e15) break;
    const std::int64_t a = static_cast<std::int64_t>(fa);
    if (q1 > 0 && a > (max_denominator - q0) / q1) {
      truncated = true;
      break;
    }
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = x - fa;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }

  if (!truncated) return {p1, q1};

  // Best semiconvergent that still fits the denominator bound.
  const std::int64_t t = (max_denominator - q0) / q1;
  const std::int64_t ps = p0 + t * p1;
  const std::int64_t qs = q0 + t * q1;
  const double err_conv = std::abs(value - static_cast<double>(p1) / static_cast<double>(q1));
  const double err_semi =
      t >= 1 ? std::abs(value - static_cast<double>(ps) / static_cast<double>(qs)) : err_conv + 1.0;
  if (err_semi < err_conv) return {ps, qs};
  return {p1, q1};
}

}  // namespace detail

AugmentedProblem make_augmented(const CostMatrix& c, MassFraction s) {
  const Eigen::Index nx = c.source_count();
  const Eigen::Index ny = c.target_count();
  AugmentedProblem aug;
  aug.dummy_cost = 0.0;
  aug.dummy_penalty = 2.0 * c.max_entry() + 1.0;
  aug.cost_aug.resize(nx + 1, ny + 1);
  aug.cost_aug.topLeftCorner(nx, ny) = c.data();
  aug.cost_aug.col(ny).setConstant(aug.dummy_cost);
  aug.cost_aug.row(nx).setConstant(aug.dummy_cost);
  aug.cost_aug(nx, ny) = aug.dummy_penalty;
  aug.source_masses.assign(static_cast<std::size_t>(nx), 1.0 / static_cast<double>(nx));
  aug.source_masses.push_back(1.0 - s.value());
  aug.target_masses.assign(static_cast<std::size_t>(ny), 1.0 / static_cast<double>(ny));
  aug.target_masses.push_back(1.0 - s.value());
  return aug;
}

SolveResult solve_partial(const CostMatrix& c, MassFraction s) {
  const auto t0 = std::chrono::steady_clock::now();
  const int nx = static_cast<int>(c.source_count());
  const int ny = static_cast<int>(c.target_count());

  const auto [num, den] = detail::snap_to_rational(s.value());
  const double used_mass = static_cast<double>(num) / static_cast<double>(den);

  AugmentedProblem aug = make_augmented(c, s);

  // Scale by Nx*Ny*den so every marginal (including the dummies' 1 - s) is
  // integral.
  const std::int64_t unit = static_cast<std::int64_t>(nx) * ny;
  const std::int64_t scale = unit * den;
  std::vector<std::int64_t> supply(static_cast<std::size_t>(nx) + 1,
                                   static_cast<std::int64_t>(ny) * den);
  supply.back() = unit * (den - num);
  std::vector<std::int64_t> demand(static_cast<std::size_t>(ny) + 1,
                                   static_cast<std::int64_t>(nx) * den);
  demand.back() = unit * (den - num);

  const int ns = nx + 1;
  const int nt = ny + 1;
  std::vector<double> cost_flat(static_cast<std::size_t>(ns) * nt);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j)
      cost_flat[static_cast<std::size_t>(i) * nt + j] = aug.cost_aug(i, j);

  detail::TransportSolution sol =
      detail::solve_transportation(ns, nt, cost_flat.data(), supply, demand);

  // Strip the dummy row/column; the reported objective counts real-to-real
  // transport only (free disposal to the dummies contributes nothing).
  Eigen::MatrixXd entries(nx, ny);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      entries(i, j) = static_cast<double>(sol.flow[static_cast<std::size_t>(i) * nt + j]) /
                      static_cast<double>(scale);

  const double objective = frobenius_dot(c.data(), entries);
  TransportPlan plan(std::move(entries), objective);
  if (std::abs(plan.total_mass() - used_mass) > 1e-9) {
    throw NumericalError("partial plan mass " + std::to_string(plan.total_mass()) +
                         " deviates from requested " + std::to_string(used_mass));
  }

  SolveResult result{std::move(plan), objective, std::sqrt(objective),
                     std::move(sol.dual_source), std::move(sol.dual_target), SolverStats{}};
  result.dual_source.resize(static_cast<std::size_t>(nx));
  result.dual_target.resize(static_cast<std::size_t>(ny));
  result.stats.iterations = sol.pivots;
  result.stats.requested_mass = s.value();
  result.stats.used_mass = used_mass;
  result.stats.mass_numerator = num;
  result.stats.mass_denominator = den;
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

MatchSets extract_matches(const TransportPlan& plan, double tau) {
  if (!(tau > 0.0)) throw Error("match threshold tau must be positive");
  MatchSets sets;
  const Eigen::VectorXd r = plan.row_sums();
  const Eigen::VectorXd c = plan.col_sums();
  sets.mass_source.assign(r.data(), r.data() + r.size());
  sets.mass_target.assign(c.data(), c.data() + c.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (r(i) >= tau) sets.kept_source.push_back(static_cast<int>(i));
  }
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    if (c(j) >= tau) sets.kept_target.push_back(static_cast<int>(j));
  }
  return sets;
}

}  // namespace parmatch
