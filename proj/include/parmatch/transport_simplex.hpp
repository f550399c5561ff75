#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace parmatch::detail {

// Exact solution of a dense transportation problem:
//
//   min sum_ij c_ij f_ij
//   s.t. sum_j f_ij = supply_i,  sum_i f_ij = demand_j,  f_ij >= 0,
//
// with integral supplies/demands (sum of supplies == sum of demands) and
// floating-point costs. Flows are kept integral throughout, so feasibility
// is exact; optimality is certified by the returned dual potentials, which
// satisfy u_i + v_j <= c_ij + tol on all cells and u_i + v_j = c_ij on every
// cell with positive flow (tol is a small multiple of the cost scale).
struct TransportSolution {
  std::vector<std::int64_t> flow;  // row-major ns x nt
  std::vector<double> dual_source;
  std::vector<double> dual_target;
  long pivots = 0;
};

// Primal network simplex on the bipartite graph with an artificial root,
// strongly feasible spanning trees, and block pivoting. Deterministic.
// Throws NumericalError when internal consistency checks fail.
TransportSolution solve_transportation(int ns, int nt, const double* cost,
                                       std::span<const std::int64_t> supply,
                                       std::span<const std::int64_t> demand);

}  // namespace parmatch::detail
