#include "parmatch/transport_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parmatch/errors.hpp"

namespace parmatch::detail {

namespace {

constexpr double kPivotTolRel = 1e-11;

class Simplex {
 public:
  Simplex(int ns, int nt, const double* cost, std::span<const std::int64_t> supply,
          std::span<const std::int64_t> demand)
      : ns_(ns),
        nt_(nt),
        cost_(cost),
        num_nodes_(ns + nt + 1),
        root_(ns + nt),
        num_real_arcs_(static_cast<long>(ns) * nt),
        num_arcs_(num_real_arcs_ + ns + nt) {
    std::int64_t total_supply = 0, total_demand = 0;
    for (int i = 0; i < ns_; ++i) {
      if (supply[i] < 0) throw NumericalError("negative supply");
      total_supply += supply[i];
    }
    for (int j = 0; j < nt_; ++j) {
      if (demand[j] < 0) throw NumericalError("negative demand");
      total_demand += demand[j];
    }
    if (total_supply != total_demand) {
      throw NumericalError("supply/demand imbalance: " + std::to_string(total_supply) + " vs " +
                           std::to_string(total_demand));
    }

    double max_abs = 0.0;
    for (long a = 0; a < num_real_arcs_; ++a) max_abs = std::max(max_abs, std::abs(cost_[a]));
    art_cost_ = max_abs + 1.0;
    tol_ = kPivotTolRel * (1.0 + max_abs);

    flow_.assign(static_cast<std::size_t>(num_arcs_), 0);
    in_tree_.assign(static_cast<std::size_t>(num_arcs_), 0);
    parent_.assign(static_cast<std::size_t>(num_nodes_), -1);
    pred_arc_.assign(static_cast<std::size_t>(num_nodes_), -1);
    depth_.assign(static_cast<std::size_t>(num_nodes_), 0);
    pi_.assign(static_cast<std::size_t>(num_nodes_), 0.0);
    art_toward_root_.assign(static_cast<std::size_t>(ns_ + nt_), 0);
    kid_count_.assign(static_cast<std::size_t>(num_nodes_) + 1, 0);
    kid_list_.assign(static_cast<std::size_t>(num_nodes_), 0);
    dfs_stack_.reserve(static_cast<std::size_t>(num_nodes_));

    // Initial basis: star of artificial arcs through the root. A node with
    // nonnegative balance points toward the root, which keeps the tree
    // strongly feasible together with the leaving-arc rule below.
    for (int v = 0; v < ns_ + nt_; ++v) {
      const std::int64_t balance = v < ns_ ? supply[v] : -demand[v - ns_];
      art_toward_root_[static_cast<std::size_t>(v)] = balance >= 0 ? 1 : 0;
      const long arc = num_real_arcs_ + v;
      flow_[static_cast<std::size_t>(arc)] = balance >= 0 ? balance : -balance;
      in_tree_[static_cast<std::size_t>(arc)] = 1;
      parent_[static_cast<std::size_t>(v)] = root_;
      pred_arc_[static_cast<std::size_t>(v)] = arc;
    }
    block_size_ = std::max<long>(64, static_cast<long>(std::sqrt(static_cast<double>(num_arcs_))));
    refresh_potentials();
  }

  TransportSolution run() {
    const long pivot_limit = 1000 + 200 * num_arcs_;
    long pivots = 0;
    long entering;
    while ((entering = find_entering_arc()) >= 0) {
      if (++pivots > pivot_limit) {
        throw NumericalError("pivot limit exceeded; solver is cycling");
      }
      pivot(entering);
      refresh_potentials();
    }
    check_flows();
    TransportSolution out;
    out.flow.assign(flow_.begin(), flow_.begin() + num_real_arcs_);
    out.dual_source.resize(static_cast<std::size_t>(ns_));
    out.dual_target.resize(static_cast<std::size_t>(nt_));
    for (int i = 0; i < ns_; ++i) out.dual_source[static_cast<std::size_t>(i)] = -pi_[static_cast<std::size_t>(i)];
    for (int j = 0; j < nt_; ++j) out.dual_target[static_cast<std::size_t>(j)] = pi_[static_cast<std::size_t>(ns_ + j)];
    out.pivots = pivots;
    return out;
  }

 private:
  int arc_from(long a) const {
    if (a < num_real_arcs_) return static_cast<int>(a / nt_);
    const int v = static_cast<int>(a - num_real_arcs_);
    return art_toward_root_[static_cast<std::size_t>(v)] ? v : root_;
  }

  int arc_to(long a) const {
    if (a < num_real_arcs_) return ns_ + static_cast<int>(a % nt_);
    const int v = static_cast<int>(a - num_real_arcs_);
    return art_toward_root_[static_cast<std::size_t>(v)] ? root_ : v;
  }

  double arc_cost(long a) const { return a < num_real_arcs_ ? cost_[a] : art_cost_; }

  double reduced_cost(long a) const {
    return arc_cost(a) + pi_[static_cast<std::size_t>(arc_from(a))] -
           pi_[static_cast<std::size_t>(arc_to(a))];
  }

  long find_entering_arc() {
    long best_arc = -1;
    double best = -tol_;
    long a = next_arc_;
    long in_block = 0;
    for (long scanned = 0; scanned < num_arcs_; ++scanned) {
      if (!in_tree_[static_cast<std::size_t>(a)]) {
        const double rc = reduced_cost(a);
        if (rc < best) {
          best = rc;
          best_arc = a;
        }
      }
      if (++a == num_arcs_) a = 0;
      if (++in_block == block_size_) {
        in_block = 0;
        if (best_arc >= 0) break;
      }
    }
    next_arc_ = a;
    return best_arc;
  }

  void pivot(long entering) {
    const int u = arc_from(entering);
    const int w = arc_to(entering);

    // Join = lowest common ancestor of the entering arc's endpoints.
    int a = u, b = w;
    while (depth_[static_cast<std::size_t>(a)] > depth_[static_cast<std::size_t>(b)])
      a = parent_[static_cast<std::size_t>(a)];
    while (depth_[static_cast<std::size_t>(b)] > depth_[static_cast<std::size_t>(a)])
      b = parent_[static_cast<std::size_t>(b)];
    while (a != b) {
      a = parent_[static_cast<std::size_t>(a)];
      b = parent_[static_cast<std::size_t>(b)];
    }
    const int join = a;

    // Pushing t units along the entering arc sends t back from w to u through
    // the tree. Arcs traversed against their direction lose flow and bound t.
    // Tie-breaking (strict < on the u side, <= on the w side) keeps the tree
    // strongly feasible, which rules out cycling.
    std::int64_t delta = std::numeric_limits<std::int64_t>::max();
    int u_out = -1;
    int side = 0;
    for (int x = u; x != join; x = parent_[static_cast<std::size_t>(x)]) {
      const long pa = pred_arc_[static_cast<std::size_t>(x)];
      if (arc_from(pa) == x) {  // points x -> parent: loses flow
        const std::int64_t d = flow_[static_cast<std::size_t>(pa)];
        if (d < delta) {
          delta = d;
          u_out = x;
          side = 1;
        }
      }
    }
    for (int x = w; x != join; x = parent_[static_cast<std::size_t>(x)]) {
      const long pa = pred_arc_[static_cast<std::size_t>(x)];
      if (arc_from(pa) != x) {  // points parent -> x: loses flow
        const std::int64_t d = flow_[static_cast<std::size_t>(pa)];
        if (d <= delta) {
          delta = d;
          u_out = x;
          side = 2;
        }
      }
    }
    if (u_out < 0) throw NumericalError("unbounded pivot cycle");

    if (delta > 0) {
      flow_[static_cast<std::size_t>(entering)] += delta;
      for (int x = u; x != join; x = parent_[static_cast<std::size_t>(x)]) {
        const long pa = pred_arc_[static_cast<std::size_t>(x)];
        flow_[static_cast<std::size_t>(pa)] += arc_from(pa) == x ? -delta : delta;
      }
      for (int x = w; x != join; x = parent_[static_cast<std::size_t>(x)]) {
        const long pa = pred_arc_[static_cast<std::size_t>(x)];
        flow_[static_cast<std::size_t>(pa)] += arc_from(pa) == x ? delta : -delta;
      }
    }

    const long leaving = pred_arc_[static_cast<std::size_t>(u_out)];
    if (flow_[static_cast<std::size_t>(leaving)] != 0) {
      throw NumericalError("leaving arc retains flow");
    }
    in_tree_[static_cast<std::size_t>(leaving)] = 0;
    in_tree_[static_cast<std::size_t>(entering)] = 1;

    // Reattach the cut subtree: reverse parent pointers from the entering
    // arc's endpoint inside it up to u_out.
    const int new_root = side == 1 ? u : w;
    const int attach = side == 1 ? w : u;
    int x = new_root;
    int old_parent = parent_[static_cast<std::size_t>(x)];
    long old_arc = pred_arc_[static_cast<std::size_t>(x)];
    parent_[static_cast<std::size_t>(x)] = attach;
    pred_arc_[static_cast<std::size_t>(x)] = entering;
    while (x != u_out) {
      const int next_parent = parent_[static_cast<std::size_t>(old_parent)];
      const long next_arc = pred_arc_[static_cast<std::size_t>(old_parent)];
      parent_[static_cast<std::size_t>(old_parent)] = x;
      pred_arc_[static_cast<std::size_t>(old_parent)] = old_arc;
      x = old_parent;
      old_parent = next_parent;
      old_arc = next_arc;
    }
  }

  // Rebuild depths and potentials from the tree in one pass. Tree arcs have
  // zero reduced cost: c + pi[from] - pi[to] = 0.
  void refresh_potentials() {
    std::fill(kid_count_.begin(), kid_count_.end(), 0);
    for (int v = 0; v < num_nodes_; ++v) {
      if (v != root_) ++kid_count_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)]) + 1];
    }
    for (int v = 0; v < num_nodes_; ++v) kid_count_[static_cast<std::size_t>(v) + 1] += kid_count_[static_cast<std::size_t>(v)];
    for (int v = 0; v < num_nodes_; ++v) {
      if (v != root_) {
        const int p = parent_[static_cast<std::size_t>(v)];
        kid_list_[static_cast<std::size_t>(kid_count_[static_cast<std::size_t>(p)]++)] = v;
      }
    }
    for (int v = num_nodes_; v > 0; --v) kid_count_[static_cast<std::size_t>(v)] = kid_count_[static_cast<std::size_t>(v - 1)];
    kid_count_[0] = 0;

    pi_[static_cast<std::size_t>(root_)] = 0.0;
    depth_[static_cast<std::size_t>(root_)] = 0;
    dfs_stack_.clear();
    dfs_stack_.push_back(root_);
    int visited = 0;
    while (!dfs_stack_.empty()) {
      const int p = dfs_stack_.back();
      dfs_stack_.pop_back();
      ++visited;
      for (long k = kid_count_[static_cast<std::size_t>(p)]; k < kid_count_[static_cast<std::size_t>(p) + 1]; ++k) {
        const int v = kid_list_[static_cast<std::size_t>(k)];
        const long pa = pred_arc_[static_cast<std::size_t>(v)];
        const double c = arc_cost(pa);
        pi_[static_cast<std::size_t>(v)] = arc_from(pa) == v
                                               ? pi_[static_cast<std::size_t>(p)] - c
                                               : pi_[static_cast<std::size_t>(p)] + c;
        depth_[static_cast<std::size_t>(v)] = depth_[static_cast<std::size_t>(p)] + 1;
        dfs_stack_.push_back(v);
      }
    }
    if (visited != num_nodes_) throw NumericalError("basis tree is disconnected");
  }

  // Flows start feasible and every augment conserves them, so the substantive
  // exit check is that no artificial arc still carries flow.
  void check_flows() const {
    for (long a = num_real_arcs_; a < num_arcs_; ++a) {
      if (flow_[static_cast<std::size_t>(a)] != 0) {
        throw NumericalError("artificial arc carries flow at optimum");
      }
    }
    for (long a = 0; a < num_arcs_; ++a) {
      if (flow_[static_cast<std::size_t>(a)] < 0) throw NumericalError("negative flow");
      if (!in_tree_[static_cast<std::size_t>(a)] && flow_[static_cast<std::size_t>(a)] != 0) {
        throw NumericalError("nonbasic arc carries flow");
      }
    }
  }

  const int ns_, nt_;
  const double* cost_;
  const int num_nodes_;
  const int root_;
  const long num_real_arcs_;
  const long num_arcs_;

  double art_cost_ = 0.0;
  double tol_ = 0.0;
  long block_size_ = 64;
  long next_arc_ = 0;

  std::vector<std::int64_t> flow_;
  std::vector<char> in_tree_;
  std::vector<char> art_toward_root_;
  std::vector<int> parent_;
  std::vector<long> pred_arc_;
  std::vector<int> depth_;
  std::vector<double> pi_;
  std::vector<long> kid_count_;
  std::vector<int> kid_list_;
  std::vector<int> dfs_stack_;
};

}  // namespace

TransportSolution solve_transportation(int ns, int nt, const double* cost,
                                       std::span<const std::int64_t> supply,
                                       std::span<const std::int64_t> demand) {
  if (ns < 1 || nt < 1) throw NumericalError("empty transportation problem");
  Simplex simplex(ns, nt, cost, supply, demand);
  return simplex.run();
}

}  // namespace parmatch::detail
