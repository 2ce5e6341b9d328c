#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace otlab {

// Primal network simplex for the balanced transportation problem
//
//     min sum_ij c(i,j) x_ij
//     s.t. sum_j x_ij = supply_i,  sum_i x_ij = demand_j,  x >= 0,
//
// on the dense bipartite graph. Arcs are implicit (costs come from a
// functor), so memory stays O(sources + targets) and instances of a few
// thousand atoms per side remain tractable.
//
// The basis is a spanning tree over sources, targets and an artificial root.
// Entering arcs are picked by a deterministic cyclic block search (most
// negative reduced cost within the current block); the leaving arc is the
// last blocking arc along the pivot cycle starting from its apex, which keeps
// the basis strongly feasible and the method finite under degeneracy.
class TransportSimplex {
  public:
    struct Flow {
        int i, j;
        double mass;
    };

    struct Result {
        std::vector<Flow> flows;          // strictly positive basic flows
        std::vector<double> pot_source;   // duals phi, psi with
        std::vector<double> pot_target;   //   phi_i - psi_j <= c_ij, equality on basics
        double value = 0.0;
        std::int64_t pivots = 0;
    };

    TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                     std::function<double(int, int)> cost);

    // rel_tol is the relative optimality tolerance on reduced costs.
    // Throws Infeasible on a supply/demand mismatch, NumericFailure if the
    // pivot budget is exhausted.
    Result solve(double rel_tol = 1e-10);

  private:
    int node_of_source(int i) const { return i; }
    int node_of_target(int j) const { return m_ + j; }

    double arc_cost(std::int64_t arc) const;
    int arc_tail(std::int64_t arc) const;  // arc direction tail -> head
    int arc_head(std::int64_t arc) const;

    void attach_subtree(int attach, int new_parent, std::int64_t arc, double flow);
    void refresh_subtree(int start);

    int m_ = 0, n_ = 0, root_ = 0;
    std::int64_t real_arcs_ = 0;
    double art_cost_ = 0.0;
    std::vector<double> supply_, demand_;
    std::function<double(int, int)> cost_;

    // tree state, indexed by node
    std::vector<int> parent_;
    std::vector<std::int64_t> parent_arc_;
    std::vector<char> arc_up_;   // parent arc oriented node -> parent
    std::vector<double> flow_;   // flow on the parent arc, in arc direction
    std::vector<double> pi_;
    std::vector<int> depth_;
    std::vector<std::vector<int>> children_;
};

}  // namespace otlab
