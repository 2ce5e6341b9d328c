#pragma once

#include <utility>

#include "otlab/cost.hpp"
#include "otlab/measure.hpp"
#include "otlab/plan.hpp"

namespace otlab {

struct SolveResult {
    TransportPlan plan;
    KantorovichPotential potential;
    double dual_value = 0.0;
    std::int64_t pivots = 0;
};

// Exact discrete Monge-Kantorovich solve between two atom measures (grids are
// converted to cell-center atoms first). The plan is an optimal vertex of the
// transportation polytope; the potential holds duals normalized to vanish at
// the first source atom, satisfying u(x_i) - u(y_j) <= c_ij with equality on
// every plan entry. For the distance cost the pooled potential is in addition
// 1-Lipschitz across all atoms.
//
// beta_restricted costs need `potential`; arcs with infinite cost are
// penalized and the result is rejected (Infeasible) if any survives in the
// optimal plan.
SolveResult solve_exact(const DiscreteMeasure& src, const DiscreteMeasure& tgt,
                        const CostSpec& spec, const KantorovichPotential* potential = nullptr);

// Dimension of the optimal face of the transportation LP, i.e. of the set of
// optimal plans; 0 means the optimum is unique. Computed by enumerating
// basic optimal solutions (spanning forests of the zero-reduced-cost arc
// graph with nonnegative flows) and taking the affine-hull dimension of the
// vertex set. Throws TooLarge beyond 12 atoms per side or when the
// enumeration explodes.
int optimal_face_dimension(const DiscreteMeasure& src, const DiscreteMeasure& tgt,
                           const CostSpec& spec, double tol = 1e-9);

}  // namespace otlab
