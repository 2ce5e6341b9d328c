#pragma once

#include <cstdint>
#include <vector>

#include "otlab/cost.hpp"
#include "otlab/geometry.hpp"
#include "otlab/measure.hpp"

namespace otlab {

struct PlanEntry {
    int i = 0;           // source atom index
    int j = 0;           // target atom index
    double mass = 0.0;   // strictly positive; zero entries are omitted

    bool operator==(const PlanEntry&) const = default;
};

// Sparse coupling between two atom measures. Row sums must reproduce the
// source masses and column sums the target masses within 1e-9 relative.
struct TransportPlan {
    std::vector<PlanEntry> entries;
    std::uint64_t source_ref = 0;  // measure_id of the coupled measures
    std::uint64_t target_ref = 0;
    CostSpec cost;                 // cost the plan was optimized for
    double value = 0.0;            // plan cost under `cost`

    double total_mass() const;
};

// Dual values for the transportation LP, stored with the atom positions so
// the potential extends off the atom set. For the distance cost the pooled
// function u (u_source on sources, u_target on targets) is 1-Lipschitz and
// saturates u(x) - u(y) = |x - y| on every plan entry.
struct KantorovichPotential {
    std::vector<double> u_source;
    std::vector<double> u_target;
    std::vector<Vec> source_points;
    std::vector<Vec> target_points;

    // Inf-convolution against the target values: min_j u_target[j] + |p - y_j|.
    // Agrees with the stored values on the atoms and is 1-Lipschitz everywhere.
    double evaluate(const Vec& p) const;
};

// Recomputes the plan's cost integral from its entries.
double plan_integral(const TransportPlan& plan, const std::vector<Atom>& src,
                     const std::vector<Atom>& tgt, const CostSpec& spec);

// Worst relative marginal violation of the plan against the two measures.
double marginal_violation(const TransportPlan& plan, const std::vector<Atom>& src,
                          const std::vector<Atom>& tgt);

}  // namespace otlab
