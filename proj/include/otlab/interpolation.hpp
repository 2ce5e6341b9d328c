#pragma once

#include <vector>

#include "otlab/gaussian.hpp"
#include "otlab/measure.hpp"
#include "otlab/plan.hpp"

namespace otlab {

// Pushforward of the plan under (x, y) -> (1-t) x + t y: one atom per plan
// entry, exact duplicates coalesced. t = 0 reproduces the source marginal,
// t = 1 the target marginal.
DiscreteMeasure interpolate(const TransportPlan& plan, const DiscreteMeasure& src,
                            const DiscreteMeasure& tgt, double t);

// Bins an atom measure onto a grid (mass-preserving nearest-cell assignment).
// Throws OutOfBox when support falls outside the grid.
DiscreteMeasure snap_to_grid(const DiscreteMeasure& m, const GridSpec& grid);

struct EntropyReading {
    double ent_gamma = 0.0;          // relative entropy against the reference Gaussian
    double ent_lebesgue = 0.0;       // entropy against cell volume
    double second_moment_half = 0.0; // effective quadratic term (see entropy.hpp)
    int dim = 0;
};

// Displacement interpolation of a plan, with one grid-form measure and one
// entropy reading per t. The grid is the declared snapping grid shared by
// every reading on the path.
struct InterpolationPath {
    TransportPlan plan;
    DiscreteMeasure src, tgt;  // atom forms the plan indexes into
    TruncatedGaussian reference;
    GridSpec grid;
    std::vector<double> ts;
    std::vector<DiscreteMeasure> measures;
    std::vector<EntropyReading> entropies;

    std::size_t index_of(double t) const;  // position of t in ts (1e-12 match)
};

// Builds the path at the given interpolation times (0 and 1 are inserted if
// missing; times are sorted and deduplicated).
InterpolationPath build_path(const TransportPlan& plan, const DiscreteMeasure& src,
                             const DiscreteMeasure& tgt, const TruncatedGaussian& reference,
                             const GridSpec& grid, std::vector<double> ts);

}  // namespace otlab
