#pragma once

#include <optional>
#include <string>
#include <vector>

#include "otlab/gaussian.hpp"
#include "otlab/measure.hpp"
#include "otlab/plan.hpp"

namespace otlab {

// Built-in instances the CLI and the test suites share.
struct Fixture {
    std::string name;
    DiscreteMeasure src;
    DiscreteMeasure tgt;
    TruncatedGaussian reference;
    std::optional<TransportPlan> plan;  // split-witness carries a hand-built plan
    double shift = 0.0;                 // gaussian-pair translation along axis 0
};

// Uniform masses on {0,1,2,3} -> {1,2,3,4} in one dimension: the distance
// cost is degenerate (many optimal vertices), the selected plan is the
// shift-by-one permutation.
Fixture book_shift();

// src == tgt; the optimal plan under any of the costs is the identity.
Fixture identity_fixture();

// Discretization of the reference Gaussian against a translated copy. The
// translation is along axis 0 and snapped to a whole number of cells so the
// two grids (and every quarter-point interpolant) stay aligned.
Fixture gaussian_pair_grid(int dim, std::size_t cells_per_axis, double half_width_sigmas = 4.0,
                           double shift_sigmas = 1.0);

// Balanced empirical marginals: n_points i.i.d. draws per side, the target
// cloud translated along axis 0.
Fixture gaussian_pair_empirical(int dim, int n_points, std::uint64_t seed,
                                double shift_sigmas = 1.0);

// Two-atom target with one source atom split 50/50: the smallest plan that
// is not induced by a map.
Fixture split_witness();

std::vector<std::string> fixture_names();

// Resolves by name with the given parameters (ignored where not applicable).
Fixture make_fixture(const std::string& name, int dim = 1, std::size_t cells = 64,
                     int n_points = 64, std::uint64_t seed = 1);

}  // namespace otlab
