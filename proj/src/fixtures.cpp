#include "otlab/fixtures.hpp"

#include <cmath>

#include "otlab/errors.hpp"

namespace otlab {

namespace {

TruncatedGaussian default_reference(int dim) {
    return TruncatedGaussian(build_covariance(1.0, 3.0, 8), dim);
}

}  // namespace

Fixture book_shift() {
    Fixture f;
    f.name = "book-shift";
    std::vector<Atom> src, tgt;
    for (int k = 0; k < 4; ++k) {
        src.push_back({{double(k)}, 0.25});
        tgt.push_back({{double(k + 1)}, 0.25});
    }
    f.src = DiscreteMeasure::from_atoms(std::move(src));
    f.tgt = DiscreteMeasure::from_atoms(std::move(tgt));
    f.reference = default_reference(1);
    return f;
}

Fixture identity_fixture() {
    Fixture f;
    f.name = "identity";
    std::vector<Atom> atoms;
    for (int k = 0; k < 4; ++k) atoms.push_back({{double(k)}, 0.25});
    f.src = DiscreteMeasure::from_atoms(atoms);
    f.tgt = DiscreteMeasure::from_atoms(std::move(atoms));
    f.reference = default_reference(1);
    return f;
}

Fixture gaussian_pair_grid(int dim, std::size_t cells_per_axis, double half_width_sigmas,
                           double shift_sigmas) {
    Fixture f;
    f.name = "gaussian-pair";
    f.reference = default_reference(dim);
    f.src = grid_discretize(f.reference, cells_per_axis, half_width_sigmas);

    // Snap the translation to whole cells of axis 0 so the pair (and the
    // quarter-point interpolants) stay grid-aligned.
    const double cell = (2.0 * half_width_sigmas * f.reference.sigma(0)) / double(cells_per_axis);
    const double want = shift_sigmas * f.reference.sigma(0);
    long cells_shift = std::lround(want / cell);
    cells_shift = (cells_shift / 4) * 4;  // keep t = 1/4 interpolants aligned too
    if (cells_shift < 4) cells_shift = 4;
    f.shift = double(cells_shift) * cell;

    GridSpec shifted = f.src.grid;
    for (double& e : shifted.edges[0]) e += f.shift;
    f.tgt = DiscreteMeasure::from_grid(std::move(shifted), f.src.masses);
    return f;
}

Fixture gaussian_pair_empirical(int dim, int n_points, std::uint64_t seed,
                                double shift_sigmas) {
    Fixture f;
    f.name = "gaussian-pair";
    f.reference = default_reference(dim);
    f.shift = shift_sigmas * f.reference.sigma(0);
    auto src_pts = sample(f.reference, n_points, split_seed(seed, 0));
    auto tgt_pts = sample(f.reference, n_points, split_seed(seed, 1));
    for (auto& p : tgt_pts) p[0] += f.shift;
    f.src = empirical_measure(src_pts);
    f.tgt = empirical_measure(tgt_pts);
    return f;
}

Fixture split_witness() {
    Fixture f;
    f.name = "split-witness";
    f.src = DiscreteMeasure::from_atoms({{{0.0}, 1.0}});
    f.tgt = DiscreteMeasure::from_atoms({{{-1.0}, 0.5}, {{1.0}, 0.5}});
    f.reference = default_reference(1);
    TransportPlan plan;
    plan.entries = {{0, 0, 0.5}, {0, 1, 0.5}};
    plan.cost = CostSpec::distance();
    plan.value = 1.0;
    plan.source_ref = measure_id(f.src);
    plan.target_ref = measure_id(f.tgt);
    f.plan = std::move(plan);
    return f;
}

std::vector<std::string> fixture_names() {
    return {"book-shift", "identity", "gaussian-pair", "gaussian-pair-empirical",
            "split-witness"};
}

Fixture make_fixture(const std::string& name, int dim, std::size_t cells, int n_points,
                     std::uint64_t seed) {
    if (name == "book-shift") return book_shift();
    if (name == "identity") return identity_fixture();
    if (name == "gaussian-pair") return gaussian_pair_grid(dim, cells);
    if (name == "gaussian-pair-empirical") return gaussian_pair_empirical(dim, n_points, seed);
    if (name == "split-witness") return split_witness();
    throw ConfigError("unknown fixture '" + name + "'");
}

}  // namespace otlab
