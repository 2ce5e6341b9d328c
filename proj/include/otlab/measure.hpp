#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "otlab/gaussian.hpp"
#include "otlab/geometry.hpp"

namespace otlab {

// Rectangular grid: one ascending edge vector per axis. Cells are the
// products of consecutive edge intervals; flat indices are row-major with
// axis 0 slowest.
struct GridSpec {
    std::vector<std::vector<double>> edges;

    int dim() const { return int(edges.size()); }
    std::size_t cells(int axis) const { return edges[std::size_t(axis)].size() - 1; }
    std::size_t total_cells() const;

    std::size_t flat_index(const std::vector<std::size_t>& multi) const;
    std::vector<std::size_t> multi_index(std::size_t flat) const;
    Vec center(std::size_t flat) const;
    double volume(std::size_t flat) const;

    // Flat cell index containing p (cells are [lo, hi) except the last,
    // which is closed). Throws OutOfBox when p is outside the grid.
    std::size_t locate(const Vec& p) const;
    bool contains(const Vec& p) const;

    bool operator==(const GridSpec& other) const { return edges == other.edges; }
};

GridSpec uniform_grid(const Vec& lo, const Vec& hi, const std::vector<std::size_t>& cells);

// Grid with per-axis box [-half_width_sigmas * sigma_i, +half_width_sigmas * sigma_i].
GridSpec gaussian_box_grid(const TruncatedGaussian& g, std::size_t cells_per_axis,
                           double half_width_sigmas);

// Exact cell masses of g on the grid: products of per-axis CDF differences,
// renormalized to total mass one over the box.
std::vector<double> gaussian_cell_masses(const TruncatedGaussian& g, const GridSpec& grid);

struct Atom {
    Vec point;
    double mass = 0.0;
};

// A probability measure in one of two finite forms: weighted atoms, or cell
// probabilities on a rectangular grid. Total mass must be 1 within 1e-12 and
// every mass nonnegative; both are checked at construction.
struct DiscreteMeasure {
    enum class Form { Atoms, Grid };

    Form form = Form::Atoms;
    int dim = 0;
    std::vector<Atom> atoms;      // Form::Atoms
    GridSpec grid;                // Form::Grid
    std::vector<double> masses;   // Form::Grid, flat row-major

    static DiscreteMeasure from_atoms(std::vector<Atom> atoms);
    static DiscreteMeasure from_grid(GridSpec grid, std::vector<double> masses);

    double total_mass() const;
    std::size_t size() const { return form == Form::Atoms ? atoms.size() : masses.size(); }
};

// Uniform empirical measure on the given points.
DiscreteMeasure empirical_measure(const std::vector<Vec>& points);

// Grid discretization of the truncated Gaussian itself.
// Throws GridTooLarge when cells_per_axis^n exceeds max_cells.
DiscreteMeasure grid_discretize(const TruncatedGaussian& g, std::size_t cells_per_axis,
                                double half_width_sigmas,
                                std::size_t max_cells = (std::size_t(1) << 22));

// Pushforward under the projection onto the first k coordinates: atoms are
// truncated and exact duplicates coalesced (first-occurrence order); grids
// are marginalized. Mass is preserved exactly.
DiscreteMeasure project(const DiscreteMeasure& m, int k);

// Atom view of a measure: grids are converted to cell-center atoms with
// zero-mass cells dropped; atom measures are returned unchanged.
DiscreteMeasure to_atoms(const DiscreteMeasure& m);

// Content identity used to match plans against the measures they were
// computed from (64-bit FNV-1a over the serialized payload).
std::uint64_t measure_id(const DiscreteMeasure& m);

}  // namespace otlab
