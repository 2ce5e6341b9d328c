#include "otlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <string>

#include "otlab/errors.hpp"

namespace otlab {

namespace {

constexpr double kMassTol = 1e-12;

void check_probability(const std::vector<double>& masses, const char* what) {
    double total = 0.0;
    for (double m : masses) {
        if (!(m >= 0.0) || !std::isfinite(m))
            throw NumericFailure(std::string(what) + ": negative or non-finite mass");
        total += m;
    }
    if (std::abs(total - 1.0) > kMassTol)
        throw NumericFailure(std::string(what) + ": total mass " + std::to_string(total) +
                             " deviates from 1 by more than 1e-12");
}

}  // namespace

std::size_t GridSpec::total_cells() const {
    std::size_t n = 1;
    for (int a = 0; a < dim(); ++a) n *= cells(a);
    return n;
}

std::size_t GridSpec::flat_index(const std::vector<std::size_t>& multi) const {
    std::size_t idx = 0;
    for (int a = 0; a < dim(); ++a) idx = idx * cells(a) + multi[std::size_t(a)];
    return idx;
}

std::vector<std::size_t> GridSpec::multi_index(std::size_t flat) const {
    std::vector<std::size_t> multi(std::size_t(dim()));
    for (int a = dim() - 1; a >= 0; --a) {
        multi[std::size_t(a)] = flat % cells(a);
        flat /= cells(a);
    }
    return multi;
}

Vec GridSpec::center(std::size_t flat) const {
    const auto multi = multi_index(flat);
    Vec c(std::size_t(dim()));
    for (int a = 0; a < dim(); ++a) {
        const auto& e = edges[std::size_t(a)];
        const std::size_t k = multi[std::size_t(a)];
        c[std::size_t(a)] = 0.5 * (e[k] + e[k + 1]);
    }
    return c;
}

double GridSpec::volume(std::size_t flat) const {
    const auto multi = multi_index(flat);
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) {
        const auto& e = edges[std::size_t(a)];
        const std::size_t k = multi[std::size_t(a)];
        v *= e[k + 1] - e[k];
    }
    return v;
}

std::size_t GridSpec::locate(const Vec& p) const {
    if (int(p.size()) != dim()) throw BadDimension("point dimension does not match grid");
    std::vector<std::size_t> multi(std::size_t(dim()));
    for (int a = 0; a < dim(); ++a) {
        const auto& e = edges[std::size_t(a)];
        const double x = p[std::size_t(a)];
        if (x < e.front() || x > e.back())
            throw OutOfBox("coordinate " + std::to_string(x) + " outside axis " + std::to_string(a));
        auto it = std::upper_bound(e.begin(), e.end(), x);
        std::size_t k = std::size_t(it - e.begin());
        k = (k == 0) ? 0 : k - 1;
        if (k >= cells(a)) k = cells(a) - 1;  // right boundary belongs to the last cell
        multi[std::size_t(a)] = k;
    }
    return flat_index(multi);
}

bool GridSpec::contains(const Vec& p) const {
    if (int(p.size()) != dim()) return false;
    for (int a = 0; a < dim(); ++a) {
        const auto& e = edges[std::size_t(a)];
        if (p[std::size_t(a)] < e.front() || p[std::size_t(a)] > e.back()) return false;
    }
    return true;
}

GridSpec uniform_grid(const Vec& lo, const Vec& hi, const std::vector<std::size_t>& cells) {
    GridSpec grid;
    grid.edges.resize(lo.size());
    for (std::size_t a = 0; a < lo.size(); ++a) {
        if (!(hi[a] > lo[a])) throw BadDimension("grid box is empty on axis " + std::to_string(a));
        if (cells[a] < 1) throw BadDimension("grid needs at least one cell per axis");
        auto& e = grid.edges[a];
        e.resize(cells[a] + 1);
        const double h = (hi[a] - lo[a]) / double(cells[a]);
        for (std::size_t k = 0; k <= cells[a]; ++k) e[k] = lo[a] + h * double(k);
        e.back() = hi[a];  // avoid accumulated rounding on the last edge
    }
    return grid;
}

GridSpec gaussian_box_grid(const TruncatedGaussian& g, std::size_t cells_per_axis,
                           double half_width_sigmas) {
    if (!(half_width_sigmas > 0.0)) throw BadDimension("half_width_sigmas must be positive");
    Vec lo(std::size_t(g.n)), hi(std::size_t(g.n));
    std::vector<std::size_t> cells(std::size_t(g.n), cells_per_axis);
    for (int a = 0; a < g.n; ++a) {
        const double w = half_width_sigmas * g.sigma(a);
        lo[std::size_t(a)] = -w;
        hi[std::size_t(a)] = w;
    }
    return uniform_grid(lo, hi, cells);
}

std::vector<double> gaussian_cell_masses(const TruncatedGaussian& g, const GridSpec& grid) {
    if (grid.dim() != g.n) throw BadDimension("grid dimension does not match gaussian");
    // Per-axis CDF differences; the product structure makes every marginal of
    // the renormalized masses equal to the lower-dimensional discretization.
    std::vector<std::vector<double>> diffs(std::size_t(g.n));
    for (int a = 0; a < g.n; ++a) {
        const auto& e = grid.edges[std::size_t(a)];
        auto& d = diffs[std::size_t(a)];
        d.resize(e.size() - 1);
        const double s = g.sigma(a);
        for (std::size_t k = 0; k + 1 < e.size(); ++k)
            d[k] = normal_cdf(e[k + 1] / s) - normal_cdf(e[k] / s);
    }
    const std::size_t total = grid.total_cells();
    std::vector<double> masses(total);
    double sum = 0.0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        const auto multi = grid.multi_index(flat);
        double m = 1.0;
        for (int a = 0; a < g.n; ++a) m *= diffs[std::size_t(a)][multi[std::size_t(a)]];
        masses[flat] = m;
        sum += m;
    }
    if (!(sum > 0.0)) throw NumericFailure("gaussian grid mass underflow");
    for (double& m : masses) m /= sum;
    return masses;
}

DiscreteMeasure DiscreteMeasure::from_atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) throw BadDimension("measure needs at least one atom");
    const std::size_t d = atoms.front().point.size();
    std::vector<double> masses;
    masses.reserve(atoms.size());
    for (const auto& a : atoms) {
        if (a.point.size() != d) throw BadDimension("atoms of mixed dimension");
        masses.push_back(a.mass);
    }
    check_probability(masses, "atom measure");
    DiscreteMeasure m;
    m.form = Form::Atoms;
    m.dim = int(d);
    m.atoms = std::move(atoms);
    return m;
}

DiscreteMeasure DiscreteMeasure::from_grid(GridSpec grid, std::vector<double> masses) {
    if (masses.size() != grid.total_cells())
        throw IncompatibleGrid("cell masses do not match grid size");
    check_probability(masses, "grid measure");
    DiscreteMeasure m;
    m.form = Form::Grid;
    m.dim = grid.dim();
    m.grid = std::move(grid);
    m.masses = std::move(masses);
    return m;
}

double DiscreteMeasure::total_mass() const {
    double t = 0.0;
    if (form == Form::Atoms)
        for (const auto& a : atoms) t += a.mass;
    else
        for (double m : masses) t += m;
    return t;
}

DiscreteMeasure empirical_measure(const std::vector<Vec>& points) {
    std::vector<Atom> atoms;
    atoms.reserve(points.size());
    const double w = 1.0 / double(points.size());
    for (const auto& p : points) atoms.push_back({p, w});
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

DiscreteMeasure grid_discretize(const TruncatedGaussian& g, std::size_t cells_per_axis,
                                double half_width_sigmas, std::size_t max_cells) {
    if (cells_per_axis < 2) throw BadDimension("cells_per_axis must be >= 2");
    double total = 1.0;
    for (int a = 0; a < g.n; ++a) {
        total *= double(cells_per_axis);
        if (total > double(max_cells))
            throw GridTooLarge(std::to_string(cells_per_axis) + "^" + std::to_string(g.n) +
                               " cells exceed the cap of " + std::to_string(max_cells));
    }
    GridSpec grid = gaussian_box_grid(g, cells_per_axis, half_width_sigmas);
    return DiscreteMeasure::from_grid(grid, gaussian_cell_masses(g, grid));
}

DiscreteMeasure project(const DiscreteMeasure& m, int k) {
    if (k < 1 || k > m.dim)
        throw BadDimension("projection dimension " + std::to_string(k) + " outside 1.." +
                           std::to_string(m.dim));
    if (k == m.dim) return m;

    if (m.form == DiscreteMeasure::Form::Atoms) {
        // Coalesce exact duplicates, keeping first-occurrence order.
        std::map<Vec, std::size_t> slot;
        std::vector<Atom> out;
        for (const auto& a : m.atoms) {
            Vec p(a.point.begin(), a.point.begin() + k);
            auto [it, inserted] = slot.try_emplace(std::move(p), out.size());
            if (inserted)
                out.push_back({it->first, a.mass});
            else
                out[it->second].mass += a.mass;
        }
        return DiscreteMeasure::from_atoms(std::move(out));
    }

    GridSpec head;
    head.edges.assign(m.grid.edges.begin(), m.grid.edges.begin() + k);
    std::size_t tail = 1;
    for (int a = k; a < m.dim; ++a) tail *= m.grid.cells(a);
    std::vector<double> masses(head.total_cells(), 0.0);
    for (std::size_t flat = 0; flat < m.masses.size(); ++flat) masses[flat / tail] += m.masses[flat];
    return DiscreteMeasure::from_grid(std::move(head), std::move(masses));
}

DiscreteMeasure to_atoms(const DiscreteMeasure& m) {
    if (m.form == DiscreteMeasure::Form::Atoms) return m;
    std::vector<Atom> atoms;
    atoms.reserve(m.masses.size());
    for (std::size_t flat = 0; flat < m.masses.size(); ++flat)
        if (m.masses[flat] > 0.0) atoms.push_back({m.grid.center(flat), m.masses[flat]});
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

namespace {

void fnv_mix(std::uint64_t& h, const void* data, std::size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
}

void fnv_mix_double(std::uint64_t& h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    fnv_mix(h, &bits, sizeof bits);
}

}  // namespace

std::uint64_t measure_id(const DiscreteMeasure& m) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const int form = int(m.form), d = m.dim;
    fnv_mix(h, &form, sizeof form);
    fnv_mix(h, &d, sizeof d);
    if (m.form == DiscreteMeasure::Form::Atoms) {
        for (const auto& a : m.atoms) {
            for (double x : a.point) fnv_mix_double(h, x);
            fnv_mix_double(h, a.mass);
        }
    } else {
        for (const auto& e : m.grid.edges)
            for (double x : e) fnv_mix_double(h, x);
        for (double x : m.masses) fnv_mix_double(h, x);
    }
    return h;
}

}  // namespace otlab
