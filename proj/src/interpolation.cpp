#include "otlab/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "otlab/entropy.hpp"
#include "otlab/errors.hpp"

namespace otlab {

DiscreteMeasure interpolate(const TransportPlan& plan, const DiscreteMeasure& src,
                            const DiscreteMeasure& tgt, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw BadDimension("interpolation time outside [0,1]");
    const DiscreteMeasure sa = to_atoms(src);
    const DiscreteMeasure ta = to_atoms(tgt);

    std::map<Vec, std::size_t> slot;
    std::vector<Atom> atoms;
    for (const auto& e : plan.entries) {
        Vec p = lerp(sa.atoms[std::size_t(e.i)].point, ta.atoms[std::size_t(e.j)].point, t);
        auto [it, inserted] = slot.try_emplace(std::move(p), atoms.size());
        if (inserted)
            atoms.push_back({it->first, e.mass});
        else
            atoms[it->second].mass += e.mass;
    }
    return DiscreteMeasure::from_atoms(std::move(atoms));
}

DiscreteMeasure snap_to_grid(const DiscreteMeasure& m, const GridSpec& grid) {
    if (m.dim != grid.dim()) throw IncompatibleGrid("measure and grid dimension differ");
    std::vector<double> masses(grid.total_cells(), 0.0);
    if (m.form == DiscreteMeasure::Form::Atoms) {
        for (const auto& a : m.atoms) masses[grid.locate(a.point)] += a.mass;
    } else {
        for (std::size_t flat = 0; flat < m.masses.size(); ++flat)
            if (m.masses[flat] > 0.0) masses[grid.locate(m.grid.center(flat))] += m.masses[flat];
    }
    return DiscreteMeasure::from_grid(grid, std::move(masses));
}

std::size_t InterpolationPath::index_of(double t) const {
    for (std::size_t k = 0; k < ts.size(); ++k)
        if (std::abs(ts[k] - t) <= 1e-12) return k;
    throw BadDimension("time " + std::to_string(t) + " not on the path");
}

InterpolationPath build_path(const TransportPlan& plan, const DiscreteMeasure& src,
                             const DiscreteMeasure& tgt, const TruncatedGaussian& reference,
                             const GridSpec& grid, std::vector<double> ts) {
    ts.push_back(0.0);
    ts.push_back(1.0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
             ts.end());

    InterpolationPath path;
    path.plan = plan;
    path.src = to_atoms(src);
    path.tgt = to_atoms(tgt);
    path.reference = reference;
    path.grid = grid;
    path.ts = ts;
    for (double t : ts) {
        DiscreteMeasure snapped = snap_to_grid(interpolate(plan, path.src, path.tgt, t), grid);
        path.entropies.push_back(entropy_relative(snapped, reference, grid));
        path.measures.push_back(std::move(snapped));
    }
    return path;
}

}  // namespace otlab
