#include "otlab/entropy.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "otlab/errors.hpp"
#include "otlab/transport.hpp"

namespace otlab {

EntropyReading entropy_relative(const DiscreteMeasure& m, const TruncatedGaussian& g,
                                const GridSpec& grid) {
    if (grid.dim() != g.n) throw IncompatibleGrid("grid dimension does not match reference");
    const DiscreteMeasure snapped =
        (m.form == DiscreteMeasure::Form::Grid && m.grid == grid) ? m : snap_to_grid(m, grid);

    const auto gamma = gaussian_cell_masses(g, grid);
    const double d = double(g.n);
    const double log2pi = std::log(2.0 * std::acos(-1.0));

    EntropyReading r;
    r.dim = g.n;
    for (std::size_t k = 0; k < snapped.masses.size(); ++k) {
        const double p = snapped.masses[k];
        if (p <= 0.0) continue;
        if (gamma[k] <= 0.0)
            throw EntropyUndefined("mass on a cell of vanishing reference measure");
        const double vol = grid.volume(k);
        const double r2 = 2.0 * std::log(vol / gamma[k]) - d * log2pi;
        r.ent_gamma += p * std::log(p / gamma[k]);
        r.ent_lebesgue += p * std::log(p / vol);
        r.second_moment_half += 0.5 * p * r2;
    }
    return r;
}

ConvexityReport check_convexity(const InterpolationPath& path, ConvexityMode mode,
                                double slack) {
    if (path.ts.size() < 3)
        throw BadDimension("convexity check needs at least one interior time");

    ConvexityReport report;
    report.mode = mode;
    report.slack = slack;

    const auto& e0 = path.entropies[path.index_of(0.0)];
    const auto& e1 = path.entropies[path.index_of(1.0)];
    if (!std::isfinite(e0.ent_gamma) || !std::isfinite(e1.ent_gamma))
        throw EntropyUndefined("boundary entropy is not finite on the declared grid");

    double coeff = 0.0;  // K(t) = coeff * t (1 - t)
    if (mode == ConvexityMode::CEpsilon) {
        if (path.plan.cost.kind != CostKind::CEpsilon)
            throw BadDimension("CEpsilon mode expects a plan from a perturbed-cost solve");
        const double eps = path.plan.cost.epsilon;
        const double w_eps =
            plan_integral(path.plan, path.src.atoms, path.tgt.atoms, path.plan.cost);
        report.epsilon = eps;
        report.w_value = w_eps;
        const double base = w_eps - eps;
        coeff = base * base / (2.0 * (1.0 + eps) * (1.0 + eps));
    } else {
        const double w1 =
            plan_integral(path.plan, path.src.atoms, path.tgt.atoms, CostSpec::distance());
        report.w_value = w1;
        coeff = 0.5 * w1 * w1;
    }

    report.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.ts.size(); ++k) {
        const double t = path.ts[k];
        if (t <= 0.0 || t >= 1.0) continue;
        const double kt = coeff * t * (1.0 - t);
        ConvexityRow row;
        row.t = t;
        row.ent_gamma = path.entropies[k].ent_gamma;
        row.bound = (1.0 - t) * e0.ent_gamma + t * e1.ent_gamma - kt;
        row.margin = row.bound - row.ent_gamma;
        report.worst_margin = std::min(report.worst_margin, row.margin);
        report.rows.push_back(row);
    }
    report.pass = report.worst_margin >= -slack;
    return report;
}

GeodesicReport geodesic_check(const InterpolationPath& path,
                              const std::vector<std::pair<double, double>>& pairs) {
    if (path.ts.size() < 3) throw BadDimension("geodesic check needs at least three times");

    GeodesicReport report;
    report.w1_end_to_end =
        plan_integral(path.plan, path.src.atoms, path.tgt.atoms, CostSpec::distance());
    report.worst_rel_err = 0.0;
    for (const auto& [t, s] : pairs) {
        GeodesicRow row;
        row.t = t;
        row.s = s;
        row.expected = std::abs(t - s) * report.w1_end_to_end;
        if (std::abs(t - s) <= 1e-15) {
            row.w1_ts = 0.0;
            row.rel_err = 0.0;
        } else {
            const auto mt = interpolate(path.plan, path.src, path.tgt, t);
            const auto ms = interpolate(path.plan, path.src, path.tgt, s);
            row.w1_ts = solve_exact(mt, ms, CostSpec::distance()).plan.value;
            row.rel_err =
                std::abs(row.w1_ts - row.expected) / std::max(1e-300, std::abs(row.expected));
        }
        report.worst_rel_err = std::max(report.worst_rel_err, row.rel_err);
        report.rows.push_back(row);
    }
    report.pass = report.worst_rel_err <= 1e-6;
    return report;
}

}  // namespace otlab
