#include "otlab/selection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otlab/dense_simplex.hpp"
#include "otlab/errors.hpp"

namespace otlab {

std::vector<double> default_epsilon_ladder() {
    return {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
}

bool plans_match(const TransportPlan& a, const TransportPlan& b, double tol) {
    if (a.entries.size() != b.entries.size()) return false;
    auto key = [](const PlanEntry& e) { return std::pair<int, int>(e.i, e.j); };
    auto sa = a.entries, sb = b.entries;
    auto by_key = [&](const PlanEntry& x, const PlanEntry& y) { return key(x) < key(y); };
    std::sort(sa.begin(), sa.end(), by_key);
    std::sort(sb.begin(), sb.end(), by_key);
    for (std::size_t k = 0; k < sa.size(); ++k) {
        if (key(sa[k]) != key(sb[k])) return false;
        if (std::abs(sa[k].mass - sb[k].mass) > tol) return false;
    }
    return true;
}

EpsilonLadder run_ladder(const DiscreteMeasure& src, const DiscreteMeasure& tgt,
                         const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw ConfigError("epsilon ladder is empty");
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        if (!(epsilons[k] > 0.0)) throw ConfigError("epsilons must be positive");
        if (k > 0 && !(epsilons[k] < epsilons[k - 1]))
            throw ConfigError("epsilons must be strictly decreasing");
    }

    const DiscreteMeasure src_atoms = to_atoms(src);
    const DiscreteMeasure tgt_atoms = to_atoms(tgt);

    EpsilonLadder ladder;
    ladder.epsilons = epsilons;
    ladder.source_ref = measure_id(src);
    ladder.target_ref = measure_id(tgt);
    for (double eps : epsilons) {
        auto solved = solve_exact(src, tgt, CostSpec::c_epsilon(eps));
        const double w1 =
            plan_integral(solved.plan, src_atoms.atoms, tgt_atoms.atoms, CostSpec::distance());
        const double al =
            plan_integral(solved.plan, src_atoms.atoms, tgt_atoms.atoms, CostSpec::alpha());
        // the two partial integrals must reassemble the solver's objective
        if (std::abs(w1 + eps * al - solved.plan.value) >
            1e-10 * std::max(1.0, std::abs(solved.plan.value)))
            throw NumericFailure("ladder integrals disagree with the solver objective");
        ladder.plans.push_back(std::move(solved.plan));
        ladder.w1_values.push_back(w1);
        ladder.alpha_values.push_back(al);
    }
    return ladder;
}

TwoStageResult two_stage_solve(const DiscreteMeasure& src, const DiscreteMeasure& tgt,
                               double face_tol) {
    const DiscreteMeasure sa = to_atoms(src);
    const DiscreteMeasure ta = to_atoms(tgt);
    const int m = int(sa.atoms.size()), n = int(ta.atoms.size());
    if (m > 1000 || n > 1000) throw TooLarge("two-stage solve caps at 1000 atoms per side");

    const auto stage1 = solve_exact(src, tgt, CostSpec::distance());
    const double w1 = stage1.plan.value;
    const double budget = w1 * (1.0 + face_tol);

    // Transportation LP plus one budget row: minimize the alpha integral over
    // couplings whose distance integral stays within the stage-1 optimum.
    // The last demand row is redundant and dropped.
    const int rows = m + (n - 1) + 1;
    const int side_row = rows - 1;
    const int ncols = m * n + 1;  // x_ij plus the budget slack

    std::vector<double> b(std::size_t(rows));
    for (int i = 0; i < m; ++i) b[std::size_t(i)] = sa.atoms[std::size_t(i)].mass;
    for (int j = 0; j + 1 < n; ++j) b[std::size_t(m + j)] = ta.atoms[std::size_t(j)].mass;
    b[std::size_t(side_row)] = budget;

    std::vector<double> cost(std::size_t(ncols), 0.0);
    std::vector<double> dist_ij(std::size_t(m) * std::size_t(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& x = sa.atoms[std::size_t(i)].point;
            const auto& y = ta.atoms[std::size_t(j)].point;
            dist_ij[std::size_t(i * n + j)] = dist(x, y);
            cost[std::size_t(i * n + j)] = eval_cost(CostSpec::alpha(), x, y);
        }

    auto column = [&](int col, std::vector<ColumnSimplex::Entry>& out) {
        if (col == m * n) {
            out.push_back({side_row, 1.0});
            return;
        }
        const int i = col / n, j = col % n;
        out.push_back({i, 1.0});
        if (j + 1 < n) out.push_back({m + j, 1.0});
        out.push_back({side_row, dist_ij[std::size_t(col)]});
    };

    ColumnSimplex lp(rows, ncols, std::move(b), std::move(cost), column);
    auto sol = lp.solve();
    if (!sol.feasible)
        throw Infeasible("stage-2 face constraint infeasible at face_tol " +
                         std::to_string(face_tol));

    TwoStageResult out;
    out.w1_opt = w1;
    out.plan.cost = CostSpec::alpha();
    out.plan.source_ref = measure_id(src);
    out.plan.target_ref = measure_id(tgt);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const double mass = sol.x[std::size_t(i * n + j)];
            if (mass > 1e-14) out.plan.entries.push_back({i, j, mass});
        }
    out.plan.value = plan_integral(out.plan, sa.atoms, ta.atoms, CostSpec::alpha());
    out.alpha_opt = out.plan.value;
    if (marginal_violation(out.plan, sa.atoms, ta.atoms) > 1e-9)
        throw NumericFailure("stage-2 plan violates the coupling constraint");
    return out;
}

namespace {

SelectionCertificate make_certificate(const EpsilonLadder& ladder, double w1_opt,
                                      double alpha_opt) {
    for (std::size_t k = 0; k + 1 < ladder.w1_values.size(); ++k)
        if (ladder.w1_values[k + 1] > ladder.w1_values[k] + 1e-9)
            throw NonMonotoneLadder("distance integral rose from " +
                                    std::to_string(ladder.w1_values[k]) + " to " +
                                    std::to_string(ladder.w1_values[k + 1]) +
                                    " along decreasing epsilon");

    SelectionCertificate cert;
    cert.w1_limit = ladder.w1_values.back();
    cert.alpha_limit = ladder.alpha_values.back();
    cert.w1_opt = w1_opt;
    cert.alpha_opt = alpha_opt;
    cert.w1_gap = cert.w1_limit - cert.w1_opt;
    cert.alpha_gap = cert.alpha_limit - cert.alpha_opt;
    cert.w1_ok = cert.w1_gap <= kCertificateTol;
    cert.alpha_ok = cert.alpha_gap <= kCertificateTol;
    cert.low_confidence = ladder.plans.size() < 2;
    cert.stabilized =
        !cert.low_confidence &&
        plans_match(ladder.plans[ladder.plans.size() - 2], ladder.plans.back(), 1e-9);
    return cert;
}

}  // namespace

std::pair<TransportPlan, SelectionCertificate> two_stage_oracle(const DiscreteMeasure& src,
                                                                const DiscreteMeasure& tgt,
                                                                double face_tol) {
    auto stage = two_stage_solve(src, tgt, face_tol);
    auto ladder = run_ladder(src, tgt, default_epsilon_ladder());
    auto cert = make_certificate(ladder, stage.w1_opt, stage.alpha_opt);
    return {std::move(stage.plan), cert};
}

SelectionCertificate convergence_report(const EpsilonLadder& ladder,
                                        const TransportPlan& oracle_plan,
                                        const DiscreteMeasure& src,
                                        const DiscreteMeasure& tgt) {
    if (ladder.plans.empty()) throw ConfigError("empty ladder");
    if (ladder.source_ref != measure_id(src) || ladder.target_ref != measure_id(tgt) ||
        oracle_plan.source_ref != ladder.source_ref ||
        oracle_plan.target_ref != ladder.target_ref)
        throw ConfigError("ladder and oracle plan refer to different measures");

    const DiscreteMeasure sa = to_atoms(src);
    const DiscreteMeasure ta = to_atoms(tgt);
    const double w1_opt = plan_integral(oracle_plan, sa.atoms, ta.atoms, CostSpec::distance());
    const double alpha_opt = plan_integral(oracle_plan, sa.atoms, ta.atoms, CostSpec::alpha());
    return make_certificate(ladder, w1_opt, alpha_opt);
}

}  // namespace otlab
