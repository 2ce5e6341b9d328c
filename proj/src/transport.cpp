#include "otlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "otlab/errors.hpp"
#include "otlab/network_simplex.hpp"

namespace otlab {

namespace {

double cost_scale(const std::vector<Atom>& src, const std::vector<Atom>& tgt,
                  const CostSpec& spec, const KantorovichPotential* pot) {
    double s = 1.0;
    for (const auto& a : src)
        for (const auto& b : tgt) {
            const double c = eval_cost(spec, a.point, b.point, pot);
            if (std::isfinite(c)) s = std::max(s, c);
        }
    return s;
}

}  // namespace

SolveResult solve_exact(const DiscreteMeasure& src_in, const DiscreteMeasure& tgt_in,
                        const CostSpec& spec, const KantorovichPotential* potential) {
    if (spec.kind == CostKind::CEpsilon && !(spec.epsilon > 0.0))
        throw BadDimension("c_epsilon cost requires epsilon > 0");
    if (spec.kind == CostKind::BetaRestricted && potential == nullptr)
        throw MissingPotential("solve with beta_restricted needs a potential");

    const DiscreteMeasure src = to_atoms(src_in);
    const DiscreteMeasure tgt = to_atoms(tgt_in);
    if (src.dim != tgt.dim) throw BadDimension("marginals of mixed dimension");

    const auto& sa = src.atoms;
    const auto& ta = tgt.atoms;

    // Restricted costs carry +inf off the admissible set; a large finite
    // penalty keeps the LP arithmetic clean and the result is rejected if any
    // penalized arc survives.
    const bool restricted = spec.kind == CostKind::BetaRestricted;
    double penalty = 0.0;
    if (restricted) {
        double finite_max = 1.0;
        for (const auto& a : sa)
            for (const auto& b : ta) {
                const double c = eval_cost(spec, a.point, b.point, potential);
                if (std::isfinite(c)) finite_max = std::max(finite_max, c);
            }
        penalty = finite_max * double(sa.size() + ta.size()) * 16.0;
    }

    auto cost = [&](int i, int j) {
        const double c = eval_cost(spec, sa[std::size_t(i)].point, ta[std::size_t(j)].point,
                                   potential);
        return std::isfinite(c) ? c : penalty;
    };

    std::vector<double> supply, demand;
    supply.reserve(sa.size());
    demand.reserve(ta.size());
    for (const auto& a : sa) supply.push_back(a.mass);
    for (const auto& b : ta) demand.push_back(b.mass);

    TransportSimplex simplex(std::move(supply), std::move(demand), cost);
    auto lp = simplex.solve();

    SolveResult out;
    out.pivots = lp.pivots;
    out.plan.cost = spec;
    out.plan.source_ref = measure_id(src_in);
    out.plan.target_ref = measure_id(tgt_in);
    out.plan.entries.reserve(lp.flows.size());
    for (const auto& f : lp.flows) out.plan.entries.push_back({f.i, f.j, f.mass});

    if (restricted) {
        for (const auto& e : out.plan.entries)
            if (!std::isfinite(eval_cost(spec, sa[std::size_t(e.i)].point,
                                         ta[std::size_t(e.j)].point, potential)))
                throw Infeasible("no finite-cost feasible plan under the restricted cost");
    }
    out.plan.value = plan_integral(out.plan, sa, ta, spec);

    // Duals, normalized so the first source atom sits at zero.
    const double shift = lp.pot_source.empty() ? 0.0 : lp.pot_source.front();
    out.potential.u_source = std::move(lp.pot_source);
    out.potential.u_target = std::move(lp.pot_target);
    for (double& v : out.potential.u_source) v -= shift;
    for (double& v : out.potential.u_target) v -= shift;
    out.potential.source_points.reserve(sa.size());
    out.potential.target_points.reserve(ta.size());
    for (const auto& a : sa) out.potential.source_points.push_back(a.point);
    for (const auto& b : ta) out.potential.target_points.push_back(b.point);

    double dual = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) dual += sa[i].mass * out.potential.u_source[i];
    for (std::size_t j = 0; j < ta.size(); ++j) dual -= ta[j].mass * out.potential.u_target[j];
    out.dual_value = dual;

    const double scale = std::max(1.0, std::abs(out.plan.value));
    if (std::abs(out.plan.value - dual) > 1e-8 * scale)
        throw NumericFailure("strong duality gap " + std::to_string(out.plan.value - dual));
    if (marginal_violation(out.plan, sa, ta) > 1e-9)
        throw NumericFailure("plan marginals violate the coupling constraint");

    return out;
}

namespace {

struct ForestEnumerator {
    // Enumerates spanning trees of one connected component of the optimal-arc
    // graph and records the basic flow of each feasible one.
    int nodes = 0;
    std::vector<std::pair<int, int>> arcs;      // local endpoints
    std::vector<double> balance;                // supply (+) / demand (-), per local node
    std::vector<std::vector<double>> vertices;  // flows per feasible tree, arc-indexed
    std::size_t cap = 0;

    std::vector<int> chosen;

    void enumerate(int next, int picked, std::vector<int> comp_of, int ncomp) {
        if (vertices.size() > cap) throw TooLarge("optimal face has too many basic solutions");
        if (picked == nodes - 1) {
            emit();
            return;
        }
        if (next == int(arcs.size())) return;
        const int remaining = int(arcs.size()) - next;
        if (picked + remaining < nodes - 1) return;

        const auto [a, b] = arcs[std::size_t(next)];
        const int ca = comp_of[std::size_t(a)], cb = comp_of[std::size_t(b)];
        if (ca != cb) {
            // include arc `next`
            auto merged = comp_of;
            for (int& c : merged)
                if (c == cb) c = ca;
            chosen.push_back(next);
            enumerate(next + 1, picked + 1, std::move(merged), ncomp - 1);
            chosen.pop_back();
        }
        // exclude arc `next`
        enumerate(next + 1, picked, std::move(comp_of), ncomp);
    }

    void emit() {
        // Leaf elimination gives the unique flow supported on the tree.
        std::vector<double> residual = balance;
        std::vector<std::vector<std::pair<int, int>>> adj(std::size_t(nodes));  // (peer, arc slot)
        for (std::size_t s = 0; s < chosen.size(); ++s) {
            const auto [a, b] = arcs[std::size_t(chosen[s])];
            adj[std::size_t(a)].push_back({b, int(s)});
            adj[std::size_t(b)].push_back({a, int(s)});
        }
        std::vector<int> degree(std::size_t(nodes));
        for (int v = 0; v < nodes; ++v) degree[std::size_t(v)] = int(adj[std::size_t(v)].size());
        std::vector<char> done_arc(chosen.size(), 0), done_node(std::size_t(nodes), 0);
        std::vector<double> flow(chosen.size(), 0.0);
        std::vector<int> leaves;
        for (int v = 0; v < nodes; ++v)
            if (degree[std::size_t(v)] == 1) leaves.push_back(v);
        while (!leaves.empty()) {
            const int v = leaves.back();
            leaves.pop_back();
            if (done_node[std::size_t(v)]) continue;
            int slot = -1, peer = -1;
            for (const auto& [w, s] : adj[std::size_t(v)])
                if (!done_arc[std::size_t(s)]) {
                    slot = s;
                    peer = w;
                    break;
                }
            if (slot < 0) {
                done_node[std::size_t(v)] = 1;
                continue;
            }
            const auto [a, b] = arcs[std::size_t(chosen[std::size_t(slot)])];
            // Flow runs source -> target; local node a is the source side.
            const double f = (v == a) ? residual[std::size_t(v)] : -residual[std::size_t(v)];
            flow[std::size_t(slot)] = f;
            if (f < -1e-12) return;  // infeasible basic solution, not a vertex
            residual[std::size_t(peer)] += residual[std::size_t(v)];
            residual[std::size_t(v)] = 0.0;
            done_arc[std::size_t(slot)] = 1;
            done_node[std::size_t(v)] = 1;
            if (--degree[std::size_t(peer)] == 1) leaves.push_back(peer);
        }
        // Map tree-slot flows back to component arc indexing.
        std::vector<double> vertex(arcs.size(), 0.0);
        for (std::size_t s = 0; s < chosen.size(); ++s)
            vertex[std::size_t(chosen[s])] = std::max(0.0, flow[s]);
        vertices.push_back(std::move(vertex));
    }
};

// Rank of the span of (rows), with a pivot threshold.
int matrix_rank(std::vector<std::vector<double>> rows, double tol) {
    int rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t c = 0; c < cols && rank < int(rows.size()); ++c) {
        std::size_t piv = std::size_t(rank);
        double best = 0.0;
        for (std::size_t r = std::size_t(rank); r < rows.size(); ++r)
            if (std::abs(rows[r][c]) > best) {
                best = std::abs(rows[r][c]);
                piv = r;
            }
        if (best < tol) continue;
        std::swap(rows[std::size_t(rank)], rows[piv]);
        const auto& prow = rows[std::size_t(rank)];
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == std::size_t(rank)) continue;
            const double f = rows[r][c] / prow[c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * prow[k];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

int optimal_face_dimension(const DiscreteMeasure& src_in, const DiscreteMeasure& tgt_in,
                           const CostSpec& spec, double tol) {
    const DiscreteMeasure src = to_atoms(src_in);
    const DiscreteMeasure tgt = to_atoms(tgt_in);
    const int m = int(src.atoms.size()), n = int(tgt.atoms.size());
    if (m > 12 || n > 12) throw TooLarge("optimal_face_dimension caps at 12 atoms per side");

    const auto solved = solve_exact(src, tgt, spec);
    const auto& phi = solved.potential.u_source;
    const auto& psi = solved.potential.u_target;
    const double scale = cost_scale(src.atoms, tgt.atoms, spec, nullptr);

    // Complementary slackness: every optimal plan is supported on the arcs
    // with vanishing reduced cost, and conversely every feasible plan on
    // those arcs is optimal.
    std::vector<std::pair<int, int>> face_arcs;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            const double c = eval_cost(spec, src.atoms[std::size_t(i)].point,
                                       tgt.atoms[std::size_t(j)].point);
            const double rc = c - (phi[std::size_t(i)] - psi[std::size_t(j)]);
            if (rc <= tol * scale) face_arcs.push_back({i, j});
        }

    // Split into connected components; the face is a product across them.
    const int nodes = m + n;
    std::vector<int> comp(std::size_t(nodes), -1);
    int ncomp = 0;
    for (int start = 0; start < nodes; ++start) {
        if (comp[std::size_t(start)] >= 0) continue;
        std::vector<int> stack{start};
        comp[std::size_t(start)] = ncomp;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (const auto& [i, j] : face_arcs) {
                const int a = i, b = m + j;
                int peer = -1;
                if (a == v) peer = b;
                if (b == v) peer = a;
                if (peer >= 0 && comp[std::size_t(peer)] < 0) {
                    comp[std::size_t(peer)] = ncomp;
                    stack.push_back(peer);
                }
            }
        }
        ++ncomp;
    }

    int dim = 0;
    for (int c = 0; c < ncomp; ++c) {
        ForestEnumerator fe;
        fe.cap = 200000;
        std::vector<int> local(std::size_t(nodes), -1);
        for (int v = 0; v < nodes; ++v)
            if (comp[std::size_t(v)] == c) {
                local[std::size_t(v)] = fe.nodes++;
                fe.balance.push_back(v < m ? src.atoms[std::size_t(v)].mass
                                           : -tgt.atoms[std::size_t(v - m)].mass);
            }
        for (const auto& [i, j] : face_arcs)
            if (comp[std::size_t(i)] == c)
                fe.arcs.push_back({local[std::size_t(i)], local[std::size_t(m + j)]});
        if (fe.nodes <= 1 || fe.arcs.empty()) continue;

        std::vector<int> comp_of(std::size_t(fe.nodes));
        std::iota(comp_of.begin(), comp_of.end(), 0);
        fe.enumerate(0, 0, comp_of, fe.nodes);
        if (fe.vertices.empty())
            throw NumericFailure("optimal face component without a feasible vertex");

        std::vector<std::vector<double>> diffs;
        for (std::size_t k = 1; k < fe.vertices.size(); ++k) {
            auto d = fe.vertices[k];
            for (std::size_t a = 0; a < d.size(); ++a) d[a] -= fe.vertices[0][a];
            diffs.push_back(std::move(d));
        }
        dim += matrix_rank(std::move(diffs), 1e-9);
    }
    return dim;
}

}  // namespace otlab
