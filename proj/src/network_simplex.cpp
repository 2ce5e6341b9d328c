#include "otlab/network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otlab/errors.hpp"

namespace otlab {

TransportSimplex::TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                                   std::function<double(int, int)> cost)
    : m_(int(supply.size())),
      n_(int(demand.size())),
      root_(m_ + n_),
      real_arcs_(std::int64_t(m_) * n_),
      supply_(std::move(supply)),
      demand_(std::move(demand)),
      cost_(std::move(cost)) {
    if (m_ < 1 || n_ < 1) throw Infeasible("empty marginal");
    for (double a : supply_)
        if (!(a >= 0.0) || !std::isfinite(a)) throw Infeasible("negative or non-finite supply");
    for (double b : demand_)
        if (!(b >= 0.0) || !std::isfinite(b)) throw Infeasible("negative or non-finite demand");
    double sa = 0.0, sb = 0.0;
    for (double a : supply_) sa += a;
    for (double b : demand_) sb += b;
    if (std::abs(sa - sb) > 1e-9 * std::max({sa, sb, 1.0}))
        throw Infeasible("total supply " + std::to_string(sa) + " != total demand " +
                         std::to_string(sb));
}

double TransportSimplex::arc_cost(std::int64_t arc) const {
    if (arc < real_arcs_) return cost_(int(arc / n_), int(arc % n_));
    return art_cost_;
}

int TransportSimplex::arc_tail(std::int64_t arc) const {
    if (arc < real_arcs_) return int(arc / n_);
    const std::int64_t k = arc - real_arcs_;
    return k < m_ ? int(k) : root_;  // source -> root, root -> target
}

int TransportSimplex::arc_head(std::int64_t arc) const {
    if (arc < real_arcs_) return m_ + int(arc % n_);
    const std::int64_t k = arc - real_arcs_;
    return k < m_ ? root_ : m_ + int(k - m_);
}

void TransportSimplex::refresh_subtree(int start) {
    // Recompute potentials and depths below `start` from its (already final)
    // parent, walking the children lists.
    std::vector<int> stack{start};
    while (!stack.empty()) {
        const int w = stack.back();
        stack.pop_back();
        const int p = parent_[std::size_t(w)];
        const double c = arc_cost(parent_arc_[std::size_t(w)]);
        // reduced cost c - pi[tail] + pi[head] vanishes on tree arcs
        pi_[std::size_t(w)] = arc_up_[std::size_t(w)] ? c + pi_[std::size_t(p)]
                                                      : pi_[std::size_t(p)] - c;
        depth_[std::size_t(w)] = depth_[std::size_t(p)] + 1;
        for (int ch : children_[std::size_t(w)]) stack.push_back(ch);
    }
}

TransportSimplex::Result TransportSimplex::solve(double rel_tol) {
    const int V = m_ + n_ + 1;

    double max_cost = 0.0;
    // Demand-side scan is enough for a scale estimate; exact maximum is not
    // needed, only an upper bound for the artificial cost.
    for (int i = 0; i < m_; ++i) {
        max_cost = std::max(max_cost, std::abs(cost_(i, 0)));
        max_cost = std::max(max_cost, std::abs(cost_(i, n_ - 1)));
    }
    for (int j = 0; j < n_; ++j) max_cost = std::max(max_cost, std::abs(cost_(0, j)));
    art_cost_ = (max_cost + 1.0) * double(V);

    parent_.assign(std::size_t(V), root_);
    parent_arc_.assign(std::size_t(V), -1);
    arc_up_.assign(std::size_t(V), 0);
    flow_.assign(std::size_t(V), 0.0);
    pi_.assign(std::size_t(V), 0.0);
    depth_.assign(std::size_t(V), 1);
    children_.assign(std::size_t(V), {});

    // Initial star basis through the root: source i -> root carrying a_i,
    // root -> target j carrying b_j.
    parent_[std::size_t(root_)] = -1;
    parent_arc_[std::size_t(root_)] = -1;
    depth_[std::size_t(root_)] = 0;
    children_[std::size_t(root_)].reserve(std::size_t(m_ + n_));
    for (int i = 0; i < m_; ++i) {
        parent_arc_[std::size_t(i)] = real_arcs_ + i;
        arc_up_[std::size_t(i)] = 1;
        flow_[std::size_t(i)] = supply_[std::size_t(i)];
        pi_[std::size_t(i)] = art_cost_;
        children_[std::size_t(root_)].push_back(i);
    }
    for (int j = 0; j < n_; ++j) {
        const int v = node_of_target(j);
        parent_arc_[std::size_t(v)] = real_arcs_ + m_ + j;
        arc_up_[std::size_t(v)] = 0;
        flow_[std::size_t(v)] = demand_[std::size_t(j)];
        pi_[std::size_t(v)] = -art_cost_;
        children_[std::size_t(root_)].push_back(v);
    }

    const double enter_tol = rel_tol * std::max(1.0, max_cost);
    const std::int64_t block =
        std::max<std::int64_t>(64, std::int64_t(std::sqrt(double(real_arcs_))));
    const std::int64_t max_pivots = 400 * std::int64_t(V) + 200000;

    std::int64_t next_arc = 0;
    std::int64_t pivots = 0;
    std::vector<int> up_path, down_path;

    for (;;) {
        // --- entering arc: best within the first block that holds one ---
        std::int64_t entering = -1;
        double best_rc = -enter_tol;
        std::int64_t scanned = 0;
        while (scanned < real_arcs_) {
            const std::int64_t stop = std::min(scanned + block, real_arcs_);
            for (; scanned < stop; ++scanned) {
                const std::int64_t a = next_arc;
                if (++next_arc == real_arcs_) next_arc = 0;
                const int i = int(a / n_), j = int(a % n_);
                const double rc =
                    cost_(i, j) - pi_[std::size_t(i)] + pi_[std::size_t(m_ + j)];
                if (rc < best_rc) {
                    best_rc = rc;
                    entering = a;
                }
            }
            if (entering >= 0) break;
        }
        if (entering < 0) break;  // dual feasible: optimal

        if (++pivots > max_pivots)
            throw NumericFailure("pivot budget exhausted after " + std::to_string(pivots) +
                                 " pivots");

        const int u = int(entering / n_);
        const int v = m_ + int(entering % n_);

        // --- pivot cycle: u -> v by the entering arc, back through the tree ---
        up_path.clear();    // nodes from u up to (excluding) the apex
        down_path.clear();  // nodes from v up to (excluding) the apex
        int x = u, y = v;
        while (depth_[std::size_t(x)] > depth_[std::size_t(y)]) {
            up_path.push_back(x);
            x = parent_[std::size_t(x)];
        }
        while (depth_[std::size_t(y)] > depth_[std::size_t(x)]) {
            down_path.push_back(y);
            y = parent_[std::size_t(y)];
        }
        while (x != y) {
            up_path.push_back(x);
            down_path.push_back(y);
            x = parent_[std::size_t(x)];
            y = parent_[std::size_t(y)];
        }

        // Flow pushed along the cycle orientation (u -> v): on the u side the
        // push runs parent -> node, on the v side node -> parent. Arcs whose
        // direction opposes the push lose flow and may block.
        double delta = std::numeric_limits<double>::infinity();
        for (int w : up_path)
            if (arc_up_[std::size_t(w)]) delta = std::min(delta, flow_[std::size_t(w)]);
        for (int w : down_path)
            if (!arc_up_[std::size_t(w)]) delta = std::min(delta, flow_[std::size_t(w)]);
        if (!std::isfinite(delta))
            throw Unbounded("pivot cycle without a blocking arc");

        // Leaving arc: last blocking arc along the cycle orientation starting
        // at the apex (keeps the basis strongly feasible).
        int leaving = -1;
        for (auto it = up_path.rbegin(); it != up_path.rend(); ++it)
            if (arc_up_[std::size_t(*it)] && flow_[std::size_t(*it)] == delta) leaving = *it;
        for (int w : down_path)
            if (!arc_up_[std::size_t(w)] && flow_[std::size_t(w)] == delta) leaving = w;
        if (leaving < 0) throw NumericFailure("no leaving arc at delta");

        for (int w : up_path)
            flow_[std::size_t(w)] += arc_up_[std::size_t(w)] ? -delta : delta;
        for (int w : down_path)
            flow_[std::size_t(w)] += arc_up_[std::size_t(w)] ? delta : -delta;

        // --- basis exchange: re-root the detached subtree at the entering
        // arc's endpoint inside it, then hang it below the other endpoint ---
        const bool left_on_up_side =
            std::find(up_path.begin(), up_path.end(), leaving) != up_path.end();
        const int attach = left_on_up_side ? u : v;
        const int other = left_on_up_side ? v : u;

        // Reverse parent pointers from `attach` to the old subtree root.
        int node = attach;
        int prev = -1;
        std::int64_t prev_arc = -1;
        char prev_up = 0;
        double prev_flow = 0.0;
        while (true) {
            const int par = parent_[std::size_t(node)];
            const std::int64_t cur_arc = parent_arc_[std::size_t(node)];
            const char cur_up = arc_up_[std::size_t(node)];
            const double cur_flow = flow_[std::size_t(node)];
            if (prev >= 0) {
                auto& ch = children_[std::size_t(node)];
                ch.erase(std::find(ch.begin(), ch.end(), prev));
                parent_[std::size_t(node)] = prev;
                parent_arc_[std::size_t(node)] = prev_arc;
                arc_up_[std::size_t(node)] = char(!prev_up);
                flow_[std::size_t(node)] = prev_flow;
                children_[std::size_t(prev)].push_back(node);
            }
            if (node == leaving) {
                // detach from the old parent (the leaving arc disappears)
                auto& ch = children_[std::size_t(par)];
                ch.erase(std::find(ch.begin(), ch.end(), node));
                break;
            }
            prev = node;
            prev_arc = cur_arc;
            prev_up = cur_up;
            prev_flow = cur_flow;
            node = par;
        }

        parent_[std::size_t(attach)] = other;
        parent_arc_[std::size_t(attach)] = entering;
        arc_up_[std::size_t(attach)] = char(attach == u);  // entering arc runs u -> v
        flow_[std::size_t(attach)] = delta;
        children_[std::size_t(other)].push_back(attach);
        refresh_subtree(attach);
    }

    // --- extraction ---
    Result res;
    res.pivots = pivots;
    double art_flow = 0.0;
    for (int w = 0; w < m_ + n_; ++w) {
        const std::int64_t a = parent_arc_[std::size_t(w)];
        if (a < 0) continue;
        if (a < real_arcs_) {
            if (flow_[std::size_t(w)] > 0.0)
                res.flows.push_back({int(a / n_), int(a % n_), flow_[std::size_t(w)]});
        } else {
            art_flow += flow_[std::size_t(w)];
        }
    }
    if (art_flow > 1e-9)
        throw Infeasible("artificial arcs still carry mass " + std::to_string(art_flow));

    std::sort(res.flows.begin(), res.flows.end(), [](const Flow& a, const Flow& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });

    res.pot_source.resize(std::size_t(m_));
    res.pot_target.resize(std::size_t(n_));
    for (int i = 0; i < m_; ++i) res.pot_source[std::size_t(i)] = pi_[std::size_t(i)];
    for (int j = 0; j < n_; ++j) res.pot_target[std::size_t(j)] = pi_[std::size_t(m_ + j)];

    double value = 0.0;
    for (const auto& f : res.flows) value += f.mass * cost_(f.i, f.j);
    res.value = value;
    return res;
}

}  // namespace otlab
