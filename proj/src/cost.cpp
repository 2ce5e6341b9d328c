#include "otlab/cost.hpp"

#include <cmath>
#include <limits>

#include "otlab/errors.hpp"
#include "otlab/plan.hpp"

namespace otlab {

CostSpec CostSpec::c_epsilon(double eps) {
    if (!(eps > 0.0)) throw BadDimension("c_epsilon requires epsilon > 0");
    return {CostKind::CEpsilon, eps};
}

std::string cost_kind_name(CostKind kind) {
    switch (kind) {
        case CostKind::Distance: return "distance";
        case CostKind::Alpha: return "alpha";
        case CostKind::CEpsilon: return "c_epsilon";
        case CostKind::BetaRestricted: return "beta_restricted";
    }
    return "distance";
}

CostKind cost_kind_from_name(const std::string& name) {
    if (name == "distance") return CostKind::Distance;
    if (name == "alpha") return CostKind::Alpha;
    if (name == "c_epsilon") return CostKind::CEpsilon;
    if (name == "beta_restricted") return CostKind::BetaRestricted;
    throw ConfigError("unknown cost kind '" + name + "'");
}

double alpha_cost(const Vec& z) { return std::sqrt(1.0 + norm2(z)); }

Vec alpha_gradient(const Vec& z) {
    const double s = std::sqrt(1.0 + norm2(z));
    Vec g(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) g[k] = z[k] / s;
    return g;
}

double eval_cost(const CostSpec& spec, const Vec& x, const Vec& y,
                 const KantorovichPotential* u) {
    if (x.size() != y.size()) throw BadDimension("cost arguments of mixed dimension");
    const double d = dist(x, y);
    switch (spec.kind) {
        case CostKind::Distance:
            return d;
        case CostKind::Alpha:
            return std::sqrt(1.0 + d * d);
        case CostKind::CEpsilon:
            return d + spec.epsilon * std::sqrt(1.0 + d * d);
        case CostKind::BetaRestricted: {
            if (u == nullptr)
                throw MissingPotential("beta_restricted cost needs a potential");
            const double gap = u->evaluate(x) - u->evaluate(y) - d;
            if (std::abs(gap) <= 1e-7) return std::sqrt(1.0 + d * d);
            return std::numeric_limits<double>::infinity();
        }
    }
    return d;
}

double KantorovichPotential::evaluate(const Vec& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < target_points.size(); ++j) {
        const double v = u_target[j] + dist(p, target_points[j]);
        if (v < best) best = v;
    }
    return best;
}

double TransportPlan::total_mass() const {
    double t = 0.0;
    for (const auto& e : entries) t += e.mass;
    return t;
}

double plan_integral(const TransportPlan& plan, const std::vector<Atom>& src,
                     const std::vector<Atom>& tgt, const CostSpec& spec) {
    double total = 0.0;
    for (const auto& e : plan.entries)
        total += e.mass * eval_cost(spec, src[std::size_t(e.i)].point, tgt[std::size_t(e.j)].point);
    return total;
}

double marginal_violation(const TransportPlan& plan, const std::vector<Atom>& src,
                          const std::vector<Atom>& tgt) {
    std::vector<double> row(src.size(), 0.0), col(tgt.size(), 0.0);
    for (const auto& e : plan.entries) {
        row[std::size_t(e.i)] += e.mass;
        col[std::size_t(e.j)] += e.mass;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
        const double scale = std::max(src[i].mass, 1e-300);
        worst = std::max(worst, std::abs(row[i] - src[i].mass) / scale);
    }
    for (std::size_t j = 0; j < tgt.size(); ++j) {
        const double scale = std::max(tgt[j].mass, 1e-300);
        worst = std::max(worst, std::abs(col[j] - tgt[j].mass) / scale);
    }
    return worst;
}

}  // namespace otlab
