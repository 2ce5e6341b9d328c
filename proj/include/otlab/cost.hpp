#pragma once

#include <optional>
#include <string>

#include "otlab/geometry.hpp"

namespace otlab {

struct KantorovichPotential;

// The three costs of the selection pipeline plus the potential-restricted
// variant used by the support diagnostics:
//   distance         |x - y|
//   alpha            sqrt(1 + |x - y|^2), strictly convex and smooth
//   c_epsilon        |x - y| + epsilon * alpha(x - y)
//   beta_restricted  alpha(x - y) where the potential is saturated, +inf elsewhere
enum class CostKind { Distance, Alpha, CEpsilon, BetaRestricted };

struct CostSpec {
    CostKind kind = CostKind::Distance;
    double epsilon = 0.0;  // used by CEpsilon (must be > 0 there)

    static CostSpec distance() { return {CostKind::Distance, 0.0}; }
    static CostSpec alpha() { return {CostKind::Alpha, 0.0}; }
    static CostSpec c_epsilon(double eps);
};

std::string cost_kind_name(CostKind kind);
CostKind cost_kind_from_name(const std::string& name);

// alpha(z) = sqrt(1 + |z|^2)
double alpha_cost(const Vec& z);

// grad alpha(z) = z / sqrt(1 + |z|^2)
Vec alpha_gradient(const Vec& z);

// Cost of moving x to y. For BetaRestricted a potential is required: the
// value is alpha(x - y) when u(x) - u(y) = |x - y| within 1e-7, +inf
// otherwise. Throws MissingPotential when the potential is absent.
double eval_cost(const CostSpec& spec, const Vec& x, const Vec& y,
                 const KantorovichPotential* u = nullptr);

}  // namespace otlab
