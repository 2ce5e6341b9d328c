#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "otlab/cost.hpp"
#include "otlab/gaussian.hpp"
#include "otlab/measure.hpp"
#include "otlab/plan.hpp"

namespace otlab {

// Materialized support of a plan: one (x, y, mass) triple per entry.
struct SupportPair {
    Vec x, y;
    double mass = 0.0;
};

struct SupportSet {
    std::vector<SupportPair> pairs;
};

SupportSet support_of(const TransportPlan& plan, const DiscreteMeasure& src,
                      const DiscreteMeasure& tgt);

struct CycleReport {
    int max_cycle = 2;
    bool exhaustive = true;       // randomized sampling above 500 pairs
    std::int64_t cycles_checked = 0;
    double worst_violation = 0.0; // max over cycles of kept-cost minus swapped-cost
    double tol = 0.0;
    bool pass = false;
};

// No cyclic reassignment of up to max_cycle support pairs may lower the total
// cost. Exhaustive over all ordered tuples up to 500 pairs, seeded sampling
// beyond that. max_cycle must be 2 or 3.
CycleReport check_cyclical_monotonicity(const SupportSet& s, const CostSpec& spec,
                                        int max_cycle, double tol,
                                        std::int64_t sample_count = 2000000,
                                        std::uint64_t seed = 0x5eed);

struct PotentialReport {
    double worst_support_gap = 0.0;   // |u(x) - u(y) - |x-y|| over plan entries
    double worst_lipschitz_excess = 0.0;  // max over pooled pairs of |du| - d - 0
    bool pass = false;
};

// Saturation u(x) - u(y) = |x - y| on the support within tol (default 1e-7)
// and the 1-Lipschitz bound on all pooled atom pairs within 1e-9.
PotentialReport check_potential(const SupportSet& s, const KantorovichPotential& u,
                                double tol = 1e-7);

struct SegmentMonotonicityReport {
    std::int64_t premise_count = 0;    // ordered pairs with x on the segment [x', y']
    std::int64_t nontrivial_count = 0; // those with x != x'
    double worst = 0.0;                // most negative inner product found
    bool vacuous = false;              // only degenerate x = x' configurations found
    bool pass = false;
};

// For ordered support pairs ((x,y), (x',y')) with x on the segment [x', y']
// (point-to-segment distance within 1e-8 of the segment length), the smooth
// cost gradients must satisfy
//     ( grad_alpha(y - x') - grad_alpha(y' - x), x - x' ) >= -tol.
// An empty premise set is a vacuous pass and flagged as such.
SegmentMonotonicityReport check_hsupopt(const SupportSet& s, double tol = 1e-9);

struct GraphnessReport {
    int split_sources = 0;         // sources with at least two distinct targets
    double max_target_spread = 0.0;
    std::optional<std::pair<SupportPair, SupportPair>> witness;
    // For the witness (x0,y0), (x0,y1): value of the strict-convexity pairing
    // ((y1-x0)-(y0-x0), grad_alpha(y1-x0)-grad_alpha(y0-x0)) (positive for
    // honest splits) and the sign probe (grad_alpha(y1-x0)-grad_alpha(y0-x0),
    // y0-x0) whose negativity drives the contradiction argument.
    double witness_convexity_gap = 0.0;
    double witness_sign_probe = 0.0;
    bool is_graph() const { return split_sources == 0; }
};

// Groups support pairs by source point (exact match up to merge_tol) and
// reports whether the plan is induced by a map on its atoms.
GraphnessReport graphness(const SupportSet& s, double merge_tol = 0.0);

// Source points of support pairs whose target lies in the closed ball around y.
std::vector<Vec> gamma_inverse_query(const SupportSet& s, const Vec& y, double r);

// Classifier deciding whether a point belongs to the finite surrogate of the
// inverse image of the target ball.
using InverseSurrogate = std::function<bool(const Vec&)>;

// Default surrogate: nearest support source point x* must own a pair
// (x*, y*) with |y* - y| <= r.
InverseSurrogate nearest_source_surrogate(const SupportSet& s, const Vec& y, double r);

struct RatioPoint {
    double delta = 0.0;
    double ratio = 0.0;    // in [0, 1] by construction
    double stderr_ = 0.0;  // binomial standard error
    std::int64_t accepted = 0;
};

// Monte Carlo estimate of the mass ratio
//     gamma(surrogate-inverse-image  and  B(x, delta)) / gamma(B(x, delta))
// by rejection sampling of g restricted to each ball, one seeded substream
// per delta. mc_samples counts total draws per delta; an acceptance rate
// under 1e-4 raises InsufficientSamples.
std::vector<RatioPoint> lebesgue_ratio_estimate(const SupportSet& s, const TruncatedGaussian& g,
                                                const Vec& x, const Vec& y, double r,
                                                const std::vector<double>& deltas,
                                                std::int64_t mc_samples, std::uint64_t seed,
                                                const InverseSurrogate* surrogate = nullptr);

}  // namespace otlab
