#pragma once

#include <utility>
#include <vector>

#include "otlab/measure.hpp"
#include "otlab/plan.hpp"
#include "otlab/transport.hpp"

namespace otlab {

// One solve per rung of a decreasing epsilon ladder, each with the perturbed
// cost |x-y| + eps * alpha(x-y). As eps shrinks the distance integrals are
// nonincreasing and the alpha integrals nondecreasing; the rung plans
// approach the plan selected by minimizing alpha over the distance-optimal
// face.
struct EpsilonLadder {
    std::vector<double> epsilons;
    std::vector<TransportPlan> plans;
    std::vector<double> w1_values;     // distance integral per rung
    std::vector<double> alpha_values;  // alpha integral per rung
    std::uint64_t source_ref = 0;
    std::uint64_t target_ref = 0;

    const TransportPlan& last_plan() const { return plans.back(); }
};

// Comparison of the ladder limit against the two-stage optimum. The limit
// inequalities w1_limit <= w1_opt + tol and alpha_limit <= alpha_opt + tol
// (tol = 1e-6) certify that the ladder's limit plan sits inside the
// second-stage optimal set.
struct SelectionCertificate {
    double w1_limit = 0.0;
    double alpha_limit = 0.0;
    double w1_opt = 0.0;
    double alpha_opt = 0.0;
    double w1_gap = 0.0;     // w1_limit - w1_opt
    double alpha_gap = 0.0;  // alpha_limit - alpha_opt
    bool w1_ok = false;
    bool alpha_ok = false;
    bool stabilized = false;      // last two rungs agree in pattern and mass
    bool low_confidence = false;  // fewer than two rungs
};

inline constexpr double kCertificateTol = 1e-6;

// The default rung sequence {1e-1, 3e-2, 1e-2, ..., 1e-4}.
std::vector<double> default_epsilon_ladder();

// Same sparsity pattern and masses within tol.
bool plans_match(const TransportPlan& a, const TransportPlan& b, double tol = 1e-9);

EpsilonLadder run_ladder(const DiscreteMeasure& src, const DiscreteMeasure& tgt,
                         const std::vector<double>& epsilons);

struct TwoStageResult {
    TransportPlan plan;   // minimizer of the alpha integral over the stage-1 face
    double w1_opt = 0.0;  // stage-1 optimal distance cost
    double alpha_opt = 0.0;
};

// Stage 1: exact distance-cost optimum W1. Stage 2: minimize the alpha
// integral over couplings with distance integral <= W1 * (1 + face_tol).
TwoStageResult two_stage_solve(const DiscreteMeasure& src, const DiscreteMeasure& tgt,
                               double face_tol = 1e-9);

// Runs the two-stage solve and the default ladder, returning the selected
// plan with its certificate.
std::pair<TransportPlan, SelectionCertificate> two_stage_oracle(
    const DiscreteMeasure& src, const DiscreteMeasure& tgt, double face_tol = 1e-9);

// Certificate from an existing ladder and an independently produced selected
// plan. Throws NonMonotoneLadder when the distance integrals increase along
// the ladder beyond 1e-9, ConfigError when the measures differ.
SelectionCertificate convergence_report(const EpsilonLadder& ladder,
                                        const TransportPlan& oracle_plan,
                                        const DiscreteMeasure& src, const DiscreteMeasure& tgt);

}  // namespace otlab
