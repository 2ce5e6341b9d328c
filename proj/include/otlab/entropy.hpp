#pragma once

#include <string>
#include <vector>

#include "otlab/interpolation.hpp"

namespace otlab {

// Relative entropy of a measure against the truncated Gaussian, evaluated
// after snapping onto the declared grid:
//
//   ent_gamma    = sum p_k log(p_k / g_k)     g_k = exact Gaussian cell mass
//   ent_lebesgue = sum p_k log(p_k / vol_k)
//   second_moment_half = (1/2) sum p_k r2_k
//
// where r2_k is the effective squared radius of the cell, defined through the
// exact cell mass by g_k = vol_k (2 pi)^{-d/2} exp(-r2_k / 2). This makes the
// decomposition
//
//   ent_gamma = ent_lebesgue + second_moment_half + (d/2) log(2 pi)
//
// an identity between the three readings; for unit variances r2_k approaches
// |center_k|^2 quadratically as the grid refines. Empty cells contribute 0.
EntropyReading entropy_relative(const DiscreteMeasure& m, const TruncatedGaussian& g,
                                const GridSpec& grid);

enum class ConvexityMode { CEpsilon, W1 };

struct ConvexityRow {
    double t = 0.0;
    double ent_gamma = 0.0;
    double bound = 0.0;   // (1-t) E0 + t E1 - K(t), no slack
    double margin = 0.0;  // bound - ent_gamma
};

struct ConvexityReport {
    ConvexityMode mode = ConvexityMode::W1;
    double epsilon = 0.0;    // CEpsilon mode only
    double w_value = 0.0;    // transport cost recomputed from the plan entries
    double slack = 0.0;
    double worst_margin = 0.0;
    bool pass = false;
    std::vector<ConvexityRow> rows;
};

// Checks, at every interior t of the path,
//
//   Ent(rho_t) <= (1-t) Ent(rho_0) + t Ent(rho_1) - K(t) + slack
//
// with K(t) = t(1-t)/(2 (1+eps)^2) (W_eps - eps)^2 in CEpsilon mode (eps and
// the plan taken from a perturbed-cost solve) and K(t) = t(1-t)/2 W1^2 in W1
// mode. The transport cost W is recomputed as the plan's own cost integral.
ConvexityReport check_convexity(const InterpolationPath& path, ConvexityMode mode,
                                double slack);

struct GeodesicRow {
    double t = 0.0, s = 0.0;
    double w1_ts = 0.0;      // exact solve between the two interpolants
    double expected = 0.0;   // |t - s| * W1(rho_0, rho_1)
    double rel_err = 0.0;
};

struct GeodesicReport {
    double w1_end_to_end = 0.0;
    double worst_rel_err = 0.0;
    bool pass = false;
    std::vector<GeodesicRow> rows;
};

// Constant-speed property of the interpolation under a distance-optimal plan:
// W1(rho_t, rho_s) = |t - s| W1(rho_0, rho_1), checked by exact solves at the
// given (t, s) pairs within 1e-6 relative.
GeodesicReport geodesic_check(const InterpolationPath& path,
                              const std::vector<std::pair<double, double>>& pairs = {
                                  {0.0, 1.0}, {0.0, 0.5}, {0.5, 1.0}, {0.25, 0.75}});

}  // namespace otlab
