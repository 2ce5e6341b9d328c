#pragma once

#include <cstddef>
#include <vector>

namespace otlab {

// Diagonal covariance of the reference Gaussian: one variance per coordinate,
// decaying fast enough that high coordinates are numerically negligible.
// The decay inequality c_{i+1} <= c_i / i^alpha_decay is enforced at
// construction for every index (1-based i).
struct CovarianceSpec {
    std::vector<double> c{1.0};  // variances, strictly positive
    double alpha_decay = 3.0;
    int dim_max = 8;

    std::size_t dim() const { return c.size(); }
};

enum class CovarianceMode { Equality, CustomSequence };

// Builds a covariance sequence. In Equality mode the recursion
// c_{i+1} = c_i / i^alpha_decay is applied exactly; a custom sequence is
// validated against the decay inequality instead.
//
// Throws BadAlpha if alpha_decay <= 5/2, DecayViolation if a custom sequence
// breaks the inequality at any index.
CovarianceSpec build_covariance(double c1, double alpha_decay, int dim_max,
                                CovarianceMode mode = CovarianceMode::Equality,
                                const std::vector<double>& custom = {});

// Checks the decay inequality on an arbitrary sequence (zero tolerance in the
// <= direction). Returns the first offending 1-based index, or 0 if none.
std::size_t decay_violation_index(const std::vector<double>& c, double alpha_decay);

}  // namespace otlab
