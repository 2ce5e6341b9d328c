#include "otlab/covariance.hpp"

#include <cmath>
#include <string>

#include "otlab/errors.hpp"

namespace otlab {

std::size_t decay_violation_index(const std::vector<double>& c, double alpha_decay) {
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const double bound = c[i] / std::pow(double(i + 1), alpha_decay);
        if (!(c[i + 1] <= bound)) return i + 1;
    }
    return 0;
}

CovarianceSpec build_covariance(double c1, double alpha_decay, int dim_max,
                                CovarianceMode mode,
                                const std::vector<double>& custom) {
    if (!(alpha_decay > 2.5))
        throw BadAlpha("alpha_decay must exceed 5/2, got " + std::to_string(alpha_decay));
    if (dim_max < 1)
        throw BadDimension("dim_max must be >= 1, got " + std::to_string(dim_max));

    CovarianceSpec spec;
    spec.alpha_decay = alpha_decay;
    spec.dim_max = dim_max;

    if (mode == CovarianceMode::Equality) {
        if (!(c1 > 0.0) || !std::isfinite(c1))
            throw DecayViolation("c1 must be finite and positive");
        spec.c.resize(std::size_t(dim_max));
        spec.c[0] = c1;
        for (int i = 1; i < dim_max; ++i)
            spec.c[std::size_t(i)] = spec.c[std::size_t(i - 1)] / std::pow(double(i), alpha_decay);
    } else {
        if (custom.empty()) throw DecayViolation("custom sequence is empty");
        if (int(custom.size()) > dim_max)
            throw BadDimension("custom sequence longer than dim_max");
        for (double v : custom)
            if (!(v > 0.0) || !std::isfinite(v))
                throw DecayViolation("custom sequence must be finite and strictly positive");
        if (std::size_t bad = decay_violation_index(custom, alpha_decay); bad != 0)
            throw DecayViolation("decay inequality fails at index " + std::to_string(bad));
        spec.c = custom;
    }

    for (double v : spec.c)
        if (!(v > 0.0) || !std::isfinite(v))
            throw DecayViolation("variance underflow: sequence left the positive range");
    return spec;
}

}  // namespace otlab
