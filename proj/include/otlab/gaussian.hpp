#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "otlab/covariance.hpp"
#include "otlab/geometry.hpp"

namespace otlab {

// Centered product Gaussian on R^n with independent coordinates of variance
// c_1..c_n, n <= spec.dim_max. Immutable after construction.
struct TruncatedGaussian {
    CovarianceSpec spec;
    int n = 1;  // active dimension

    TruncatedGaussian() = default;  // one standard coordinate
    TruncatedGaussian(CovarianceSpec s, int active_dim);

    double variance(int axis) const { return spec.c[std::size_t(axis)]; }
    double sigma(int axis) const;
};

// Standard normal CDF.
double normal_cdf(double x);

// count i.i.d. draws, coordinate i ~ Normal(0, c_i). Deterministic given seed:
// mt19937_64 is fully specified by the standard, and the normal transform
// (Marsaglia polar) is implemented here rather than delegated to the standard
// library's unspecified distributions.
std::vector<Vec> sample(const TruncatedGaussian& g, int count, std::uint64_t seed);

// Stateful equivalent used by the Monte Carlo estimators.
class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
    double standard_normal();
    Vec draw(const TruncatedGaussian& g);

  private:
    double uniform01();
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// splitmix64 step: derives independent substream seeds from a master seed.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

}  // namespace otlab
