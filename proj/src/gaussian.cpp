#include "otlab/gaussian.hpp"

#include <cmath>
#include <string>

#include "otlab/errors.hpp"

namespace otlab {

TruncatedGaussian::TruncatedGaussian(CovarianceSpec s, int active_dim) : spec(std::move(s)), n(active_dim) {
    if (n < 1 || std::size_t(n) > spec.dim())
        throw BadDimension("active dimension " + std::to_string(n) + " outside 1.." +
                           std::to_string(spec.dim()));
}

double TruncatedGaussian::sigma(int axis) const { return std::sqrt(variance(axis)); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double GaussianSampler::uniform01() {
    // 53-bit mantissa uniform in (0,1].
    return (double(rng_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSampler::standard_normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

Vec GaussianSampler::draw(const TruncatedGaussian& g) {
    Vec p(std::size_t(g.n));
    for (int i = 0; i < g.n; ++i) p[std::size_t(i)] = g.sigma(i) * standard_normal();
    return p;
}

std::vector<Vec> sample(const TruncatedGaussian& g, int count, std::uint64_t seed) {
    if (count < 1) throw BadDimension("sample count must be >= 1");
    GaussianSampler s(seed);
    std::vector<Vec> out;
    out.reserve(std::size_t(count));
    for (int k = 0; k < count; ++k) out.push_back(s.draw(g));
    return out;
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace otlab
