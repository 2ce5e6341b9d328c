#include "otlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <string>

#include "otlab/errors.hpp"

namespace otlab {

SupportSet support_of(const TransportPlan& plan, const DiscreteMeasure& src,
                      const DiscreteMeasure& tgt) {
    const DiscreteMeasure sa = to_atoms(src);
    const DiscreteMeasure ta = to_atoms(tgt);
    SupportSet s;
    s.pairs.reserve(plan.entries.size());
    for (const auto& e : plan.entries)
        s.pairs.push_back({sa.atoms[std::size_t(e.i)].point, ta.atoms[std::size_t(e.j)].point,
                           e.mass});
    return s;
}

namespace {

double pair_cost(const CostSpec& spec, const SupportPair& a, const Vec& y) {
    return eval_cost(spec, a.x, y);
}

}  // namespace

CycleReport check_cyclical_monotonicity(const SupportSet& s, const CostSpec& spec,
                                        int max_cycle, double tol, std::int64_t sample_count,
                                        std::uint64_t seed) {
    if (max_cycle < 2 || max_cycle > 3)
        throw BadDimension("cycle length must be 2 or 3");

    const auto& p = s.pairs;
    const std::size_t n = p.size();
    CycleReport report;
    report.max_cycle = max_cycle;
    report.tol = tol;
    report.exhaustive = n <= 500;

    double worst = 0.0;
    auto probe2 = [&](std::size_t a, std::size_t b) {
        const double kept = pair_cost(spec, p[a], p[a].y) + pair_cost(spec, p[b], p[b].y);
        const double swapped = pair_cost(spec, p[a], p[b].y) + pair_cost(spec, p[b], p[a].y);
        worst = std::max(worst, kept - swapped);
    };
    auto probe3 = [&](std::size_t a, std::size_t b, std::size_t c) {
        const double kept = pair_cost(spec, p[a], p[a].y) + pair_cost(spec, p[b], p[b].y) +
                            pair_cost(spec, p[c], p[c].y);
        const double shifted = pair_cost(spec, p[a], p[b].y) + pair_cost(spec, p[b], p[c].y) +
                               pair_cost(spec, p[c], p[a].y);
        worst = std::max(worst, kept - shifted);
    };

    if (report.exhaustive) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) {
                probe2(a, b);
                ++report.cycles_checked;
            }
        if (max_cycle >= 3) {
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    if (b == a) continue;
                    for (std::size_t c = b + 1; c < n; ++c) {
                        if (c == a) continue;
                        probe3(a, b, c);
                        ++report.cycles_checked;
                    }
                }
        }
    } else {
        std::mt19937_64 rng(seed);
        auto pick = [&] { return std::size_t(rng() % n); };
        for (std::int64_t k = 0; k < sample_count; ++k) {
            const std::size_t a = pick(), b = pick();
            if (a == b) continue;
            if (max_cycle >= 3 && (k & 1)) {
                const std::size_t c = pick();
                if (c == a || c == b) continue;
                probe3(a, b, c);
            } else {
                probe2(a, b);
            }
            ++report.cycles_checked;
        }
    }

    report.worst_violation = worst;
    report.pass = worst <= tol;
    return report;
}

PotentialReport check_potential(const SupportSet& s, const KantorovichPotential& u,
                                double tol) {
    if (u.u_source.size() != u.source_points.size() ||
        u.u_target.size() != u.target_points.size() || u.u_target.empty())
        throw MissingValue("potential values missing for some atoms");

    PotentialReport report;

    // saturation on the support, through the potential's own evaluation
    for (const auto& pr : s.pairs) {
        const double gap = std::abs(u.evaluate(pr.x) - u.evaluate(pr.y) - dist(pr.x, pr.y));
        report.worst_support_gap = std::max(report.worst_support_gap, gap);
    }

    // 1-Lipschitz across the pooled atom set
    std::vector<const Vec*> pool;
    std::vector<double> val;
    for (std::size_t i = 0; i < u.source_points.size(); ++i) {
        pool.push_back(&u.source_points[i]);
        val.push_back(u.u_source[i]);
    }
    for (std::size_t j = 0; j < u.target_points.size(); ++j) {
        pool.push_back(&u.target_points[j]);
        val.push_back(u.u_target[j]);
    }
    for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = a + 1; b < pool.size(); ++b) {
            const double excess = std::abs(val[a] - val[b]) - dist(*pool[a], *pool[b]);
            report.worst_lipschitz_excess = std::max(report.worst_lipschitz_excess, excess);
        }

    report.pass = report.worst_support_gap <= tol && report.worst_lipschitz_excess <= 1e-9;
    return report;
}

namespace {

// Distance from p to the segment [a, b].
double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
    const Vec ab = sub(b, a);
    const double len2 = norm2(ab);
    if (len2 == 0.0) return dist(p, a);
    double t = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) t += (p[k] - a[k]) * ab[k];
    t = std::clamp(t / len2, 0.0, 1.0);
    double d2 = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double diff = p[k] - (a[k] + t * ab[k]);
        d2 += diff * diff;
    }
    return std::sqrt(d2);
}

}  // namespace

SegmentMonotonicityReport check_hsupopt(const SupportSet& s, double tol) {
    SegmentMonotonicityReport report;
    report.worst = std::numeric_limits<double>::infinity();

    const auto& p = s.pairs;
    for (std::size_t a = 0; a < p.size(); ++a) {
        for (std::size_t b = 0; b < p.size(); ++b) {
            const auto& xy = p[a];    // (x, y)
            const auto& xpyp = p[b];  // (x', y')
            const double seg_len = dist(xpyp.x, xpyp.y);
            const double collinear_tol = 1e-8 * std::max(seg_len, 1e-300);
            if (point_segment_distance(xy.x, xpyp.x, xpyp.y) > collinear_tol) continue;
            ++report.premise_count;
            if (xy.x != xpyp.x) ++report.nontrivial_count;
            const Vec g1 = alpha_gradient(sub(xy.y, xpyp.x));   // grad at y - x'
            const Vec g2 = alpha_gradient(sub(xpyp.y, xy.x));   // grad at y' - x
            const Vec dx = sub(xy.x, xpyp.x);
            const double inner = dot(sub(g1, g2), dx);
            report.worst = std::min(report.worst, inner);
        }
    }
    report.vacuous = report.nontrivial_count == 0;
    if (report.premise_count == 0) report.worst = 0.0;
    report.pass = report.vacuous || report.worst >= -tol;
    return report;
}

GraphnessReport graphness(const SupportSet& s, double merge_tol) {
    GraphnessReport report;

    // Group pairs by source point. With merge_tol = 0 grouping is exact;
    // otherwise a source joins the first group within merge_tol.
    std::vector<Vec> reps;
    std::vector<std::vector<std::size_t>> groups;
    std::map<Vec, std::size_t> exact;
    for (std::size_t k = 0; k < s.pairs.size(); ++k) {
        const Vec& x = s.pairs[k].x;
        std::size_t slot = reps.size();
        if (merge_tol == 0.0) {
            slot = exact.try_emplace(x, reps.size()).first->second;
        } else {
            for (std::size_t g = 0; g < reps.size(); ++g)
                if (dist(reps[g], x) <= merge_tol) {
                    slot = g;
                    break;
                }
        }
        if (slot == reps.size()) {
            reps.push_back(x);
            groups.emplace_back();
        }
        groups[slot].push_back(k);
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& members = groups[g];
        double spread = 0.0;
        bool split = false;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                const double d = dist(s.pairs[members[a]].y, s.pairs[members[b]].y);
                if (d > 0.0) {
                    split = true;
                    spread = std::max(spread, d);
                    if (!report.witness)
                        report.witness = {{s.pairs[members[a]], s.pairs[members[b]]}};
                }
            }
        if (split) ++report.split_sources;
        report.max_target_spread = std::max(report.max_target_spread, spread);
    }

    if (report.witness) {
        const auto& [p0, p1] = *report.witness;
        const Vec d0 = sub(p0.y, p0.x);  // y0 - x0
        const Vec d1 = sub(p1.y, p0.x);  // y1 - x0 (same source group)
        const Vec grad_diff = sub(alpha_gradient(d1), alpha_gradient(d0));
        report.witness_convexity_gap = dot(sub(d1, d0), grad_diff);
        report.witness_sign_probe = dot(grad_diff, d0);
    }
    return report;
}

std::vector<Vec> gamma_inverse_query(const SupportSet& s, const Vec& y, double r) {
    if (!(r >= 0.0)) throw BadDimension("ball radius must be nonnegative");
    std::vector<Vec> sources;
    for (const auto& p : s.pairs) {
        if (dist(p.y, y) > r) continue;
        if (std::find(sources.begin(), sources.end(), p.x) == sources.end())
            sources.push_back(p.x);
    }
    return sources;
}

InverseSurrogate nearest_source_surrogate(const SupportSet& s, const Vec& y, double r) {
    // Collect distinct source points and whether each owns a pair landing in
    // the target ball.
    struct SourceFlag {
        Vec x;
        bool hits = false;
    };
    auto flags = std::make_shared<std::vector<SourceFlag>>();
    for (const auto& p : s.pairs) {
        auto it = std::find_if(flags->begin(), flags->end(),
                               [&](const SourceFlag& f) { return f.x == p.x; });
        if (it == flags->end()) {
            flags->push_back({p.x, dist(p.y, y) <= r});
        } else if (dist(p.y, y) <= r) {
            it->hits = true;
        }
    }
    return [flags](const Vec& z) {
        double best = std::numeric_limits<double>::infinity();
        bool hit = false;
        for (const auto& f : *flags) {
            const double d = dist(f.x, z);
            if (d < best) {
                best = d;
                hit = f.hits;
            }
        }
        return hit;
    };
}

std::vector<RatioPoint> lebesgue_ratio_estimate(const SupportSet& s, const TruncatedGaussian& g,
                                                const Vec& x, const Vec& y, double r,
                                                const std::vector<double>& deltas,
                                                std::int64_t mc_samples, std::uint64_t seed,
                                                const InverseSurrogate* surrogate) {
    for (std::size_t k = 1; k < deltas.size(); ++k)
        if (!(deltas[k] < deltas[k - 1]))
            throw BadDimension("deltas must be strictly decreasing");
    InverseSurrogate def;
    if (surrogate == nullptr) {
        def = nearest_source_surrogate(s, y, r);
        surrogate = &def;
    }

    std::vector<RatioPoint> curve;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double delta = deltas[k];
        GaussianSampler sampler(split_seed(seed, k));
        std::int64_t accepted = 0, hits = 0;
        for (std::int64_t draw = 0; draw < mc_samples; ++draw) {
            const Vec z = sampler.draw(g);
            if (dist(z, x) >= delta) continue;
            ++accepted;
            if ((*surrogate)(z)) ++hits;
        }
        const double rate = double(accepted) / double(mc_samples);
        if (rate < 1e-4)
            throw InsufficientSamples("ball acceptance rate " + std::to_string(rate) +
                                      " below 1e-4 at delta " + std::to_string(delta));
        RatioPoint pt;
        pt.delta = delta;
        pt.accepted = accepted;
        pt.ratio = double(hits) / double(accepted);
        pt.stderr_ = std::sqrt(std::max(0.0, pt.ratio * (1.0 - pt.ratio)) / double(accepted));
        curve.push_back(pt);
    }
    return curve;
}

}  // namespace otlab
