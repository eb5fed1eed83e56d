#include "snu/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace snu {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ScaleMagnitudes ScaleMagnitudes::from(const TreeSequence& x) {
    ScaleMagnitudes sm;
    sm.mags.resize(x.max_scale() + 1);
    for (std::uint32_t j = 0; j <= x.max_scale(); ++j) {
        auto& dst = sm.mags[j];
        for (const auto& v : x.level(j)) {
            double m = std::abs(v);
            if (m > 0.0) dst.push_back(m);
        }
        std::sort(dst.begin(), dst.end(), std::greater<>());
    }
    return sm;
}

std::uint64_t ScaleMagnitudes::count_at_least(std::uint32_t j, double threshold) const {
    const auto& m = mags.at(j);
    auto it = std::lower_bound(m.begin(), m.end(), threshold,
                               [](double v, double t) { return v >= t; });
    return static_cast<std::uint64_t>(it - m.begin());
}

ScaleMagnitudes ScaleMagnitudes::scaled(double factor) const {
    ScaleMagnitudes out = *this;
    for (auto& lvl : out.mags)
        for (double& v : lvl) v *= factor;
    return out;
}

double distance_d(const ScaleMagnitudes& x, double alpha, ExtReal beta) {
    if (beta.is_finite() && beta.raw() < 0.0)
        throw InvalidArgument("distance_d: finite beta must be non-negative");
    double d = 0.0;
    for (std::uint32_t j = 0; j < x.mags.size(); ++j) {
        const auto& m = x.mags[j];
        if (m.empty()) continue;
        double up = std::exp2(alpha * j);
        if (beta.is_neg_inf()) {
            d = std::max(d, m.front() * up);
            continue;
        }
        double inv_b = std::exp2(-beta.raw() * j);
        double scale_inf = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            double cand = std::min(m[i] * up, static_cast<double>(i + 1) * inv_b);
            if (cand > scale_inf)
                scale_inf = cand;
            else if (static_cast<double>(i + 1) * inv_b >= m[i] * up)
                break; // candidates only decrease past the crossing
        }
        d = std::max(d, scale_inf);
    }
    return d;
}

double distance_d(const TreeSequence& x, double alpha, ExtReal beta) {
    return distance_d(ScaleMagnitudes::from(x), alpha, beta);
}

double besov_norm(const ScaleMagnitudes& x, double alpha, double p) {
    if (!(p > 0.0) || p == kInf) throw InvalidArgument("besov_norm: p must be in (0, inf)");
    double best = 0.0;
    for (std::uint32_t j = 0; j < x.mags.size(); ++j) {
        const auto& m = x.mags[j];
        if (m.empty()) continue;
        double sum = 0.0;
        for (double v : m) sum += std::pow(v, p);
        best = std::max(best, std::exp2((alpha - 1.0 / p) * j) * std::pow(sum, 1.0 / p));
    }
    return best;
}

double besov_norm(const TreeSequence& x, double alpha, double p) {
    return besov_norm(ScaleMagnitudes::from(x), alpha, p);
}

double besov_sup(const ScaleMagnitudes& x, double alpha) {
    double best = 0.0;
    for (std::uint32_t j = 0; j < x.mags.size(); ++j)
        if (!x.mags[j].empty()) best = std::max(best, std::exp2(alpha * j) * x.mags[j].front());
    return best;
}

double besov_sup(const TreeSequence& x, double alpha) {
    return besov_sup(ScaleMagnitudes::from(x), alpha);
}

namespace {

/// Clip split at threshold t: x'' keeps each coefficient clipped to magnitude
/// t * 2^(-alpha*j) preserving phase; x' = x - x''. The parts are constructed
/// so that x' + x'' reproduces x exactly (x'' is recomputed as x - x', and
/// the rounding error of that difference is below half an ulp of x).
void clip_split(const TreeSequence& x, double alpha, double t, TreeSequence& x_prime,
                TreeSequence& x_dblprime) {
    for (std::uint32_t j = 0; j <= x.max_scale(); ++j) {
        auto src = x.level(j);
        auto dst_p = x_prime.level(j);
        auto dst_d = x_dblprime.level(j);
        double cap = t * std::exp2(-alpha * j);
        for (std::uint64_t k = 0; k < src.size(); ++k) {
            double m = std::abs(src[k]);
            if (m <= cap) {
                dst_p[k] = 0.0;
                dst_d[k] = src[k];
            } else {
                std::complex<double> clipped = src[k] * (cap / m);
                dst_p[k] = src[k] - clipped;
                dst_d[k] = src[k] - dst_p[k];
            }
        }
    }
}

struct ClipObjective {
    const TreeSequence& x;
    double alpha;
    double s;
    double p0;
    mutable TreeSequence xp, xd;

    double operator()(double t) const {
        clip_split(x, alpha, t, xp, xd);
        return besov_norm(xp, s, p0) + besov_sup(xd, alpha);
    }
};

} // namespace

SplitResult interp_pnorm(const TreeSequence& x, const Profile& nu, double alpha, double eps) {
    double p0 = nu.convexity_index();
    if (!(p0 > 0.0)) throw InvalidArgument("interp_pnorm: convexity index is 0, no p0-norm exists");
    if (!(alpha >= nu.alpha_min() && alpha < nu.alpha_max()))
        throw InvalidArgument("interp_pnorm: alpha outside [alpha_min, alpha_max)");
    if (!(eps > 0.0)) throw InvalidArgument("interp_pnorm: eps must be positive");

    double s = alpha + (1.0 - nu.eval(alpha).raw()) / p0 - eps;
    ClipObjective obj{x, alpha, s, p0, TreeSequence(x.max_scale()), TreeSequence(x.max_scale())};

    // Candidate thresholds: the activation values |x_{j,k}| * 2^(alpha*j)
    // where the objective has its kinks (quantile-thinned when large).
    std::vector<double> cands;
    for (std::uint32_t j = 0; j <= x.max_scale(); ++j) {
        double up = std::exp2(alpha * j);
        for (const auto& v : x.level(j)) {
            double m = std::abs(v);
            if (m > 0.0) cands.push_back(m * up);
        }
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    if (cands.size() > 256) {
        std::vector<double> thin;
        for (std::size_t i = 0; i < 256; ++i) thin.push_back(cands[i * cands.size() / 256]);
        thin.push_back(cands.back());
        cands = std::move(thin);
    }
    cands.insert(cands.begin(), 0.0);

    if (cands.size() == 1) { // zero sequence
        SplitResult r{TreeSequence(x.max_scale()), TreeSequence(x.max_scale()), 0.0, 0.0};
        return r;
    }

    std::size_t best_i = 0;
    double best = kInf;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        double v = obj(cands[i]);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }

    // Golden-section refinement inside the bracket around the best candidate.
    double lo = best_i > 0 ? cands[best_i - 1] : cands[best_i];
    double hi = best_i + 1 < cands.size() ? cands[best_i + 1] : cands[best_i];
    double best_t = cands[best_i];
    if (hi > lo) {
        const double gr = 0.6180339887498949;
        double a = lo, b = hi;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = obj(c), fd = obj(d);
        while (b - a > 1e-6 * std::max(1.0, b)) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = obj(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = obj(d);
            }
        }
        double mid = 0.5 * (a + b);
        if (obj(mid) < best) {
            best = obj(mid);
            best_t = mid;
        }
    }

    SplitResult r{TreeSequence(x.max_scale()), TreeSequence(x.max_scale()), best_t, 0.0};
    clip_split(x, alpha, best_t, r.x_prime, r.x_dblprime);
    r.total = besov_norm(r.x_prime, s, p0) + besov_sup(r.x_dblprime, alpha);
    return r;
}

DominationWitness besov_dominates_d(const TreeSequence& x, double alpha, double beta, double s,
                                    double p) {
    if (!(p > 0.0)) throw InvalidArgument("besov_dominates_d: p must be positive");
    if (beta < alpha * p + 1.0 - s - 1e-12)
        throw InvalidArgument("besov_dominates_d: hypothesis beta >= alpha*p + 1 - s fails");
    DominationWitness w;
    w.lhs = distance_d(x, alpha, ExtReal(beta));
    w.rhs = std::pow(besov_norm(x, s / p, p), p / (p + 1.0));
    w.holds = w.lhs <= w.rhs * (1.0 + 4e-16) + 4e-16;
    return w;
}

} // namespace snu
