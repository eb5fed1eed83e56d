#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "snu/extreal.hpp"
#include "snu/profile.hpp"
#include "snu/treeseq.hpp"

// Brute-force oracles, independent of the implementation paths they check.
namespace snu::testing {

/// Grid minimization of alpha*p - nu(alpha) + 1 over [alpha_min, cap+2],
/// step 1e-4.
inline double conjugate_oracle(const Profile& nu, double p) {
    double hi = (nu.alpha_max() == std::numeric_limits<double>::infinity())
                    ? nu.segments().back().alpha
                    : nu.alpha_max();
    hi += 2.0;
    double best = std::numeric_limits<double>::infinity();
    for (double a = nu.alpha_min(); a <= hi; a += 1e-4)
        best = std::min(best, a * p - nu.eval(a).raw() + 1.0);
    return best;
}

/// Pointwise dual-profile value: clamp(alpha' + inf over a fine alpha grid of
/// {alpha : nu(alpha) - alpha > alpha'}).
inline ExtReal dual_oracle(const Profile& nu, double alpha_prime, double step = 1e-4) {
    double hi = (nu.alpha_max() == std::numeric_limits<double>::infinity())
                    ? nu.segments().back().alpha + 1.0
                    : nu.alpha_max();
    hi = std::max(hi + 2.0, 1.0 - alpha_prime + 1.0);
    for (double a = nu.alpha_min(); a <= hi; a += step) {
        ExtReal v = nu.eval(a);
        if (v.is_finite() && v.raw() - a > alpha_prime) return clamp(ExtReal(alpha_prime + a));
    }
    return ExtReal(1.0); // inf over the empty set is +inf
}

/// Dense-C feasibility scan for d_{alpha,beta}: 1e4 points over
/// [0, 2 * sup 2^(alpha j)|x|], refined twice around the smallest feasible C.
inline double distance_oracle(const TreeSequence& x, double alpha, ExtReal beta) {
    auto feasible = [&](double c) {
        for (std::uint32_t j = 0; j <= x.max_scale(); ++j) {
            double thr = c * std::exp2(-alpha * j);
            std::uint64_t count = 0;
            for (const auto& v : x.level(j))
                if (std::abs(v) >= thr) ++count;
            double cap = c * exp2_or_zero(beta, j);
            if (static_cast<double>(count) > cap) return false;
        }
        return true;
    };
    double hi = 0.0;
    for (std::uint32_t j = 0; j <= x.max_scale(); ++j)
        for (const auto& v : x.level(j)) hi = std::max(hi, std::abs(v) * std::exp2(alpha * j));
    if (hi == 0.0) return 0.0;
    double lo = 0.0;
    hi *= 2.0;
    for (int pass = 0; pass < 3; ++pass) {
        double step = (hi - lo) / 1e4;
        double first = hi;
        for (double c = lo; c <= hi; c += step)
            if (feasible(c)) {
                first = c;
                break;
            }
        lo = std::max(0.0, first - step);
        hi = first + step;
    }
    return 0.5 * (lo + hi);
}

} // namespace snu::testing
