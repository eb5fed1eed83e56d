#pragma once

#include "snu/extreal.hpp"
#include "snu/profile.hpp"
#include "snu/treeseq.hpp"

namespace snu {

/// Per-scale coefficient magnitudes sorted descending, zeros dropped.
/// Precompute once per sequence when evaluating several distances.
struct ScaleMagnitudes {
    std::vector<std::vector<double>> mags;

    static ScaleMagnitudes from(const TreeSequence& x);

    /// card{k : |x_{j,k}| >= threshold} for threshold > 0.
    std::uint64_t count_at_least(std::uint32_t j, double threshold) const;

    /// Copy with every magnitude multiplied by factor > 0.
    ScaleMagnitudes scaled(double factor) const;
};

/// d_{alpha,beta}(x): the infimum of C >= 0 such that at every scale at most
/// C * 2^(beta*j) coefficients have |x_{j,k}| >= C * 2^(-alpha*j). For
/// beta = -inf this is sup_{j,k} 2^(alpha*j) |x_{j,k}| (the convention
/// 2^(j*beta) = 0 forces zero exceedances). The returned value is the
/// infimum of the feasible set, which may itself be infeasible.
///
/// Per scale the infimum is exact: with magnitudes m_1 >= m_2 >= ... it equals
/// max_i min(m_i * 2^(alpha*j), i * 2^(-beta*j)), and the result is the
/// maximum over scales. beta must be -inf or >= 0.
double distance_d(const ScaleMagnitudes& x, double alpha, ExtReal beta);
double distance_d(const TreeSequence& x, double alpha, ExtReal beta);

/// sup_j 2^((alpha - 1/p) j) (sum_k |x_{j,k}|^p)^(1/p), 0 < p < infinity.
double besov_norm(const TreeSequence& x, double alpha, double p);
double besov_norm(const ScaleMagnitudes& x, double alpha, double p);

/// sup_{j,k} 2^(alpha*j) |x_{j,k}|; equals distance_d(x, alpha, -inf).
double besov_sup(const TreeSequence& x, double alpha);
double besov_sup(const ScaleMagnitudes& x, double alpha);

/// Result of the interpolation p0-norm upper bound: a feasible split
/// x = x' + x'' (exact coefficient-wise) with the achieved objective.
struct SplitResult {
    TreeSequence x_prime;    // Besov part
    TreeSequence x_dblprime; // sup part
    double threshold;
    double total;
};

/// Upper bound on inf{ |x'|_{b^s_{p0,inf}} + |x''|_{b^alpha_{inf,inf}} :
/// x' + x'' = x } with s = alpha + (1 - nu(alpha))/p0 - eps, obtained by
/// one-parameter threshold splitting: x''(t) clips every coefficient to
/// magnitude <= t * 2^(-alpha*j) preserving phase. Given the sup level, the
/// clip split dominates every other split, so only the threshold search is
/// approximate: candidate thresholds (the per-coefficient activation values)
/// are scanned, then golden-section refines the best bracket to rel. 1e-6.
/// Requires p0 = convexity_index(nu) > 0, alpha in [alpha_min, alpha_max),
/// eps > 0.
SplitResult interp_pnorm(const TreeSequence& x, const Profile& nu, double alpha, double eps);

/// Checked instance of the Besov-to-distance bound: when beta >= alpha*p + 1 - s,
/// d_{alpha,beta}(x) <= |x|_{b^{s/p}_{p,inf}}^(p/(p+1)). Throws when the
/// hypothesis fails (caller bug).
struct DominationWitness {
    bool holds;
    double lhs; // d_{alpha,beta}(x)
    double rhs; // besov_norm(x, s/p, p)^(p/(p+1))
};

DominationWitness besov_dominates_d(const TreeSequence& x, double alpha, double beta, double s,
                                    double p);

} // namespace snu
