#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "snu/extreal.hpp"

namespace snu {

/// One linear piece of a profile: on [alpha, next.alpha) the profile equals
/// value + slope * (a - alpha). The last segment extends to +inf.
struct ProfileSegment {
    double alpha;
    double value;
    double slope;
};

/// Piecewise-linear admissible profile: a non-decreasing right-continuous
/// function with values in {-inf} u [0, 1], equal to -inf below alpha_min,
/// constant 1 once the value 1 is attained.
///
/// Segments are closed on the left, so right-continuity holds by
/// construction; upward jumps between consecutive segments are allowed.
class Profile {
  public:
    /// Validates all invariants; throws ProfileInvariantError naming the
    /// violated one.
    Profile(double alpha_min, std::vector<ProfileSegment> segments);
    explicit Profile(std::vector<ProfileSegment> segments);

    double alpha_min() const { return segs_.front().alpha; }

    /// Smallest alpha with value 1, or +inf when 1 is never attained
    /// (the infimum of an empty set).
    double alpha_max() const { return alpha_max_; }

    const std::vector<ProfileSegment>& segments() const { return segs_; }

    /// -inf below alpha_min, else the piecewise-linear value (in [0, 1]).
    ExtReal eval(double alpha) const;

    /// Value approached from the left; -inf at and below alpha_min.
    ExtReal left_limit(double alpha) const;

    /// True when the profile jumps upward at alpha (including the jump from
    /// -inf at alpha_min).
    bool has_jump_at(double alpha, double tol = 1e-12) const;

    /// liminf of forward difference quotients; for piecewise-linear profiles
    /// the slope of the segment containing alpha (the segment *starting* at
    /// alpha when alpha is a breakpoint). Throws below alpha_min.
    double right_inf_derivative(double alpha) const;

    /// 1 ^ inf of the right-inf derivative over [alpha_min, alpha_max);
    /// 1 when that range is empty.
    double convexity_index() const;

    /// True iff the restriction to [alpha_min, +inf) is concave: no jumps
    /// after alpha_min and non-increasing slopes.
    bool is_concave(double tol = 1e-9) const;

    /// Index of the segment whose half-open interval contains alpha.
    /// Precondition: alpha >= alpha_min.
    std::size_t segment_index(double alpha) const;

    /// Breakpoint abscissas followed by segment midpoints, sorted. The
    /// unbounded last segment contributes alpha + 0.5 as its "midpoint".
    std::vector<double> refined_grid() const;

  private:
    void validate() const;

    std::vector<ProfileSegment> segs_;
    double alpha_max_;
};

/// (alpha_min, alpha_max) with alpha_max = +inf when 1 is never attained.
std::pair<double, double> alpha_bounds(const Profile& nu);

/// eta(p) = inf_{alpha >= alpha_min} (alpha*p - nu(alpha) + 1), p > 0.
/// For piecewise-linear profiles the infimum is attained at a breakpoint, so
/// it is evaluated in closed form.
double concave_conjugate(const Profile& nu, double p);

/// inf over the supplied grid of alpha*p - eta(p) + 1. Recovers nu(alpha)
/// exactly (up to grid resolution) only when nu is concave. Throws on an
/// empty grid or non-positive grid points.
double inverse_conjugate(const std::function<double(double)>& eta,
                         std::span<const double> p_grid, double alpha);

/// Dual profile nu': alpha' -> clamp(alpha' + inf{alpha : nu(alpha) - alpha > alpha'}),
/// computed in closed form from the segment data (convention inf {} = +inf,
/// which clamps to 1). The result satisfies alpha'_min = -alpha_min exactly
/// and 1 - alpha_max <= alpha'_max <= 1 - alpha_min; both are verified before
/// returning (failure signals an implementation bug, not a user error).
Profile dual_profile(const Profile& nu);

/// The dual profile translated right by eps > 0: nu'_eps(a') = nu'(a' - eps).
Profile shifted_dual(const Profile& nu, double eps);

/// eta'(p') = (p'-1) * (1 - eta(p'/(p'-1))) + 1 for p' > 1; requires nu
/// concave. The map p' -> eta'(p') is convex.
double dual_conjugate(const Profile& nu, double p_prime);

/// Precomputed eta' table for repeated dual_from_conjugate evaluations on the
/// same profile: 10^4 log-spaced points on (1, 100] plus the exact kink
/// abscissas p' = s/(s-1) of the profile's segment slopes s > 1 and
/// near-boundary points (the supremum can be approached as p' -> 1+).
class DualConjugateTable {
  public:
    explicit DualConjugateTable(const Profile& nu);

    /// sup over the candidate grid of alpha'*p' - eta'(p') + 1.
    double sup_at(double alpha_prime) const;

    std::span<const double> grid() const { return p_grid_; }

  private:
    std::vector<double> p_grid_;
    std::vector<double> eta_prime_;
};

/// nu'(alpha') = sup_{p' > 1} (alpha'*p' - eta'(p') + 1), evaluated as a
/// supremum over the DualConjugateTable grid. Requires nu concave and
/// alpha' in [alpha'_min, alpha'_max) of the dual profile.
double dual_from_conjugate(const Profile& nu, double alpha_prime);

/// Executable form of the mean-value equivalence for the right-inf
/// derivative: returns whether the derivative is >= p throughout
/// [alpha_min, alpha_max), after asserting that the finite-difference
/// inequality nu(a) - nu(a') >= p (a - a') on a breakpoint-refined grid of
/// pairs yields the identical truth value (mismatch throws logic_error).
bool mean_value_equivalence(const Profile& nu, double p);

/// Grid check of the dual-profile properties used across the experiments:
/// right-continuity (structural), the duality inequality
/// alpha + alpha' >= min(nu(alpha), nu'(alpha')), the touching case
/// nu'(alpha') = alpha + alpha' => nu'(alpha') <= nu(alpha), the slope bound
/// nu'(alpha' - eps) <= nu'(alpha') - eps, and the edge identities
/// alpha'_min = -alpha_min (exact) and alpha'_max in [1-alpha_max, 1-alpha_min].
struct DualPropertyReport {
    bool right_continuous = true;
    bool duality = true;
    bool touching = true;
    bool slope = true;
    bool edge_min = true;
    bool edge_max = true;
    std::string detail; // first violation, empty when all pass

    bool all() const {
        return right_continuous && duality && touching && slope && edge_min && edge_max;
    }
};

DualPropertyReport check_dual_properties(const Profile& nu, double grid_step = 1e-3,
                                         double tol = 1e-9);

} // namespace snu
