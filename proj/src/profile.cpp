#include "snu/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace snu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const ProfileSegment& s, std::size_t i) {
    std::ostringstream os;
    os << "segment " << i << " (alpha=" << s.alpha << ", value=" << s.value
       << ", slope=" << s.slope << ")";
    return os.str();
}

} // namespace

Profile::Profile(double alpha_min, std::vector<ProfileSegment> segments)
    : segs_(std::move(segments)), alpha_max_(kInf) {
    if (segs_.empty())
        throw ProfileInvariantError("segments_nonempty", "profile has no segments");
    if (segs_.front().alpha != alpha_min)
        throw ProfileInvariantError("first_alpha_equals_alpha_min",
                                    "first segment alpha does not equal alpha_min");
    validate();
    for (const auto& s : segs_)
        if (s.value >= 1.0) {
            alpha_max_ = s.alpha;
            break;
        }
}

Profile::Profile(std::vector<ProfileSegment> segments)
    : segs_(std::move(segments)), alpha_max_(kInf) {
    if (segs_.empty())
        throw ProfileInvariantError("segments_nonempty", "profile has no segments");
    validate();
    for (const auto& s : segs_)
        if (s.value >= 1.0) {
            alpha_max_ = s.alpha;
            break;
        }
}

void Profile::validate() const {
    constexpr double eps = 1e-12;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        const auto& s = segs_[i];
        if (!std::isfinite(s.alpha) || !std::isfinite(s.value) || !std::isfinite(s.slope))
            throw ProfileInvariantError("finite_fields", describe(s, i) + " has a non-finite field");
        if (s.value < 0.0 || s.value > 1.0)
            throw ProfileInvariantError("value_range", describe(s, i) + " value outside [0, 1]");
        if (s.slope < 0.0)
            throw ProfileInvariantError("slope_nonnegative", describe(s, i) + " has negative slope");
        if (i + 1 < segs_.size()) {
            const auto& t = segs_[i + 1];
            if (!(s.alpha < t.alpha))
                throw ProfileInvariantError("alpha_sorted",
                                            describe(t, i + 1) + " does not increase alpha");
            double end = s.value + s.slope * (t.alpha - s.alpha);
            if (end > 1.0 + eps)
                throw ProfileInvariantError("value_range",
                                            describe(s, i) + " exceeds 1 before its end");
            if (end > t.value + eps)
                throw ProfileInvariantError("monotone_nondecreasing",
                                            describe(t, i + 1) + " drops below the previous segment");
        }
    }
    // Once the value 1 is attained the profile must stay constant 1.
    bool plateau = false;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        if (plateau && (segs_[i].value != 1.0 || segs_[i].slope != 0.0))
            throw ProfileInvariantError("plateau_after_one",
                                        describe(segs_[i], i) + " after the value 1 was attained");
        if (segs_[i].value >= 1.0) plateau = true;
    }
    if (segs_.back().slope != 0.0)
        throw ProfileInvariantError("last_slope_zero", "last segment must extend flat to +inf");
}

std::size_t Profile::segment_index(double alpha) const {
    auto it = std::upper_bound(segs_.begin(), segs_.end(), alpha,
                               [](double a, const ProfileSegment& s) { return a < s.alpha; });
    return static_cast<std::size_t>(it - segs_.begin()) - 1;
}

ExtReal Profile::eval(double alpha) const {
    if (alpha < alpha_min()) return ExtReal::neg_inf();
    const auto& s = segs_[segment_index(alpha)];
    double v = s.value + s.slope * (alpha - s.alpha);
    return ExtReal(std::min(v, 1.0));
}

ExtReal Profile::left_limit(double alpha) const {
    if (alpha <= alpha_min()) return ExtReal::neg_inf();
    std::size_t i = segment_index(alpha);
    if (segs_[i].alpha == alpha) --i; // limit comes from the previous segment
    const auto& s = segs_[i];
    double hi = (i + 1 < segs_.size()) ? std::min(alpha, segs_[i + 1].alpha) : alpha;
    return ExtReal(std::min(s.value + s.slope * (hi - s.alpha), 1.0));
}

bool Profile::has_jump_at(double alpha, double tol) const {
    ExtReal lim = left_limit(alpha);
    ExtReal val = eval(alpha);
    if (val.is_neg_inf()) return false;
    if (lim.is_neg_inf()) return true;
    return val.raw() > lim.raw() + tol;
}

double Profile::right_inf_derivative(double alpha) const {
    if (alpha < alpha_min())
        throw InvalidArgument("right_inf_derivative undefined where the profile is -inf");
    return segs_[segment_index(alpha)].slope;
}

double Profile::convexity_index() const {
    if (alpha_max_ == alpha_min()) return 1.0; // empty range, inf {} = +inf
    double m = kInf;
    for (const auto& s : segs_) {
        if (s.alpha >= alpha_max_) break;
        m = std::min(m, s.slope);
    }
    return std::min(1.0, m);
}

bool Profile::is_concave(double tol) const {
    for (std::size_t i = 0; i + 1 < segs_.size(); ++i) {
        const auto& s = segs_[i];
        const auto& t = segs_[i + 1];
        double end = s.value + s.slope * (t.alpha - s.alpha);
        if (t.value > end + tol) return false; // upward jump after alpha_min
        if (t.slope > s.slope + tol) return false;
    }
    return true;
}

std::vector<double> Profile::refined_grid() const {
    std::vector<double> g;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
        g.push_back(segs_[i].alpha);
        double mid = (i + 1 < segs_.size()) ? 0.5 * (segs_[i].alpha + segs_[i + 1].alpha)
                                            : segs_[i].alpha + 0.5;
        g.push_back(mid);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

std::pair<double, double> alpha_bounds(const Profile& nu) {
    return {nu.alpha_min(), nu.alpha_max()};
}

double concave_conjugate(const Profile& nu, double p) {
    if (!(p > 0.0)) throw InvalidArgument("concave_conjugate requires p > 0");
    // The objective alpha*p - nu(alpha) + 1 is piecewise linear with only
    // downward jumps at breakpoints, and the final segment has nu-slope 0 so
    // the objective eventually increases; the infimum sits at a breakpoint.
    double best = kInf;
    for (const auto& s : nu.segments()) best = std::min(best, s.alpha * p - s.value + 1.0);
    return best;
}

double inverse_conjugate(const std::function<double(double)>& eta,
                         std::span<const double> p_grid, double alpha) {
    if (p_grid.empty()) throw InvalidArgument("inverse_conjugate requires a non-empty p grid");
    double best = kInf;
    for (double p : p_grid) {
        if (!(p > 0.0)) throw InvalidArgument("inverse_conjugate grid points must be positive");
        best = std::min(best, alpha * p - eta(p) + 1.0);
    }
    return best;
}

namespace {

// Pieces of the level map L -> inf{a : g(a) > L} for g(a) = nu(a) - a,
// obtained by inverting the running maximum of g. A Jump piece (of the
// running max) makes the level map constant; a Rise piece makes it linear.
struct InversePiece {
    double level_lo; // -inf allowed on the first piece
    double level_hi;
    bool is_jump;
    double pos;      // jump: the constant position
    double x0;       // rise: position where the running max crosses level_lo
    double m;        // rise: slope of g (> 0)
};

std::vector<InversePiece> inverse_pieces(const Profile& nu) {
    const auto& segs = nu.segments();
    std::vector<InversePiece> pieces;
    double hcur = -kInf;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        double gv = s.value - s.alpha;
        double gm = s.slope - 1.0;
        if (gv > hcur) {
            pieces.push_back({hcur, gv, true, s.alpha, 0.0, 0.0});
            hcur = gv;
        }
        if (gm > 0.0 && i + 1 < segs.size()) { // the last segment has slope -1
            double b = segs[i + 1].alpha;
            double end = gv + gm * (b - s.alpha);
            if (end > hcur) {
                double start_level = std::max(hcur, gv);
                double x_start = (start_level <= gv) ? s.alpha
                                                     : s.alpha + (start_level - gv) / gm;
                pieces.push_back({start_level, end, false, 0.0, x_start, gm});
                hcur = end;
            }
        }
    }
    return pieces;
}

} // namespace

Profile dual_profile(const Profile& nu) {
    const double a_min = nu.alpha_min();
    const auto pieces = inverse_pieces(nu);
    const double g_sup = pieces.empty() ? -kInf : pieces.back().level_hi;

    // Assemble clamp(alpha' + f(alpha')) where f is the level map. Within a
    // piece the pre-clamp value F is linear with slope 1 (jump piece) or
    // 1 + 1/m (rise piece), so F is strictly increasing with upward jumps
    // only; crossings of 0 and 1 are solved per piece in closed form.
    std::vector<ProfileSegment> out;
    bool done = false;
    for (const auto& pc : pieces) {
        if (done) break;
        double slope, f_lo, t0, t1;
        if (pc.is_jump) {
            slope = 1.0;
            f_lo = pc.level_lo + pc.pos; // -inf on the first piece
            t0 = -pc.pos;
            t1 = 1.0 - pc.pos;
        } else {
            slope = 1.0 + 1.0 / pc.m;
            f_lo = pc.level_lo + pc.x0;
            t0 = pc.level_lo + (0.0 - f_lo) / slope;
            t1 = pc.level_lo + (1.0 - f_lo) / slope;
        }
        if (f_lo >= 1.0) { // jumps straight onto the plateau
            out.push_back({pc.level_lo, 1.0, 0.0});
            done = true;
            break;
        }
        double start, value;
        if (f_lo >= 0.0) {
            start = pc.level_lo;
            value = f_lo;
        } else if (t0 < pc.level_hi) {
            start = t0;
            value = 0.0;
        } else {
            continue; // F stays negative on this piece
        }
        if (t1 < pc.level_hi) {
            if (t1 > start) out.push_back({start, value, slope});
            out.push_back({t1, 1.0, 0.0});
            done = true;
        } else {
            out.push_back({start, value, slope});
        }
    }
    if (!done) out.push_back({g_sup, 1.0, 0.0}); // f = +inf from level g_sup on

    // The first breakpoint is -alpha_min exactly; pin it to kill rounding
    // from the crossing arithmetic.
    if (std::abs(out.front().alpha - (-a_min)) > 1e-9)
        throw std::logic_error("dual_profile: alpha'_min != -alpha_min");
    out.front().alpha = -a_min;

    Profile dual = [&] {
        try {
            return Profile(std::move(out));
        } catch (const ProfileInvariantError& e) {
            throw std::logic_error(std::string("dual_profile produced an invalid profile: ") +
                                   e.what());
        }
    }();

    if (dual.alpha_min() != -a_min)
        throw std::logic_error("dual_profile: alpha'_min != -alpha_min");
    double lo = (nu.alpha_max() == kInf) ? -kInf : 1.0 - nu.alpha_max();
    if (dual.alpha_max() < lo - 1e-9 || dual.alpha_max() > 1.0 - a_min + 1e-9)
        throw std::logic_error("dual_profile: alpha'_max outside [1 - alpha_max, 1 - alpha_min]");
    return dual;
}

Profile shifted_dual(const Profile& nu, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("shifted_dual requires eps > 0");
    Profile d = dual_profile(nu);
    std::vector<ProfileSegment> segs = d.segments();
    for (auto& s : segs) s.alpha += eps;
    return Profile(std::move(segs));
}

double dual_conjugate(const Profile& nu, double p_prime) {
    if (!(p_prime > 1.0)) throw InvalidArgument("dual_conjugate requires p' > 1");
    if (!nu.is_concave()) throw InvalidArgument("dual_conjugate requires a concave profile");
    double p = p_prime / (p_prime - 1.0);
    return (p_prime - 1.0) * (1.0 - concave_conjugate(nu, p)) + 1.0;
}

DualConjugateTable::DualConjugateTable(const Profile& nu) {
    if (!nu.is_concave())
        throw InvalidArgument("DualConjugateTable requires a concave profile");
    constexpr int n = 10000;
    const double log_hi = std::log(100.0);
    p_grid_.reserve(n + 8);
    for (int i = 1; i <= n; ++i) p_grid_.push_back(std::exp(log_hi * i / n));
    // Exact kinks of eta' (the conjugate's argmin switches at the segment
    // slopes) and near-1 points for suprema approached at the boundary.
    for (const auto& s : nu.segments())
        if (s.slope > 1.0) p_grid_.push_back(s.slope / (s.slope - 1.0));
    p_grid_.push_back(1.0 + 1e-9);
    p_grid_.push_back(1.0 + 1e-6);
    eta_prime_.reserve(p_grid_.size());
    for (double pp : p_grid_) eta_prime_.push_back(dual_conjugate(nu, pp));
}

double DualConjugateTable::sup_at(double alpha_prime) const {
    double best = -kInf;
    for (std::size_t i = 0; i < p_grid_.size(); ++i)
        best = std::max(best, alpha_prime * p_grid_[i] - eta_prime_[i] + 1.0);
    return best;
}

double dual_from_conjugate(const Profile& nu, double alpha_prime) {
    Profile d = dual_profile(nu);
    if (alpha_prime < d.alpha_min() || alpha_prime >= d.alpha_max())
        throw InvalidArgument("dual_from_conjugate: alpha' outside [alpha'_min, alpha'_max)");
    return DualConjugateTable(nu).sup_at(alpha_prime);
}

bool mean_value_equivalence(const Profile& nu, double p) {
    if (!(p > 0.0)) throw InvalidArgument("mean_value_equivalence requires p > 0");
    const double a_min = nu.alpha_min();
    const double a_max = nu.alpha_max();

    bool derivative_bound = true;
    if (a_max > a_min) {
        for (const auto& s : nu.segments()) {
            if (s.alpha >= a_max) break;
            if (s.slope < p) {
                derivative_bound = false;
                break;
            }
        }
    }

    // Finite-difference form on a breakpoint-refined grid of pairs.
    std::vector<double> grid;
    for (const auto& s : nu.segments()) {
        if (s.alpha >= a_max) break;
        double hi = a_max;
        for (const auto& t : nu.segments())
            if (t.alpha > s.alpha) {
                hi = std::min(hi, t.alpha);
                break;
            }
        double len = (hi == kInf) ? 2.0 : hi - s.alpha;
        for (double frac : {0.0, 0.25, 0.5, 0.75})
            if (s.alpha + frac * len < a_max) grid.push_back(s.alpha + frac * len);
    }
    bool finite_difference = true;
    for (std::size_t i = 0; i < grid.size() && finite_difference; ++i)
        for (std::size_t j = i; j < grid.size(); ++j) {
            double lo = std::min(grid[i], grid[j]), hi = std::max(grid[i], grid[j]);
            double dv = nu.eval(hi).raw() - nu.eval(lo).raw();
            if (dv < p * (hi - lo) - 1e-12) {
                finite_difference = false;
                break;
            }
        }

    if (derivative_bound != finite_difference)
        throw std::logic_error("mean_value_equivalence: the two assertions disagree");
    return derivative_bound;
}

DualPropertyReport check_dual_properties(const Profile& nu, double grid_step, double tol) {
    DualPropertyReport rep;
    Profile dual = dual_profile(nu);

    auto fail = [&](bool& flag, const std::string& what) {
        if (flag && rep.detail.empty()) rep.detail = what;
        flag = false;
    };

    // structural right-continuity: the Profile representation is closed on
    // the left by construction; re-validate by round-tripping the segments.
    try {
        Profile(dual.segments());
    } catch (const ProfileInvariantError& e) {
        fail(rep.right_continuous, e.what());
    }

    double a_hi = (nu.alpha_max() == kInf) ? nu.segments().back().alpha + 1.0 : nu.alpha_max();
    double ap_hi = dual.alpha_max();
    std::vector<double> alphas, alpha_ps;
    for (double a = nu.alpha_min() - 0.25; a <= a_hi + 0.25 + 1e-12; a += grid_step)
        alphas.push_back(a);
    for (double a = dual.alpha_min() - 0.25; a <= ap_hi + 0.25 + 1e-12; a += grid_step)
        alpha_ps.push_back(a);

    for (double ap : alpha_ps) {
        ExtReal dv = dual.eval(ap);
        for (double a : alphas) {
            ExtReal nv = nu.eval(a);
            ExtReal lo = min(nv, dv);
            // duality inequality: alpha + alpha' >= min(nu(alpha), nu'(alpha'))
            if (lo.is_finite() && a + ap < lo.raw() - tol) {
                std::ostringstream os;
                os << "duality inequality fails at (alpha=" << a << ", alpha'=" << ap << ")";
                fail(rep.duality, os.str());
            }
            // touching case; applies below alpha'_max, where the clamp
            // at 1 cannot have produced the value. The premise band makes the
            // abscissa uncertain by tol, so the conclusion is evaluated at the
            // exact touching point alpha* = nu'(alpha') - alpha' (nudged right
            // per right-continuity) rather than the raw grid point.
            if (ap < dual.alpha_max() && dv.is_finite() &&
                std::abs(dv.raw() - (a + ap)) <= tol) {
                ExtReal at_touch = nu.eval(dv.raw() - ap + tol);
                if (at_touch.is_neg_inf() || dv.raw() > at_touch.raw() + tol) {
                    std::ostringstream os;
                    os << "touching case fails at (alpha=" << a << ", alpha'=" << ap << ")";
                    fail(rep.touching, os.str());
                }
            }
        }
        // slope bound, -inf absorbing
        if (ap <= dual.alpha_max()) {
            for (double eps : {0.1, 0.01}) {
                ExtReal lhs = dual.eval(ap - eps);
                if (lhs.is_neg_inf()) continue;
                ExtReal rhs = dual.eval(ap);
                if (rhs.is_neg_inf() || lhs.raw() > rhs.raw() - eps + tol) {
                    std::ostringstream os;
                    os << "slope bound fails at alpha'=" << ap << ", eps=" << eps;
                    fail(rep.slope, os.str());
                }
            }
        }
    }

    if (dual.alpha_min() != -nu.alpha_min())
        fail(rep.edge_min, "alpha'_min != -alpha_min");
    double lo_edge = (nu.alpha_max() == kInf) ? -kInf : 1.0 - nu.alpha_max();
    if (dual.alpha_max() < lo_edge - tol || dual.alpha_max() > 1.0 - nu.alpha_min() + tol)
        fail(rep.edge_max, "alpha'_max outside [1 - alpha_max, 1 - alpha_min]");
    return rep;
}

} // namespace snu
