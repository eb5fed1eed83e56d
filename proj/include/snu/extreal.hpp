#pragma once

#include <cmath>
#include <compare>
#include <limits>

#include "snu/error.hpp"

namespace snu {

/// Extended real in {-inf} u R with absorbing arithmetic:
/// NEG_INF + finite = NEG_INF, and NEG_INF compares below every finite value.
/// +inf and NaN are not representable.
class ExtReal {
  public:
    constexpr ExtReal() : v_(-std::numeric_limits<double>::infinity()) {}

    /// Implicit on purpose: finite doubles (and -inf) are valid extended reals.
    ExtReal(double v) : v_(v) {
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw InvalidArgument("ExtReal must be finite or -inf");
    }

    static constexpr ExtReal neg_inf() { return ExtReal(); }

    constexpr bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }
    constexpr bool is_finite() const { return !is_neg_inf(); }

    /// Underlying double; -inf encodes NEG_INF.
    constexpr double raw() const { return v_; }

    friend constexpr auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }
    friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }

    friend ExtReal operator+(ExtReal a, double b) {
        if (a.is_neg_inf()) return neg_inf();
        return ExtReal(a.v_ + b);
    }
    friend ExtReal operator+(double a, ExtReal b) { return b + a; }

  private:
    double v_;
};

/// Projection of an extended real onto {-inf} u [0, 1]:
/// -inf below 0, identity on [0, 1], 1 above.
inline ExtReal clamp(ExtReal beta) {
    if (beta.raw() < 0.0) return ExtReal::neg_inf();
    if (beta.raw() > 1.0) return ExtReal(1.0);
    return beta;
}

/// 2^(beta*j) with the convention that the result is 0 when beta = -inf
/// (for every j, including j = 0).
inline double exp2_or_zero(ExtReal beta, double j) {
    if (beta.is_neg_inf()) return 0.0;
    return std::exp2(beta.raw() * j);
}

inline ExtReal min(ExtReal a, ExtReal b) { return a < b ? a : b; }
inline ExtReal max(ExtReal a, ExtReal b) { return a < b ? b : a; }

} // namespace snu
