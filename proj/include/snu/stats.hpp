#pragma once

#include <span>

namespace snu {

/// Least-squares slope of y against x. Requires at least two distinct x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

} // namespace snu
