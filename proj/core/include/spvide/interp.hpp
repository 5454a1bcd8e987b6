#pragma once

#include <algorithm>
#include <cstddef>
#include <span>

namespace spvide {

/// Local cubic (4-point Lagrange) interpolation on a strictly increasing
/// grid. The stencil is clamped at the ends; grids shorter than 4 fall back
/// to the full-grid Lagrange polynomial. Querying exactly at a grid node
/// returns the stored value bit-for-bit.
inline double cubic_interpolate(std::span<const double> ts, std::span<const double> vs, double tq) {
    const std::size_t n = ts.size();
    if (n == 1) return vs[0];

    // Index of the interval containing tq.
    const auto it = std::upper_bound(ts.begin(), ts.end(), tq);
    std::size_t i = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    if (i >= n - 1) i = n - 2;

    std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t width = std::min<std::size_t>(4, n);
    if (lo + width > n) lo = n - width;

    double result = 0.0;
    for (std::size_t k = lo; k < lo + width; ++k) {
        if (ts[k] == tq) return vs[k];
        double basis = 1.0;
        for (std::size_t j = lo; j < lo + width; ++j) {
            if (j == k) continue;
            basis *= (tq - ts[j]) / (ts[k] - ts[j]);
        }
        result += vs[k] * basis;
    }
    return result;
}

}  // namespace spvide
