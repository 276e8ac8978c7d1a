#pragma once

#include <algorithm>
#include <span>

namespace hamcert {

/// Piecewise-cubic Lagrange interpolation of (nodes, values) at x, using the
/// four nodes nearest the containing interval (clamped at the ends). Nodes
/// must be strictly increasing; x outside the range is evaluated on the
/// boundary stencil.
inline double cubic_interp(std::span<const double> nodes, std::span<const double> values,
                           double x) {
    const int n = static_cast<int>(nodes.size());
    if (n == 1) return values[0];
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    int i = static_cast<int>(it - nodes.begin()) - 1;
    i = std::clamp(i, 0, n - 2);
    if (n < 4) {
        // linear fallback for tiny grids
        const double w = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
        return values[i] * (1.0 - w) + values[i + 1] * w;
    }
    const int i0 = std::clamp(i - 1, 0, n - 4);
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
        double lk = values[i0 + k];
        for (int m = 0; m < 4; ++m) {
            if (m == k) continue;
            lk *= (x - nodes[i0 + m]) / (nodes[i0 + k] - nodes[i0 + m]);
        }
        acc += lk;
    }
    return acc;
}

} // namespace hamcert
