#pragma once

// Test-only oracles, deliberately independent of the library's quadrature
// and grid machinery: plain composite Simpson with uniform refinement, and
// dense-grid searches.  Slow but simple enough to trust by inspection.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

/// Composite Simpson on [a, b], refined by doubling until two successive
/// refinements agree to `tol` (or the panel cap is hit).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, std::size_t max_panels = 1 << 22) {
    auto pass = [&](std::size_t n) {
        const double h = (b - a) / static_cast<double>(n);
        const double inset = 1e-12 * (b - a);  // endpoints may be singular
        double s = f(a + inset) + f(b - inset);
        double sum4 = 0.0, sum2 = 0.0;
        for (std::size_t i = 1; i < n; i += 2) sum4 += f(a + h * static_cast<double>(i));
        for (std::size_t i = 2; i < n; i += 2) sum2 += f(a + h * static_cast<double>(i));
        return h / 3.0 * (s + 4.0 * sum4 + 2.0 * sum2);
    };
    double prev = pass(64);
    for (std::size_t n = 128; n <= max_panels; n *= 2) {
        const double cur = pass(n);
        if (std::fabs(cur - prev) < tol) return cur;
        prev = cur;
    }
    return prev;
}

/// Dense grid search for sup |F_a - F_b| over a log-spaced grid on
/// (lo, hi), plus the point x = lo itself.
inline double grid_search_sup(const std::function<double(double)>& fa,
                              const std::function<double(double)>& fb, double lo, double hi,
                              std::size_t points = 100000) {
    double best = std::fabs(fa(lo) - fb(lo));
    const double l0 = std::log(lo > 0.0 ? lo : 1e-6);
    const double l1 = std::log(hi);
    for (std::size_t i = 0; i <= points; ++i) {
        const double x = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / points);
        best = std::max(best, std::fabs(fa(x) - fb(x)));
    }
    return best;
}

/// Truncated integrals over [lo, T] for a ladder of T values; a divergent
/// tail shows up as blow-up across the ladder.
inline std::vector<double> truncation_ladder(const std::function<double(double)>& f, double lo,
                                             const std::vector<double>& ts) {
    std::vector<double> out;
    out.reserve(ts.size());
    for (double T : ts) out.push_back(simpson(f, lo, T, 1e-9, 1 << 20));
    return out;
}

}  // namespace oracle
