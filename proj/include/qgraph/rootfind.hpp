#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace qgraph {

/// Bisection on a bracket with opposite-sign endpoint values; xtol is absolute in x.
template <class F>
double bisect(F&& f, double lo, double hi, double flo, double fhi, double xtol) {
    while (hi - lo > xtol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    (void)fhi;
    return 0.5 * (lo + hi);
}

/// Golden-section minimization of f on [lo, hi]; returns (argmin, min).
template <class F>
std::pair<double, double> golden_minimize(F&& f, double lo, double hi, double xtol) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = f(xm);
    if (f1 < fm) { xm = x1; fm = f1; }
    if (f2 < fm) { xm = x2; fm = f2; }
    return {xm, fm};
}

/// All roots of f on [lo, hi]: sign changes located on a scan grid and refined
/// by bisection, plus tangent (even-multiplicity) roots recovered from local
/// minima of |f|. Window endpoints with |f| <= ftol count as roots.
template <class F>
std::vector<double> find_roots(F&& f, double lo, double hi, double scan_step,
                               double xtol = 1e-10, double ftol = 1e-9) {
    std::vector<double> roots;
    if (!(hi > lo)) return roots;
    const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / scan_step)) + 1);
    std::vector<double> xs(n), fs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * i / (n - 1);
        fs[i] = f(xs[i]);
    }

    if (std::abs(fs.front()) <= ftol) roots.push_back(xs.front());
    if (std::abs(fs.back()) <= ftol) roots.push_back(xs.back());

    for (int i = 0; i + 1 < n; ++i) {
        if (fs[i] == 0.0) {
            roots.push_back(xs[i]);
        } else if ((fs[i] < 0.0) != (fs[i + 1] < 0.0)) {
            roots.push_back(bisect(f, xs[i], xs[i + 1], fs[i], fs[i + 1], xtol));
        }
    }

    // Even-multiplicity roots: |f| dips to ~0 without a sign change. Scan for
    // interior extrema of f and inspect the minimum of |f| around them.
    for (int i = 1; i + 1 < n; ++i) {
        const bool min_of_abs = std::abs(fs[i]) <= std::abs(fs[i - 1]) &&
                                std::abs(fs[i]) <= std::abs(fs[i + 1]);
        if (!min_of_abs) continue;
        if ((fs[i - 1] < 0.0) != (fs[i] < 0.0) || (fs[i] < 0.0) != (fs[i + 1] < 0.0))
            continue;  // handled by bisection above
        auto [xm, am] = golden_minimize([&](double x) { return std::abs(f(x)); },
                                        xs[i - 1], xs[i + 1], xtol);
        if (am <= ftol) {
            roots.push_back(xm);
        } else {
            // The dip may hide a pair of simple roots below the grid resolution.
            double fm = f(xm);
            if ((fs[i - 1] < 0.0) != (fm < 0.0)) {
                roots.push_back(bisect(f, xs[i - 1], xm, fs[i - 1], fm, xtol));
                roots.push_back(bisect(f, xm, xs[i + 1], fm, fs[i + 1], xtol));
            }
        }
    }

    std::sort(roots.begin(), roots.end());
    // collapse duplicates found through different detectors
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || r - out.back() > 10 * xtol) out.push_back(r);
    return out;
}

}  // namespace qgraph
