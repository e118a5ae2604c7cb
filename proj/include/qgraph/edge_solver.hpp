#pragma once

// Fundamental solutions of the scalar edge equation -y'' + U y = z y and the
// spectral functions built from their endpoint values. Everything downstream
// (vertex conditions, lattice band equations, Dirichlet sets) is expressed
// through the four numbers s(l;z), s'(l;z), c(l;z), c'(l;z).

#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <qgraph/rootfind.hpp>

namespace qgraph {

struct EdgePotential {
    enum class Kind { zero, constant, sampled };

    Kind kind = Kind::zero;
    double l = 1.0;          // edge length, > 0
    double u0 = 0.0;         // constant value (Kind::constant)
    std::vector<double> grid_t;   // Kind::sampled: strictly increasing, covers [0, l]
    std::vector<double> grid_u;

    static EdgePotential zero(double length) {
        EdgePotential p;
        p.kind = Kind::zero;
        p.l = length;
        p.validate();
        return p;
    }

    static EdgePotential constant(double value, double length) {
        EdgePotential p;
        p.kind = Kind::constant;
        p.u0 = value;
        p.l = length;
        p.validate();
        return p;
    }

    /// Sampled potential; linear interpolation between grid points. The grid
    /// fixes the edge length: first point must be t=0, the last one is l.
    static EdgePotential sampled(std::vector<double> ts, std::vector<double> us) {
        EdgePotential p;
        p.kind = Kind::sampled;
        p.grid_t = std::move(ts);
        p.grid_u = std::move(us);
        p.l = p.grid_t.empty() ? 0.0 : p.grid_t.back();
        p.validate();
        return p;
    }

    void validate() const {
        if (!(l > 0.0) || !std::isfinite(l))
            throw std::invalid_argument("edge potential: length must be positive");
        if (kind == Kind::constant && !std::isfinite(u0))
            throw std::invalid_argument("edge potential: non-finite constant value");
        if (kind == Kind::sampled) {
            if (grid_t.size() < 2 || grid_t.size() != grid_u.size())
                throw std::invalid_argument("edge potential: sampled grid needs >= 2 (t, U) pairs");
            if (grid_t.front() != 0.0)
                throw std::invalid_argument("edge potential: sampled grid must start at t=0");
            if (grid_t.back() != l)
                throw std::invalid_argument("edge potential: sampled grid must end at t=l");
            for (std::size_t i = 0; i < grid_t.size(); ++i) {
                if (!std::isfinite(grid_t[i]) || !std::isfinite(grid_u[i]))
                    throw std::invalid_argument("edge potential: non-finite sample");
                if (i > 0 && !(grid_t[i] > grid_t[i - 1]))
                    throw std::invalid_argument("edge potential: grid must be strictly increasing");
            }
        }
    }

    double value(double t) const {
        switch (kind) {
            case Kind::zero: return 0.0;
            case Kind::constant: return u0;
            case Kind::sampled: break;
        }
        if (t <= grid_t.front()) return grid_u.front();
        if (t >= grid_t.back()) return grid_u.back();
        auto it = std::upper_bound(grid_t.begin(), grid_t.end(), t);
        std::size_t i = static_cast<std::size_t>(it - grid_t.begin());
        double w = (t - grid_t[i - 1]) / (grid_t[i] - grid_t[i - 1]);
        return grid_u[i - 1] + w * (grid_u[i] - grid_u[i - 1]);
    }

    bool operator==(const EdgePotential&) const = default;
};

/// Endpoint values of the fundamental solutions at spectral parameter z:
/// s(0)=c'(0)=0, s'(0)=c(0)=1.
struct EdgeSolution {
    double s = 0.0;
    double s_prime = 0.0;
    double c = 0.0;
    double c_prime = 0.0;
    double z = 0.0;
    double l = 0.0;

    double wronskian() const { return c * s_prime - c_prime * s; }
};

namespace detail {

// Closed forms for U == 0. The z=0 limit and both sign branches share
// s' == c and c' == -z*s.
inline EdgeSolution zero_potential_solution(double z, double l) {
    EdgeSolution r;
    r.z = z;
    r.l = l;
    double w = z * l * l;
    if (std::abs(w) < 1e-10) {
        // series around z=0, accurate to ~1e-30 here
        r.s = l * (1.0 - w / 6.0 + w * w / 120.0);
        r.c = 1.0 - w / 2.0 + w * w / 24.0;
    } else if (z > 0.0) {
        double k = std::sqrt(z);
        r.s = std::sin(k * l) / k;
        r.c = std::cos(k * l);
    } else {
        double k = std::sqrt(-z);
        r.s = std::sinh(k * l) / k;
        r.c = std::cosh(k * l);
    }
    r.s_prime = r.c;
    r.c_prime = -z * r.s;
    return r;
}

// One classical 4th-order step for the fundamental matrix of y'' = q(t) y.
// State: columns (c, c') and (s, s').
struct FundamentalState {
    double c, cp, s, sp;
};

template <class Q>
inline void rk4_step(FundamentalState& y, double t, double h, Q&& q) {
    auto deriv = [](const FundamentalState& u, double qv) {
        return FundamentalState{u.cp, qv * u.c, u.sp, qv * u.s};
    };
    auto axpy = [](const FundamentalState& u, double a, const FundamentalState& v) {
        return FundamentalState{u.c + a * v.c, u.cp + a * v.cp, u.s + a * v.s, u.sp + a * v.sp};
    };
    double q1 = q(t), q2 = q(t + 0.5 * h), q3 = q(t + h);
    FundamentalState k1 = deriv(y, q1);
    FundamentalState k2 = deriv(axpy(y, 0.5 * h, k1), q2);
    FundamentalState k3 = deriv(axpy(y, 0.5 * h, k2), q2);
    FundamentalState k4 = deriv(axpy(y, h, k3), q3);
    y.c += h / 6.0 * (k1.c + 2 * k2.c + 2 * k3.c + k4.c);
    y.cp += h / 6.0 * (k1.cp + 2 * k2.cp + 2 * k3.cp + k4.cp);
    y.s += h / 6.0 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s);
    y.sp += h / 6.0 * (k1.sp + 2 * k2.sp + 2 * k3.sp + k4.sp);
}

// Monotone-time potential evaluator; keeps a cursor so the per-step lookups
// in the integrator stay O(1) for sampled grids.
struct PotentialCursor {
    const EdgePotential& pot;
    std::size_t seg = 0;

    double operator()(double t) {
        if (pot.kind == EdgePotential::Kind::zero) return 0.0;
        if (pot.kind == EdgePotential::Kind::constant) return pot.u0;
        const auto& ts = pot.grid_t;
        const auto& us = pot.grid_u;
        if (t <= ts.front()) return us.front();
        if (t >= ts.back()) return us.back();
        while (seg + 2 < ts.size() && ts[seg + 1] < t) ++seg;
        while (seg > 0 && ts[seg] > t) --seg;
        double w = (t - ts[seg]) / (ts[seg + 1] - ts[seg]);
        return us[seg] + w * (us[seg + 1] - us[seg]);
    }
};

inline FundamentalState integrate_fundamental(const EdgePotential& pot, double z, int steps) {
    FundamentalState y{1.0, 0.0, 0.0, 1.0};
    PotentialCursor u{pot};
    double h = pot.l / steps;
    for (int i = 0; i < steps; ++i) {
        double t = pot.l * i / steps;
        rk4_step(y, t, h, [&](double tt) { return u(tt) - z; });
    }
    return y;
}

// Fixed-step integration starting at 4096 steps, doubled until two successive
// refinements agree to 1e-9 at the endpoint (capped at 2^20 steps).
inline EdgeSolution integrate_to_tolerance(const EdgePotential& pot, double z) {
    constexpr int kInitialSteps = 4096;
    constexpr int kMaxSteps = 1 << 20;
    constexpr double kTol = 1e-9;

    FundamentalState coarse = integrate_fundamental(pot, z, kInitialSteps);
    int steps = kInitialSteps;
    while (true) {
        FundamentalState fine = integrate_fundamental(pot, z, 2 * steps);
        double diff = std::max(std::max(std::abs(fine.c - coarse.c), std::abs(fine.cp - coarse.cp)),
                               std::max(std::abs(fine.s - coarse.s), std::abs(fine.sp - coarse.sp)));
        steps *= 2;
        coarse = fine;
        if (diff <= kTol || steps >= kMaxSteps) break;
    }
    EdgeSolution r;
    r.c = coarse.c;
    r.c_prime = coarse.cp;
    r.s = coarse.s;
    r.s_prime = coarse.sp;
    r.z = z;
    r.l = pot.l;
    return r;
}

}  // namespace detail

/// Endpoint values s(l;z), s'(l;z), c(l;z), c'(l;z) of -y'' + U y = z y.
/// Closed forms for the zero potential, fixed-step integration otherwise.
inline EdgeSolution solve_fundamental(const EdgePotential& pot, double z) {
    if (!std::isfinite(z)) throw std::invalid_argument("solve_fundamental: non-finite z");
    pot.validate();
    if (pot.kind == EdgePotential::Kind::zero) return detail::zero_potential_solution(z, pot.l);
    return detail::integrate_to_tolerance(pot, z);
}

/// t_eps(E) = c(l; E + k_R^2) + eps * s(l; E + k_R^2). For identical even
/// edges this single scalar carries the whole vertex condition.
inline double t_epsilon(const EdgePotential& pot, double eps, double k_R, double E) {
    EdgeSolution sol = solve_fundamental(pot, E + k_R * k_R);
    return sol.c + eps * sol.s;
}

/// All E in [window_lo, window_hi] with s(l; E + k_R^2) = 0, i.e. the edge
/// Dirichlet eigenvalues shifted by -k_R^2. Bracketing on a scan grid plus
/// bisection to 1e-10 in E; the window is treated as closed.
inline std::vector<double> dirichlet_eigenvalues(const EdgePotential& pot, double k_R,
                                                 double window_lo, double window_hi,
                                                 double scan_step = 0.05) {
    if (!(window_lo < window_hi))
        throw std::invalid_argument("dirichlet_eigenvalues: empty window");
    auto svalue = [&](double E) { return solve_fundamental(pot, E + k_R * k_R).s; };
    return find_roots(svalue, window_lo, window_hi, scan_step, 1e-10, 1e-9);
}

/// Two-column "t value" text file; '#' starts a comment.
inline EdgePotential load_potential_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open potential file: " + path);
    std::vector<double> ts, us;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double t, u;
        if (!(ss >> t)) continue;  // blank / comment-only line
        if (!(ss >> u))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected \"t value\" pair");
        std::string rest;
        if (ss >> rest)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": trailing tokens after \"t value\" pair");
        ts.push_back(t);
        us.push_back(u);
    }
    try {
        return EdgePotential::sampled(std::move(ts), std::move(us));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace qgraph
