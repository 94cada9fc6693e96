// Closed-form scalar proximal map of the box-constrained l_{1/2} penalty,
//
//   min_{0 <= x <= 1}  beta/2 (x - r)^2 + eta sqrt(x).
//
// Interior stationary points satisfy beta (x - r) + eta/2 x^{-1/2} = 0;
// the substitution t = x^{-1/2} turns this into the cubic
//
//   eta/2 t^3 - beta r t^2 + beta = 0,   t > 1,
//
// solved analytically (Cardano / trigonometric split) so the prox stays
// branch-deterministic.

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace assignqp {

struct CubicRoots {
    std::array<double, 3> roots{};
    int count = 0;
};

namespace detail {

// Real roots of a t^3 + b t^2 + c t + d with a != 0, each polished by one
// Newton step.
inline CubicRoots solve_cubic(double a, double b, double c, double d) {
    CubicRoots out;
    const double B = b / a;
    const double C = c / a;
    const double D = d / a;

    // depressed form s^3 + p s + q with t = s - B/3
    const double p = C - B * B / 3.0;
    const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
    const double disc = 0.25 * q * q + p * p * p / 27.0;

    const double shift = -B / 3.0;
    if (disc > 0.0) {
        // one real root; avoid cancellation by taking the large-magnitude cube root first
        const double w = -0.5 * q - std::copysign(std::sqrt(disc), q);
        const double u = std::cbrt(w);
        const double v = u == 0.0 ? 0.0 : -p / (3.0 * u);
        out.roots[out.count++] = u + v + shift;
    } else if (disc == 0.0) {
        if (p == 0.0) {
            out.roots[out.count++] = shift;
        } else {
            out.roots[out.count++] = 3.0 * q / p + shift;
            out.roots[out.count++] = -1.5 * q / p + shift;
        }
    } else {
        const double rho = std::sqrt(-p * p * p / 27.0);
        const double phi = std::acos(std::clamp(-0.5 * q / rho, -1.0, 1.0));
        const double mag = 2.0 * std::sqrt(-p / 3.0);
        for (int k = 0; k < 3; ++k)
            out.roots[out.count++] = mag * std::cos((phi - 2.0 * M_PI * k) / 3.0) + shift;
    }

    for (int k = 0; k < out.count; ++k) {
        const long double t = out.roots[k];
        const long double f = ((a * t + b) * t + c) * t + d;
        const long double df = (3.0L * a * t + 2.0L * b) * t + c;
        if (df != 0.0L && std::isfinite(static_cast<double>(f / df)))
            out.roots[k] = static_cast<double>(t - f / df);
    }
    return out;
}

}  // namespace detail

// All real roots of eta/2 t^3 - beta r t^2 + beta = 0.
inline CubicRoots cubic_real_roots(double eta, double beta, double r) {
    if (eta <= 0.0) throw std::invalid_argument("cubic_real_roots: eta must be > 0");
    return detail::solve_cubic(0.5 * eta, -beta * r, 0.0, beta);
}

inline std::optional<double> cubic_largest_root_gt1(double eta, double beta, double r) {
    const CubicRoots roots = cubic_real_roots(eta, beta, r);
    std::optional<double> best;
    for (int k = 0; k < roots.count; ++k)
        if (roots.roots[k] > 1.0 && (!best || roots.roots[k] > *best)) best = roots.roots[k];
    return best;
}

// Global minimizer over {0, 1} and the interior stationary points.  Every
// root t > 1 is mapped back to x = t^{-2} and entered as a candidate: when
// two interior stationary points exist, the larger-t one is a local maximum,
// so restricting to the largest root would miss the interior minimum.
// Ties within 1e-12 resolve to the binary candidate, then to 0.
inline double scalar_prox(double r, double beta, double eta) {
    if (!(beta > 0.0)) throw std::invalid_argument("scalar_prox: beta must be > 0");
    if (eta < 0.0) throw std::invalid_argument("scalar_prox: eta must be >= 0");
    if (!std::isfinite(r)) return std::numeric_limits<double>::quiet_NaN();
    if (eta == 0.0) return std::clamp(r, 0.0, 1.0);

    const auto objective = [&](double x) { return 0.5 * beta * (x - r) * (x - r) + eta * std::sqrt(x); };

    const double tie_tol = 1e-12;
    double best_x = 0.0;
    double best_obj = objective(0.0);
    if (objective(1.0) < best_obj - tie_tol) {
        best_x = 1.0;
        best_obj = objective(1.0);
    }
    const CubicRoots roots = cubic_real_roots(eta, beta, r);
    for (int k = 0; k < roots.count; ++k) {
        const double t = roots.roots[k];
        if (!(t > 1.0)) continue;
        const double x = 1.0 / (t * t);
        if (objective(x) < best_obj - tie_tol) {
            best_x = x;
            best_obj = objective(x);
        }
    }
    return best_x;
}

}  // namespace assignqp
