#pragma once

// Closed-form values of the trace constant on balls and annuli, the cone and
// spherical-cap upper bounds, and the strict existence criterion.

#include <cmath>
#include <stdexcept>
#include <string>

#include "bvtrace/geometry.hpp"

namespace bvt {

struct ClosedFormResult {
    double lambda1 = 0.0;
    bool has_extremal = false;
    // Normalized extremal is the whole-domain indicator scaled by
    // 1/|boundary|; empty when no extremal exists.
    std::string extremal_description;
};

// lambda1 = min(|Omega|/|dOmega|, 1). For a ball of radius R in R^N the
// ratio is R/N; for an annulus (R^N - r^N) / (N (R^{N-1} + r^{N-1})).
// At ratio exactly 1 the normalized whole-domain indicator is the unique
// extremal; for ratio > 1 there is none.
inline ClosedFormResult lambda1_closed_form(const Domain& d) {
    if (d.kind() != Domain::Kind::ball && d.kind() != Domain::Kind::annulus)
        throw std::invalid_argument("lambda1_closed_form: no closed form; use solver");
    const Measures m = measures(d);
    const double ratio = m.volume / m.boundary_area;
    ClosedFormResult r;
    if (ratio <= 1.0) {
        r.lambda1 = ratio;
        r.has_extremal = true;
        r.extremal_description = "whole-domain indicator / |boundary|";
    } else {
        r.lambda1 = 1.0;
        r.has_extremal = false;
    }
    return r;
}

// Asymptotic upper bound (N-1)|omega| / |d omega| at a conical boundary
// point with cross-section omega of the unit sphere. Values >= 1 carry no
// conclusion.
inline double cone_bound(double omega_measure, double omega_boundary_measure, int N) {
    if (N < 2) throw std::invalid_argument("cone_bound: N >= 2 required");
    if (omega_measure <= 0.0 || omega_boundary_measure <= 0.0)
        throw std::invalid_argument("cone_bound: measures must be positive");
    return (N - 1) * omega_measure / omega_boundary_measure;
}

// Leading-order bound sin(alpha) for a convex spherical-cap cone of
// half-angle alpha in (0, pi/2]. Asymptotic indicator, not certified.
inline double spherical_cap_bound(double alpha, int N) {
    if (N < 2) throw std::invalid_argument("spherical_cap_bound: N >= 2 required");
    if (!(alpha > 0.0 && alpha <= 0.5 * M_PI + 1e-15))
        throw std::invalid_argument("spherical_cap_bound: alpha must lie in (0, pi/2]");
    return std::sin(alpha);
}

// Extremals exist whenever the constant is strictly below 1.
inline bool existence_criterion(double lambda1_upper_bound) {
    if (!std::isfinite(lambda1_upper_bound))
        throw std::invalid_argument("existence_criterion: non-finite bound");
    return lambda1_upper_bound < 1.0;
}

}  // namespace bvt
