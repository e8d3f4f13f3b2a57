#pragma once

// Gauss-Legendre quadrature: fixed panels, dyadically refined composite
// rules, and product rules on circles/spheres. Deterministic; refinement
// stops when two successive levels agree to the requested relative tolerance.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace bvt {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

// Newton iteration on Legendre polynomials; standard construction.
inline GaussRule gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

inline const GaussRule& gauss16() {
    static const GaussRule rule = gauss_legendre(16);
    return rule;
}

template <typename F>
double integrate_panels(F&& f, double a, double b, int panels) {
    const GaussRule& g = gauss16();
    const double hp = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * hp;
        double local = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            local += g.weights[i] * f(mid + 0.5 * hp * g.nodes[i]);
        sum += 0.5 * hp * local;
    }
    return sum;
}

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
};

// Doubles the panel count until two levels agree to rel_tol (plus a floor
// abs_tol for integrals near zero).
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    double abs_tol = 1e-300, int max_doublings = 16) {
    double prev = integrate_panels(f, a, b, 1);
    for (int k = 1; k <= max_doublings; ++k) {
        const double cur = integrate_panels(f, a, b, 1 << k);
        const double err = std::abs(cur - prev);
        if (err <= rel_tol * std::abs(cur) + abs_tol)
            return {cur, err, true};
        prev = cur;
    }
    return {prev, std::abs(prev), false};
}

// Integral of f(theta) over the circle of radius r (arclength measure).
template <typename F>
double integrate_circle(F&& f, double radius, double rel_tol = 1e-12) {
    auto res = integrate_adaptive([&](double t) { return f(t); }, 0.0, 2.0 * M_PI,
                                  rel_tol, 1e-14);
    return radius * res.value;
}

// Surface integral over the sphere of radius r in R^3 of g(x, y, z);
// Gauss in cos(theta), trapezoid (spectral for periodic) in phi.
template <typename G>
double integrate_sphere(G&& g, double radius, int n_theta = 48, int n_phi = 96) {
    const GaussRule rule = gauss_legendre(n_theta);
    double sum = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double c = rule.nodes[i];  // cos(theta)
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * M_PI * j / n_phi;
            ring += g(radius * s * std::cos(phi), radius * s * std::sin(phi), radius * c);
        }
        sum += rule.weights[i] * ring * (2.0 * M_PI / n_phi);
    }
    return radius * radius * sum;
}

}  // namespace bvt
