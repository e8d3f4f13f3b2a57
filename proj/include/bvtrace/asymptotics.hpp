#pragma once

// Boundary-layer test-function expansions at a curved boundary point, the
// resulting quotient expansion, and an independent adaptive-quadrature
// oracle on exact paraboloid patches that pins down the remainder orders.

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "bvtrace/geometry.hpp"
#include "bvtrace/quadrature.hpp"

namespace bvt {

struct ExpansionInput {
    std::vector<double> kappa;  // principal curvatures, all > 0
    double epsilon = 0.0;       // layer thickness parameter

    int dimension() const { return static_cast<int>(kappa.size()) + 1; }

    void validate() const {
        if (kappa.empty()) throw std::invalid_argument("ExpansionInput: empty kappa");
        double kmax = 0.0;
        for (double k : kappa) {
            if (!(k > 0.0)) throw std::invalid_argument("ExpansionInput: kappa must be positive");
            kmax = std::max(kmax, k);
        }
        if (!(epsilon > 0.0)) throw std::invalid_argument("ExpansionInput: epsilon must be positive");
        if (epsilon * epsilon * kmax >= 1.0)
            throw std::invalid_argument("ExpansionInput: epsilon too large for the layer");
    }
};

// b^xi is the Euclidean unit-ball volume of R^{N-1}, omega^xi the unit-sphere
// measure (counting measure for N = 2, so both equal 2 there), and b^lambda
// the volume of the anisotropic ball {|y|_kappa <= 1}.
struct GeometricConstants {
    double b_lambda = 0.0;
    double b_xi = 0.0;
    double omega_xi = 0.0;

    static GeometricConstants make(std::span<const double> kappa) {
        GeometricConstants g;
        const int N = static_cast<int>(kappa.size()) + 1;
        g.b_xi = unit_ball_volume(N - 1);
        g.omega_xi = unit_sphere_area(N - 1);
        double prod = 1.0;
        for (double k : kappa) prod *= k;
        g.b_lambda = g.b_xi / std::sqrt(prod);
        return g;
    }
};

struct ExpansionTerms {
    double grad = 0.0;  // total variation of the layer indicator
    double vol = 0.0;   // volume of the layer
    double bdry = 0.0;  // trace mass of the layer
};

// Leading terms of the three layer integrals on the graph patch; remainders
// are o(eps^{N+1}). The volume coefficient is the one produced by the
// sublevel-set computation (cross-checked against quadrature_oracle).
inline ExpansionTerms expansion_terms(const ExpansionInput& in) {
    in.validate();
    const int N = in.dimension();
    const auto g = GeometricConstants::make(in.kappa);
    double prod = 1.0, sum = 0.0;
    for (double k : in.kappa) {
        prod *= k;
        sum += k;
    }
    const double sp = std::sqrt(prod);
    const double eN1 = std::pow(in.epsilon, N - 1);
    const double eP1 = std::pow(in.epsilon, N + 1);
    ExpansionTerms t;
    t.grad = g.b_lambda * eN1;
    t.vol = g.omega_xi * eP1 / ((N + 1.0) * (N - 1.0) * sp);
    t.bdry = g.b_lambda * eN1 + g.omega_xi * sum * eP1 / (2.0 * (N - 1.0) * (N + 1.0) * sp);
    return t;
}

// Quotient expansion 1 + C (1 - sum kappa) eps^2 with
// C = omega^xi / (2 (N-1)(N+1) b^lambda sqrt(prod kappa)); drops below 1
// exactly when the curvature sum exceeds 1.
inline double quotient_expansion(const ExpansionInput& in) {
    in.validate();
    const int N = in.dimension();
    const auto g = GeometricConstants::make(in.kappa);
    double prod = 1.0, sum = 0.0;
    for (double k : in.kappa) {
        prod *= k;
        sum += k;
    }
    const double C = g.omega_xi /
                     (2.0 * (N - 1.0) * (N + 1.0) * g.b_lambda * std::sqrt(prod));
    return 1.0 + C * (1.0 - sum) * in.epsilon * in.epsilon;
}

// Numerical evaluation of the three defining integrals on an exact
// paraboloid patch (zero graph remainder), relative tolerance 1e-8.
// Supports N in {2, 3}.
inline ExpansionTerms quadrature_oracle(const BoundaryPatch& patch, double epsilon) {
    const int N = patch.dimension();
    if (N != 2 && N != 3)
        throw std::invalid_argument("quadrature_oracle: only N in {2, 3}");
    for (double k : patch.kappa)
        if (!(k > 0.0)) throw std::invalid_argument("quadrature_oracle: kappa must be positive");
    double kmin = patch.kappa[0];
    for (double k : patch.kappa) kmin = std::min(kmin, k);
    if (epsilon / std::sqrt(kmin) > patch.patch_radius + 1e-15)
        throw std::invalid_argument("quadrature_oracle: layer exceeds the patch radius");

    const double target = 1e-12;   // internal refinement target
    const double contract = 1e-8;  // advertised tolerance
    auto run = [&](auto&& f, double a, double b) {
        auto res = integrate_adaptive(f, a, b, target, 1e-16);
        if (!res.converged && res.error_estimate > contract * std::abs(res.value))
            throw std::runtime_error("quadrature_oracle: tolerance not reached, estimate " +
                                     std::to_string(res.value));
        return res.value;
    };

    ExpansionTerms t;
    if (N == 2) {
        const double k = patch.kappa[0];
        const double half = epsilon / std::sqrt(k);
        t.grad = run([](double) { return 1.0; }, -half, half);
        t.vol = run([&](double y) { return 0.5 * (epsilon * epsilon - k * y * y); }, -half, half);
        t.bdry = run([&](double y) { return std::sqrt(1.0 + k * k * y * y); }, -half, half);
    } else {
        const double k1 = patch.kappa[0], k2 = patch.kappa[1];
        const double jac = 1.0 / std::sqrt(k1 * k2);
        // substitution z_i = sqrt(kappa_i) y_i maps the sublevel set to the
        // disk |z| <= eps; integrate in polar coordinates there
        auto polar = [&](auto&& integrand) {
            return run(
                [&](double theta) {
                    const double c = std::cos(theta), s = std::sin(theta);
                    return run([&](double r) { return integrand(r, c, s) * r; }, 0.0, epsilon);
                },
                0.0, 2.0 * M_PI);
        };
        t.grad = jac * polar([](double, double, double) { return 1.0; });
        t.vol = jac * polar([&](double r, double, double) {
            return 0.5 * (epsilon * epsilon - r * r);
        });
        t.bdry = jac * polar([&](double r, double c, double s) {
            return std::sqrt(1.0 + r * r * (k1 * c * c + k2 * s * s));
        });
    }
    return t;
}

struct OrderEstimate {
    double order = 0.0;
    bool exact = false;      // errors at quadrature noise level at every eps
    bool monotone = true;    // errors decrease along decreasing eps
    std::vector<double> errors;
};

struct ConvergenceReport {
    OrderEstimate grad, vol, bdry;
    std::vector<double> epsilons;
};

namespace detail {

inline OrderEstimate fit_order(const std::vector<double>& eps,
                               const std::vector<double>& err,
                               double scale) {
    OrderEstimate est;
    est.errors = err;
    const double noise = 1e-10 * std::max(scale, 1e-30);
    bool all_noise = true;
    for (double e : err)
        if (e > noise) all_noise = false;
    if (all_noise) {
        est.exact = true;
        est.order = std::numeric_limits<double>::infinity();
        return est;
    }
    for (std::size_t i = 0; i + 1 < err.size(); ++i)
        if (err[i + 1] >= err[i]) est.monotone = false;
    // least-squares slope of log(err) vs log(eps)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double x = std::log(eps[i]);
        const double y = std::log(std::max(err[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    est.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return est;
}

}  // namespace detail

// Fits |oracle - expansion| ~ eps^q per component over a decreasing list of
// epsilons. Components whose error sits at quadrature noise are flagged
// exact (infinite order).
inline ConvergenceReport convergence_order_check(const BoundaryPatch& patch,
                                                 std::span<const double> eps_list) {
    if (eps_list.size() < 2)
        throw std::invalid_argument("convergence_order_check: need at least two epsilons");
    ConvergenceReport rep;
    std::vector<double> eg, ev, eb;
    double sg = 0, sv = 0, sb = 0;
    for (double eps : eps_list) {
        rep.epsilons.push_back(eps);
        ExpansionInput in{patch.kappa, eps};
        const ExpansionTerms exp = expansion_terms(in);
        const ExpansionTerms orc = quadrature_oracle(patch, eps);
        eg.push_back(std::abs(orc.grad - exp.grad));
        ev.push_back(std::abs(orc.vol - exp.vol));
        eb.push_back(std::abs(orc.bdry - exp.bdry));
        sg = std::max(sg, std::abs(orc.grad));
        sv = std::max(sv, std::abs(orc.vol));
        sb = std::max(sb, std::abs(orc.bdry));
    }
    rep.grad = detail::fit_order(rep.epsilons, eg, sg);
    rep.vol = detail::fit_order(rep.epsilons, ev, sv);
    rep.bdry = detail::fit_order(rep.epsilons, eb, sb);
    return rep;
}

}  // namespace bvt
