#pragma once

// Minimization of the p-Rayleigh trace quotient over piecewise-linear
// fields, continuation of p down to 1 with linear extrapolation, and the
// flux-field diagnostics used to judge closeness to the limit system.

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bvtrace/fem.hpp"

namespace bvt {

struct SolverParams {
    double p = 2.0;
    double tau_scale = 1e-6;   // gradient regularization = tau_scale * diameter
    int max_iters = 20000;
    double tol = 1e-8;         // relative lambda change
    double armijo_c = 1e-4;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(p > 1.0)) throw std::invalid_argument("SolverParams: p must exceed 1");
        if (!(tol > 0.0)) throw std::invalid_argument("SolverParams: tol must be positive");
        if (max_iters <= 0) throw std::invalid_argument("SolverParams: max_iters must be positive");
    }
};

struct SigmaDiagnostics {
    double max_sigma = 0.0;       // max over triangles of |grad u|^{p-1}
    double euler_residual = 0.0;  // weak residual of -div sigma + 1 = 0 at interior vertices
    double flux_gap = 0.0;        // |boundary flux pairing - lambda| / lambda
};

struct EigenResult {
    double lambda = 0.0;
    FEField field;
    int iterations = 0;
    std::vector<double> residuals;  // raw quotient after each accepted step
    std::string method = "plaplace";
    double p = 0.0;
    double normalization_error = 0.0;
    bool converged = false;
    SigmaDiagnostics diagnostics;
};

struct SolveError : std::runtime_error {
    EigenResult best;  // best iterate at the time of failure
    SolveError(const std::string& msg, EigenResult b)
        : std::runtime_error(msg), best(std::move(b)) {}
};

namespace detail {

struct QuotientWork {
    const fem::Assembly* asm_ = nullptr;
    double p = 2.0;
    double tau = 0.0;
    const std::vector<char>* fixed = nullptr;  // hole vertices clamped to zero

    double numerator_raw(const std::vector<double>& u) const {
        double grad_term = 0.0;
        for (std::size_t t = 0; t < asm_->elements.size(); ++t) {
            const auto& e = asm_->elements[t];
            const Vec2 g = e.grad_phi[0] * u[e.v[0]] + e.grad_phi[1] * u[e.v[1]] +
                           e.grad_phi[2] * u[e.v[2]];
            grad_term += e.area * std::pow(g.norm2(), 0.5 * p);
        }
        return grad_term + fem::integral_abs_pow(*asm_, u, p);
    }

    double numerator_smoothed(const std::vector<double>& u) const {
        double grad_term = 0.0;
        const double t2 = tau * tau;
        for (const auto& e : asm_->elements) {
            const Vec2 g = e.grad_phi[0] * u[e.v[0]] + e.grad_phi[1] * u[e.v[1]] +
                           e.grad_phi[2] * u[e.v[2]];
            grad_term += e.area * std::pow(g.norm2() + t2, 0.5 * p);
        }
        return grad_term + fem::integral_abs_pow(*asm_, u, p);
    }

    double denominator(const std::vector<double>& u) const {
        return fem::boundary_integral_abs_pow(*asm_, u, p);
    }

    // gradient of the smoothed quotient J = N_tau / D at a point with D = 1
    void gradient(const std::vector<double>& u, double J, std::vector<double>& g) const {
        g.assign(u.size(), 0.0);
        const double t2 = tau * tau;
        for (const auto& e : asm_->elements) {
            const Vec2 gr = e.grad_phi[0] * u[e.v[0]] + e.grad_phi[1] * u[e.v[1]] +
                            e.grad_phi[2] * u[e.v[2]];
            const double w = e.area * p * std::pow(gr.norm2() + t2, 0.5 * p - 1.0);
            for (int k = 0; k < 3; ++k) g[e.v[k]] += w * gr.dot(e.grad_phi[k]);
        }
        fem::add_grad_integral_abs_pow(*asm_, u, p, 1.0, g);
        fem::add_grad_boundary_integral_abs_pow(*asm_, u, p, -J, g);
        if (fixed)
            for (std::size_t i = 0; i < u.size(); ++i)
                if ((*fixed)[i]) g[i] = 0.0;
    }

    // |u| projection, hole clamping, and trace normalization in place;
    // returns false when the trace mass collapses.
    bool project_normalize(std::vector<double>& u) const {
        for (double& x : u) x = std::abs(x);
        if (fixed)
            for (std::size_t i = 0; i < u.size(); ++i)
                if ((*fixed)[i]) u[i] = 0.0;
        const double d = denominator(u);
        if (!(d > 1e-14)) return false;
        const double s = std::pow(d, -1.0 / p);
        for (double& x : u) x *= s;
        return true;
    }
};

}  // namespace detail

// Minimizes (int |grad u|^p + |u|^p) / (int_bdry |u|^p) over P1 fields with
// optional zero constraints on hole triangles. Projected descent with
// conjugate directions and Armijo backtracking; the reported quotient uses
// the unregularized gradient norm. Throws on trace collapse; returns the
// best iterate with converged = false when the iteration budget runs out.
inline EigenResult solve_lambda_p(const TriMesh& mesh, const SolverParams& params,
                                  const std::vector<int>* hole_cells = nullptr,
                                  const FEField* warm_start = nullptr) {
    params.validate();
    const fem::Assembly asm_(mesh);
    const std::size_t nv = mesh.vertices.size();

    std::vector<char> fixed(nv, 0);
    if (hole_cells) {
        for (int t : *hole_cells) {
            for (int k = 0; k < 3; ++k) fixed[mesh.triangles[t][k]] = 1;
        }
    }

    detail::QuotientWork work;
    work.asm_ = &asm_;
    work.p = params.p;
    work.tau = params.tau_scale * asm_.diameter;
    work.fixed = hole_cells ? &fixed : nullptr;

    std::vector<double> u(nv, 1.0);
    if (warm_start && warm_start->values.size() == nv) {
        u = warm_start->values;
    } else {
        std::mt19937_64 rng(params.seed);
        std::uniform_real_distribution<double> jitter(-0.01, 0.01);
        for (double& x : u) x = 1.0 + jitter(rng);
    }
    if (!work.project_normalize(u))
        throw std::runtime_error("solve_lambda_p: trace collapse at initialization");

    EigenResult res;
    res.p = params.p;
    res.method = "plaplace";

    double J = work.numerator_smoothed(u);
    double lambda = work.numerator_raw(u);
    res.residuals.push_back(lambda);

    std::vector<double> g(nv), g_prev, dir(nv), trial(nv);
    double step = 1.0;
    int stall = 0;
    bool have_prev = false;
    double gPg_prev = 0.0;

    int it = 0;
    for (; it < params.max_iters; ++it) {
        work.gradient(u, J, g);
        double gPg = 0.0;
        for (std::size_t i = 0; i < nv; ++i) gPg += g[i] * g[i] / asm_.h1_diag[i];

        if (std::sqrt(gPg) <= 1e-12 * std::max(1.0, lambda)) {
            res.converged = true;
            break;
        }

        // Polak-Ribiere conjugate direction on the preconditioned gradient
        double beta = 0.0;
        if (have_prev && gPg_prev > 0.0) {
            double num = 0.0;
            for (std::size_t i = 0; i < nv; ++i)
                num += g[i] * (g[i] - g_prev[i]) / asm_.h1_diag[i];
            beta = std::max(0.0, num / gPg_prev);
            if (beta > 2.0) beta = 0.0;  // restart on wild direction
        }
        for (std::size_t i = 0; i < nv; ++i)
            dir[i] = -g[i] / asm_.h1_diag[i] + beta * (have_prev ? dir[i] : 0.0);
        double slope = 0.0;
        for (std::size_t i = 0; i < nv; ++i) slope += g[i] * dir[i];
        if (slope >= 0.0) {  // not a descent direction; fall back to gradient
            for (std::size_t i = 0; i < nv; ++i) dir[i] = -g[i] / asm_.h1_diag[i];
            slope = -gPg;
        }

        g_prev = g;
        gPg_prev = gPg;
        have_prev = true;

        double t = std::min(step * 2.0, 1e6);
        bool accepted = false;
        for (int bt = 0; bt < 50; ++bt) {
            trial = u;
            bool flipped = false;
            for (std::size_t i = 0; i < nv; ++i) {
                trial[i] += t * dir[i];
                if (trial[i] < 0.0) flipped = true;
            }
            if (!work.project_normalize(trial))
                throw std::runtime_error("solve_lambda_p: trace collapse during iteration");
            const double J_new = work.numerator_smoothed(trial);
            if (J_new <= J + params.armijo_c * t * slope) {
                u.swap(trial);
                J = J_new;
                step = t;
                accepted = true;
                if (flipped) have_prev = false;  // projection broke conjugacy
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // line search exhausted: treat as stationary
            res.converged = true;
            break;
        }

        const double lambda_new = work.numerator_raw(u);
        res.residuals.push_back(lambda_new);
        const double rel = std::abs(lambda_new - lambda) / std::max(lambda_new, 1e-300);
        lambda = lambda_new;
        if (rel < params.tol) {
            if (++stall >= 4) {
                res.converged = true;
                ++it;
                break;
            }
        } else {
            stall = 0;
        }
    }

    res.iterations = it;
    res.lambda = lambda;
    res.field = FEField(mesh);
    res.field.values = u;
    res.normalization_error = std::abs(work.denominator(u) - 1.0);
    if (!res.converged)
        throw SolveError("solve_lambda_p: no convergence within max iterations (best " +
                             std::to_string(lambda) + ")",
                         res);
    return res;
}

// Flux field sigma_p = |grad u|^{p-2} grad u and its distance from the
// limit system -div sigma + 1 = 0, sigma.n = lambda on the boundary.
inline SigmaDiagnostics sigma_diagnostics(const EigenResult& result, double p) {
    const TriMesh& mesh = *result.field.mesh;
    const fem::Assembly asm_(mesh);
    const std::vector<double>& u = result.field.values;

    std::vector<Vec2> sigma(asm_.elements.size());
    SigmaDiagnostics d;
    for (std::size_t t = 0; t < asm_.elements.size(); ++t) {
        const auto& e = asm_.elements[t];
        const Vec2 g = e.grad_phi[0] * u[e.v[0]] + e.grad_phi[1] * u[e.v[1]] +
                       e.grad_phi[2] * u[e.v[2]];
        const double mag = g.norm();
        sigma[t] = mag > 0.0 ? g * std::pow(mag, p - 2.0) : Vec2{0.0, 0.0};
        d.max_sigma = std::max(d.max_sigma, sigma[t].norm());
    }

    // weak residual |int sigma.grad(phi_v) + int phi_v| / int phi_v over
    // interior vertices (the limit equation tested with hat functions)
    std::vector<double> flux_sum(u.size(), 0.0), mass_sum(u.size(), 0.0);
    for (std::size_t t = 0; t < asm_.elements.size(); ++t) {
        const auto& e = asm_.elements[t];
        for (int k = 0; k < 3; ++k) {
            flux_sum[e.v[k]] += e.area * sigma[t].dot(e.grad_phi[k]);
            mass_sum[e.v[k]] += e.area / 3.0;
        }
    }
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (asm_.on_boundary[i] || mass_sum[i] == 0.0) continue;
        d.euler_residual =
            std::max(d.euler_residual, std::abs(flux_sum[i] + mass_sum[i]) / mass_sum[i]);
    }

    // boundary pairing int u (sigma.n) against lambda (strong Euler identity)
    const auto& q = fem::edge_rule();
    double flux = 0.0;
    for (const auto& be : mesh.boundary) {
        const double sn = sigma[be.tri].dot(be.outward_normal);
        double local = 0.0;
        for (int k = 0; k < q.n; ++k)
            local += q.weight[k] * ((1.0 - q.s[k]) * u[be.a] + q.s[k] * u[be.b]);
        flux += be.length * local * sn;
    }
    d.flux_gap = std::abs(flux - result.lambda) / std::max(result.lambda, 1e-300);
    return d;
}

struct ContinuationResult {
    std::vector<double> p_values;
    std::vector<double> lambdas;
    double extrapolated_lambda1 = 0.0;
    std::string extrapolation_model = "linear in (p-1), last three points";
    FEField final_field;
    std::vector<int> iterations;
};

struct ContinuationError : std::runtime_error {
    ContinuationResult partial;
    ContinuationError(const std::string& msg, ContinuationResult part)
        : std::runtime_error(msg), partial(std::move(part)) {}
};

// Solves along a decreasing p schedule with mandatory warm starts and
// returns the linear-in-(p-1) intercept of the last three stages.
inline ContinuationResult continuation_to_one(const TriMesh& mesh,
                                              const std::vector<double>& p_schedule,
                                              SolverParams params,
                                              const std::vector<int>* hole_cells = nullptr) {
    if (p_schedule.empty())
        throw std::invalid_argument("continuation_to_one: empty schedule");
    for (std::size_t i = 0; i < p_schedule.size(); ++i) {
        if (!(p_schedule[i] > 1.0))
            throw std::invalid_argument("continuation_to_one: schedule entries must exceed 1");
        if (i > 0 && !(p_schedule[i] < p_schedule[i - 1]))
            throw std::invalid_argument("continuation_to_one: schedule must decrease");
    }

    ContinuationResult out;
    FEField warm;
    for (double p : p_schedule) {
        params.p = p;
        try {
            EigenResult r = solve_lambda_p(mesh, params, hole_cells,
                                           warm.values.empty() ? nullptr : &warm);
            out.p_values.push_back(p);
            out.lambdas.push_back(r.lambda);
            out.iterations.push_back(r.iterations);
            warm = r.field;
            out.final_field = std::move(r.field);
        } catch (const std::exception& e) {
            throw ContinuationError("continuation stage p = " + std::to_string(p) +
                                        " failed: " + e.what(),
                                    out);
        }
    }

    const std::size_t n = out.p_values.size();
    const std::size_t m = std::min<std::size_t>(3, n);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = n - m; i < n; ++i) {
        const double x = out.p_values[i] - 1.0;
        const double y = out.lambdas[i];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    out.extrapolated_lambda1 = denom != 0.0 ? (sy * sxx - sx * sxy) / denom : out.lambdas.back();
    return out;
}

}  // namespace bvt
