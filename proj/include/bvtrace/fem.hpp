#pragma once

// Piecewise-linear scalar fields on a TriMesh plus the element data needed
// to evaluate p-norm energies and their gradients.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "bvtrace/mesh.hpp"

namespace bvt {

struct FEField {
    const TriMesh* mesh = nullptr;
    std::vector<double> values;  // one coefficient per vertex

    FEField() = default;
    explicit FEField(const TriMesh& m, double fill = 0.0)
        : mesh(&m), values(m.vertices.size(), fill) {}

    Vec2 gradient(int t) const {
        const auto& tri = mesh->triangles[t];
        const Vec2 a = mesh->vertices[tri[0]];
        const Vec2 b = mesh->vertices[tri[1]];
        const Vec2 c = mesh->vertices[tri[2]];
        const double inv2A = 1.0 / (b - a).cross(c - a);
        // grad phi_i = perp(opposite edge) / (2 area)
        const Vec2 g0 = (c - b).perp() * inv2A;
        const Vec2 g1 = (a - c).perp() * inv2A;
        const Vec2 g2 = (b - a).perp() * inv2A;
        return g0 * values[tri[0]] + g1 * values[tri[1]] + g2 * values[tri[2]];
    }
};

namespace fem {

// Symmetric 6-point degree-4 rule in barycentric coordinates.
struct TriQuadrature {
    static constexpr int n = 6;
    std::array<std::array<double, 3>, n> bary;
    std::array<double, n> weight;  // sums to 1

    TriQuadrature() {
        const double a1 = 0.445948490915965, w1 = 0.223381589678011;
        const double a2 = 0.091576213509771, w2 = 0.109951743655322;
        bary = {{{1 - 2 * a1, a1, a1},
                 {a1, 1 - 2 * a1, a1},
                 {a1, a1, 1 - 2 * a1},
                 {1 - 2 * a2, a2, a2},
                 {a2, 1 - 2 * a2, a2},
                 {a2, a2, 1 - 2 * a2}}};
        weight = {w1, w1, w1, w2, w2, w2};
    }
};

inline const TriQuadrature& tri_rule() {
    static const TriQuadrature q;
    return q;
}

// 3-point Gauss rule on [0, 1], weights sum to 1.
struct EdgeQuadrature {
    static constexpr int n = 3;
    std::array<double, n> s{0.5 * (1 - std::sqrt(0.6)), 0.5, 0.5 * (1 + std::sqrt(0.6))};
    std::array<double, n> weight{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
};

inline const EdgeQuadrature& edge_rule() {
    static const EdgeQuadrature q;
    return q;
}

struct Element {
    std::array<int, 3> v;
    double area;
    std::array<Vec2, 3> grad_phi;
};

struct Assembly {
    const TriMesh* mesh = nullptr;
    std::vector<Element> elements;
    std::vector<char> on_boundary;     // per vertex
    std::vector<double> lumped_mass;   // per vertex, sum of adjacent areas / 3
    std::vector<double> h1_diag;       // diag of stiffness + lumped mass
    double total_area = 0.0;
    double diameter = 0.0;

    explicit Assembly(const TriMesh& m) : mesh(&m) {
        const std::size_t nv = m.vertices.size();
        on_boundary.assign(nv, 0);
        lumped_mass.assign(nv, 0.0);
        h1_diag.assign(nv, 0.0);
        elements.reserve(m.triangles.size());
        for (std::size_t t = 0; t < m.triangles.size(); ++t) {
            const auto& tri = m.triangles[t];
            const Vec2 a = m.vertices[tri[0]];
            const Vec2 b = m.vertices[tri[1]];
            const Vec2 c = m.vertices[tri[2]];
            const double twoA = (b - a).cross(c - a);
            Element e;
            e.v = tri;
            e.area = 0.5 * twoA;
            e.grad_phi = {(c - b).perp() / twoA, (a - c).perp() / twoA, (b - a).perp() / twoA};
            for (int k = 0; k < 3; ++k) {
                lumped_mass[tri[k]] += e.area / 3.0;
                h1_diag[tri[k]] += e.area * e.grad_phi[k].norm2();
            }
            elements.push_back(e);
            total_area += e.area;
        }
        for (const auto& be : m.boundary) {
            on_boundary[be.a] = 1;
            on_boundary[be.b] = 1;
        }
        for (std::size_t i = 0; i < nv; ++i) h1_diag[i] += lumped_mass[i];
        double x0 = m.vertices[0].x, x1 = x0, y0 = m.vertices[0].y, y1 = y0;
        for (const Vec2& v : m.vertices) {
            x0 = std::min(x0, v.x); x1 = std::max(x1, v.x);
            y0 = std::min(y0, v.y); y1 = std::max(y1, v.y);
        }
        diameter = std::hypot(x1 - x0, y1 - y0);
    }
};

// integral of |u|^p over the mesh; samples the linear interpolant at the
// 6-point rule.
inline double integral_abs_pow(const Assembly& asm_, const std::vector<double>& u, double p) {
    const auto& q = tri_rule();
    double total = 0.0;
    for (const Element& e : asm_.elements) {
        const double u0 = u[e.v[0]], u1 = u[e.v[1]], u2 = u[e.v[2]];
        double local = 0.0;
        for (int k = 0; k < q.n; ++k) {
            const double val = q.bary[k][0] * u0 + q.bary[k][1] * u1 + q.bary[k][2] * u2;
            local += q.weight[k] * std::pow(std::abs(val), p);
        }
        total += e.area * local;
    }
    return total;
}

// d/du_i of the above, accumulated into g.
inline void add_grad_integral_abs_pow(const Assembly& asm_, const std::vector<double>& u,
                                      double p, double scale, std::vector<double>& g) {
    const auto& q = tri_rule();
    for (const Element& e : asm_.elements) {
        const double u0 = u[e.v[0]], u1 = u[e.v[1]], u2 = u[e.v[2]];
        for (int k = 0; k < q.n; ++k) {
            const double val = q.bary[k][0] * u0 + q.bary[k][1] * u1 + q.bary[k][2] * u2;
            if (val == 0.0) continue;
            const double f = scale * e.area * q.weight[k] * p *
                             std::pow(std::abs(val), p - 1.0) * (val > 0 ? 1.0 : -1.0);
            g[e.v[0]] += f * q.bary[k][0];
            g[e.v[1]] += f * q.bary[k][1];
            g[e.v[2]] += f * q.bary[k][2];
        }
    }
}

inline double boundary_integral_abs_pow(const Assembly& asm_, const std::vector<double>& u,
                                        double p) {
    const auto& q = edge_rule();
    double total = 0.0;
    for (const auto& be : asm_.mesh->boundary) {
        const double ua = u[be.a], ub = u[be.b];
        double local = 0.0;
        for (int k = 0; k < q.n; ++k) {
            const double val = (1.0 - q.s[k]) * ua + q.s[k] * ub;
            local += q.weight[k] * std::pow(std::abs(val), p);
        }
        total += be.length * local;
    }
    return total;
}

inline void add_grad_boundary_integral_abs_pow(const Assembly& asm_,
                                               const std::vector<double>& u, double p,
                                               double scale, std::vector<double>& g) {
    const auto& q = edge_rule();
    for (const auto& be : asm_.mesh->boundary) {
        const double ua = u[be.a], ub = u[be.b];
        for (int k = 0; k < q.n; ++k) {
            const double val = (1.0 - q.s[k]) * ua + q.s[k] * ub;
            if (val == 0.0) continue;
            const double f = scale * be.length * q.weight[k] * p *
                             std::pow(std::abs(val), p - 1.0) * (val > 0 ? 1.0 : -1.0);
            g[be.a] += f * (1.0 - q.s[k]);
            g[be.b] += f * q.s[k];
        }
    }
}

}  // namespace fem
}  // namespace bvt
