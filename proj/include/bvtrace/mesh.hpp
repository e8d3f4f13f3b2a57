#pragma once

// 2-D triangulations of the supported domain kinds. Structured polar rings
// for disks and annuli, tensor grids for axis-aligned polygons, and ear
// clipping with conforming uniform refinement for general simple polygons.
// Curved boundaries are polygonalized with chord sagitta <= h^2/8.

#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "bvtrace/geometry.hpp"

namespace bvt {

struct BoundaryEdge {
    int a = -1;            // tail vertex (domain lies on the left of a->b)
    int b = -1;            // head vertex
    int tri = -1;          // unique owning triangle
    Vec2 outward_normal;   // unit
    double length = 0.0;
};

struct TriMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  // CCW
    std::vector<BoundaryEdge> boundary;
    double h = 0.0;

    double triangle_area(int t) const {
        const auto& tri = triangles[t];
        const Vec2 e1 = vertices[tri[1]] - vertices[tri[0]];
        const Vec2 e2 = vertices[tri[2]] - vertices[tri[0]];
        return 0.5 * e1.cross(e2);
    }

    Vec2 triangle_centroid(int t) const {
        const auto& tri = triangles[t];
        return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
    }

    double total_area() const {
        double a = 0.0;
        for (int t = 0; t < static_cast<int>(triangles.size()); ++t) a += triangle_area(t);
        return a;
    }

    double boundary_length() const {
        double len = 0.0;
        for (const auto& e : boundary) len += e.length;
        return len;
    }

    // Closed loops of boundary vertices (each loop in traversal order).
    std::vector<std::vector<int>> boundary_loops() const {
        std::unordered_map<int, int> next;  // tail -> head
        for (const auto& e : boundary) next[e.a] = e.b;
        std::vector<std::vector<int>> loops;
        std::unordered_map<int, bool> used;
        for (const auto& e : boundary) {
            if (used[e.a]) continue;
            std::vector<int> loop;
            int v = e.a;
            while (!used[v]) {
                used[v] = true;
                loop.push_back(v);
                auto it = next.find(v);
                if (it == next.end()) throw std::runtime_error("boundary loop is not closed");
                v = it->second;
            }
            loops.push_back(std::move(loop));
        }
        return loops;
    }

    void write(std::ostream& os) const;
    static TriMesh read(std::istream& is);
};

namespace detail {

// Collects edges owned by exactly one triangle and orients them along the
// owning triangle (CCW triangles put the domain on the left).
inline void build_boundary(TriMesh& mesh) {
    struct EdgeInfo {
        int count = 0;
        int tri = -1;
        int a = -1, b = -1;
    };
    std::map<std::pair<int, int>, EdgeInfo> edges;
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int a = tri[k], b = tri[(k + 1) % 3];
            auto key = std::minmax(a, b);
            auto& info = edges[{key.first, key.second}];
            ++info.count;
            info.tri = t;
            info.a = a;
            info.b = b;
        }
    }
    mesh.boundary.clear();
    for (const auto& [key, info] : edges) {
        if (info.count == 1) {
            BoundaryEdge e;
            e.a = info.a;
            e.b = info.b;
            e.tri = info.tri;
            const Vec2 d = mesh.vertices[e.b] - mesh.vertices[e.a];
            e.length = d.norm();
            e.outward_normal = Vec2{d.y, -d.x} / e.length;
            mesh.boundary.push_back(e);
        } else if (info.count > 2) {
            throw std::runtime_error("non-manifold edge in mesh");
        }
    }
}

inline void check_positive_areas(const TriMesh& mesh) {
    for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t)
        if (!(mesh.triangle_area(t) > 0.0))
            throw std::runtime_error("triangulate: non-positive triangle area");
}

// Stitch two concentric vertex rings (inner, outer; both starting at angle
// zero, uniformly spaced) with a two-pointer angular merge.
inline void stitch_rings(TriMesh& mesh, const std::vector<int>& inner,
                         const std::vector<int>& outer) {
    const int na = static_cast<int>(inner.size());
    const int nb = static_cast<int>(outer.size());
    int a = 0, b = 0;
    while (a < na || b < nb) {
        const double next_a = a < na ? (a + 1.0) / na : 2.0;
        const double next_b = b < nb ? (b + 1.0) / nb : 2.0;
        if (next_a <= next_b) {
            mesh.triangles.push_back({inner[a % na], outer[b % nb], inner[(a + 1) % na]});
            ++a;
        } else {
            mesh.triangles.push_back({inner[a % na], outer[b % nb], outer[(b + 1) % nb]});
            ++b;
        }
    }
}

inline TriMesh mesh_disk(double R, double h) {
    TriMesh mesh;
    mesh.h = h;
    const int m = std::max(2, static_cast<int>(std::llround(R / h)));
    std::vector<std::vector<int>> rings(m + 1);
    mesh.vertices.push_back({0.0, 0.0});
    rings[0] = {0};
    for (int j = 1; j <= m; ++j) {
        const double r = R * j / m;
        const int n = std::max(6, static_cast<int>(std::ceil(2.0 * M_PI * r / h)));
        for (int k = 0; k < n; ++k) {
            const double t = 2.0 * M_PI * k / n;
            rings[j].push_back(static_cast<int>(mesh.vertices.size()));
            mesh.vertices.push_back({r * std::cos(t), r * std::sin(t)});
        }
    }
    for (int k = 0; k < static_cast<int>(rings[1].size()); ++k) {
        const int n = static_cast<int>(rings[1].size());
        mesh.triangles.push_back({0, rings[1][k], rings[1][(k + 1) % n]});
    }
    for (int j = 1; j < m; ++j) stitch_rings(mesh, rings[j], rings[j + 1]);
    return mesh;
}

inline TriMesh mesh_annulus(double r0, double R, double h) {
    TriMesh mesh;
    mesh.h = h;
    const int m = std::max(1, static_cast<int>(std::llround((R - r0) / h)));
    std::vector<std::vector<int>> rings(m + 1);
    for (int j = 0; j <= m; ++j) {
        const double r = r0 + (R - r0) * j / m;
        const int n = std::max(8, static_cast<int>(std::ceil(2.0 * M_PI * r / h)));
        for (int k = 0; k < n; ++k) {
            const double t = 2.0 * M_PI * k / n;
            rings[j].push_back(static_cast<int>(mesh.vertices.size()));
            mesh.vertices.push_back({r * std::cos(t), r * std::sin(t)});
        }
    }
    for (int j = 0; j < m; ++j) stitch_rings(mesh, rings[j], rings[j + 1]);
    return mesh;
}

inline bool polygon_is_rectilinear(const Polygon& p) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = p[(i + 1) % n] - p[i];
        if (d.x != 0.0 && d.y != 0.0) return false;
    }
    return true;
}

// Tensor grid over the union of axis-aligned rectangles: grid lines at all
// vertex coordinates, each interval split to length <= h (thin slots keep
// anisotropic cells, which resolves them exactly).
inline TriMesh mesh_rectilinear(const Polygon& poly, double h) {
    auto grid_lines = [&](bool take_x) {
        std::vector<double> raw;
        for (const Vec2& v : poly) raw.push_back(take_x ? v.x : v.y);
        std::sort(raw.begin(), raw.end());
        raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
        std::vector<double> lines;
        for (std::size_t i = 0; i + 1 < raw.size(); ++i) {
            const int k = std::max(1, static_cast<int>(std::ceil((raw[i + 1] - raw[i]) / h)));
            for (int j = 0; j < k; ++j) lines.push_back(raw[i] + (raw[i + 1] - raw[i]) * j / k);
        }
        lines.push_back(raw.back());
        return lines;
    };
    const std::vector<double> X = grid_lines(true);
    const std::vector<double> Y = grid_lines(false);

    TriMesh mesh;
    mesh.h = h;
    const int nx = static_cast<int>(X.size());
    const int ny = static_cast<int>(Y.size());
    std::vector<int> vid(static_cast<std::size_t>(nx) * ny, -1);
    auto vertex = [&](int i, int j) {
        int& id = vid[static_cast<std::size_t>(j) * nx + i];
        if (id < 0) {
            id = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back({X[i], Y[j]});
        }
        return id;
    };
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const Vec2 center{0.5 * (X[i] + X[i + 1]), 0.5 * (Y[j] + Y[j + 1])};
            if (!point_in_polygon(poly, center)) continue;
            const int a = vertex(i, j), b = vertex(i + 1, j);
            const int c = vertex(i + 1, j + 1), d = vertex(i, j + 1);
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({a, c, d});
        }
    }
    if (mesh.triangles.empty()) throw std::runtime_error("triangulate: empty rectilinear mesh");
    return mesh;
}

// O(n^2) ear clipping of a CCW simple polygon into coarse triangles.
inline std::vector<std::array<Vec2, 3>> ear_clip(Polygon poly) {
    std::vector<std::array<Vec2, 3>> tris;
    auto is_convex = [&](std::size_t i) {
        const std::size_t n = poly.size();
        const Vec2 a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
        return (b - a).cross(c - b) > 0.0;
    };
    auto in_triangle = [](Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
        const double d1 = (b - a).cross(p - a);
        const double d2 = (c - b).cross(p - b);
        const double d3 = (a - c).cross(p - c);
        return d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0;
    };
    int guard = 0;
    while (poly.size() > 3) {
        if (++guard > 100000) throw std::runtime_error("ear_clip: no ear found");
        const std::size_t n = poly.size();
        bool clipped = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_convex(i)) continue;
            const Vec2 a = poly[(i + n - 1) % n], b = poly[i], c = poly[(i + 1) % n];
            bool ear = true;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i || j == (i + n - 1) % n || j == (i + 1) % n) continue;
                if (in_triangle(poly[j], a, b, c)) {
                    ear = false;
                    break;
                }
            }
            if (std::abs((b - a).cross(c - a)) < 1e-30) ear = false;  // degenerate sliver
            if (ear) {
                tris.push_back({a, b, c});
                poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
                clipped = true;
                break;
            }
        }
        if (!clipped) throw std::runtime_error("ear_clip: stuck (polygon not simple?)");
    }
    tris.push_back({poly[0], poly[1], poly[2]});
    return tris;
}

// Uniform k-refinement of coarse triangles with a shared-vertex map so that
// adjacent coarse triangles stay conforming.
inline TriMesh mesh_general_polygon(const Polygon& poly, double h) {
    auto coarse = ear_clip(poly);
    double max_edge = 0.0;
    for (const auto& tri : coarse)
        for (int k = 0; k < 3; ++k)
            max_edge = std::max(max_edge, (tri[(k + 1) % 3] - tri[k]).norm());
    const int k = std::max(1, static_cast<int>(std::ceil(max_edge / h)));

    TriMesh mesh;
    mesh.h = h;
    const double quant = 1e-9 * std::max(1.0, polygon_diameter(poly));
    std::map<std::pair<long long, long long>, int> vmap;
    auto vertex = [&](Vec2 p) {
        const std::pair<long long, long long> key{
            static_cast<long long>(std::llround(p.x / quant)),
            static_cast<long long>(std::llround(p.y / quant))};
        auto it = vmap.find(key);
        if (it != vmap.end()) return it->second;
        const int id = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(p);
        vmap.emplace(key, id);
        return id;
    };

    for (const auto& tri : coarse) {
        // lattice points p(i, j) = v0 + (i/k)(v1-v0) + (j/k)(v2-v0), i+j <= k
        std::vector<std::vector<int>> node(k + 1);
        for (int i = 0; i <= k; ++i) {
            node[i].resize(k - i + 1);
            for (int j = 0; j <= k - i; ++j) {
                const Vec2 p = tri[0] + (tri[1] - tri[0]) * (double(i) / k) +
                               (tri[2] - tri[0]) * (double(j) / k);
                node[i][j] = vertex(p);
            }
        }
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k - i; ++j) {
                mesh.triangles.push_back({node[i][j], node[i + 1][j], node[i][j + 1]});
                if (j < k - i - 1)
                    mesh.triangles.push_back({node[i + 1][j], node[i + 1][j + 1], node[i][j + 1]});
            }
        }
    }
    return mesh;
}

}  // namespace detail

// Mesh a 2-D domain with target size h. Errors out when h exceeds the
// domain feature size (gap width, bounding-box extent, radius).
inline TriMesh triangulate(const Domain& domain, double h) {
    if (h <= 0.0) throw std::invalid_argument("triangulate: h > 0 required");
    if (domain.dimension() != 2)
        throw std::invalid_argument("triangulate: only N = 2 domains are meshable");

    TriMesh mesh;
    switch (domain.kind()) {
        case Domain::Kind::ball:
            if (h >= domain.radius())
                throw std::invalid_argument("triangulate: h exceeds disk radius");
            mesh = detail::mesh_disk(domain.radius(), h);
            break;
        case Domain::Kind::annulus:
            if (h > domain.outer_radius() - domain.inner_radius())
                throw std::invalid_argument("triangulate: h exceeds annulus gap");
            mesh = detail::mesh_annulus(domain.inner_radius(), domain.outer_radius(), h);
            break;
        case Domain::Kind::polygon:
        case Domain::Kind::square_with_appendage: {
            const Polygon& poly = domain.vertices();
            double width = 0.0, height = 0.0;
            {
                double x0 = poly[0].x, x1 = poly[0].x, y0 = poly[0].y, y1 = poly[0].y;
                for (const Vec2& v : poly) {
                    x0 = std::min(x0, v.x); x1 = std::max(x1, v.x);
                    y0 = std::min(y0, v.y); y1 = std::max(y1, v.y);
                }
                width = x1 - x0;
                height = y1 - y0;
            }
            if (h >= std::max(width, height))
                throw std::invalid_argument("triangulate: h exceeds polygon extent");
            mesh = detail::polygon_is_rectilinear(poly) ? detail::mesh_rectilinear(poly, h)
                                                        : detail::mesh_general_polygon(poly, h);
            break;
        }
        case Domain::Kind::boundary_patch:
            throw std::invalid_argument("triangulate: boundary_patch is not meshable");
    }
    detail::check_positive_areas(mesh);
    detail::build_boundary(mesh);
    return mesh;
}

inline void TriMesh::write(std::ostream& os) const {
    os.precision(17);
    os << vertices.size() << "\n";
    for (const Vec2& v : vertices) os << v.x << " " << v.y << "\n";
    os << triangles.size() << "\n";
    for (const auto& t : triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    os << boundary.size() << "\n";
    for (const auto& e : boundary) os << e.a << " " << e.b << "\n";
}

inline TriMesh TriMesh::read(std::istream& is) {
    TriMesh mesh;
    std::size_t nv = 0, nt = 0, nb = 0;
    is >> nv;
    mesh.vertices.resize(nv);
    for (auto& v : mesh.vertices) is >> v.x >> v.y;
    is >> nt;
    mesh.triangles.resize(nt);
    for (auto& t : mesh.triangles) is >> t[0] >> t[1] >> t[2];
    is >> nb;  // boundary is rebuilt from the triangles; counts must agree
    for (std::size_t i = 0; i < nb; ++i) {
        int a, b;
        is >> a >> b;
    }
    if (!is) throw std::runtime_error("TriMesh::read: malformed mesh file");
    detail::build_boundary(mesh);
    if (mesh.boundary.size() != nb) throw std::runtime_error("TriMesh::read: boundary mismatch");
    return mesh;
}

}  // namespace bvt
