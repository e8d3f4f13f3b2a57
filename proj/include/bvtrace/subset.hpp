#pragma once

// Finite-perimeter candidate sets A inside a domain, with the boundary of A
// split into the part interior to the domain and the part lying on the
// domain boundary (the trace). The set quotient
// (|interior boundary| + |A|) / |trace| is the geometric form of the trace
// constant.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bvtrace/geometry.hpp"
#include "bvtrace/mesh.hpp"

namespace bvt {

// Distance from a point to the boundary of the ambient domain.
inline double distance_to_domain_boundary(const Domain& d, Vec2 q) {
    switch (d.kind()) {
        case Domain::Kind::ball:
            return std::abs(d.radius() - q.norm());
        case Domain::Kind::annulus: {
            const double r = q.norm();
            return std::min(std::abs(r - d.inner_radius()), std::abs(d.outer_radius() - r));
        }
        case Domain::Kind::polygon:
        case Domain::Kind::square_with_appendage:
            return distance_to_polygon_boundary(d.vertices(), q);
        case Domain::Kind::boundary_patch:
            throw std::invalid_argument("distance_to_domain_boundary: unsupported kind");
    }
    throw std::logic_error("unreachable");
}

class SubsetRegion {
  public:
    enum class Rep { whole_domain, polygon, cells, analytic };

    Rep rep() const { return rep_; }
    const Domain& domain() const { return domain_; }
    const Polygon& polygon() const { return poly_; }
    const std::vector<char>& edge_on_trace() const { return edge_trace_; }
    const TriMesh* mesh() const { return mesh_; }
    const std::vector<char>& cell_mask() const { return in_; }

    double area() const { return area_; }
    double interior_perimeter() const { return interior_; }
    double trace_length() const { return trace_; }

    // A = closure of the whole domain; the trace is the full boundary.
    static SubsetRegion whole_domain(const Domain& d) {
        const Measures m = measures(d);
        SubsetRegion r;
        r.rep_ = Rep::whole_domain;
        r.domain_ = d;
        r.area_ = m.volume;
        r.interior_ = 0.0;
        r.trace_ = m.boundary_area;
        return r;
    }

    // Polygonal A classified against the domain boundary: a segment counts
    // as trace when both endpoints and the midpoint are within
    // 1e-9 * diam(domain) of the boundary.
    static SubsetRegion from_polygon(const Domain& d, Polygon a) {
        if (a.size() < 3) throw std::invalid_argument("SubsetRegion: polygon too small");
        if (polygon_signed_area(a) < 0.0) std::reverse(a.begin(), a.end());
        const double tol = 1e-9 * std::max(1.0, d.diameter());
        std::vector<char> flags(a.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const Vec2 p = a[i];
            const Vec2 q = a[(i + 1) % a.size()];
            const Vec2 mid = (p + q) * 0.5;
            flags[i] = distance_to_domain_boundary(d, p) < tol &&
                       distance_to_domain_boundary(d, q) < tol &&
                       distance_to_domain_boundary(d, mid) < tol;
        }
        return from_polygon_classified(d, std::move(a), std::move(flags));
    }

    // Polygonal A with a caller-supplied trace classification per edge
    // (edge i joins vertex i to vertex i+1).
    static SubsetRegion from_polygon_classified(const Domain& d, Polygon a,
                                                std::vector<char> edge_trace) {
        if (edge_trace.size() != a.size())
            throw std::invalid_argument("SubsetRegion: edge flag count mismatch");
        SubsetRegion r;
        r.rep_ = Rep::polygon;
        r.domain_ = d;
        r.poly_ = std::move(a);
        r.edge_trace_ = std::move(edge_trace);
        r.area_ = polygon_signed_area(r.poly_);
        if (r.area_ <= 0.0) throw std::invalid_argument("SubsetRegion: degenerate polygon");
        for (std::size_t i = 0; i < r.poly_.size(); ++i) {
            const double len = (r.poly_[(i + 1) % r.poly_.size()] - r.poly_[i]).norm();
            (r.edge_trace_[i] ? r.trace_ : r.interior_) += len;
        }
        return r;
    }

    // Union of mesh triangles; edges against the mesh boundary are trace,
    // edges against cells outside the set are interior.
    static SubsetRegion from_cells(const Domain& d, const TriMesh& mesh,
                                   const std::vector<int>& cells) {
        SubsetRegion r;
        r.rep_ = Rep::cells;
        r.domain_ = d;
        r.mesh_ = &mesh;
        r.in_.assign(mesh.triangles.size(), 0);
        for (int t : cells) {
            if (t < 0 || t >= static_cast<int>(mesh.triangles.size()))
                throw std::invalid_argument("SubsetRegion: cell index out of range");
            r.in_[t] = 1;
        }
        r.recompute_cell_measures();
        return r;
    }

    static SubsetRegion from_cell_mask(const Domain& d, const TriMesh& mesh,
                                       std::vector<char> mask) {
        SubsetRegion r;
        r.rep_ = Rep::cells;
        r.domain_ = d;
        r.mesh_ = &mesh;
        r.in_ = std::move(mask);
        if (r.in_.size() != mesh.triangles.size())
            throw std::invalid_argument("SubsetRegion: mask size mismatch");
        r.recompute_cell_measures();
        return r;
    }

    // Measure-only region (used for closed-form competitor sets such as
    // disk segments).
    static SubsetRegion analytic(const Domain& d, double area, double interior_perimeter,
                                 double trace_length) {
        SubsetRegion r;
        r.rep_ = Rep::analytic;
        r.domain_ = d;
        r.area_ = area;
        r.interior_ = interior_perimeter;
        r.trace_ = trace_length;
        return r;
    }

    std::vector<int> cell_list() const {
        std::vector<int> out;
        for (std::size_t t = 0; t < in_.size(); ++t)
            if (in_[t]) out.push_back(static_cast<int>(t));
        return out;
    }

  private:
    void recompute_cell_measures() {
        area_ = interior_ = trace_ = 0.0;
        // adjacency via sorted edge keys
        std::map<std::pair<int, int>, std::pair<int, int>> edge_tris;
        for (std::size_t t = 0; t < mesh_->triangles.size(); ++t) {
            const auto& tri = mesh_->triangles[t];
            for (int k = 0; k < 3; ++k) {
                auto key = std::minmax(tri[k], tri[(k + 1) % 3]);
                auto [it, fresh] = edge_tris.try_emplace({key.first, key.second},
                                                         std::pair<int, int>{-1, -1});
                (fresh ? it->second.first : it->second.second) = static_cast<int>(t);
            }
        }
        for (std::size_t t = 0; t < in_.size(); ++t)
            if (in_[t]) area_ += mesh_->triangle_area(static_cast<int>(t));
        for (const auto& [key, tris] : edge_tris) {
            const double len = (mesh_->vertices[key.first] - mesh_->vertices[key.second]).norm();
            const bool a = tris.first >= 0 && in_[tris.first];
            const bool b = tris.second >= 0 && in_[tris.second];
            if (tris.second < 0) {
                if (a) trace_ += len;  // mesh boundary edge inside the set
            } else if (a != b) {
                interior_ += len;
            }
        }
    }

    Rep rep_ = Rep::whole_domain;
    Domain domain_ = Domain::ball(2, 1.0);
    Polygon poly_;
    std::vector<char> edge_trace_;
    const TriMesh* mesh_ = nullptr;
    std::vector<char> in_;
    double area_ = 0.0;
    double interior_ = 0.0;
    double trace_ = 0.0;
};

// (|dA inside Omega| + |A|) / |A on dOmega|.
inline double geometric_quotient(const SubsetRegion& a) {
    if (!(a.trace_length() > 0.0))
        throw std::invalid_argument("geometric_quotient: no boundary trace");
    if (!(a.area() > 0.0))
        throw std::invalid_argument("geometric_quotient: empty set");
    return (a.interior_perimeter() + a.area()) / a.trace_length();
}

inline double geometric_quotient(const SubsetRegion& a, const Domain& /*domain*/) {
    return geometric_quotient(a);
}

// Sutherland-Hodgman clip of a flagged polygon against the half-plane
// {x : (x - point) . normal >= 0}. Pieces of original edges keep their
// trace flag; the new cut chords are interior.
inline std::pair<Polygon, std::vector<char>> clip_polygon_halfplane(
    const Polygon& poly, const std::vector<char>& edge_trace, Vec2 point, Vec2 normal) {
    Polygon out;
    std::vector<char> flags;
    const std::size_t n = poly.size();
    auto side = [&](Vec2 x) { return (x - point).dot(normal); };
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        const char f = edge_trace[i];
        const double da = side(a), db = side(b);
        auto intersection = [&]() { return a + (b - a) * (da / (da - db)); };
        if (da >= 0.0 && db >= 0.0) {
            out.push_back(a);
            flags.push_back(f);
        } else if (da >= 0.0 && db < 0.0) {
            out.push_back(a);
            flags.push_back(f);
            out.push_back(intersection());
            flags.push_back(0);  // cut chord
        } else if (da < 0.0 && db >= 0.0) {
            out.push_back(intersection());
            flags.push_back(f);
        }
    }
    return {out, flags};
}

// Triangles whose centroid lies inside the given polygon.
inline std::vector<int> cells_inside_polygon(const TriMesh& mesh, const Polygon& poly) {
    std::vector<int> out;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        if (point_in_polygon(poly, mesh.triangle_centroid(static_cast<int>(t))))
            out.push_back(static_cast<int>(t));
    return out;
}

inline std::vector<int> cells_inside_disk(const TriMesh& mesh, Vec2 center, double radius) {
    std::vector<int> out;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        if ((mesh.triangle_centroid(static_cast<int>(t)) - center).norm() <= radius)
            out.push_back(static_cast<int>(t));
    return out;
}

}  // namespace bvt
