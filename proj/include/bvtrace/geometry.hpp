#pragma once

// Computational domains: balls, annuli, polygons, the square-with-appendage
// family, and local boundary-graph patches. All measures are exact closed
// forms; everything is immutable after construction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bvt {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    Vec2 perp() const { return {-y, x}; }  // rotate +90 degrees
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

using Polygon = std::vector<Vec2>;

// Shoelace signed area; positive for counterclockwise orientation.
inline double polygon_signed_area(const Polygon& p) {
    double a = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % n];
        a += u.cross(v);
    }
    return 0.5 * a;
}

inline double polygon_perimeter(const Polygon& p) {
    double len = 0.0;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) len += (p[(i + 1) % n] - p[i]).norm();
    return len;
}

inline Vec2 polygon_centroid(const Polygon& p) {
    double a = 0.0;
    Vec2 c{0.0, 0.0};
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % n];
        const double w = u.cross(v);
        a += w;
        c = c + (u + v) * w;
    }
    return c / (3.0 * a);
}

inline double polygon_diameter(const Polygon& p) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            d = std::max(d, (p[i] - p[j]).norm());
    return d;
}

namespace detail {

inline bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return (q - p).cross(r - p); };
    const double o1 = orient(a, b, c), o2 = orient(a, b, d);
    const double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) &&
           o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace detail

// Non-adjacent edge crossing test; O(n^2), fine for the polygon sizes here.
inline bool polygon_is_simple(const Polygon& p) {
    const std::size_t n = p.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (detail::segments_properly_intersect(p[i], p[(i + 1) % n],
                                                    p[j], p[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

inline bool point_in_polygon(const Polygon& poly, Vec2 q) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > q.y) != (b.y > q.y)) {
            const double xint = a.x + (q.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (q.x < xint) inside = !inside;
        }
    }
    return inside;
}

inline double distance_point_segment(Vec2 q, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return (q - a).norm();
    double t = (q - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return (q - (a + ab * t)).norm();
}

inline double distance_to_polygon_boundary(const Polygon& poly, Vec2 q) {
    double d = std::numeric_limits<double>::infinity();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        d = std::min(d, distance_point_segment(q, poly[i], poly[(i + 1) % n]));
    return d;
}

// Volume of the unit ball of R^n (counting-measure convention for n = 0:
// the "sphere of R^1" consists of two points and has measure 2).
inline double unit_ball_volume(int n) {
    if (n < 0) throw std::invalid_argument("unit_ball_volume: n < 0");
    if (n == 0) return 1.0;
    return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Surface measure of the unit sphere S^{n-1} in R^n; H^0 of the two-point
// sphere of R^1 is 2.
inline double unit_sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("unit_sphere_area: n < 1");
    return static_cast<double>(n) * unit_ball_volume(n);
}

// Local boundary graph rho(y) = 1/2 sum kappa_i y_i^2 (1 + O(|y|^a)).
// The exponent is called `remainder_exponent` to keep it distinct from the
// hole-volume parameter alpha used elsewhere.
struct BoundaryPatch {
    std::vector<double> kappa;      // principal curvatures, length N-1
    double remainder_exponent = 3.0;
    double patch_radius = 1.0;

    int dimension() const { return static_cast<int>(kappa.size()) + 1; }

    double rho(std::span<const double> y) const {
        if (y.size() != kappa.size())
            throw std::invalid_argument("BoundaryPatch::rho: bad y size");
        double s = 0.0;
        for (std::size_t i = 0; i < kappa.size(); ++i) s += kappa[i] * y[i] * y[i];
        return 0.5 * s;
    }
};

struct Measures {
    double volume = 0.0;
    double boundary_area = 0.0;
};

class Domain {
  public:
    enum class Kind { ball, annulus, polygon, square_with_appendage, boundary_patch };

    static Domain ball(int N, double R) {
        if (N < 2) throw std::invalid_argument("Domain::ball: N >= 2 required");
        if (R <= 0.0) throw std::invalid_argument("Domain::ball: R > 0 required");
        Domain d;
        d.kind_ = Kind::ball;
        d.dim_ = N;
        d.outer_ = R;
        return d;
    }

    static Domain annulus(int N, double r, double R) {
        if (N < 2) throw std::invalid_argument("Domain::annulus: N >= 2 required");
        if (!(0.0 < r && r < R))
            throw std::invalid_argument("Domain::annulus: 0 < r < R required");
        Domain d;
        d.kind_ = Kind::annulus;
        d.dim_ = N;
        d.inner_ = r;
        d.outer_ = R;
        return d;
    }

    static Domain polygon(Polygon verts) {
        if (verts.size() < 3)
            throw std::invalid_argument("Domain::polygon: need at least 3 vertices");
        if (!polygon_is_simple(verts))
            throw std::invalid_argument("Domain::polygon: self-intersecting vertex list");
        if (polygon_signed_area(verts) <= 0.0)
            throw std::invalid_argument("Domain::polygon: vertices must be positively oriented");
        Domain d;
        d.kind_ = Kind::polygon;
        d.dim_ = 2;
        d.poly_ = std::move(verts);
        return d;
    }

    // Unit square with the appendage [1, 1+eta] x [0, delta] attached at the
    // lower-right corner. The collinear vertex (1, 0) is kept so downstream
    // meshing sees the opening coordinate explicitly.
    static Domain square_with_appendage(double delta, double eta) {
        if (!(delta > 0.0 && delta < 1.0) || !(eta > 0.0))
            throw std::invalid_argument("square_with_appendage: need 0 < delta < 1, eta > 0");
        Domain d;
        d.kind_ = Kind::square_with_appendage;
        d.dim_ = 2;
        d.delta_ = delta;
        d.eta_ = eta;
        d.poly_ = {{0.0, 0.0}, {1.0, 0.0},   {1.0 + eta, 0.0}, {1.0 + eta, delta},
                   {1.0, delta}, {1.0, 1.0}, {0.0, 1.0}};
        return d;
    }

    static Domain boundary_patch(BoundaryPatch patch) {
        if (patch.kappa.empty())
            throw std::invalid_argument("boundary_patch: empty curvature vector");
        Domain d;
        d.kind_ = Kind::boundary_patch;
        d.dim_ = patch.dimension();
        d.patch_ = std::move(patch);
        return d;
    }

    Kind kind() const { return kind_; }
    int dimension() const { return dim_; }
    double radius() const { return outer_; }
    double inner_radius() const { return inner_; }
    double outer_radius() const { return outer_; }
    double appendage_delta() const { return delta_; }
    double appendage_eta() const { return eta_; }
    const Polygon& vertices() const { return poly_; }
    const BoundaryPatch& patch() const { return patch_; }

    bool is_polygonal() const {
        return kind_ == Kind::polygon || kind_ == Kind::square_with_appendage;
    }

    double diameter() const {
        switch (kind_) {
            case Kind::ball: return 2.0 * outer_;
            case Kind::annulus: return 2.0 * outer_;
            case Kind::polygon:
            case Kind::square_with_appendage: return polygon_diameter(poly_);
            case Kind::boundary_patch: return 2.0 * patch_.patch_radius;
        }
        return 0.0;
    }

    std::string kind_name() const {
        switch (kind_) {
            case Kind::ball: return "ball";
            case Kind::annulus: return "annulus";
            case Kind::polygon: return "polygon";
            case Kind::square_with_appendage: return "square_with_appendage";
            case Kind::boundary_patch: return "boundary_patch";
        }
        return "?";
    }

  private:
    Kind kind_ = Kind::ball;
    int dim_ = 2;
    double inner_ = 0.0;
    double outer_ = 0.0;
    double delta_ = 0.0;
    double eta_ = 0.0;
    Polygon poly_;
    BoundaryPatch patch_;
};

// |Omega| and H^{N-1}(boundary), exact per kind.
inline Measures measures(const Domain& d) {
    const int N = d.dimension();
    switch (d.kind()) {
        case Domain::Kind::ball: {
            const double R = d.radius();
            const double b = unit_ball_volume(N);
            return {b * std::pow(R, N), N * b * std::pow(R, N - 1)};
        }
        case Domain::Kind::annulus: {
            const double r = d.inner_radius(), R = d.outer_radius();
            const double b = unit_ball_volume(N);
            return {b * (std::pow(R, N) - std::pow(r, N)),
                    N * b * (std::pow(R, N - 1) + std::pow(r, N - 1))};
        }
        case Domain::Kind::polygon:
        case Domain::Kind::square_with_appendage:
            return {polygon_signed_area(d.vertices()), polygon_perimeter(d.vertices())};
        case Domain::Kind::boundary_patch:
            throw std::invalid_argument("measures: boundary_patch has no global measures");
    }
    throw std::logic_error("measures: unreachable");
}

// Principal curvatures at a boundary point, positive when the boundary
// bulges outward. Polygon corners have no curvature and raise.
inline std::vector<double> curvature(const Domain& d, std::span<const double> point) {
    const int N = d.dimension();
    if (static_cast<int>(point.size()) != N)
        throw std::invalid_argument("curvature: point dimension mismatch");

    auto radial = [&]() {
        double s = 0.0;
        for (double c : point) s += c * c;
        return std::sqrt(s);
    };

    switch (d.kind()) {
        case Domain::Kind::ball: {
            return std::vector<double>(N - 1, 1.0 / d.radius());
        }
        case Domain::Kind::annulus: {
            const double rr = radial();
            const double mid = 0.5 * (d.inner_radius() + d.outer_radius());
            // Inner boundary is concave seen from the outward normal.
            if (rr < mid) return std::vector<double>(N - 1, -1.0 / d.inner_radius());
            return std::vector<double>(N - 1, 1.0 / d.outer_radius());
        }
        case Domain::Kind::polygon:
        case Domain::Kind::square_with_appendage: {
            const Polygon& poly = d.vertices();
            const Vec2 q{point[0], point[1]};
            const double tol = 1e-9 * std::max(1.0, d.diameter());
            for (const Vec2& v : poly)
                if ((q - v).norm() < tol)
                    throw std::invalid_argument("curvature: undefined at a polygon corner");
            for (std::size_t i = 0; i < poly.size(); ++i) {
                if (distance_point_segment(q, poly[i], poly[(i + 1) % poly.size()]) < tol)
                    return {0.0};
            }
            throw std::invalid_argument("curvature: point not on the polygon boundary");
        }
        case Domain::Kind::boundary_patch: {
            return d.patch().kappa;
        }
    }
    throw std::logic_error("curvature: unreachable");
}

// A boundary point qualifies when all principal curvatures are positive,
// their sum exceeds 1, and the graph remainder exponent exceeds 2.
inline bool good_point_test(std::span<const double> kappa, double remainder_exponent) {
    if (kappa.empty()) return false;
    double sum = 0.0;
    for (double k : kappa) {
        if (!std::isfinite(k)) throw std::invalid_argument("good_point_test: non-finite curvature");
        if (k <= 0.0) return false;
        sum += k;
    }
    return sum > 1.0 && remainder_exponent > 2.0;
}

}  // namespace bvt
