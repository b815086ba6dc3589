#pragma once

// The three planar models: stereographic plane (spherical), Euclidean plane,
// Poincare disk (hyperbolic).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kaleido/error.hpp"
#include "kaleido/moebius.hpp"

namespace kaleido {

enum class GeometryKind { Spherical, Euclidean, Hyperbolic };

inline const char* to_string(GeometryKind kind) {
    switch (kind) {
    case GeometryKind::Spherical: return "Spherical";
    case GeometryKind::Euclidean: return "Euclidean";
    case GeometryKind::Hyperbolic: return "Hyperbolic";
    }
    return "?";
}

inline GeometryKind geometry_kind_from_string(const std::string& s) {
    if (s == "Spherical") return GeometryKind::Spherical;
    if (s == "Euclidean") return GeometryKind::Euclidean;
    if (s == "Hyperbolic") return GeometryKind::Hyperbolic;
    throw Error(ErrorCode::Parse, "unknown geometry kind '" + s + "'");
}

struct ModelPoint {
    ExtComplex position;
    GeometryKind kind = GeometryKind::Euclidean;
};

inline constexpr double kIncidenceTolerance = 1e-10;

namespace detail {

inline double cross(Complex u, Complex v) { return u.real() * v.imag() - u.imag() * v.real(); }

inline Complex unit(Complex z) { return z / cabs(z); }

/// Twice the signed area of triangle (a, b, c); positive when counterclockwise.
inline double signed_area2(Complex a, Complex b, Complex c) { return cross(b - a, c - a); }

inline void require_valid(GeometryKind kind, const ExtComplex& p) {
    if (kind == GeometryKind::Spherical) return;
    if (p.is_infinite() || !std::isfinite(p.value().real()) || !std::isfinite(p.value().imag()))
        throw Error(ErrorCode::Domain, "point at infinity is only valid in the spherical model");
    if (kind == GeometryKind::Hyperbolic && std::norm(p.value()) >= 1.0)
        throw Error(ErrorCode::Domain, "hyperbolic point outside the open unit disk");
}

} // namespace detail

/// Intrinsic distance. Spherical results are great-circle radians.
inline double distance(GeometryKind kind, const ExtComplex& p, const ExtComplex& q) {
    switch (kind) {
    case GeometryKind::Euclidean: return detail::cabs(q.value() - p.value());
    case GeometryKind::Spherical: {
        if (p.is_infinite() && q.is_infinite()) return 0.0;
        if (p.is_infinite()) return 2.0 * std::atan2(1.0, std::abs(q.value()));
        if (q.is_infinite()) return 2.0 * std::atan2(1.0, std::abs(p.value()));
        const Complex a = p.value();
        const Complex b = q.value();
        return 2.0 * std::atan2(detail::cabs(b - a), detail::cabs(1.0 + std::conj(a) * b));
    }
    case GeometryKind::Hyperbolic: {
        const Complex a = p.value();
        const Complex b = q.value();
        const double num = detail::cabs(b - a);
        const double den = detail::cabs(1.0 - std::conj(a) * b);
        // 2 atanh(x) == ln((1+x)/(1-x)), computed without cancellation.
        return 2.0 * std::atanh(std::min(num / den, 1.0));
    }
    }
    return 0.0;
}

inline double distance(GeometryKind kind, const ModelPoint& p, const ModelPoint& q) {
    if (p.kind != kind || q.kind != kind)
        throw Error(ErrorCode::KindMismatch, "distance between points of different models");
    return distance(kind, p.position, q.position);
}

/// Spherical isometry e^{i theta} (z - z0) / (conj(z0) z + 1).
inline IsometryTransform spherical_moebius(double theta, Complex z0) {
    const Complex e = std::polar(1.0, theta);
    return {MoebiusMatrix{e, -e * z0, std::conj(z0), 1.0}.normalized(), false};
}

/// Hyperbolic isometry e^{i theta} (z - z0) / (1 - conj(z0) z).
inline IsometryTransform hyperbolic_moebius(double theta, Complex z0) {
    const Complex e = std::polar(1.0, theta);
    return {MoebiusMatrix{e, -e * z0, -std::conj(z0), 1.0}.normalized(), false};
}

/// An oriented geodesic: a line (point + unit direction) or a circle traversed
/// counterclockwise or clockwise.
struct Geodesic {
    enum class Shape { Line, Circle };

    Shape shape = Shape::Line;
    GeometryKind kind = GeometryKind::Euclidean;
    Complex point{0.0};
    Complex direction{1.0};
    Complex center{0.0};
    double radius = 0.0;
    bool counterclockwise = true;

    static Geodesic line(GeometryKind kind, Complex point, Complex direction) {
        Geodesic g;
        g.shape = Shape::Line;
        g.kind = kind;
        g.direction = detail::unit(direction);
        // Store the foot of the perpendicular from the origin.
        g.point = point - g.direction * (point.real() * g.direction.real() +
                                         point.imag() * g.direction.imag());
        return g;
    }

    static Geodesic circle(GeometryKind kind, Complex center, double radius, bool ccw) {
        Geodesic g;
        g.shape = Shape::Circle;
        g.kind = kind;
        g.center = center;
        g.radius = radius;
        g.counterclockwise = ccw;
        return g;
    }

    bool is_line() const { return shape == Shape::Line; }
    bool is_circle() const { return shape == Shape::Circle; }

    /// Euclidean distance from p to the carrier line or circle; 0 for infinity on a line.
    double incidence_residual(const ExtComplex& p) const {
        if (p.is_infinite()) return is_line() ? 0.0 : std::numeric_limits<double>::infinity();
        const Complex z = p.value();
        if (is_line()) return std::abs(detail::cross(direction, z - point));
        return std::abs(detail::cabs(z - center) - radius);
    }

    bool contains(const ExtComplex& p, double tol = kIncidenceTolerance) const {
        if (p.is_finite() && is_circle())
            return incidence_residual(p) <= tol * std::max(1.0, radius);
        return incidence_residual(p) <= tol;
    }

    /// Residual of the model condition: |c|^2 - r^2 -/+ 1 for circles, distance of the
    /// line from the origin for the disk models.
    double invariant_residual() const {
        if (is_line()) return kind == GeometryKind::Euclidean ? 0.0 : std::abs(point);
        const double s = std::norm(center) - radius * radius;
        switch (kind) {
        case GeometryKind::Hyperbolic: return std::abs(s - 1.0) / std::max(1.0, radius * radius);
        case GeometryKind::Spherical: return std::abs(s + 1.0) / std::max(1.0, radius * radius);
        case GeometryKind::Euclidean: return std::numeric_limits<double>::infinity();
        }
        return 0.0;
    }

    /// Unit tangent in the direction of travel at a finite point of the geodesic.
    Complex tangent_at(Complex z) const {
        if (is_line()) return direction;
        const Complex radial = detail::unit(z - center);
        return counterclockwise ? Complex(0.0, 1.0) * radial : Complex(0.0, -1.0) * radial;
    }

    /// Three points in travel order, for transporting the geodesic through a transform.
    std::array<ExtComplex, 3> samples() const {
        if (is_line()) {
            const double s = std::max(1.0, std::abs(point));
            return {ExtComplex(point - s * direction), ExtComplex(point),
                    ExtComplex(point + s * direction)};
        }
        const double sign = counterclockwise ? 1.0 : -1.0;
        const double tau = 2.0 * std::numbers::pi / 3.0;
        return {ExtComplex(center + radius * std::polar(1.0, 0.0)),
                ExtComplex(center + radius * std::polar(1.0, sign * tau)),
                ExtComplex(center + radius * std::polar(1.0, 2.0 * sign * tau))};
    }

    Geodesic reversed() const {
        Geodesic g = *this;
        g.direction = -direction;
        g.counterclockwise = !counterclockwise;
        return g;
    }
};

/// The oriented generalized circle through a, b, c (travel order a -> b -> c).
/// Any one of the points may be infinity, in which case the result is a line.
inline Geodesic geodesic_from_points(GeometryKind kind, const ExtComplex& a, const ExtComplex& b,
                                     const ExtComplex& c) {
    if (a.is_infinite()) return Geodesic::line(kind, b.value(), c.value() - b.value());
    if (b.is_infinite()) return Geodesic::line(kind, a.value(), a.value() - c.value());
    if (c.is_infinite()) return Geodesic::line(kind, a.value(), b.value() - a.value());

    const Complex za = a.value(), zb = b.value(), zc = c.value();
    const Complex u = zb - za;
    const Complex v = zc - za;
    const double area2 = detail::cross(u, v);
    const double scale = std::sqrt(std::norm(u) * std::norm(v));
    if (scale == 0.0) throw Error(ErrorCode::DegenerateInput, "geodesic needs distinct points");
    if (std::abs(area2) <= 1e-13 * scale) {
        // Cyclic order on the projective line: travel along b - a unless c sits
        // between a and b, in which case a reaches b only by wrapping through infinity.
        const double sc = (u.real() * v.real() + u.imag() * v.imag()) / std::norm(u);
        const bool between = sc > 0.0 && sc < 1.0;
        return Geodesic::line(kind, za, between ? -u : u);
    }
    // Circumcenter relative to a.
    const double nu = std::norm(u);
    const double nv = std::norm(v);
    const Complex rel((v.imag() * nu - u.imag() * nv) / (2.0 * area2),
                      (u.real() * nv - v.real() * nu) / (2.0 * area2));
    const Complex center = za + rel;
    // Average the three radii to spread rounding evenly.
    const double r = (detail::cabs(rel) + detail::cabs(zb - center) + detail::cabs(zc - center)) / 3.0;
    return Geodesic::circle(kind, center, r, area2 > 0.0);
}

/// The geodesic through the finite point p travelling in direction t.
inline Geodesic geodesic_with_tangent(GeometryKind kind, Complex p, Complex t) {
    const Complex tu = detail::unit(t);
    if (kind == GeometryKind::Euclidean) return Geodesic::line(kind, p, tu);
    // Center c = p + rho * n with n the left normal; the model condition
    // |c|^2 = rho^2 + 1 (hyperbolic) or rho^2 - 1 (spherical) is linear in rho.
    const Complex n(-tu.imag(), tu.real());
    const double pn = p.real() * n.real() + p.imag() * n.imag();
    const double rhs = kind == GeometryKind::Hyperbolic ? 1.0 - std::norm(p) : -1.0 - std::norm(p);
    if (std::abs(2.0 * pn) <= 1e-15 * std::abs(rhs)) return Geodesic::line(kind, p, tu);
    const double rho = rhs / (2.0 * pn);
    return Geodesic::circle(kind, p + rho * n, std::abs(rho), rho > 0.0);
}

/// Image of g under t, oriented by pushing its travel direction forward.
inline Geodesic transform_geodesic(const IsometryTransform& t, const Geodesic& g) {
    const auto s = g.samples();
    return geodesic_from_points(g.kind, t(s[0]), t(s[1]), t(s[2]));
}

/// The geodesic through p and q, oriented from p toward q along the shorter way.
inline Geodesic geodesic_through(GeometryKind kind, const ExtComplex& p, const ExtComplex& q) {
    detail::require_valid(kind, p);
    detail::require_valid(kind, q);
    if (chordal_distance(p, q) < 1e-15)
        throw Error(ErrorCode::DegenerateInput, "geodesic_through needs two distinct points");
    switch (kind) {
    case GeometryKind::Euclidean:
        return Geodesic::line(kind, p.value(), q.value() - p.value());
    case GeometryKind::Hyperbolic: {
        // The circle through p and q orthogonal to the unit circle also passes through
        // the inversion of either point; invert the one farther from the origin.
        const Complex a = p.value(), b = q.value();
        const Complex far = std::norm(a) >= std::norm(b) ? a : b;
        if (std::norm(far) == 0.0) return Geodesic::line(kind, 0.0, b - a);
        // The disk arc from p to q never reaches the exterior point.
        return geodesic_from_points(kind, a, b, far / std::norm(far));
    }
    case GeometryKind::Spherical: {
        if (p.is_infinite()) return Geodesic::line(kind, 0.0, -q.value());
        if (q.is_infinite()) return Geodesic::line(kind, 0.0, p.value());
        const Complex a = p.value(), b = q.value();
        const Complex far = std::norm(a) >= std::norm(b) ? a : b;
        // The shorter arc (length < pi) avoids both antipodes. Use the antipode of the
        // point farther from the origin so the third point stays well scaled.
        return geodesic_from_points(kind, a, b, -far / std::norm(far));
    }
    }
    return {};
}

/// Exterior angle between two directions, in [0, pi].
inline double direction_angle(Complex u, Complex v) {
    return std::abs(std::atan2(detail::cross(u, v), u.real() * v.real() + u.imag() * v.imag()));
}

/// Interior angle at a common point: pi minus the turn from g1's travel direction to g2's.
inline double angle_between(GeometryKind kind, const Geodesic& g1, const Geodesic& g2,
                            const ExtComplex& at) {
    (void)kind;
    if (!g1.contains(at, 1e-8) || !g2.contains(at, 1e-8))
        throw Error(ErrorCode::Incidence, "angle_between: point is not on both geodesics");
    if (at.is_infinite()) {
        // Move infinity to the origin with a rotation of the sphere.
        const IsometryTransform flip{MoebiusMatrix{0.0, -1.0, 1.0, 0.0}, false};
        return angle_between(kind, transform_geodesic(flip, g1), transform_geodesic(flip, g2),
                             ExtComplex(0.0));
    }
    const Complex z = at.value();
    return std::numbers::pi - direction_angle(g1.tangent_at(z), g2.tangent_at(z));
}

/// An orientation-preserving isometry taking g onto the canonical geodesic with its
/// travel direction preserved: the unit circle counterclockwise with the disk arc
/// midpoint at i (spherical), the real diameter with midpoint at 0 (hyperbolic), or
/// the real axis with the stored foot point at 0 (Euclidean).
inline IsometryTransform canonical_transform(const Geodesic& g) {
    using C = Complex;
    switch (g.kind) {
    case GeometryKind::Euclidean:
        return {MoebiusMatrix{std::conj(g.direction), -std::conj(g.direction) * g.point, 0.0, 1.0}
                    .normalized(),
                false};
    case GeometryKind::Hyperbolic: {
        if (g.is_line()) {
            const C d = g.direction;
            return {MoebiusMatrix{std::conj(d), 0.0, 0.0, 1.0}.normalized(), false};
        }
        const double m = std::abs(g.center);
        const C cu = g.center / m;
        const double alpha = std::acos(std::clamp(1.0 / m, -1.0, 1.0));
        const C u1 = cu * std::polar(1.0, alpha);
        const C u2 = cu * std::polar(1.0, -alpha);
        const C mid = g.center * (1.0 - g.radius / m);
        // Travel order along the circle: counterclockwise means u2 -> mid -> u1
        // when the arc inside the disk is the one facing the origin.
        const bool ccw_order = detail::signed_area2(u2, mid, u1) > 0.0;
        const C a = (ccw_order == g.counterclockwise) ? u2 : u1;
        const C b = (ccw_order == g.counterclockwise) ? u1 : u2;
        return {moebius_from_three_points(a, mid, b, C(-1.0), C(0.0), C(1.0)), false};
    }
    case GeometryKind::Spherical: {
        if (g.is_line()) {
            const C d = g.direction;
            return {moebius_from_three_points(-d, C(0.0), d, C(1.0), C(0.0, 1.0), C(-1.0)),
                    false};
        }
        const double m = std::abs(g.center);
        if (m < 1e-12) {
            if (g.counterclockwise) return IsometryTransform::identity();
            return {MoebiusMatrix{0.0, C(0.0, 1.0), C(0.0, 1.0), 0.0}, false};
        }
        const C cu = g.center / m;
        const C u1 = C(0.0, 1.0) * cu;
        const C u2 = -u1;
        const C mid = g.center * (1.0 - g.radius / m);
        const bool ccw_order = detail::signed_area2(u2, mid, u1) > 0.0;
        const C a = (ccw_order == g.counterclockwise) ? u2 : u1;
        const C b = (ccw_order == g.counterclockwise) ? u1 : u2;
        return {moebius_from_three_points(a, mid, b, C(1.0), C(0.0, 1.0), C(-1.0)), false};
    }
    }
    return {};
}

/// The point at intrinsic distance d from p along g; side +1 follows g's travel direction.
inline ExtComplex point_at_distance(GeometryKind kind, const ExtComplex& p, const Geodesic& g,
                                   double d, int side) {
    if (!g.contains(p, 1e-8))
        throw Error(ErrorCode::Incidence, "point_at_distance: point is not on the geodesic");
    if (d < 0.0) throw Error(ErrorCode::Domain, "point_at_distance: negative distance");
    const IsometryTransform t = canonical_transform(g);
    const IsometryTransform back = inverse(t);
    const double s = side >= 0 ? 1.0 : -1.0;
    const ExtComplex q = t(p);
    switch (kind) {
    case GeometryKind::Euclidean: return back(q.value().real() + s * d);
    case GeometryKind::Hyperbolic: {
        const double x = std::clamp(q.value().real(), -1.0, 1.0);
        const double x0 = std::atanh(x);
        return back(std::tanh(x0 + 0.5 * s * d));
    }
    case GeometryKind::Spherical: {
        const double theta = std::arg(q.value());
        return back(std::polar(1.0, theta + s * d));
    }
    }
    return p;
}

/// Reflection across a geodesic: inversion in its circle, or mirror in its line.
inline IsometryTransform reflect_across(const Geodesic& g) {
    if (g.is_line()) {
        const Complex u2 = g.direction * g.direction;
        return {MoebiusMatrix{u2, g.point - u2 * std::conj(g.point), 0.0, 1.0}.normalized(), true};
    }
    const Complex c = g.center;
    return {MoebiusMatrix{c, g.radius * g.radius - std::norm(c), 1.0, -std::conj(c)}.normalized(),
            true};
}

/// Real-axis translation by intrinsic length d.
inline IsometryTransform axis_translation(GeometryKind kind, double d) {
    switch (kind) {
    case GeometryKind::Euclidean: return {MoebiusMatrix{1.0, d, 0.0, 1.0}, false};
    case GeometryKind::Hyperbolic: {
        const double c = std::cosh(0.5 * d), s = std::sinh(0.5 * d);
        return {MoebiusMatrix{c, s, s, c}, false};
    }
    case GeometryKind::Spherical: {
        const double c = std::cos(0.5 * d), s = std::sin(0.5 * d);
        return {MoebiusMatrix{c, s, -s, c}, false};
    }
    }
    return {};
}

inline IsometryTransform rotation(double angle) { return {rotation_matrix(angle), false}; }

/// The orientation-preserving isometry sending 0 to z along the geodesic through both.
inline IsometryTransform translation_from_origin(GeometryKind kind, const ExtComplex& z) {
    switch (kind) {
    case GeometryKind::Euclidean: return {MoebiusMatrix{1.0, z.value(), 0.0, 1.0}, false};
    case GeometryKind::Hyperbolic: {
        const Complex w = z.value();
        return {MoebiusMatrix{1.0, w, std::conj(w), 1.0}.normalized(), false};
    }
    case GeometryKind::Spherical: {
        if (z.is_infinite()) return {MoebiusMatrix{0.0, -1.0, 1.0, 0.0}, false};
        const Complex w = z.value();
        return {MoebiusMatrix{1.0, w, -std::conj(w), 1.0}.normalized(), false};
    }
    }
    return {};
}

/// An orientation-preserving isometry with result(a) = b.
inline IsometryTransform translation_taking(GeometryKind kind, const ExtComplex& a,
                                            const ExtComplex& b) {
    detail::require_valid(kind, a);
    detail::require_valid(kind, b);
    return compose(translation_from_origin(kind, b), inverse(translation_from_origin(kind, a)));
}

} // namespace kaleido
