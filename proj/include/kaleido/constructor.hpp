#pragma once

// Fundamental polygon construction for every realizable notation.
//
// Side lengths come from closed-form triangle / right-quad / right-pentagon
// relations; vertices come from one anchored walk of frames
//   F_{i+1} = F_i o Translate(d_i) o Rotate(pi - pi/k_{i+1}),
// with vertex p_i = F_i(0) and edge i the image under F_i of the positive real axis.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "kaleido/error.hpp"
#include "kaleido/geometry.hpp"
#include "kaleido/moebius.hpp"
#include "kaleido/notation.hpp"

namespace kaleido {

inline constexpr double kDefaultFreeVariable = 1.4;
inline constexpr double kClosureFailureThreshold = 1e-6;

struct PolygonEdge {
    Geodesic geodesic;
    ExtComplex start;
    ExtComplex end;
    ExtComplex midpoint;
    double length = 0.0;
    /// Isometry taking the positive real axis from 0 onto this edge.
    IsometryTransform frame;
};

struct FundamentalPolygon {
    GeometryKind kind = GeometryKind::Euclidean;
    std::vector<ExtComplex> vertices;
    std::vector<PolygonEdge> edges;
    std::vector<double> corner_orders;
    std::vector<double> free_vars;
    double closure_residual = 0.0;
    std::vector<double> angle_residuals;
    double length_residual = 0.0;
    bool is_orbifold = true;
    /// Interior point used as the copy center during cover generation.
    ExtComplex base_point;
    /// Where the walk ended; equals vertices[0] up to the closure gap.
    ExtComplex walk_end;

    std::size_t size() const { return vertices.size(); }
    double max_angle_residual() const {
        double m = 0.0;
        for (double r : angle_residuals) m = std::max(m, std::abs(r));
        return m;
    }
};

struct FreeVariableRoles {
    std::size_t count = 0;
    std::vector<std::string> roles;
};

struct ClosureReport {
    std::vector<double> angle_residuals;   // measured angle - pi/k per corner
    std::vector<double> length_residuals;  // measured length - stored length per edge
    std::vector<double> incidence_residuals;
    double max_angle_residual = 0.0;
    double max_length_residual = 0.0;
    double max_incidence_residual = 0.0;
    double closure_gap = 0.0;
};

namespace detail {

inline void check_order(double k) {
    if (!(k >= 1.0) || !std::isfinite(k)) throw Error(ErrorCode::Domain, "corner order must be >= 1");
}

inline double checked_length(double v, const char* edge, const char* what) {
    if (!std::isfinite(v) || v <= 0.0)
        throw InfeasibleFreeVariable(edge, std::string(what) + " is infeasible for the given cut lengths");
    return v;
}

/// cos and sin of pi/k and of pi/(2k); small integer orders come from a table.
struct OrderTrig {
    double c, s, half_c, half_s;
};

inline OrderTrig order_trig(double k) {
    auto make = [](double kk) {
        const double a = std::numbers::pi / kk;
        return OrderTrig{std::cos(a), std::sin(a), std::cos(0.5 * a), std::sin(0.5 * a)};
    };
    constexpr int kTable = 64;
    static const std::array<OrderTrig, kTable + 1> table = [&] {
        std::array<OrderTrig, kTable + 1> t{};
        for (int i = 1; i <= kTable; ++i) t[i] = make(i);
        return t;
    }();
    if (k <= kTable && k == std::floor(k)) return table[static_cast<int>(k)];
    return make(k);
}

/// cosh and sinh from one expm1, accurate for small arguments.
inline std::pair<double, double> cosh_sinh(double x) {
    const double em = std::expm1(x);
    const double e = em + 1.0;
    const double sh = 0.5 * em * (em + 2.0) / e;
    return {sh + 1.0 / e, sh};
}

inline double acosh_checked(double x, const char* edge, const char* what) {
    if (!(x >= 1.0 - 1e-12)) throw InfeasibleFreeVariable(edge, std::string(what) + ": acosh argument below 1");
    return std::acosh(std::max(x, 1.0));
}

} // namespace detail

/// Sides d12, d23, d31 of the spherical triangle with angles pi/k1, pi/k2, pi/k3.
inline std::array<double, 3> spherical_triangle_sides(double k1, double k2, double k3) {
    for (double k : {k1, k2, k3}) detail::check_order(k);
    if (!(1.0 / k1 + 1.0 / k2 + 1.0 / k3 > 1.0))
        throw Error(ErrorCode::WrongGeometry, "angle sum does not exceed pi: not spherical");
    const std::array<double, 3> a = {std::numbers::pi / k1, std::numbers::pi / k2,
                                     std::numbers::pi / k3};
    std::array<double, 3> d{};
    for (int i = 0; i < 3; ++i) {
        const double ai = a[i], aj = a[(i + 1) % 3], ak = a[(i + 2) % 3];
        const double x = (std::cos(ak) + std::cos(ai) * std::cos(aj)) / (std::sin(ai) * std::sin(aj));
        if (x > 1.0 + 1e-12 || x < -1.0 - 1e-12 || !std::isfinite(x))
            throw Error(ErrorCode::NumericDomain, "acos argument outside [-1, 1]");
        d[i] = std::acos(std::clamp(x, -1.0, 1.0));
    }
    return d;
}

/// Sides d12, d23, d31 of the hyperbolic triangle with angles pi/k1, pi/k2, pi/k3.
inline std::array<double, 3> hyperbolic_triangle_sides(double k1, double k2, double k3) {
    for (double k : {k1, k2, k3}) detail::check_order(k);
    if (!(1.0 / k1 + 1.0 / k2 + 1.0 / k3 < 1.0))
        throw Error(ErrorCode::WrongGeometry, "angle sum is not below pi: not hyperbolic");
    const std::array<double, 3> a = {std::numbers::pi / k1, std::numbers::pi / k2,
                                     std::numbers::pi / k3};
    std::array<double, 3> d{};
    for (int i = 0; i < 3; ++i) {
        const double ai = a[i], aj = a[(i + 1) % 3], ak = a[(i + 2) % 3];
        const double x = (std::cos(ak) + std::cos(ai) * std::cos(aj)) / (std::sin(ai) * std::sin(aj));
        if (!(x >= 1.0 - 1e-12)) throw Error(ErrorCode::NumericDomain, "acosh argument below 1");
        d[i] = std::acosh(std::max(1.0, x));
    }
    return d;
}

struct RightQuadSides {
    double d23, d34, d41;
};

/// The quad with right angles at p1, p2 and angles pi/k3 at p3, pi/k4 at p4, given the
/// length d12 of the edge between the right angles.
inline RightQuadSides right_quad_sides(double k3, double k4, double d12) {
    detail::check_order(k3);
    detail::check_order(k4);
    if (!(1.0 / k3 + 1.0 / k4 < 1.0))
        throw Error(ErrorCode::WrongGeometry, "*22k3k4 is not hyperbolic for these orders");
    if (!(d12 > 0.0) || !std::isfinite(d12))
        throw Error(ErrorCode::Domain, "right quad needs a positive cut length d12");
    const detail::OrderTrig a = detail::order_trig(k3), b = detail::order_trig(k4);
    const auto [ch, sh] = detail::cosh_sinh(d12);
    RightQuadSides q{};
    q.d23 = detail::checked_length(std::asinh((b.c + a.c * ch) / (a.s * sh)), "d12",
                                   "right quad side d23");
    q.d34 = detail::checked_length(
        detail::acosh_checked((ch + a.c * b.c) / (a.s * b.s), "d12", "right quad side d34"), "d12",
        "right quad side d34");
    q.d41 = detail::checked_length(std::asinh((a.c + b.c * ch) / (b.s * sh)), "d12",
                                   "right quad side d41");
    return q;
}

struct RightPentagonSides {
    double d12, d34, d45;
};

/// The pentagon with four right angles and angle pi/k5 between sides d34 and d45, given
/// the two sides d23 and d51 that join right-angled corners on either side of d12.
inline RightPentagonSides right_pentagon_sides(double k5, double d23, double d51) {
    detail::check_order(k5);
    if (!(d23 > 0.0) || !std::isfinite(d23))
        throw InfeasibleFreeVariable("d23", "right pentagon needs a positive d23");
    if (!(d51 > 0.0) || !std::isfinite(d51))
        throw InfeasibleFreeVariable("d51", "right pentagon needs a positive d51");
    const detail::OrderTrig a = detail::order_trig(k5);
    const auto [c23, s23] = detail::cosh_sinh(d23);
    const auto [c51, s51] = detail::cosh_sinh(d51);
    RightPentagonSides p{};
    p.d12 = detail::checked_length(
        detail::acosh_checked((a.c + c23 * c51) / (s23 * s51), "d23", "right pentagon side d12"),
        "d23", "right pentagon side d12");
    p.d45 = detail::checked_length(std::asinh((c23 + a.c * c51) / (s51 * a.s)), "d51",
                                   "right pentagon side d45");
    p.d34 = detail::checked_length(std::asinh((c51 + a.c * c23) / (s23 * a.s)), "d23",
                                   "right pentagon side d34");
    return p;
}

namespace detail {

/// Free-variable count for a stripped, classified, realizable notation.
inline std::size_t free_var_count(GeometryKind kind, std::size_t N) {
    switch (kind) {
    case GeometryKind::Spherical: return 0;
    case GeometryKind::Euclidean: return N == 4 ? 2 : 1;
    case GeometryKind::Hyperbolic: return N == 3 ? 0 : (N == 4 ? 1 : N - 3);
    }
    return 0;
}

inline std::vector<std::string> free_var_roles(GeometryKind kind, std::size_t N) {
    std::vector<std::string> roles;
    if (kind == GeometryKind::Euclidean) {
        if (N == 4) roles = {"width", "height"};
        else roles = {"scale"};
    } else if (kind == GeometryKind::Hyperbolic) {
        if (N == 4) roles = {"cut"};
        else if (N >= 5)
            for (std::size_t j = 2; j + 1 < N; ++j) roles.push_back("cut" + std::to_string(j));
    }
    return roles;
}

} // namespace detail

/// Number and meaning of the free variables for a realizable notation.
inline FreeVariableRoles required_free_vars(const OrbifoldNotation& raw) {
    const OrbifoldNotation n = strip_unit_orders(raw);
    const Classification c = classify(n);
    if (c.is_bad) throw Error(ErrorCode::NotRealizable, "bad orbifold: not realizable");
    FreeVariableRoles r;
    r.roles = detail::free_var_roles(c.kind, n.walls());
    r.count = r.roles.size();
    return r;
}

inline std::vector<double> default_free_vars(const OrbifoldNotation& n) {
    const OrbifoldNotation r = strip_unit_orders(n);
    const Classification c = classify(r);
    if (c.is_bad) throw Error(ErrorCode::NotRealizable, "bad orbifold: not realizable");
    return std::vector<double>(detail::free_var_count(c.kind, r.walls()), kDefaultFreeVariable);
}

/// Side lengths d_{i,i+1} of a hyperbolic polygon with N >= 4 corners.
///
/// N = 4: two right quads share the cut (or one quad when two adjacent corners are
/// right angles). N >= 5: a comb of N - 3 perpendicular teeth dropped from corners
/// p2..p_{N-2} onto the geodesic through p_N p_1; the pieces are two right quads at
/// the ends and N - 4 right pentagons between them. Tooth j has length fv[j - 2].
inline std::vector<double> hyperbolic_polygon_sides(const std::vector<double>& k,
                                                    const std::vector<double>& fv) {
    const std::size_t N = k.size();
    std::vector<double> L(N, 0.0);
    if (N == 4) {
        for (std::size_t r = 0; r < 4; ++r) {
            if (k[r] == 2.0 && k[(r + 1) % 4] == 2.0) {
                const RightQuadSides q = right_quad_sides(k[(r + 2) % 4], k[(r + 3) % 4], fv[0]);
                const std::array<double, 4> rotated = {fv[0], q.d23, q.d34, q.d41};
                for (std::size_t i = 0; i < 4; ++i) L[(r + i) % 4] = rotated[i];
                return L;
            }
        }
        const RightQuadSides a = right_quad_sides(k[0], k[1], fv[0]);
        const RightQuadSides b = right_quad_sides(k[2], k[3], fv[0]);
        return {a.d34, a.d41 + b.d23, b.d34, b.d41 + a.d23};
    }
    // Ends of the comb: the quad at corners (p1, p2) and at (p_{N-1}, p_N).
    auto end_quad = [&](double ka, double kb, double tooth) -> RightQuadSides {
        if (ka == 2.0 && kb == 2.0) return {0.0, tooth, 0.0};
        return right_quad_sides(ka, kb, tooth);
    };
    const RightQuadSides q1 = end_quad(k[0], k[1], fv.front());
    const RightQuadSides q2 = end_quad(k[N - 2], k[N - 1], fv.back());
    std::vector<RightPentagonSides> P;
    P.reserve(N - 4);
    for (std::size_t j = 2; j + 2 < N; ++j) {
        try {
            P.push_back(right_pentagon_sides(k[j], fv[j - 2], fv[j - 1]));
        } catch (const InfeasibleFreeVariable& e) {
            const std::size_t which = e.edge() == "d23" ? j : j + 1;
            throw InfeasibleFreeVariable("cut" + std::to_string(which), e.what());
        }
    }
    L[0] = q1.d34;
    L[1] = q1.d41 + P.front().d34;
    for (std::size_t m = 0; m + 1 < P.size(); ++m) L[2 + m] = P[m].d45 + P[m + 1].d34;
    L[N - 3] = P.back().d45 + q2.d23;
    L[N - 2] = q2.d34;
    double base = q2.d41 + q1.d23;
    for (const auto& p : P) base += p.d12;
    L[N - 1] = base;
    return L;
}

/// Recomputes angles from geodesics through consecutive vertices, lengths from the
/// model distance, and the gap between the walk's end and p1.
inline ClosureReport validate_closure(const FundamentalPolygon& p) {
    ClosureReport rep;
    const std::size_t N = p.vertices.size();
    if (N == 0) return rep;
    rep.angle_residuals.reserve(N);
    rep.length_residuals.reserve(N);
    rep.incidence_residuals.reserve(N);
    std::vector<Geodesic> g(N);
    for (std::size_t i = 0; i < N; ++i) {
        const PolygonEdge& e = p.edges[i];
        const ExtComplex& a = p.vertices[i];
        const ExtComplex& b = p.vertices[(i + 1) % N];
        if (N == 1) {
            g[i] = e.geodesic;
        } else if (p.kind == GeometryKind::Spherical && e.length > 0.75 * std::numbers::pi) {
            // Endpoints near-antipodal: pin the circle with the stored midpoint.
            g[i] = geodesic_from_points(p.kind, a, e.midpoint, b);
        } else {
            g[i] = geodesic_through(p.kind, a, b);
        }
        double inc = std::max(e.geodesic.incidence_residual(e.start),
                              e.geodesic.incidence_residual(e.end));
        if (e.geodesic.is_circle()) inc /= std::max(1.0, e.geodesic.radius);
        rep.incidence_residuals.push_back(inc);
        rep.max_incidence_residual = std::max(rep.max_incidence_residual, inc);
        double measured = e.length;
        if (N > 1 && e.length <= std::numbers::pi) measured = distance(p.kind, a, b);
        rep.length_residuals.push_back(measured - e.length);
        rep.max_length_residual = std::max(rep.max_length_residual, std::abs(measured - e.length));
    }
    for (std::size_t i = 0; i < N; ++i) {
        const Geodesic& in = g[(i + N - 1) % N];
        const Geodesic& out = g[i];
        double measured;
        try {
            measured = angle_between(p.kind, in, out, p.vertices[i]);
        } catch (const Error&) {
            measured = std::numeric_limits<double>::infinity();
        }
        const double r = measured - std::numbers::pi / p.corner_orders[i];
        rep.angle_residuals.push_back(r);
        rep.max_angle_residual = std::max(rep.max_angle_residual, std::abs(r));
    }
    rep.closure_gap = p.kind == GeometryKind::Spherical
                          ? chordal_distance(p.walk_end, p.vertices[0])
                          : std::abs(p.walk_end.value() - p.vertices[0].value());
    return rep;
}

namespace detail {

/// True when z lies strictly to the left of every oriented edge.
inline bool strictly_inside(const FundamentalPolygon& p, const ExtComplex& z) {
    if (z.is_infinite()) return false;
    const Complex w = z.value();
    for (const auto& e : p.edges) {
        const Geodesic& g = e.geodesic;
        double side;
        if (g.is_line()) side = cross(g.direction, w - g.point);
        else side = (g.counterclockwise ? 1.0 : -1.0) * (g.radius - std::abs(w - g.center));
        if (!(side > 1e-12)) return false;
    }
    return true;
}

/// Centroid of the vertices lifted to the hyperboloid or sphere, projected back.
inline ExtComplex lifted_centroid(GeometryKind kind, const std::vector<ExtComplex>& v) {
    double x = 0.0, y = 0.0, t = 0.0;
    for (const auto& p : v) {
        const Complex z = p.value();
        const double s = std::norm(z);
        if (kind == GeometryKind::Hyperbolic) {
            x += 2.0 * z.real() / (1.0 - s);
            y += 2.0 * z.imag() / (1.0 - s);
            t += (1.0 + s) / (1.0 - s);
        } else {
            x += 2.0 * z.real() / (1.0 + s);
            y += 2.0 * z.imag() / (1.0 + s);
            t += (1.0 - s) / (1.0 + s);
        }
    }
    if (kind == GeometryKind::Hyperbolic) {
        const double n = std::sqrt(t * t - x * x - y * y);
        x /= n, y /= n, t /= n;
        return Complex(x, y) / (1.0 + t);
    }
    const double n = std::sqrt(t * t + x * x + y * y);
    x /= n, y /= n, t /= n;
    return Complex(x, y) / (1.0 + t);
}

inline ExtComplex choose_base_point(const FundamentalPolygon& p) {
    if (p.vertices.size() == 1) return Complex(0.0);
    Complex avg(0.0);
    bool finite = true;
    for (const auto& v : p.vertices) {
        if (v.is_infinite()) finite = false;
        else avg += v.value();
    }
    if (finite) {
        avg /= static_cast<double>(p.vertices.size());
        if (strictly_inside(p, avg)) return avg;
    }
    if (finite && p.kind != GeometryKind::Euclidean) {
        const ExtComplex c = lifted_centroid(p.kind, p.vertices);
        if (strictly_inside(p, c)) return c;
    }
    // Fall back to a point just inside the first edge.
    const PolygonEdge& e = p.edges.front();
    const IsometryTransform shifted =
        compose(e.frame, compose(axis_translation(p.kind, 0.5 * e.length), rotation(0.5 * std::numbers::pi)));
    return compose(shifted, axis_translation(p.kind, 1e-3))(Complex(0.0));
}

/// The point at intrinsic distance d from 0 along the positive real axis.
inline ExtComplex axis_point(GeometryKind kind, double d) {
    switch (kind) {
    case GeometryKind::Euclidean: return d;
    case GeometryKind::Hyperbolic: return std::tanh(0.5 * d);
    case GeometryKind::Spherical: {
        const double c = std::cos(0.5 * d);
        if (std::abs(c) < 1e-15) return ExtComplex::infinity();
        return std::sin(0.5 * d) / c;
    }
    }
    return 0.0;
}

/// The oriented image of the real axis: the geodesic through F(0) with tangent F'(0).
inline Geodesic image_of_real_axis(GeometryKind kind, const IsometryTransform& F) {
    const MoebiusMatrix& m = F.matrix;
    if (std::norm(m.d) > 1e-20) {
        const Complex p = detail::cdiv(m.b, m.d);
        if (std::norm(p) < 1e12) return geodesic_with_tangent(kind, p, m.derivative(0.0));
    }
    for (double t : {1.0, 0.5, 2.0, 0.25}) {
        const ExtComplex a = F(Complex(-t)), b = F(Complex(0.0)), c = F(Complex(t));
        const auto moderate = [](const ExtComplex& z) {
            return z.is_finite() && std::abs(z.value()) < 1e6;
        };
        if (moderate(a) && moderate(b) && moderate(c)) return geodesic_from_points(kind, a, b, c);
    }
    return geodesic_from_points(kind, F(Complex(-1.0)), F(Complex(0.0)), F(Complex(1.0)));
}

/// Lays out edges by the frame walk. `lengths[i]` is the edge from corner i to i+1.
inline FundamentalPolygon walk_polygon(GeometryKind kind, const std::vector<double>& orders,
                                       const std::vector<double>& lengths,
                                       const IsometryTransform& anchor) {
    const std::size_t N = orders.size();
    FundamentalPolygon p;
    p.kind = kind;
    p.corner_orders = orders;
    p.vertices.resize(N);
    p.edges.resize(N);
    IsometryTransform F = anchor;
    for (std::size_t i = 0; i < N; ++i) {
        PolygonEdge& e = p.edges[i];
        e.frame = F;
        e.length = lengths[i];
        p.vertices[i] = F(Complex(0.0));
        e.start = p.vertices[i];
        e.geodesic = image_of_real_axis(kind, F);
        // Rotation by pi - pi/k has half-angle entries e^{i(pi/2 - pi/2k)}.
        const OrderTrig t = order_trig(orders[(i + 1) % N]);
        const Complex h(t.half_s, t.half_c);
        const MoebiusMatrix turn{h, 0.0, 0.0, std::conj(h)};
        MoebiusMatrix step;
        if (kind == GeometryKind::Hyperbolic) {
            const auto [c, s] = cosh_sinh(0.5 * lengths[i]);
            e.midpoint = F(Complex(s / (c + 1.0)));
            step = MoebiusMatrix{c, s, s, c};
        } else {
            e.midpoint = F(axis_point(kind, 0.5 * lengths[i]));
            step = axis_translation(kind, lengths[i]).matrix;
        }
        // Frames are products of unit-determinant factors, so no renormalization.
        F.matrix = F.matrix * (step * turn);
    }
    for (std::size_t i = 0; i < N; ++i) p.edges[i].end = p.vertices[(i + 1) % N];
    p.walk_end = F(Complex(0.0));
    return p;
}

} // namespace detail

/// Builds the fundamental polygon. Order-1 corners are dropped first; the remaining
/// corners keep the cyclic order in which they were written. An empty `fv` selects the
/// defaults.
inline FundamentalPolygon build(const OrbifoldNotation& raw, const std::vector<double>& fv_in) {
    for (double k : raw.corner_orders) detail::check_order(k);
    const OrbifoldNotation n = strip_unit_orders(raw);
    const Classification c = classify(n);
    if (c.is_bad) throw Error(ErrorCode::NotRealizable, "bad orbifold: not realizable");
    const std::size_t want = detail::free_var_count(c.kind, n.walls());
    const std::vector<double> fv =
        fv_in.empty() ? std::vector<double>(want, kDefaultFreeVariable) : fv_in;
    if (fv.size() != want)
        throw Error(ErrorCode::Domain, "expected " + std::to_string(want) +
                                           " free variables, got " + std::to_string(fv.size()));
    for (std::size_t i = 0; i < fv.size(); ++i) {
        if (!(fv[i] > 0.0) || !std::isfinite(fv[i])) {
            const std::string role = detail::free_var_roles(c.kind, n.walls())[i];
            throw InfeasibleFreeVariable(role, "free variable '" + role + "' must be positive and finite");
        }
    }

    const std::vector<double>& k = n.corner_orders;
    const std::size_t N = k.size();
    const double pi = std::numbers::pi;
    FundamentalPolygon p;

    switch (c.kind) {
    case GeometryKind::Euclidean: {
        std::vector<double> L;
        if (N == 4) {
            L = {fv[0], fv[1], fv[0], fv[1]};
        } else {
            const double s3 = std::sin(pi / k[2]);
            L = {fv[0], fv[0] * std::sin(pi / k[0]) / s3, fv[0] * std::sin(pi / k[1]) / s3};
        }
        p = detail::walk_polygon(c.kind, k, L, IsometryTransform::identity());
        break;
    }
    case GeometryKind::Spherical: {
        if (N == 1) {
            p = detail::walk_polygon(c.kind, k, {2.0 * pi},
                                     compose(translation_from_origin(c.kind, Complex(1.0)),
                                             rotation(0.5 * pi)));
        } else if (N == 2) {
            p = detail::walk_polygon(c.kind, k, {pi, pi},
                                     compose(translation_from_origin(c.kind, Complex(-1.0)),
                                             rotation(-0.5 * pi / k[0])));
        } else {
            const auto d = spherical_triangle_sides(k[0], k[1], k[2]);
            p = detail::walk_polygon(c.kind, k, {d[0], d[1], d[2]},
                                     compose(translation_from_origin(c.kind, Complex(1.0)),
                                             rotation(0.5 * pi)));
        }
        break;
    }
    case GeometryKind::Hyperbolic: {
        std::vector<double> L;
        if (N == 3) {
            const auto d = hyperbolic_triangle_sides(k[0], k[1], k[2]);
            L = {d[0], d[1], d[2]};
        } else {
            L = hyperbolic_polygon_sides(k, fv);
        }
        p = detail::walk_polygon(c.kind, k, L, IsometryTransform::identity());
        break;
    }
    }
    p.free_vars = fv;
    p.is_orbifold = c.is_orbifold;
    if (p.kind == GeometryKind::Hyperbolic)
        for (const auto& v : p.vertices)
            if (!(std::norm(v.value()) < 1.0))
                throw ConstructionFailure("vertex left the Poincare disk", 1.0, {});

    const ClosureReport rep = validate_closure(p);
    p.angle_residuals = rep.angle_residuals;
    p.length_residual = rep.max_length_residual;
    p.closure_residual = rep.closure_gap;
    if (!(rep.closure_gap <= kClosureFailureThreshold) ||
        !(rep.max_angle_residual <= kClosureFailureThreshold))
        throw ConstructionFailure("polygon failed to close", rep.closure_gap, rep.angle_residuals);
    p.base_point = detail::choose_base_point(p);
    return p;
}

inline FundamentalPolygon build(const OrbifoldNotation& n) { return build(n, {}); }

} // namespace kaleido
