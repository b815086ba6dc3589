#pragma once

// Objects placed in an orbifold room, and spiral rays in (model plane) x height.

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kaleido/error.hpp"
#include "kaleido/geometry.hpp"
#include "kaleido/moebius.hpp"

namespace kaleido {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Vertices and 0-based triangles as read from a mesh file.
struct RawMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
};

/// Reads "v x y z" and "f i j k" lines (1-indexed faces). Blank lines and '#' comments
/// are skipped; face tokens like "3/1/2" use the part before the first slash.
inline RawMesh read_mesh(std::istream& in) {
    RawMesh m;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::Parse, "mesh line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ss >> v.x >> v.y >> v.z)) fail("expected three coordinates");
            m.vertices.push_back(v);
        } else if (tag == "f") {
            std::array<int, 3> f{};
            for (int& idx : f) {
                std::string tok;
                if (!(ss >> tok)) fail("expected three indices");
                tok = tok.substr(0, tok.find('/'));
                try {
                    std::size_t used = 0;
                    idx = std::stoi(tok, &used) - 1;
                    if (used != tok.size()) fail("bad index '" + tok + "'");
                } catch (const std::logic_error&) {
                    fail("bad index '" + tok + "'");
                }
            }
            std::string extra;
            if (ss >> extra) fail("only triangles are supported");
            m.triangles.push_back(f);
        } else {
            fail("unknown record '" + tag + "'");
        }
    }
    for (const auto& f : m.triangles)
        for (int i : f)
            if (i < 0 || i >= static_cast<int>(m.vertices.size()))
                throw Error(ErrorCode::Parse, "face index out of range");
    return m;
}

struct SceneVertex {
    Complex horizontal;
    double height = 0.0;
};

struct SceneMesh {
    GeometryKind kind = GeometryKind::Euclidean;
    std::vector<SceneVertex> vertices;
    std::vector<std::array<int, 3>> triangles;
    IsometryTransform pose;
};

/// Centers the planar coordinates at their average and adopts them as model coordinates.
inline SceneMesh embed_object(const RawMesh& raw, GeometryKind kind) {
    if (raw.vertices.empty()) throw Error(ErrorCode::Domain, "embed_object needs at least one vertex");
    for (const auto& f : raw.triangles)
        for (int i : f)
            if (i < 0 || i >= static_cast<int>(raw.vertices.size()))
                throw Error(ErrorCode::Domain, "triangle index out of range");
    Complex avg(0.0);
    for (const auto& v : raw.vertices) avg += Complex(v.x, v.y);
    avg /= static_cast<double>(raw.vertices.size());
    SceneMesh m;
    m.kind = kind;
    m.triangles = raw.triangles;
    double far = 0.0;
    for (const auto& v : raw.vertices) {
        const Complex h = Complex(v.x, v.y) - avg;
        far = std::max(far, std::abs(h));
        m.vertices.push_back({h, v.z});
    }
    if (kind == GeometryKind::Hyperbolic && far >= 1.0) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "object does not fit in the Poincare disk (max radius " << far
            << "); pre-scale it uniformly by less than " << 1.0 / far;
        throw Error(ErrorCode::ObjectTooLarge, msg.str());
    }
    return m;
}

inline SceneMesh embed_object(const std::vector<Vec3>& vertices, GeometryKind kind) {
    return embed_object(RawMesh{vertices, {}}, kind);
}

/// Moves the object so that the image of its center lands on `to`.
inline SceneMesh move_object(const SceneMesh& m, const ExtComplex& to) {
    SceneMesh out = m;
    const ExtComplex here = m.pose(Complex(0.0));
    out.pose = compose(translation_taking(m.kind, here, to), m.pose);
    return out;
}

inline std::vector<std::pair<ExtComplex, double>> posed_vertices(const SceneMesh& m) {
    std::vector<std::pair<ExtComplex, double>> out;
    out.reserve(m.vertices.size());
    for (const auto& v : m.vertices) out.emplace_back(m.pose(v.horizontal), v.height);
    return out;
}

struct SpiralRay {
    GeometryKind kind = GeometryKind::Euclidean;
    ExtComplex origin;
    double origin_height = 0.0;
    Geodesic horizontal_geodesic;
    double horizontal_speed = 0.0;  // intrinsic arc length per unit t
    double vertical_speed = 0.0;
    double room_height = 1.0;
};

/// A ray from (p0, z0) whose horizontal velocity has model direction `direction` and
/// intrinsic length `horizontal_speed`.
inline SpiralRay make_spiral_ray(GeometryKind kind, const ExtComplex& p0, double z0,
                                 Complex direction, double horizontal_speed, double vertical_speed,
                                 double room_height) {
    detail::require_valid(kind, p0);
    if (p0.is_infinite()) throw Error(ErrorCode::Domain, "spiral origin must be finite");
    if (!(horizontal_speed >= 0.0)) throw Error(ErrorCode::Domain, "horizontal speed must be >= 0");
    if (horizontal_speed == 0.0 && vertical_speed == 0.0)
        throw Error(ErrorCode::Domain, "spiral needs a nonzero speed");
    if (!(room_height > 0.0)) throw Error(ErrorCode::Domain, "room height must be positive");
    if (std::abs(direction) == 0.0) direction = 1.0;
    SpiralRay r;
    r.kind = kind;
    r.origin = p0;
    r.origin_height = z0;
    r.horizontal_geodesic = geodesic_with_tangent(kind, p0.value(), direction);
    r.horizontal_speed = horizontal_speed;
    r.vertical_speed = vertical_speed;
    r.room_height = room_height;
    return r;
}

namespace detail {

/// Evaluates a spiral repeatedly without refitting the canonical transform.
class SpiralEvaluator {
public:
    explicit SpiralEvaluator(const SpiralRay& r) : ray_(r) {
        if (!r.horizontal_geodesic.contains(r.origin, 1e-8))
            throw Error(ErrorCode::Incidence, "spiral origin is not on its horizontal geodesic");
        to_canon_ = canonical_transform(r.horizontal_geodesic);
        back_ = inverse(to_canon_);
        const Complex q = to_canon_(r.origin).value();
        switch (r.kind) {
        case GeometryKind::Euclidean: param0_ = q.real(); break;
        case GeometryKind::Hyperbolic: param0_ = std::atanh(std::clamp(q.real(), -1.0, 1.0)); break;
        case GeometryKind::Spherical: param0_ = std::arg(q); break;
        }
    }

    ExtComplex horizontal(double t) const {
        if (t == 0.0 || ray_.horizontal_speed == 0.0) return ray_.origin;
        const double d = t * ray_.horizontal_speed;
        switch (ray_.kind) {
        case GeometryKind::Euclidean: return back_(Complex(param0_ + d));
        case GeometryKind::Hyperbolic: return back_(Complex(std::tanh(param0_ + 0.5 * d)));
        case GeometryKind::Spherical: return back_(std::polar(1.0, param0_ + d));
        }
        return ray_.origin;
    }

    double height(double t) const { return ray_.origin_height + t * ray_.vertical_speed; }

    /// Model-coordinate speed of the horizontal projection at t.
    double model_speed(const ExtComplex& w) const {
        const double s = ray_.horizontal_speed;
        if (w.is_infinite()) return std::numeric_limits<double>::infinity();
        switch (ray_.kind) {
        case GeometryKind::Euclidean: return s;
        case GeometryKind::Hyperbolic: return 0.5 * s * (1.0 - std::norm(w.value()));
        case GeometryKind::Spherical: return 0.5 * s * (1.0 + std::norm(w.value()));
        }
        return s;
    }

private:
    SpiralRay ray_;
    IsometryTransform to_canon_;
    IsometryTransform back_;
    double param0_ = 0.0;
};

} // namespace detail

/// Horizontal position at intrinsic arc length t * s_H along the geodesic, height z0 + t * s_Z.
inline std::pair<ExtComplex, double> spiral_point(const SpiralRay& r, double t) {
    if (!(t >= 0.0)) throw Error(ErrorCode::Domain, "spiral parameter must be >= 0");
    const detail::SpiralEvaluator ev(r);
    return {ev.horizontal(t), ev.height(t)};
}

/// Smallest t > 0 at which the spiral meets the triangle, searching by sign changes of
/// the signed plane distance on an adaptive grid and refining each by bisection.
inline std::optional<double> spiral_triangle_intersect(const SpiralRay& r,
                                                       const std::array<Vec3, 3>& tri) {
    const Vec3 e1 = tri[1] - tri[0], e2 = tri[2] - tri[0], e3 = tri[2] - tri[1];
    const double min_edge = std::min({norm(e1), norm(e2), norm(e3)});
    const double max_edge = std::max({norm(e1), norm(e2), norm(e3)});
    const Vec3 raw_n = cross(e1, e2);
    if (!(min_edge > 0.0) || !(norm(raw_n) > 1e-12 * max_edge * max_edge))
        throw Error(ErrorCode::DegenerateInput, "degenerate triangle");
    const Vec3 n = (1.0 / norm(raw_n)) * raw_n;
    const double c = dot(n, tri[0]);

    auto inside = [&](Vec3 p) {
        // Barycentric coordinates with a small relative tolerance.
        const Vec3 v = p - tri[0];
        const double d00 = dot(e1, e1), d01 = dot(e1, e2), d11 = dot(e2, e2);
        const double d20 = dot(v, e1), d21 = dot(v, e2);
        const double den = d00 * d11 - d01 * d01;
        const double b1 = (d11 * d20 - d01 * d21) / den;
        const double b2 = (d00 * d21 - d01 * d20) / den;
        constexpr double eps = 1e-9;
        return b1 >= -eps && b2 >= -eps && b1 + b2 <= 1.0 + eps;
    };

    constexpr double kMinT = 1e-12;
    const Complex p0 = r.origin.value();

    if (r.horizontal_speed == 0.0) {
        // Vertical ray: the plane distance is affine in t.
        const double slope = n.z * r.vertical_speed;
        if (slope == 0.0) return std::nullopt;
        const double t = (c - (n.x * p0.real() + n.y * p0.imag() + n.z * r.origin_height)) / slope;
        if (!(t > kMinT)) return std::nullopt;
        if (!inside({p0.real(), p0.imag(), r.origin_height + t * r.vertical_speed})) return std::nullopt;
        return t;
    }

    // Search window from the triangle's height range and horizontal reach.
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    const double zmin = std::min({tri[0].z, tri[1].z, tri[2].z});
    const double zmax = std::max({tri[0].z, tri[1].z, tri[2].z});
    const double pad = 1e-9 * std::max(1.0, zmax - zmin);
    if (r.vertical_speed != 0.0) {
        double a = (zmin - pad - r.origin_height) / r.vertical_speed;
        double b = (zmax + pad - r.origin_height) / r.vertical_speed;
        if (a > b) std::swap(a, b);
        lo = std::max(lo, a);
        hi = std::min(hi, b);
    } else if (r.origin_height < zmin - pad || r.origin_height > zmax + pad) {
        return std::nullopt;
    }
    if (r.kind == GeometryKind::Spherical) {
        if (r.vertical_speed == 0.0)
            hi = std::min(hi, 2.0 * std::numbers::pi / r.horizontal_speed);
    } else {
        // Intrinsic balls are Euclidean-convex, so the farthest triangle point is a vertex.
        double reach = 0.0;
        for (const auto& v : tri) {
            const Complex w(v.x, v.y);
            if (r.kind == GeometryKind::Hyperbolic && !(std::norm(w) < 1.0))
                reach = std::numeric_limits<double>::infinity();
            else
                reach = std::max(reach, distance(r.kind, r.origin, w));
        }
        hi = std::min(hi, 1.01 * reach / r.horizontal_speed + 1e-9);
    }
    if (!(hi > lo) || !std::isfinite(hi)) {
        if (!std::isfinite(hi))
            throw Error(ErrorCode::Domain, "spiral search window is unbounded");
        return std::nullopt;
    }
    lo = std::max(lo, kMinT);

    const detail::SpiralEvaluator ev(r);
    auto position = [&](double t) -> std::optional<Vec3> {
        const ExtComplex w = ev.horizontal(t);
        if (w.is_infinite()) return std::nullopt;
        const Complex z = w.value();
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
        return Vec3{z.real(), z.imag(), ev.height(t)};
    };
    auto g = [&](double t) -> std::optional<double> {
        const auto p = position(t);
        if (!p) return std::nullopt;
        return dot(n, *p) - c;
    };

    const double span = hi - lo;
    const double min_step = span / 2e6, max_step = span / 256.0;
    auto refine = [&](double a, double ga, double b) {
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            const auto gm = g(m);
            if (!gm) break;
            if (std::abs(*gm) < 1e-10 && b - a < 1e-12 * std::max(1.0, m)) return m;
            if ((*gm < 0.0) == (ga < 0.0)) {
                a = m;
                ga = *gm;
            } else {
                b = m;
            }
            if (b - a <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, m)) break;
        }
        return 0.5 * (a + b);
    };

    double t = lo;
    std::optional<double> gt = g(t);
    while (t < hi) {
        const auto pos = position(t);
        double step = max_step;
        if (pos) {
            const double speed = std::hypot(ev.model_speed(Complex(pos->x, pos->y)), r.vertical_speed);
            if (speed > 0.0) step = std::clamp(0.25 * min_edge / speed, min_step, max_step);
        } else {
            step = min_step;
        }
        const double t2 = std::min(hi, t + step);
        const auto g2 = g(t2);
        if (gt && g2) {
            // Crossings in order: [t, tm], then [tm, t2]. A graze can cross twice between
            // samples of one sign, so an extremum that bends toward zero is located first.
            double tm = 0.5 * (t + t2);
            auto gm = g(tm);
            if (gm && (*gm < 0.0) == (*gt < 0.0) && (*g2 < 0.0) == (*gt < 0.0) && *gm != 0.0) {
                const double h = 0.5 * (t2 - t);
                const double a = (*gt + *g2 - 2.0 * *gm) / (2.0 * h * h);
                const double b = (*g2 - *gt) / (2.0 * h);
                if (a != 0.0 && (a > 0.0) == (*gm > 0.0) && std::abs(b / (2.0 * a)) < h) {
                    const double sgn = *gm > 0.0 ? 1.0 : -1.0;
                    double x0 = t, x1 = t2;
                    constexpr double phi = 0.6180339887498949;
                    double u = x1 - phi * (x1 - x0), v = x0 + phi * (x1 - x0);
                    auto fu = g(u), fv = g(v);
                    for (int it = 0; it < 80 && fu && fv; ++it) {
                        if (sgn * *fu <= 0.0 || sgn * *fv <= 0.0) break;
                        if (sgn * *fu < sgn * *fv) {
                            x1 = v, v = u, fv = fu;
                            u = x1 - phi * (x1 - x0);
                            fu = g(u);
                        } else {
                            x0 = u, u = v, fu = fv;
                            v = x0 + phi * (x1 - x0);
                            fv = g(v);
                        }
                    }
                    if (fu && sgn * *fu <= 0.0) tm = u, gm = fu;
                    else if (fv && sgn * *fv <= 0.0) tm = v, gm = fv;
                }
            }
            std::optional<double> root;
            if (*gt == 0.0 && t > kMinT) {
                root = t;
            } else if (gm && ((*gt < 0.0) != (*gm < 0.0) || *gm == 0.0)) {
                root = *gm == 0.0 ? tm : refine(t, *gt, tm);
                if (root && *root > kMinT) {
                    const auto p = position(*root);
                    if (p && inside(*p)) return *root;
                }
                root.reset();
                if (*gm != 0.0 && ((*gm < 0.0) != (*g2 < 0.0) || *g2 == 0.0))
                    root = *g2 == 0.0 ? t2 : refine(tm, *gm, t2);
            } else if ((*gt < 0.0) != (*g2 < 0.0) || *g2 == 0.0) {
                root = *g2 == 0.0 ? t2 : refine(t, *gt, t2);
            }
            if (root && *root > kMinT) {
                const auto p = position(*root);
                if (p && inside(*p)) return *root;
            }
        }
        t = t2;
        gt = g2;
    }
    return std::nullopt;
}

} // namespace kaleido
