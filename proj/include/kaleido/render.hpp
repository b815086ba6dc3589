#pragma once

// SVG rendering of fundamental polygons and covers, and the TilingDocument export.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "kaleido/constructor.hpp"
#include "kaleido/cover.hpp"
#include "kaleido/error.hpp"
#include "kaleido/geometry.hpp"
#include "kaleido/serialize.hpp"

namespace kaleido {

enum class Emphasis { Orbifold, Translational, Universal, Custom };

inline const char* to_string(Emphasis e) {
    switch (e) {
    case Emphasis::Orbifold: return "orbifold";
    case Emphasis::Translational: return "translational";
    case Emphasis::Universal: return "universal";
    case Emphasis::Custom: return "custom";
    }
    return "?";
}

inline Emphasis emphasis_from_string(const std::string& s) {
    if (s == "orbifold") return Emphasis::Orbifold;
    if (s == "translational") return Emphasis::Translational;
    if (s == "universal") return Emphasis::Universal;
    if (s == "custom") return Emphasis::Custom;
    throw Error(ErrorCode::Domain, "unknown emphasis '" + s + "'");
}

struct RenderStyle {
    Emphasis emphasis = Emphasis::Universal;
    /// Used as given for Custom; presets overwrite it.
    std::vector<double> attenuations;
    /// The mirror left fully reflective by the translational preset.
    int translational_mirror = 0;
    double viewport_radius = 3.0;
    std::string stroke = "#1f2937";
    std::string fill = "#60a5fa";
    std::string boundary = "#9ca3af";
    double stroke_width_px = 1.0;
    int size_px = 800;
};

/// Attenuation vector for `edges` mirrors after applying the emphasis preset.
inline std::vector<double> resolve_attenuations(const RenderStyle& s, std::size_t edges) {
    switch (s.emphasis) {
    case Emphasis::Orbifold: return std::vector<double>(edges, 0.0);
    case Emphasis::Universal: return std::vector<double>(edges, 1.0);
    case Emphasis::Translational: {
        if (s.translational_mirror < 0 || static_cast<std::size_t>(s.translational_mirror) >= edges)
            throw Error(ErrorCode::Domain, "translational mirror index out of range");
        std::vector<double> a(edges, 0.0);
        a[static_cast<std::size_t>(s.translational_mirror)] = 1.0;
        return a;
    }
    case Emphasis::Custom:
        if (s.attenuations.size() != edges)
            throw Error(ErrorCode::Domain, "attenuation vector length must equal the edge count");
        for (double a : s.attenuations)
            if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorCode::Domain, "attenuation must lie in [0, 1]");
        return s.attenuations;
    }
    return {};
}

/// One drawable piece of an edge: a straight segment or a circular arc traversed from
/// start to end, counterclockwise or not.
struct PathSegment {
    enum class Shape { Segment, Arc };
    Shape shape = Shape::Segment;
    Complex start, end;
    Complex center;
    double radius = 0.0;
    bool counterclockwise = true;
    double sweep_angle = 0.0;  // radians in (0, 2pi)
    bool large_arc = false;
    /// The edge reached infinity and this piece was cut at the viewport radius.
    bool clipped = false;
};

/// Points along a segment, endpoints included.
inline std::vector<Complex> sample_path(const PathSegment& s, int count) {
    std::vector<Complex> out;
    for (int i = 0; i < count; ++i) {
        const double u = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        if (s.shape == PathSegment::Shape::Segment) {
            out.push_back(s.start + u * (s.end - s.start));
        } else {
            const double a0 = std::arg(s.start - s.center);
            const double a = a0 + (s.counterclockwise ? 1.0 : -1.0) * u * s.sweep_angle;
            out.push_back(s.center + std::polar(s.radius, a));
        }
    }
    return out;
}

/// Drawable pieces of the edge running a -> m -> b along its geodesic. Pieces through
/// infinity are cut at `clip_radius`.
inline std::vector<PathSegment> geodesic_edge_path(GeometryKind kind, const ExtComplex& a,
                                                   const ExtComplex& m, const ExtComplex& b,
                                                   double clip_radius) {
    const Geodesic g = geodesic_from_points(kind, a, m, b);
    std::vector<PathSegment> out;
    if (g.is_circle()) {
        PathSegment s;
        s.shape = PathSegment::Shape::Arc;
        s.start = a.value();
        s.end = b.value();
        s.center = g.center;
        s.radius = g.radius;
        s.counterclockwise = g.counterclockwise;
        double phi = std::arg((s.end - s.center) / (s.start - s.center));
        if (!s.counterclockwise) phi = -phi;
        if (phi <= 0.0) phi += 2.0 * std::numbers::pi;
        s.sweep_angle = phi;
        s.large_arc = phi > std::numbers::pi;
        out.push_back(s);
        return out;
    }
    const Complex d = g.direction;
    auto ray = [&](Complex from, Complex dir) {
        PathSegment s;
        s.start = from;
        const double reach = std::max(clip_radius, std::abs(from)) * 2.0;
        s.end = from + reach * dir;
        s.clipped = true;
        return s;
    };
    if (a.is_infinite() && b.is_infinite()) {
        throw Error(ErrorCode::DegenerateInput, "edge with both endpoints at infinity");
    } else if (a.is_infinite()) {
        PathSegment s = ray(b.value(), -d);
        std::swap(s.start, s.end);
        out.push_back(s);
    } else if (b.is_infinite()) {
        out.push_back(ray(a.value(), d));
    } else {
        const Complex za = a.value(), zb = b.value();
        const double along = (std::conj(d) * (zb - za)).real();
        if (along > 0.0) {
            PathSegment s;
            s.start = za;
            s.end = zb;
            out.push_back(s);
        } else {
            // The edge leaves through infinity and comes back from the other side.
            out.push_back(ray(za, d));
            PathSegment back = ray(zb, -d);
            std::swap(back.start, back.end);
            out.push_back(back);
        }
    }
    return out;
}

inline std::vector<PathSegment> geodesic_edge_path(const PolygonEdge& e, GeometryKind kind,
                                                   double clip_radius = 3.0) {
    return geodesic_edge_path(kind, e.start, e.midpoint, e.end, clip_radius);
}

namespace detail {

inline std::string svg_num(double v) {
    if (std::abs(v) < 5e-10) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string svg_pt(Complex z) { return svg_num(z.real()) + " " + svg_num(z.imag()); }

inline std::string svg_arc_to(double r, bool large, bool ccw, Complex end) {
    return "A " + svg_num(r) + " " + svg_num(r) + " 0 " + (large ? "1" : "0") + " " +
           (ccw ? "1" : "0") + " " + svg_pt(end);
}

/// Closed outline of a polygon copy whose edges all stay inside radius `limit`, or an
/// empty string when some edge does not.
inline std::string arc_outline(GeometryKind kind, const std::vector<ExtComplex>& a,
                               const std::vector<ExtComplex>& m, double limit) {
    const std::size_t N = a.size();
    std::string d;
    for (std::size_t i = 0; i < N; ++i) {
        const ExtComplex& p = a[i];
        const ExtComplex& q = a[(i + 1) % N];
        if (p.is_infinite() || q.is_infinite() || m[i].is_infinite()) return {};
        if (std::abs(p.value()) > limit || std::abs(m[i].value()) > limit) return {};
        const auto pieces = geodesic_edge_path(kind, p, m[i], q, limit);
        if (pieces.size() != 1 || pieces[0].clipped) return {};
        const PathSegment& s = pieces[0];
        if (s.shape == PathSegment::Shape::Arc) {
            // Reject arcs that bulge past the limit.
            for (const Complex& z : sample_path(s, 9))
                if (std::abs(z) > limit) return {};
        }
        if (i == 0) d += "M " + svg_pt(s.start) + " ";
        if (s.shape == PathSegment::Shape::Arc) {
            d += svg_arc_to(s.radius, s.large_arc, s.counterclockwise, s.end) + " ";
        } else {
            d += "L " + svg_pt(s.end) + " ";
        }
    }
    return d + "Z";
}

/// Outline of a copy that reaches beyond radius `limit`: the boundary is sampled and each
/// excursion outside the limit circle is replaced by the limit arc that keeps the copy on
/// the same side as its boundary (counterclockwise unless the copy is mirrored).
inline std::string clamped_outline(const FundamentalPolygon& p, const IsometryTransform& t,
                                   bool contains_origin, double limit) {
    constexpr int kPerEdge = 64;
    std::vector<ExtComplex> pts;
    for (const auto& e : p.edges) {
        const IsometryTransform f = compose(t, e.frame);
        for (int j = 0; j < kPerEdge; ++j)
            pts.push_back(f(axis_point(p.kind, e.length * j / kPerEdge)));
    }
    auto outside = [&](const ExtComplex& z) { return z.is_infinite() || !(std::abs(z.value()) <= limit); };
    const std::size_t n = pts.size();
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i)
        if (!outside(pts[i]) && outside(pts[(i + n - 1) % n])) {
            start = i;
            break;
        }
    if (start == n) {
        bool any_inside = false;
        for (const auto& z : pts) any_inside = any_inside || !outside(z);
        if (any_inside) return {};  // never leaves: caller uses the arc outline
        if (!contains_origin) return "";
        const Complex s(limit, 0.0);
        return "M " + svg_pt(s) + " " + svg_arc_to(limit, false, true, -s) + " " +
               svg_arc_to(limit, false, true, s) + " Z";
    }
    std::string d;
    double exit_angle = 0.0;
    bool out = false;
    for (std::size_t k = 0; k <= n; ++k) {
        const ExtComplex& z = pts[(start + k) % n];
        if (outside(z)) {
            if (!out) {
                out = true;
                exit_angle = std::arg(pts[(start + k + n - 1) % n].value());
            }
            continue;
        }
        const Complex w = z.value();
        if (k == 0) {
            d += "M " + svg_pt(w) + " ";
        } else if (out) {
            const double entry_angle = std::arg(w);
            const bool ccw = !t.orientation_reversing;
            double sweep = ccw ? entry_angle - exit_angle : exit_angle - entry_angle;
            while (sweep <= 0.0) sweep += 2.0 * std::numbers::pi;
            const Complex from = std::polar(limit, exit_angle), to = std::polar(limit, entry_angle);
            d += "L " + svg_pt(from) + " ";
            if (sweep > std::numbers::pi) {
                const Complex mid = std::polar(limit, exit_angle + (ccw ? 0.5 : -0.5) * sweep);
                d += svg_arc_to(limit, false, ccw, mid) + " ";
            }
            d += svg_arc_to(limit, false, ccw, to) + " ";
            d += "L " + svg_pt(w) + " ";
            out = false;
        } else {
            d += "L " + svg_pt(w) + " ";
        }
    }
    return d + "Z";
}

} // namespace detail

struct RenderedCopy {
    int index = 0;
    int depth = 0;
    double intensity = 1.0;
    std::string path;  // SVG path data in model coordinates
};

/// Path data and opacity for every copy, in cover order.
inline std::vector<RenderedCopy> copy_outlines(const FundamentalPolygon& p,
                                               const std::vector<RoomCopy>& copies,
                                               const std::vector<double>& intensity,
                                               double viewport_radius) {
    const double limit = p.kind == GeometryKind::Spherical ? 4.0 * viewport_radius
                                                           : std::numeric_limits<double>::infinity();
    std::vector<RenderedCopy> out;
    out.reserve(copies.size());
    std::vector<ExtComplex> mids(p.edges.size());
    for (std::size_t i = 0; i < copies.size(); ++i) {
        const RoomCopy& c = copies[i];
        std::string d;
        if (p.edges.size() == 1) {
            // The monogon's closed edge is drawn as two halves.
            const PolygonEdge& e = p.edges[0];
            const IsometryTransform f = compose(c.transform, e.frame);
            auto at = [&](double u) { return f(detail::axis_point(p.kind, u * e.length)); };
            d = detail::arc_outline(p.kind, {at(0.0), at(0.5)}, {at(0.25), at(0.75)}, limit);
        } else {
            for (std::size_t e = 0; e < p.edges.size(); ++e)
                mids[e] = c.transform(p.edges[e].midpoint);
            d = detail::arc_outline(p.kind, c.vertices, mids, limit);
        }
        if (!d.empty()) {
            if (c.contains_infinity) {
                const double b = limit;
                d = "M " + detail::svg_pt({-b, -b}) + " L " + detail::svg_pt({b, -b}) + " L " +
                    detail::svg_pt({b, b}) + " L " + detail::svg_pt({-b, b}) + " Z " + d;
            }
        } else {
            const bool origin_inside =
                detail::region_contains(p, inverse(c.transform)(Complex(0.0)));
            d = detail::clamped_outline(p, c.transform, origin_inside, limit);
        }
        out.push_back({static_cast<int>(i), c.depth, intensity[i], d});
    }
    return out;
}

/// SVG document for a cover. Copies are painted deepest first, ties in cover order.
inline std::string render_cover(const FundamentalPolygon& p, const Cover& cover,
                                const RenderStyle& style) {
    const std::vector<double> att = resolve_attenuations(style, p.edges.size());
    const std::vector<double> intensity = emphasis_weights(cover.copies, att);
    std::vector<RenderedCopy> rc = copy_outlines(p, cover.copies, intensity, style.viewport_radius);
    std::stable_sort(rc.begin(), rc.end(),
                     [](const RenderedCopy& a, const RenderedCopy& b) { return a.depth > b.depth; });

    double x0, y0, x1, y1;
    if (p.kind == GeometryKind::Euclidean) {
        x0 = y0 = std::numeric_limits<double>::infinity();
        x1 = y1 = -x0;
        for (const auto& c : cover.copies)
            for (const auto& v : c.vertices) {
                x0 = std::min(x0, v.value().real());
                x1 = std::max(x1, v.value().real());
                y0 = std::min(y0, v.value().imag());
                y1 = std::max(y1, v.value().imag());
            }
        const double mx = 0.05 * (x1 - x0), my = 0.05 * (y1 - y0);
        x0 -= mx, x1 += mx, y0 -= my, y1 += my;
    } else {
        const double r = p.kind == GeometryKind::Spherical ? 1.05 * style.viewport_radius : 1.05;
        x0 = y0 = -r;
        x1 = y1 = r;
    }
    const double w = x1 - x0, h = y1 - y0;
    const double px_per_unit = style.size_px / std::max(w, h);
    const double stroke = style.stroke_width_px / px_per_unit;
    const int width_px = static_cast<int>(std::lround(w * px_per_unit));
    const int height_px = static_cast<int>(std::lround(h * px_per_unit));

    using detail::svg_num;
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    // Model y points up; the flip group maps it to SVG's downward y.
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_px) +
         "\" height=\"" + std::to_string(height_px) + "\" viewBox=\"" + svg_num(x0) + " " +
         svg_num(-y1) + " " + svg_num(w) + " " + svg_num(h) + "\" data-kind=\"" +
         to_string(p.kind) + "\" data-copies=\"" + std::to_string(cover.copies.size()) +
         "\" data-overlapping=\"" + (cover.overlapping ? "true" : "false") + "\">\n";
    if (p.kind == GeometryKind::Spherical) {
        s += "<defs><clipPath id=\"viewport\"><circle cx=\"0\" cy=\"0\" r=\"" +
             svg_num(style.viewport_radius) + "\"/></clipPath></defs>\n";
    }
    s += "<g transform=\"scale(1,-1)\"";
    if (p.kind == GeometryKind::Spherical) s += " clip-path=\"url(#viewport)\"";
    s += " stroke=\"" + style.stroke + "\" stroke-width=\"" + svg_num(stroke) +
         "\" stroke-linejoin=\"round\" fill=\"" + style.fill + "\" fill-rule=\"evenodd\">\n";
    for (const auto& c : rc) {
        char op[40];
        std::snprintf(op, sizeof op, "%.17g", c.intensity);
        s += "<g class=\"copy\" data-index=\"" + std::to_string(c.index) + "\" data-depth=\"" +
             std::to_string(c.depth) + "\" data-intensity=\"" + op + "\" opacity=\"" + op + "\">";
        s += "<path d=\"" + c.path + "\"/></g>\n";
    }
    if (p.kind != GeometryKind::Euclidean) {
        s += "<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"" +
             style.boundary + "\"/>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

/// SVG of the fundamental polygon alone.
inline std::string render_polygon(const FundamentalPolygon& p, const RenderStyle& style) {
    CoverOptions one;
    one.max_depth = 0;
    return render_cover(p, generate_cover(p, one), style);
}

inline Json style_to_json(const RenderStyle& s, std::size_t edges) {
    return Json{{"emphasis", to_string(s.emphasis)},
                {"attenuations", resolve_attenuations(s, edges)},
                {"translational_mirror", s.translational_mirror},
                {"viewport_radius", s.viewport_radius},
                {"stroke", s.stroke},
                {"fill", s.fill},
                {"size_px", s.size_px}};
}

/// TilingDocument: the polygon, every copy in cover order, and the resolved style.
inline Json export_tiling(const OrbifoldNotation& notation, const FundamentalPolygon& p,
                          const Cover& cover, const RenderStyle& style) {
    const std::vector<double> att = resolve_attenuations(style, p.edges.size());
    const std::vector<double> intensity = emphasis_weights(cover.copies, att);
    Json copies = Json::array();
    for (std::size_t i = 0; i < cover.copies.size(); ++i) {
        const RoomCopy& c = cover.copies[i];
        Json verts = Json::array();
        for (const auto& v : c.vertices) verts.push_back(point_to_json(v));
        Json tj = transform_to_json(c.transform);
        copies.push_back(Json{{"matrix", tj["matrix"]},
                              {"flip", c.transform.orientation_reversing},
                              {"depth", c.depth},
                              {"path", c.path},
                              {"mirror_bounces", c.mirror_bounces},
                              {"intensity", intensity[i]},
                              {"vertices", verts},
                              {"center", point_to_json(c.center.position)},
                              {"contains_infinity", c.contains_infinity},
                              {"parent", c.parent}});
    }
    Json poly = polygon_to_json(p);
    const Classification cls = classify(strip_unit_orders(notation));
    return Json{{"kind", to_string(p.kind)},
                {"notation", format(notation)},
                {"euler_char", euler_to_json(cls.euler_char)},
                {"is_orbifold", p.is_orbifold},
                {"overlapping", cover.overlapping},
                {"stop", to_string(cover.stop)},
                {"vertices", poly["vertices"]},
                {"polygon", poly},
                {"copies", copies},
                {"style", style_to_json(style, p.edges.size())}};
}

struct TilingCopy {
    IsometryTransform transform;
    int depth = 0;
    std::vector<int> path;
    double intensity = 1.0;
    std::vector<ExtComplex> vertices;
};

struct TilingDocument {
    GeometryKind kind = GeometryKind::Euclidean;
    std::string notation;
    std::vector<ExtComplex> vertices;
    std::vector<TilingCopy> copies;
    bool overlapping = false;
};

inline TilingDocument import_tiling(const Json& j) {
    try {
        TilingDocument d;
        d.kind = geometry_kind_from_string(j.at("kind").get<std::string>());
        d.notation = j.at("notation").get<std::string>();
        d.overlapping = j.at("overlapping").get<bool>();
        for (const auto& v : j.at("vertices")) d.vertices.push_back(point_from_json(v));
        for (const auto& c : j.at("copies")) {
            TilingCopy t;
            t.transform = transform_from_json(Json{{"matrix", c.at("matrix")}, {"flip", c.at("flip")}});
            t.depth = c.at("depth").get<int>();
            t.path = c.at("path").get<std::vector<int>>();
            t.intensity = c.at("intensity").get<double>();
            for (const auto& v : c.at("vertices")) t.vertices.push_back(point_from_json(v));
            d.copies.push_back(std::move(t));
        }
        return d;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::Parse, std::string("malformed tiling document: ") + e.what());
    }
}

} // namespace kaleido
