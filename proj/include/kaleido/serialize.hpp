#pragma once

// JSON records for notations, classifications and polygons. Numbers are written with
// 17 significant digits so every double survives a round trip.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "kaleido/constructor.hpp"
#include "kaleido/geometry.hpp"
#include "kaleido/moebius.hpp"
#include "kaleido/notation.hpp"

namespace kaleido {

using Json = nlohmann::json;

namespace detail {

inline void write_number(std::string& out, double v) {
    if (!std::isfinite(v)) {
        out += "null";
        return;
    }
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    out.append(buf, static_cast<std::size_t>(n));
}

inline void write_json(std::string& out, const Json& j, int indent, int level) {
    auto newline = [&](int lv) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * lv), ' ');
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(level + 1);
            out += Json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            write_json(out, it.value(), indent, level + 1);
        }
        newline(level);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            newline(level + 1);
            write_json(out, v, indent, level + 1);
        }
        newline(level);
        out += ']';
        return;
    }
    case Json::value_t::number_float: write_number(out, j.get<double>()); return;
    default: out += j.dump(); return;
    }
}

} // namespace detail

/// Serializes with 17 significant digits; indent < 0 gives the compact form.
inline std::string to_text(const Json& j, int indent = -1) {
    std::string out;
    detail::write_json(out, j, indent, 0);
    return out;
}

inline Json point_to_json(const ExtComplex& z) {
    if (z.is_infinite()) return "infinity";
    return Json::array({z.value().real(), z.value().imag()});
}

inline ExtComplex point_from_json(const Json& j) {
    if (j.is_string() && j.get<std::string>() == "infinity") return ExtComplex::infinity();
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorCode::Parse, "point must be [x, y] or \"infinity\"");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorCode::Parse, "complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json transform_to_json(const IsometryTransform& t) {
    const MoebiusMatrix& m = t.matrix;
    return Json{{"matrix",
                 {{"a", complex_to_json(m.a)},
                  {"b", complex_to_json(m.b)},
                  {"c", complex_to_json(m.c)},
                  {"d", complex_to_json(m.d)}}},
                {"flip", t.orientation_reversing}};
}

inline IsometryTransform transform_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("matrix") || !j.contains("flip"))
        throw Error(ErrorCode::Parse, "transform needs matrix and flip");
    const Json& m = j.at("matrix");
    IsometryTransform t;
    t.matrix = {complex_from_json(m.at("a")), complex_from_json(m.at("b")),
                complex_from_json(m.at("c")), complex_from_json(m.at("d"))};
    t.orientation_reversing = j.at("flip").get<bool>();
    return t;
}

inline Json geodesic_to_json(const Geodesic& g) {
    if (g.is_line())
        return Json{{"shape", "line"}, {"point", complex_to_json(g.point)},
                    {"direction", complex_to_json(g.direction)}};
    return Json{{"shape", "circle"}, {"center", complex_to_json(g.center)},
                {"radius", g.radius}, {"counterclockwise", g.counterclockwise}};
}

inline Json euler_to_json(const EulerCharacteristic& chi) {
    Json j{{"value", chi.value}, {"text", chi.str()}};
    if (chi.exact) j["exact"] = Json{{"num", chi.exact->num}, {"den", chi.exact->den}};
    return j;
}

inline Json classification_to_json(const OrbifoldNotation& n, const Classification& c) {
    Json j{{"notation", format(n)},
           {"canonical", format(normalize(n))},
           {"walls", n.walls()},
           {"corner_orders", n.corner_orders},
           {"kind", to_string(c.kind)},
           {"euler_char", euler_to_json(c.euler_char)},
           {"is_orbifold", c.is_orbifold},
           {"is_bad", c.is_bad},
           {"is_realizable", c.is_realizable}};
    if (c.is_realizable) {
        const FreeVariableRoles roles = required_free_vars(n);
        j["free_variables"] = Json{{"count", roles.count}, {"roles", roles.roles}};
    }
    return j;
}

inline Json polygon_to_json(const FundamentalPolygon& p) {
    Json vertices = Json::array(), edges = Json::array();
    for (const auto& v : p.vertices) vertices.push_back(point_to_json(v));
    for (const auto& e : p.edges)
        edges.push_back(Json{{"geodesic", geodesic_to_json(e.geodesic)},
                             {"start", point_to_json(e.start)},
                             {"end", point_to_json(e.end)},
                             {"midpoint", point_to_json(e.midpoint)},
                             {"length", e.length},
                             {"frame", transform_to_json(e.frame)}});
    return Json{{"kind", to_string(p.kind)},
                {"corner_orders", p.corner_orders},
                {"free_vars", p.free_vars},
                {"vertices", vertices},
                {"edges", edges},
                {"base_point", point_to_json(p.base_point)},
                {"is_orbifold", p.is_orbifold},
                {"closure_residual", p.closure_residual},
                {"angle_residuals", p.angle_residuals},
                {"max_angle_residual", p.max_angle_residual()},
                {"length_residual", p.length_residual}};
}

} // namespace kaleido
