#pragma once

// Request handlers shared by the command line and the HTTP service. Each handler maps a
// JSON request to a status code and a JSON (or SVG) payload and has no side effects.

#include <cmath>
#include <string>
#include <vector>

#include "kaleido/constructor.hpp"
#include "kaleido/cover.hpp"
#include "kaleido/error.hpp"
#include "kaleido/notation.hpp"
#include "kaleido/render.hpp"
#include "kaleido/serialize.hpp"

namespace kaleido::service {

inline constexpr int kHardCopyCap = 20000;
inline constexpr const char* kDefaultNotation = "*22222";
inline constexpr std::size_t kMaxEnumerateResults = 200000;

struct Response {
    int status = 200;
    Json body;
    /// Non-empty for SVG payloads; `body` is then unused.
    std::string svg;

    bool ok() const { return status == 200; }
    std::string content_type() const {
        return svg.empty() ? "application/json" : "image/svg+xml";
    }
    std::string text() const { return svg.empty() ? to_text(body) : svg; }
};

/// A validation failure detected while reading a request.
class RequestError : public Error {
public:
    RequestError(int status, std::string code, const std::string& message, Json extra = Json::object())
        : Error(ErrorCode::Domain, message), status_(status), code_(std::move(code)),
          extra_(std::move(extra)) {}

    int status() const noexcept { return status_; }
    const std::string& code() const noexcept { return code_; }
    const Json& extra() const noexcept { return extra_; }

private:
    int status_;
    std::string code_;
    Json extra_;
};

namespace detail {

inline Json error_body(const std::string& code, const std::string& message) {
    return Json{{"error", code}, {"message", message}};
}

inline const Json& require_object(const Json& req) {
    if (!req.is_object()) throw RequestError(400, "malformed_body", "request body must be a JSON object");
    return req;
}

inline OrbifoldNotation read_notation(const Json& req) {
    if (!req.contains("notation") || req["notation"].is_null()) return parse(kDefaultNotation);
    if (!req["notation"].is_string())
        throw RequestError(400, "invalid_request", "notation must be a string");
    return parse(req["notation"].get<std::string>());
}

inline std::vector<double> read_numbers(const Json& req, const char* key) {
    std::vector<double> out;
    if (!req.contains(key) || req[key].is_null()) return out;
    if (!req[key].is_array())
        throw RequestError(400, "invalid_request", std::string(key) + " must be an array of numbers");
    for (const auto& v : req[key]) {
        if (!v.is_number())
            throw RequestError(400, "invalid_request", std::string(key) + " must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline double read_number(const Json& obj, const char* key, double fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    if (!obj[key].is_number()) throw RequestError(400, "invalid_request", std::string(key) + " must be a number");
    return obj[key].get<double>();
}

inline int read_int(const Json& obj, const char* key, int fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    const Json& v = obj[key];
    if (!v.is_number_integer() && !(v.is_number_float() && v.get<double>() == std::floor(v.get<double>())))
        throw RequestError(400, "invalid_request", std::string(key) + " must be an integer");
    const double d = v.get<double>();
    if (d < -2e9 || d > 2e9) throw RequestError(400, "invalid_request", std::string(key) + " is out of range");
    return static_cast<int>(d);
}

inline const Json& read_object(const Json& req, const char* key) {
    static const Json empty = Json::object();
    if (!req.contains(key) || req[key].is_null()) return empty;
    if (!req[key].is_object())
        throw RequestError(400, "invalid_request", std::string(key) + " must be an object");
    return req[key];
}

/// Wall-count rules of the design panel: one wall means the single corner is order 1,
/// and two walls must carry equal orders.
inline void enforce_panel_rules(const OrbifoldNotation& n) {
    const auto& k = n.corner_orders;
    if (k.size() == 1 && k[0] != 1.0)
        throw RequestError(422, "not_realizable", "bad orbifold: not realizable",
                           Json{{"hint", "with one wall the single corner order is fixed at 1"}});
    if (k.size() == 2 && k[0] != k[1])
        throw RequestError(422, "not_realizable", "bad orbifold: not realizable",
                           Json{{"hint", "with two walls both corner orders must be equal; "
                                         "editing one updates the other"}});
}

inline CoverOptions read_cover_options(const Json& req) {
    const Json& o = read_object(req, "options");
    CoverOptions opts;
    opts.max_depth = read_int(o, "max_depth", opts.max_depth);
    opts.max_copies = read_int(o, "max_copies", opts.max_copies);
    opts.min_diameter = read_number(o, "min_diameter", opts.min_diameter);
    opts.dedup_tolerance = read_number(o, "dedup_tolerance", opts.dedup_tolerance);
    if (opts.max_depth < 0) throw RequestError(400, "invalid_request", "max_depth must be >= 0");
    if (opts.max_copies < 1) throw RequestError(400, "invalid_request", "max_copies must be >= 1");
    if (!(opts.min_diameter >= 0.0) || !std::isfinite(opts.min_diameter))
        throw RequestError(400, "invalid_request", "min_diameter must be >= 0");
    if (!(opts.dedup_tolerance > 0.0) || !std::isfinite(opts.dedup_tolerance))
        throw RequestError(400, "invalid_request", "dedup_tolerance must be positive");
    if (opts.max_copies > kHardCopyCap)
        throw RequestError(413, "too_many_copies",
                           "max_copies exceeds the limit of " + std::to_string(kHardCopyCap),
                           Json{{"limit", kHardCopyCap}});
    return opts;
}

inline RenderStyle read_style(const Json& req) {
    const Json& s = read_object(req, "style");
    RenderStyle style;
    if (s.contains("emphasis") && !s["emphasis"].is_null()) {
        if (!s["emphasis"].is_string()) throw RequestError(400, "invalid_request", "emphasis must be a string");
        try {
            style.emphasis = emphasis_from_string(s["emphasis"].get<std::string>());
        } catch (const Error& e) {
            throw RequestError(400, "invalid_request", e.what());
        }
    }
    style.attenuations = read_numbers(s, "attenuations");
    if (!style.attenuations.empty() && !(s.contains("emphasis") && !s["emphasis"].is_null()))
        style.emphasis = Emphasis::Custom;
    style.translational_mirror = read_int(s, "translational_mirror", style.translational_mirror);
    style.viewport_radius = read_number(s, "viewport_radius", style.viewport_radius);
    if (!(style.viewport_radius > 0.0) || !std::isfinite(style.viewport_radius))
        throw RequestError(400, "invalid_request", "viewport_radius must be positive");
    return style;
}

/// Builds after the panel rules, translating construction errors into 422 responses.
inline FundamentalPolygon build_for_request(const OrbifoldNotation& n, const std::vector<double>& fv) {
    enforce_panel_rules(n);
    try {
        return build(n, fv);
    } catch (const ConstructionFailure& e) {
        throw RequestError(422, "construction_failure", e.what(),
                           Json{{"closure_gap", e.closure_gap()}, {"angle_residuals", e.angle_residuals()}});
    } catch (const InfeasibleFreeVariable& e) {
        throw RequestError(422, "infeasible_free_variable", e.what(), Json{{"free_variable", e.edge()}});
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotRealizable)
            throw RequestError(422, "not_realizable", e.what());
        throw RequestError(400, "invalid_request", e.what());
    }
}

template <class F>
Response guarded(F&& f) {
    try {
        return f();
    } catch (const RequestError& e) {
        Json body = error_body(e.code(), e.what());
        for (auto it = e.extra().begin(); it != e.extra().end(); ++it) body[it.key()] = it.value();
        return {e.status(), body, {}};
    } catch (const ParseError& e) {
        Json body = error_body("parse_error", e.what());
        body["position"] = e.position();
        return {400, body, {}};
    } catch (const Error& e) {
        return {400, error_body(to_string(e.code()), e.what()), {}};
    } catch (const Json::exception& e) {
        return {400, error_body("malformed_body", e.what()), {}};
    }
}

} // namespace detail

inline Response health() { return {200, Json{{"status", "ok"}}, {}}; }

inline Response classify(const Json& req) {
    return detail::guarded([&]() -> Response {
        const OrbifoldNotation n = detail::read_notation(detail::require_object(req));
        return {200, classification_to_json(n, kaleido::classify(strip_unit_orders(n))), {}};
    });
}

inline Response build(const Json& req) {
    return detail::guarded([&]() -> Response {
        detail::require_object(req);
        const OrbifoldNotation n = detail::read_notation(req);
        const std::vector<double> fv = detail::read_numbers(req, "free_vars");
        const FundamentalPolygon p = detail::build_for_request(n, fv);
        Json body{{"notation", format(n)},
                  {"classification", classification_to_json(n, kaleido::classify(strip_unit_orders(n)))},
                  {"polygon", polygon_to_json(p)}};
        return {200, body, {}};
    });
}

inline Response cover(const Json& req) {
    return detail::guarded([&]() -> Response {
        detail::require_object(req);
        const OrbifoldNotation n = detail::read_notation(req);
        const std::vector<double> fv = detail::read_numbers(req, "free_vars");
        const CoverOptions opts = detail::read_cover_options(req);
        const RenderStyle style = detail::read_style(req);
        std::string format = "tiling";
        if (req.contains("format") && !req["format"].is_null()) {
            if (!req["format"].is_string()) throw RequestError(400, "invalid_request", "format must be a string");
            format = req["format"].get<std::string>();
        }
        if (format != "tiling" && format != "svg")
            throw RequestError(400, "invalid_request", "format must be 'svg' or 'tiling'");
        const FundamentalPolygon p = detail::build_for_request(n, fv);
        RenderStyle checked = style;
        try {
            (void)resolve_attenuations(checked, p.edges.size());
        } catch (const Error& e) {
            throw RequestError(400, "invalid_request", e.what());
        }
        const Cover c = generate_cover(p, opts);
        if (format == "svg") return {200, Json(), render_cover(p, c, style)};
        return {200, export_tiling(n, p, c, style), {}};
    });
}

inline Response enumerate(const Json& req) {
    return detail::guarded([&]() -> Response {
        detail::require_object(req);
        const int walls = detail::read_int(req, "walls", 5);
        const int max_order = detail::read_int(req, "max_order", 6);
        if (walls < 1 || walls > 16) throw RequestError(400, "invalid_request", "walls must be in [1, 16]");
        if (max_order < 2 || max_order > 1000)
            throw RequestError(400, "invalid_request", "max_order must be in [2, 1000]");
        // Necklace count is about (K-1)^N / N; refuse obviously huge listings up front.
        const double estimate = std::pow(max_order - 1.0, walls) / (2.0 * walls);
        if (estimate > 4.0 * kMaxEnumerateResults)
            throw RequestError(413, "too_many_results", "enumeration too large",
                               Json{{"limit", kMaxEnumerateResults}});
        const auto list = kaleido::enumerate(static_cast<std::size_t>(walls), max_order);
        if (list.size() > kMaxEnumerateResults)
            throw RequestError(413, "too_many_results", "enumeration too large",
                               Json{{"limit", kMaxEnumerateResults}});
        Json items = Json::array();
        for (const auto& e : list)
            items.push_back(Json{{"notation", format(e.notation)},
                                 {"kind", to_string(e.classification.kind)},
                                 {"euler_char", e.classification.euler_char.str()}});
        return {200, Json{{"walls", walls}, {"max_order", max_order}, {"count", list.size()}, {"orbifolds", items}},
                {}};
    });
}

/// Parses a request body, answering 400 on malformed JSON.
template <class Handler>
Response with_body(const std::string& text, Handler&& h) {
    Json req;
    try {
        req = text.empty() ? Json::object() : Json::parse(text);
    } catch (const Json::parse_error& e) {
        Json body = detail::error_body("malformed_body", e.what());
        body["position"] = e.byte;
        return {400, body, {}};
    }
    return h(req);
}

} // namespace kaleido::service
