#pragma once

// Universal cover by breadth-first reflection of the fundamental polygon.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <vector>

#include "kaleido/constructor.hpp"
#include "kaleido/error.hpp"
#include "kaleido/geometry.hpp"
#include "kaleido/moebius.hpp"

namespace kaleido {

struct CoverOptions {
    int max_depth = 12;
    int max_copies = 500;
    /// Hyperbolic only: copies whose Euclidean diameter in the disk is below this are skipped.
    double min_diameter = 0.002;
    /// Intrinsic center distance below which two copies are the same tile.
    double dedup_tolerance = 1e-7;
};

struct RoomCopy {
    IsometryTransform transform;  // fundamental polygon -> this copy
    int depth = 0;
    std::vector<int> path;
    std::vector<int> mirror_bounces;
    std::vector<ExtComplex> vertices;
    ModelPoint center;
    /// The copy's closed region contains the point at infinity (spherical only).
    bool contains_infinity = false;
    /// Discovery index of the copy this one was reflected from; -1 for the identity.
    int parent = -1;
    /// Edge of the parent this copy was reflected across; -1 for the identity.
    int via_edge = -1;
};

enum class CoverStop { Natural, MaxDepth, MaxCopies };

inline const char* to_string(CoverStop s) {
    switch (s) {
    case CoverStop::Natural: return "natural";
    case CoverStop::MaxDepth: return "max_depth";
    case CoverStop::MaxCopies: return "max_copies";
    }
    return "?";
}

struct Cover {
    std::vector<RoomCopy> copies;
    /// Set when some corner order is not an integer: tiles overlap and only exact
    /// transform duplicates are removed.
    bool overlapping = false;
    CoverStop stop = CoverStop::Natural;
};

inline ModelPoint copy_center(const FundamentalPolygon& p, const IsometryTransform& t) {
    return {t(p.base_point), p.kind};
}

namespace detail {

/// A coordinate whose differences never exceed the intrinsic distance (up to a factor),
/// used to window the duplicate search.
inline double dedup_key(GeometryKind kind, Complex z) {
    if (kind == GeometryKind::Spherical) return 2.0 * z.real() / (1.0 + std::norm(z));
    return z.real();
}

inline bool region_contains(const FundamentalPolygon& p, const ExtComplex& z) {
    if (z.is_infinite()) {
        for (const auto& v : p.vertices)
            if (v.is_infinite()) return true;
        return false;
    }
    const Complex w = z.value();
    for (const auto& e : p.edges) {
        const Geodesic& g = e.geodesic;
        double side;
        if (g.is_line()) side = cross(g.direction, w - g.point);
        else side = (g.counterclockwise ? 1.0 : -1.0) * (g.radius - cabs(w - g.center));
        if (side < -1e-12 * std::max(1.0, g.radius)) return false;
    }
    return true;
}

inline bool same_vertex_set(std::vector<ExtComplex> a, std::vector<ExtComplex> b, double tol) {
    if (a.size() != b.size()) return false;
    for (const auto& x : a) {
        auto it = std::find_if(b.begin(), b.end(),
                               [&](const ExtComplex& y) { return chordal_distance(x, y) <= tol; });
        if (it == b.end()) return false;
        b.erase(it);
    }
    return true;
}

inline double euclidean_diameter(const std::vector<ExtComplex>& v) {
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            d = std::max(d, cabs(v[i].value() - v[j].value()));
    return d;
}

} // namespace detail

inline Cover generate_cover(const FundamentalPolygon& p, const CoverOptions& opts = {}) {
    if (opts.max_depth < 0 || opts.max_copies < 1 || !(opts.min_diameter >= 0.0) ||
        !(opts.dedup_tolerance > 0.0))
        throw Error(ErrorCode::Domain, "cover options must be positive");
    if (!(p.closure_residual < kClosureFailureThreshold))
        throw Error(ErrorCode::Domain, "cover needs a closed fundamental polygon");

    const GeometryKind kind = p.kind;
    const std::size_t N = p.edges.size();
    Cover cover;
    cover.overlapping = !std::all_of(p.corner_orders.begin(), p.corner_orders.end(),
                                     [](double k) { return k == std::floor(k); });

    std::vector<IsometryTransform> mirrors(N);
    for (std::size_t e = 0; e < N; ++e) mirrors[e] = reflect_across(p.edges[e].geodesic);

    std::multimap<double, int> by_key;
    std::vector<int> at_infinity;
    const double tol = opts.dedup_tolerance;
    // The window bounds how far apart keys of duplicate centers can be.
    const double window = kind == GeometryKind::Euclidean ? tol : 2.0 * tol;

    auto make_copy = [&](const IsometryTransform& t) {
        RoomCopy c;
        c.transform = t;
        c.vertices.reserve(N);
        for (const auto& v : p.vertices) c.vertices.push_back(t(v));
        c.center = copy_center(p, t);
        if (kind == GeometryKind::Spherical) {
            const IsometryTransform back = inverse(t);
            c.contains_infinity = detail::region_contains(p, back(ExtComplex::infinity()));
        }
        return c;
    };

    auto is_duplicate = [&](const RoomCopy& c) {
        const ExtComplex& z = c.center.position;
        if (z.is_infinite()) {
            for (int i : at_infinity) {
                if (cover.overlapping ? action_equal(cover.copies[i].transform, c.transform)
                                      : detail::same_vertex_set(cover.copies[i].vertices, c.vertices,
                                                                1e-9))
                    return true;
            }
            return false;
        }
        const double key = detail::dedup_key(kind, z.value());
        for (auto it = by_key.lower_bound(key - window);
             it != by_key.end() && it->first <= key + window; ++it) {
            const RoomCopy& other = cover.copies[it->second];
            if (cover.overlapping) {
                if (action_equal(other.transform, c.transform)) return true;
            } else if (distance(kind, other.center.position, z) <= tol) {
                return true;
            }
        }
        return false;
    };

    auto admit = [&](RoomCopy&& c) {
        const int index = static_cast<int>(cover.copies.size());
        const ExtComplex& z = c.center.position;
        if (z.is_infinite()) at_infinity.push_back(index);
        else by_key.emplace(detail::dedup_key(kind, z.value()), index);
        cover.copies.push_back(std::move(c));
    };

    RoomCopy root = make_copy(IsometryTransform::identity());
    root.mirror_bounces.assign(N, 0);
    admit(std::move(root));

    bool depth_limited = false;
    for (std::size_t q = 0; q < cover.copies.size(); ++q) {
        if (cover.copies[q].depth >= opts.max_depth) {
            depth_limited = true;
            continue;
        }
        for (std::size_t e = 0; e < N; ++e) {
            // Skip the mirror that leads straight back to the parent.
            if (cover.copies[q].via_edge == static_cast<int>(e)) continue;
            if (static_cast<int>(cover.copies.size()) >= opts.max_copies) {
                cover.stop = CoverStop::MaxCopies;
                return cover;
            }
            const RoomCopy& src = cover.copies[q];
            RoomCopy c = make_copy(compose(src.transform, mirrors[e]));
            if (kind == GeometryKind::Hyperbolic &&
                detail::euclidean_diameter(c.vertices) < opts.min_diameter)
                continue;
            if (is_duplicate(c)) continue;
            c.depth = src.depth + 1;
            c.path = src.path;
            c.path.push_back(static_cast<int>(e));
            c.mirror_bounces = src.mirror_bounces;
            ++c.mirror_bounces[e];
            c.parent = static_cast<int>(q);
            c.via_edge = static_cast<int>(e);
            admit(std::move(c));
        }
    }
    cover.stop = depth_limited ? CoverStop::MaxDepth : CoverStop::Natural;
    return cover;
}

/// Intensity of each copy: the product over mirrors of attenuation^bounces.
inline std::vector<double> emphasis_weights(const std::vector<RoomCopy>& copies,
                                            const std::vector<double>& attenuations) {
    for (double a : attenuations)
        if (!(a >= 0.0 && a <= 1.0))
            throw Error(ErrorCode::Domain, "attenuation must lie in [0, 1]");
    std::vector<double> out;
    out.reserve(copies.size());
    for (const auto& c : copies) {
        if (c.mirror_bounces.size() != attenuations.size())
            throw Error(ErrorCode::Domain, "attenuation vector length must equal the edge count");
        double w = 1.0;
        for (std::size_t e = 0; e < attenuations.size(); ++e)
            for (int b = 0; b < c.mirror_bounces[e]; ++b) w *= attenuations[e];
        out.push_back(w);
    }
    return out;
}

} // namespace kaleido
