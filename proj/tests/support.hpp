#pragma once

// Random inputs shared by the unit tests and the acceptance runner.

#include <random>

#include "kaleido/geometry.hpp"

namespace testsupport {

using kaleido::Complex;
using kaleido::ExtComplex;
using kaleido::GeometryKind;
using kaleido::IsometryTransform;

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

/// Uniform point in the disk of radius r.
inline Complex point_in_disk(std::mt19937_64& g, double r) {
    for (;;) {
        const Complex z(uniform(g, -r, r), uniform(g, -r, r));
        if (std::abs(z) < r) return z;
    }
}

/// Sampling radius for random points of each model.
inline double point_radius(GeometryKind k) {
    switch (k) {
    case GeometryKind::Hyperbolic: return 0.9;
    case GeometryKind::Spherical: return 3.0;
    case GeometryKind::Euclidean: return 5.0;
    }
    return 1.0;
}

inline Complex random_point(std::mt19937_64& g, GeometryKind k) { return point_in_disk(g, point_radius(k)); }

/// A random isometry of the model; about a third of them reverse orientation.
inline IsometryTransform random_isometry(std::mt19937_64& g, GeometryKind k) {
    const double theta = uniform(g, -3.14159, 3.14159);
    IsometryTransform t;
    switch (k) {
    case GeometryKind::Hyperbolic: t = kaleido::hyperbolic_moebius(theta, point_in_disk(g, 0.9)); break;
    case GeometryKind::Spherical: t = kaleido::spherical_moebius(theta, point_in_disk(g, 3.0)); break;
    case GeometryKind::Euclidean:
        t = kaleido::compose(kaleido::translation_from_origin(k, point_in_disk(g, 5.0)),
                             kaleido::rotation(theta));
        break;
    }
    if (std::uniform_int_distribution<int>(0, 2)(g) == 0) {
        // Pre-compose with a reflection across a random geodesic.
        const Complex a = point_in_disk(g, 0.7), b = point_in_disk(g, 0.7);
        if (std::abs(a - b) > 1e-3)
            t = kaleido::compose(t, kaleido::reflect_across(kaleido::geodesic_through(k, a, b)));
    }
    return t;
}

} // namespace testsupport
