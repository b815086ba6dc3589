#pragma once

// Extended complex numbers and the group of Moebius / anti-Moebius maps.
//
// Every rigid motion of the three planar models is an IsometryTransform:
// a 2x2 complex matrix acting by z -> (az+b)/(cz+d), optionally preceded
// by complex conjugation.

#include <array>
#include <cmath>
#include <complex>
#include <limits>

#include "kaleido/error.hpp"

namespace kaleido {

using Complex = std::complex<double>;

namespace detail {

/// Plain complex quotient. std::complex division carries Annex G overflow and NaN
/// handling that is slow and never needed for the magnitudes used here.
inline Complex cdiv(Complex n, Complex d) {
    const double s = d.real() * d.real() + d.imag() * d.imag();
    return {(n.real() * d.real() + n.imag() * d.imag()) / s,
            (n.imag() * d.real() - n.real() * d.imag()) / s};
}

inline double cabs(Complex z) { return std::sqrt(z.real() * z.real() + z.imag() * z.imag()); }

} // namespace detail

/// A point of the Riemann sphere: a finite complex number or the single point at infinity.
class ExtComplex {
public:
    constexpr ExtComplex() = default;
    constexpr ExtComplex(Complex z) : z_(z) {}                          // NOLINT(implicit)
    constexpr ExtComplex(double re, double im = 0.0) : z_(re, im) {}   // NOLINT(implicit)

    static constexpr ExtComplex infinity() {
        ExtComplex p;
        p.infinite_ = true;
        return p;
    }

    constexpr bool is_infinite() const { return infinite_; }
    constexpr bool is_finite() const { return !infinite_; }

    /// Finite value. Calling this on infinity returns (inf, 0).
    Complex value() const {
        return infinite_ ? Complex(std::numeric_limits<double>::infinity(), 0.0) : z_;
    }

    ExtComplex conj() const { return infinite_ ? *this : ExtComplex(std::conj(z_)); }

private:
    Complex z_{};
    bool infinite_ = false;
};

/// Distance on the Riemann sphere of diameter 2; finite for every pair including infinity.
inline double chordal_distance(const ExtComplex& p, const ExtComplex& q) {
    if (p.is_infinite() && q.is_infinite()) return 0.0;
    if (p.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(q.value()));
    if (q.is_infinite()) return 2.0 / std::sqrt(1.0 + std::norm(p.value()));
    const Complex a = p.value();
    const Complex b = q.value();
    return 2.0 * detail::cabs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

struct MoebiusMatrix {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static constexpr MoebiusMatrix identity() { return {}; }

    Complex determinant() const { return a * d - b * c; }

    /// Scales the entries so that |det| = 1. The action is unchanged.
    MoebiusMatrix normalized() const {
        const double m = std::norm(determinant());
        if (!(m > 0.0) || !std::isfinite(m))
            throw Error(ErrorCode::DegenerateInput, "singular Moebius matrix");
        const double s = 1.0 / std::sqrt(std::sqrt(m));
        return {a * s, b * s, c * s, d * s};
    }

    ExtComplex apply(const ExtComplex& z) const {
        if (z.is_infinite()) {
            if (c == Complex(0.0)) return ExtComplex::infinity();
            return detail::cdiv(a, c);
        }
        const Complex w = z.value();
        const Complex den = c * w + d;
        if (den == Complex(0.0)) return ExtComplex::infinity();
        return detail::cdiv(a * w + b, den);
    }

    /// Derivative of the action at a finite, non-pole point.
    Complex derivative(Complex z) const {
        const Complex den = c * z + d;
        return detail::cdiv(determinant(), den * den);
    }

    MoebiusMatrix conj_entries() const {
        return {std::conj(a), std::conj(b), std::conj(c), std::conj(d)};
    }

    MoebiusMatrix inverse() const { return {d, -b, -c, a}; }

    friend MoebiusMatrix operator*(const MoebiusMatrix& m, const MoebiusMatrix& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
};

inline ExtComplex moebius_apply(const MoebiusMatrix& m, const ExtComplex& z) { return m.apply(z); }

/// Rotation about the origin by `angle` radians.
inline MoebiusMatrix rotation_matrix(double angle) {
    const Complex h = std::polar(1.0, 0.5 * angle);
    return {h, 0.0, 0.0, std::conj(h)};
}

/// The unique Moebius map sending (z1, z2, z3) to (w1, w2, w3), built from cross ratios.
inline MoebiusMatrix moebius_from_three_points(const ExtComplex& z1, const ExtComplex& z2,
                                               const ExtComplex& z3, const ExtComplex& w1,
                                               const ExtComplex& w2, const ExtComplex& w3) {
    constexpr double kCoincident = 1e-14;
    auto distinct = [](const ExtComplex& p, const ExtComplex& q, const ExtComplex& r) {
        return chordal_distance(p, q) > kCoincident && chordal_distance(q, r) > kCoincident &&
               chordal_distance(p, r) > kCoincident;
    };
    if (!distinct(z1, z2, z3) || !distinct(w1, w2, w3))
        throw Error(ErrorCode::DegenerateInput, "three-point fit needs three distinct points");

    // Matrix of the cross ratio sending (p1, p2, p3) to (0, 1, inf).
    auto to_standard = [](const ExtComplex& p1, const ExtComplex& p2,
                          const ExtComplex& p3) -> MoebiusMatrix {
        if (p1.is_infinite()) return {0.0, p2.value() - p3.value(), 1.0, -p3.value()};
        if (p2.is_infinite()) return {1.0, -p1.value(), 1.0, -p3.value()};
        if (p3.is_infinite()) return {1.0, -p1.value(), 0.0, p2.value() - p1.value()};
        const Complex u = p2.value() - p3.value();
        const Complex v = p2.value() - p1.value();
        return {u, -p1.value() * u, v, -p3.value() * v};
    };
    const MoebiusMatrix s = to_standard(z1, z2, z3);
    const MoebiusMatrix t = to_standard(w1, w2, w3);
    return (t.inverse() * s).normalized();
}

/// z -> M(z), or z -> M(conj z) when orientation reversing.
struct IsometryTransform {
    MoebiusMatrix matrix{};
    bool orientation_reversing = false;

    static IsometryTransform identity() { return {}; }
    static IsometryTransform conjugation() { return {MoebiusMatrix::identity(), true}; }

    ExtComplex apply(const ExtComplex& z) const {
        return matrix.apply(orientation_reversing ? z.conj() : z);
    }
    ExtComplex operator()(const ExtComplex& z) const { return apply(z); }
};

/// (t1 o t2)(z) = t1(t2(z)).
inline IsometryTransform compose(const IsometryTransform& t1, const IsometryTransform& t2) {
    const MoebiusMatrix rhs = t1.orientation_reversing ? t2.matrix.conj_entries() : t2.matrix;
    return {(t1.matrix * rhs).normalized(),
            t1.orientation_reversing != t2.orientation_reversing};
}

inline IsometryTransform inverse(const IsometryTransform& t) {
    const MoebiusMatrix inv = t.matrix.inverse();
    return {t.orientation_reversing ? inv.conj_entries() : inv, t.orientation_reversing};
}

/// Transforms are equal when they have the same orientation and agree on the probe set
/// {0, 1, i, -1, -i, 2}. Extra probes guard against a probe landing on a pole of both maps.
inline bool action_equal(const IsometryTransform& t1, const IsometryTransform& t2,
                         double tolerance = 1e-9) {
    if (t1.orientation_reversing != t2.orientation_reversing) return false;
    static const std::array<ExtComplex, 6> probes = {
        ExtComplex(0.0), ExtComplex(1.0), ExtComplex(0.0, 1.0),
        ExtComplex(-1.0), ExtComplex(0.0, -1.0), ExtComplex(2.0)};
    for (const auto& p : probes)
        if (chordal_distance(t1(p), t2(p)) > tolerance) return false;
    return true;
}

} // namespace kaleido
