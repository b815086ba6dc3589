#pragma once

// Orbifold notation *k1...kN: parsing, formatting, Euler characteristic,
// classification, canonical forms and enumeration.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kaleido/error.hpp"
#include "kaleido/geometry.hpp"

namespace kaleido {

inline constexpr double kMaxOrder = 1e6;

struct OrbifoldNotation {
    std::vector<double> corner_orders;

    std::size_t walls() const { return corner_orders.size(); }

    bool all_integer() const {
        return std::all_of(corner_orders.begin(), corner_orders.end(),
                           [](double k) { return k == std::floor(k); });
    }

    friend bool operator==(const OrbifoldNotation&, const OrbifoldNotation&) = default;
};

/// A signed fraction in lowest terms with positive denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    int sign() const { return (num > 0) - (num < 0); }
    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Euler characteristic. `exact` is set when every order is an integer and the sum fits
/// in 64-bit arithmetic; `value` is always available.
struct EulerCharacteristic {
    double value = 0.0;
    std::optional<Rational> exact;

    int sign() const {
        if (exact) return exact->sign();
        constexpr double eps = 1e-12;
        return value > eps ? 1 : (value < -eps ? -1 : 0);
    }
    std::string str() const;
};

struct Classification {
    EulerCharacteristic euler_char;
    GeometryKind kind = GeometryKind::Euclidean;
    bool is_orbifold = true;
    bool is_bad = false;
    bool is_realizable = true;
};

namespace detail {

inline bool is_integer_order(double k) { return k == std::floor(k); }

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Adds p/q to r without overflow; returns false on overflow.
inline bool add_fraction(Rational& r, std::int64_t p, std::int64_t q) {
    const std::int64_t g = std::gcd(r.den, q);
    std::int64_t den, a, b, num;
    if (__builtin_mul_overflow(r.den / g, q, &den)) return false;
    if (__builtin_mul_overflow(r.num, q / g, &a)) return false;
    if (__builtin_mul_overflow(p, r.den / g, &b)) return false;
    if (__builtin_add_overflow(a, b, &num)) return false;
    const std::int64_t h = std::gcd(num < 0 ? -num : num, den);
    r.num = h ? num / h : 0;
    r.den = h ? den / h : 1;
    if (r.num == 0) r.den = 1;
    return true;
}

} // namespace detail

inline std::string EulerCharacteristic::str() const {
    if (exact) return exact->str();
    return detail::format_double(value);
}

/// Parses "*" followed by digits 1-9 or parenthesized numbers such as "(10)" or "(1.5)".
inline OrbifoldNotation parse(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t end = text.size();
    while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (i >= end) throw ParseError("empty notation", 0);
    if (text[i] != '*') throw ParseError("notation must start with '*'", i);
    ++i;
    OrbifoldNotation n;
    if (i == end) {
        n.corner_orders.push_back(1.0);
        return n;
    }
    while (i < end) {
        const char ch = text[i];
        if (ch >= '1' && ch <= '9') {
            n.corner_orders.push_back(static_cast<double>(ch - '0'));
            ++i;
            continue;
        }
        if (ch == '0') throw ParseError("corner order must be positive", i);
        if (ch != '(') throw ParseError(std::string("unexpected character '") + ch + "'", i);
        const std::size_t open = i;
        const std::size_t close = text.find(')', open);
        if (close == std::string_view::npos || close >= end)
            throw ParseError("unterminated '('", open);
        const std::string_view body = text.substr(open + 1, close - open - 1);
        if (body.empty()) throw ParseError("empty parentheses", open);
        for (std::size_t j = 0; j < body.size(); ++j) {
            const char c = body[j];
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.'))
                throw ParseError(std::string("unexpected character '") + c + "' in order",
                                 open + 1 + j);
        }
        double value = 0.0;
        auto res = std::from_chars(body.data(), body.data() + body.size(), value);
        if (res.ec != std::errc() || res.ptr != body.data() + body.size())
            throw ParseError("malformed number", open + 1);
        if (!(value > 0.0)) throw ParseError("corner order must be positive", open + 1);
        if (value < 1.0) throw ParseError("corner order must be at least 1", open + 1);
        if (value > kMaxOrder) throw ParseError("corner order exceeds 1e6", open + 1);
        n.corner_orders.push_back(value);
        i = close + 1;
    }
    return n;
}

/// Text form: single digits bare, everything else parenthesized; [1] prints as "*".
inline std::string format(const OrbifoldNotation& n) {
    std::string out = "*";
    if (n.corner_orders.size() == 1 && n.corner_orders[0] == 1.0) return out;
    for (double k : n.corner_orders) {
        if (detail::is_integer_order(k) && k >= 1.0 && k <= 9.0)
            out += static_cast<char>('0' + static_cast<int>(k));
        else
            out += "(" + detail::format_double(k) + ")";
    }
    return out;
}

inline EulerCharacteristic euler_characteristic(const OrbifoldNotation& n) {
    EulerCharacteristic chi;
    const auto N = static_cast<double>(n.walls());
    double sum = 0.0;
    for (double k : n.corner_orders) sum += 1.0 / (2.0 * k);
    chi.value = sum - N / 2.0 + 1.0;
    if (n.all_integer()) {
        Rational r{static_cast<std::int64_t>(2) - static_cast<std::int64_t>(n.walls()), 2};
        if (r.num % 2 == 0) r = {r.num / 2, 1};
        bool ok = true;
        for (double k : n.corner_orders)
            ok = ok && detail::add_fraction(r, 1, 2 * static_cast<std::int64_t>(k));
        if (ok) {
            chi.exact = r;
            chi.value = static_cast<double>(r.num) / static_cast<double>(r.den);
        }
    }
    return chi;
}

/// Lexicographically smallest rotation or reversal of the order list.
inline std::vector<double> canonical_orders(const std::vector<double>& orders) {
    const std::size_t n = orders.size();
    std::vector<double> best = orders;
    std::vector<double> cand(n);
    for (int dir = 0; dir < 2; ++dir) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t j = 0; j < n; ++j)
                cand[j] = dir == 0 ? orders[(r + j) % n] : orders[(r + n - j) % n];
            if (cand < best) best = cand;
        }
    }
    return best;
}

/// Drops angle-pi corners (order 1) when N >= 2 and returns the canonical representative.
inline OrbifoldNotation normalize(const OrbifoldNotation& n) {
    std::vector<double> kept;
    for (double k : n.corner_orders)
        if (k != 1.0) kept.push_back(k);
    if (kept.empty()) return OrbifoldNotation{{1.0}};
    return OrbifoldNotation{canonical_orders(kept)};
}

/// Same as normalize but keeps the cyclic order of the corners as written.
inline OrbifoldNotation strip_unit_orders(const OrbifoldNotation& n) {
    if (std::find(n.corner_orders.begin(), n.corner_orders.end(), 1.0) == n.corner_orders.end())
        return n;
    std::vector<double> kept;
    for (double k : n.corner_orders)
        if (k != 1.0) kept.push_back(k);
    if (kept.empty()) return OrbifoldNotation{{1.0}};
    return OrbifoldNotation{kept};
}

inline Classification classify(const OrbifoldNotation& n) {
    Classification c;
    c.euler_char = euler_characteristic(n);
    const int s = c.euler_char.sign();
    c.kind = s > 0 ? GeometryKind::Spherical : (s < 0 ? GeometryKind::Hyperbolic
                                                      : GeometryKind::Euclidean);
    c.is_orbifold = n.all_integer();
    const OrbifoldNotation r = strip_unit_orders(n);
    const auto& k = r.corner_orders;
    c.is_bad = (k.size() == 1 && k[0] > 1.0) || (k.size() == 2 && k[0] != k[1]);
    c.is_realizable = !c.is_bad;
    return c;
}

struct EnumeratedOrbifold {
    OrbifoldNotation notation;
    Classification classification;
};

/// Calls visit(orders) for each bracelet of length n over {lo..hi} in lexicographic order.
/// Necklaces come from the Fredricksen-Kessler-Maiorana algorithm; a necklace is kept
/// when it is no larger than every rotation of its reversal.
template <class Visit>
void for_each_bracelet(std::size_t n, int lo, int hi, Visit&& visit) {
    if (n == 0 || hi < lo) return;
    std::vector<int> a(n + 1, lo);
    std::vector<int> word(n), rev(n);
    std::size_t i = n;
    auto is_bracelet = [&]() {
        for (std::size_t j = 0; j < n; ++j) rev[j] = word[n - 1 - j];
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t j = 0; j < n; ++j) {
                const int x = rev[(r + j) % n];
                if (x < word[j]) return false;
                if (x > word[j]) break;
            }
        }
        return true;
    };
    // a[1..n] holds the prefix; a[0] is a sentinel.
    a[0] = lo - 1;
    for (;;) {
        if (n % i == 0) {
            for (std::size_t j = 0; j < n; ++j) word[j] = a[j + 1];
            if (is_bracelet()) visit(static_cast<const std::vector<int>&>(word));
        }
        i = n;
        while (i > 0 && a[i] == hi) --i;
        if (i == 0) break;
        ++a[i];
        for (std::size_t j = i + 1; j <= n; ++j) a[j] = a[j - i];
    }
}

/// All canonical good orbifolds with exactly `walls` walls and integer orders in [2, max_order].
inline std::vector<EnumeratedOrbifold> enumerate(std::size_t walls, int max_order) {
    if (walls < 1) throw Error(ErrorCode::Domain, "enumerate needs at least one wall");
    if (max_order < 2) throw Error(ErrorCode::Domain, "enumerate needs max_order >= 2");
    std::vector<EnumeratedOrbifold> out;
    if (walls == 1) {
        OrbifoldNotation n{{1.0}};
        out.push_back({n, classify(n)});
        return out;
    }
    for_each_bracelet(walls, 2, max_order, [&](const std::vector<int>& w) {
        OrbifoldNotation n{std::vector<double>(w.begin(), w.end())};
        Classification c = classify(n);
        if (!c.is_bad) out.push_back({std::move(n), c});
    });
    return out;
}

} // namespace kaleido
