// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "kaleido/render.hpp"
#include "kaleido/scene.hpp"
#include "live.hpp"
#include "oracles.hpp"
#include "spiral_cases.hpp"
#include "support.hpp"

using namespace kaleido;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int kind_code(GeometryKind k) {
    return k == GeometryKind::Spherical ? 0 : (k == GeometryKind::Euclidean ? 1 : 2);
}

std::vector<oracle::C> finite_vertices(const FundamentalPolygon& p) {
    std::vector<oracle::C> v;
    for (const auto& z : p.vertices) v.push_back(z.value());
    return v;
}

// 1 -----------------------------------------------------------------------------------
Outcome classification_conformance() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::set<std::string> euclidean;
    std::size_t scanned = 0;
    for (std::size_t N = 0; N <= 6; ++N) {
        std::vector<int> k(N, 1);
        for (;;) {
            ++scanned;
            const OrbifoldNotation n{std::vector<double>(k.begin(), k.end())};
            const OrbifoldNotation s = strip_unit_orders(n);
            const Classification c = classify(s);
            if (kind_code(c.kind) != oracle::theorem_kind(k)) o.fail("kind mismatch for " + format(n));
            const auto& r = s.corner_orders;
            const bool bad = (r.size() == 1 && r[0] > 1) || (r.size() == 2 && r[0] != r[1]);
            if (c.is_bad != bad) o.fail("bad flag mismatch for " + format(n));
            if (c.kind == GeometryKind::Euclidean) euclidean.insert(format(normalize(s)));
            std::size_t i = 0;
            while (i < N && k[i] == 12) k[i++] = 1;
            if (i == N) break;
            ++k[i];
        }
    }
    if (euclidean != std::set<std::string>{"*2222", "*333", "*244", "*236"}) {
        std::string got;
        for (const auto& e : euclidean) got += e + " ";
        o.fail("Euclidean set is " + got);
    }
    const double t = seconds_since(t0);
    if (t >= 5.0) o.fail("took " + fmt("%.2f s", t));
    if (o.pass) o.detail = std::to_string(scanned) + " sequences in " + fmt("%.2f s", t);
    return o;
}

// 2 -----------------------------------------------------------------------------------
Outcome construction_closure() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t built = 0;
    double worst_angle = 0.0, worst_gap = 0.0;
    auto check = [&](const OrbifoldNotation& n) {
        try {
            const FundamentalPolygon p = build(n);
            ++built;
            worst_angle = std::max(worst_angle, p.max_angle_residual());
            worst_gap = std::max(worst_gap, p.closure_residual);
            if (!(p.max_angle_residual() < 1e-9) || !(p.closure_residual < 1e-9))
                o.fail("residual too large for " + format(n));
        } catch (const std::exception& e) {
            o.fail(format(n) + ": " + e.what());
        }
    };
    check(OrbifoldNotation{{1.0}});
    for (int k = 2; k <= 12; ++k) check(OrbifoldNotation{{double(k), double(k)}});
    // No notation with three or more corners of order >= 2 is bad, and order-1 corners
    // strip down to the shorter lists already covered.
    for (std::size_t N = 3; N <= 8; ++N)
        for_each_bracelet(N, 2, 12, [&](const std::vector<int>& w) {
            check(OrbifoldNotation{std::vector<double>(w.begin(), w.end())});
        });
    const double t = seconds_since(t0);
    if (t >= 60.0) o.fail("took " + fmt("%.1f s", t));
    if (o.pass)
        o.detail = std::to_string(built) + " polygons, max angle residual " + fmt("%.2e", worst_angle) +
                   ", max closure gap " + fmt("%.2e", worst_gap) + ", " + fmt("%.1f s", t);
    return o;
}

// 3 -----------------------------------------------------------------------------------
Outcome gauss_bonnet() {
    Outcome o;
    std::mt19937_64 g(2024);
    double worst = 0.0;
    int hyperbolic = 0, spherical = 0;
    while (hyperbolic < 50) {
        const std::size_t N = std::uniform_int_distribution<std::size_t>(3, 7)(g);
        std::vector<double> k(N);
        for (auto& x : k) x = std::uniform_int_distribution<int>(2, 12)(g);
        const OrbifoldNotation n{k};
        if (classify(n).kind != GeometryKind::Hyperbolic) continue;
        std::vector<double> fv(required_free_vars(n).count);
        for (auto& x : fv) x = testsupport::uniform(g, 0.5, 2.0);
        const FundamentalPolygon p = build(n, fv);
        double want = (N - 2.0) * pi;
        for (double x : k) want -= pi / x;
        const double rel = std::abs(oracle::polygon_area(true, finite_vertices(p)) / want - 1.0);
        worst = std::max(worst, rel);
        if (!(rel < 1e-6)) o.fail("hyperbolic " + format(n) + " off by " + fmt("%.2e", rel));
        ++hyperbolic;
    }
    for (const auto& e : enumerate(3, 12)) {
        if (e.classification.kind != GeometryKind::Spherical) continue;
        const FundamentalPolygon p = build(e.notation);
        double want = -pi;
        for (double x : p.corner_orders) want += pi / x;
        const double rel = std::abs(oracle::polygon_area(false, finite_vertices(p)) / want - 1.0);
        worst = std::max(worst, rel);
        if (!(rel < 1e-6)) o.fail("spherical " + format(e.notation) + " off by " + fmt("%.2e", rel));
        ++spherical;
    }
    if (o.pass)
        o.detail = std::to_string(hyperbolic) + " hyperbolic + " + std::to_string(spherical) +
                   " spherical, worst relative error " + fmt("%.2e", worst);
    return o;
}

// 4 -----------------------------------------------------------------------------------
Outcome cover_counts() {
    Outcome o;
    CoverOptions full;
    full.max_depth = 64;
    full.max_copies = 100000;
    const FundamentalPolygon square = build(parse("*2222"), {1.0, 1.0});
    for (int d = 0; d <= 10; ++d) {
        CoverOptions c = full;
        c.max_depth = d;
        const std::size_t got = generate_cover(square, c).copies.size();
        if (got != static_cast<std::size_t>(2 * d * d + 2 * d + 1))
            o.fail("*2222 depth " + std::to_string(d) + " gave " + std::to_string(got));
    }
    auto natural = [&](const std::string& s, std::size_t want) {
        const Cover c = generate_cover(build(parse(s)), full);
        if (c.copies.size() != want || c.stop != CoverStop::Natural)
            o.fail(s + " gave " + std::to_string(c.copies.size()));
    };
    for (int k = 2; k <= 12; ++k)
        natural("*(" + std::to_string(k) + ")(" + std::to_string(k) + ")", 2 * k);
    natural("*233", 24);
    natural("*234", 48);
    natural("*235", 120);
    if (o.pass) o.detail = "lattice d <= 10, *kk for k <= 12, *233/*234/*235 exact";
    return o;
}

// 5 -----------------------------------------------------------------------------------
Outcome isometry_suite() {
    Outcome o;
    std::mt19937_64 g(55);
    double drift = 0.0, invol = 0.0, fixed = 0.0, model = 0.0;
    auto gap = [](GeometryKind k, const ExtComplex& a, const ExtComplex& b) {
        return k == GeometryKind::Spherical ? chordal_distance(a, b) : std::abs(a.value() - b.value());
    };
    for (GeometryKind k : {GeometryKind::Spherical, GeometryKind::Euclidean, GeometryKind::Hyperbolic}) {
        for (int i = 0; i < 1000; ++i) {
            const IsometryTransform t = testsupport::random_isometry(g, k);
            const Complex a = testsupport::random_point(g, k), b = testsupport::random_point(g, k);
            drift = std::max(drift, std::abs(distance(k, t(a), t(b)) - distance(k, a, b)));

            Complex p = testsupport::random_point(g, k), q = testsupport::random_point(g, k);
            if (std::abs(p - q) < 1e-3) q = p + 0.1;
            const Geodesic mirror = geodesic_through(k, p, q);
            const IsometryTransform r = reflect_across(mirror);
            invol = std::max(invol, gap(k, r(r(a)), a));
            const ExtComplex on = point_at_distance(k, p, mirror, testsupport::uniform(g, 0.0, 1.0), 1);
            fixed = std::max(fixed, gap(k, r(on), on));
            fixed = std::max(fixed, gap(k, r(p), p));

            if (k == GeometryKind::Hyperbolic)
                model = std::max(model, std::abs(distance(k, a, b) - oracle::hyperboloid_distance(a, b)));
        }
    }
    if (!(drift < 1e-10)) o.fail("distance drift " + fmt("%.2e", drift));
    if (!(invol < 1e-10)) o.fail("involution error " + fmt("%.2e", invol));
    if (!(fixed < 1e-10)) o.fail("mirror not fixed: " + fmt("%.2e", fixed));
    if (!(model < 1e-10)) o.fail("hyperboloid mismatch " + fmt("%.2e", model));
    if (o.pass)
        o.detail = "drift " + fmt("%.1e", drift) + ", involution " + fmt("%.1e", invol) + ", mirror " +
                   fmt("%.1e", fixed) + ", hyperboloid " + fmt("%.1e", model);
    return o;
}

// 6 -----------------------------------------------------------------------------------
Outcome decomposition_formulas() {
    Outcome o;
    std::vector<std::pair<int, int>> quad_orders;
    for (int k3 = 2; k3 <= 12 && quad_orders.size() < 20; ++k3)
        for (int k4 = k3; k4 <= 12 && quad_orders.size() < 20; ++k4)
            if (k3 * k4 > k3 + k4) quad_orders.push_back({k3, k4});
    std::vector<double> cuts(20);
    for (int j = 0; j < 20; ++j) cuts[j] = 0.25 + 0.125 * j;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto [k3, k4] = quad_orders[i];
        const double k5 = 2 + i;
        for (int j = 0; j < 20; ++j) {
            const double d = cuts[j];
            const RightQuadSides q = right_quad_sides(k3, k4, d);
            worst = std::max(worst, oracle::walk_gap(true, {d, q.d23, q.d34, q.d41},
                                                     {pi / 2, pi / k3, pi / k4, pi / 2}));
            const double a = d, b = cuts[19 - j];
            const RightPentagonSides p = right_pentagon_sides(k5, a, b);
            worst = std::max(worst, oracle::walk_gap(true, {p.d12, a, p.d34, p.d45, b},
                                                     {pi / 2, pi / 2, pi / k5, pi / 2, pi / 2}));
        }
    }
    if (!(worst < 1e-9)) o.fail("walk gap " + fmt("%.2e", worst));

    const double inf = std::numeric_limits<double>::infinity();
    int named = 0;
    for (const char* s : {"*2345", "*23456", "*2223"})
        for (double bad : {0.0, -1.0, std::nan(""), inf, 900.0}) {
            const OrbifoldNotation n = parse(s);
            const std::size_t count = required_free_vars(n).count;
            for (std::size_t slot = 0; slot < count; ++slot) {
                std::vector<double> fv(count, 1.4);
                fv[slot] = bad;
                try {
                    const FundamentalPolygon p = build(n, fv);
                    o.fail(std::string(s) + " accepted " + fmt("%g", bad));
                    (void)p;
                } catch (const InfeasibleFreeVariable& e) {
                    if (e.edge().empty()) o.fail("unnamed infeasible error");
                    else ++named;
                } catch (const std::exception& e) {
                    o.fail(std::string(s) + " with " + fmt("%g", bad) + ": " + e.what());
                }
            }
        }
    for (double bad : {0.0, -1.0, std::nan(""), inf}) {
        try {
            (void)right_pentagon_sides(3, bad, 1.0);
            o.fail("pentagon accepted " + fmt("%g", bad));
        } catch (const InfeasibleFreeVariable& e) {
            if (e.edge() != "d23") o.fail("pentagon named " + e.edge());
            else ++named;
        }
    }
    if (o.pass) o.detail = "800 grid closures, worst gap " + fmt("%.2e", worst) + "; " +
                           std::to_string(named) + " infeasible inputs named";
    return o;
}

// 7 -----------------------------------------------------------------------------------
Outcome spiral_intersection() {
    Outcome o;
    std::mt19937_64 g(7007);
    double worst = 0.0;
    int hits = 0;
    for (GeometryKind k : {GeometryKind::Spherical, GeometryKind::Euclidean, GeometryKind::Hyperbolic}) {
        for (int i = 0; i < 100; ++i) {
            const testsupport::SpiralCase c = testsupport::make_spiral_case(g, k);
            const auto got = spiral_triangle_intersect(c.ray, c.tri);
            if (got.has_value() != c.expected.has_value()) {
                o.fail(std::string(got ? "spurious" : "missed") + " hit, " + to_string(k) + " case " +
                       std::to_string(i));
                continue;
            }
            if (got) {
                ++hits;
                worst = std::max(worst, std::abs(*got - *c.expected));
            }
        }
    }
    if (!(worst < 1e-6)) o.fail("t error " + fmt("%.2e", worst));
    const std::array<Vec3, 3> tri = {Vec3{-1, -1, 0.7}, Vec3{1, -1, 0.7}, Vec3{0, 1, 0.7}};
    double vertical = 0.0;
    for (GeometryKind k : {GeometryKind::Spherical, GeometryKind::Euclidean, GeometryKind::Hyperbolic}) {
        const SpiralRay r = make_spiral_ray(k, Complex(0.1, 0.2), 0.1, 1.0, 0.0, 0.4, 1.0);
        const auto t = spiral_triangle_intersect(r, tri);
        if (!t) {
            o.fail("vertical ray missed");
            continue;
        }
        vertical = std::max(vertical, std::abs(*t - 1.5));
    }
    if (!(vertical < 1e-12)) o.fail("vertical error " + fmt("%.2e", vertical));
    if (o.pass)
        o.detail = "300 pairs, " + std::to_string(hits) + " hits, worst " + fmt("%.2e", worst) +
                   ", vertical " + fmt("%.1e", vertical);
    return o;
}

// 8 -----------------------------------------------------------------------------------
Outcome non_orbifold() {
    Outcome o;
    try {
        const OrbifoldNotation n = parse("*(1.5)(12)(12)");
        const FundamentalPolygon p = build(n);
        if (p.is_orbifold) o.fail("is_orbifold true");
        const Cover c = generate_cover(p, CoverOptions{});
        if (!c.overlapping) o.fail("overlapping false");
        (void)render_cover(p, c, RenderStyle{});
        (void)export_tiling(n, p, c, RenderStyle{});
        if (o.pass)
            o.detail = std::string(to_string(p.kind)) + ", " + std::to_string(c.copies.size()) +
                       " overlapping copies";
    } catch (const std::exception& e) {
        o.fail(e.what());
    }
    return o;
}

// 9 -----------------------------------------------------------------------------------
Outcome golden_files() {
    Outcome o;
    const std::string dir = KALEIDO_GOLDEN_DIR;
    for (const auto& [fmt_name, file] : {std::pair<std::string, std::string>{"svg", "cover_2345.svg"},
                                         std::pair<std::string, std::string>{"tiling", "cover_2345.json"}}) {
        const auto a = testsupport::run_cli({"cover", "*2345", "--format", fmt_name});
        const auto b = testsupport::run_cli({"cover", "*2345", "--format", fmt_name});
        if (a.exit_code != 0 || b.exit_code != 0) o.fail(fmt_name + " exit code");
        if (a.out != b.out) o.fail(fmt_name + " differs between runs");
        const std::string golden = testsupport::read_file(dir + "/" + file);
        if (golden.empty() || a.out != golden) o.fail(fmt_name + " differs from " + file);
    }
    if (o.pass) o.detail = "svg and tiling byte-identical across runs and to golden files";
    return o;
}

// 10 ----------------------------------------------------------------------------------
Outcome service_contract() {
    Outcome o;
    testsupport::LiveServer server;
    auto c = server.client();
    auto ok = c.Post("/api/build", R"({"notation":"*2345","free_vars":[1.4]})", "application/json");
    if (!ok || ok->status != 200) {
        o.fail("*2345 build not 200");
    } else {
        const Json b = Json::parse(ok->body);
        for (const auto& a : b["polygon"]["angle_residuals"])
            if (!(std::abs(a.get<double>()) < 1e-9)) o.fail("*2345 residual too large");
    }
    auto bad = c.Post("/api/build", R"({"notation":"*23"})", "application/json");
    if (!bad || bad->status != 422 || Json::parse(bad->body)["message"] != "bad orbifold: not realizable")
        o.fail("*23 not a 422 bad orbifold");
    auto broken = c.Post("/api/build", R"({"notation":)", "application/json");
    if (!broken || broken->status != 400) o.fail("malformed body not 400");

    std::mt19937_64 g(4242);
    int equal = 0;
    for (int i = 0; i < 20; ++i) {
        const auto req = testsupport::random_request(g);
        std::string why;
        if (testsupport::same_payload(req, c, &why)) ++equal;
        else o.fail(req.path + " " + req.body + ": " + why);
    }
    if (o.pass) o.detail = "3 build examples, " + std::to_string(equal) + "/20 CLI/HTTP payloads equal";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"classification conformance", classification_conformance},
        {"construction closure", construction_closure},
        {"Gauss-Bonnet areas", gauss_bonnet},
        {"cover counts", cover_counts},
        {"isometry suite", isometry_suite},
        {"decomposition formulas", decomposition_formulas},
        {"spiral intersection", spiral_intersection},
        {"non-orbifold handling", non_orbifold},
        {"determinism and golden files", golden_files},
        {"service contract", service_contract},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        if (!r.pass) ++failures;
        std::printf("%s %2zu %s: %s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, r.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
