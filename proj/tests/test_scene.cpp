#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "kaleido/scene.hpp"
#include "spiral_cases.hpp"

using namespace kaleido;
constexpr GeometryKind S = GeometryKind::Spherical;
constexpr GeometryKind E = GeometryKind::Euclidean;
constexpr GeometryKind H = GeometryKind::Hyperbolic;

TEST(Embed, SingleVertexCentered) {
    const SceneMesh m = embed_object(std::vector<Vec3>{{5, 3, 0.2}}, E);
    ASSERT_EQ(m.vertices.size(), 1u);
    EXPECT_EQ(m.vertices[0].horizontal, Complex(0.0));
    EXPECT_EQ(m.vertices[0].height, 0.2);
}

TEST(Embed, SmallSquareUnchanged) {
    const std::vector<Vec3> sq = {{0.1, 0.1, 0}, {-0.1, 0.1, 0}, {-0.1, -0.1, 0}, {0.1, -0.1, 0}};
    for (GeometryKind k : {S, E, H}) {
        const SceneMesh m = embed_object(sq, k);
        for (std::size_t i = 0; i < sq.size(); ++i)
            EXPECT_LT(std::abs(m.vertices[i].horizontal - Complex(sq[i].x, sq[i].y)), 1e-16);
        EXPECT_TRUE(action_equal(m.pose, IsometryTransform::identity()));
    }
}

TEST(Embed, TooLargeForDisk) {
    std::vector<Vec3> disk;
    for (int i = 0; i < 16; ++i) disk.push_back({std::cos(i * 0.3927), std::sin(i * 0.3927), 0});
    try {
        (void)embed_object(disk, H);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ObjectTooLarge);
        EXPECT_NE(std::string(e.what()).find("pre-scale"), std::string::npos);
    }
    EXPECT_NO_THROW((void)embed_object(disk, E));
}

TEST(Embed, BadIndexRejected) {
    RawMesh raw{{{0, 0, 0}, {0.1, 0, 0}, {0, 0.1, 0}}, {{0, 1, 3}}};
    EXPECT_THROW((void)embed_object(raw, E), Error);
}

TEST(Move, ToCurrentLocationKeepsPose) {
    const SceneMesh m = embed_object(std::vector<Vec3>{{0.1, 0, 0}, {-0.1, 0, 0}}, H);
    EXPECT_TRUE(action_equal(move_object(m, 0.0).pose, m.pose));
}

TEST(Move, PreservesIntrinsicDistances) {
    std::vector<Vec3> pts;
    std::mt19937_64 g(31);
    for (int i = 0; i < 20; ++i) {
        const Complex z = testsupport::point_in_disk(g, 0.3);
        pts.push_back({z.real(), z.imag(), 0.5});
    }
    const SceneMesh m = embed_object(pts, H);
    const SceneMesh moved = move_object(m, 0.6);
    EXPECT_LT(std::abs(moved.pose(0.0).value() - 0.6), 1e-14);
    const auto before = posed_vertices(m), after = posed_vertices(moved);
    for (const auto& [z, h] : after) EXPECT_LT(std::abs(z.value()), 1.0);
    for (std::size_t i = 0; i < before.size(); ++i)
        for (std::size_t j = i + 1; j < before.size(); ++j)
            EXPECT_NEAR(distance(H, after[i].first, after[j].first),
                        distance(H, before[i].first, before[j].first), 1e-10);
}

TEST(Move, SuccessiveMovesCompose) {
    for (GeometryKind k : {S, E, H}) {
        const SceneMesh m = embed_object(std::vector<Vec3>{{0.1, 0, 0}, {-0.1, 0.05, 0}}, k);
        const SceneMesh a = move_object(move_object(m, Complex(0.3, 0.2)), Complex(-0.4, 0.1));
        const IsometryTransform t1 = translation_taking(k, 0.0, Complex(0.3, 0.2));
        const IsometryTransform t2 = translation_taking(k, Complex(0.3, 0.2), Complex(-0.4, 0.1));
        EXPECT_TRUE(action_equal(a.pose, compose(t2, t1)));
        EXPECT_LT(std::abs(a.pose(0.0).value() - Complex(-0.4, 0.1)), 1e-14);
    }
}

TEST(Spiral, StartsAtOrigin) {
    const SpiralRay r = make_spiral_ray(S, Complex(0.3, -0.2), 0.4, Complex(1, 1), 0.7, 0.1, 1.0);
    const auto [p, z] = spiral_point(r, 0.0);
    EXPECT_EQ(p.value(), Complex(0.3, -0.2));
    EXPECT_EQ(z, 0.4);
}

TEST(Spiral, VerticalRayStaysPut) {
    const SpiralRay r = make_spiral_ray(H, Complex(0.3, 0.1), 0.0, 1.0, 0.0, 0.5, 1.0);
    for (double t : {0.5, 1.0, 7.0}) {
        const auto [p, z] = spiral_point(r, t);
        EXPECT_EQ(p.value(), Complex(0.3, 0.1));
        EXPECT_DOUBLE_EQ(z, 0.5 * t);
    }
}

TEST(Spiral, HyperbolicDiameterDistance) {
    const SpiralRay r = make_spiral_ray(H, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0);
    const auto [p, z] = spiral_point(r, 1.0986123);
    EXPECT_NEAR(p.value().real(), 0.5, 1e-7);
    EXPECT_NEAR(p.value().imag(), 0.0, 1e-15);
    EXPECT_EQ(z, 0.0);
}

TEST(Spiral, MatchesOracleCurve) {
    std::mt19937_64 g(32);
    for (GeometryKind k : {S, E, H}) {
        for (int i = 0; i < 100; ++i) {
            const Complex p0 = testsupport::point_in_disk(g, 0.6);
            const Complex u = std::polar(1.0, testsupport::uniform(g, -3, 3));
            const double sH = testsupport::uniform(g, 0.1, 2.0);
            const SpiralRay r = make_spiral_ray(k, p0, 0.2, u, sH, 0.3, 1.0);
            const double t = testsupport::uniform(g, 0.0, 2.0);
            const auto [p, z] = spiral_point(r, t);
            const oracle::Vec3 o = testsupport::oracle_curve(k, p0, u, 0.2, sH, 0.3, t);
            EXPECT_LT(std::abs(p.value() - Complex(o.x, o.y)), 1e-10);
            EXPECT_NEAR(z, o.z, 1e-15);
            EXPECT_NEAR(distance(k, p0, p), k == S ? std::abs(std::remainder(t * sH, 2 * oracle::pi)) : t * sH, 1e-9);
        }
    }
}

TEST(Intersect, VerticalClosedForm) {
    const std::array<Vec3, 3> tri = {Vec3{-1, -1, 0.7}, Vec3{1, -1, 0.7}, Vec3{0, 1, 0.7}};
    const SpiralRay r = make_spiral_ray(E, Complex(0.1, 0.2), 0.1, 1.0, 0.0, 0.4, 1.0);
    const auto t = spiral_triangle_intersect(r, tri);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, (0.7 - 0.1) / 0.4, 1e-12);
    const SpiralRay miss = make_spiral_ray(E, Complex(3.0, 0.2), 0.1, 1.0, 0.0, 0.4, 1.0);
    EXPECT_FALSE(spiral_triangle_intersect(miss, tri).has_value());
    const SpiralRay down = make_spiral_ray(E, Complex(0.1, 0.2), 0.1, 1.0, 0.0, -0.4, 1.0);
    EXPECT_FALSE(spiral_triangle_intersect(down, tri).has_value());
}

TEST(Intersect, HorizontalWallAgainstOracle) {
    // s_Z = 0 and a vertical wall crossing the real axis at x = 0.5 (hyperbolic t = ln 3).
    const std::array<Vec3, 3> wall = {Vec3{0.5, -0.3, 0.0}, Vec3{0.5, 0.3, 0.0}, Vec3{0.5, 0.0, 1.0}};
    const SpiralRay r = make_spiral_ray(H, 0.0, 0.2, 1.0, 1.0, 0.0, 1.0);
    const auto t = spiral_triangle_intersect(r, wall);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, std::log(3.0), 1e-9);
}

TEST(Intersect, TwoCrossingsReturnsFirst) {
    const SpiralRay r = make_spiral_ray(S, 1.0, 0.5, Complex(0, 1), 1.0, 0.0, 1.0);
    // The ray follows the unit circle counterclockwise from 1: it crosses the wall
    // y = 0.5 at angle pi/6 and again at 5pi/6.
    const std::array<Vec3, 3> wall = {Vec3{-2, 0.5, -1}, Vec3{2, 0.5, -1}, Vec3{0, 0.5, 3}};
    const auto t = spiral_triangle_intersect(r, wall);
    ASSERT_TRUE(t.has_value());
    EXPECT_NEAR(*t, oracle::pi / 6, 1e-9);
    const auto curve = [&](double s) { return testsupport::oracle_curve(S, 1.0, Complex(0, 1), 0.5, 1.0, 0.0, s); };
    std::array<oracle::Vec3, 3> o;
    for (int i = 0; i < 3; ++i) o[i] = {wall[i].x, wall[i].y, wall[i].z};
    const auto first = oracle::first_hit(curve, o, 2 * oracle::pi);
    ASSERT_TRUE(first.has_value());
    EXPECT_NEAR(*first, oracle::pi / 6, 1e-9);
    // Start just past the first crossing: the second root is found.
    const auto second = oracle::first_hit([&](double s) { return curve(s + 1.0); }, o, 2 * oracle::pi);
    ASSERT_TRUE(second.has_value());
    EXPECT_NEAR(*second + 1.0, 5 * oracle::pi / 6, 1e-9);
    const SpiralRay later = make_spiral_ray(S, std::polar(1.0, 1.0), 0.5, Complex(0, 1) * std::polar(1.0, 1.0), 1.0, 0.0, 1.0);
    const auto t2 = spiral_triangle_intersect(later, wall);
    ASSERT_TRUE(t2.has_value());
    EXPECT_NEAR(*t2 + 1.0, 5 * oracle::pi / 6, 1e-9);
}

TEST(Intersect, RandomPairsAgreeWithSamplingOracle) {
    std::mt19937_64 g(33);
    for (GeometryKind k : {S, E, H}) {
        int hits = 0;
        for (int i = 0; i < 40; ++i) {
            const testsupport::SpiralCase c = testsupport::make_spiral_case(g, k);
            const auto got = spiral_triangle_intersect(c.ray, c.tri);
            ASSERT_EQ(got.has_value(), c.expected.has_value()) << to_string(k) << " case " << i;
            if (got) {
                ++hits;
                EXPECT_NEAR(*got, *c.expected, 1e-6);
            }
        }
        EXPECT_GT(hits, 5);
    }
}

TEST(Intersect, DegenerateTriangleRejected) {
    const SpiralRay r = make_spiral_ray(E, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0);
    const std::array<Vec3, 3> flat = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{2, 0, 0}};
    try {
        (void)spiral_triangle_intersect(r, flat);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateInput);
    }
}

TEST(Mesh, ReadsVerticesAndFaces) {
    std::istringstream in("# cube corner\nv 0 0 0\nv 1 0 0\nv 0 1 0.5\n\nf 1 2 3\nf 1/1/1 3/2/2 2/3/3\n");
    const RawMesh m = read_mesh(in);
    ASSERT_EQ(m.vertices.size(), 3u);
    ASSERT_EQ(m.triangles.size(), 2u);
    EXPECT_EQ(m.vertices[2].z, 0.5);
    EXPECT_EQ(m.triangles[1], (std::array<int, 3>{0, 2, 1}));
}

TEST(Mesh, MalformedLinesRejected) {
    std::istringstream bad("v 0 0\n");
    EXPECT_THROW((void)read_mesh(bad), Error);
    std::istringstream badf("v 0 0 0\nf 1 2 9\n");
    EXPECT_THROW((void)embed_object(read_mesh(badf), E), Error);
}
