#include "annulus_lab/lattice.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace annulus_lab;

namespace {

std::vector<IntPoint> brute_annulus(double lambda, double delta)
{
    std::vector<IntPoint> out;
    const auto R = static_cast<std::int64_t>(std::ceil(lambda + delta)) + 1;
    const long double lo = (static_cast<long double>(lambda) - delta) * (static_cast<long double>(lambda) - delta);
    const long double hi = (static_cast<long double>(lambda) + delta) * (static_cast<long double>(lambda) + delta);
    for (std::int64_t x = -R; x <= R; ++x)
        for (std::int64_t y = -R; y <= R; ++y) {
            const long double n = static_cast<long double>(x * x + y * y);
            if (n > lo && n < hi)
                out.push_back({x, y});
        }
    return out;
}

std::uint64_t brute_r2(std::int64_t n)
{
    std::uint64_t c = 0;
    const auto R = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n))) + 1;
    for (std::int64_t x = -R; x <= R; ++x)
        for (std::int64_t y = -R; y <= R; ++y)
            c += (x * x + y * y == n);
    return c;
}

} // namespace

TEST(R2, SmallValues)
{
    EXPECT_EQ(r2(0), 1u);
    EXPECT_EQ(r2(25), 12u);
    EXPECT_EQ(r2(21), 0u);
    EXPECT_EQ(r2(1), 4u);
    EXPECT_EQ(r2(2), 4u);
    EXPECT_EQ(r2(5), 8u);
    EXPECT_EQ(r2(65), 16u);
}

TEST(R2, MatchesBruteForce)
{
    for (std::int64_t n = 0; n <= 3000; ++n)
        ASSERT_EQ(r2(n), brute_r2(n)) << n;
}

TEST(R2, RejectsNegative) { EXPECT_THROW(r2(-1), ArgumentError); }

TEST(EnumerateAnnulus, EmptyWindow)
{
    const LatticeSet s = enumerate_annulus({4.6, 0.01});
    EXPECT_TRUE(s.empty());
    EXPECT_EQ(count_annulus({4.6, 0.01}), 0u);
}

TEST(EnumerateAnnulus, TwentyEightPoints)
{
    const LatticeSet s = enumerate_annulus({5.0, 0.5});
    EXPECT_EQ(s.size(), 28u);
    EXPECT_EQ(count_annulus({5.0, 0.5}), 28u);
    EXPECT_EQ(s.points, brute_annulus(5.0, 0.5));
}

TEST(EnumerateAnnulus, ThinCircle)
{
    const LatticeSet s = enumerate_annulus({5.0, 0.01});
    ASSERT_EQ(s.size(), 12u);
    for (const auto& p : s.points)
        EXPECT_EQ(p.norm2(), 25);
    EXPECT_EQ(count_annulus({5.0, 0.01}), 12u);
}

TEST(EnumerateAnnulus, StrictBoundary)
{
    // |k| = 5 sits exactly on the outer radius of (4.5, 0.5) and the inner one of (5.5, 0.5).
    for (const auto& p : enumerate_annulus({4.5, 0.5}).points)
        EXPECT_LT(p.norm2(), 25);
    for (const auto& p : enumerate_annulus({5.5, 0.5}).points)
        EXPECT_GT(p.norm2(), 25);
}

TEST(EnumerateAnnulus, StrategiesAgreeWithBruteForce)
{
    const double cases[][2] = {{5, 0.5}, {10.3, 0.7}, {31.6, 0.05}, {50, 2.5}, {17.01, 0.3}, {64, 1.0 / 8}};
    for (const auto& c : cases) {
        const auto brute = brute_annulus(c[0], c[1]);
        EnumerateOptions col, shell;
        col.strategy = EnumerateOptions::Strategy::column_scan;
        shell.strategy = EnumerateOptions::Strategy::shells;
        EXPECT_EQ(enumerate_annulus({c[0], c[1]}, col).points, brute);
        EXPECT_EQ(enumerate_annulus({c[0], c[1]}, shell).points, brute);
        EXPECT_EQ(count_annulus({c[0], c[1]}), brute.size());
    }
}

TEST(EnumerateAnnulus, InvariantsSortedUniqueSymmetric)
{
    for (double lambda : {20.0, 77.7, 300.0}) {
        const LatticeSet s = enumerate_annulus({lambda, 1.3});
        ASSERT_TRUE(std::is_sorted(s.points.begin(), s.points.end()));
        ASSERT_EQ(std::adjacent_find(s.points.begin(), s.points.end()), s.points.end());
        for (const auto& p : s.points) {
            for (IntPoint q : {IntPoint{-p.x, -p.y}, IntPoint{p.x, -p.y}, IntPoint{-p.x, p.y}, IntPoint{p.y, p.x},
                               IntPoint{-p.y, p.x}, IntPoint{p.y, -p.x}, IntPoint{-p.y, -p.x}})
                ASSERT_TRUE(s.contains(q));
        }
        ASSERT_NE(s.annulus(), nullptr);
    }
}

TEST(EnumerateAnnulus, ErrorPaths)
{
    EXPECT_THROW(enumerate_annulus({2.0, 0.5}), ArgumentError);
    EXPECT_THROW(enumerate_annulus({10.0, 0.0}), ArgumentError);
    EXPECT_THROW(enumerate_annulus({10.0, -1.0}), ArgumentError);
    EXPECT_THROW(enumerate_annulus({std::nan(""), 0.5}), ArgumentError);
    EXPECT_THROW(enumerate_annulus({3e9, 0.5}), ArgumentError);
    EnumerateOptions tiny;
    tiny.capacity = 10;
    EXPECT_THROW(enumerate_annulus({100.0, 1.0}, tiny), CapacityError);
}

TEST(FromPoints, SortsAndDeduplicates)
{
    const LatticeSet s = LatticeSet::from_points({{3, 4}, {0, 1}, {3, 4}, {-1, 2}});
    EXPECT_EQ(s.points, (std::vector<IntPoint>{{-1, 2}, {0, 1}, {3, 4}}));
    EXPECT_EQ(s.annulus(), nullptr);
    EXPECT_THROW(LatticeSet::from_points({{kCoordinateLimit + 1, 0}}), ArgumentError);
}

TEST(CurveNeighborhood, UnitCircleMatchesAnnulus)
{
    const LatticeSet a = enumerate_annulus({5.0, 0.5});
    const LatticeSet c = enumerate_curve_neighborhood(CurveSpec::unit_circle(), 5.0, 0.5);
    EXPECT_EQ(a.points, c.points);
}

TEST(CurveNeighborhood, ParabolaOneHundred)
{
    // Brute force over the strip |x| <= 100, 0 <= y <= 100: only the exact
    // points (j, j^2/100) with 10 | j lie within 1e-6 of 100*Gamma.
    const LatticeSet s = enumerate_curve_neighborhood(CurveSpec::parabola(), 100.0, 1e-6);
    ASSERT_EQ(s.size(), 21u);
    for (const auto& p : s.points) {
        EXPECT_EQ(p.x % 10, 0);
        EXPECT_EQ(p.y * 100, p.x * p.x);
    }
}

TEST(CurveNeighborhood, ParabolaMatchesBruteForceDistance)
{
    const double lambda = 30.0, delta = 0.4;
    const LatticeSet s = enumerate_curve_neighborhood(CurveSpec::parabola(), lambda, delta);
    std::vector<IntPoint> brute;
    for (std::int64_t x = -32; x <= 32; ++x)
        for (std::int64_t y = -2; y <= 32; ++y) {
            // dense sampling of the arc gives an upper bound on the distance
            double best = 1e9;
            for (int i = 0; i <= 20000; ++i) {
                const double t = -1.0 + 2.0 * i / 20000.0;
                best = std::min(best, std::hypot(x - lambda * t, y - lambda * t * t));
            }
            if (best < delta - 1e-3)
                brute.push_back({x, y});
        }
    for (const auto& p : brute)
        EXPECT_TRUE(s.contains(p)) << p.x << ',' << p.y;
    for (const auto& p : s.points)
        EXPECT_LT(distance_to_curve(CurveSpec::parabola(), lambda, static_cast<double>(p.x), static_cast<double>(p.y)),
                  delta);
}

TEST(CurveNeighborhood, EllipseDistance)
{
    const CurveSpec e = CurveSpec::ellipse(2.0, 1.0);
    EXPECT_NEAR(distance_to_curve(e, 10.0, 25.0, 0.0), 5.0, 1e-9);
    EXPECT_NEAR(distance_to_curve(e, 10.0, 0.0, 13.0), 3.0, 1e-9);
    EXPECT_NEAR(distance_to_curve(e, 10.0, 0.0, 0.0), 10.0, 1e-9);
    const LatticeSet s = enumerate_curve_neighborhood(e, 10.0, 0.3);
    EXPECT_TRUE(s.contains({20, 0}));
    EXPECT_TRUE(s.contains({0, -10}));
    for (const auto& p : s.points)
        EXPECT_LT(distance_to_curve(e, 10.0, static_cast<double>(p.x), static_cast<double>(p.y)), 0.3);
}

TEST(CurveNeighborhood, ErrorPaths)
{
    EXPECT_THROW(enumerate_curve_neighborhood(CurveSpec::ellipse(-1.0, 1.0), 10.0, 0.1), ArgumentError);
    EXPECT_THROW(enumerate_curve_neighborhood(CurveSpec::parabola(1.0, -1.0), 10.0, 0.1), ArgumentError);
}
