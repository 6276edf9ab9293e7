#include "annulus_lab/caps.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <map>
#include <numeric>

using namespace annulus_lab;

namespace {

Cap make_cap(std::vector<IntPoint> pts, double angle)
{
    Cap c;
    c.center_angle = angle;
    c.points = std::move(pts);
    classify_cap(c);
    return c;
}

} // namespace

TEST(Partition, TwentyCapsAtCanonicalScale)
{
    const LatticeSet set = enumerate_annulus({5.0, 0.5});
    const double ell = canonical_cap_length({5.0, 0.5});
    EXPECT_NEAR(ell, std::sqrt(2.5), 1e-15);
    const CapPartition part = partition(set, ell);
    EXPECT_EQ(part.n_caps, 20u);
    EXPECT_EQ(part.caps.size(), 20u);
    EXPECT_EQ(part.total_points(), 28u);
}

TEST(Partition, EmptySet)
{
    const LatticeSet set = enumerate_annulus({4.6, 0.01});
    const CapPartition part = partition(set, 1.0);
    EXPECT_GT(part.n_caps, 0u);
    for (const auto& c : part.caps)
        EXPECT_EQ(c.count(), 0u);
    const CapCensus c = census(part);
    EXPECT_EQ(c.c0_caps, part.n_caps);
    EXPECT_EQ(c.total_points(), 0u);
    EXPECT_TRUE(c.caps_by_s.empty());
}

TEST(Partition, ThinCircleOnePointPerCap)
{
    const AnnulusSpec spec{5.0, 0.01};
    const CapPartition part = partition(enumerate_annulus(spec), canonical_cap_length(spec));
    std::size_t nonempty = 0;
    for (const auto& c : part.caps)
        if (c.count() > 0) {
            EXPECT_EQ(c.count(), 1u);
            ++nonempty;
        }
    EXPECT_EQ(nonempty, 12u);
}

TEST(Partition, ConservationAndSectorMembership)
{
    for (double ell : {0.5, 3.0, 10.0, 100.0}) {
        const LatticeSet set = enumerate_annulus({60.0, 1.5});
        const CapPartition part = partition(set, ell);
        std::vector<IntPoint> all;
        for (const auto& c : part.caps) {
            for (const auto& p : c.points) {
                all.push_back(p);
                double th = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x));
                // angular distance to the sector centre is at most half a sector
                double d = std::remainder(th - c.center_angle, 2.0 * std::numbers::pi);
                EXPECT_LE(std::abs(d), 0.5 * part.sector_width() + 1e-12);
            }
        }
        std::sort(all.begin(), all.end());
        EXPECT_EQ(all, set.points);
    }
}

TEST(Partition, ErrorPaths)
{
    const LatticeSet set = enumerate_annulus({5.0, 0.5});
    EXPECT_THROW(partition(set, 2.0 * std::numbers::pi * 5.0 + 1.0), ArgumentError);
    EXPECT_THROW(partition(set, 0.0), ArgumentError);
    EXPECT_THROW(partition(LatticeSet::from_points({{1, 1}}), 1.0), ArgumentError);
}

TEST(ClassifyCap, TwoPointsAlwaysCollinear)
{
    const Cap c = make_cap({{3, 4}, {4, 3}}, std::atan2(3.5, 3.5));
    EXPECT_TRUE(c.collinear);
    EXPECT_TRUE(c.equal_spacing);
    ASSERT_TRUE(c.direction);
    EXPECT_EQ(*c.direction, (IntPoint{1, -1}));
    ASSERT_TRUE(c.m_class);
    EXPECT_EQ(*c.m_class, 0);
    EXPECT_EQ(*c.s_class, 1);
    ASSERT_TRUE(c.alpha);
    EXPECT_NEAR(*c.alpha, 0.0, 1e-12); // the chord is tangent at the midpoint angle
}

TEST(ClassifyCap, ThreePointsNotCollinear)
{
    const Cap c = make_cap({{0, 5}, {3, 4}, {4, 3}}, std::atan2(4.0, 3.0));
    EXPECT_FALSE(c.collinear);
    EXPECT_FALSE(c.equal_spacing);
    EXPECT_FALSE(c.m_class);
    EXPECT_FALSE(c.direction);
}

TEST(ClassifyCap, EqualSpacingAndMClass)
{
    const Cap c = make_cap({{10, 0}, {10, 2}, {10, 4}, {10, 6}}, 0.0);
    EXPECT_TRUE(c.collinear);
    EXPECT_TRUE(c.equal_spacing);
    EXPECT_EQ(*c.direction, (IntPoint{0, 1}));
    EXPECT_EQ(*c.m_class, 1);
    EXPECT_EQ(*c.s_class, 2);
    const Cap d = make_cap({{10, 0}, {10, 2}, {10, 5}}, 0.0);
    EXPECT_TRUE(d.collinear);
    EXPECT_FALSE(d.equal_spacing);
    EXPECT_EQ(*d.m_class, 1);
}

TEST(Census, ConservationAtEveryScale)
{
    const LatticeSet set = enumerate_annulus({5.0, 0.5});
    for (double ell : {0.3, canonical_cap_length({5.0, 0.5}), 4.0, 31.0}) {
        const CapCensus c = census(partition(set, ell));
        EXPECT_EQ(c.total_points(), 28u);
    }
}

TEST(Census, RatiosFiniteAtLargerScale)
{
    const AnnulusSpec spec{1000.0, 0.05};
    const CapCensus c = census(partition(enumerate_annulus(spec), canonical_cap_length(spec)));
    EXPECT_TRUE(std::isfinite(c.max_ratio_s()));
    EXPECT_TRUE(std::isfinite(c.max_ratio_sm()));
    EXPECT_NEAR(c.threshold, 4.0 * (std::sqrt(1000.0) * std::pow(0.05, 1.5) + 1.0), 1e-12);
    // calibration value recorded from the pipeline at threshold constant 4
    EXPECT_LE(c.max_ratio_s(), 4.0);
}

TEST(Census, SmallScaleCapsAreArithmeticProgressions)
{
    // ℓδ < 1/2: caps with three or more points are collinear with equal spacing
    for (double lambda : {100.0, 400.0, 1500.0}) {
        const AnnulusSpec spec{lambda, 0.2};
        const CapPartition part = partition(enumerate_annulus(spec), 2.0);
        for (const auto& c : part.caps)
            if (c.count() >= 3) {
                EXPECT_TRUE(c.collinear);
                EXPECT_TRUE(c.equal_spacing);
            }
    }
}

TEST(Census, HeavyCapsSitOnTheirDirection)
{
    const AnnulusSpec spec{2000.0, 0.1};
    const CapPartition part = partition(enumerate_annulus(spec), canonical_cap_length(spec));
    const CapCensus cen = census(part, 1.0);
    std::size_t checked = 0;
    for (const auto& c : part.caps) {
        if (c.count() <= cen.threshold || !c.collinear || !c.direction)
            continue;
        const IntPoint d = *c.direction;
        EXPECT_EQ(std::gcd(std::abs(d.x), std::abs(d.y)), 1);
        for (std::size_t k = 1; k < c.points.size(); ++k) {
            const long long dx = c.points[k].x - c.points[0].x, dy = c.points[k].y - c.points[0].y;
            EXPECT_EQ(dx * d.y - dy * d.x, 0) << c.index;
        }
        ++checked;
    }
    EXPECT_GT(checked, 0u);
}

TEST(Census, ThresholdConstantDoesNotChangeSlope)
{
    // slope of the number of light caps against λ at α = 1/3
    std::vector<double> xs, slopes;
    for (double constant : {1.0, 4.0, 16.0}) {
        std::vector<double> x, y;
        for (double lambda = 128; lambda <= 2048; lambda *= 2) {
            const AnnulusSpec spec{lambda, std::pow(lambda, -1.0 / 3.0)};
            const CapCensus c = census(partition(enumerate_annulus(spec), canonical_cap_length(spec)), constant);
            x.push_back(std::log(lambda));
            y.push_back(std::log(static_cast<double>(c.c0_caps)));
        }
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
        }
        slopes.push_back(sxy / sxx);
    }
    const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
    EXPECT_LT(*hi - *lo, 0.1);
}

TEST(EtaCensus, MultiPointCapsOnLines)
{
    for (double lambda : {300.0, 1200.0, 2048.0}) {
        const AnnulusSpec spec{lambda, std::pow(lambda, -0.3)};
        const EtaCensus c = eta_regime_census(spec);
        EXPECT_TRUE(c.in_regime);
        EXPECT_EQ(c.records.size(), c.case2 + c.case3 + c.case4);
        for (const auto& r : c.records)
            EXPECT_GE(r.alpha, 0.0);
        EXPECT_NEAR(c.eccentricity, 100.0 * spec.delta * spec.delta, 1e-12);
    }
}

TEST(EtaCensus, NoMultiPointCaps)
{
    const EtaCensus c = eta_regime_census({5.0, 0.01});
    EXPECT_EQ(c.case2 + c.case3 + c.case4, 0u);
    EXPECT_EQ(c.count(EtaCase::single_point), 12u);
}

TEST(EtaCensus, ErrorPaths)
{
    EXPECT_THROW(eta_regime_census({5.0, 1e-4}), ArgumentError);
    EXPECT_THROW(eta_regime_census(LatticeSet::from_points({{1, 0}})), ArgumentError);
}
