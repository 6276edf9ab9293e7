#include "annulus_lab/energy.hpp"
#include "annulus_lab/rng.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace annulus_lab;

namespace {

u128 brute_energy2(const std::vector<IntPoint>& a)
{
    std::map<IntPoint, std::uint64_t> r;
    for (const auto& x : a)
        for (const auto& y : a)
            ++r[x + y];
    u128 e = 0;
    for (const auto& [v, c] : r)
        e += static_cast<u128>(c) * c;
    return e;
}

// Quintuple loop, the sixth element is determined and checked for membership.
u128 brute_energy3(const LatticeSet& s)
{
    const auto& a = s.points;
    u128 e = 0;
    for (const auto& x1 : a)
        for (const auto& x2 : a)
            for (const auto& x3 : a)
                for (const auto& y1 : a)
                    for (const auto& y2 : a)
                        e += s.contains(x1 + x2 + x3 - y1 - y2) ? 1 : 0;
    return e;
}

LatticeSet random_set(std::uint64_t seed, std::size_t max_points)
{
    CounterRng rng(seed, 3);
    const auto n = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(max_points)));
    const std::int64_t R = rng.integer(2, 60);
    std::vector<IntPoint> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({rng.integer(-R, R), rng.integer(-R, R)});
    return LatticeSet::from_points(std::move(pts));
}

EnergyOptions forced(EnergyMethod m)
{
    EnergyOptions o;
    o.method = m;
    return o;
}

const EnergyMethod kPaths[] = {EnergyMethod::hash, EnergyMethod::dense_convolution, EnergyMethod::transform_convolution};

} // namespace

TEST(Sumset, SinglePoint)
{
    const LatticeSet s = LatticeSet::from_points({{2, -3}});
    for (auto m : kPaths) {
        const SumsetCounts r = sumset_counts(s, 2, forced(m));
        EXPECT_EQ(r.at({4, -6}), 1u);
        EXPECT_EQ(r.total_mass, 1u);
        EXPECT_EQ(r.support_size, 1u);
    }
}

TEST(Sumset, TwoPoints)
{
    const LatticeSet s = LatticeSet::from_points({{1, 0}, {0, 1}});
    for (auto m : kPaths) {
        const SumsetCounts r = sumset_counts(s, 2, forced(m));
        EXPECT_EQ(r.at({2, 0}), 1u);
        EXPECT_EQ(r.at({1, 1}), 2u);
        EXPECT_EQ(r.at({0, 2}), 1u);
        EXPECT_EQ(r.total_mass, 4u);
        EXPECT_EQ(r.support_size, 3u);
    }
}

TEST(Sumset, TwelvePointCircle)
{
    const LatticeSet s = enumerate_annulus({5.0, 0.01});
    for (auto m : kPaths) {
        const SumsetCounts r = sumset_counts(s, 2, forced(m));
        EXPECT_EQ(r.total_mass, 144u);
        EXPECT_EQ(r.at({0, 0}), 12u);
        r.for_each([&](IntPoint v, std::uint64_t c) { EXPECT_EQ(c, r.at(-v)); });
    }
}

TEST(Sumset, OrderOneAndThreeMass)
{
    const LatticeSet s = random_set(42, 40);
    const auto P = static_cast<u128>(s.size());
    for (auto m : kPaths) {
        EXPECT_EQ(sumset_counts(s, 1, forced(m)).total_mass, P);
        EXPECT_EQ(sumset_counts(s, 3, forced(m)).total_mass, P * P * P);
    }
    EXPECT_THROW(sumset_counts(s, 4), ArgumentError);
}

TEST(Sumset, ForEachIsLexicographic)
{
    const LatticeSet s = random_set(9, 30);
    for (auto m : kPaths) {
        std::vector<IntPoint> order;
        sumset_counts(s, 2, forced(m)).for_each([&](IntPoint v, std::uint64_t) { order.push_back(v); });
        EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));
    }
}

TEST(Energy, SmallExamples)
{
    EXPECT_EQ(additive_energy(LatticeSet::from_points({{7, 7}}), 2).energy, 1u);
    EXPECT_EQ(additive_energy(LatticeSet::from_points({{1, 0}, {0, 1}}), 2).energy, 6u);
    EXPECT_EQ(additive_energy(LatticeSet::from_points({{1, 0}, {0, 1}}), 3).energy, 20u);
    EXPECT_EQ(additive_energy(enumerate_annulus({4.6, 0.01}), 3).energy, 0u);
}

TEST(Energy, TwelvePointCircleRegression)
{
    const LatticeSet s = enumerate_annulus({5.0, 0.01});
    const u128 e3 = brute_energy3(s);
    const u128 e2 = brute_energy2(s.points);
    EXPECT_EQ(to_decimal(e3), "21360");
    EXPECT_EQ(to_decimal(e2), "396");
    for (auto m : kPaths) {
        EXPECT_EQ(additive_energy(s, 3, forced(m)).energy, e3);
        EXPECT_EQ(additive_energy(s, 2, forced(m)).energy, e2);
    }
}

TEST(Energy, PathsAgreeOnRandomSets)
{
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const LatticeSet s = random_set(seed, 120);
        for (int m : {2, 3}) {
            const u128 ref = additive_energy(s, m, forced(EnergyMethod::hash)).energy;
            EXPECT_EQ(additive_energy(s, m, forced(EnergyMethod::dense_convolution)).energy, ref);
            EXPECT_EQ(additive_energy(s, m, forced(EnergyMethod::transform_convolution)).energy, ref);
            EXPECT_EQ(additive_energy(s, m).energy, ref);
        }
        EXPECT_EQ(additive_energy(s, 2).energy, brute_energy2(s.points));
    }
}

TEST(Energy, DiagonalAndCauchySchwarzFloors)
{
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const LatticeSet s = random_set(seed, 200);
        const auto P = static_cast<u128>(s.size());
        for (int m : {2, 3}) {
            const EnergyReport e = additive_energy(s, m);
            EXPECT_GE(e.energy, ipow(P, m));
            EXPECT_GE(e.energy * e.support_size, ipow(P, 2 * m));
            EXPECT_GE(e.diagonal_ratio(), 1.0 - 1e-12);
            EXPECT_GE(e.cauchy_schwarz_ratio(), 1.0 - 1e-12);
        }
    }
}

TEST(Energy, Errors)
{
    const LatticeSet s = random_set(1, 5);
    EXPECT_THROW(additive_energy(s, 1), ArgumentError);
    EXPECT_THROW(additive_energy(s, 4), ArgumentError);
    EnergyOptions tiny = forced(EnergyMethod::dense_convolution);
    tiny.max_dense_cells = 4;
    // only the materialised sumset is bounded by the cell cap; the energy streams rows
    EXPECT_THROW(sumset_counts(s, 2, tiny), CapacityError);
    EXPECT_NO_THROW(additive_energy(s, 2, tiny));
}

TEST(Energy, DecimalConversion)
{
    EXPECT_EQ(to_decimal(0), "0");
    EXPECT_EQ(to_decimal(ipow(10, 30)), "1000000000000000000000000000000");
    EXPECT_EQ(to_decimal(~u128{0}), "340282366920938463463374607431768211455");
}

TEST(Crosscheck, Examples)
{
    const CrosscheckRecord one = energy_lp_crosscheck(LatticeSet::from_points({{0, 0}}), 4);
    EXPECT_EQ(one.energy, 1u);
    EXPECT_NEAR(one.quadrature, 1.0, 1e-12);
    EXPECT_FALSE(one.flagged);
    const CrosscheckRecord two = energy_lp_crosscheck(LatticeSet::from_points({{1, 0}, {0, 1}}), 4);
    EXPECT_EQ(two.energy, 6u);
    EXPECT_NEAR(two.quadrature, 6.0, 1e-9);
    EXPECT_LE(std::abs(two.quadrature - 6.0), two.power_error);
    for (int p : {4, 6}) {
        const CrosscheckRecord r = energy_lp_crosscheck(enumerate_annulus({5.0, 0.5}), p);
        EXPECT_LE(r.relative_difference, 1e-3);
        EXPECT_FALSE(r.flagged);
    }
    EXPECT_THROW(energy_lp_crosscheck(LatticeSet::from_points({{0, 0}}), 5), ArgumentError);
}
