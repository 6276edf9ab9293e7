#include "annulus_lab/kernel.hpp"
#include "annulus_lab/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace annulus_lab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

FourierSupport random_support(std::uint64_t seed, double lambda_max)
{
    CounterRng rng(seed, 7);
    const double lambda = 3.0 + rng.uniform() * (lambda_max - 3.0);
    const double delta = 0.2 + rng.uniform() * 2.0;
    LatticeSet set = enumerate_annulus({lambda, delta});
    std::vector<complex> a;
    for (std::size_t i = 0; i < set.size(); ++i)
        a.emplace_back(rng.uniform() * 2 - 1, rng.uniform() * 2 - 1);
    return FourierSupport::with_coefficients(set.points, std::move(a));
}

} // namespace

TEST(Synthesize, SingleCharacterHasUnitModulus)
{
    const FourierSupport f = FourierSupport::all_ones(LatticeSet::from_points({{1, 0}}));
    const KernelGrid g = synthesize(f);
    for (const auto& v : g.samples)
        ASSERT_NEAR(std::abs(v), 1.0, 1e-12);
}

TEST(Synthesize, EmptySupportIsZero)
{
    const KernelGrid g = synthesize(FourierSupport{});
    for (const auto& v : g.samples)
        ASSERT_EQ(v, complex(0.0, 0.0));
}

TEST(Synthesize, OriginEqualsPointCount)
{
    const FourierSupport f = FourierSupport::all_ones(enumerate_annulus({5.0, 0.5}));
    const KernelGrid g = synthesize(f);
    EXPECT_NEAR(g.at(0, 0).real(), 28.0, 1e-10);
    EXPECT_GE(g.N, static_cast<std::size_t>(2 * g.max_freq + 2));
    EXPECT_EQ(g.N & (g.N - 1), 0u);
    // symmetric support with real coefficients: real samples
    for (const auto& v : g.samples)
        ASSERT_LE(std::abs(v.imag()), 1e-9 * 28.0);
}

TEST(Synthesize, MatchesDirectEvaluation)
{
    const FourierSupport f = random_support(3, 20.0);
    const KernelGrid g = synthesize(f, 2.0);
    for (std::size_t i = 0; i < g.N; i += 7)
        for (std::size_t j = 0; j < g.N; j += 5) {
            const complex direct = f.evaluate(static_cast<double>(i) / g.N, static_cast<double>(j) / g.N);
            ASSERT_NEAR(std::abs(direct - g.at(i, j)), 0.0, 1e-9);
        }
}

TEST(Synthesize, CapacityAndArguments)
{
    GridOptions small;
    small.max_samples = 1024;
    EXPECT_THROW(synthesize(FourierSupport::all_ones(enumerate_annulus({50.0, 1.0})), small), CapacityError);
    EXPECT_THROW(synthesize(FourierSupport{}, 1.5), ArgumentError);
}

TEST(LpNorm, SinglePointIsOne)
{
    const FourierSupport f = FourierSupport::all_ones(LatticeSet::from_points({{3, -2}}));
    for (double p : {2.0, 3.0, 4.0, 6.0, 7.5, kInf})
        EXPECT_NEAR(lp_norm(f, p).value, 1.0, 1e-12) << p;
}

TEST(LpNorm, AnnulusExamples)
{
    const FourierSupport f = FourierSupport::all_ones(enumerate_annulus({5.0, 0.5}));
    const NormReport two = parseval_norm(f);
    EXPECT_EQ(two.method, NormMethod::parseval);
    EXPECT_NEAR(two.value, std::sqrt(28.0), 1e-14);
    EXPECT_NEAR(lp_norm(f, 2.0).value, std::sqrt(28.0), 1e-12);
    const NormReport sup = lp_norm(f, kInf);
    EXPECT_NEAR(sup.value, 28.0, 1e-10);
    EXPECT_GE(sup.error_estimate, 0.0);
}

TEST(LpNorm, ParsevalOnRandomSupports)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const FourierSupport f = random_support(seed, 200.0);
        const double exact = parseval_norm(f).value;
        const double grid = lp_norm(f, 2.0).value;
        EXPECT_LE(std::abs(grid - exact) / exact, 1e-9) << seed;
    }
}

TEST(LpNorm, MonotoneInP)
{
    const FourierSupport f = random_support(11, 40.0);
    const KernelGrid g = synthesize(f);
    double prev = 0.0;
    for (double p : {2.0, 2.5, 3.0, 4.0, 6.0, 8.0, 12.0, kInf}) {
        const double v = lp_norm(g, p).value;
        EXPECT_GE(v, prev * (1 - 1e-12)) << p;
        prev = v;
    }
}

TEST(LpNorm, StreamingAgreesWithGrid)
{
    const FourierSupport f = random_support(5, 60.0);
    const std::vector<double> ps{2.0, 3.0, 4.0, 6.0, kInf};
    const auto many = lp_norms(f, ps);
    const KernelGrid g = synthesize(f);
    ASSERT_EQ(many.size(), ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i)
        EXPECT_NEAR(many[i].value, lp_norm(g, ps[i]).value, 1e-10 * many[i].value) << ps[i];
}

TEST(LpNorm, OversamplingStability)
{
    const FourierSupport f = FourierSupport::all_ones(enumerate_annulus({30.0, 1.0}));
    for (double p : {3.0, 4.0, 5.0, 6.0, 8.0}) {
        const NormReport coarse = lp_norm(f, p, GridOptions{2.0});
        const NormReport fine = lp_norm(f, p, GridOptions{4.0});
        EXPECT_LE(std::abs(coarse.value - fine.value), coarse.error_estimate + 1e-12 * fine.value) << p;
    }
}

TEST(LpNorm, TranslationInvariance)
{
    FourierSupport f = random_support(8, 50.0);
    const double x0 = 0.3172, y0 = 0.8101;
    FourierSupport g = f;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double ph = 2 * std::numbers::pi * (g.points[i].x * x0 + g.points[i].y * y0);
        g.coefficients[i] *= complex(std::cos(ph), std::sin(ph));
    }
    for (double p : {2.0, 4.0, 6.0})
        EXPECT_NEAR(lp_norm(f, p).value, lp_norm(g, p).value, 1e-9 * lp_norm(f, p).value) << p;
    // odd exponents go through quadrature, so agreement is only up to its error estimate
    const NormReport a = lp_norm(f, 5.0), b = lp_norm(g, 5.0);
    EXPECT_NEAR(a.value, b.value, 1e-4 * a.value);
    // frequency shift leaves |f| unchanged
    const FourierSupport h = f.shifted({3, -4});
    EXPECT_NEAR(lp_norm(f, 6.0).value, lp_norm(h, 6.0).value, 1e-9 * lp_norm(f, 6.0).value);
}

TEST(LpNorm, EvenPowerErrorIsSmall)
{
    const FourierSupport f = FourierSupport::all_ones(enumerate_annulus({40.0, 0.7}));
    const NormReport r = lp_norm(f, 4.0);
    EXPECT_LT(r.power_error, 1e-6 * std::pow(r.value, 4.0));
}

TEST(LpNorm, RejectsBadP)
{
    const FourierSupport f = FourierSupport::all_ones(LatticeSet::from_points({{1, 0}}));
    EXPECT_THROW(lp_norm(f, 1.5), ArgumentError);
    EXPECT_THROW(lp_norm(f, std::nan("")), ArgumentError);
}

TEST(Ratio, Examples)
{
    const FourierSupport one = FourierSupport::all_ones(LatticeSet::from_points({{0, 7}}));
    EXPECT_NEAR(ratio_2_to_p(one, 5.0), 1.0, 1e-12);
    const FourierSupport sph = FourierSupport::all_ones(enumerate_annulus({12.0, 0.9}));
    EXPECT_NEAR(ratio_2_to_p(sph, 2.0), 1.0, 1e-12);
    EXPECT_THROW(ratio_2_to_p(FourierSupport{}, 4.0), ArgumentError);
}

TEST(Knapp, SinglePointOnThinCircle)
{
    const FourierSupport k = knapp_support(AnnulusSpec{5.0, 0.01});
    ASSERT_EQ(k.size(), 1u);
    EXPECT_EQ(k.points[0], (IntPoint{5, 0}));
    EXPECT_TRUE(knapp_support(AnnulusSpec{4.6, 0.01}).empty());
}

TEST(Knapp, SupremumLimit)
{
    const AnnulusSpec spec{1024.0, std::pow(1024.0, -1.0 / 3.0)};
    const FourierSupport k = knapp_support(spec);
    const auto n = static_cast<double>(k.size());
    ASSERT_GT(n, 1.0);
    EXPECT_LE(n, 2.0 * std::sqrt(spec.lambda * spec.delta) + 1.0);
    EXPECT_NEAR(ratio_2_to_p(k, kInf), std::sqrt(n), 1e-9);
    // half-open sectors can shift a boundary point when the cap is rotated
    const FourierSupport r = knapp_support(spec, std::numbers::pi / 2);
    EXPECT_LE(std::abs(static_cast<double>(r.size()) - n), 2.0);
}
