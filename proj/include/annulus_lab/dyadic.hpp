#pragma once

// Mollified symbol of the annulus, its Poisson-summation dual, the circle
// transform J and the dyadic exponential sums S_{λ,M,x}.
//
// Convention: f̂(ξ) = ∫ f(x) e^{−2πi x·ξ} dx. Under it the arc-length measure
// of the unit circle has transform J(|ξ|) = 2π·J₀(2π|ξ|), and every phase is
// 2π-scaled (e^{2πiλ|y|} rather than e^{iλ|y|}).

#include "annulus_lab/errors.hpp"
#include "annulus_lab/lattice.hpp"
#include "annulus_lab/parallel.hpp"
#include "annulus_lab/rng.hpp"
#include "annulus_lab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace annulus_lab {

namespace detail {

constexpr long double bessel_series_limit = 20.0L;

inline long double j0_series(long double z)
{
    const long double q = -(z * z) / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-22L * std::max(1.0L, std::abs(sum)))
            break;
    }
    return sum;
}

/// Hankel expansion J₀(z) ~ (2/πz)^{1/2} (P cos(z−π/4) − Q sin(z−π/4)),
/// summed until the terms stop shrinking.
inline long double j0_asymptotic(long double z)
{
    long double t = 1.0L, P = 1.0L, Q = 0.0L;
    long double prev = std::numeric_limits<long double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const long double odd = 2.0L * k - 1.0L;
        t *= -(odd * odd) / (8.0L * k * z);
        if (std::abs(t) >= prev || std::abs(t) < 1e-22L)
            break;
        prev = std::abs(t);
        // a_k/z^k enters P with sign (−1)^{k/2} for even k, Q with (−1)^{(k−1)/2} for odd k.
        if (k % 2 == 0)
            P += (k % 4 == 0) ? t : -t;
        else
            Q += (k % 4 == 1) ? t : -t;
    }
    const long double chi = z - std::numbers::pi_v<long double> / 4.0L;
    return std::sqrt(2.0L / (std::numbers::pi_v<long double> * z)) * (P * std::cos(chi) - Q * std::sin(chi));
}

} // namespace detail

/// J₀ by power series (extended precision) for z ≤ 20 and by the Hankel
/// expansion beyond.
inline double bessel_j0(double z)
{
    const long double a = std::abs(static_cast<long double>(z));
    return static_cast<double>(a <= detail::bessel_series_limit ? detail::j0_series(a) : detail::j0_asymptotic(a));
}

/// Transform of the unit circle's arc-length measure at radius r: 2π·J₀(2πr).
inline double bessel_J(double r)
{
    if (!(r >= 0.0))
        throw ArgumentError("bessel_J: r must be nonnegative");
    return 2.0 * std::numbers::pi * bessel_j0(2.0 * std::numbers::pi * r);
}

// Per-coordinate profile κ(t) = (3/4)·sinc⁴(t/2), sinc(u) = sin(πu)/(πu).
// κ > 0 off the zeros t ∈ 2ℤ∖{0}, ∫κ = 1, and κ̂(ξ) = (3/2)·B(2ξ) with B the
// centred cubic B-spline (triangle * triangle), so κ̂ vanishes for |ξ| ≥ 1.
inline double kappa(double t)
{
    const double u = 0.5 * std::numbers::pi * t;
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        const double s = 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
        const double s2 = s * s;
        return 0.75 * s2 * s2;
    }
    const double s = std::sin(u) / u;
    const double s2 = s * s;
    return 0.75 * s2 * s2;
}

inline double kappa_hat(double xi)
{
    const double a = std::abs(2.0 * xi);
    double b = 0.0;
    if (a < 1.0)
        b = 2.0 / 3.0 - a * a + 0.5 * a * a * a;
    else if (a < 2.0) {
        const double c = 2.0 - a;
        b = c * c * c / 6.0;
    }
    return 1.5 * b;
}

/// χ̂_{λ,δ}(ξ) = λδ·J(λ|ξ|)·κ̂(δξ₁)κ̂(δξ₂).
inline double chi_hat(double lambda, double delta, double xi1, double xi2)
{
    const double k1 = kappa_hat(delta * xi1);
    if (k1 == 0.0)
        return 0.0;
    const double k2 = kappa_hat(delta * xi2);
    if (k2 == 0.0)
        return 0.0;
    return lambda * delta * bessel_J(lambda * std::hypot(xi1, xi2)) * k1 * k2;
}

struct ChiValue
{
    double value = 0.0;
    double check = 0.0; // |T_n − T_{n/2}| for the trapezoid rule on n nodes
};

/// χ_{λ,δ}(k) = δ⁻¹ ∫ χ((k−y)/δ) dσ_λ(y) by the n-node trapezoid rule in the
/// angle. The rule on every other node comes free and gives the check value.
class CircleQuadrature
{
public:
    CircleQuadrature(double lambda, double delta, std::size_t nodes = 10'000)
        : lambda_(lambda), delta_(delta)
    {
        if (!(lambda > 0.0) || !(delta > 0.0))
            throw ArgumentError("circle quadrature: lambda and delta must be positive");
        if (nodes < 4 || nodes % 2 != 0)
            throw ArgumentError("circle quadrature: node count must be even and at least 4");
        cos_.resize(nodes);
        sin_.resize(nodes);
        for (std::size_t j = 0; j < nodes; ++j) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nodes);
            cos_[j] = lambda * std::cos(th);
            sin_[j] = lambda * std::sin(th);
        }
    }

    ChiValue operator()(double k1, double k2) const
    {
        const double inv = 1.0 / delta_;
        double even = 0.0, odd = 0.0;
        for (std::size_t j = 0; j < cos_.size(); j += 2) {
            even += kappa((k1 - cos_[j]) * inv) * kappa((k2 - sin_[j]) * inv);
            odd += kappa((k1 - cos_[j + 1]) * inv) * kappa((k2 - sin_[j + 1]) * inv);
        }
        // dσ_λ has total mass 2πλ; δ⁻¹ from the profile's scaling.
        const double w = 2.0 * std::numbers::pi * lambda_ / static_cast<double>(cos_.size()) * inv;
        ChiValue v;
        v.value = w * (even + odd);
        v.check = std::abs(v.value - 2.0 * w * even);
        return v;
    }

    std::size_t nodes() const { return cos_.size(); }

private:
    double lambda_, delta_;
    std::vector<double> cos_, sin_;
};

/// χ_{λ,δ} with its positivity constant on the annulus, verified when built.
struct Mollifier
{
    double lambda = 0.0;
    double delta = 0.0;
    std::size_t nodes = 0;
    double positivity_constant = 0.0; // min of χ_{λ,δ} over the annulus' lattice points
    double quadrature_check = 0.0;    // max trapezoid check value over those points
    std::size_t annulus_points = 0;
};

inline Mollifier make_mollifier(double lambda, double delta, std::size_t nodes = 10'000)
{
    const AnnulusSpec spec{lambda, delta};
    spec.validate();
    const LatticeSet set = enumerate_annulus(spec);
    const CircleQuadrature quad(lambda, delta, nodes);
    Mollifier m;
    m.lambda = lambda;
    m.delta = delta;
    m.nodes = nodes;
    m.annulus_points = set.size();
    std::vector<ChiValue> vals(set.size());
    parallel_for(set.size(), [&](std::size_t i) {
        vals[i] = quad(static_cast<double>(set.points[i].x), static_cast<double>(set.points[i].y));
    });
    m.positivity_constant = std::numeric_limits<double>::infinity();
    for (const auto& v : vals) {
        m.positivity_constant = std::min(m.positivity_constant, v.value);
        m.quadrature_check = std::max(m.quadrature_check, v.check);
    }
    if (set.empty())
        m.positivity_constant = 0.0;
    else if (!(m.positivity_constant > 0.0))
        throw IntegrityError("mollifier is not positive on the annulus");
    return m;
}

// Smooth partition of unity on [0, ∞): b = 1 on [0,1], 0 on [2,∞), with the
// C^∞ transition built from e^{−1/t}. ψ(r) = b(r) − b(2r) lives on [1/2, 2];
// φ(r) = b(2r), and φ(r) + Σ_{M=1,2,4,…} ψ(r/M) telescopes to 1.
inline double smooth_step_bump(double r)
{
    if (r <= 1.0)
        return 1.0;
    if (r >= 2.0)
        return 0.0;
    const double t = r - 1.0;
    const double a = std::exp(-1.0 / (1.0 - t));
    const double b = std::exp(-1.0 / t);
    return a / (a + b);
}

inline double partition_phi(double r) { return smooth_step_bump(2.0 * r); }

inline double partition_psi(double r) { return smooth_step_bump(r) - smooth_step_bump(2.0 * r); }

/// |φ(r) + Σ_{M ≤ M_top} ψ(r/M) − 1| with M_top the first power of two ≥ r.
inline double partition_residual(double r)
{
    double s = partition_phi(r);
    for (double M = 1.0;; M *= 2.0) {
        s += partition_psi(r / M);
        if (M >= r)
            break;
    }
    return std::abs(s - 1.0);
}

enum class PhiMode { spectral, spatial };

/// Values χ_{λ,δ}(k) for ||k| − λ| ≤ W, reusable across evaluation points.
struct SpectralTable
{
    double lambda = 0.0, delta = 0.0, width = 0.0;
    std::vector<IntPoint> points;
    std::vector<double> values;
    double quadrature_check = 0.0;
};

/// Default spectral width: χ_{λ,δ}(k) decays like (δ/d)⁴ at distance d from
/// the circle, so the tail beyond W is O(λδ⁴/W³).
inline double default_spectral_width(double lambda, double delta, double tolerance = 1e-7)
{
    return std::max(4.0, std::cbrt(0.01 * lambda * std::pow(delta, 4) / tolerance));
}

inline SpectralTable spectral_table(double lambda, double delta, double width, std::size_t nodes = 10'000,
                                    std::size_t capacity = 2'000'000)
{
    if (!(width > 0.0))
        throw ArgumentError("spectral table: width must be positive");
    const double r_lo = std::max(0.0, lambda - width);
    const double r_hi = lambda + width;
    const double area = std::numbers::pi * (r_hi * r_hi - r_lo * r_lo);
    if (area > static_cast<double>(capacity))
        throw CapacityError("spectral table: about " + std::to_string(static_cast<long long>(area)) + " frequencies");
    SpectralTable t;
    t.lambda = lambda;
    t.delta = delta;
    t.width = width;
    const auto R = static_cast<std::int64_t>(std::ceil(r_hi));
    for (std::int64_t a = -R; a <= R; ++a)
        for (std::int64_t b = -R; b <= R; ++b) {
            const double r = std::hypot(static_cast<double>(a), static_cast<double>(b));
            if (std::abs(r - lambda) <= width)
                t.points.push_back({a, b});
        }
    const CircleQuadrature quad(lambda, delta, nodes);
    std::vector<ChiValue> vals(t.points.size());
    parallel_for(t.points.size(), [&](std::size_t i) {
        vals[i] = quad(static_cast<double>(t.points[i].x), static_cast<double>(t.points[i].y));
    });
    t.values.resize(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        t.values[i] = vals[i].value;
        t.quadrature_check = std::max(t.quadrature_check, vals[i].check);
    }
    return t;
}

inline std::complex<double> phi_flat_spectral(const SpectralTable& t, double x1, double x2)
{
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        // Reduce the phase mod 1 before scaling by 2π.
        double ph = static_cast<double>(t.points[i].x) * x1 + static_cast<double>(t.points[i].y) * x2;
        ph -= std::floor(ph);
        s += t.values[i] * std::polar(1.0, 2.0 * std::numbers::pi * ph);
    }
    return s;
}

/// Σ_{m ∈ ℤ², |m−x| ≤ radius} χ̂_{λ,δ}(m − x). χ̂ vanishes once a coordinate
/// reaches 1/δ, so any radius ≥ √2/δ gives the full sum.
inline std::complex<double> phi_flat_spatial(double lambda, double delta, double x1, double x2,
                                             std::optional<double> radius = std::nullopt)
{
    const double rad = radius.value_or(std::numbers::sqrt2 / delta + 1.0);
    if (!(rad >= 4.0))
        throw ArgumentError("phi_flat: spatial truncation radius must be at least 4");
    const double reach = std::min(rad, 1.0 / delta);
    const auto lo1 = static_cast<std::int64_t>(std::floor(x1 - reach));
    const auto hi1 = static_cast<std::int64_t>(std::ceil(x1 + reach));
    const auto lo2 = static_cast<std::int64_t>(std::floor(x2 - reach));
    const auto hi2 = static_cast<std::int64_t>(std::ceil(x2 + reach));
    if (static_cast<double>(hi1 - lo1 + 1) * static_cast<double>(hi2 - lo2 + 1) > 1e9)
        throw CapacityError("phi_flat: spatial sum too large");
    double s = 0.0;
    for (std::int64_t a = lo1; a <= hi1; ++a) {
        const double d1 = static_cast<double>(a) - x1;
        if (kappa_hat(delta * d1) == 0.0)
            continue;
        for (std::int64_t b = lo2; b <= hi2; ++b) {
            const double d2 = static_cast<double>(b) - x2;
            if (d1 * d1 + d2 * d2 > rad * rad)
                continue;
            s += chi_hat(lambda, delta, d1, d2);
        }
    }
    return s;
}

inline std::complex<double> phi_flat(double lambda, double delta, double x1, double x2, PhiMode mode,
                                     std::optional<double> truncation = std::nullopt)
{
    if (!(lambda > 0.0) || !(delta > 0.0))
        throw ArgumentError("phi_flat: lambda and delta must be positive");
    if (mode == PhiMode::spatial)
        return phi_flat_spatial(lambda, delta, x1, x2, truncation);
    const double w = truncation.value_or(default_spectral_width(lambda, delta));
    return phi_flat_spectral(spectral_table(lambda, delta, w), x1, x2);
}

// Van der Corput parameters behind the exponential-sum bound: q = 3,
// Q = 2^q, ω = 2/(4(Q−1) + 2Q) = 1/22. The bound is λ^{1/2+ω}·δ·M^{3/2−4ω}.
struct MullerParameters
{
    static constexpr int q = 3;
    static constexpr int Q = 1 << q;
    static constexpr double omega = 2.0 / (4.0 * (Q - 1) + 2.0 * Q);
    static constexpr double lambda_exponent = 0.5 + omega; // 6/11
    static constexpr double M_exponent = 1.5 - 4.0 * omega; // 29/22
};

inline double trivial_bound(double lambda, double delta, double M)
{
    return std::sqrt(lambda) * delta * std::pow(M, 1.5);
}

inline double muller_bound(double lambda, double delta, double M)
{
    return std::pow(lambda, MullerParameters::lambda_exponent) * delta * std::pow(M, MullerParameters::M_exponent);
}

struct ExpSumSample
{
    double lambda = 0.0, delta = 0.0, M = 0.0;
    double x1 = 0.0, x2 = 0.0;
    std::complex<double> value;
    double trivial_bound = 0.0;
    double muller_bound = 0.0;
    std::size_t count = 0;      // lattice points with ψ((n−x)/M) ≠ 0
    double absolute_sum = 0.0;  // λ^{1/2}δ Σ |ψ((n−x)/M)| ⟨n−x⟩^{−1/2}
    double c_psi = 0.0;         // sup|ψ|·(count/M²)·(M/⟨M/2⟩)^{1/2}
    bool regime_warning = false; // M > 1/δ
};

/// S_{λ,M,x} = λ^{1/2}δ Σ_n ψ(|n−x|/M) e^{2πiλ|n−x|} ⟨n−x⟩^{−1/2}, ⟨y⟩ = (1+|y|²)^{1/2}.
inline ExpSumSample exp_sum_S(double lambda, double delta, double M, double x1, double x2)
{
    if (!(lambda > 0.0) || !(delta > 0.0) || !(M > 0.0))
        throw ArgumentError("exp_sum_S: lambda, delta and M must be positive");
    ExpSumSample s;
    s.lambda = lambda;
    s.delta = delta;
    s.M = M;
    s.x1 = x1;
    s.x2 = x2;
    s.trivial_bound = trivial_bound(lambda, delta, M);
    s.muller_bound = muller_bound(lambda, delta, M);
    s.regime_warning = M * delta > 1.0;
    if ((2.0 * M + 2.0) * (2.0 * M + 2.0) * 4.0 > 4e9)
        throw CapacityError("exp_sum_S: M too large for direct summation");

    const double outer = 2.0 * M;
    const auto lo1 = static_cast<std::int64_t>(std::ceil(x1 - outer));
    const auto hi1 = static_cast<std::int64_t>(std::floor(x1 + outer));
    const double inv_m = 1.0 / M;
    double re = 0.0, im = 0.0, abs_sum = 0.0;
    std::size_t count = 0;
    for (std::int64_t a = lo1; a <= hi1; ++a) {
        const double d1 = static_cast<double>(a) - x1;
        const double rem = outer * outer - d1 * d1;
        if (rem <= 0.0)
            continue;
        const double reach = std::sqrt(rem);
        const auto lo2 = static_cast<std::int64_t>(std::ceil(x2 - reach));
        const auto hi2 = static_cast<std::int64_t>(std::floor(x2 + reach));
        double row_re = 0.0, row_im = 0.0, row_abs = 0.0;
        for (std::int64_t b = lo2; b <= hi2; ++b) {
            const double d2 = static_cast<double>(b) - x2;
            const double r2 = d1 * d1 + d2 * d2;
            const double r = std::sqrt(r2);
            const double w = partition_psi(r * inv_m);
            if (w == 0.0)
                continue;
            ++count;
            const double amp = w / std::sqrt(std::sqrt(1.0 + r2));
            double ph = lambda * r;
            ph -= std::floor(ph);
            const double ang = 2.0 * std::numbers::pi * ph;
            row_re += amp * std::cos(ang);
            row_im += amp * std::sin(ang);
            row_abs += amp;
        }
        re += row_re;
        im += row_im;
        abs_sum += row_abs;
    }
    const double pre = std::sqrt(lambda) * delta;
    s.value = {pre * re, pre * im};
    s.absolute_sum = pre * abs_sum;
    s.count = count;
    const double half = 0.5 * M;
    s.c_psi = (static_cast<double>(count) / (M * M)) * std::sqrt(M / std::sqrt(1.0 + half * half));
    return s;
}

struct DyadicRow
{
    double M = 0.0;
    double emp_sup = 0.0;
    double trivial = 0.0;
    double muller = 0.0;
    double ratio_trivial = 0.0;
    double ratio_muller = 0.0;
    double trivial_envelope = 0.0; // trivial·C_ψ, the triangle-inequality bound with its constant
};

struct DyadicReport
{
    double lambda = 0.0, delta = 0.0;
    std::size_t x_samples = 0;
    std::uint64_t seed = 0;
    std::vector<DyadicRow> rows;
    std::optional<FitResult> fit; // log emp_sup against log M over rows with emp_sup > 0
};

/// For every dyadic M ≤ 1/δ, the largest |S_{λ,M,x}| over seeded samples x ∈ [0,1)².
inline DyadicReport dyadic_bound_report(double lambda, double delta, std::size_t x_samples, std::uint64_t seed)
{
    if (!(lambda > 0.0) || !(delta > 0.0) || delta >= 1.0)
        throw ArgumentError("dyadic report: need lambda > 0 and 0 < delta < 1");
    if (x_samples == 0)
        throw ArgumentError("dyadic report: need at least one sample");
    DyadicReport rep;
    rep.lambda = lambda;
    rep.delta = delta;
    rep.x_samples = x_samples;
    rep.seed = seed;
    std::vector<double> xs(2 * x_samples);
    CounterRng rng(seed, 0x5e);
    for (auto& v : xs)
        v = rng.uniform();
    for (double M = 1.0; M * delta <= 1.0; M *= 2.0) {
        std::vector<double> mags(x_samples), c_psi(x_samples);
        parallel_for(x_samples, [&](std::size_t i) {
            const ExpSumSample s = exp_sum_S(lambda, delta, M, xs[2 * i], xs[2 * i + 1]);
            mags[i] = std::abs(s.value);
            c_psi[i] = s.c_psi;
        });
        DyadicRow row;
        row.M = M;
        row.emp_sup = *std::max_element(mags.begin(), mags.end());
        row.trivial = trivial_bound(lambda, delta, M);
        row.muller = muller_bound(lambda, delta, M);
        row.ratio_trivial = row.emp_sup / row.trivial;
        row.ratio_muller = row.emp_sup / row.muller;
        row.trivial_envelope = row.trivial * *std::max_element(c_psi.begin(), c_psi.end());
        rep.rows.push_back(row);
    }
    std::vector<double> ms, sups;
    for (const auto& r : rep.rows)
        if (r.emp_sup > 0.0) {
            ms.push_back(r.M);
            sups.push_back(r.emp_sup);
        }
    if (ms.size() >= 3)
        rep.fit = fit_loglog(ms, sups);
    return rep;
}

} // namespace annulus_lab
