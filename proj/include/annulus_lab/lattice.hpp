#pragma once

// Integer points in thin annuli and in metric neighbourhoods of dilated curves.
//
// Annulus membership is decided exactly: λ and δ are taken as the binary
// rationals their doubles represent, and the squared-norm window
// ((λ−δ)², (λ+δ)²) is resolved to integers with GMP rationals. Everything
// after that is integer arithmetic.

#include "annulus_lab/errors.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace annulus_lab {

inline constexpr std::int64_t kCoordinateLimit = std::int64_t{1} << 31;

struct IntPoint
{
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend constexpr auto operator<=>(const IntPoint&, const IntPoint&) = default;

    constexpr IntPoint operator+(IntPoint o) const noexcept { return {x + o.x, y + o.y}; }
    constexpr IntPoint operator-(IntPoint o) const noexcept { return {x - o.x, y - o.y}; }
    constexpr IntPoint operator-() const noexcept { return {-x, -y}; }
    constexpr std::int64_t norm2() const noexcept { return x * x + y * y; }
};

constexpr std::int64_t cross(IntPoint a, IntPoint b) noexcept { return a.x * b.y - a.y * b.x; }
constexpr std::int64_t dot(IntPoint a, IntPoint b) noexcept { return a.x * b.x + a.y * b.y; }

struct AnnulusSpec
{
    double lambda = 0.0;
    double delta = 0.0;

    void validate() const
    {
        if (!std::isfinite(lambda) || !std::isfinite(delta))
            throw ArgumentError("annulus: lambda and delta must be finite");
        if (!(lambda > 2.0))
            throw ArgumentError("annulus: lambda must exceed 2");
        if (!(delta > 0.0) || !(delta < lambda))
            throw ArgumentError("annulus: delta must lie in (0, lambda)");
        if (lambda + delta >= static_cast<double>(kCoordinateLimit))
            throw ArgumentError("annulus: lambda + delta exceeds the 2^31 coordinate guard");
    }

    friend bool operator==(const AnnulusSpec&, const AnnulusSpec&) = default;
};

enum class CurveKind { unit_circle, ellipse, parabola };

/// A curve Γ in the plane. Circle and ellipse are always the full closed curve
/// (parameter t ∈ [0, 2π]); the parabola is Γ(ξ) = (ξ, ξ²) on [t_min, t_max].
struct CurveSpec
{
    CurveKind kind = CurveKind::unit_circle;
    double a = 1.0; // ellipse semi-axis along x
    double b = 1.0; // ellipse semi-axis along y
    double t_min = 0.0;
    double t_max = 2.0 * std::numbers::pi;

    static CurveSpec unit_circle() { return {}; }
    static CurveSpec ellipse(double a, double b) { return {CurveKind::ellipse, a, b, 0.0, 2.0 * std::numbers::pi}; }
    static CurveSpec parabola(double t_min = -1.0, double t_max = 1.0)
    {
        return {CurveKind::parabola, 1.0, 1.0, t_min, t_max};
    }

    void validate() const
    {
        switch (kind) {
        case CurveKind::unit_circle:
            break;
        case CurveKind::ellipse:
            if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
                throw ArgumentError("ellipse: semi-axes must be positive");
            break;
        case CurveKind::parabola:
            if (!(t_min <= t_max) || !std::isfinite(t_min) || !std::isfinite(t_max))
                throw ArgumentError("parabola: parameter domain must be a finite closed interval");
            break;
        }
    }

    friend bool operator==(const CurveSpec&, const CurveSpec&) = default;
};

inline const char* to_string(CurveKind kind)
{
    switch (kind) {
    case CurveKind::unit_circle: return "unit-circle";
    case CurveKind::ellipse: return "ellipse";
    case CurveKind::parabola: return "parabola";
    }
    return "?";
}

struct CurveSource
{
    CurveSpec curve;
    double lambda = 0.0;
    double delta = 0.0;

    friend bool operator==(const CurveSource&, const CurveSource&) = default;
};

/// Lexicographically sorted, duplicate-free integer points together with the
/// region they were enumerated from.
struct LatticeSet
{
    std::vector<IntPoint> points;
    std::variant<std::monostate, AnnulusSpec, CurveSource> source;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }

    const AnnulusSpec* annulus() const noexcept { return std::get_if<AnnulusSpec>(&source); }

    bool contains(IntPoint p) const { return std::binary_search(points.begin(), points.end(), p); }

    /// Sorts and removes duplicates; used for hand-built sets.
    static LatticeSet from_points(std::vector<IntPoint> pts)
    {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        for (const auto& p : pts)
            if (p.x > kCoordinateLimit || p.x < -kCoordinateLimit || p.y > kCoordinateLimit
                || p.y < -kCoordinateLimit)
                throw ArgumentError("lattice point outside the 2^31 coordinate guard");
        return LatticeSet{std::move(pts), std::monostate{}};
    }
};

struct EnumerateOptions
{
    enum class Strategy { automatic, column_scan, shells };

    std::size_t capacity = 10'000'000;
    Strategy strategy = Strategy::automatic;
};

namespace detail {

/// floor(sqrt(n)) for n ≥ 0, exact.
inline std::int64_t isqrt(std::int64_t n)
{
    if (n <= 0)
        return 0;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (static_cast<__int128>(r) * r > n)
        --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

inline std::int64_t floor_to_int64(const mpq_class& q)
{
    mpz_class z;
    mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!z.fits_slong_p())
        throw ArgumentError("squared-norm window exceeds 64-bit range");
    return z.get_si();
}

inline std::int64_t ceil_to_int64(const mpq_class& q)
{
    mpz_class z;
    mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    if (!z.fits_slong_p())
        throw ArgumentError("squared-norm window exceeds 64-bit range");
    return z.get_si();
}

} // namespace detail

/// Integers n with (λ−δ)² < n < (λ+δ)², as the closed range [first, last]
/// (empty when first > last).
struct NormWindow
{
    std::int64_t first = 1;
    std::int64_t last = 0;

    bool empty() const noexcept { return first > last; }
    std::int64_t count() const noexcept { return empty() ? 0 : last - first + 1; }
};

inline NormWindow norm_window(const AnnulusSpec& spec)
{
    spec.validate();
    const mpq_class lambda(spec.lambda);
    const mpq_class delta(spec.delta);
    const mpq_class inner = lambda - delta;
    const mpq_class outer = lambda + delta;
    NormWindow w;
    w.first = detail::floor_to_int64(inner * inner) + 1;
    w.last = detail::ceil_to_int64(outer * outer) - 1;
    if (w.first < 0)
        w.first = 0;
    return w;
}

/// Number of (x, y) ∈ ℤ² with x² + y² = n, from the factorisation of n:
/// r2(n) = 4 Π_{p≡1 (4)} (e_p + 1) when every p ≡ 3 (4) has even exponent, else 0.
inline std::uint64_t r2(std::int64_t n)
{
    if (n < 0 || n > (std::int64_t{1} << 62))
        throw ArgumentError("r2: argument outside [0, 2^62]");
    if (n == 0)
        return 1;
    std::uint64_t product = 1;
    std::int64_t m = n;
    while (m % 2 == 0)
        m /= 2;
    for (std::int64_t p = 3; static_cast<__int128>(p) * p <= m; p += 2) {
        if (m % p != 0)
            continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (p % 4 == 3) {
            if (e % 2 != 0)
                return 0;
        } else {
            product *= static_cast<std::uint64_t>(e + 1);
        }
    }
    if (m > 1) {
        if (m % 4 == 3)
            return 0;
        product *= 2;
    }
    return 4 * product;
}

namespace detail {

inline std::vector<IntPoint> annulus_column_scan(const NormWindow& w)
{
    std::vector<IntPoint> out;
    if (w.empty())
        return out;
    const std::int64_t r = isqrt(w.last);
    for (std::int64_t x = -r; x <= r; ++x) {
        const std::int64_t top = w.last - x * x;
        if (top < 0)
            continue;
        const std::int64_t ymax = isqrt(top);
        const std::int64_t bottom = w.first - x * x;
        if (bottom <= 0) {
            for (std::int64_t y = -ymax; y <= ymax; ++y)
                out.push_back({x, y});
            continue;
        }
        std::int64_t ymin = isqrt(bottom);
        if (ymin * ymin < bottom)
            ++ymin;
        if (ymin > ymax)
            continue;
        for (std::int64_t y = -ymax; y <= -ymin; ++y)
            out.push_back({x, y});
        for (std::int64_t y = ymin; y <= ymax; ++y)
            out.push_back({x, y});
    }
    return out;
}

inline std::vector<IntPoint> annulus_shells(const NormWindow& w)
{
    std::vector<IntPoint> out;
    for (std::int64_t n = w.first; n <= w.last; ++n) {
        const std::int64_t r = isqrt(n);
        for (std::int64_t x = -r; x <= r; ++x) {
            const std::int64_t rest = n - x * x;
            const std::int64_t y = isqrt(rest);
            if (y * y != rest)
                continue;
            out.push_back({x, y});
            if (y != 0)
                out.push_back({x, -y});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

/// Expected number of lattice points of the annulus (its area).
inline double annulus_area(const AnnulusSpec& spec) { return 4.0 * std::numbers::pi * spec.lambda * spec.delta; }

/// All k ∈ ℤ² with λ−δ < |k| < λ+δ, sorted.
inline LatticeSet enumerate_annulus(const AnnulusSpec& spec, const EnumerateOptions& options = {})
{
    const NormWindow w = norm_window(spec);
    const double predicted = annulus_area(spec);
    if (predicted > static_cast<double>(options.capacity))
        throw CapacityError("annulus: predicted " + std::to_string(static_cast<long long>(predicted))
                            + " points exceeds capacity " + std::to_string(options.capacity));

    auto strategy = options.strategy;
    if (strategy == EnumerateOptions::Strategy::automatic) {
        // Shell work: every shell costs a full sweep of x ∈ [−√n, √n]. Column
        // scan costs one pass over x plus the output.
        const double radius = spec.lambda + spec.delta;
        const double shell_work = static_cast<double>(w.count()) * 2.0 * radius;
        const double column_work = 2.0 * radius + predicted;
        strategy = shell_work < column_work ? EnumerateOptions::Strategy::shells
                                            : EnumerateOptions::Strategy::column_scan;
    }
    LatticeSet set;
    set.source = spec;
    set.points = strategy == EnumerateOptions::Strategy::shells ? detail::annulus_shells(w)
                                                                : detail::annulus_column_scan(w);
    if (set.points.size() > options.capacity)
        throw CapacityError("annulus: point count exceeds capacity");
    return set;
}

/// Σ r2(n) over the squared-norm window; equals enumerate_annulus(spec).size().
inline std::uint64_t count_annulus(const AnnulusSpec& spec)
{
    const NormWindow w = norm_window(spec);
    std::uint64_t total = 0;
    for (std::int64_t n = w.first; n <= w.last; ++n)
        total += r2(n);
    return total;
}

// ---------------------------------------------------------------------------
// Curve neighbourhoods
// ---------------------------------------------------------------------------

namespace detail {

/// Distance from (u, v) to the ellipse x²/e0² + y²/e1² = 1 by the bisection
/// method of Eberly ("Distance from a point to an ellipse", 2013).
inline double ellipse_distance(double e0, double e1, double u, double v)
{
    u = std::abs(u);
    v = std::abs(v);
    if (e0 < e1) {
        std::swap(e0, e1);
        std::swap(u, v);
    }
    if (v > 0.0) {
        if (u > 0.0) {
            const double z0 = u / e0;
            const double z1 = v / e1;
            const double g = z0 * z0 + z1 * z1 - 1.0;
            if (g == 0.0)
                return 0.0;
            const double r0 = (e0 / e1) * (e0 / e1);
            const double n0 = r0 * z0;
            double s0 = z1 - 1.0;
            double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
            double s = 0.0;
            bool converged = false;
            for (int i = 0; i < 2200; ++i) {
                s = 0.5 * (s0 + s1);
                if (s == s0 || s == s1) {
                    converged = true;
                    break;
                }
                const double ratio0 = n0 / (s + r0);
                const double ratio1 = z1 / (s + 1.0);
                const double gs = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
                if (gs > 0.0)
                    s0 = s;
                else if (gs < 0.0)
                    s1 = s;
                else {
                    converged = true;
                    break;
                }
            }
            if (!converged) {
                std::ostringstream msg;
                msg << "ellipse projection did not converge for point (" << u << ", " << v << ")";
                throw NumericalError(msg.str());
            }
            const double x0 = r0 * u / (s + r0);
            const double x1 = v / (s + 1.0);
            return std::hypot(x0 - u, x1 - v);
        }
        return std::abs(v - e1);
    }
    const double numer0 = e0 * u;
    const double denom0 = e0 * e0 - e1 * e1;
    if (numer0 < denom0) {
        const double xde0 = numer0 / denom0;
        const double x0 = e0 * xde0;
        const double x1 = e1 * std::sqrt(std::max(0.0, 1.0 - xde0 * xde0));
        return std::hypot(x0 - u, x1);
    }
    return std::abs(u - e0);
}

/// Distance from (u, v) to the arc {(λt, λt²) : t ∈ [t0, t1]}. Stationary
/// points solve 2λt³ + (λ − 2v)t − u = 0; each real root is seeded from the
/// trigonometric/Cardano form and polished with Newton's method.
inline double parabola_distance(double lambda, double t0, double t1, double u, double v)
{
    auto dist2 = [&](double t) {
        const double dx = lambda * t - u;
        const double dy = lambda * t * t - v;
        return dx * dx + dy * dy;
    };
    auto f = [&](double t) { return 2.0 * lambda * t * t * t + (lambda - 2.0 * v) * t - u; };
    auto df = [&](double t) { return 6.0 * lambda * t * t + (lambda - 2.0 * v); };

    // Depressed cubic t³ + p t + q = 0.
    const double p = (lambda - 2.0 * v) / (2.0 * lambda);
    const double q = -u / (2.0 * lambda);
    std::vector<double> seeds;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0) {
        const double sq = std::sqrt(disc);
        seeds.push_back(std::cbrt(-q / 2.0 + sq) + std::cbrt(-q / 2.0 - sq));
    } else {
        const double m = 2.0 * std::sqrt(std::max(0.0, -p / 3.0));
        double arg = m == 0.0 ? 0.0 : 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            seeds.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
    }

    double best = std::min(dist2(t0), dist2(t1));
    for (double t : seeds) {
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            const double d = df(t);
            if (d == 0.0)
                break;
            const double step = f(t) / d;
            t -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(t))) {
                converged = true;
                break;
            }
        }
        if (!converged && std::abs(f(t)) > 1e-9 * lambda * std::max(1.0, std::abs(t) * std::abs(t) * std::abs(t))) {
            std::ostringstream msg;
            msg << "parabola projection did not converge for point (" << u << ", " << v << ")";
            throw NumericalError(msg.str());
        }
        if (t >= t0 && t <= t1)
            best = std::min(best, dist2(t));
    }
    return std::sqrt(best);
}

inline double curve_length_estimate(const CurveSpec& c, double lambda)
{
    switch (c.kind) {
    case CurveKind::unit_circle:
        return 2.0 * std::numbers::pi * lambda;
    case CurveKind::ellipse: {
        const double a = c.a * lambda;
        const double b = c.b * lambda;
        const double h = (a - b) * (a - b) / ((a + b) * (a + b));
        return std::numbers::pi * (a + b) * (1.0 + 3.0 * h / (10.0 + std::sqrt(4.0 - 3.0 * h)));
    }
    case CurveKind::parabola: {
        // ∫ λ √(1 + 4t²) dt
        auto prim = [](double t) {
            const double s = std::sqrt(1.0 + 4.0 * t * t);
            return 0.5 * t * s + 0.25 * std::asinh(2.0 * t);
        };
        return lambda * (prim(c.t_max) - prim(c.t_min));
    }
    }
    return 0.0;
}

} // namespace detail

/// Euclidean distance from the point (u, v) to the dilated curve λΓ.
inline double distance_to_curve(const CurveSpec& curve, double lambda, double u, double v)
{
    switch (curve.kind) {
    case CurveKind::unit_circle:
        return std::abs(std::hypot(u, v) - lambda);
    case CurveKind::ellipse:
        return detail::ellipse_distance(curve.a * lambda, curve.b * lambda, u, v);
    case CurveKind::parabola:
        return detail::parabola_distance(lambda, curve.t_min, curve.t_max, u, v);
    }
    return std::numeric_limits<double>::infinity();
}

/// All k ∈ ℤ² at Euclidean distance strictly less than δ from λΓ.
///
/// Candidates come from a column scan: for integer x the curve passes within
/// δ' = δ + tol only at abscissae X ∈ [x−δ', x+δ'], so y is confined to the
/// curve's ordinate range over that interval widened by δ'. Distances are
/// computed by exact projection onto the curve (tol = 1e-12·λ).
inline LatticeSet enumerate_curve_neighborhood(const CurveSpec& curve, double lambda, double delta,
                                               const EnumerateOptions& options = {})
{
    curve.validate();
    if (!(lambda > 2.0) || !(delta > 0.0) || !(delta < lambda) || !std::isfinite(lambda))
        throw ArgumentError("curve neighbourhood: need lambda > 2 and 0 < delta < lambda");
    if (curve.kind == CurveKind::unit_circle) {
        // Same set as the annulus; use the exact path.
        LatticeSet s = enumerate_annulus({lambda, delta}, options);
        s.source = CurveSource{curve, lambda, delta};
        return s;
    }
    const double predicted = detail::curve_length_estimate(curve, lambda) * 2.0 * delta;
    if (predicted > static_cast<double>(options.capacity))
        throw CapacityError("curve neighbourhood: predicted point count exceeds capacity");

    const double tol = 1e-12 * lambda;
    const double reach = delta + tol;

    double x_lo = 0.0;
    double x_hi = 0.0;
    double ext = 0.0;
    if (curve.kind == CurveKind::ellipse) {
        x_lo = -curve.a * lambda;
        x_hi = curve.a * lambda;
        ext = std::max(curve.a, curve.b) * lambda + reach;
    } else {
        x_lo = lambda * curve.t_min;
        x_hi = lambda * curve.t_max;
        ext = lambda * std::max(curve.t_min * curve.t_min, curve.t_max * curve.t_max) + std::abs(x_hi)
            + std::abs(x_lo) + reach;
    }
    if (ext >= static_cast<double>(kCoordinateLimit))
        throw ArgumentError("curve neighbourhood exceeds the 2^31 coordinate guard");

    // Ordinate range of the curve branches over X ∈ [lo, hi] (already clipped).
    auto ellipse_ranges = [&](double lo, double hi, std::vector<std::pair<double, double>>& out) {
        const double A = curve.a * lambda;
        const double B = curve.b * lambda;
        auto yat = [&](double X) { return B * std::sqrt(std::max(0.0, 1.0 - (X / A) * (X / A))); };
        const double near = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
        const double far = std::max(std::abs(lo), std::abs(hi));
        const double ymax = yat(near);
        const double ymin = yat(far);
        out.emplace_back(ymin - reach, ymax + reach);
        out.emplace_back(-ymax - reach, -ymin + reach);
    };
    auto parabola_ranges = [&](double lo, double hi, std::vector<std::pair<double, double>>& out) {
        const double near = (lo <= 0.0 && hi >= 0.0) ? 0.0 : std::min(std::abs(lo), std::abs(hi));
        const double far = std::max(std::abs(lo), std::abs(hi));
        out.emplace_back(near * near / lambda - reach, far * far / lambda + reach);
    };

    LatticeSet set;
    set.source = CurveSource{curve, lambda, delta};
    const auto first_x = static_cast<std::int64_t>(std::ceil(x_lo - reach));
    const auto last_x = static_cast<std::int64_t>(std::floor(x_hi + reach));
    std::vector<std::pair<double, double>> ranges;
    std::vector<std::int64_t> column;
    for (std::int64_t x = first_x; x <= last_x; ++x) {
        const double lo = std::max(x_lo, static_cast<double>(x) - reach);
        const double hi = std::min(x_hi, static_cast<double>(x) + reach);
        if (lo > hi)
            continue;
        ranges.clear();
        if (curve.kind == CurveKind::ellipse)
            ellipse_ranges(lo, hi, ranges);
        else
            parabola_ranges(lo, hi, ranges);
        column.clear();
        for (const auto& [ylo, yhi] : ranges) {
            for (auto y = static_cast<std::int64_t>(std::ceil(ylo)); y <= static_cast<std::int64_t>(std::floor(yhi)); ++y) {
                const double d = distance_to_curve(curve, lambda, static_cast<double>(x), static_cast<double>(y));
                if (d < delta)
                    column.push_back(y);
            }
        }
        std::sort(column.begin(), column.end());
        column.erase(std::unique(column.begin(), column.end()), column.end());
        for (auto y : column)
            set.points.push_back({x, y});
        if (set.points.size() > options.capacity)
            throw CapacityError("curve neighbourhood: point count exceeds capacity");
    }
    return set;
}

} // namespace annulus_lab
