#pragma once

// Trigonometric polynomials f(x) = Σ_k a_k e^{2πik·x} on 𝕋² with lattice
// frequency support, sampled exactly on alias-free grids, and their L^p norms.

#include "annulus_lab/caps.hpp"
#include "annulus_lab/errors.hpp"
#include "annulus_lab/lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace annulus_lab {

using complex = std::complex<double>;

struct FourierSupport
{
    std::vector<IntPoint> points;
    std::vector<complex> coefficients;

    static FourierSupport all_ones(const LatticeSet& set)
    {
        return {set.points, std::vector<complex>(set.size(), complex{1.0, 0.0})};
    }

    static FourierSupport with_coefficients(std::vector<IntPoint> points, std::vector<complex> coefficients)
    {
        if (points.size() != coefficients.size())
            throw ArgumentError("Fourier support: one coefficient per point required");
        return {std::move(points), std::move(coefficients)};
    }

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }

    std::int64_t max_freq() const noexcept
    {
        std::int64_t m = 0;
        for (const auto& p : points)
            m = std::max({m, p.x < 0 ? -p.x : p.x, p.y < 0 ? -p.y : p.y});
        return m;
    }

    double l1_norm() const noexcept
    {
        double s = 0.0;
        for (const auto& a : coefficients)
            s += std::abs(a);
        return s;
    }

    double l2_norm() const noexcept
    {
        double s = 0.0;
        for (const auto& a : coefficients)
            s += std::norm(a);
        return std::sqrt(s);
    }

    /// Upper bound for |∇f|: 2π Σ |a_k| |k|.
    double gradient_bound() const noexcept
    {
        double s = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            s += std::abs(coefficients[i])
               * std::hypot(static_cast<double>(points[i].x), static_cast<double>(points[i].y));
        return 2.0 * std::numbers::pi * s;
    }

    /// Shifts every frequency by -shift. |f| is unchanged.
    FourierSupport shifted(IntPoint shift) const
    {
        FourierSupport out = *this;
        for (auto& p : out.points)
            p = p - shift;
        return out;
    }

    /// Direct evaluation at a point of 𝕋², O(#support).
    complex evaluate(double x1, double x2) const
    {
        complex sum{0.0, 0.0};
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double phase = 2.0 * std::numbers::pi
                               * (static_cast<double>(points[i].x) * x1 + static_cast<double>(points[i].y) * x2);
            sum += coefficients[i] * complex{std::cos(phase), std::sin(phase)};
        }
        return sum;
    }
};

struct KernelGrid
{
    std::size_t N = 0;
    std::int64_t max_freq = 0;
    double gradient_bound = 0.0;
    double coefficient_l2 = 0.0;
    double coefficient_l1 = 0.0;
    std::vector<complex> samples; // samples[i*N + j] = f(i/N, j/N)

    const complex& at(std::size_t i, std::size_t j) const { return samples[i * N + j]; }
};

enum class NormMethod { grid_quadrature, parseval, energy_exact };

inline const char* to_string(NormMethod m)
{
    switch (m) {
    case NormMethod::grid_quadrature: return "grid-quadrature";
    case NormMethod::parseval: return "parseval";
    case NormMethod::energy_exact: return "energy-exact";
    }
    return "?";
}

struct NormReport
{
    double p = 2.0;
    double value = 0.0;
    NormMethod method = NormMethod::grid_quadrature;
    double oversampling = 0.0;
    double error_estimate = 0.0; // bound on |value − ‖f‖_p|
    double power_error = 0.0;    // bound on |value^p − ‖f‖_p^p| (p < ∞)
    std::size_t grid_size = 0;
};

struct GridOptions
{
    double oversampling = 4.0;
    std::size_t max_samples = std::size_t{1} << 30;
};

/// Smallest power of two ≥ oversampling·(2·max_freq + 2).
inline std::size_t grid_size_for(std::int64_t max_freq, double oversampling)
{
    if (!(oversampling >= 2.0))
        throw ArgumentError("oversampling must be at least 2");
    const double need = oversampling * (2.0 * static_cast<double>(max_freq) + 2.0);
    std::size_t n = 1;
    while (static_cast<double>(n) < need)
        n <<= 1;
    return n;
}

namespace detail {

// The FFTW planner is not re-entrant.
inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree
{
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

inline FftwBuffer fftw_buffer(std::size_t n)
{
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1)));
    if (p == nullptr)
        throw CapacityError("FFT buffer allocation failed");
    return FftwBuffer(p);
}

/// Owns an FFTW plan; created and destroyed under the planner lock.
class FftwPlan
{
public:
    FftwPlan() = default;
    explicit FftwPlan(fftw_plan plan) : plan_(plan)
    {
        if (plan_ == nullptr)
            throw CapacityError("FFTW could not create a plan");
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
    FftwPlan(FftwPlan&& o) noexcept : plan_(std::exchange(o.plan_, nullptr)) {}
    ~FftwPlan()
    {
        if (plan_ != nullptr) {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan_);
        }
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

inline FftwPlan plan_2d(std::size_t n0, std::size_t n1, fftw_complex* data, int sign)
{
    std::lock_guard lock(fftw_planner_mutex());
    return FftwPlan(fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), data, data, sign, FFTW_ESTIMATE));
}

/// `howmany` contiguous transforms of length n.
inline FftwPlan plan_rows(std::size_t n, std::size_t howmany, fftw_complex* data, int sign)
{
    std::lock_guard lock(fftw_planner_mutex());
    const int len = static_cast<int>(n);
    return FftwPlan(fftw_plan_many_dft(1, &len, static_cast<int>(howmany), data, nullptr, 1, len, data, nullptr, 1,
                                       len, sign, FFTW_ESTIMATE));
}

inline std::size_t wrap(std::int64_t k, std::size_t n)
{
    const auto nn = static_cast<std::int64_t>(n);
    std::int64_t r = k % nn;
    return static_cast<std::size_t>(r < 0 ? r + nn : r);
}

/// |f|^p from w = |f|², with repeated multiplication for small even p.
inline double abs_pow_from_norm(double w, double p)
{
    if (p == 2.0)
        return w;
    if (p == 4.0)
        return w * w;
    if (p == 6.0)
        return w * w * w;
    if (p == 8.0) {
        const double w2 = w * w;
        return w2 * w2;
    }
    return std::pow(std::sqrt(w), p);
}

/// Converts a bound on the p-th power into a bound on the p-th root.
inline double root_error(double power_value, double power_error, double p)
{
    const double v = std::pow(power_value, 1.0 / p);
    const double hi = std::pow(power_value + power_error, 1.0 / p) - v;
    const double lo = v - std::pow(std::max(0.0, power_value - power_error), 1.0 / p);
    return std::max(hi, lo);
}

inline NormReport finish_report(double p, double power_mean, double grid_max, double gradient_bound, std::size_t N,
                                double oversampling, std::int64_t max_freq, double coefficient_l1)
{
    NormReport r;
    r.p = p;
    r.method = NormMethod::grid_quadrature;
    r.oversampling = oversampling;
    r.grid_size = N;
    const double h = std::numbers::sqrt2 / (2.0 * static_cast<double>(N));
    const double off_grid = gradient_bound * h;
    if (std::isinf(p)) {
        r.value = grid_max;
        r.error_estimate = off_grid;
        r.power_error = off_grid;
        return r;
    }
    r.value = std::pow(power_mean, 1.0 / p);
    // For even p, |f|^p is a trigonometric polynomial of degree p·max_freq and
    // the grid mean is exact once N exceeds it; only rounding remains.
    const bool even = p == std::floor(p) && std::fmod(p, 2.0) == 0.0;
    if (even && static_cast<double>(N) > p * static_cast<double>(max_freq)) {
        const double sample_err = 4.0 * std::log2(static_cast<double>(N)) * std::numeric_limits<double>::epsilon() * coefficient_l1;
        r.power_error = p * std::pow(grid_max + sample_err, p - 1.0) * sample_err
                      + 1e-13 * power_mean;
    } else {
        r.power_error = p * std::pow(grid_max + off_grid, p - 1.0) * off_grid;
    }
    r.error_estimate = root_error(power_mean, r.power_error, p);
    return r;
}

inline void check_p(double p)
{
    if (!(p >= 2.0))
        throw ArgumentError("L^p norm: p must lie in [2, inf]");
}

} // namespace detail

/// Samples f on the N×N grid {(i/N, j/N)} by scattering the coefficients into
/// an N×N frequency array (indices mod N) and applying an inverse DFT. Exact
/// up to rounding because every |k_i| < N/2.
inline KernelGrid synthesize(const FourierSupport& support, const GridOptions& options = {})
{
    KernelGrid grid;
    grid.max_freq = support.max_freq();
    grid.N = grid_size_for(grid.max_freq, options.oversampling);
    grid.gradient_bound = support.gradient_bound();
    grid.coefficient_l2 = support.l2_norm();
    grid.coefficient_l1 = support.l1_norm();
    const std::size_t N = grid.N;
    if (static_cast<double>(N) * static_cast<double>(N) > static_cast<double>(options.max_samples))
        throw CapacityError("synthesize: " + std::to_string(N) + "^2 samples exceed the sample cap");

    auto buf = detail::fftw_buffer(N * N);
    auto* data = buf.get();
    std::fill_n(reinterpret_cast<double*>(data), 2 * N * N, 0.0);
    const auto plan = detail::plan_2d(N, N, data, FFTW_BACKWARD);
    for (std::size_t i = 0; i < support.size(); ++i) {
        const std::size_t idx = detail::wrap(support.points[i].x, N) * N + detail::wrap(support.points[i].y, N);
        data[idx][0] += support.coefficients[i].real();
        data[idx][1] += support.coefficients[i].imag();
    }
    plan.execute();
    grid.samples.resize(N * N);
    for (std::size_t i = 0; i < N * N; ++i)
        grid.samples[i] = {data[i][0], data[i][1]};
    return grid;
}

inline KernelGrid synthesize(const FourierSupport& support, double oversampling)
{
    return synthesize(support, GridOptions{oversampling, GridOptions{}.max_samples});
}

/// (N⁻² Σ |f|^p)^{1/p} over the grid, or the grid maximum for p = ∞.
inline NormReport lp_norm(const KernelGrid& grid, double p, double oversampling = 0.0)
{
    detail::check_p(p);
    double max_abs2 = 0.0;
    double sum = 0.0;
    const bool finite = !std::isinf(p);
    // Row partial sums keep the accumulation order fixed.
    for (std::size_t i = 0; i < grid.N; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < grid.N; ++j) {
            const double w = std::norm(grid.samples[i * grid.N + j]);
            max_abs2 = std::max(max_abs2, w);
            if (finite)
                row += detail::abs_pow_from_norm(w, p);
        }
        sum += row;
    }
    const double n2 = static_cast<double>(grid.N) * static_cast<double>(grid.N);
    return detail::finish_report(p, sum / n2, std::sqrt(max_abs2), grid.gradient_bound, grid.N, oversampling,
                                 grid.max_freq, grid.coefficient_l1);
}

/// ‖f‖₂ = (Σ |a_k|²)^{1/2}, exact.
inline NormReport parseval_norm(const FourierSupport& support)
{
    NormReport r;
    r.p = 2.0;
    r.value = support.l2_norm();
    r.method = NormMethod::parseval;
    return r;
}

/// L^p norms for several p at once without materialising the N×N grid.
///
/// Frequencies are first re-centred on their bounding box (|f| is invariant
/// under modulation), so N depends on the support's extent only. The 2-D
/// inverse DFT is split into a length-N transform per distinct first
/// coordinate, followed by blocks of row transforms that are reduced on the
/// fly. Memory is (#distinct k₁ + block)·N complex values.
inline std::vector<NormReport> lp_norms(const FourierSupport& support, std::span<const double> ps,
                                        const GridOptions& options = {})
{
    for (double p : ps)
        detail::check_p(p);
    std::vector<NormReport> out;
    if (support.empty()) {
        for (double p : ps) {
            NormReport r;
            r.p = p;
            r.oversampling = options.oversampling;
            out.push_back(r);
        }
        return out;
    }

    std::int64_t x_lo = support.points.front().x, x_hi = x_lo;
    std::int64_t y_lo = support.points.front().y, y_hi = y_lo;
    for (const auto& k : support.points) {
        x_lo = std::min(x_lo, k.x);
        x_hi = std::max(x_hi, k.x);
        y_lo = std::min(y_lo, k.y);
        y_hi = std::max(y_hi, k.y);
    }
    // Floor division keeps the centre an integer for negative sums too.
    auto mid = [](std::int64_t a, std::int64_t b) {
        const std::int64_t s = a + b;
        return s >= 0 ? s / 2 : -((-s + 1) / 2);
    };
    const FourierSupport centred = support.shifted({mid(x_lo, x_hi), mid(y_lo, y_hi)});
    const std::int64_t max_freq = centred.max_freq();
    const std::size_t N = grid_size_for(max_freq, options.oversampling);
    const double gradient = centred.gradient_bound();

    std::vector<std::int64_t> columns;
    for (const auto& k : centred.points)
        columns.push_back(k.x);
    std::sort(columns.begin(), columns.end());
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
    const std::size_t K = columns.size();
    const std::size_t block = std::min<std::size_t>(64, N);
    if (static_cast<double>(K + block) * static_cast<double>(N) > static_cast<double>(options.max_samples))
        throw CapacityError("lp_norms: working set exceeds the sample cap");

    // Stage 1: G[c][j] = Σ_{k₂} a_{(k₁=columns[c], k₂)} e(k₂ j / N).
    auto stage1 = detail::fftw_buffer(K * N);
    std::fill_n(reinterpret_cast<double*>(stage1.get()), 2 * K * N, 0.0);
    {
        const auto plan = detail::plan_rows(N, K, stage1.get(), FFTW_BACKWARD);
        for (std::size_t i = 0; i < centred.size(); ++i) {
            const auto& k = centred.points[i];
            const auto c = static_cast<std::size_t>(std::lower_bound(columns.begin(), columns.end(), k.x) - columns.begin());
            auto& cell = stage1[c * N + detail::wrap(k.y, N)];
            cell[0] += centred.coefficients[i].real();
            cell[1] += centred.coefficients[i].imag();
        }
        plan.execute();
    }

    // Stage 2: for each j, f(i/N, j/N) = Σ_c G[c][j] e(k₁ i / N).
    auto stage2 = detail::fftw_buffer(block * N);
    const auto plan = detail::plan_rows(N, block, stage2.get(), FFTW_BACKWARD);
    std::vector<std::size_t> column_slot(K);
    for (std::size_t c = 0; c < K; ++c)
        column_slot[c] = detail::wrap(columns[c], N);

    std::vector<double> sums(ps.size(), 0.0);
    double max_abs2 = 0.0;
    for (std::size_t j0 = 0; j0 < N; j0 += block) {
        std::fill_n(reinterpret_cast<double*>(stage2.get()), 2 * block * N, 0.0);
        const std::size_t rows = std::min(block, N - j0);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < K; ++c) {
                stage2[r * N + column_slot[c]][0] = stage1[c * N + j0 + r][0];
                stage2[r * N + column_slot[c]][1] = stage1[c * N + j0 + r][1];
            }
        plan.execute();
        std::vector<double> partial(ps.size(), 0.0);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t i = 0; i < N; ++i) {
                const double w = stage2[r * N + i][0] * stage2[r * N + i][0] + stage2[r * N + i][1] * stage2[r * N + i][1];
                max_abs2 = std::max(max_abs2, w);
                for (std::size_t q = 0; q < ps.size(); ++q)
                    if (!std::isinf(ps[q]))
                        partial[q] += detail::abs_pow_from_norm(w, ps[q]);
            }
        for (std::size_t q = 0; q < ps.size(); ++q)
            sums[q] += partial[q];
    }
    const double n2 = static_cast<double>(N) * static_cast<double>(N);
    for (std::size_t q = 0; q < ps.size(); ++q)
        out.push_back(detail::finish_report(ps[q], sums[q] / n2, std::sqrt(max_abs2), gradient, N, options.oversampling,
                                               max_freq, centred.l1_norm()));
    return out;
}

inline NormReport lp_norm(const FourierSupport& support, double p, const GridOptions& options = {})
{
    const double ps[] = {p};
    return lp_norms(support, ps, options).front();
}

/// ‖f‖_p / ‖f‖₂ for f with the given coefficients. f lies in the range of the
/// projector onto its support, so this is a lower bound for that projector's
/// L² → L^p norm.
inline double ratio_2_to_p(const FourierSupport& support, double p, const GridOptions& options = {})
{
    if (support.empty())
        throw ArgumentError("ratio_2_to_p: empty support");
    return lp_norm(support, p, options).value / support.l2_norm();
}

/// All-ones coefficients on the lattice points of the canonical cap (length
/// (λδ)^{1/2}) whose sector contains the given angle; angle 0 is the cap
/// around the positive x-axis. An empty cap yields an empty support.
inline FourierSupport knapp_support(const LatticeSet& annulus_set, double angle = 0.0)
{
    const AnnulusSpec* spec = annulus_set.annulus();
    if (spec == nullptr)
        throw ArgumentError("knapp_support: lattice set must come from an annulus");
    const double length = canonical_cap_length(*spec);
    const auto n_caps = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi * spec->lambda / length));
    const double a = std::remainder(angle, 2.0 * std::numbers::pi);
    const double w = 2.0 * std::numbers::pi / static_cast<double>(n_caps);
    auto target = static_cast<std::int64_t>(std::ceil((a < 0 ? a + 2.0 * std::numbers::pi : a) / w - 0.5));
    target %= static_cast<std::int64_t>(n_caps);
    FourierSupport s;
    for (const auto& p : annulus_set.points)
        if (static_cast<std::int64_t>(sector_of(p, n_caps)) == target) {
            s.points.push_back(p);
            s.coefficients.emplace_back(1.0, 0.0);
        }
    return s;
}

inline FourierSupport knapp_support(const AnnulusSpec& spec, double angle = 0.0)
{
    return knapp_support(enumerate_annulus(spec), angle);
}

} // namespace annulus_lab
