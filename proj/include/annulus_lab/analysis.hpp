#pragma once

#include "annulus_lab/energy.hpp"
#include "annulus_lab/errors.hpp"
#include "annulus_lab/kernel.hpp"
#include "annulus_lab/lattice.hpp"
#include "annulus_lab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace annulus_lab {

/// A: the projector's L² → L^p norm. B: the kernel's L^p norm.
enum class Conjecture { A, B };

inline const char* to_string(Conjecture c) { return c == Conjecture::A ? "A" : "B"; }

/// Ordered: a region's status is at least as strong as another's when it compares ≥.
enum class Status { open = 0, proved_with_eps = 1, proved = 2 };

inline const char* to_string(Status s)
{
    switch (s) {
    case Status::open: return "open";
    case Status::proved_with_eps: return "proved-with-eps";
    case Status::proved: return "proved";
    }
    return "?";
}

struct RegimePoint
{
    double p = 2.0;     // in [2, ∞]
    double alpha = 0.0; // δ = λ^{−α}

    void validate() const
    {
        if (!(p >= 2.0))
            throw ArgumentError("regime point: p must lie in [2, inf]");
        if (!(alpha >= 0.0) || std::isinf(alpha))
            throw ArgumentError("regime point: alpha must be finite and nonnegative");
    }
};

struct RegionStatus
{
    Status status = Status::open;
    std::string source;
};

inline double alpha_of(double lambda, double delta) { return -std::log(delta) / std::log(lambda); }

namespace detail {

inline double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

} // namespace detail

/// A: λ^{1/2−2/p}δ^{1/2} + (λδ)^{1/4−1/(2p)}.  B: λ^{1−2/p}δ + (λδ)^{1/2}.
inline double envelope(Conjecture which, double p, double lambda, double delta)
{
    if (!(p >= 2.0))
        throw ArgumentError("envelope: p must lie in [2, inf]");
    if (!(lambda > 2.0))
        throw ArgumentError("envelope: lambda must exceed 2");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw ArgumentError("envelope: delta must lie in (0, 1)");
    const double u = detail::inv(p);
    if (which == Conjecture::A)
        return std::pow(lambda, 0.5 - 2.0 * u) * std::sqrt(delta) + std::pow(lambda * delta, 0.25 - 0.5 * u);
    return std::pow(lambda, 1.0 - 2.0 * u) * delta + std::sqrt(lambda * delta);
}

/// α at which the two envelope terms balance: A: 1 − 8/(p+2), B: 1 − 4/p.
inline double regime_boundary(Conjecture which, double p)
{
    if (!(p >= 2.0))
        throw ArgumentError("regime boundary: p must lie in [2, inf]");
    if (std::isinf(p))
        return 1.0;
    return which == Conjecture::A ? 1.0 - 8.0 / (p + 2.0) : 1.0 - 4.0 * detail::inv(p);
}

/// Largest α (exclusive) for which A is proved without loss when p ≥ 6.
inline double lossless_threshold(double p)
{
    const double u = detail::inv(p);
    const double a = (1.0 - 6.0 * u) / (3.0 - 2.0 * u);
    const double b = (10.0 - 64.0 * u) / (29.0 - 14.0 * u);
    return std::max(a, b);
}

/// Encoded theorem statements. Every threshold is strict, so boundary
/// points fall to the weaker status.
inline RegionStatus status(Conjecture which, RegimePoint pt)
{
    pt.validate();
    constexpr double third = 1.0 / 3.0;
    if (which == Conjecture::A) {
        if (pt.p < 6.0)
            return {Status::proved, "A(i): 2 <= p < 6"};
        if (pt.alpha < lossless_threshold(pt.p))
            return {Status::proved, "A(i): alpha below lossless threshold"};
        if (pt.p <= 10.0)
            return {Status::proved_with_eps, "A(ii): p <= 10"};
        if (pt.alpha < third)
            return {Status::proved_with_eps, "A(ii): alpha < 1/3"};
        if (std::isinf(pt.p))
            return {Status::proved_with_eps, "A(ii): p = inf"};
        return {Status::open, "A: not covered"};
    }
    if (pt.p <= 6.0)
        return {Status::proved_with_eps, "B: 2 <= p <= 6"};
    if (pt.alpha < third)
        return {Status::proved_with_eps, "B: alpha < 1/3"};
    return {Status::open, "B: not covered"};
}

enum class CurveSide { below, above, on };

inline const char* to_string(CurveSide s)
{
    switch (s) {
    case CurveSide::below: return "below";
    case CurveSide::above: return "above";
    case CurveSide::on: return "on";
    }
    return "?";
}

/// Points within 1e-12 of the curve count as on it (1 − 8/10 is not 0.2 in binary).
inline CurveSide side_of(Conjecture which, RegimePoint pt)
{
    constexpr double tol = 1e-12;
    const double c = regime_boundary(which, pt.p);
    if (pt.alpha < c - tol)
        return CurveSide::below;
    if (pt.alpha > c + tol)
        return CurveSide::above;
    return CurveSide::on;
}

struct VerifiedPoint
{
    Conjecture which = Conjecture::A;
    RegimePoint point;
    CurveSide side = CurveSide::below;
};

enum class RegionKind { rectangle, segment };

/// rectangle: {p ≥ p_min, 0 ≤ α ≤ alpha_max} (p_max = ∞, alpha_min = 0).
/// segment:   {2 ≤ p ≤ p_max, α = alpha_min = alpha_max}.
struct Region
{
    RegionKind kind = RegionKind::rectangle;
    Conjecture which = Conjecture::A;
    double p_min = 2.0, p_max = std::numeric_limits<double>::infinity();
    double alpha_min = 0.0, alpha_max = 0.0;
    RegimePoint generator;

    bool contains(RegimePoint q) const
    {
        return q.p >= p_min && q.p <= p_max && q.alpha >= alpha_min && q.alpha <= alpha_max;
    }
};

/// A bound verified below the red curve extends to every point with larger p
/// and smaller α; one verified above it extends along its row to p = 2. A
/// point declared `on` the curve is accepted with either label and treated
/// as above it.
inline std::vector<Region> propagate(const std::vector<VerifiedPoint>& verified)
{
    std::vector<Region> out;
    for (const auto& v : verified) {
        v.point.validate();
        const CurveSide actual = side_of(v.which, v.point);
        if (actual != CurveSide::on && v.side != actual)
            throw ArgumentError(std::string("propagate: point declared ") + to_string(v.side) + " the curve lies "
                                + to_string(actual));
        Region r;
        r.which = v.which;
        r.generator = v.point;
        if (v.side == CurveSide::below && actual == CurveSide::below) {
            r.kind = RegionKind::rectangle;
            r.p_min = v.point.p;
            r.p_max = std::numeric_limits<double>::infinity();
            r.alpha_min = 0.0;
            r.alpha_max = v.point.alpha;
        } else {
            r.kind = RegionKind::segment;
            r.p_min = 2.0;
            r.p_max = v.point.p;
            r.alpha_min = r.alpha_max = v.point.alpha;
        }
        out.push_back(r);
    }
    return out;
}

struct ConsistencyReport
{
    std::size_t generators = 0;       // grid points used as verified points
    std::size_t checked = 0;          // (generator, grid point) containments examined
    std::size_t violations = 0;       // proved generators whose region holds a weaker point
    std::size_t open_in_proved = 0;   // proved generators whose region holds an open point
    std::size_t eps_reaching_open = 0; // proved-with-eps generators whose region holds an open point
};

/// Every grid point is used as a verified point with its own status and
/// side. A proved generator's region must contain only proved points;
/// ε-loss generators reaching open points are counted but not violations. The grid is uniform in 1/p ∈ [0, 1/2] and α ∈ [0, 1].
/// Rectangles are handled with a 2-D prefix minimum, segments with a row
/// suffix minimum.
inline ConsistencyReport check_region_consistency(Conjecture which, std::size_t n_p = 100, std::size_t n_alpha = 100)
{
    if (n_p < 2 || n_alpha < 2)
        throw ArgumentError("consistency grid needs at least 2 points per axis");
    auto p_at = [&](std::size_t i) {
        const double u = 0.5 * static_cast<double>(i) / static_cast<double>(n_p - 1);
        return u == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / u;
    };
    auto a_at = [&](std::size_t j) { return static_cast<double>(j) / static_cast<double>(n_alpha - 1); };

    // i grows with 1/p, i.e. p decreases.
    std::vector<int> st(n_p * n_alpha);
    for (std::size_t i = 0; i < n_p; ++i)
        for (std::size_t j = 0; j < n_alpha; ++j)
            st[i * n_alpha + j] = static_cast<int>(status(which, {p_at(i), a_at(j)}).status);

    // pre[i][j] = min over i' ≤ i, j' ≤ j  (p' ≥ p, α' ≤ α).
    std::vector<int> pre(st.size());
    for (std::size_t i = 0; i < n_p; ++i)
        for (std::size_t j = 0; j < n_alpha; ++j) {
            int m = st[i * n_alpha + j];
            if (i > 0)
                m = std::min(m, pre[(i - 1) * n_alpha + j]);
            if (j > 0)
                m = std::min(m, pre[i * n_alpha + j - 1]);
            pre[i * n_alpha + j] = m;
        }
    // suf[i][j] = min over i' ≥ i at fixed j  (2 ≤ p' ≤ p).
    std::vector<int> suf(st.size());
    for (std::size_t j = 0; j < n_alpha; ++j)
        for (std::size_t i = n_p; i-- > 0;) {
            int m = st[i * n_alpha + j];
            if (i + 1 < n_p)
                m = std::min(m, suf[(i + 1) * n_alpha + j]);
            suf[i * n_alpha + j] = m;
        }

    ConsistencyReport rep;
    for (std::size_t i = 0; i < n_p; ++i)
        for (std::size_t j = 0; j < n_alpha; ++j) {
            const RegimePoint g{p_at(i), a_at(j)};
            const int s = st[i * n_alpha + j];
            ++rep.generators;
            int weakest = 0;
            if (side_of(which, g) == CurveSide::below) {
                weakest = pre[i * n_alpha + j];
                rep.checked += (i + 1) * (j + 1);
            } else {
                weakest = suf[i * n_alpha + j];
                rep.checked += n_p - i;
            }
            if (s == static_cast<int>(Status::proved) && weakest < s)
                ++rep.violations;
            if (s == static_cast<int>(Status::proved) && weakest == static_cast<int>(Status::open))
                ++rep.open_in_proved;
            if (s == static_cast<int>(Status::proved_with_eps) && weakest == static_cast<int>(Status::open))
                ++rep.eps_reaching_open;
        }
    return rep;
}

enum class Quantity { kernel_lp, energy, knapp_ratio, spherical_ratio, point_count };

inline const char* to_string(Quantity q)
{
    switch (q) {
    case Quantity::kernel_lp: return "kernel-Lp";
    case Quantity::energy: return "energy";
    case Quantity::knapp_ratio: return "knapp-ratio";
    case Quantity::spherical_ratio: return "spherical-ratio";
    case Quantity::point_count: return "point-count";
    }
    return "?";
}

inline Quantity parse_quantity(const std::string& s)
{
    for (Quantity q : {Quantity::kernel_lp, Quantity::energy, Quantity::knapp_ratio, Quantity::spherical_ratio,
                       Quantity::point_count})
        if (s == to_string(q))
            return q;
    throw ArgumentError("unknown quantity '" + s + "'");
}

struct SweepConfig
{
    Quantity quantity = Quantity::point_count;
    double p = 6.0;
    double alpha = 0.5;
    std::vector<double> lambdas;
    int m = 3;                 // energy order
    double oversampling = 4.0;
    double knapp_angle = 0.0;
    std::uint64_t seed = 0;    // no quantity draws randomness yet; recorded for reproducibility
};

struct SweepRow
{
    double lambda = 0.0, delta = 0.0, p = 0.0;
    Quantity quantity = Quantity::point_count;
    double value = 0.0;
    std::string method;
    double error = 0.0;
    bool ok = true;
    std::string note; // set when the row could not be computed
};

/// λ_min, 2λ_min, 4λ_min, … ≤ λ_max.
inline std::vector<double> geometric_grid(double lambda_min, double lambda_max, double factor = 2.0)
{
    if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min) || !(factor > 1.0))
        throw ArgumentError("geometric grid: need 0 < lmin <= lmax and factor > 1");
    std::vector<double> out;
    for (double l = lambda_min; l <= lambda_max * (1.0 + 1e-12); l *= factor)
        out.push_back(l);
    return out;
}

inline SweepRow sweep_row(const SweepConfig& cfg, double lambda)
{
    SweepRow row;
    row.lambda = lambda;
    row.delta = std::pow(lambda, -cfg.alpha);
    row.p = cfg.p;
    row.quantity = cfg.quantity;
    const AnnulusSpec spec{lambda, row.delta};
    spec.validate();
    const GridOptions grid{cfg.oversampling};
    switch (cfg.quantity) {
    case Quantity::point_count:
        row.value = static_cast<double>(count_annulus(spec));
        row.method = "exact";
        break;
    case Quantity::energy: {
        const EnergyReport e = additive_energy(enumerate_annulus(spec), cfg.m);
        row.p = 2.0 * cfg.m;
        row.value = to_double(e.energy);
        row.method = to_string(e.method);
        break;
    }
    case Quantity::kernel_lp: {
        const NormReport n = lp_norm(FourierSupport::all_ones(enumerate_annulus(spec)), cfg.p, grid);
        row.value = n.value;
        row.method = to_string(n.method);
        row.error = n.error_estimate;
        break;
    }
    case Quantity::knapp_ratio:
    case Quantity::spherical_ratio: {
        const FourierSupport f = cfg.quantity == Quantity::knapp_ratio
                                     ? knapp_support(spec, cfg.knapp_angle)
                                     : FourierSupport::all_ones(enumerate_annulus(spec));
        if (f.empty())
            throw CapacityError("empty support");
        const NormReport n = lp_norm(f, cfg.p, grid);
        const double l2 = f.l2_norm();
        row.value = n.value / l2;
        row.method = to_string(n.method);
        row.error = n.error_estimate / l2;
        break;
    }
    }
    return row;
}

/// One row per λ, in λ order. Capacity problems annotate their row instead
/// of aborting the sweep; anything else propagates.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg)
{
    if (cfg.lambdas.empty())
        throw ArgumentError("sweep: empty lambda grid");
    if (!(cfg.alpha >= 0.0))
        throw ArgumentError("sweep: alpha must be nonnegative");
    if (cfg.quantity == Quantity::energy && cfg.m != 2 && cfg.m != 3)
        throw ArgumentError("sweep: energy order must be 2 or 3");
    std::vector<SweepRow> rows;
    for (double lambda : cfg.lambdas) {
        try {
            rows.push_back(sweep_row(cfg, lambda));
        } catch (const CapacityError& e) {
            SweepRow r;
            r.lambda = lambda;
            r.delta = std::pow(lambda, -cfg.alpha);
            r.p = cfg.p;
            r.quantity = cfg.quantity;
            r.ok = false;
            r.method = "skipped";
            r.note = e.what();
            rows.push_back(r);
        }
    }
    return rows;
}

/// Fit of ln value against ln λ over the computed rows.
inline FitResult fit_loglog(const std::vector<SweepRow>& rows)
{
    std::vector<double> x, y;
    for (const auto& r : rows)
        if (r.ok) {
            x.push_back(r.lambda);
            y.push_back(r.value);
        }
    return fit_loglog(std::span<const double>(x), std::span<const double>(y));
}

} // namespace annulus_lab
