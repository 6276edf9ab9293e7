#pragma once

// Angular cap decompositions of an annulus's lattice set.
//
// Caps are the n equal angular sectors of the annulus, n = ⌈2πλ/ℓ⌉, sector i
// centred on angle i·2π/n. Within a cap everything structural (collinearity,
// spacing, direction) is decided with exact integer arithmetic.

#include "annulus_lab/errors.hpp"
#include "annulus_lab/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace annulus_lab {

struct Cap
{
    std::size_t index = 0;
    double angle_lo = 0.0; // sector is (angle_lo, angle_hi]
    double angle_hi = 0.0;
    double center_angle = 0.0;
    std::vector<IntPoint> points; // ordered along the tangent at center_angle
    std::optional<int> s_class;   // ⌊log₂ #points⌋
    bool collinear = true;
    bool equal_spacing = true;
    std::optional<int> m_class;          // ⌊log₂ |consecutive gap|⌋, collinear caps with ≥ 2 points
    std::optional<IntPoint> direction;   // primitive, first nonzero coordinate positive
    std::optional<double> alpha;         // angle between the points' line and the tangent, in [0, π/2]

    std::size_t count() const noexcept { return points.size(); }
};

struct CapPartition
{
    AnnulusSpec spec;
    double cap_length = 0.0;
    std::size_t n_caps = 0;
    std::vector<Cap> caps;

    double sector_width() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(n_caps); }

    /// β with ℓ = λ(δ/λ)^β.
    double implied_beta() const { return std::log(cap_length / spec.lambda) / std::log(spec.delta / spec.lambda); }

    std::size_t total_points() const noexcept
    {
        std::size_t n = 0;
        for (const auto& c : caps)
            n += c.count();
        return n;
    }
};

/// ⌊log₂ n⌋ for n ≥ 1.
inline int floor_log2(std::uint64_t n) { return static_cast<int>(std::bit_width(n)) - 1; }

/// Largest m with 4^m ≤ g2, i.e. ⌊log₂ √g2⌋ for an integer squared length g2 ≥ 1.
inline int floor_log2_sqrt(std::uint64_t g2) { return floor_log2(g2) / 2; }

inline IntPoint primitive_direction(IntPoint d)
{
    const std::int64_t g = std::gcd(d.x, d.y);
    if (g != 0)
        d = {d.x / g, d.y / g};
    if (d.x < 0 || (d.x == 0 && d.y < 0))
        d = -d;
    return d;
}

/// Sector index of a point: sector i covers angles ((i−½)w, (i+½)w]. A point
/// exactly on a boundary joins the sector on its clockwise side.
inline std::size_t sector_of(IntPoint p, std::size_t n_caps)
{
    double theta = std::atan2(static_cast<double>(p.y), static_cast<double>(p.x));
    if (theta < 0.0)
        theta += 2.0 * std::numbers::pi;
    const double w = 2.0 * std::numbers::pi / static_cast<double>(n_caps);
    auto idx = static_cast<std::int64_t>(std::ceil(theta / w - 0.5));
    idx %= static_cast<std::int64_t>(n_caps);
    if (idx < 0)
        idx += static_cast<std::int64_t>(n_caps);
    return static_cast<std::size_t>(idx);
}

/// Orders a cap's points along its tangent and fills in the structural fields.
inline void classify_cap(Cap& cap)
{
    const double c = std::cos(cap.center_angle);
    const double s = std::sin(cap.center_angle);
    auto along = [&](IntPoint p) { return -s * static_cast<double>(p.x) + c * static_cast<double>(p.y); };
    std::sort(cap.points.begin(), cap.points.end(), [&](IntPoint a, IntPoint b) {
        const double ta = along(a);
        const double tb = along(b);
        return ta != tb ? ta < tb : a < b;
    });

    const auto& pts = cap.points;
    cap.s_class.reset();
    cap.m_class.reset();
    cap.direction.reset();
    cap.alpha.reset();
    cap.collinear = true;
    cap.equal_spacing = true;
    if (pts.empty())
        return;
    cap.s_class = floor_log2(pts.size());
    if (pts.size() < 2)
        return;

    const IntPoint first_step = pts[1] - pts[0];
    std::uint64_t min_gap2 = static_cast<std::uint64_t>(first_step.norm2());
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const IntPoint step = pts[i] - pts[i - 1];
        if (cross(pts[i] - pts[0], first_step) != 0)
            cap.collinear = false;
        if (step != first_step)
            cap.equal_spacing = false;
        min_gap2 = std::min(min_gap2, static_cast<std::uint64_t>(step.norm2()));
    }
    if (!cap.collinear) {
        cap.equal_spacing = false;
        return;
    }
    const IntPoint d = primitive_direction(first_step);
    cap.direction = d;
    cap.m_class = floor_log2_sqrt(min_gap2);
    const double tangential = std::abs(-s * static_cast<double>(d.x) + c * static_cast<double>(d.y));
    const double normal = std::abs(c * static_cast<double>(d.x) + s * static_cast<double>(d.y));
    cap.alpha = std::atan2(normal, tangential);
}

/// Splits an annulus lattice set into ⌈2πλ/ℓ⌉ equal angular sectors.
inline CapPartition partition(const LatticeSet& set, double cap_length)
{
    const AnnulusSpec* spec = set.annulus();
    if (spec == nullptr)
        throw ArgumentError("partition: lattice set must come from an annulus");
    const double circumference = 2.0 * std::numbers::pi * spec->lambda;
    if (!(cap_length > 0.0) || !(cap_length <= circumference))
        throw ArgumentError("partition: cap length must lie in (0, 2*pi*lambda]");

    CapPartition part;
    part.spec = *spec;
    part.cap_length = cap_length;
    part.n_caps = static_cast<std::size_t>(std::ceil(circumference / cap_length));
    const double w = part.sector_width();
    part.caps.resize(part.n_caps);
    for (std::size_t i = 0; i < part.n_caps; ++i) {
        auto& cap = part.caps[i];
        cap.index = i;
        cap.center_angle = static_cast<double>(i) * w;
        cap.angle_lo = cap.center_angle - 0.5 * w;
        cap.angle_hi = cap.center_angle + 0.5 * w;
    }
    for (const auto& p : set.points)
        part.caps[sector_of(p, part.n_caps)].points.push_back(p);
    for (auto& cap : part.caps)
        classify_cap(cap);
    return part;
}

/// Cap length (λδ)^{1/2}: caps of dimensions δ × (λδ)^{1/2}.
inline double canonical_cap_length(const AnnulusSpec& spec) { return std::sqrt(spec.lambda * spec.delta); }

struct CapCensus
{
    double scale = 0.0;
    double threshold = 0.0;             // caps with count ≤ threshold form 𝒞₀
    double threshold_constant = 4.0;
    std::size_t c0_caps = 0;
    std::uint64_t c0_points = 0;
    std::map<int, std::size_t> caps_by_s;                  // #𝒞_s
    std::map<int, std::uint64_t> points_by_s;
    std::map<std::pair<int, int>, std::size_t> caps_by_sm; // #𝒮_{s,m}
    std::map<int, double> ratio_s;                         // #𝒞_s 2^{2s} / (λδ)
    std::map<std::pair<int, int>, double> ratio_sm;        // #𝒮_{s,m} 2^{s−m} / (λδ)^{1/2}

    double max_ratio_s() const
    {
        double m = 0.0;
        for (const auto& [s, r] : ratio_s)
            m = std::max(m, r);
        return m;
    }
    double max_ratio_sm() const
    {
        double m = 0.0;
        for (const auto& [sm, r] : ratio_sm)
            m = std::max(m, r);
        return m;
    }
    std::uint64_t total_points() const
    {
        std::uint64_t n = c0_points;
        for (const auto& [s, p] : points_by_s)
            n += p;
        return n;
    }
};

/// (s, m)-census of a partition. 𝒞₀ collects caps holding at most
/// threshold_constant·(ℓδ + 1) points; ℓδ is the cap area, λ^{1/2}δ^{3/2} at
/// the canonical scale.
inline CapCensus census(const CapPartition& part, double threshold_constant = 4.0)
{
    const double lambda = part.spec.lambda;
    const double delta = part.spec.delta;
    CapCensus c;
    c.scale = part.cap_length;
    c.threshold_constant = threshold_constant;
    c.threshold = threshold_constant * (part.cap_length * delta + 1.0);
    for (const auto& cap : part.caps) {
        if (static_cast<double>(cap.count()) <= c.threshold) {
            ++c.c0_caps;
            c.c0_points += cap.count();
            continue;
        }
        const int s = *cap.s_class;
        ++c.caps_by_s[s];
        c.points_by_s[s] += cap.count();
        if (cap.collinear && cap.m_class)
            ++c.caps_by_sm[{s, *cap.m_class}];
    }
    for (const auto& [s, n] : c.caps_by_s)
        c.ratio_s[s] = static_cast<double>(n) * std::ldexp(1.0, 2 * s) / (lambda * delta);
    for (const auto& [sm, n] : c.caps_by_sm)
        c.ratio_sm[sm] = static_cast<double>(n) * std::ldexp(1.0, sm.first - sm.second) / std::sqrt(lambda * delta);
    return c;
}

// ---------------------------------------------------------------------------
// Small caps η of length δ⁻¹/100 and the active-cap case split
// ---------------------------------------------------------------------------

enum class EtaCase { single_point = 1, active = 2, intermediate = 3, flat = 4 };

struct EtaRecord
{
    std::size_t index = 0;
    int s = 0;
    int m = 0;
    double alpha = 0.0;
    EtaCase regime = EtaCase::single_point;
};

struct EtaCensus
{
    AnnulusSpec spec;
    double scale = 0.0;
    bool in_regime = false;        // δ ≥ λ^{−1/3}
    double eccentricity = 0.0;     // ecc(η) = δ/ℓ = 100δ²
    double active_cutoff = 0.0;    // Case 2: α > 10·ecc(η)
    double flat_cutoff = 0.0;      // Case 4: α < (δ/λ)^{1/2}/10
    double factor = 10.0;
    std::size_t empty = 0;
    std::size_t case1 = 0;
    std::size_t case2 = 0;
    std::size_t case3 = 0;
    std::size_t case4 = 0;
    std::uint64_t points_in_case1 = 0;
    std::vector<EtaRecord> records; // every η with ≥ 2 points

    std::size_t count(EtaCase c) const
    {
        switch (c) {
        case EtaCase::single_point: return case1;
        case EtaCase::active: return case2;
        case EtaCase::intermediate: return case3;
        case EtaCase::flat: return case4;
        }
        return 0;
    }
};

/// Partitions the annulus at ℓ = δ⁻¹/100 and sorts multi-point caps η into the
/// active / intermediate / flat regimes by the angle α between their line and
/// the cap's long axis. Each η has area below 1/2, so every multi-point η must
/// be collinear with equal spacing; a violation raises IntegrityError.
inline EtaCensus eta_regime_census(const LatticeSet& set)
{
    const AnnulusSpec* spec = set.annulus();
    if (spec == nullptr)
        throw ArgumentError("eta census: lattice set must come from an annulus");
    const double lambda = spec->lambda;
    const double delta = spec->delta;
    const double scale = 1.0 / (100.0 * delta);
    if (scale > 2.0 * std::numbers::pi * lambda)
        throw ArgumentError("eta census: delta^-1/100 exceeds 2*pi*lambda");

    EtaCensus out;
    out.spec = *spec;
    out.scale = scale;
    out.in_regime = delta >= std::pow(lambda, -1.0 / 3.0);
    out.eccentricity = delta / scale;
    out.active_cutoff = out.factor * out.eccentricity;
    out.flat_cutoff = std::sqrt(delta / lambda) / out.factor;

    const CapPartition part = partition(set, scale);
    for (const auto& cap : part.caps) {
        if (cap.count() == 0) {
            ++out.empty;
            continue;
        }
        if (cap.count() == 1) {
            ++out.case1;
            ++out.points_in_case1;
            continue;
        }
        if (!cap.collinear || !cap.equal_spacing)
            throw IntegrityError("eta census: cap " + std::to_string(cap.index)
                                 + " holds non-collinear or unequally spaced points");
        EtaRecord r;
        r.index = cap.index;
        r.s = *cap.s_class;
        r.m = *cap.m_class;
        r.alpha = *cap.alpha;
        if (r.alpha > out.active_cutoff) {
            r.regime = EtaCase::active;
            ++out.case2;
        } else if (r.alpha < out.flat_cutoff) {
            r.regime = EtaCase::flat;
            ++out.case4;
        } else {
            r.regime = EtaCase::intermediate;
            ++out.case3;
        }
        out.records.push_back(r);
    }
    return out;
}

inline EtaCensus eta_regime_census(const AnnulusSpec& spec) { return eta_regime_census(enumerate_annulus(spec)); }

} // namespace annulus_lab
