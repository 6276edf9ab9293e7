#pragma once

// Exact additive energies 𝔼_m(A) = #{(x₁..x_2m) ∈ A^{2m} : x₁+…+x_m = x_{m+1}+…+x_2m}
// of planar integer sets, through the ordered-tuple multiplicity function
// r_j(v) = #{(x₁..x_j) ∈ A^j : Σ x_i = v}. Then 𝔼_m = Σ_v r_m(v)².

#include "annulus_lab/errors.hpp"
#include "annulus_lab/kernel.hpp"
#include "annulus_lab/lattice.hpp"
#include "annulus_lab/parallel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace annulus_lab {

using u128 = unsigned __int128;

inline std::string to_decimal(u128 v)
{
    if (v == 0)
        return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

inline double to_double(u128 v) { return static_cast<double>(v); }

inline u128 ipow(u128 base, int e)
{
    u128 r = 1;
    for (int i = 0; i < e; ++i)
        r *= base;
    return r;
}

struct IntPointHash
{
    std::size_t operator()(IntPoint p) const noexcept
    {
        auto h = static_cast<std::uint64_t>(p.x) * 0x9e3779b97f4a7c15ULL;
        h ^= static_cast<std::uint64_t>(p.y) + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

enum class EnergyMethod { automatic, hash, dense_convolution, transform_convolution };

inline const char* to_string(EnergyMethod m)
{
    switch (m) {
    case EnergyMethod::automatic: return "automatic";
    case EnergyMethod::hash: return "hash";
    case EnergyMethod::dense_convolution: return "dense-convolution";
    case EnergyMethod::transform_convolution: return "transform-convolution";
    }
    return "?";
}

struct DenseBox
{
    IntPoint origin;            // lowest corner
    std::size_t width = 0;      // along x
    std::size_t height = 0;     // along y
    std::vector<std::uint64_t> cells; // cells[(x−ox)*height + (y−oy)]
};

using SparseCounts = std::unordered_map<IntPoint, std::uint64_t, IntPointHash>;

struct SumsetCounts
{
    int order = 0;
    std::variant<SparseCounts, DenseBox> storage;
    u128 total_mass = 0;
    std::size_t support_size = 0;
    EnergyMethod method = EnergyMethod::hash;
    bool fallback = false; // transform path failed its verification and was redone densely

    std::uint64_t at(IntPoint v) const
    {
        if (const auto* sparse = std::get_if<SparseCounts>(&storage)) {
            auto it = sparse->find(v);
            return it == sparse->end() ? 0 : it->second;
        }
        const auto& box = std::get<DenseBox>(storage);
        const IntPoint d = v - box.origin;
        if (d.x < 0 || d.y < 0 || static_cast<std::size_t>(d.x) >= box.width || static_cast<std::size_t>(d.y) >= box.height)
            return 0;
        return box.cells[static_cast<std::size_t>(d.x) * box.height + static_cast<std::size_t>(d.y)];
    }

    /// Visits every (v, r(v)) with r(v) > 0 in lexicographic order of v.
    template <class F>
    void for_each(F&& f) const
    {
        if (const auto* sparse = std::get_if<SparseCounts>(&storage)) {
            std::vector<std::pair<IntPoint, std::uint64_t>> items(sparse->begin(), sparse->end());
            std::sort(items.begin(), items.end());
            for (const auto& [v, c] : items)
                f(v, c);
            return;
        }
        const auto& box = std::get<DenseBox>(storage);
        for (std::size_t i = 0; i < box.width; ++i)
            for (std::size_t j = 0; j < box.height; ++j)
                if (const auto c = box.cells[i * box.height + j])
                    f(IntPoint{box.origin.x + static_cast<std::int64_t>(i), box.origin.y + static_cast<std::int64_t>(j)}, c);
    }

    u128 sum_of_squares() const
    {
        u128 s = 0;
        for_each([&](IntPoint, std::uint64_t c) { s += static_cast<u128>(c) * c; });
        return s;
    }
};

struct EnergyOptions
{
    EnergyMethod method = EnergyMethod::automatic;
    std::size_t max_hash_points = 100'000;
    std::size_t max_dense_cells = std::size_t{1} << 30;
    std::size_t max_transform_cells = std::size_t{1} << 24;
    double sparse_load_factor = 0.05;
};

namespace detail {

struct BoundingBox
{
    std::int64_t x_lo = 0, x_hi = -1, y_lo = 0, y_hi = -1;
    std::int64_t width() const { return x_hi - x_lo + 1; }
    std::int64_t height() const { return y_hi - y_lo + 1; }
};

inline BoundingBox bounding_box(const std::vector<IntPoint>& pts)
{
    BoundingBox b;
    if (pts.empty())
        return b;
    b.x_lo = b.x_hi = pts.front().x;
    b.y_lo = b.y_hi = pts.front().y;
    for (const auto& p : pts) {
        b.x_lo = std::min(b.x_lo, p.x);
        b.x_hi = std::max(b.x_hi, p.x);
        b.y_lo = std::min(b.y_lo, p.y);
        b.y_hi = std::max(b.y_hi, p.y);
    }
    return b;
}

/// A function on ℤ² stored as sparse rows: rows[x − x_lo] lists (y, value)
/// with y increasing.
struct RowFunction
{
    std::int64_t x_lo = 0;
    std::vector<std::vector<std::pair<std::int64_t, std::uint64_t>>> rows;

    const std::vector<std::pair<std::int64_t, std::uint64_t>>* row(std::int64_t x) const
    {
        const std::int64_t i = x - x_lo;
        if (i < 0 || i >= static_cast<std::int64_t>(rows.size()) || rows[static_cast<std::size_t>(i)].empty())
            return nullptr;
        return &rows[static_cast<std::size_t>(i)];
    }
};

inline RowFunction indicator_rows(const std::vector<IntPoint>& pts, const BoundingBox& box)
{
    RowFunction f;
    f.x_lo = box.x_lo;
    f.rows.resize(static_cast<std::size_t>(std::max<std::int64_t>(box.width(), 0)));
    for (const auto& p : pts)
        f.rows[static_cast<std::size_t>(p.x - box.x_lo)].emplace_back(p.y, 1);
    for (auto& r : f.rows)
        std::sort(r.begin(), r.end());
    return f;
}

/// Row-sharded convolution (f * g)(X, ·) = Σ_{x} f(x, ·) * g(X − x, ·), one
/// dense accumulator per output row. `sink(X, y_lo, acc)` consumes each
/// output row; rows are independent, so they are computed in parallel and
/// every sink call for a fixed X sees identical data.
template <class Sink>
void convolve_rows(const RowFunction& f, std::int64_t f_y_lo, std::int64_t f_y_hi, const RowFunction& g,
                   std::int64_t g_y_lo, std::int64_t g_y_hi, Sink&& sink)
{
    if (f.rows.empty() || g.rows.empty())
        return;
    const std::int64_t X_lo = f.x_lo + g.x_lo;
    const std::int64_t X_hi = f.x_lo + static_cast<std::int64_t>(f.rows.size()) - 1 + g.x_lo
                            + static_cast<std::int64_t>(g.rows.size()) - 1;
    const std::int64_t y_lo = f_y_lo + g_y_lo;
    const auto width = static_cast<std::size_t>(f_y_hi + g_y_hi - y_lo + 1);
    parallel_for(static_cast<std::size_t>(X_hi - X_lo + 1), [&](std::size_t i) {
        const std::int64_t X = X_lo + static_cast<std::int64_t>(i);
        std::vector<std::uint64_t> acc;
        for (std::size_t a = 0; a < f.rows.size(); ++a) {
            const auto& frow = f.rows[a];
            if (frow.empty())
                continue;
            const auto* grow = g.row(X - (f.x_lo + static_cast<std::int64_t>(a)));
            if (grow == nullptr)
                continue;
            if (acc.empty())
                acc.assign(width, 0);
            for (const auto& [fy, fv] : frow) {
                std::uint64_t* base = acc.data() + (fy - y_lo);
                for (const auto& [gy, gv] : *grow)
                    base[gy] += fv * gv;
            }
        }
        sink(X, y_lo, acc);
    });
}

inline void check_order(int j)
{
    if (j < 1 || j > 3)
        throw ArgumentError("sumset order must be 1, 2 or 3");
}

inline SumsetCounts sumset_hash(const std::vector<IntPoint>& pts, int j)
{
    SparseCounts r1;
    for (const auto& p : pts)
        r1[p] += 1;
    SparseCounts cur = r1;
    for (int order = 2; order <= j; ++order) {
        SparseCounts next;
        next.reserve(cur.size() * std::min<std::size_t>(pts.size(), 8));
        for (const auto& [v, c] : cur)
            for (const auto& p : pts)
                next[v + p] += c;
        cur = std::move(next);
    }
    SumsetCounts out;
    out.order = j;
    out.method = EnergyMethod::hash;
    out.support_size = cur.size();
    for (const auto& [v, c] : cur)
        out.total_mass += c;
    out.storage = std::move(cur);
    return out;
}

/// r_j as sparse rows, by repeated row-sharded convolution with the indicator.
inline RowFunction sumset_rows(const std::vector<IntPoint>& pts, const BoundingBox& box, int j,
                               std::int64_t& y_lo_out, std::int64_t& y_hi_out)
{
    const RowFunction ind = indicator_rows(pts, box);
    RowFunction cur = ind;
    std::int64_t cy_lo = box.y_lo, cy_hi = box.y_hi;
    for (int order = 2; order <= j; ++order) {
        RowFunction next;
        next.x_lo = cur.x_lo + ind.x_lo;
        next.rows.resize(cur.rows.size() + ind.rows.size() - 1);
        convolve_rows(cur, cy_lo, cy_hi, ind, box.y_lo, box.y_hi,
                      [&](std::int64_t X, std::int64_t y_lo, const std::vector<std::uint64_t>& acc) {
                          auto& row = next.rows[static_cast<std::size_t>(X - next.x_lo)];
                          for (std::size_t t = 0; t < acc.size(); ++t)
                              if (acc[t] != 0)
                                  row.emplace_back(y_lo + static_cast<std::int64_t>(t), acc[t]);
                      });
        cur = std::move(next);
        cy_lo += box.y_lo;
        cy_hi += box.y_hi;
    }
    y_lo_out = cy_lo;
    y_hi_out = cy_hi;
    return cur;
}

inline SumsetCounts sumset_dense(const std::vector<IntPoint>& pts, int j, const EnergyOptions& opt)
{
    const BoundingBox box = bounding_box(pts);
    SumsetCounts out;
    out.order = j;
    out.method = EnergyMethod::dense_convolution;
    DenseBox dense;
    if (pts.empty()) {
        out.storage = dense;
        return out;
    }
    const auto w = static_cast<std::size_t>(j * (box.width() - 1) + 1);
    const auto h = static_cast<std::size_t>(j * (box.height() - 1) + 1);
    if (static_cast<double>(w) * static_cast<double>(h) > static_cast<double>(opt.max_dense_cells))
        throw CapacityError("sumset: dense box exceeds the cell cap");
    std::int64_t y_lo = 0, y_hi = 0;
    const RowFunction rows = sumset_rows(pts, box, j, y_lo, y_hi);
    dense.origin = {rows.x_lo, y_lo};
    dense.width = w;
    dense.height = h;
    dense.cells.assign(w * h, 0);
    for (std::size_t i = 0; i < rows.rows.size(); ++i)
        for (const auto& [y, c] : rows.rows[i]) {
            dense.cells[i * h + static_cast<std::size_t>(y - y_lo)] = c;
            out.total_mass += c;
            ++out.support_size;
        }
    out.storage = std::move(dense);
    return out;
}

/// r_j by FFT: the j-th power of the indicator's transform on an L×L torus
/// large enough that no sum wraps. Returns false when rounding to integers
/// cannot be certified (non-integral sample or wrong total mass).
inline bool sumset_transform(const std::vector<IntPoint>& pts, int j, const EnergyOptions& opt, SumsetCounts& out)
{
    const BoundingBox box = bounding_box(pts);
    const auto span = static_cast<std::size_t>(j * (std::max(box.width(), box.height()) - 1) + 1);
    std::size_t L = 1;
    while (L < span)
        L <<= 1;
    if (static_cast<double>(L) * static_cast<double>(L) > static_cast<double>(opt.max_transform_cells))
        throw CapacityError("sumset: transform grid exceeds the cell cap");
    auto buf = fftw_buffer(L * L);
    auto* data = buf.get();
    std::fill_n(reinterpret_cast<double*>(data), 2 * L * L, 0.0);
    const auto forward = plan_2d(L, L, data, FFTW_FORWARD);
    const auto backward = plan_2d(L, L, data, FFTW_BACKWARD);
    for (const auto& p : pts)
        data[static_cast<std::size_t>(p.x - box.x_lo) * L + static_cast<std::size_t>(p.y - box.y_lo)][0] = 1.0;
    forward.execute();
    for (std::size_t i = 0; i < L * L; ++i) {
        const complex z{data[i][0], data[i][1]};
        complex zj = z;
        for (int k = 1; k < j; ++k)
            zj *= z;
        data[i][0] = zj.real();
        data[i][1] = zj.imag();
    }
    backward.execute();
    const double scale = 1.0 / (static_cast<double>(L) * static_cast<double>(L));
    const u128 expected = ipow(pts.size(), j);
    SparseCounts counts;
    u128 mass = 0;
    for (std::size_t a = 0; a < L; ++a)
        for (std::size_t b = 0; b < L; ++b) {
            const double re = data[a * L + b][0] * scale;
            const double im = data[a * L + b][1] * scale;
            const double rounded = std::nearbyint(re);
            if (std::abs(re - rounded) > 0.25 || std::abs(im) > 0.25 || rounded < 0.0)
                return false;
            if (rounded == 0.0)
                continue;
            const auto c = static_cast<std::uint64_t>(rounded);
            counts[{j * box.x_lo + static_cast<std::int64_t>(a), j * box.y_lo + static_cast<std::int64_t>(b)}] = c;
            mass += c;
        }
    if (mass != expected)
        return false;
    out.order = j;
    out.method = EnergyMethod::transform_convolution;
    out.total_mass = mass;
    out.support_size = counts.size();
    out.storage = std::move(counts);
    return true;
}

inline EnergyMethod choose_method(const std::vector<IntPoint>& pts, int j, const EnergyOptions& opt)
{
    if (opt.method != EnergyMethod::automatic)
        return opt.method;
    const BoundingBox box = bounding_box(pts);
    const double cells = static_cast<double>(j * box.width()) * static_cast<double>(j * box.height());
    const double load = std::pow(static_cast<double>(pts.size()), j) / std::max(cells, 1.0);
    if (cells <= static_cast<double>(opt.max_dense_cells) && load >= opt.sparse_load_factor)
        return EnergyMethod::dense_convolution;
    if (static_cast<double>(j * box.height()) > 1e7)
        return EnergyMethod::hash;
    return EnergyMethod::dense_convolution;
}

} // namespace detail

/// r_j(v) for every v, by the requested method.
inline SumsetCounts sumset_counts(const LatticeSet& set, int j, const EnergyOptions& options = {})
{
    detail::check_order(j);
    const auto& pts = set.points;
    switch (detail::choose_method(pts, j, options)) {
    case EnergyMethod::hash:
        if (pts.size() > options.max_hash_points)
            throw CapacityError("sumset: hash path limited to " + std::to_string(options.max_hash_points) + " points");
        return detail::sumset_hash(pts, j);
    case EnergyMethod::transform_convolution: {
        SumsetCounts out;
        if (!pts.empty() && detail::sumset_transform(pts, j, options, out))
            return out;
        out = detail::sumset_dense(pts, j, options);
        out.fallback = !pts.empty();
        return out;
    }
    case EnergyMethod::dense_convolution:
    case EnergyMethod::automatic:
        break;
    }
    return detail::sumset_dense(pts, j, options);
}

struct EnergyReport
{
    int m = 2;
    u128 energy = 0;
    std::size_t set_size = 0;
    EnergyMethod method = EnergyMethod::dense_convolution;
    bool fallback = false;
    std::size_t support_size = 0; // |supp r_m|

    double diagonal_ratio() const;        // 𝔼_m / P^m
    double cauchy_schwarz_ratio() const;  // 𝔼_m·|supp r_m| / P^{2m}
    double bombieri_bourgain_ratio() const; // 𝔼₃ / P^{7/2}
};

inline double EnergyReport::diagonal_ratio() const
{
    return set_size == 0 ? 0.0 : to_double(energy) / std::pow(static_cast<double>(set_size), m);
}
inline double EnergyReport::cauchy_schwarz_ratio() const
{
    return set_size == 0 ? 0.0
                         : to_double(energy) * static_cast<double>(support_size)
                               / std::pow(static_cast<double>(set_size), 2 * m);
}
inline double EnergyReport::bombieri_bourgain_ratio() const
{
    return set_size == 0 ? 0.0 : to_double(energy) / std::pow(static_cast<double>(set_size), 3.5);
}

/// 𝔼_m = Σ_v r_m(v)², exact in 128 bits. The dense path never materialises
/// r_m: each output row of the last convolution is squared and summed as it
/// is produced.
inline EnergyReport additive_energy(const LatticeSet& set, int m, const EnergyOptions& options = {})
{
    if (m != 2 && m != 3)
        throw ArgumentError("additive energy: m must be 2 or 3");
    const auto& pts = set.points;
    if (std::pow(static_cast<double>(pts.size()), 2 * m) >= 0x1.0p127)
        throw CapacityError("additive energy: P^(2m) would overflow 128 bits");
    EnergyReport report;
    report.m = m;
    report.set_size = pts.size();
    const EnergyMethod method = detail::choose_method(pts, m, options);
    if (method != EnergyMethod::dense_convolution || pts.empty()) {
        EnergyOptions forced = options;
        forced.method = method;
        const SumsetCounts r = sumset_counts(set, m, forced);
        report.energy = r.sum_of_squares();
        report.method = r.method;
        report.fallback = r.fallback;
        report.support_size = r.support_size;
        return report;
    }

    const detail::BoundingBox box = detail::bounding_box(pts);
    std::int64_t y_lo = 0, y_hi = 0;
    const detail::RowFunction lower = detail::sumset_rows(pts, box, m - 1, y_lo, y_hi);
    const detail::RowFunction ind = detail::indicator_rows(pts, box);
    const std::size_t rows = lower.rows.size() + ind.rows.size() - 1;
    std::vector<u128> row_energy(rows, 0);
    std::vector<std::size_t> row_support(rows, 0);
    const std::int64_t X_lo = lower.x_lo + ind.x_lo;
    detail::convolve_rows(lower, y_lo, y_hi, ind, box.y_lo, box.y_hi,
                          [&](std::int64_t X, std::int64_t, const std::vector<std::uint64_t>& acc) {
                              u128 e = 0;
                              std::size_t s = 0;
                              for (auto c : acc)
                                  if (c != 0) {
                                      e += static_cast<u128>(c) * c;
                                      ++s;
                                  }
                              row_energy[static_cast<std::size_t>(X - X_lo)] = e;
                              row_support[static_cast<std::size_t>(X - X_lo)] = s;
                          });
    for (std::size_t i = 0; i < rows; ++i) {
        report.energy += row_energy[i];
        report.support_size += row_support[i];
    }
    report.method = EnergyMethod::dense_convolution;
    return report;
}

struct CrosscheckRecord
{
    int p = 4;
    u128 energy = 0;
    double quadrature = 0.0;      // grid value of ‖Φ‖_p^p
    double relative_difference = 0.0;
    double power_error = 0.0;     // kernel module's bound on the quadrature error
    bool flagged = false;         // |difference| exceeds power_error
};

/// Compares 𝔼_{p/2}(A) with the grid quadrature of ‖Σ_{k∈A} e(k·x)‖_p^p.
inline CrosscheckRecord energy_lp_crosscheck(const LatticeSet& set, int p, double oversampling = 4.0,
                                             const EnergyOptions& options = {})
{
    if (p != 4 && p != 6)
        throw ArgumentError("energy crosscheck: p must be 4 or 6");
    CrosscheckRecord rec;
    rec.p = p;
    rec.energy = additive_energy(set, p / 2, options).energy;
    const NormReport norm = lp_norm(FourierSupport::all_ones(set), static_cast<double>(p), GridOptions{oversampling});
    rec.quadrature = std::pow(norm.value, p);
    rec.power_error = norm.power_error;
    const double e = to_double(rec.energy);
    const double diff = std::abs(e - rec.quadrature);
    rec.relative_difference = e == 0.0 ? diff : diff / e;
    rec.flagged = diff > rec.power_error;
    return rec;
}

} // namespace annulus_lab
