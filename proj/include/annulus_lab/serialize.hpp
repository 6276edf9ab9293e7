#pragma once

#include "annulus_lab/analysis.hpp"
#include "annulus_lab/caps.hpp"
#include "annulus_lab/dyadic.hpp"
#include "annulus_lab/energy.hpp"
#include "annulus_lab/errors.hpp"
#include "annulus_lab/kernel.hpp"
#include "annulus_lab/lattice.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace annulus_lab {

using json = nlohmann::ordered_json;

/// Shortest decimal that reads back to the same double ("%.17g" trimmed).
inline std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v)
            break;
    }
    return buf;
}

/// JSON has no infinity; p = ∞ is written as the string "inf".
inline json json_number(double v)
{
    if (std::isfinite(v))
        return v;
    return format_double(v);
}

// ---------------------------------------------------------------------------
// LatticeSet
// ---------------------------------------------------------------------------

inline void write_lattice_csv(std::ostream& os, const LatticeSet& set)
{
    os << "x,y\n";
    for (const auto& p : set.points)
        os << p.x << ',' << p.y << '\n';
}

inline LatticeSet read_lattice_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != "x,y")
        throw IoError("lattice CSV: missing 'x,y' header");
    std::vector<IntPoint> pts;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos)
                throw std::invalid_argument("no comma");
            std::size_t used = 0;
            const long long x = std::stoll(line.substr(0, comma), &used);
            if (used != comma)
                throw std::invalid_argument("trailing text");
            const std::string ys = line.substr(comma + 1);
            const long long y = std::stoll(ys, &used);
            if (used != ys.size())
                throw std::invalid_argument("trailing text");
            pts.push_back({x, y});
        } catch (const std::logic_error&) {
            throw IoError("lattice CSV: bad row at line " + std::to_string(lineno));
        }
    }
    return LatticeSet::from_points(std::move(pts));
}

inline json lattice_to_json(const LatticeSet& set)
{
    json arr = json::array();
    for (const auto& p : set.points)
        arr.push_back({p.x, p.y});
    return arr;
}

inline LatticeSet lattice_from_json(const json& j)
{
    if (!j.is_array())
        throw IoError("lattice JSON: expected an array of [x, y] pairs");
    std::vector<IntPoint> pts;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            throw IoError("lattice JSON: expected [x, y] integer pairs");
        pts.push_back({e[0].get<std::int64_t>(), e[1].get<std::int64_t>()});
    }
    return LatticeSet::from_points(std::move(pts));
}

// ---------------------------------------------------------------------------
// Caps
// ---------------------------------------------------------------------------

struct CensusRow
{
    double scale = 0.0;
    std::string s, m; // empty when not applicable
    std::string regime;
    std::uint64_t count = 0;
    std::string ratio;
};

inline std::vector<CensusRow> census_rows(const CapCensus& c)
{
    std::vector<CensusRow> rows;
    rows.push_back({c.scale, "", "", "C0", c.c0_caps, ""});
    for (const auto& [s, n] : c.caps_by_s)
        rows.push_back({c.scale, std::to_string(s), "", "C_s", n, format_double(c.ratio_s.at(s))});
    for (const auto& [sm, n] : c.caps_by_sm)
        rows.push_back({c.scale, std::to_string(sm.first), std::to_string(sm.second), "S_sm", n,
                        format_double(c.ratio_sm.at(sm))});
    return rows;
}

inline std::vector<CensusRow> census_rows(const EtaCensus& c)
{
    std::vector<CensusRow> rows;
    const std::array<std::pair<EtaCase, const char*>, 4> cases{
        {{EtaCase::single_point, "case-1"}, {EtaCase::active, "case-2"}, {EtaCase::intermediate, "case-3"}, {EtaCase::flat, "case-4"}}};
    for (const auto& [k, name] : cases)
        rows.push_back({c.scale, "", "", name, c.count(k), ""});
    return rows;
}

inline void write_census_csv(std::ostream& os, const std::vector<CensusRow>& rows)
{
    os << "scale,s,m,regime,count,ratio\n";
    for (const auto& r : rows)
        os << format_double(r.scale) << ',' << r.s << ',' << r.m << ',' << r.regime << ',' << r.count << ',' << r.ratio
           << '\n';
}

inline json census_to_json(const std::vector<CensusRow>& rows)
{
    json arr = json::array();
    for (const auto& r : rows) {
        json o;
        o["scale"] = r.scale;
        o["s"] = r.s.empty() ? json(nullptr) : json(std::stoi(r.s));
        o["m"] = r.m.empty() ? json(nullptr) : json(std::stoi(r.m));
        o["regime"] = r.regime;
        o["count"] = r.count;
        o["ratio"] = r.ratio.empty() ? json(nullptr) : json(std::stod(r.ratio));
        arr.push_back(o);
    }
    return arr;
}

inline json census_to_json(const CapCensus& c)
{
    json o;
    o["scale"] = c.scale;
    o["threshold"] = c.threshold;
    o["threshold_constant"] = c.threshold_constant;
    o["max_ratio_s"] = c.max_ratio_s();
    o["max_ratio_sm"] = c.max_ratio_sm();
    o["rows"] = census_to_json(census_rows(c));
    return o;
}

inline json census_to_json(const EtaCensus& c)
{
    json o;
    o["scale"] = c.scale;
    o["in_regime"] = c.in_regime;
    o["eccentricity"] = c.eccentricity;
    o["active_cutoff"] = c.active_cutoff;
    o["flat_cutoff"] = c.flat_cutoff;
    o["factor"] = c.factor;
    o["rows"] = census_to_json(census_rows(c));
    return o;
}

// ---------------------------------------------------------------------------
// Energy, norms, dyadic
// ---------------------------------------------------------------------------

inline json to_json(const EnergyReport& e)
{
    json o;
    o["m"] = e.m;
    o["energy"] = to_decimal(e.energy);
    o["set_size"] = e.set_size;
    o["method"] = to_string(e.method);
    o["fallback"] = e.fallback;
    json d;
    d["energy_over_P_m"] = e.diagonal_ratio();
    d["cauchy_schwarz_ratio"] = e.cauchy_schwarz_ratio();
    d["support_size"] = e.support_size;
    if (e.m == 3)
        d["energy_over_P_7_2"] = e.bombieri_bourgain_ratio();
    o["diagnostics"] = d;
    return o;
}

inline json to_json(const NormReport& n)
{
    json o;
    o["p"] = json_number(n.p);
    o["value"] = n.value;
    o["method"] = to_string(n.method);
    o["oversampling"] = n.oversampling;
    o["error_estimate"] = n.error_estimate;
    o["power_error"] = n.power_error;
    o["grid_size"] = n.grid_size;
    return o;
}

inline json to_json(const CrosscheckRecord& c)
{
    json o;
    o["p"] = c.p;
    o["energy"] = to_decimal(c.energy);
    o["quadrature"] = c.quadrature;
    o["relative_difference"] = c.relative_difference;
    o["power_error"] = c.power_error;
    o["flagged"] = c.flagged;
    return o;
}

inline json to_json(const ExpSumSample& s)
{
    json o;
    o["lambda"] = s.lambda;
    o["delta"] = s.delta;
    o["M"] = s.M;
    o["x"] = {s.x1, s.x2};
    o["value"] = {s.value.real(), s.value.imag()};
    o["abs"] = std::abs(s.value);
    o["trivial_bound"] = s.trivial_bound;
    o["muller_bound"] = s.muller_bound;
    o["count"] = s.count;
    o["c_psi"] = s.c_psi;
    o["regime_warning"] = s.regime_warning;
    return o;
}

inline void write_dyadic_csv(std::ostream& os, const DyadicReport& r)
{
    os << "M,emp_sup,trivial,muller,ratio_trivial,ratio_muller,trivial_envelope\n";
    for (const auto& row : r.rows)
        os << format_double(row.M) << ',' << format_double(row.emp_sup) << ',' << format_double(row.trivial) << ','
           << format_double(row.muller) << ',' << format_double(row.ratio_trivial) << ','
           << format_double(row.ratio_muller) << ',' << format_double(row.trivial_envelope) << '\n';
}

inline json to_json(const FitResult& f)
{
    json o;
    o["slope"] = f.slope;
    o["intercept"] = f.intercept;
    o["residual_rms"] = f.residual_rms;
    o["n_points"] = f.n;
    return o;
}

inline json to_json(const DyadicReport& r)
{
    json o;
    o["lambda"] = r.lambda;
    o["delta"] = r.delta;
    o["x_samples"] = r.x_samples;
    o["seed"] = r.seed;
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"M", row.M},
                        {"emp_sup", row.emp_sup},
                        {"trivial", row.trivial},
                        {"muller", row.muller},
                        {"ratio_trivial", row.ratio_trivial},
                        {"ratio_muller", row.ratio_muller},
                        {"trivial_envelope", row.trivial_envelope}});
    o["rows"] = rows;
    o["fit"] = r.fit ? to_json(*r.fit) : json(nullptr);
    return o;
}

// ---------------------------------------------------------------------------
// Analysis
// ---------------------------------------------------------------------------

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
    os << "lambda,delta,p,quantity,value,method,error\n";
    for (const auto& r : rows)
        os << format_double(r.lambda) << ',' << format_double(r.delta) << ',' << format_double(r.p) << ','
           << to_string(r.quantity) << ',' << (r.ok ? format_double(r.value) : std::string{}) << ',' << r.method << ','
           << (r.ok ? format_double(r.error) : r.note) << '\n';
}

inline json to_json(const SweepRow& r)
{
    json o;
    o["lambda"] = r.lambda;
    o["delta"] = r.delta;
    o["p"] = json_number(r.p);
    o["quantity"] = to_string(r.quantity);
    o["value"] = r.ok ? json(r.value) : json(nullptr);
    o["method"] = r.method;
    o["error"] = r.error;
    if (!r.ok)
        o["note"] = r.note;
    return o;
}

inline json to_json(const Region& r)
{
    json o;
    o["kind"] = r.kind == RegionKind::rectangle ? "rectangle" : "segment";
    o["which"] = to_string(r.which);
    o["p_min"] = json_number(r.p_min);
    o["p_max"] = json_number(r.p_max);
    o["alpha_min"] = r.alpha_min;
    o["alpha_max"] = r.alpha_max;
    o["generator"] = {json_number(r.generator.p), r.generator.alpha};
    return o;
}

inline json regions_to_json(const std::vector<Region>& regions)
{
    json arr = json::array();
    for (const auto& r : regions)
        arr.push_back(to_json(r));
    return arr;
}

// ---------------------------------------------------------------------------
// Binary grid export: 32-byte header, then N·N little-endian complex values
// in row-major order (samples[i*N + j] = f(i/N, j/N)).
//   0  "ALGRID01"
//   8  u64 N
//  16  u32 dtype (1 = complex64, 2 = complex128)
//  20  u32 reserved (0)
//  24  u64 max_freq
// ---------------------------------------------------------------------------

enum class GridDtype : std::uint32_t { complex64 = 1, complex128 = 2 };

namespace detail {

template <class T>
void put_le(std::ostream& os, T v)
{
    unsigned char b[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i)
        b[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is)
{
    unsigned char b[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(b), sizeof(T)))
        throw IoError("grid: truncated input");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return static_cast<T>(v);
}

template <class F, class U>
void put_float(std::ostream& os, F v)
{
    U bits;
    static_assert(sizeof bits == sizeof v);
    std::memcpy(&bits, &v, sizeof v);
    put_le(os, bits);
}

template <class F, class U>
F get_float(std::istream& is)
{
    const U bits = get_le<U>(is);
    F v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

} // namespace detail

inline void write_grid(std::ostream& os, const KernelGrid& grid, GridDtype dtype = GridDtype::complex128)
{
    os.write("ALGRID01", 8);
    detail::put_le<std::uint64_t>(os, grid.N);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(dtype));
    detail::put_le<std::uint32_t>(os, 0);
    detail::put_le<std::uint64_t>(os, static_cast<std::uint64_t>(grid.max_freq));
    for (const auto& z : grid.samples) {
        if (dtype == GridDtype::complex64) {
            detail::put_float<float, std::uint32_t>(os, static_cast<float>(z.real()));
            detail::put_float<float, std::uint32_t>(os, static_cast<float>(z.imag()));
        } else {
            detail::put_float<double, std::uint64_t>(os, z.real());
            detail::put_float<double, std::uint64_t>(os, z.imag());
        }
    }
    if (!os)
        throw IoError("grid: write failed");
}

inline KernelGrid read_grid(std::istream& is)
{
    char magic[8];
    if (!is.read(magic, 8) || std::string(magic, 8) != "ALGRID01")
        throw IoError("grid: bad magic");
    KernelGrid g;
    g.N = detail::get_le<std::uint64_t>(is);
    const auto dtype = detail::get_le<std::uint32_t>(is);
    detail::get_le<std::uint32_t>(is);
    g.max_freq = static_cast<std::int64_t>(detail::get_le<std::uint64_t>(is));
    if (dtype != 1 && dtype != 2)
        throw IoError("grid: unknown dtype");
    if (g.N == 0 || g.N > (std::size_t{1} << 16))
        throw IoError("grid: implausible size");
    g.samples.resize(g.N * g.N);
    for (auto& z : g.samples) {
        if (dtype == 1) {
            const float re = detail::get_float<float, std::uint32_t>(is);
            const float im = detail::get_float<float, std::uint32_t>(is);
            z = {re, im};
        } else {
            const double re = detail::get_float<double, std::uint64_t>(is);
            const double im = detail::get_float<double, std::uint64_t>(is);
            z = {re, im};
        }
    }
    return g;
}

} // namespace annulus_lab
