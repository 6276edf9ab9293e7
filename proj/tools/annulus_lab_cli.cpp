// annulus-lab: command-line front end.
//
// Exit codes: 0 ok, 1 I/O or unexpected failure, 2 bad arguments,
// 3 capacity exceeded, 4 failed internal consistency check.

#include "annulus_lab/annulus_lab.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace al = annulus_lab;

namespace {

struct Options
{
    std::optional<double> lambda, delta, alpha, scale, lmin, lmax, a, b, angle, level, x1, x2;
    std::string p = "";
    double oversampling = 4.0;
    std::uint64_t seed = 0;
    std::string out, format = "csv", which, quantity = "point-count", curve = "circle", method = "automatic",
                grid_out, dtype = "c128";
    bool plot = false, crosscheck = false, eta = false, consistency = false;
    int m = 3;
    int n = 0;
    std::size_t samples = 64;
    double threshold_constant = 4.0;
};

double parse_p(const std::string& s)
{
    if (s == "inf" || s == "infinity")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size())
            return v;
    } catch (const std::logic_error&) {
    }
    throw al::ArgumentError("--p: expected a number or 'inf', got '" + s + "'");
}

std::vector<double> parse_ps(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_p(item));
    if (out.empty())
        throw al::ArgumentError("--p: empty list");
    return out;
}

double need(const std::optional<double>& v, const char* flag)
{
    if (!v)
        throw al::ArgumentError(std::string("missing ") + flag);
    return *v;
}

/// δ from exactly one of --delta and --alpha (δ = λ^{−α}).
double resolve_delta(const Options& o, double lambda)
{
    if (o.delta && o.alpha)
        throw al::ArgumentError("give exactly one of --delta and --alpha");
    if (o.delta)
        return *o.delta;
    if (o.alpha)
        return std::pow(lambda, -*o.alpha);
    throw al::ArgumentError("missing --delta or --alpha");
}

al::AnnulusSpec annulus_from(const Options& o)
{
    const double lambda = need(o.lambda, "--lambda");
    al::AnnulusSpec spec{lambda, resolve_delta(o, lambda)};
    spec.validate();
    return spec;
}

bool json_format(const Options& o)
{
    if (o.format == "json")
        return true;
    if (o.format == "csv")
        return false;
    throw al::ArgumentError("--format must be csv or json");
}

class Output
{
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw al::IoError("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    void finish()
    {
        stream().flush();
        if (!stream())
            throw al::IoError("write failed");
    }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string plot_path(const Options& o, const std::string& command)
{
    if (o.out.empty())
        return command + ".svg";
    return std::filesystem::path(o.out).replace_extension(".svg").string();
}

void write_json(Output& out, const al::json& j) { out.stream() << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

int cmd_points(const Options& o)
{
    const double lambda = need(o.lambda, "--lambda");
    const double delta = resolve_delta(o, lambda);
    al::LatticeSet set;
    if (o.curve == "circle") {
        set = al::enumerate_annulus({lambda, delta});
    } else if (o.curve == "ellipse") {
        set = al::enumerate_curve_neighborhood(al::CurveSpec::ellipse(need(o.a, "--a"), need(o.b, "--b")), lambda, delta);
    } else if (o.curve == "parabola") {
        set = al::enumerate_curve_neighborhood(al::CurveSpec::parabola(), lambda, delta);
    } else {
        throw al::ArgumentError("--curve must be circle, ellipse or parabola");
    }
    Output out(o.out);
    if (json_format(o))
        write_json(out, al::lattice_to_json(set));
    else
        al::write_lattice_csv(out.stream(), set);
    out.finish();
    if (o.plot) {
        al::PlotSpec plot;
        plot.title = "lattice points";
        plot.x_label = "x";
        plot.y_label = "y";
        al::PlotSeries s;
        s.label = o.curve + " neighbourhood (" + std::to_string(set.size()) + " points)";
        s.connect = false;
        for (const auto& p : set.points)
            s.points.emplace_back(static_cast<double>(p.x), static_cast<double>(p.y));
        plot.series.push_back(std::move(s));
        al::emit_svg(plot, plot_path(o, "points"));
    }
    return 0;
}

int cmd_caps(const Options& o)
{
    const al::AnnulusSpec spec = annulus_from(o);
    const al::LatticeSet set = al::enumerate_annulus(spec);
    Output out(o.out);
    std::vector<al::CensusRow> rows;
    al::json j;
    if (o.eta) {
        const al::EtaCensus c = al::eta_regime_census(set);
        rows = al::census_rows(c);
        j = al::census_to_json(c);
    } else {
        const double ell = o.scale.value_or(al::canonical_cap_length(spec));
        const al::CapPartition part = al::partition(set, ell);
        const al::CapCensus c = al::census(part, o.threshold_constant);
        rows = al::census_rows(c);
        j = al::census_to_json(c);
        j["n_caps"] = part.n_caps;
        j["implied_beta"] = part.implied_beta();
    }
    if (json_format(o))
        write_json(out, j);
    else
        al::write_census_csv(out.stream(), rows);
    out.finish();
    if (o.plot) {
        al::PlotSpec plot;
        plot.title = o.eta ? "small-cap regimes" : "cap census";
        plot.x_label = o.eta ? "case" : "s";
        plot.y_label = "count";
        al::PlotSeries s;
        s.label = "caps";
        int k = 0;
        for (const auto& r : rows) {
            if (o.eta)
                s.points.emplace_back(++k, static_cast<double>(r.count));
            else if (r.regime == "C_s")
                s.points.emplace_back(std::stod(r.s), static_cast<double>(r.count));
        }
        plot.series.push_back(std::move(s));
        al::emit_svg(plot, plot_path(o, "caps"));
    }
    return 0;
}

al::FourierSupport support_for(const Options& o, const al::AnnulusSpec& spec)
{
    if (o.which.empty() || o.which == "spherical")
        return al::FourierSupport::all_ones(al::enumerate_annulus(spec));
    if (o.which == "knapp")
        return al::knapp_support(spec, o.angle.value_or(0.0));
    throw al::ArgumentError("--which must be spherical or knapp");
}

int cmd_kernel_norm(const Options& o)
{
    const al::AnnulusSpec spec = annulus_from(o);
    const al::FourierSupport f = support_for(o, spec);
    const std::vector<double> ps = parse_ps(o.p.empty() ? "2,4,6,8,inf" : o.p);
    const al::GridOptions grid{o.oversampling};
    std::vector<al::NormReport> reports = al::lp_norms(f, ps, grid);
    if (!o.grid_out.empty()) {
        const al::KernelGrid g = al::synthesize(f, grid);
        std::ofstream bin(o.grid_out, std::ios::binary);
        if (!bin)
            throw al::IoError("cannot open '" + o.grid_out + "' for writing");
        if (o.dtype != "c64" && o.dtype != "c128")
            throw al::ArgumentError("--dtype must be c64 or c128");
        al::write_grid(bin, g, o.dtype == "c64" ? al::GridDtype::complex64 : al::GridDtype::complex128);
    }
    Output out(o.out);
    if (json_format(o)) {
        al::json j;
        j["lambda"] = spec.lambda;
        j["delta"] = spec.delta;
        j["support"] = o.which.empty() ? "spherical" : o.which;
        j["points"] = f.size();
        j["l2"] = f.l2_norm();
        al::json arr = al::json::array();
        for (const auto& r : reports)
            arr.push_back(al::to_json(r));
        j["norms"] = arr;
        write_json(out, j);
    } else {
        out.stream() << "p,value,method,oversampling,error,ratio\n";
        for (const auto& r : reports)
            out.stream() << al::format_double(r.p) << ',' << al::format_double(r.value) << ',' << al::to_string(r.method)
                         << ',' << al::format_double(r.oversampling) << ',' << al::format_double(r.error_estimate) << ','
                         << al::format_double(f.empty() ? 0.0 : r.value / f.l2_norm()) << '\n';
    }
    out.finish();
    if (o.plot) {
        al::PlotSpec plot;
        plot.title = "L^p norms";
        plot.x_label = "p";
        plot.y_label = "norm";
        al::PlotSeries s;
        s.label = o.which.empty() ? "spherical" : o.which;
        for (const auto& r : reports)
            if (std::isfinite(r.p))
                s.points.emplace_back(r.p, r.value);
        plot.series.push_back(std::move(s));
        al::emit_svg(plot, plot_path(o, "kernel-norm"));
    }
    return 0;
}

al::EnergyMethod parse_method(const std::string& s)
{
    for (auto m : {al::EnergyMethod::automatic, al::EnergyMethod::hash, al::EnergyMethod::dense_convolution,
                   al::EnergyMethod::transform_convolution})
        if (s == al::to_string(m))
            return m;
    throw al::ArgumentError("--method must be automatic, hash, dense-convolution or transform-convolution");
}

int cmd_energy(const Options& o)
{
    const double lambda = need(o.lambda, "--lambda");
    const double delta = resolve_delta(o, lambda);
    al::LatticeSet set = o.curve == "parabola" ? al::enumerate_curve_neighborhood(al::CurveSpec::parabola(), lambda, delta)
                                               : al::enumerate_annulus({lambda, delta});
    al::EnergyOptions eo;
    eo.method = parse_method(o.method);
    const al::EnergyReport e = al::additive_energy(set, o.m, eo);
    std::optional<al::CrosscheckRecord> cc;
    if (o.crosscheck) {
        cc = al::energy_lp_crosscheck(set, 2 * o.m, o.oversampling, eo);
        if (cc->flagged)
            throw al::IntegrityError("energy and quadrature disagree beyond the error estimate");
    }
    Output out(o.out);
    if (json_format(o)) {
        al::json j = al::to_json(e);
        if (cc)
            j["crosscheck"] = al::to_json(*cc);
        write_json(out, j);
    } else {
        out.stream() << "m,energy,set_size,method,energy_over_P_m,cauchy_schwarz_ratio\n";
        out.stream() << e.m << ',' << al::to_decimal(e.energy) << ',' << e.set_size << ',' << al::to_string(e.method) << ','
                     << al::format_double(e.diagonal_ratio()) << ',' << al::format_double(e.cauchy_schwarz_ratio()) << '\n';
    }
    out.finish();
    return 0;
}

/// Knapp versus spherical test functions (circle), or the parabola kernel.
int cmd_examples(const Options& o)
{
    const double p = parse_p(o.p.empty() ? "6" : o.p);
    const al::GridOptions grid{o.oversampling};
    Output out(o.out);
    if (o.curve == "parabola") {
        if (o.n < 2)
            throw al::ArgumentError("parabola example needs --n >= 2");
        const double lambda = static_cast<double>(o.n) * o.n;
        const double delta = o.delta.value_or(1e-6);
        const al::LatticeSet set = al::enumerate_curve_neighborhood(al::CurveSpec::parabola(), lambda, delta);
        const al::NormReport r = al::lp_norm(al::FourierSupport::all_ones(set), p, grid);
        const double power = std::pow(r.value, p);
        const double reference = std::pow(lambda, p / 2.0 - 1.5);
        if (json_format(o)) {
            al::json j;
            j["curve"] = "parabola";
            j["n"] = o.n;
            j["lambda"] = lambda;
            j["delta"] = delta;
            j["points"] = set.size();
            j["p"] = al::json_number(p);
            j["norm_p_power"] = power;
            j["lambda_power_reference"] = reference;
            j["ratio"] = power / reference;
            j["norm"] = al::to_json(r);
            write_json(out, j);
        } else {
            out.stream() << "n,lambda,points,p,norm_p_power,reference,ratio\n"
                         << o.n << ',' << al::format_double(lambda) << ',' << set.size() << ',' << al::format_double(p) << ','
                         << al::format_double(power) << ',' << al::format_double(reference) << ','
                         << al::format_double(power / reference) << '\n';
        }
        out.finish();
        return 0;
    }
    const al::AnnulusSpec spec = annulus_from(o);
    const al::FourierSupport knapp = al::knapp_support(spec, o.angle.value_or(0.0));
    const al::FourierSupport sphere = al::FourierSupport::all_ones(al::enumerate_annulus(spec));
    const double rk = knapp.empty() ? 0.0 : al::ratio_2_to_p(knapp, p, grid);
    const double rs = sphere.empty() ? 0.0 : al::ratio_2_to_p(sphere, p, grid);
    const double u = std::isinf(p) ? 0.0 : 1.0 / p;
    const double spherical_term = std::pow(spec.lambda, 0.5 - 2.0 * u) * std::sqrt(spec.delta);
    const double knapp_term = std::pow(spec.lambda * spec.delta, 0.25 - 0.5 * u);
    const char* larger = rs >= rk ? "spherical" : "knapp";
    if (json_format(o)) {
        al::json j;
        j["lambda"] = spec.lambda;
        j["delta"] = spec.delta;
        j["alpha"] = al::alpha_of(spec.lambda, spec.delta);
        j["p"] = al::json_number(p);
        j["knapp"] = {{"points", knapp.size()}, {"ratio", rk}, {"envelope_term", knapp_term}};
        j["spherical"] = {{"points", sphere.size()}, {"ratio", rs}, {"envelope_term", spherical_term}};
        j["larger_ratio"] = larger;
        j["larger_envelope_term"] = spherical_term >= knapp_term ? "spherical" : "knapp";
        write_json(out, j);
    } else {
        out.stream() << "example,points,ratio,envelope_term\n"
                     << "knapp," << knapp.size() << ',' << al::format_double(rk) << ',' << al::format_double(knapp_term) << '\n'
                     << "spherical," << sphere.size() << ',' << al::format_double(rs) << ','
                     << al::format_double(spherical_term) << '\n';
    }
    out.finish();
    return 0;
}

int cmd_expsum(const Options& o)
{
    const double lambda = need(o.lambda, "--lambda");
    const double delta = resolve_delta(o, lambda);
    Output out(o.out);
    if (o.level) {
        // Single dyadic level: one sample per seeded x (or the given x).
        std::vector<al::ExpSumSample> samples;
        if (o.x1 || o.x2) {
            samples.push_back(al::exp_sum_S(lambda, delta, *o.level, o.x1.value_or(0.0), o.x2.value_or(0.0)));
        } else {
            al::CounterRng rng(o.seed, 0x5e);
            for (std::size_t i = 0; i < o.samples; ++i) {
                const double x1 = rng.uniform();
                const double x2 = rng.uniform();
                samples.push_back(al::exp_sum_S(lambda, delta, *o.level, x1, x2));
            }
        }
        if (json_format(o)) {
            al::json arr = al::json::array();
            for (const auto& s : samples)
                arr.push_back(al::to_json(s));
            write_json(out, arr);
        } else {
            out.stream() << "M,x1,x2,re,im,abs,trivial,muller,c_psi,regime_warning\n";
            for (const auto& s : samples)
                out.stream() << al::format_double(s.M) << ',' << al::format_double(s.x1) << ',' << al::format_double(s.x2)
                             << ',' << al::format_double(s.value.real()) << ',' << al::format_double(s.value.imag()) << ','
                             << al::format_double(std::abs(s.value)) << ',' << al::format_double(s.trivial_bound) << ','
                             << al::format_double(s.muller_bound) << ',' << al::format_double(s.c_psi) << ','
                             << (s.regime_warning ? 1 : 0) << '\n';
        }
        out.finish();
        return 0;
    }
    const al::DyadicReport rep = al::dyadic_bound_report(lambda, delta, o.samples, o.seed);
    for (const auto& row : rep.rows)
        if (row.emp_sup > row.trivial_envelope * (1.0 + 1e-12))
            throw al::IntegrityError("exponential sum exceeds its triangle-inequality envelope");
    if (json_format(o))
        write_json(out, al::to_json(rep));
    else
        al::write_dyadic_csv(out.stream(), rep);
    out.finish();
    if (rep.fit)
        std::cerr << "fit: M-exponent " << al::format_double(rep.fit->slope) << '\n';
    if (o.plot) {
        al::PlotSpec plot;
        plot.title = "dyadic exponential sums";
        plot.x_label = "M";
        plot.y_label = "sup |S|";
        plot.log_log = true;
        al::PlotSeries emp{"empirical sup", {}, true}, triv{"trivial", {}, true}, mul{"Muller", {}, true};
        for (const auto& r : rep.rows) {
            if (r.emp_sup > 0)
                emp.points.emplace_back(r.M, r.emp_sup);
            triv.points.emplace_back(r.M, r.trivial);
            mul.points.emplace_back(r.M, r.muller);
        }
        plot.series = {emp, triv, mul};
        al::emit_svg(plot, plot_path(o, "expsum"));
    }
    return 0;
}

int cmd_sweep(const Options& o)
{
    al::SweepConfig cfg;
    cfg.quantity = al::parse_quantity(o.quantity);
    cfg.p = parse_p(o.p.empty() ? "6" : o.p);
    if (o.delta)
        throw al::ArgumentError("sweep takes --alpha (delta = lambda^-alpha), not --delta");
    cfg.alpha = need(o.alpha, "--alpha");
    cfg.lambdas = al::geometric_grid(o.lmin.value_or(128.0), o.lmax.value_or(4096.0));
    cfg.m = o.m;
    cfg.oversampling = o.oversampling;
    cfg.knapp_angle = o.angle.value_or(0.0);
    cfg.seed = o.seed;
    const std::vector<al::SweepRow> rows = al::run_sweep(cfg);
    std::optional<al::FitResult> fit;
    std::size_t ok = 0;
    for (const auto& r : rows)
        ok += r.ok ? 1 : 0;
    if (ok >= 3)
        fit = al::fit_loglog(rows);
    Output out(o.out);
    if (json_format(o)) {
        al::json j;
        al::json arr = al::json::array();
        for (const auto& r : rows)
            arr.push_back(al::to_json(r));
        j["rows"] = arr;
        j["fit"] = fit ? al::to_json(*fit) : al::json(nullptr);
        write_json(out, j);
    } else {
        al::write_sweep_csv(out.stream(), rows);
    }
    out.finish();
    if (fit && !json_format(o))
        std::cerr << "fit: " << al::to_json(*fit).dump() << '\n';
    if (o.plot) {
        al::PlotSpec plot;
        plot.title = std::string("sweep: ") + al::to_string(cfg.quantity);
        plot.x_label = "lambda";
        plot.y_label = al::to_string(cfg.quantity);
        plot.log_log = true;
        al::PlotSeries s{"measured", {}, true};
        for (const auto& r : rows)
            if (r.ok && r.value > 0)
                s.points.emplace_back(r.lambda, r.value);
        plot.series.push_back(std::move(s));
        if (fit)
            plot.references.push_back({"fit slope " + al::format_double(std::round(fit->slope * 1000) / 1000), fit->slope,
                                       fit->intercept});
        al::emit_svg(plot, plot_path(o, "sweep"));
    }
    return 0;
}

al::Conjecture parse_which(const std::string& s)
{
    if (s == "A")
        return al::Conjecture::A;
    if (s == "B")
        return al::Conjecture::B;
    throw al::ArgumentError("--which must be A or B");
}

int cmd_regions(const Options& o)
{
    const al::Conjecture which = parse_which(o.which.empty() ? "A" : o.which);
    Output out(o.out);
    al::json j;
    j["which"] = al::to_string(which);
    if (!o.p.empty() || o.alpha) {
        const al::RegimePoint pt{parse_p(o.p.empty() ? "6" : o.p), need(o.alpha, "--alpha")};
        const al::RegionStatus st = al::status(which, pt);
        j["p"] = al::json_number(pt.p);
        j["alpha"] = pt.alpha;
        j["status"] = al::to_string(st.status);
        j["source"] = st.source;
        j["boundary_alpha"] = al::regime_boundary(which, pt.p);
        const al::CurveSide side = al::side_of(which, pt);
        j["side"] = al::to_string(side);
        if (st.status != al::Status::open)
            j["regions"] = al::regions_to_json(al::propagate({{which, pt, side}}));
    }
    if (o.consistency) {
        const al::ConsistencyReport rep = al::check_region_consistency(which);
        j["consistency"] = {{"generators", rep.generators},
                            {"checked", rep.checked},
                            {"violations", rep.violations},
                            {"open_in_proved", rep.open_in_proved},
                            {"eps_reaching_open", rep.eps_reaching_open}};
        if (rep.violations != 0)
            throw al::IntegrityError("region propagation contradicts the encoded statuses");
    }
    write_json(out, j);
    out.finish();
    if (o.plot) {
        al::PlotSpec plot;
        plot.title = std::string("regions for ") + al::to_string(which);
        plot.x_label = "1/p";
        plot.y_label = "alpha";
        al::PlotSeries proved{"proved", {}, false}, eps{"proved with eps loss", {}, false}, open{"open", {}, false},
            curve{"red curve", {}, true};
        for (int i = 0; i <= 40; ++i)
            for (int k = 0; k <= 40; ++k) {
                const double u = 0.5 * i / 40.0;
                const double alpha = k / 40.0;
                const double p = u == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / u;
                auto& dst = [&]() -> al::PlotSeries& {
                    switch (al::status(which, {p, alpha}).status) {
                    case al::Status::proved: return proved;
                    case al::Status::proved_with_eps: return eps;
                    case al::Status::open: break;
                    }
                    return open;
                }();
                dst.points.emplace_back(u, alpha);
            }
        for (int i = 0; i <= 100; ++i) {
            const double u = 0.5 * i / 100.0;
            const double p = u == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / u;
            const double c = al::regime_boundary(which, p);
            if (c >= 0.0)
                curve.points.emplace_back(u, c);
        }
        plot.series = {proved, eps, open, curve};
        al::emit_svg(plot, plot_path(o, "regions"));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"annulus-lab: lattice points in thin annuli, their kernels and energies"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    app.allow_config_extras(false);

    Options o;
    app.add_option("--lambda", o.lambda, "radius lambda");
    app.add_option("--delta", o.delta, "half-width delta");
    app.add_option("--alpha", o.alpha, "delta = lambda^-alpha");
    app.add_option("--p", o.p, "exponent p (number or inf; kernel-norm accepts a comma list)");
    app.add_option("--scale", o.scale, "cap length (default (lambda*delta)^1/2)");
    app.add_option("--oversampling", o.oversampling, "grid oversampling factor (>= 2)");
    app.add_option("--seed", o.seed, "seed for sampled points");
    app.add_option("--out", o.out, "output path (default stdout)");
    app.add_option("--format", o.format, "csv or json");
    app.add_flag("--plot", o.plot, "also write an SVG chart next to --out");
    app.add_option("--m", o.m, "energy order (2 or 3)");
    app.add_option("--which", o.which, "A|B for regions, knapp|spherical for kernel-norm");
    app.add_option("--quantity", o.quantity, "sweep quantity");
    app.add_option("--lmin", o.lmin, "smallest lambda of a sweep");
    app.add_option("--lmax", o.lmax, "largest lambda of a sweep");
    app.add_option("--curve", o.curve, "circle, ellipse or parabola");
    app.add_option("--a", o.a, "ellipse semi-axis along x");
    app.add_option("--b", o.b, "ellipse semi-axis along y");
    app.add_option("--n", o.n, "parabola example: lambda = n^2");
    app.add_option("--angle", o.angle, "Knapp cap direction in radians");
    app.add_option("--method", o.method, "energy method");
    app.add_flag("--crosscheck", o.crosscheck, "compare the energy with the L^p quadrature");
    app.add_flag("--eta", o.eta, "caps: small caps of length 1/(100 delta) and their regimes");
    app.add_option("--threshold-constant", o.threshold_constant, "caps: C0 threshold constant");
    app.add_option("--level", o.level, "expsum: a single dyadic level M");
    app.add_option("--x1", o.x1, "expsum: evaluation point");
    app.add_option("--x2", o.x2, "expsum: evaluation point");
    app.add_option("--samples", o.samples, "expsum: number of seeded points");
    app.add_option("--grid-out", o.grid_out, "kernel-norm: binary grid export path");
    app.add_option("--dtype", o.dtype, "kernel-norm: c64 or c128");
    app.add_flag("--consistency", o.consistency, "regions: run the grid consistency check");

    auto* points = app.add_subcommand("points", "lattice points of an annulus or curve neighbourhood");
    auto* caps = app.add_subcommand("caps", "cap partition census");
    auto* kernel = app.add_subcommand("kernel-norm", "L^p norms of the annulus kernel or a Knapp function");
    auto* energy = app.add_subcommand("energy", "exact additive energy");
    auto* examples = app.add_subcommand("examples", "Knapp versus spherical test functions, or the parabola kernel");
    auto* expsum = app.add_subcommand("expsum", "dyadic exponential sums");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep with a log-log fit");
    auto* regions = app.add_subcommand("regions", "theorem status of (p, alpha) points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*points)
            return cmd_points(o);
        if (*caps)
            return cmd_caps(o);
        if (*kernel)
            return cmd_kernel_norm(o);
        if (*energy)
            return cmd_energy(o);
        if (*examples)
            return cmd_examples(o);
        if (*expsum)
            return cmd_expsum(o);
        if (*sweep)
            return cmd_sweep(o);
        if (*regions)
            return cmd_regions(o);
    } catch (const al::Error& e) {
        std::cerr << "annulus-lab: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::bad_alloc&) {
        std::cerr << "annulus-lab: out of memory\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "annulus-lab: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
