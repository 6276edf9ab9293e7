#include "annulus_lab/serialize.hpp"
#include "annulus_lab/svg.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace annulus_lab;

TEST(LatticeIo, CsvRoundTrip)
{
    const LatticeSet s = enumerate_annulus({17.0, 0.8});
    std::stringstream ss;
    write_lattice_csv(ss, s);
    EXPECT_EQ(ss.str().substr(0, 4), "x,y\n");
    const LatticeSet back = read_lattice_csv(ss);
    EXPECT_EQ(back.points, s.points);
}

TEST(LatticeIo, JsonRoundTrip)
{
    const LatticeSet s = enumerate_annulus({9.0, 0.6});
    const json j = lattice_to_json(s);
    const LatticeSet back = lattice_from_json(json::parse(j.dump()));
    EXPECT_EQ(back.points, s.points);
}

TEST(LatticeIo, MalformedInput)
{
    std::stringstream no_header("1,2\n");
    EXPECT_THROW(read_lattice_csv(no_header), IoError);
    std::stringstream bad("x,y\n1;2\n");
    EXPECT_THROW(read_lattice_csv(bad), IoError);
    std::stringstream trailing("x,y\n1,2z\n");
    EXPECT_THROW(read_lattice_csv(trailing), IoError);
    EXPECT_THROW(lattice_from_json(json::parse("{\"a\":1}")), IoError);
    EXPECT_THROW(lattice_from_json(json::parse("[[1,2,3]]")), IoError);
}

TEST(Numbers, Formatting)
{
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(json_number(std::numeric_limits<double>::infinity()), json("inf"));
    EXPECT_EQ(json_number(2.0), json(2.0));
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(EnergyJson, DecimalString)
{
    const EnergyReport e = additive_energy(enumerate_annulus({5.0, 0.01}), 3);
    const json j = to_json(e);
    EXPECT_EQ(j["energy"], "21360");
    EXPECT_EQ(j["m"], 3);
    EXPECT_EQ(j["set_size"], 12);
    EXPECT_TRUE(j.contains("diagnostics"));
}

TEST(CensusCsv, Schema)
{
    const AnnulusSpec spec{200.0, 0.5};
    const CapCensus c = census(partition(enumerate_annulus(spec), canonical_cap_length(spec)));
    std::stringstream ss;
    write_census_csv(ss, census_rows(c));
    std::string header;
    std::getline(ss, header);
    EXPECT_EQ(header, "scale,s,m,regime,count,ratio");
    std::size_t lines = 0;
    for (std::string line; std::getline(ss, line);)
        ++lines;
    EXPECT_EQ(lines, census_rows(c).size());
}

TEST(GridIo, RoundTripBothDtypes)
{
    const KernelGrid g = synthesize(FourierSupport::all_ones(enumerate_annulus({6.0, 0.4})));
    for (auto dtype : {GridDtype::complex64, GridDtype::complex128}) {
        std::stringstream ss;
        write_grid(ss, g, dtype);
        const std::string bytes = ss.str();
        const std::size_t each = dtype == GridDtype::complex64 ? 8 : 16;
        EXPECT_EQ(bytes.size(), 32 + g.N * g.N * each);
        EXPECT_EQ(bytes.substr(0, 8), "ALGRID01");
        const KernelGrid back = read_grid(ss);
        ASSERT_EQ(back.N, g.N);
        EXPECT_EQ(back.max_freq, g.max_freq);
        const double tol = dtype == GridDtype::complex64 ? 1e-5 : 0.0;
        for (std::size_t i = 0; i < g.samples.size(); ++i)
            ASSERT_LE(std::abs(back.samples[i] - g.samples[i]), tol * 40.0);
    }
    std::stringstream junk("NOTAGRID");
    EXPECT_THROW(read_grid(junk), IoError);
}

TEST(Svg, EmptySeriesHasAxes)
{
    PlotSpec p;
    p.title = "empty";
    const std::string s = render_svg(p);
    EXPECT_NE(s.find("<svg"), std::string::npos);
    EXPECT_NE(s.find("<line"), std::string::npos);
    EXPECT_NE(s.find("</svg>"), std::string::npos);
}

TEST(Svg, LogLogWithReference)
{
    PlotSpec p;
    p.log_log = true;
    p.series.push_back({"data & more", {{1, 1}, {10, 100}, {100, 10000}}, true});
    p.references.push_back({"slope 2", 2.0, 0.0});
    const std::string s = render_svg(p);
    EXPECT_NE(s.find("<polyline"), std::string::npos);
    EXPECT_NE(s.find("stroke-dasharray"), std::string::npos);
    EXPECT_NE(s.find("data &amp; more"), std::string::npos);
    EXPECT_EQ(s, render_svg(p));
}

TEST(Svg, RejectsInvalid)
{
    PlotSpec p;
    p.log_log = true;
    p.series.push_back({"bad", {{1, 0}}, false});
    EXPECT_THROW(render_svg(p), ArgumentError);
    PlotSpec q;
    q.series.push_back({"nan", {{1, std::nan("")}}, false});
    EXPECT_THROW(render_svg(q), ArgumentError);
    EXPECT_THROW(emit_svg(PlotSpec{}, "/nonexistent-dir/x.svg"), IoError);
}

TEST(Svg, DeterministicFile)
{
    PlotSpec p;
    p.series.push_back({"a", {{0, 1}, {1, 3}, {2, 2}}, true});
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = (dir / "annulus_lab_svg_a.svg").string();
    const auto b = (dir / "annulus_lab_svg_b.svg").string();
    emit_svg(p, a);
    emit_svg(p, b);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    EXPECT_EQ(sa.str(), sb.str());
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}
