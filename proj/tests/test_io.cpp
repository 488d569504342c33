#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcpack/io.hpp"
#include "gcpack/render.hpp"
#include "support.hpp"

using namespace gcp;
using Eigen::VectorXd;

namespace
{

ParseError parse_failure(const std::string& text)
{
    try {
        parse_triangulation(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("no ParseError");
    return ParseError("", 0, "");
}

struct SvgCircle {
    std::string cls;
    double cx, cy, r;
};

std::vector<SvgCircle> svg_circles(const std::string& svg)
{
    static const std::regex pattern(R"re(<circle class="(\w+)" cx="([-0-9.]+)" cy="([-0-9.]+)" r="([-0-9.]+)")re");
    std::vector<SvgCircle> out;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pattern); it != std::sregex_iterator(); ++it) {
        out.push_back({(*it)[1], std::stod((*it)[2]), std::stod((*it)[3]), std::stod((*it)[4])});
    }
    return out;
}

}  // namespace

TEST_CASE("triangulation documents")
{
    const Triangulation tri = load_triangulation(GCP_TEST_DATA "/tetrahedron.json");
    CHECK(tri.num_vertices() == 4);
    CHECK(tri.num_faces() == 4);
    CHECK(load_targets(GCP_TEST_DATA "/tetrahedron.json", 4) == std::vector<double>(4, 1.0));
}

TEST_CASE("parse errors carry line and field")
{
    SUBCASE("syntax")
    {
        const ParseError e = parse_failure(read_file(GCP_TEST_DATA "/malformed.json"));
        CHECK(e.line() == 3);
    }
    SUBCASE("index out of range")
    {
        const ParseError e = parse_failure(read_file(GCP_TEST_DATA "/bad_index.json"));
        CHECK(e.line() == 5);
        CHECK(e.field() == "faces[1][2]");
    }
    SUBCASE("short face")
    {
        const ParseError e = parse_failure("{\"num_vertices\": 3,\n\"faces\": [\n[0, 1]\n]}");
        CHECK(e.line() == 3);
        CHECK(e.field() == "faces[0]");
    }
    SUBCASE("missing and mistyped fields")
    {
        CHECK(parse_failure("{\"faces\": []}").field() == "num_vertices");
        CHECK(parse_failure("{\"num_vertices\": -2, \"faces\": []}").field() == "num_vertices");
        CHECK(parse_failure("{\"num_vertices\": 3, \"faces\": 4}").field() == "faces");
        CHECK(parse_failure("[1, 2]").line() == 1);
    }
    SUBCASE("targets")
    {
        try {
            parse_targets("{\n\"L_hat\": [1.0,\n -2.0]\n}", 2);
            FAIL("no ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
            CHECK(e.field() == "L_hat[1]");
        }
        CHECK_THROWS_AS(parse_targets("{\"L_hat\": [1.0]}", 2), ParseError);
        CHECK_THROWS_AS(parse_targets("{}", 2), ParseError);
        CHECK_THROWS_AS(read_file("/nonexistent/file.json"), ParseError);
    }
}

TEST_CASE("solve report")
{
    const Triangulation tri = test::tetrahedron();
    const std::vector<double> targets(4, 1.0);
    FlowConfig config;
    const SolveResult<double> result = solve<double>(tri, VectorXd::Ones(4), config);
    const RealizedMetric<double> metric = realize(tri, result.K);
    const ReportContext ctx{tri, targets, config, kClassTolerance};
    const std::string a = solve_report(ctx, result, metric, rate_estimate(result.trace, config));
    const std::string b = solve_report(ctx, solve<double>(tri, VectorXd::Ones(4), config), metric,
                                       rate_estimate(result.trace, config));
    CHECK(a == b);

    const auto doc = nlohmann::json::parse(a);
    CHECK(doc["schema_version"] == kReportSchemaVersion);
    CHECK(doc["status"] == "converged");
    CHECK(doc["vertices"].size() == 4);
    for (const auto& v : doc["vertices"]) {
        CHECK(v["class"] == "boundary");
        CHECK(v["boundary_segments"] == 3);
    }
    CHECK(doc["global"]["audit_residual"].get<double>() < 1e-8);
    CHECK(doc["global"]["chi_S"] == 2);
    CHECK(doc["solver"]["stepper"] == "adaptive");

    const SolveResult<double> bad = solve<double>(tri, (VectorXd(4) << 10, 1, 1, 1).finished(), config);
    const auto bad_doc = nlohmann::json::parse(solve_report(ctx, bad, std::nullopt, std::nullopt));
    CHECK(bad_doc["status"] == "infeasible");
    CHECK(bad_doc["witness"] == std::vector<int>{0});
    CHECK_FALSE(bad_doc.contains("vertices"));
    CHECK(bad_doc["solver"]["rate"].is_null());
}

TEST_CASE("trajectory export")
{
    const Triangulation tri = test::tetrahedron();
    FlowConfig config;
    config.use_newton = false;
    const SolveResult<double> result = solve<double>(tri, VectorXd::Ones(4), config);
    std::ostringstream out;
    write_trajectory_csv(out, result.trace, 4);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# vertices=4");
    std::getline(in, line);
    CHECK(line == "t,residual_max,residual_2norm,K_0,K_1,K_2,K_3");
    std::size_t rows = 0;
    double last_t = -1.0;
    while (std::getline(in, line)) {
        const double t = std::stod(line.substr(0, line.find(',')));
        CHECK(t > last_t);
        CHECK(std::count(line.begin(), line.end(), ',') == 6);
        last_t = t;
        ++rows;
    }
    CHECK(rows == result.trace.samples.size());
    // round trip of the last state
    const auto& last = result.trace.samples.back();
    const std::string tail = out.str().substr(out.str().rfind(',') + 1);
    CHECK(std::stod(tail) == last.K[3]);
}

TEST_CASE("SVG rendering")
{
    SUBCASE("deterministic")
    {
        CHECK(render_face_svg(2.0, 0.5, 1.0) == render_face_svg(2.0, 0.5, 1.0));
        CHECK(render_face_svg(2.0, 0.5, 1.0) != render_face_svg(2.0, 0.5, 1.1));
    }
    SUBCASE("horocycles touch the boundary circle from inside")
    {
        SvgOptions options;
        options.precision = 9;
        const std::string svg = render_face_svg(1.0, 1.0, 1.0, options);
        const double half = 0.5 * options.size;
        const double scale = half - options.margin;
        int horocycles = 0;
        for (const SvgCircle& c : svg_circles(svg)) {
            if (c.cls != "horocycle") continue;
            ++horocycles;
            const double dist = std::hypot(c.cx - half, c.cy - half);
            CHECK(std::abs(dist + c.r - scale) < 1e-6);
        }
        CHECK(horocycles == 3);
        CHECK(svg.find("<line") == std::string::npos);
    }
    SUBCASE("circles keep their hyperbolic radius")
    {
        SvgOptions options;
        options.precision = 9;
        const double half = 0.5 * options.size;
        const double scale = half - options.margin;
        int circles = 0;
        for (const SvgCircle& c : svg_circles(render_face_svg(2.0, 2.0, 2.0, options))) {
            if (c.cls != "circle") continue;
            ++circles;
            // ends of the diameter through the origin, in disk units
            const double d = std::hypot(c.cx - half, c.cy - half) / scale;
            const double rho = c.r / scale;
            const double r = std::atanh(d + rho) - std::atanh(d - rho);
            CHECK(r == doctest::Approx(std::atanh(0.5)).epsilon(1e-6));
        }
        CHECK(circles == 3);
    }
    SUBCASE("tangency dots are optional")
    {
        SvgOptions options;
        options.show_tangency = false;
        CHECK(render_face_svg(0.5, 0.5, 0.5, options).find("tangency") == std::string::npos);
        CHECK(render_face_svg(0.5, 0.5, 0.5).find("tangency") != std::string::npos);
    }
    SUBCASE("argument checks")
    {
        SvgOptions options;
        options.margin = 400;
        CHECK_THROWS_AS(render_face_svg(1, 1, 1, options), DomainError);
        CHECK_THROWS_AS(render_face_svg(0, 1, 1), DomainError);
    }
}
