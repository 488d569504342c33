#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gcpack/flow.hpp"
#include "gcpack/io.hpp"
#include "gcpack/realize.hpp"
#include "support.hpp"

using namespace gcp;
using gcp::test::Sampler;
using Eigen::VectorXd;

constexpr double pi = std::numbers::pi;

TEST_CASE("classification")
{
    const VectorXd k = (VectorXd(5) << 0.5, 1.0, 1.0 + 1e-10, 2.0, 1.0 - 1e-6).finished();
    const Classification cls = classify(k);
    CHECK(cls.boundary == std::vector<int>{0, 4});
    CHECK(cls.cusps == std::vector<int>{1, 2});
    CHECK(cls.cones == std::vector<int>{3});
    CHECK(cls.classes[3] == VertexClass::Cone);
    CHECK_THROWS_AS(classify(k, 0.0), DomainError);
    CHECK_THROWS_AS(classify<double>(VectorXd::Zero(2)), DomainError);

    Sampler rng(67);
    for (int n = 0; n < 100; ++n) {
        const VectorXd ks = rng.vector(8, 0.0, 2.0).array() + 1e-3;
        const Classification c = classify(ks);
        CHECK(c.boundary.size() + c.cusps.size() + c.cones.size() == 8);
        for (int v = 0; v < 8; ++v) CHECK(c.classes[v] == (ks[v] < 1.0 ? VertexClass::Boundary : VertexClass::Cone));
    }
}

TEST_CASE("cones on the tetrahedron at k = 2")
{
    const Triangulation tet = test::tetrahedron();
    const VectorXd S = VectorXd::Constant(4, std::log(2.0));
    const auto cones = cone_data(tet, S);
    REQUIRE(cones.size() == 4);
    const double cosh_r = 2.0 / std::sqrt(3.0);
    const VectorXd L = total_curvatures(tet, S);
    for (const auto& c : cones) {
        CHECK(c.angle == doctest::Approx(2.6869943815735949161).epsilon(1e-13));
        CHECK(c.curvature == doctest::Approx(3.5961909256059915609).epsilon(1e-13));
        CHECK(std::abs(L[c.vertex] - c.angle * cosh_r) < 1e-10);
    }
    CHECK(cone_angle(tet, S, 2) == doctest::Approx(2.6869943815735949161).epsilon(1e-13));
    CHECK_THROWS_AS(cone_angle(tet, VectorXd::Zero(4).eval(), 0), DomainError);
    CHECK_THROWS_AS(cone_angle(tet, S, 7), DomainError);

    const AuditReport<double> audit = gauss_bonnet_audit(tet, S);
    CHECK(audit.chi_realized == 2);
    CHECK(audit.residual < 1e-10);
}

TEST_CASE("all-circle neighbourhoods: L = angle cosh r")
{
    Sampler rng(71);
    const Triangulation oct = test::octahedron();
    for (int n = 0; n < 20; ++n) {
        const VectorXd S = rng.vector(6, 0.05, 3.0);
        const VectorXd L = total_curvatures(oct, S);
        for (const auto& c : cone_data(oct, S)) {
            const double r = curvature_to_radius(std::exp(S[c.vertex])).value;
            CHECK(std::abs(L[c.vertex] - c.angle * std::cosh(r)) < 1e-10);
        }
    }
}

TEST_CASE("solved tetrahedron has four geodesic boundaries")
{
    const Triangulation tet = test::tetrahedron();
    const SolveResult<double> result = solve<double>(tet, VectorXd::Ones(4));
    REQUIRE(result.status == SolveStatus::Converged);
    const RealizedMetric<double> metric = realize(tet, result.K);
    const BoundaryData<double> bd = boundary_data(tet, result.K);
    REQUIRE(bd.components.size() == 4);
    CHECK(bd.cusps.empty());
    for (const auto& comp : bd.components) {
        CHECK(comp.length == doctest::Approx(17.030678280288161263).epsilon(1e-8));
        CHECK(comp.segments == 3);
        const double r = curvature_to_radius(std::exp(result.K[comp.vertex])).value;
        CHECK(std::abs(comp.length * std::sinh(r) - 1.0) < 1e-9);
    }
    for (const auto& rec : metric.vertices) {
        CHECK(rec.vertex_class == VertexClass::Boundary);
        CHECK_FALSE(rec.cone_angle.has_value());
        CHECK(rec.boundary_segments == 3);
    }
    CHECK(metric.audit.chi_surface == 2);
    CHECK(metric.audit.chi_realized == -2);
    CHECK(metric.audit.total_area == doctest::Approx(4 * pi).epsilon(1e-14));
    CHECK(metric.audit.residual < 1e-10);
    CHECK(metric.interstice_area == doctest::Approx(4 * pi - 4.0).epsilon(1e-9));
}

TEST_CASE("boundary length is the sum of axis segments times sinh r")
{
    Sampler rng(73);
    const Triangulation oct = test::octahedron();
    for (int n = 0; n < 20; ++n) {
        const VectorXd S = rng.vector(6, -3.0, -0.05);
        const VectorXd L = total_curvatures(oct, S);
        for (const auto& comp : boundary_data(oct, S).components) {
            const double r = curvature_to_radius(std::exp(S[comp.vertex])).value;
            CHECK(std::abs(L[comp.vertex] - comp.length * std::sinh(r)) < 1e-10);
            CHECK(comp.segments == 4);
        }
    }
}

TEST_CASE("audit on mixed solves")
{
    const Triangulation oct = test::octahedron();
    SUBCASE("one cone among boundaries")
    {
        const VectorXd targets = (VectorXd(6) << 12, 1, 1, 1, 1, 1).finished();
        const SolveResult<double> result = solve<double>(oct, targets);
        REQUIRE(result.status == SolveStatus::Converged);
        const RealizedMetric<double> metric = realize(oct, result.K);
        CHECK(metric.vertices[0].vertex_class == VertexClass::Cone);
        for (int v = 1; v < 6; ++v) CHECK(metric.vertices[v].vertex_class == VertexClass::Boundary);
        CHECK(metric.audit.chi_realized == -3);
        CHECK(metric.audit.residual < 1e-8);
    }
    SUBCASE("random admissible targets")
    {
        Sampler rng(79);
        for (int n = 0; n < 10; ++n) {
            const VectorXd targets = rng.vector(6, 0.3, 3.5);
            const SolveResult<double> result = solve<double>(oct, targets);
            REQUIRE(result.status == SolveStatus::Converged);
            CHECK(realize(oct, result.K).audit.residual < 1e-8);
        }
    }
    SUBCASE("genus two")
    {
        const Triangulation g = load_triangulation(GCP_TEST_DATA "/genus2.json");
        const SolveResult<double> result = solve<double>(g, VectorXd::Constant(15, 0.5));
        REQUIRE(result.status == SolveStatus::Converged);
        CHECK(realize(g, result.K).audit.residual < 1e-8);
    }
}

TEST_CASE("prescribed cusps")
{
    // all k = 1: ideal faces, each of area pi - 3
    const Triangulation tet = test::tetrahedron();
    const VectorXd S = VectorXd::Zero(4);
    const RealizedMetric<double> metric = realize(tet, S);
    for (const auto& rec : metric.vertices) {
        CHECK(rec.vertex_class == VertexClass::Cusp);
        CHECK(rec.L == doctest::Approx(3.0));
    }
    CHECK(metric.audit.chi_realized == -2);
    CHECK(metric.audit.residual < 1e-12);
}
