#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gcpack/errors.hpp"
#include "gcpack/hyptrig.hpp"
#include "support.hpp"

using namespace gcp;
using gcp::test::rel_err;
using gcp::test::Sampler;

constexpr double pi = std::numbers::pi;

TEST_CASE("curvature to radius")
{
    // mpmath: acoth 2 = atanh 1/2 = ln(3)/2
    CHECK(curvature_to_radius(2.0).value == doctest::Approx(0.5493061443340548457).epsilon(1e-15));
    CHECK(curvature_to_radius(0.5).value == doctest::Approx(0.5493061443340548457).epsilon(1e-15));
    CHECK(curvature_to_radius(1.0).is_infinite());
    CHECK_THROWS_AS(curvature_to_radius(0.0), DomainError);
    CHECK_THROWS_AS(curvature_to_radius(-2.0), DomainError);
}

TEST_CASE("radius round trip over twelve decades")
{
    Sampler rng(11);
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double k = rng.log_uniform(1e-6, 1e6);
        if (curve_kind(k) == CurveKind::Horocycle) continue;
        const double back = radius_to_curvature(curvature_to_radius(k), curve_kind(k));
        worst = std::max(worst, rel_err(back, k));
    }
    CHECK(worst <= 1e-14);
}

TEST_CASE("kind dispatch threshold")
{
    CHECK(curve_kind(1.0 + 5e-13) == CurveKind::Horocycle);
    CHECK(curve_kind(1.0 - 5e-13) == CurveKind::Horocycle);
    CHECK(curve_kind(1.0 + 1e-11) == CurveKind::Circle);
    CHECK(curve_kind(1.0 - 1e-11) == CurveKind::Hypercycle);
}

TEST_CASE("triangle angles")
{
    const double d = std::acosh(5.0 / 3.0);
    const Vector3<double> theta = triangle_angles(d, d, d);
    for (int i = 0; i < 3; ++i) {
        CHECK(theta[i] == doctest::Approx(0.89566479385786497202).epsilon(1e-14));
    }

    SUBCASE("cosine law and deficit on random tangency triangles")
    {
        Sampler rng(3);
        for (int n = 0; n < 1000; ++n) {
            const double r1 = rng.log_uniform(1e-3, 5.0);
            const double r2 = rng.log_uniform(1e-3, 5.0);
            const double r3 = rng.log_uniform(1e-3, 5.0);
            const Vector3<double> d(r2 + r3, r3 + r1, r1 + r2);
            const Vector3<double> t = triangle_angles(d[0], d[1], d[2]);
            CHECK(t.sum() < pi);
            for (int i = 0; i < 3; ++i) {
                const int j = (i + 1) % 3;
                const int k = (i + 2) % 3;
                const double cos_law =
                    (std::cosh(d[j]) * std::cosh(d[k]) - std::cosh(d[i])) / (std::sinh(d[j]) * std::sinh(d[k]));
                CHECK(std::cos(t[i]) == doctest::Approx(cos_law).epsilon(1e-9));
            }
        }
    }

    SUBCASE("thin triangle")
    {
        const Vector3<double> t = triangle_angles(20.0, 10.5, 10.0);
        CHECK(t[0] > 0.0);
        CHECK(t[1] < 1e-3);
        CHECK(t[2] < 1e-3);
        CHECK(triangle_angles(30.0, 1.0, 29.5)[1] < 1e-10);
    }

    CHECK_THROWS_AS(triangle_angles(5.0, 1.0, 1.0), InfeasibleGeometryError);
}

TEST_CASE("quadrilateral")
{
    const PolygonSolution<double> sol = solve_quadrilateral(1.0, 1.0, 1.0);
    // mpmath bisection on sinh x = tanh 1 cosh(1 - x)
    CHECK(sol.x == doctest::Approx(0.72524930014988807039).epsilon(1e-13));
    CHECK(sol.y == doctest::Approx(0.95035520482247971349).epsilon(1e-13));
    CHECK_FALSE(sol.mirrored);

    Sampler rng(5);
    for (int n = 0; n < 2000; ++n) {
        const double rh = rng.log_uniform(1e-3, 10.0);
        const double ra = rng.log_uniform(1e-3, 10.0);
        const double rb = rng.log_uniform(1e-3, 10.0);
        const double l1 = rh + ra;
        const double l2 = ra + rb;
        const double l3 = rh + rb;
        const PolygonSolution<double> s = solve_quadrilateral(l1, l2, l3);
        CHECK(s.residual_first < 1e-12);
        CHECK(s.residual_second < 1e-12);
        CHECK(s.mirrored == (l1 < l3));
        const double leg1 = s.mirrored ? l3 : l1;
        const double leg3 = s.mirrored ? l1 : l3;
        CHECK(leg3 > s.x);
        CHECK(l2 > leg1 - s.x);

        const PolygonSolution<double> r = solve_quadrilateral_radii(rh, ra, rb);
        CHECK(r.residual_first < 1e-12);
        CHECK(r.residual_second < 1e-12);
        CHECK(r.y == doctest::Approx(s.y).epsilon(1e-9));
        CHECK(r.mirrored == s.mirrored);
    }
}

TEST_CASE("mirrored quadrilateral matches the swapped legs")
{
    const PolygonSolution<double> a = solve_quadrilateral(0.7, 1.3, 1.9);
    const PolygonSolution<double> b = solve_quadrilateral(1.9, 1.3, 0.7);
    CHECK(a.mirrored);
    CHECK_FALSE(b.mirrored);
    CHECK(a.x == doctest::Approx(b.x).epsilon(1e-14));
    CHECK(a.y == doctest::Approx(b.y).epsilon(1e-14));
}

TEST_CASE("pentagon")
{
    const PolygonSolution<double> sol = solve_pentagon(1.0, 1.0, 1.0);
    CHECK(sol.x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::cosh(sol.y) == doctest::Approx(2.2552519304127615705).epsilon(1e-13));

    CHECK(solve_pentagon(2.0, 2.0, 3.4).x == doctest::Approx(1.7).epsilon(1e-14));

    Sampler rng(7);
    for (int n = 0; n < 2000; ++n) {
        const double rc = rng.log_uniform(1e-3, 10.0);
        const double r1 = rng.log_uniform(1e-3, 10.0);
        const double r2 = rng.log_uniform(1e-3, 10.0);
        const double l1 = rc + r1;
        const double l2 = rc + r2;
        const double l3 = r1 + r2;
        const PolygonSolution<double> s = solve_pentagon(l1, l2, l3);
        CHECK(s.residual_first < 1e-12);
        CHECK(s.residual_second < 1e-12);
        CHECK(s.x < l1);
        CHECK(l3 - s.x < l2);

        const PolygonSolution<double> r = solve_pentagon_radii(rc, r1, r2);
        CHECK(r.residual_first < 1e-12);
        CHECK(r.residual_second < 1e-12);
        CHECK(r.y == doctest::Approx(s.y).epsilon(1e-8));
    }
}

TEST_CASE("pentagon from radii keeps a tiny circle")
{
    // rc below the spacing of doubles near r1: lengths alone cannot see it
    const double rc = 1e-17;
    const PolygonSolution<double> s = solve_pentagon_radii(rc, 2.5, 2.5);
    CHECK(s.gap == doctest::Approx(rc).epsilon(1e-10));
    CHECK(s.y > 0.0);
    CHECK(s.residual_second < 1e-12);
}

TEST_CASE("right-angled hexagon")
{
    const Vector3<double> s = solve_hexagon(1.0, 1.0, 1.0);
    for (int i = 0; i < 3; ++i) {
        CHECK(s[i] == doctest::Approx(1.7049128323580136912).epsilon(1e-14));
    }

    for (double r : {0.05, 0.3, 1.0, 4.0}) {
        const double c2 = std::cosh(2.0 * r);
        const Vector3<double> h = solve_hexagon(2.0 * r, 2.0 * r, 2.0 * r);
        CHECK(std::cosh(h[0]) == doctest::Approx(c2 / (c2 - 1.0)).epsilon(1e-12));
    }

    Sampler rng(9);
    for (int n = 0; n < 500; ++n) {
        const Vector3<double> d(rng.uniform(0.05, 6.0), rng.uniform(0.05, 6.0), rng.uniform(0.05, 6.0));
        const Vector3<double> s0 = solve_hexagon(d[0], d[1], d[2]);
        const Vector3<double> s1 = solve_hexagon(d[1], d[2], d[0]);
        const Vector3<double> s2 = solve_hexagon(d[0], d[2], d[1]);
        for (int i = 0; i < 3; ++i) {
            CHECK(s0[i] > 0.0);
            const double ch = (std::cosh(d[i]) + std::cosh(d[(i + 1) % 3]) * std::cosh(d[(i + 2) % 3])) /
                              (std::sinh(d[(i + 1) % 3]) * std::sinh(d[(i + 2) % 3]));
            CHECK(std::cosh(s0[i]) == doctest::Approx(ch).epsilon(1e-11));
        }
        CHECK(s1[0] == doctest::Approx(s0[1]).epsilon(1e-14));
        CHECK(s1[2] == doctest::Approx(s0[0]).epsilon(1e-14));
        CHECK(s2[1] == doctest::Approx(s0[2]).epsilon(1e-14));
    }
}

TEST_CASE("horocycle chord")
{
    CHECK(horocycle_chord(pi / 4) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(horocycle_chord(pi / 3) == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-15));
    CHECK(horocycle_chord(1e-9) < 1e-8);
    CHECK_THROWS_AS(horocycle_chord(0.0), DomainError);
    CHECK_THROWS_AS(horocycle_chord(pi / 2), DomainError);
}

TEST_CASE("orthogonal bigon")
{
    const BigonKernel<double> b = bigon_kernel(1.0, 2.0);
    CHECK(b.first_kind == CurveKind::Horocycle);
    CHECK(b.first == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(b.dl1_dk2 == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK_THROWS_AS(bigon_kernel(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(bigon_kernel(0.5, 0.7), DomainError);

    SUBCASE("partials match central differences")
    {
        Sampler rng(13);
        for (int n = 0; n < 300; ++n) {
            double k1 = rng.log_uniform(0.05, 20.0);
            if (std::abs(k1 - 1.0) < 1e-3) k1 = 1.5;
            const double k2 = 1.0 + rng.log_uniform(0.01, 20.0);
            const BigonKernel<double> at = bigon_kernel(k1, k2);
            CHECK(std::abs(at.dl1_dk2 - at.dl2_dk1) <= 1e-10);
            const double h1 = 1e-6 * k1;
            const double h2 = 1e-6 * k2;
            const double dl1 =
                (bigon_kernel(k1, k2 + h2).first_length - bigon_kernel(k1, k2 - h2).first_length) / (2 * h2);
            const double dl2 =
                (bigon_kernel(k1 + h1, k2).second_length - bigon_kernel(k1 - h1, k2).second_length) / (2 * h1);
            CHECK(dl1 == doctest::Approx(at.dl1_dk2).epsilon(1e-6));
            CHECK(dl2 == doctest::Approx(at.dl2_dk1).epsilon(1e-6));
        }
    }

    SUBCASE("second partial is continuous through k1 = 1")
    {
        for (double k2 : {1.5, 2.0, 7.0}) {
            for (double k1 : {1.0 - 1e-7, 1.0 + 1e-7}) {
                CHECK(bigon_kernel(k1, k2).dl2_dk1 == doctest::Approx(-2.0 / (k2 * k2)).epsilon(1e-6));
            }
        }
    }
}
