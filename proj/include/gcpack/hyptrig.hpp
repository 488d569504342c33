#pragma once

// Scalar hyperbolic-trigonometry kernel: curvature/radius conversion and the
// right-angled polygon solvers used by every face computation.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Core>

#include "gcpack/errors.hpp"

namespace gcp
{

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
constexpr Scalar PI = std::numbers::pi_v<Scalar>;

template <typename Scalar>
constexpr Scalar INF = std::numeric_limits<Scalar>::infinity();

/** @brief Geodesic curvature class of a generalized circle */
enum class CurveKind { Circle, Horocycle, Hypercycle };

/** |k - 1| below this is treated as exactly 1 */
inline constexpr double kHorocycleTolerance = 1e-12;

template <typename Scalar>
CurveKind curve_kind(Scalar k)
{
    if (std::abs(k - Scalar(1)) < Scalar(kHorocycleTolerance)) {
        return CurveKind::Horocycle;
    }
    return k > Scalar(1) ? CurveKind::Circle : CurveKind::Hypercycle;
}

/** Kind from a log-curvature S = ln k; same threshold as curve_kind */
template <typename Scalar>
CurveKind curve_kind_log(Scalar s)
{
    if (std::abs(std::expm1(s)) < Scalar(kHorocycleTolerance)) {
        return CurveKind::Horocycle;
    }
    return s > Scalar(0) ? CurveKind::Circle : CurveKind::Hypercycle;
}

/**
 * @brief Hyperbolic radius of a generalized circle.
 *
 * Finite and positive for circles and hypercycles; +infinity for horocycles.
 */
template <typename Scalar>
struct GeneralizedRadius {
    Scalar value{};

    bool is_infinite() const { return std::isinf(value); }
};

/**
 * @brief Radius from geodesic curvature: k = coth r (circle), k = 1
 * (horocycle), k = tanh r (hypercycle).
 *
 * Both inverse functions are evaluated through log1p so that curvatures
 * close to 1 keep full relative accuracy.
 */
template <typename Scalar>
GeneralizedRadius<Scalar> curvature_to_radius(Scalar k)
{
    if (!(k > Scalar(0)) || !std::isfinite(k)) {
        throw DomainError("curvature must be positive and finite");
    }
    switch (curve_kind(k)) {
        case CurveKind::Horocycle:
            return {INF<Scalar>};
        case CurveKind::Circle:
            return {Scalar(0.5) * std::log1p(Scalar(2) / (k - Scalar(1)))};
        case CurveKind::Hypercycle:
            return {Scalar(0.5) * std::log1p(Scalar(2) * k / (Scalar(1) - k))};
    }
    return {INF<Scalar>};
}

/**
 * @brief Radius from log-curvature S = ln k.
 *
 * arccoth(e^S) and arctanh(e^S) both reduce to 1/2 ln coth(|S|/2), which is
 * 1/2 log1p(2 / expm1(|S|)) and stays accurate for S near 0 and for |S| large.
 */
template <typename Scalar>
GeneralizedRadius<Scalar> log_curvature_to_radius(Scalar s)
{
    if (!std::isfinite(s)) {
        throw DomainError("log-curvature must be finite");
    }
    if (curve_kind_log(s) == CurveKind::Horocycle) {
        return {INF<Scalar>};
    }
    return {Scalar(0.5) * std::log1p(Scalar(2) / std::expm1(std::abs(s)))};
}

template <typename Scalar>
Scalar radius_to_curvature(GeneralizedRadius<Scalar> r, CurveKind kind)
{
    switch (kind) {
        case CurveKind::Horocycle:
            return Scalar(1);
        case CurveKind::Circle:
            return Scalar(1) / std::tanh(r.value);
        case CurveKind::Hypercycle:
            return std::tanh(r.value);
    }
    return Scalar(1);
}

namespace detail
{

// Half-angle form of the cosine law written in terms of the semi-perimeter
// excesses e_i = s - d_i, which are the radii for a tangency triangle.
template <typename Scalar>
Vector3<Scalar> triangle_angles_from_excess(const Vector3<Scalar>& e)
{
    using std::atan2;
    using std::sinh;
    using std::sqrt;
    const Scalar perimeter_half = e.sum();
    Vector3<Scalar> theta;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        const Scalar num = sqrt(sinh(e[j]) * sinh(e[k]));
        const Scalar den = sqrt(sinh(perimeter_half) * sinh(e[i]));
        theta[i] = Scalar(2) * atan2(num, den);
    }
    return theta;
}

/**
 * Acute angle of a trirectangle (Lambert quadrilateral) whose two sides at
 * that angle have lengths p and q: cos(phi) = tanh(p) tanh(q), rewritten
 * with cosh(p -/+ q) to avoid cancellation when phi is small.
 */
template <typename Scalar>
Scalar lambert_angle(Scalar p, Scalar q)
{
    using std::cosh;
    const Scalar sin_part = std::sqrt(cosh(p - q) * cosh(p + q));
    const Scalar cos_part = std::sinh(p) * std::sinh(q);
    return std::atan2(sin_part, cos_part);
}

/**
 * Monotone root of phi(x) = 0 on (0, upper): bisection until the bracket is
 * 1e-3 wide (relative), then safeguarded Newton.
 */
template <typename Scalar, class Fn, class Deriv>
Scalar monotone_root(Fn&& phi, Deriv&& dphi, Scalar upper)
{
    Scalar lo = Scalar(0);
    Scalar hi = upper;
    const Scalar bracket_tol = Scalar(1e-3) * upper;
    while (hi - lo > bracket_tol) {
        const Scalar mid = Scalar(0.5) * (lo + hi);
        if (phi(mid) < Scalar(0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Scalar x = Scalar(0.5) * (lo + hi);
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (int it = 0; it < 100; ++it) {
        const Scalar f = phi(x);
        if (f == Scalar(0)) {
            break;
        }
        if (f < Scalar(0)) {
            lo = x;
        } else {
            hi = x;
        }
        Scalar next = x - f / dphi(x);
        if (!(next > lo && next < hi)) {
            next = Scalar(0.5) * (lo + hi);
        }
        const Scalar change = std::abs(next - x);
        x = next;
        if (change <= Scalar(4) * eps * x || hi - lo <= Scalar(4) * eps * x) {
            break;
        }
    }
    return x;
}

template <typename Scalar>
Scalar relative_residual(Scalar lhs, Scalar rhs)
{
    return std::abs(lhs - rhs) / std::max(std::abs(rhs), std::numeric_limits<Scalar>::min());
}

}  // namespace detail

/**
 * @brief Angles of the hyperbolic triangle with side lengths d1, d2, d3;
 * theta_i is opposite d_i.
 */
template <typename Scalar>
Vector3<Scalar> triangle_angles(Scalar d1, Scalar d2, Scalar d3)
{
    if (!(d1 > 0 && d2 > 0 && d3 > 0)) {
        throw DomainError("triangle side lengths must be positive");
    }
    const Scalar half = Scalar(0.5) * (d1 + d2 + d3);
    const Vector3<Scalar> excess(half - d1, half - d2, half - d3);
    if (!(excess.minCoeff() > Scalar(0))) {
        throw InfeasibleGeometryError("side lengths violate the triangle inequality");
    }
    return detail::triangle_angles_from_excess(excess);
}

/** Triangle of centers of three tangent circles; sides are r_j + r_k. */
template <typename Scalar>
Vector3<Scalar> tangency_triangle_angles(const Vector3<Scalar>& radii)
{
    if (!(radii.minCoeff() > Scalar(0))) {
        throw DomainError("radii must be positive");
    }
    return detail::triangle_angles_from_excess(radii);
}

/**
 * @brief Auxiliary split point x and height y of a quadrilateral or pentagon
 * decomposition, with the relative residuals of the two defining equations.
 */
template <typename Scalar>
struct PolygonSolution {
    Scalar x{};
    Scalar y{};
    Scalar residual_first{};
    Scalar residual_second{};
    /** l1 - x (longer leg for the quadrilateral) */
    Scalar gap{};
    /** Quadrilateral only: x lies on the l3 leg because l1 < l3 */
    bool mirrored{false};
};

/**
 * @brief Quadrilateral with two adjacent right angles on its base; l1 and l3
 * are the legs standing on the base, l2 is the side opposite the base.
 *
 * With l1 >= l3 the foot of the perpendicular from the top of l3 onto l1
 * splits l1 at height x. The quadrilateral is then a trirectangle with sides
 * x, y, l3 plus a right triangle with legs l1 - x, y and hypotenuse l2:
 *
 *   sinh l3 = sinh x cosh y,   cosh l2 = cosh(l1 - x) cosh y.
 *
 * For l1 < l3 the roles of the legs are exchanged and `mirrored` is set.
 */
template <typename Scalar>
PolygonSolution<Scalar> solve_quadrilateral(Scalar l1, Scalar l2, Scalar l3)
{
    using std::cosh;
    using std::log;
    using std::sinh;
    if (!(l1 > 0 && l2 > 0 && l3 > 0) || !std::isfinite(l1 + l2 + l3)) {
        throw DomainError("quadrilateral side lengths must be positive and finite");
    }
    const bool mirrored = l1 < l3;
    if (mirrored) {
        std::swap(l1, l3);
    }
    // f(x) = sinh x / cosh(l1 - x) increases from 0 to sinh l1
    const Scalar log_target = log(sinh(l3)) - log(cosh(l2));
    if (!(log_target < log(sinh(l1)))) {
        throw InfeasibleGeometryError("quadrilateral has no split point in (0, l1)");
    }
    auto phi = [&](Scalar x) { return log(sinh(x)) - log(cosh(l1 - x)) - log_target; };
    auto dphi = [&](Scalar x) { return Scalar(1) / std::tanh(x) + std::tanh(l1 - x); };
    const Scalar x = detail::monotone_root(phi, dphi, l1);

    // sinh^2 y = (sinh^2 l3 - sinh^2 x) / sinh^2 x
    Scalar y;
    if (l3 > x) {
        y = std::asinh(std::sqrt(sinh(l3 - x) * sinh(l3 + x)) / sinh(x));
    } else {
        y = Scalar(0);
    }
    PolygonSolution<Scalar> sol;
    sol.x = x;
    sol.y = y;
    sol.mirrored = mirrored;
    sol.gap = l1 - x;
    sol.residual_first = detail::relative_residual(sinh(x) * cosh(y), sinh(l3));
    sol.residual_second = detail::relative_residual(cosh(l1 - x) * cosh(y), cosh(l2));
    return sol;
}

/**
 * @brief Pentagon with four right angles; l1, l2 are the sides at the
 * non-right angle and l3 is the middle side (right angles at both ends).
 *
 * The perpendicular from the non-right vertex onto l3 has length y and hits
 * l3 at distance x from the l1 side:
 *
 *   cosh y = sinh l1 / sinh x = sinh l2 / sinh(l3 - x) > 1.
 */
template <typename Scalar>
PolygonSolution<Scalar> solve_pentagon(Scalar l1, Scalar l2, Scalar l3)
{
    using std::cosh;
    using std::log;
    using std::sinh;
    if (!(l1 > 0 && l2 > 0 && l3 > 0) || !std::isfinite(l1 + l2 + l3)) {
        throw DomainError("pentagon side lengths must be positive and finite");
    }
    // g(x) = sinh x / sinh(l3 - x) increases from 0 to +infinity
    const Scalar log_target = log(sinh(l1)) - log(sinh(l2));
    auto phi = [&](Scalar x) { return log(sinh(x)) - log(sinh(l3 - x)) - log_target; };
    auto dphi = [&](Scalar x) { return Scalar(1) / std::tanh(x) + Scalar(1) / std::tanh(l3 - x); };
    const Scalar x = detail::monotone_root(phi, dphi, l3);
    if (!(x < l1)) {
        throw InfeasibleGeometryError("pentagon root gives cosh y <= 1");
    }
    const Scalar y = std::asinh(std::sqrt(sinh(l1 - x) * sinh(l1 + x)) / sinh(x));
    if (!(y > Scalar(0))) {
        throw InfeasibleGeometryError("pentagon root gives cosh y <= 1");
    }
    PolygonSolution<Scalar> sol;
    sol.x = x;
    sol.y = y;
    sol.gap = l1 - x;
    sol.residual_first = detail::relative_residual(sinh(x) * cosh(y), sinh(l1));
    sol.residual_second = detail::relative_residual(sinh(l3 - x) * cosh(y), sinh(l2));
    return sol;
}

namespace detail
{

/** log sinh(p + e) - log sinh(p), accurate for small e */
template <typename Scalar>
Scalar log_sinh_shift(Scalar p, Scalar e)
{
    const Scalar h = std::sinh(e / Scalar(2));
    return std::log1p(Scalar(2) * h * h + std::sinh(e) / std::tanh(p));
}

/** log cosh a - log cosh b */
template <typename Scalar>
Scalar log_cosh_ratio(Scalar a, Scalar b)
{
    return std::log1p(Scalar(2) * std::sinh((a + b) / Scalar(2)) * std::sinh((a - b) / Scalar(2)) /
                      std::cosh(b));
}

}  // namespace detail

/**
 * @brief solve_quadrilateral for legs rh + ra, rh + rb and top ra + rb,
 * solving for the gap v = l1 - x directly.
 *
 * A side built from a tiny radius next to a large one rounds away the tiny
 * part; here v is bracketed in (0, ra + rb) and every difference of lengths
 * is formed from the radii, so small circles keep full relative accuracy.
 */
template <typename Scalar>
PolygonSolution<Scalar> solve_quadrilateral_radii(Scalar rh, Scalar ra, Scalar rb)
{
    using std::cosh;
    using std::sinh;
    if (!(rh > 0 && ra > 0 && rb > 0) || !std::isfinite(rh + ra + rb)) {
        throw DomainError("quadrilateral radii must be positive and finite");
    }
    const bool mirrored = ra < rb;
    if (mirrored) {
        std::swap(ra, rb);
    }
    const Scalar top = ra + rb;
    // log sinh(rh + ra - v) - log sinh(rh + rb) + log cosh(top) - log cosh(v), decreasing in v
    auto phi = [&](Scalar v) {
        return -(detail::log_sinh_shift(rh + rb, ra - rb - v) + detail::log_cosh_ratio(top, v));
    };
    auto dphi = [&](Scalar v) { return Scalar(1) / std::tanh(rh + ra - v) + std::tanh(v); };
    const Scalar upper = std::min(top, rh + ra);
    const Scalar l1 = rh + ra;
    const Scalar l3 = rh + rb;
    Scalar v = detail::monotone_root(phi, dphi, upper);
    Scalar x = l1 - v;
    const bool in_x = x < v;
    if (in_x) {
        // x is the small unknown: solve for it so it keeps its relative accuracy
        auto psi = [&](Scalar t) { return std::log(sinh(t) / sinh(l3)) + detail::log_cosh_ratio(top, l1 - t); };
        auto dpsi = [&](Scalar t) { return Scalar(1) / std::tanh(t) + std::tanh(l1 - t); };
        x = detail::monotone_root(psi, dpsi, std::min(l1, l3));
        v = l1 - x;
    }
    const Scalar top_minus_v = in_x ? rb - rh + x : top - v;
    const Scalar y = std::asinh(std::sqrt(sinh(top + v) * sinh(top_minus_v)) / cosh(v));

    PolygonSolution<Scalar> sol;
    sol.x = x;
    sol.y = y;
    sol.gap = v;
    sol.mirrored = mirrored;
    // both equations in ratio form, side differences taken from the radii
    const Scalar log_first = in_x ? std::log(sinh(x) / sinh(l3)) : detail::log_sinh_shift(l3, ra - rb - v);
    sol.residual_first = std::abs(std::expm1(log_first + std::log(cosh(y))));
    sol.residual_second = std::abs(std::expm1(std::log(cosh(y)) - detail::log_cosh_ratio(top, v)));
    return sol;
}

/**
 * @brief solve_pentagon for sides rc + r1, rc + r2 and middle r1 + r2,
 * solving for the gap u = l1 - x, which lies in (0, 2 rc).
 */
template <typename Scalar>
PolygonSolution<Scalar> solve_pentagon_radii(Scalar rc, Scalar r1, Scalar r2)
{
    using std::cosh;
    using std::sinh;
    if (!(rc > 0 && r1 > 0 && r2 > 0) || !std::isfinite(rc + r1 + r2)) {
        throw DomainError("pentagon radii must be positive and finite");
    }
    // sinh(l3 - x) / sinh l2 against sinh x / sinh l1, with l3 - x = r2 - rc + u
    auto phi = [&](Scalar u) {
        return detail::log_sinh_shift(r2 + rc, u - Scalar(2) * rc) - detail::log_sinh_shift(r1 + rc, -u);
    };
    auto dphi = [&](Scalar u) {
        return Scalar(1) / std::tanh(r2 - rc + u) + Scalar(1) / std::tanh(r1 + rc - u);
    };
    const Scalar lower = std::max(Scalar(0), rc - r2);
    const Scalar upper = std::min(Scalar(2) * rc, r1 + rc);
    Scalar u = lower + detail::monotone_root([&](Scalar w) { return phi(lower + w); },
                                             [&](Scalar w) { return dphi(lower + w); }, upper - lower);
    const Scalar l1 = rc + r1;
    const Scalar l2 = rc + r2;
    const Scalar l3 = r1 + r2;
    Scalar x = l1 - u;
    Scalar w = r2 - rc + u;
    // re-solve for whichever of x, l3 - x is small so it keeps its relative accuracy
    auto solve_side = [&](Scalar la, Scalar lb, Scalar lower_bound) {
        // sinh t / sinh la = sinh(l3 - t) / sinh lb, increasing in t
        auto psi = [&](Scalar t) { return std::log(sinh(t) / sinh(la)) - std::log(sinh(l3 - t) / sinh(lb)); };
        auto dpsi = [&](Scalar t) { return Scalar(1) / std::tanh(t) + Scalar(1) / std::tanh(l3 - t); };
        return lower_bound + detail::monotone_root([&](Scalar t) { return psi(lower_bound + t); },
                                                   [&](Scalar t) { return dpsi(lower_bound + t); },
                                                   l3 - lower_bound);
    };
    const bool in_x = x < u && x <= w;
    const bool in_w = !in_x && w < u;
    if (in_x) {
        x = solve_side(l1, l2, std::max(Scalar(0), r1 - rc));
        u = l1 - x;
        w = l3 - x;
    } else if (in_w) {
        w = solve_side(l2, l1, std::max(Scalar(0), r2 - rc));
        x = l3 - w;
        u = rc - r2 + w;
    }
    // sinh^2 y = sinh(l1 - x) sinh(l1 + x) / sinh^2 x
    const Scalar y = std::asinh(std::sqrt(sinh(u) * sinh(Scalar(2) * l1 - u)) / sinh(x));
    if (!(y > Scalar(0))) {
        throw InfeasibleGeometryError("pentagon root gives cosh y <= 1");
    }
    PolygonSolution<Scalar> sol;
    sol.x = x;
    sol.y = y;
    sol.gap = u;
    if (in_x || in_w) {
        sol.residual_first = std::abs(std::expm1(std::log(sinh(x) / sinh(l1)) + std::log(cosh(y))));
        sol.residual_second = std::abs(std::expm1(std::log(sinh(w) / sinh(l2)) + std::log(cosh(y))));
        return sol;
    }
    sol.residual_first = std::abs(std::expm1(detail::log_sinh_shift(l1, -u) + std::log(cosh(y))));
    sol.residual_second =
        std::abs(std::expm1(detail::log_sinh_shift(rc + r2, u - Scalar(2) * rc) + std::log(cosh(y))));
    return sol;
}

/**
 * @brief Right-angled hexagon with alternate sides d1, d2, d3; returns the
 * other three sides, s_i opposite d_i.
 *
 * Uses sinh^2(s_i/2) = (cosh d_i + cosh(d_j - d_k)) / (2 sinh d_j sinh d_k),
 * which is the usual hexagon cosine rule without the cancellation near s = 0.
 */
template <typename Scalar>
Vector3<Scalar> solve_hexagon(Scalar d1, Scalar d2, Scalar d3)
{
    using std::cosh;
    using std::sinh;
    if (!(d1 > 0 && d2 > 0 && d3 > 0) || !std::isfinite(d1 + d2 + d3)) {
        throw DomainError("hexagon side lengths must be positive and finite");
    }
    const Vector3<Scalar> d(d1, d2, d3);
    Vector3<Scalar> s;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const int k = (i + 2) % 3;
        const Scalar half_sq = (cosh(d[i]) + cosh(d[j] - d[k])) / (Scalar(2) * sinh(d[j]) * sinh(d[k]));
        s[i] = Scalar(2) * std::asinh(std::sqrt(half_sq));
    }
    return s;
}

/** @brief Length of a horocycle arc cut by a geodesic meeting it at angle alpha */
template <typename Scalar>
Scalar horocycle_chord(Scalar alpha)
{
    if (!(alpha > Scalar(0) && alpha < PI<Scalar> / Scalar(2))) {
        throw DomainError("intersection angle must lie in (0, pi/2)");
    }
    return Scalar(2) * std::tan(alpha);
}

/**
 * @brief Two generalized circle arcs meeting orthogonally, the second a
 * circle (k2 > 1).
 *
 * `first` is the generalized angle of arc 1 (central angle for a circle,
 * axis length for a hypercycle) or, for a horocycle, its arc length.
 */
template <typename Scalar>
struct BigonKernel {
    CurveKind first_kind{};
    Scalar first{};
    Scalar second_angle{};
    Scalar first_length{};
    Scalar second_length{};
    Scalar dl1_dk2{};
    Scalar dl2_dk1{};
};

template <typename Scalar>
BigonKernel<Scalar> bigon_kernel(Scalar k1, Scalar k2)
{
    using std::sqrt;
    if (!(k2 > Scalar(1)) || !std::isfinite(k2)) {
        throw DomainError("second bigon arc must be a circle (k2 > 1)");
    }
    if (!(k1 > Scalar(0)) || !std::isfinite(k1)) {
        throw DomainError("curvature must be positive and finite");
    }
    BigonKernel<Scalar> out;
    out.first_kind = curve_kind(k1);
    const Scalar r2 = curvature_to_radius(k2).value;
    out.second_angle = Scalar(2) * std::atan(sqrt(k2 * k2 - Scalar(1)) / k1);
    out.second_length = out.second_angle * std::sinh(r2);
    switch (out.first_kind) {
        case CurveKind::Circle: {
            const Scalar r1 = curvature_to_radius(k1).value;
            out.first = Scalar(2) * std::atan(sqrt((k1 - 1) * (k1 + 1)) / k2);
            out.first_length = out.first * std::sinh(r1);
            break;
        }
        case CurveKind::Hypercycle: {
            const Scalar r1 = curvature_to_radius(k1).value;
            // 2 arccoth(k2 / sqrt(1 - k1^2))
            const Scalar ratio = k2 / sqrt((1 - k1) * (1 + k1));
            out.first = std::log1p(Scalar(2) / (ratio - Scalar(1)));
            out.first_length = out.first * std::cosh(r1);
            break;
        }
        case CurveKind::Horocycle:
            out.first = Scalar(2) / k2;
            out.first_length = out.first;
            break;
    }
    out.dl1_dk2 = Scalar(2) / (Scalar(1) - k1 * k1 - k2 * k2);
    out.dl2_dk1 = out.dl1_dk2;
    return out;
}

}  // namespace gcp
