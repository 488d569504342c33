#pragma once

// Three mutually externally tangent generalized circles (circles, horocycles,
// hypercycles): per-corner arc data, interstice area and the Jacobian of the
// corner total curvatures with respect to log-curvatures.

#include <array>
#include <complex>
#include <optional>

#include <Eigen/Core>

#include "gcpack/hyptrig.hpp"

namespace gcp
{

template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

/**
 * @brief A circle, horocycle or hypercycle described by its geodesic
 * curvature k > 0.
 *
 * The log-curvature is kept alongside k so that radii of near-horocycles are
 * computed without cancellation in k - 1.
 */
template <typename Scalar>
struct GeneralizedCircle {
    Scalar k{1};
    Scalar log_k{0};
    CurveKind kind{CurveKind::Horocycle};
    GeneralizedRadius<Scalar> r{INF<Scalar>};

    static GeneralizedCircle from_curvature(Scalar k)
    {
        if (!(k > Scalar(0)) || !std::isfinite(k)) {
            throw DomainError("curvature must be positive and finite");
        }
        GeneralizedCircle c;
        c.k = k;
        c.log_k = std::log(k);
        c.kind = curve_kind(k);
        c.r = curvature_to_radius(k);
        return c;
    }

    static GeneralizedCircle from_log_curvature(Scalar s)
    {
        GeneralizedCircle c;
        c.r = log_curvature_to_radius(s);
        c.k = std::exp(s);
        c.log_k = s;
        c.kind = curve_kind_log(s);
        return c;
    }

    /** L / l: arc length per unit generalized angle is sinh r (circle) or cosh r */
    Scalar length_per_angle() const
    {
        return kind == CurveKind::Circle ? std::sinh(r.value) : std::cosh(r.value);
    }

    /** L per unit generalized angle: cosh r (circle) or sinh r (hypercycle) */
    Scalar curvature_per_angle() const
    {
        return kind == CurveKind::Circle ? std::cosh(r.value) : std::sinh(r.value);
    }
};

/**
 * @brief Hyperbolic distance between the centers / axes of two tangent
 * generalized circles; infinite as soon as one of them is a horocycle.
 */
template <typename Scalar>
Scalar edge_length(const GeneralizedCircle<Scalar>& a, const GeneralizedCircle<Scalar>& b)
{
    if (a.kind == CurveKind::Horocycle || b.kind == CurveKind::Horocycle) {
        return INF<Scalar>;
    }
    return a.r.value + b.r.value;
}

/** Which polygon the centers / axes of a face span */
enum class FaceCase { Triangle, Quadrilateral, Pentagon, Hexagon, Ideal };

template <typename Scalar>
struct CornerGeometry {
    CurveKind kind{};
    /** Central angle (circle) or axis segment length (hypercycle); empty for horocycles */
    std::optional<Scalar> generalized_angle;
    Scalar arc_length{};
    Scalar total_curvature{};
};

/**
 * @brief Solved three-circle configuration.
 *
 * Edge i joins corners i and i+1: edge_lengths = (d12, d23, d31).
 * `area` is the region enclosed by the three interstice arcs, computed from
 * the center polygon (angle sum) minus the sectors / strips cut off by the
 * arcs.
 */
template <typename Scalar>
struct FaceGeometry {
    FaceCase face_case{};
    std::array<CornerGeometry<Scalar>, 3> corners{};
    Vector3<Scalar> edge_lengths = Vector3<Scalar>::Zero();
    Scalar area{};
    /** Area of the center polygon truncated at hypercycle axes: pi - (circle-corner angles) */
    Scalar polygon_area{};

    Vector3<Scalar> total_curvatures() const
    {
        return {corners[0].total_curvature, corners[1].total_curvature, corners[2].total_curvature};
    }

    Vector3<Scalar> arc_lengths() const
    {
        return {corners[0].arc_length, corners[1].arc_length, corners[2].arc_length};
    }
};

/** A generalized circle drawn in the upper half-plane as a Euclidean circle */
template <typename Scalar>
struct EuclideanCircle {
    std::complex<Scalar> center;
    Scalar radius{};
};

/**
 * @brief Upper half-plane picture of a face.
 *
 * Normalized so that curves 0 and 1 touch at i with the imaginary axis as
 * common tangent: curve 0 lies to the left, curve 1 to the right. Every curve
 * then has Euclidean center height / radius equal to its curvature.
 * tangency[0] = T01, tangency[1] = T12, tangency[2] = T20.
 */
template <typename Scalar>
struct EmbeddedFace {
    std::array<GeneralizedCircle<Scalar>, 3> circles;
    std::array<EuclideanCircle<Scalar>, 3> curves;
    std::array<std::complex<Scalar>, 3> tangency;

    /** The two tangency points on curve i, in corner order (T_{i,i+1}, T_{i-1,i}) */
    std::pair<std::complex<Scalar>, std::complex<Scalar>> arc_endpoints(int i) const
    {
        return {tangency[i], tangency[(i + 2) % 3]};
    }
};

namespace detail
{

template <typename Scalar>
std::array<GeneralizedCircle<Scalar>, 3> circles_from_log(const Vector3<Scalar>& log_k)
{
    return {GeneralizedCircle<Scalar>::from_log_curvature(log_k[0]),
            GeneralizedCircle<Scalar>::from_log_curvature(log_k[1]),
            GeneralizedCircle<Scalar>::from_log_curvature(log_k[2])};
}

template <typename Scalar>
Vector3<Scalar> log_curvatures(Scalar k1, Scalar k2, Scalar k3)
{
    for (Scalar k : {k1, k2, k3}) {
        if (!(k > Scalar(0)) || !std::isfinite(k)) {
            throw DomainError("curvatures must be positive and finite");
        }
    }
    return {std::log(k1), std::log(k2), std::log(k3)};
}

/** 2 sinh^2(r/2) = cosh r - 1 without cancellation */
template <typename Scalar>
Scalar cosh_minus_one(Scalar r)
{
    const Scalar h = std::sinh(r / Scalar(2));
    return Scalar(2) * h * h;
}

}  // namespace detail

/**
 * @brief Embed a face in the upper half-plane.
 *
 * With curves 0 and 1 fixed as Euclidean circles of radii 1/k0, 1/k1 tangent
 * to the imaginary axis at i, curve 2 is the circle with center height
 * k2 * rho externally tangent to both. Its Euclidean curvature u = 1/rho is
 * the larger root of a quadratic whose discriminant is a sum of positive
 * terms:
 *
 *   u = (2 + k2 (k0 + k1) + 2 sqrt(1 + k0 k1 + k1 k2 + k2 k0)) / (k0 + k1).
 */
template <typename Scalar>
EmbeddedFace<Scalar> realize_face_log(const Vector3<Scalar>& log_k)
{
    using Complex = std::complex<Scalar>;
    EmbeddedFace<Scalar> face;
    face.circles = detail::circles_from_log(log_k);
    const Scalar k0 = face.circles[0].k;
    const Scalar k1 = face.circles[1].k;
    const Scalar k2 = face.circles[2].k;

    const Scalar rho0 = Scalar(1) / k0;
    const Scalar rho1 = Scalar(1) / k1;
    face.curves[0] = {Complex(-rho0, Scalar(1)), rho0};
    face.curves[1] = {Complex(rho1, Scalar(1)), rho1};

    const Scalar sum01 = k0 + k1;
    const Scalar root = std::sqrt(Scalar(1) + k0 * k1 + k1 * k2 + k2 * k0);
    const Scalar u = (Scalar(2) + k2 * sum01 + Scalar(2) * root) / sum01;
    const Scalar rho2 = Scalar(1) / u;
    const Scalar shift = (k1 - k0) / sum01;
    face.curves[2] = {Complex(shift * rho2, k2 * rho2), rho2};

    // Tangency points divide the center segment in the ratio of the radii
    auto touch = [&](int a, int b) {
        const auto& ca = face.curves[a];
        const auto& cb = face.curves[b];
        return (cb.radius * ca.center + ca.radius * cb.center) / (ca.radius + cb.radius);
    };
    face.tangency[0] = Complex(Scalar(0), Scalar(1));
    face.tangency[1] = touch(1, 2);
    face.tangency[2] = touch(2, 0);

    const Scalar gap01 = std::abs(face.curves[0].center - face.curves[1].center) - (rho0 + rho1);
    const Scalar gap12 = std::abs(face.curves[1].center - face.curves[2].center) - (rho1 + rho2);
    const Scalar gap20 = std::abs(face.curves[2].center - face.curves[0].center) - (rho2 + rho0);
    const Scalar scale = std::max({rho0, rho1, rho2, Scalar(1)});
    const Scalar tol = Scalar(1e-9) * scale;
    if (!(std::abs(gap01) <= tol && std::abs(gap12) <= tol && std::abs(gap20) <= tol) ||
        !(face.tangency[1].imag() > 0 && face.tangency[2].imag() > 0)) {
        throw InfeasibleGeometryError("tangency chain did not close in the half-plane embedding");
    }
    return face;
}

template <typename Scalar>
EmbeddedFace<Scalar> realize_face(Scalar k1, Scalar k2, Scalar k3)
{
    return realize_face_log(detail::log_curvatures(k1, k2, k3));
}

/** @brief Hyperbolic distance in the upper half-plane, as sinh(d/2) */
template <typename Scalar>
Scalar half_plane_sinh_half_distance(std::complex<Scalar> z, std::complex<Scalar> w)
{
    return std::abs(z - w) / (Scalar(2) * std::sqrt(z.imag() * w.imag()));
}

/**
 * @brief Generalized angle and arc length of curve i between its two
 * tangency points, read off the embedding in closed form.
 *
 * Circle: the Cayley map centered at the hyperbolic center turns the circle
 * into a concentric one, so the central angle is an argument difference.
 * Horocycle: l = 2 sinh(d/2). Hypercycle: sinh(d/2) = cosh r sinh(s/2).
 */
template <typename Scalar>
CornerGeometry<Scalar> embedded_corner(const EmbeddedFace<Scalar>& face, int i)
{
    const auto& circle = face.circles[i];
    const auto& curve = face.curves[i];
    const auto [p, q] = face.arc_endpoints(i);
    CornerGeometry<Scalar> corner;
    corner.kind = circle.kind;
    switch (circle.kind) {
        case CurveKind::Circle: {
            const Scalar height = curve.radius * std::sqrt((circle.k - 1) * (circle.k + 1));
            const std::complex<Scalar> center(curve.center.real(), height);
            const auto wp = (p - center) / (p - std::conj(center));
            const auto wq = (q - center) / (q - std::conj(center));
            const Scalar theta = std::abs(std::arg(wp * std::conj(wq)));
            corner.generalized_angle = theta;
            corner.arc_length = theta * std::sinh(circle.r.value);
            break;
        }
        case CurveKind::Horocycle:
            corner.arc_length = Scalar(2) * half_plane_sinh_half_distance(p, q);
            break;
        case CurveKind::Hypercycle: {
            const Scalar ratio = half_plane_sinh_half_distance(p, q) / std::cosh(circle.r.value);
            const Scalar s = Scalar(2) * std::asinh(ratio);
            corner.generalized_angle = s;
            corner.arc_length = s * std::cosh(circle.r.value);
            break;
        }
    }
    corner.total_curvature = corner.arc_length * circle.k;
    return corner;
}

template <typename Scalar>
Vector3<Scalar> embedded_arc_lengths(const EmbeddedFace<Scalar>& face)
{
    return {embedded_corner(face, 0).arc_length, embedded_corner(face, 1).arc_length,
            embedded_corner(face, 2).arc_length};
}

namespace detail
{

template <typename Scalar>
void set_corner(CornerGeometry<Scalar>& corner, const GeneralizedCircle<Scalar>& c, Scalar angle)
{
    corner.kind = c.kind;
    corner.generalized_angle = angle;
    corner.arc_length = angle * c.length_per_angle();
    corner.total_curvature = angle * c.curvature_per_angle();
}

// Center triangle: all three curves are circles
template <typename Scalar>
void solve_triangle_face(const std::array<GeneralizedCircle<Scalar>, 3>& c, FaceGeometry<Scalar>& out)
{
    const Vector3<Scalar> radii(c[0].r.value, c[1].r.value, c[2].r.value);
    const Vector3<Scalar> theta = tangency_triangle_angles(radii);
    for (int i = 0; i < 3; ++i) {
        set_corner(out.corners[i], c[i], theta[i]);
    }
}

// One hypercycle h: quadrilateral standing on the axis of h
template <typename Scalar>
void solve_quadrilateral_face(const std::array<GeneralizedCircle<Scalar>, 3>& c, int h,
                              FaceGeometry<Scalar>& out)
{
    using std::sinh;
    const int a = (h + 1) % 3;
    const int b = (h + 2) % 3;
    const Scalar rh = c[h].r.value;
    const Scalar ra = c[a].r.value;
    const Scalar rb = c[b].r.value;
    const PolygonSolution<Scalar> sol = solve_quadrilateral_radii(rh, ra, rb);
    const Scalar leg_short = rh + (sol.mirrored ? ra : rb);
    const Scalar rest = sol.gap;
    // right triangle on the long leg, trirectangle below it
    const Scalar angle_long = std::atan2(std::tanh(sol.y), sinh(rest));
    const Scalar angle_short =
        lambert_angle(leg_short, sol.y) + std::atan2(std::tanh(rest), sinh(sol.y));
    const Scalar base = std::asinh(sinh(sol.y) / std::cosh(leg_short));
    const Scalar angle_a = sol.mirrored ? angle_short : angle_long;
    const Scalar angle_b = sol.mirrored ? angle_long : angle_short;
    set_corner(out.corners[a], c[a], angle_a);
    set_corner(out.corners[b], c[b], angle_b);
    set_corner(out.corners[h], c[h], base);
}

// One circle p: pentagon with the circle center as its only non-right vertex
template <typename Scalar>
void solve_pentagon_face(const std::array<GeneralizedCircle<Scalar>, 3>& c, int p,
                         FaceGeometry<Scalar>& out)
{
    using std::sinh;
    const int h1 = (p + 1) % 3;
    const int h2 = (p + 2) % 3;
    const Scalar side1 = c[p].r.value + c[h1].r.value;
    const Scalar side2 = c[p].r.value + c[h2].r.value;
    const PolygonSolution<Scalar> sol = solve_pentagon_radii(c[p].r.value, c[h1].r.value, c[h2].r.value);
    const Scalar theta = lambert_angle(side1, sol.y) + lambert_angle(side2, sol.y);
    const Scalar s1 = std::asinh(sinh(sol.y) / std::cosh(side1));
    const Scalar s2 = std::asinh(sinh(sol.y) / std::cosh(side2));
    set_corner(out.corners[p], c[p], theta);
    set_corner(out.corners[h1], c[h1], s1);
    set_corner(out.corners[h2], c[h2], s2);
}

// Three hypercycles: right-angled hexagon, axis segment i opposite d_i = r_j + r_k
template <typename Scalar>
void solve_hexagon_face(const std::array<GeneralizedCircle<Scalar>, 3>& c, FaceGeometry<Scalar>& out)
{
    const Vector3<Scalar> s = solve_hexagon(c[1].r.value + c[2].r.value, c[2].r.value + c[0].r.value,
                                            c[0].r.value + c[1].r.value);
    for (int i = 0; i < 3; ++i) {
        set_corner(out.corners[i], c[i], s[i]);
    }
}

}  // namespace detail

/**
 * @brief Solve the face with log-curvatures S = ln k.
 *
 * Dispatch by the number of hypercycles among non-horocycle faces: triangle
 * (0), quadrilateral (1), pentagon (2), right-angled hexagon (3). Faces
 * containing a horocycle are read off the half-plane embedding.
 */
template <typename Scalar>
FaceGeometry<Scalar> solve_face_log(const Vector3<Scalar>& log_k)
{
    const auto c = detail::circles_from_log(log_k);
    FaceGeometry<Scalar> out;
    int hypercycles = 0;
    int horocycles = 0;
    for (const auto& circle : c) {
        hypercycles += circle.kind == CurveKind::Hypercycle;
        horocycles += circle.kind == CurveKind::Horocycle;
    }

    if (horocycles > 0) {
        out.face_case = FaceCase::Ideal;
        const auto embedded = realize_face_log(log_k);
        for (int i = 0; i < 3; ++i) {
            out.corners[i] = embedded_corner(embedded, i);
        }
    } else if (hypercycles == 0) {
        out.face_case = FaceCase::Triangle;
        detail::solve_triangle_face(c, out);
    } else if (hypercycles == 1) {
        out.face_case = FaceCase::Quadrilateral;
        int h = 0;
        while (c[h].kind != CurveKind::Hypercycle) ++h;
        detail::solve_quadrilateral_face(c, h, out);
    } else if (hypercycles == 2) {
        out.face_case = FaceCase::Pentagon;
        int p = 0;
        while (c[p].kind != CurveKind::Circle) ++p;
        detail::solve_pentagon_face(c, p, out);
    } else {
        out.face_case = FaceCase::Hexagon;
        detail::solve_hexagon_face(c, out);
    }

    for (int i = 0; i < 3; ++i) {
        out.edge_lengths[i] = edge_length(c[i], c[(i + 1) % 3]);
    }

    // polygon area from its angles; then remove sectors (circle), strips
    // between axis and hypercycle, and horocyclic sectors
    Scalar polygon = PI<Scalar>;
    Scalar removed = Scalar(0);
    for (int i = 0; i < 3; ++i) {
        const auto& corner = out.corners[i];
        switch (corner.kind) {
            case CurveKind::Circle:
                polygon -= *corner.generalized_angle;
                removed += *corner.generalized_angle * detail::cosh_minus_one(c[i].r.value);
                break;
            case CurveKind::Hypercycle:
                removed += *corner.generalized_angle * std::sinh(c[i].r.value);
                break;
            case CurveKind::Horocycle:
                removed += corner.arc_length;
                break;
        }
    }
    out.polygon_area = polygon;
    out.area = polygon - removed;
    return out;
}

template <typename Scalar>
FaceGeometry<Scalar> solve_face(Scalar k1, Scalar k2, Scalar k3)
{
    return solve_face_log(detail::log_curvatures(k1, k2, k3));
}

/** Corner total curvatures only */
template <typename Scalar>
Vector3<Scalar> face_total_curvatures_log(const Vector3<Scalar>& log_k)
{
    return solve_face_log(log_k).total_curvatures();
}

/**
 * @brief J_ij = dL_i / dS_j with S = ln k, by central differences with
 * step 1e-6 max(1, |S_j|).
 */
template <typename Scalar>
Matrix3<Scalar> face_jacobian_log(const Vector3<Scalar>& log_k)
{
    Matrix3<Scalar> jac;
    for (int j = 0; j < 3; ++j) {
        const Scalar h = Scalar(1e-6) * std::max(Scalar(1), std::abs(log_k[j]));
        Vector3<Scalar> plus = log_k;
        Vector3<Scalar> minus = log_k;
        plus[j] += h;
        minus[j] -= h;
        const Scalar step = plus[j] - minus[j];
        jac.col(j) = (face_total_curvatures_log(plus) - face_total_curvatures_log(minus)) / step;
    }
    return jac;
}

template <typename Scalar>
Matrix3<Scalar> face_jacobian(Scalar k1, Scalar k2, Scalar k3)
{
    return face_jacobian_log(detail::log_curvatures(k1, k2, k3));
}

}  // namespace gcp
