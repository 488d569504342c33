#pragma once

// Geometric reading of a curvature vector: vertex classes (boundary / cusp /
// cone), cone angles, geodesic boundary lengths and a Gauss–Bonnet audit.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gcpack/errors.hpp"
#include "gcpack/packing.hpp"
#include "gcpack/surface.hpp"

namespace gcp
{

enum class VertexClass { Boundary, Cusp, Cone };

inline const char* to_string(VertexClass c)
{
    switch (c) {
    case VertexClass::Boundary: return "boundary";
    case VertexClass::Cusp: return "cusp";
    case VertexClass::Cone: return "cone";
    }
    return "unknown";
}

inline constexpr double kClassTolerance = 1e-9;

struct Classification {
    std::vector<VertexClass> classes;
    /** hypercycle vertices, k < 1 - tol */
    std::vector<int> boundary;
    /** |k - 1| <= tol */
    std::vector<int> cusps;
    /** circle vertices, k > 1 + tol */
    std::vector<int> cones;
};

template <typename Scalar>
Classification classify(const VectorX<Scalar>& k, Scalar tol = Scalar(kClassTolerance))
{
    if (!(tol > Scalar(0))) throw DomainError("classification tolerance must be positive");
    Classification out;
    out.classes.reserve(k.size());
    for (Eigen::Index i = 0; i < k.size(); ++i) {
        if (!(k[i] > Scalar(0))) throw DomainError("curvatures must be positive");
        const int v = static_cast<int>(i);
        if (std::abs(k[i] - Scalar(1)) <= tol) {
            out.classes.push_back(VertexClass::Cusp);
            out.cusps.push_back(v);
        } else if (k[i] < Scalar(1)) {
            out.classes.push_back(VertexClass::Boundary);
            out.boundary.push_back(v);
        } else {
            out.classes.push_back(VertexClass::Cone);
            out.cones.push_back(v);
        }
    }
    return out;
}

namespace detail
{

inline int corner_of(const Face& face, int v)
{
    for (int c = 0; c < 3; ++c) {
        if (face[c] == v) return c;
    }
    throw DomainError("vertex " + std::to_string(v) + " is not a corner of the face");
}

/** Sum of the generalized angles at v over its faces */
template <typename Scalar>
Scalar generalized_angle_sum(const Triangulation& tri, const std::vector<FaceGeometry<Scalar>>& faces, int v,
                             int* segments = nullptr)
{
    Scalar total = Scalar(0);
    int count = 0;
    for (int f : tri.faces_of(v)) {
        const CornerGeometry<Scalar>& corner = faces[f].corners[corner_of(tri.faces()[f], v)];
        if (corner.generalized_angle) {
            total += *corner.generalized_angle;
            count += *corner.generalized_angle > Scalar(0);
        }
    }
    if (segments) *segments = count;
    return total;
}

}  // namespace detail

/**
 * @brief Cone angle at a circle vertex: the sum of its corner angles.
 * @throws DomainError if k_v <= 1 + tol
 */
template <typename Scalar>
Scalar cone_angle(const Triangulation& tri, const VectorX<Scalar>& log_k, int v,
                  Scalar tol = Scalar(kClassTolerance))
{
    if (v < 0 || v >= tri.num_vertices()) throw DomainError("vertex index out of range");
    if (!(std::exp(log_k[v]) > Scalar(1) + tol)) {
        throw DomainError("vertex " + std::to_string(v) + " is not a cone point (k <= 1)");
    }
    const CurvatureReport<Scalar> report = vertex_curvatures(tri, log_k);
    return detail::generalized_angle_sum(tri, report.faces, v);
}

template <typename Scalar>
struct ConeData {
    int vertex;
    Scalar angle;
    /** 2 pi - angle */
    Scalar curvature;
};

template <typename Scalar>
std::vector<ConeData<Scalar>> cone_data(const Triangulation& tri, const VectorX<Scalar>& log_k,
                                        Scalar tol = Scalar(kClassTolerance))
{
    const VectorX<Scalar> k = log_k.array().exp();
    const Classification cls = classify(k, tol);
    const CurvatureReport<Scalar> report = vertex_curvatures(tri, log_k);
    std::vector<ConeData<Scalar>> out;
    for (int v : cls.cones) {
        const Scalar angle = detail::generalized_angle_sum(tri, report.faces, v);
        out.push_back({v, angle, Scalar(2) * PI<Scalar> - angle});
    }
    return out;
}

template <typename Scalar>
struct BoundaryComponent {
    int vertex;
    /** Sum of the axis segments cut out by the incident faces */
    Scalar length;
    int segments;
};

template <typename Scalar>
struct BoundaryData {
    std::vector<BoundaryComponent<Scalar>> components;
    std::vector<int> cusps;
};

template <typename Scalar>
BoundaryData<Scalar> boundary_data(const Triangulation& tri, const VectorX<Scalar>& log_k,
                                   Scalar tol = Scalar(kClassTolerance))
{
    const VectorX<Scalar> k = log_k.array().exp();
    const Classification cls = classify(k, tol);
    const CurvatureReport<Scalar> report = vertex_curvatures(tri, log_k);
    BoundaryData<Scalar> out;
    for (int v : cls.boundary) {
        int segments = 0;
        const Scalar length = detail::generalized_angle_sum(tri, report.faces, v, &segments);
        out.components.push_back({v, length, segments});
    }
    out.cusps = cls.cusps;
    return out;
}

template <typename Scalar>
struct AuditReport {
    int chi_surface;
    /** chi(S) - |boundary| - |cusps| */
    int chi_realized;
    /** Sum over faces of pi minus the cone-vertex corner angles */
    Scalar total_area;
    /** Sum over cone vertices of 2 pi - angle */
    Scalar total_cone_curvature;
    Scalar residual;
};

namespace detail
{

template <typename Scalar>
AuditReport<Scalar> audit_from(const Triangulation& tri, const std::vector<FaceGeometry<Scalar>>& faces,
                               const Classification& cls)
{
    const Scalar pi = PI<Scalar>;
    AuditReport<Scalar> audit{};
    audit.chi_surface = euler_characteristic(tri);
    audit.chi_realized = audit.chi_surface - static_cast<int>(cls.boundary.size()) -
                         static_cast<int>(cls.cusps.size());
    audit.total_area = Scalar(0);
    for (int f = 0; f < tri.num_faces(); ++f) {
        Scalar area = pi;
        for (int c = 0; c < 3; ++c) {
            const int v = tri.faces()[f][c];
            if (cls.classes[v] == VertexClass::Cone) {
                area -= faces[f].corners[c].generalized_angle.value_or(Scalar(0));
            }
        }
        audit.total_area += area;
    }
    audit.total_cone_curvature = Scalar(0);
    for (int v : cls.cones) {
        audit.total_cone_curvature += Scalar(2) * pi - generalized_angle_sum(tri, faces, v);
    }
    audit.residual = std::abs(audit.total_area + Scalar(2) * pi * Scalar(audit.chi_realized) -
                              audit.total_cone_curvature);
    return audit;
}

}  // namespace detail

/**
 * @brief |area + 2 pi chi(S_realized) - sum over cones of (2 pi - angle)|.
 *
 * Boundary corners are right angles of the truncated polygons and cusps are
 * ideal, so only cone corners enter the face areas.
 */
template <typename Scalar>
AuditReport<Scalar> gauss_bonnet_audit(const Triangulation& tri, const VectorX<Scalar>& log_k,
                                       Scalar tol = Scalar(kClassTolerance))
{
    const VectorX<Scalar> k = log_k.array().exp();
    const CurvatureReport<Scalar> report = vertex_curvatures(tri, log_k);
    return detail::audit_from(tri, report.faces, classify(k, tol));
}

template <typename Scalar>
struct VertexRecord {
    int index;
    Scalar k;
    VertexClass vertex_class;
    Scalar L;
    std::optional<Scalar> cone_angle;
    /** 2 pi - cone angle */
    std::optional<Scalar> gaussian_curvature;
    std::optional<Scalar> boundary_length;
    int boundary_segments{0};
};

template <typename Scalar>
struct RealizedMetric {
    std::vector<VertexRecord<Scalar>> vertices;
    AuditReport<Scalar> audit;
    /** Sum of the interstice areas pi - L1 - L2 - L3 */
    Scalar interstice_area;
};

template <typename Scalar>
RealizedMetric<Scalar> realize(const Triangulation& tri, const VectorX<Scalar>& log_k,
                               Scalar tol = Scalar(kClassTolerance))
{
    const VectorX<Scalar> k = log_k.array().exp();
    const Classification cls = classify(k, tol);
    const CurvatureReport<Scalar> report = vertex_curvatures(tri, log_k);
    RealizedMetric<Scalar> out;
    out.vertices.reserve(tri.num_vertices());
    for (int v = 0; v < tri.num_vertices(); ++v) {
        VertexRecord<Scalar> rec{v, k[v], cls.classes[v], report.L[v], {}, {}, {}, 0};
        if (rec.vertex_class == VertexClass::Cone) {
            const Scalar angle = detail::generalized_angle_sum(tri, report.faces, v);
            rec.cone_angle = angle;
            rec.gaussian_curvature = Scalar(2) * PI<Scalar> - angle;
        } else if (rec.vertex_class == VertexClass::Boundary) {
            rec.boundary_length = detail::generalized_angle_sum(tri, report.faces, v, &rec.boundary_segments);
        }
        out.vertices.push_back(rec);
    }
    out.audit = detail::audit_from(tri, report.faces, cls);
    out.interstice_area = report.total_area;
    return out;
}

}  // namespace gcp
