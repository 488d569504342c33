#pragma once

// Surface-level assembly: per-vertex total geodesic curvatures L(K), their
// Jacobian M = dL/dK (the Hessian of the convex potential) and the potential
// itself as a line integral.

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gcpack/gauss_legendre.hpp"
#include "gcpack/surface.hpp"
#include "gcpack/tangency.hpp"

namespace gcp
{

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar>;

template <typename Scalar>
struct CurvatureReport {
    VectorX<Scalar> L;
    std::vector<FaceGeometry<Scalar>> faces;
    /** Sum of interstice areas, pi - L1 - L2 - L3 per face */
    Scalar total_area{};
};

namespace detail
{

template <typename Scalar>
void check_dimension(const Triangulation& tri, Eigen::Index size, const char* what)
{
    if (size != tri.num_vertices()) {
        throw DomainError(std::string(what) + " has length " + std::to_string(size) +
                          ", expected " + std::to_string(tri.num_vertices()));
    }
}

template <typename Scalar>
Vector3<Scalar> face_state(const Face& face, const VectorX<Scalar>& log_k)
{
    return {log_k[face[0]], log_k[face[1]], log_k[face[2]]};
}

}  // namespace detail

/** @brief L_i = sum over faces at i of the corner total curvature; faces in order */
template <typename Scalar>
CurvatureReport<Scalar> vertex_curvatures(const Triangulation& tri, const VectorX<Scalar>& log_k)
{
    detail::check_dimension<Scalar>(tri, log_k.size(), "log-curvature vector");
    CurvatureReport<Scalar> report;
    report.L = VectorX<Scalar>::Zero(tri.num_vertices());
    report.faces.reserve(tri.num_faces());
    report.total_area = Scalar(0);
    for (const Face& face : tri.faces()) {
        FaceGeometry<Scalar> geom = solve_face_log(detail::face_state(face, log_k));
        for (int c = 0; c < 3; ++c) {
            report.L[face[c]] += geom.corners[c].total_curvature;
        }
        report.total_area += geom.area;
        report.faces.push_back(std::move(geom));
    }
    return report;
}

/** Curvature vector only, without keeping per-face data */
template <typename Scalar>
VectorX<Scalar> total_curvatures(const Triangulation& tri, const VectorX<Scalar>& log_k)
{
    detail::check_dimension<Scalar>(tri, log_k.size(), "log-curvature vector");
    VectorX<Scalar> L = VectorX<Scalar>::Zero(tri.num_vertices());
    for (const Face& face : tri.faces()) {
        const Vector3<Scalar> corner = face_total_curvatures_log(detail::face_state(face, log_k));
        for (int c = 0; c < 3; ++c) {
            L[face[c]] += corner[c];
        }
    }
    return L;
}

/**
 * @brief M_ij = dL_i/dK_j assembled from the 3x3 face Jacobians.
 *
 * Triplets are emitted in face order, so duplicate summation is
 * deterministic.
 */
template <typename Scalar>
SparseMatrix<Scalar> global_jacobian(const Triangulation& tri, const VectorX<Scalar>& log_k)
{
    detail::check_dimension<Scalar>(tri, log_k.size(), "log-curvature vector");
    std::vector<Eigen::Triplet<Scalar>> triplets;
    triplets.reserve(9 * tri.num_faces());
    for (const Face& face : tri.faces()) {
        const Matrix3<Scalar> jac = face_jacobian_log(detail::face_state(face, log_k));
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                triplets.emplace_back(face[a], face[b], jac(a, b));
            }
        }
    }
    SparseMatrix<Scalar> M(tri.num_vertices(), tri.num_vertices());
    M.setFromTriplets(triplets.begin(), triplets.end());
    return M;
}

template <typename Scalar>
MatrixX<Scalar> global_jacobian_dense(const Triangulation& tri, const VectorX<Scalar>& log_k)
{
    return MatrixX<Scalar>(global_jacobian(tri, log_k));
}

/** @brief Gradient of the potential: L(K) - target */
template <typename Scalar>
VectorX<Scalar> phi_gradient(const Triangulation& tri, const VectorX<Scalar>& log_k,
                             const VectorX<Scalar>& targets)
{
    detail::check_dimension<Scalar>(tri, targets.size(), "target vector");
    return total_curvatures(tri, log_k) - targets;
}

inline constexpr int kPotentialPanels = 64;
inline constexpr int kPotentialOrder = 8;

/**
 * @brief Potential difference Phi(end) - Phi(start) along the polyline
 * through `waypoints`.
 *
 * Integrates sum_i (L_i - target_i) dK_i with composite Gauss–Legendre
 * quadrature (64 panels of order 8 per segment). Since the integrand is a
 * closed form, any path between the same endpoints gives the same value up to
 * quadrature error; that is tested rather than assumed.
 */
template <typename Scalar>
Scalar potential_along_path(const Triangulation& tri, std::span<const VectorX<Scalar>> waypoints,
                            const VectorX<Scalar>& targets)
{
    detail::check_dimension<Scalar>(tri, targets.size(), "target vector");
    if (waypoints.size() < 2) {
        return Scalar(0);
    }
    static thread_local const GaussLegendreRule<Scalar> rule = gauss_legendre<Scalar>(kPotentialOrder);
    Scalar total = Scalar(0);
    for (std::size_t seg = 0; seg + 1 < waypoints.size(); ++seg) {
        const VectorX<Scalar>& a = waypoints[seg];
        const VectorX<Scalar>& b = waypoints[seg + 1];
        detail::check_dimension<Scalar>(tri, a.size(), "path point");
        detail::check_dimension<Scalar>(tri, b.size(), "path point");
        const VectorX<Scalar> delta = b - a;
        const Scalar panel = Scalar(1) / Scalar(kPotentialPanels);
        for (int p = 0; p < kPotentialPanels; ++p) {
            const Scalar mid = (Scalar(p) + Scalar(0.5)) * panel;
            for (int q = 0; q < kPotentialOrder; ++q) {
                const Scalar t = mid + Scalar(0.5) * panel * rule.nodes[q];
                const VectorX<Scalar> point = a + t * delta;
                const Scalar integrand = (total_curvatures(tri, point) - targets).dot(delta);
                total += Scalar(0.5) * panel * rule.weights[q] * integrand;
            }
        }
    }
    return total;
}

/** Straight segment from log_k_ref to log_k */
template <typename Scalar>
Scalar potential_value(const Triangulation& tri, const VectorX<Scalar>& log_k,
                       const VectorX<Scalar>& log_k_ref, const VectorX<Scalar>& targets)
{
    const std::vector<VectorX<Scalar>> path{log_k_ref, log_k};
    return potential_along_path<Scalar>(tri, path, targets);
}

}  // namespace gcp
