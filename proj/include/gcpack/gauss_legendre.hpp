#pragma once

#include <Eigen/Dense>

namespace gcp
{

/** @brief Gauss–Legendre nodes and weights on [-1, 1] */
template <typename Scalar>
struct GaussLegendreRule {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
};

/**
 * Golub–Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix of
 * the Legendre recurrence, weights are 2 (first eigenvector component)^2.
 */
template <typename Scalar>
GaussLegendreRule<Scalar> gauss_legendre(int order)
{
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix jacobi = Matrix::Zero(order, order);
    for (int i = 1; i < order; ++i) {
        const Scalar n = Scalar(i);
        const Scalar beta = n / std::sqrt(Scalar(4) * n * n - Scalar(1));
        jacobi(i, i - 1) = beta;
        jacobi(i - 1, i) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
    GaussLegendreRule<Scalar> rule;
    rule.nodes = eig.eigenvalues();
    rule.weights = Scalar(2) * eig.eigenvectors().row(0).transpose().array().square();
    return rule;
}

}  // namespace gcp
