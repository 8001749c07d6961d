#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <utility>

namespace sage {

// Gauss-Hermite rule for the standard normal weight (probabilists' form)
// via Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// the squared first eigenvector components. Exact for polynomials of degree
// up to 2n - 1.
template <typename Scalar = double>
std::pair<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>
gauss_hermite(int n) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (n == 1) return {Vector::Zero(1), Vector::Ones(1)};
  Matrix jacobi = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<Scalar>(k));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(jacobi);
  Vector nodes = eig.eigenvalues();
  Vector weights = eig.eigenvectors().row(0).transpose().array().square();
  // symmetrize to remove rounding asymmetry around zero
  for (int k = 0; k < n / 2; ++k) {
    const Scalar x = (nodes(n - 1 - k) - nodes(k)) / 2;
    const Scalar w = (weights(k) + weights(n - 1 - k)) / 2;
    nodes(k) = -x;
    nodes(n - 1 - k) = x;
    weights(k) = weights(n - 1 - k) = w;
  }
  if (n % 2 == 1) nodes(n / 2) = 0;
  weights /= weights.sum();
  return {nodes, weights};
}

}  // namespace sage
