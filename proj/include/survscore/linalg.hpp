#pragma once

#include <Eigen/Core>

namespace survscore {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Eigen-decomposition A = P diag(values) P^T of a symmetric matrix.
struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns are orthonormal eigenvectors
};

/// Cyclic Jacobi rotations. Only the upper triangle of `a` is read.
/// Eigenvalues in (-1e-12, 0) are clamped to zero.
SymmetricEigen jacobi_eigen(const Matrix& a, int max_sweeps = 100);

/// Scale-aware positive-definiteness test used throughout the library:
/// smallest eigenvalue > 1e-10 * (1 + largest eigenvalue).
bool eigenvalues_positive(const Vector& eigenvalues);
bool is_positive_definite(const Matrix& a);

enum class MatrixPower { InverseSqrt, Sqrt };

/// V^x = P D^x P^T for x in {-1/2, +1/2}. Throws SingularMatrix for the
/// inverse square root of a matrix that fails the positive-definite test.
Matrix sym_matrix_power(const Matrix& m, MatrixPower power);
Matrix sym_matrix_power(const SymmetricEigen& eig, MatrixPower power);

}  // namespace survscore
