#include "survscore/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "survscore/errors.hpp"

namespace survscore {

SymmetricEigen jacobi_eigen(const Matrix& input, int max_sweeps) {
  const Eigen::Index p = input.rows();
  if (input.cols() != p) throw DomainError("jacobi_eigen: matrix is not square");

  Matrix a = input.selfadjointView<Eigen::Upper>();
  Matrix v = Matrix::Identity(p, p);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j) off += a(i, j) * a(i, j);
    const double scale = a.diagonal().squaredNorm();
    if (off <= 1e-32 * (scale > 0.0 ? scale : 1.0)) break;

    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = i + 1; j < p; ++j) {
        const double aij = a(i, j);
        if (aij == 0.0) continue;
        // Rotation angle annihilating a(i, j).
        const double theta = (a(j, j) - a(i, i)) / (2.0 * aij);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < p; ++k) {
          const double aki = a(k, i);
          const double akj = a(k, j);
          a(k, i) = c * aki - s * akj;
          a(k, j) = s * aki + c * akj;
        }
        for (Eigen::Index k = 0; k < p; ++k) {
          const double aik = a(i, k);
          const double ajk = a(j, k);
          a(i, k) = c * aik - s * ajk;
          a(j, k) = s * aik + c * ajk;
        }
        for (Eigen::Index k = 0; k < p; ++k) {
          const double vki = v(k, i);
          const double vkj = v(k, j);
          v(k, i) = c * vki - s * vkj;
          v(k, j) = s * vki + c * vkj;
        }
      }
    }
  }

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(p));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::sort(idx.begin(), idx.end(),
            [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });

  SymmetricEigen out{Vector(p), Matrix(p, p)};
  for (Eigen::Index k = 0; k < p; ++k) {
    double lambda = a(idx[k], idx[k]);
    if (lambda < 0.0 && lambda > -1e-12) lambda = 0.0;
    out.values(k) = lambda;
    out.vectors.col(k) = v.col(idx[k]);
  }
  return out;
}

bool eigenvalues_positive(const Vector& eigenvalues) {
  if (eigenvalues.size() == 0) return false;
  const double lo = eigenvalues.minCoeff();
  const double hi = eigenvalues.maxCoeff();
  return lo > 1e-10 * (1.0 + hi);
}

bool is_positive_definite(const Matrix& a) {
  return eigenvalues_positive(jacobi_eigen(a).values);
}

Matrix sym_matrix_power(const SymmetricEigen& eig, MatrixPower power) {
  const Eigen::Index p = eig.values.size();
  Vector d(p);
  if (power == MatrixPower::InverseSqrt) {
    if (!eigenvalues_positive(eig.values))
      throw SingularMatrix("inverse square root of a singular matrix");
    d = eig.values.array().rsqrt();
  } else {
    if (eig.values.minCoeff() < -1e-10 * (1.0 + std::abs(eig.values.maxCoeff())))
      throw DomainError("square root of a matrix with a negative eigenvalue");
    d = eig.values.cwiseMax(0.0).array().sqrt();
  }
  return eig.vectors * d.asDiagonal() * eig.vectors.transpose();
}

Matrix sym_matrix_power(const Matrix& m, MatrixPower power) {
  return sym_matrix_power(jacobi_eigen(m), power);
}

}  // namespace survscore
