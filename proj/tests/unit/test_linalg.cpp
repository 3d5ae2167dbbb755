#include <random>

#include <gtest/gtest.h>

#include "survscore/errors.hpp"
#include "survscore/linalg.hpp"

using namespace survscore;

namespace {

Matrix random_spd(std::mt19937_64& gen, Eigen::Index p) {
  std::normal_distribution<double> g;
  Matrix a(p, p);
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < p; ++j) a(i, j) = g(gen);
  return a * a.transpose() + 0.1 * Matrix::Identity(p, p);
}

}  // namespace

TEST(Jacobi, DiagonalMatrixKeepsItsEigenvalues) {
  Matrix d = Vector::LinSpaced(4, 4.0, 1.0).asDiagonal();
  const SymmetricEigen e = jacobi_eigen(d);
  EXPECT_NEAR(e.values(0), 1.0, 1e-14);
  EXPECT_NEAR(e.values(3), 4.0, 1e-14);
}

TEST(Jacobi, ReconstructsRandomSymmetricMatrices) {
  std::mt19937_64 gen(11);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index p = 1 + rep % 6;
    const Matrix a = random_spd(gen, p);
    const SymmetricEigen e = jacobi_eigen(a);
    const Matrix back = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LT((back - a).norm(), 1e-10 * (1.0 + a.norm()));
    EXPECT_LT((e.vectors.transpose() * e.vectors - Matrix::Identity(p, p)).norm(), 1e-12);
  }
}

TEST(MatrixPower, IdentityInverseSqrtIsIdentity) {
  const Matrix i = Matrix::Identity(3, 3);
  EXPECT_LT((sym_matrix_power(i, MatrixPower::InverseSqrt) - i).norm(), 1e-15);
}

TEST(MatrixPower, DiagonalInverseSqrt) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const Matrix r = sym_matrix_power(d, MatrixPower::InverseSqrt);
  EXPECT_NEAR(r(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(r(1, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(r(0, 1), 0.0, 1e-15);
}

TEST(MatrixPower, SquareRootIdentitiesOnRandomSpd) {
  std::mt19937_64 gen(12);
  for (int rep = 0; rep < 200; ++rep) {
    const Eigen::Index p = 1 + rep % 5;
    const Matrix a = random_spd(gen, p);
    const Matrix s = sym_matrix_power(a, MatrixPower::Sqrt);
    const Matrix is = sym_matrix_power(a, MatrixPower::InverseSqrt);
    EXPECT_LT((s * s - a).norm(), 1e-10 * (1.0 + a.norm()));
    EXPECT_LT((is * a * is - Matrix::Identity(p, p)).norm(), 1e-8);
    EXPECT_LT((s - s.transpose()).norm(), 1e-12);
  }
}

TEST(MatrixPower, InverseSqrtOfSingularMatrixThrows) {
  Matrix a(2, 2);
  a << 1.0, 1.0, 1.0, 1.0;
  EXPECT_THROW(sym_matrix_power(a, MatrixPower::InverseSqrt), SingularMatrix);
  EXPECT_NO_THROW(sym_matrix_power(a, MatrixPower::Sqrt));
}

TEST(PositiveDefinite, ScaleAwareTolerance) {
  EXPECT_TRUE(is_positive_definite(Matrix::Identity(2, 2) * 1e-6));
  Matrix a = Matrix::Identity(2, 2);
  a(1, 1) = 1e-12;
  EXPECT_FALSE(is_positive_definite(a));
}
