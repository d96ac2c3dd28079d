#include <doctest.h>

#include "oracles.hpp"
#include "sstiep/linalg.hpp"

#include <random>

using namespace sstiep;

TEST_CASE("lu_solve identity and diagonal") {
  Matrix I3 = Matrix::Identity(3, 3);
  Vector b(3);
  b << 1, -2, 3;
  CHECK((lu_solve(I3, b) - b).cwiseAbs().maxCoeff() == 0.0);

  Matrix D(2, 2);
  D << 2, 0, 0, 4;
  Vector rhs(2);
  rhs << 1, 1;
  Vector x = lu_solve(D, rhs);
  CHECK(x(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(x(1) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("lu_solve residual on well-conditioned systems") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 5;
    // Conditioning controlled through an explicit singular-value profile.
    Matrix Q1 = Eigen::HouseholderQR<Matrix>(
                    oracle::random_matrix(rng, n, n))
                    .householderQ();
    Matrix Q2 = Eigen::HouseholderQR<Matrix>(
                    oracle::random_matrix(rng, n, n))
                    .householderQ();
    Vector sv(n);
    for (Index i = 0; i < n; ++i)
      sv(i) = std::pow(10.0, -1.5 * double(i));  // condition 1e6
    Matrix M = Q1 * sv.asDiagonal() * Q2.transpose();
    Matrix rhs = oracle::random_matrix(rng, n, 2);
    Matrix X = lu_solve(M, rhs);
    const double res = norm_maxabs(Matrix(M * X - rhs));
    CHECK(res <= 1e-10 * std::max(1.0, norm_maxabs(M) * norm_maxabs(X)));
  }
}

TEST_CASE("lu_solve rejects singular and misshapen input") {
  Matrix M(2, 2);
  M << 1, 2, 2, 4;
  Vector b(2);
  b << 1, 1;
  CHECK_THROWS_AS(lu_solve(M, b), SingularMatrix);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(lu_solve(oracle::random_matrix(rng, 3, 2), b),
                  ShapeMismatch);
}

TEST_CASE("determinant exact on triangular inputs") {
  CHECK(determinant(Matrix::Identity(4, 4)) == 1.0);
  Matrix diag234 = Matrix::Zero(3, 3);
  diag234.diagonal() << 2, 3, 4;
  CHECK(determinant(diag234) == 24.0);
}

TEST_CASE("determinant matches cofactor expansion") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix M = oracle::random_matrix(rng, 4, 4);
    const double expected = oracle::cofactor_determinant(M);
    CHECK(determinant(M) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("determinant of transpose") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(2, 6);
  for (int trial = 0; trial < 60; ++trial) {
    Matrix M = oracle::random_matrix(rng, size(rng), 1);
    const Index n = M.rows();
    M = oracle::random_matrix(rng, n, n);
    CHECK(determinant(M.transpose().eval()) ==
          doctest::Approx(determinant(M)).epsilon(1e-9));
  }
}

TEST_CASE("norms and matmul") {
  Matrix M(2, 2);
  M << 1, -3, 2, 0;
  CHECK(norm_maxabs(M) == 3.0);
  CHECK(norm_frobenius(Matrix::Identity(2, 2)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  std::mt19937_64 rng(3);
  Matrix A = oracle::random_matrix(rng, 3, 4);
  CHECK(norm_maxabs(Matrix(matmul(A, Matrix::Identity(4, 4)) - A)) == 0.0);
  CHECK_THROWS_AS(matmul(A, Matrix::Identity(3, 3)), ShapeMismatch);

  // Fixed summation order: the squared norm equals the row-major
  // accumulation exactly, not just approximately.
  double acc = 0.0;
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j) acc += A(i, j) * A(i, j);
  CHECK(norm_frobenius(A) == std::sqrt(acc));
}
