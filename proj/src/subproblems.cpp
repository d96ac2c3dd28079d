#include "sstiep/subproblems.hpp"

#include "sstiep/linalg.hpp"

#include <cmath>

namespace sstiep {

ProblemData::ProblemData(Vector lambda_in, Vector beta_in)
    : n(lambda_in.size()),
      lambda(std::move(lambda_in)),
      beta(std::move(beta_in)) {
  if (n < 2) throw InvalidProblemData("n must be at least 2");
  if (beta.size() != n)
    throw InvalidProblemData("lambda and beta lengths differ");
  if (!all_finite(lambda) || !all_finite(beta))
    throw InvalidProblemData("non-finite entry");
  if (!(lambda(0) < 1.0))
    throw InvalidProblemData("lambda_1 must be below 1");
  for (Index i = 0; i + 1 < n; ++i)
    if (!(lambda(i) > lambda(i + 1)))
      throw InvalidProblemData("lambda must be strictly decreasing");
  for (Index i = 1; i < n; ++i)
    if (!(lambda(0) > std::abs(lambda(i))))
      throw InvalidProblemData("lambda_1 must dominate |lambda_l|");
  if (std::abs(beta.sum() - 1.0) > 1e-12)
    throw InvalidProblemData("beta must sum to 1");
  for (Index i = 0; i < n; ++i)
    if (std::abs(beta(i)) <= 1e-12)
      throw InvalidProblemData("beta components must be nonzero");
}

PairCheck check_pair(const ProblemData& data, const MatrixPair& pair) {
  PairCheck c;
  auto fail = [&](const std::string& msg) {
    c.ok = false;
    c.violation = msg;
    return c;
  };
  const Index n = data.n;
  if (pair.A.rows() != n || pair.A.cols() != n || pair.P.rows() != n ||
      pair.P.cols() != n)
    return fail("A/P shape mismatch");
  if (pair.A.minCoeff() < -1e-10)
    return fail("A has a negative entry beyond 1e-10");
  for (Index i = 0; i < n; ++i) {
    if (pair.A.row(i).sum() > 1.0 + 1e-10)
      return fail("A row " + std::to_string(i) + " sum exceeds 1");
    if (std::abs(pair.P.row(i).sum() - 1.0) > 1e-8)
      return fail("P row " + std::to_string(i) + " sum differs from 1");
  }
  Vector bp = pair.P.transpose() * data.beta;
  if (bp.minCoeff() < -1e-8) return fail("beta P has a negative component");
  const double obj = objective_direct(data, pair.A, pair.P);
  if (std::abs(obj - pair.objective) > 1e-10 * std::max(1.0, std::abs(obj)))
    return fail("stored objective differs from recomputed value");
  return c;
}

double objective_direct(const ProblemData& data, const Matrix& A,
                        const Matrix& P) {
  const Index n = data.n;
  require(A.rows() == n && A.cols() == n && P.rows() == n && P.cols() == n,
          "objective: A/P must be n x n");
  Matrix residual = P * A - data.lambda.asDiagonal() * P;
  const double f = norm_frobenius(residual);
  return f * f;
}

Matrix shifted_gram(const Matrix& A, double x) {
  Matrix shifted = A;
  shifted.diagonal().array() -= x;
  return shifted * shifted.transpose();
}

double objective_quadform_P(const ProblemData& data, const Matrix& A,
                            const Matrix& P) {
  const Index n = data.n;
  require(A.rows() == n && A.cols() == n && P.rows() == n && P.cols() == n,
          "objective: A/P must be n x n");
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    Vector row = P.row(i).transpose();
    total += row.dot(shifted_gram(A, data.lambda(i)) * row);
  }
  return total;
}

double objective_quadform_A(const ProblemData& data, const Matrix& A,
                            const Matrix& P) {
  const Index n = data.n;
  require(A.rows() == n && A.cols() == n && P.rows() == n && P.cols() == n,
          "objective: A/P must be n x n");
  double total = 0.0;
  for (Index j = 0; j < n; ++j) {
    Vector col = A.col(j);
    for (Index i = 0; i < n; ++i) {
      const double pa = P.row(i).dot(col);
      const double pij = P(i, j);
      const double li = data.lambda(i);
      total += pa * pa - 2.0 * li * pij * pa + li * li * pij * pij;
    }
  }
  return total;
}

QpProblem build_op_a(const ProblemData& data, const Matrix& A) {
  const Index n = data.n;
  require(A.rows() == n && A.cols() == n, "build_op_a: A must be n x n");
  if (A.minCoeff() < -1e-8)
    throw InfeasibleInput("build_op_a: A has negative entries");
  for (Index i = 0; i < n; ++i)
    if (A.row(i).sum() > 1.0 + 1e-8)
      throw InfeasibleInput("build_op_a: A row sums exceed 1");

  const Index nv = n * n;
  Matrix Q = Matrix::Zero(nv, nv);
  for (Index i = 0; i < n; ++i)
    Q.block(i * n, i * n, n, n) = 2.0 * shifted_gram(A, data.lambda(i));

  // Row sums of P equal one.
  Matrix E = Matrix::Zero(n, nv);
  for (Index i = 0; i < n; ++i) E.block(i, i * n, 1, n).setOnes();
  Vector d = Vector::Ones(n);

  // -sum_i beta_i p_ij <= 0, one constraint per column j.
  Matrix G = Matrix::Zero(n, nv);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) G(j, i * n + j) = -data.beta(i);
  Vector h = Vector::Zero(n);

  return QpProblem(std::move(Q), Vector::Zero(nv), std::move(E), std::move(d),
                   std::move(G), std::move(h));
}

QpProblem build_op_p(const ProblemData& data, const Matrix& P) {
  const Index n = data.n;
  require(P.rows() == n && P.cols() == n, "build_op_p: P must be n x n");
  require(all_finite(P), "build_op_p: P must be finite");

  const Index nv = n * n;
  Matrix block = 2.0 * (P.transpose() * P);
  Matrix Q = Matrix::Zero(nv, nv);
  Matrix lin_src = P.transpose() * data.lambda.asDiagonal() * P;
  Vector c(nv);
  for (Index j = 0; j < n; ++j) {
    Q.block(j * n, j * n, n, n) = block;
    c.segment(j * n, n) = -2.0 * lin_src.col(j);
  }

  // a_ij >= 0 plus n row-sum constraints; row i touches position j*n + i of
  // every column block j.
  Matrix G = Matrix::Zero(nv + n, nv);
  G.topLeftCorner(nv, nv) = -Matrix::Identity(nv, nv);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) G(nv + i, j * n + i) = 1.0;
  Vector h = Vector::Zero(nv + n);
  h.tail(n).setOnes();

  return QpProblem(std::move(Q), std::move(c), Matrix(0, nv), Vector(),
                   std::move(G), std::move(h));
}

double op_p_dropped_constant(const ProblemData& data, const Matrix& P) {
  double total = 0.0;
  for (Index i = 0; i < data.n; ++i)
    total += data.lambda(i) * data.lambda(i) * P.row(i).squaredNorm();
  return total;
}

Matrix unstack_rows(const Vector& x, Index n) {
  require(x.size() == n * n, "unstack_rows: size mismatch");
  Matrix P(n, n);
  for (Index i = 0; i < n; ++i) P.row(i) = x.segment(i * n, n).transpose();
  return P;
}

Matrix unstack_columns(const Vector& x, Index n) {
  require(x.size() == n * n, "unstack_columns: size mismatch");
  Matrix A(n, n);
  for (Index j = 0; j < n; ++j) A.col(j) = x.segment(j * n, n);
  return A;
}

Vector stack_rows(const Matrix& P) {
  Vector x(P.rows() * P.cols());
  for (Index i = 0; i < P.rows(); ++i)
    x.segment(i * P.cols(), P.cols()) = P.row(i).transpose();
  return x;
}

Vector stack_columns(const Matrix& A) {
  Vector x(A.rows() * A.cols());
  for (Index j = 0; j < A.cols(); ++j)
    x.segment(j * A.rows(), A.rows()) = A.col(j);
  return x;
}

}  // namespace sstiep
