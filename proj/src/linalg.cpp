#include "sstiep/linalg.hpp"

namespace sstiep {

double norm_maxabs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double norm_maxabs(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

double norm_frobenius(const Matrix& m) {
  // Row-major left-to-right accumulation, kept explicit on purpose: the
  // value must not depend on how the backend vectorizes a reduction.
  double acc = 0.0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) acc += m(i, j) * m(i, j);
  return std::sqrt(acc);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  return a * b;
}

namespace {

Eigen::PartialPivLU<Matrix> checked_lu(const Matrix& m) {
  require(m.rows() == m.cols(), "lu_solve: matrix not square");
  Eigen::PartialPivLU<Matrix> lu(m);
  const double tol = 1e-14 * norm_maxabs(m);
  const auto diag = lu.matrixLU().diagonal();
  for (Index i = 0; i < diag.size(); ++i) {
    if (std::abs(diag(i)) < tol)
      throw SingularMatrix("lu_solve: pivot " + std::to_string(i) +
                           " below tolerance");
  }
  return lu;
}

}  // namespace

Matrix lu_solve(const Matrix& m, const Matrix& rhs) {
  require(rhs.rows() == m.rows(), "lu_solve: rhs row count differs");
  return checked_lu(m).solve(rhs);
}

Vector lu_solve(const Matrix& m, const Vector& rhs) {
  require(rhs.size() == m.rows(), "lu_solve: rhs length differs");
  return checked_lu(m).solve(rhs);
}

double determinant(const Matrix& m) {
  require(m.rows() == m.cols(), "determinant: matrix not square");
  if (m.rows() == 1) return m(0, 0);
  return Eigen::PartialPivLU<Matrix>(m).determinant();
}

}  // namespace sstiep
