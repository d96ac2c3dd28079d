#pragma once

#include "sstiep/types.hpp"

namespace sstiep {

/// Max-abs entry norm, the matrix norm written ||A|| throughout.
double norm_maxabs(const Matrix& m);
double norm_maxabs(const Vector& v);

/// Frobenius norm with a fixed row-major summation order so that repeated
/// evaluations are bit-identical.
double norm_frobenius(const Matrix& m);

Matrix matmul(const Matrix& a, const Matrix& b);

/// Solves M X = rhs by partial-pivoting LU. Throws SingularMatrix when a
/// pivot falls below 1e-14 * norm_maxabs(M).
Matrix lu_solve(const Matrix& m, const Matrix& rhs);
Vector lu_solve(const Matrix& m, const Vector& rhs);

/// Signed product of LU pivots. Singular inputs yield a value near zero
/// rather than an error.
double determinant(const Matrix& m);

}  // namespace sstiep
