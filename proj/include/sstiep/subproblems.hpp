#pragma once

#include "sstiep/qp.hpp"
#include "sstiep/types.hpp"

namespace sstiep {

/// Spectrum/weight data (lambda, beta) for the inverse eigenvalue problem.
///
/// Validated at construction:
///   1 > lambda_1 > ... > lambda_n,  lambda_1 > max_{l>=2} |lambda_l|,
///   sum(beta) = 1 (1e-12) and every |beta_l| > 1e-12.
struct ProblemData {
  Index n;
  Vector lambda;
  Vector beta;

  ProblemData(Vector lambda_in, Vector beta_in);
};

/// Candidate pair with its objective value L(A, P) = ||PA - diag(lambda)P||_F^2.
struct MatrixPair {
  Matrix A;
  Matrix P;
  double objective = 0.0;
};

struct PairCheck {
  bool ok = true;
  std::string violation;  // first failed invariant, empty when ok
};

/// MatrixPair feasibility/consistency check at the documented tolerances:
/// A >= -1e-10, row sums of A <= 1 + 1e-10, row sums of P = 1 (1e-8),
/// beta P >= -1e-8, objective recomputed within 1e-10 relative.
PairCheck check_pair(const ProblemData& data, const MatrixPair& pair);

/// L(A, P) evaluated directly from the residual PA - diag(lambda)P.
double objective_direct(const ProblemData& data, const Matrix& A,
                        const Matrix& P);

/// Shifted Gram matrix (A - xI)(A - xI)'.
Matrix shifted_gram(const Matrix& A, double x);

/// L(A, P) as sum_i P_(i) (A - lambda_i I)(A - lambda_i I)' P_(i)'.
double objective_quadform_P(const ProblemData& data, const Matrix& A,
                            const Matrix& P);

/// L(A, P) expanded entrywise in the columns of A.
double objective_quadform_A(const ProblemData& data, const Matrix& A,
                            const Matrix& P);

/// QP over the n^2 entries of P (rows of P stacked): block-diagonal Hessian
/// 2(A - lambda_i I)(A - lambda_i I)', row-sum equalities, and the n
/// inequalities -sum_i beta_i p_ij <= 0. Throws InfeasibleInput when A is
/// not substochastic beyond 1e-8.
QpProblem build_op_a(const ProblemData& data, const Matrix& A);

/// QP over the n^2 entries of A (columns of A stacked): n identical blocks
/// 2 P'P, linear term -2 (P' diag(lambda) P) per column, entrywise
/// nonnegativity and row-sum <= 1 inequalities. The constant
/// sum_ij lambda_i^2 p_ij^2 is dropped from the objective.
QpProblem build_op_p(const ProblemData& data, const Matrix& P);

/// Constant dropped by build_op_p's objective.
double op_p_dropped_constant(const ProblemData& data, const Matrix& P);

/// Stacking conventions shared with build_op_a / build_op_p.
Matrix unstack_rows(const Vector& x, Index n);     // x -> P (rows stacked)
Matrix unstack_columns(const Vector& x, Index n);  // x -> A (columns stacked)
Vector stack_rows(const Matrix& P);
Vector stack_columns(const Matrix& A);

}  // namespace sstiep
