#pragma once

#include "sstiep/types.hpp"

namespace sstiep {

/// Dense convex quadratic program
///
///   minimize    1/2 x'Qx + c'x
///   subject to  E x  = d
///               G x <= h
///
/// Q is symmetrized at construction and assumed positive semidefinite.
/// E/G may be empty (0 rows).
struct QpProblem {
  Matrix Q;
  Vector c;
  Matrix E;
  Vector d;
  Matrix G;
  Vector h;

  QpProblem(Matrix q, Vector lin, Matrix eq, Vector eq_rhs, Matrix ineq,
            Vector ineq_rhs);

  Index num_vars() const { return c.size(); }
  Index num_eq() const { return E.rows(); }
  Index num_ineq() const { return G.rows(); }
};

enum class QpStatus { Optimal, Infeasible, MaxIters };

struct QpSolution {
  Vector x;
  Vector eq_multipliers;    // y, free sign
  Vector ineq_multipliers;  // z >= 0
  double objective = 0.0;
  QpStatus status = QpStatus::MaxIters;
  int iterations = 0;
};

struct QpOptions {
  double tol_gap = 1e-10;   // max elementwise complementarity product s_j z_j
  double tol_feas = 1e-10;  // max-abs primal/dual residual
  int max_iters = 200;
  int stall_window = 50;  // stagnant iterations before Infeasible is declared
};

/// Primal-dual interior point with Mehrotra predictor-corrector steps.
/// Deterministic: fixed starting point, no randomness, so identical inputs
/// give bit-identical outputs.
QpSolution qp_solve(const QpProblem& p, const QpOptions& opts = {});

struct QpResiduals {
  double stationarity = 0.0;
  double primal = 0.0;
  double complementarity = 0.0;
};

/// Max-abs residuals of the KKT system at (x, y, z): stationarity
/// Qx + c + E'y + G'z, primal feasibility Ex - d and (Gx - h)+, and the
/// elementwise products z_j * (h - Gx)_j.
QpResiduals qp_kkt_residual(const QpProblem& p, const QpSolution& s);

}  // namespace sstiep
