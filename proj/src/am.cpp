#include "sstiep/am.hpp"

#include "sstiep/kkt.hpp"
#include "sstiep/linalg.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace sstiep {

namespace {

Matrix tilde_matrix() {
  Matrix A(3, 3);
  A << 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 6,
      1.0 / 6, 1.0 / 6;
  return A;
}

Matrix bar_matrix() {
  Matrix A(3, 3);
  A << 1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 9, 0, 1, 0;
  return A;
}

Matrix hat_matrix(const ProblemData& data, double eps) {
  const Vector& l = data.lambda;
  Matrix Q(3, 3);
  if (l(2) >= 0.0) {
    Q << 1, 1, 1, 1, 1, -1, 1, -1, 0;
  } else if (l(1) >= 0.0) {
    Q << 1, 1, 0, 1, -eps, 1 - eps, 1, -eps, -(1 - eps);
  } else {
    const double c = l(1) / (l(1) + l(2));
    Q << 1, 1, 0, 1, -c, 1 - c, 1, -c, -1 + c;
  }
  Matrix A = Q * l.asDiagonal() * lu_solve(Q, Matrix(Matrix::Identity(3, 3)));
  if (A.minCoeff() < -1e-12)
    throw NonnegativityViolated(
        "hat initialization produced a negative entry");
  A = A.cwiseMax(0.0);
  for (Index i = 0; i < 3; ++i)
    if (A.row(i).sum() > 1.0 + 1e-12)
      throw NonnegativityViolated("hat initialization row sum exceeds 1");
  return A;
}

Matrix random_substochastic(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix A(n, n);
  for (Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Index j = 0; j < n; ++j) {
      A(i, j) = unit(rng);
      row_sum += A(i, j);
    }
    const double target = unit(rng);  // row sum in (0, 1)
    A.row(i) *= target / row_sum;
  }
  return A;
}

void require_feasible_start(const Matrix& A) {
  if (A.minCoeff() < 0.0)
    throw InfeasibleInput("initial A has negative entries");
  for (Index i = 0; i < A.rows(); ++i)
    if (A.row(i).sum() > 1.0 + 1e-12)
      throw InfeasibleInput("initial A row sum exceeds 1");
}

}  // namespace

InitialMatrix make_initial(const ProblemData& data,
                           const InitStrategy& strategy) {
  InitialMatrix out;
  switch (strategy.kind) {
    case InitKind::DiagLambda: {
      Vector clamped = data.lambda.cwiseMax(0.0);
      out.clamped_negatives = (data.lambda.minCoeff() < 0.0);
      out.A = clamped.asDiagonal();
      break;
    }
    case InitKind::Zero:
      out.A = Matrix::Zero(data.n, data.n);
      break;
    case InitKind::Tilde:
      if (data.n != 3) throw UnsupportedDimension("tilde requires n = 3");
      out.A = tilde_matrix();
      break;
    case InitKind::Bar:
      if (data.n != 3) throw UnsupportedDimension("bar requires n = 3");
      out.A = bar_matrix();
      break;
    case InitKind::Hat:
      if (data.n != 3) throw UnsupportedDimension("hat requires n = 3");
      out.A = hat_matrix(data, strategy.epsilon);
      break;
    case InitKind::Random:
      out.A = random_substochastic(data.n, strategy.seed);
      break;
    case InitKind::Explicit:
      if (!strategy.explicit_A)
        throw InvalidProblemData("explicit strategy without a matrix");
      require(strategy.explicit_A->rows() == data.n &&
                  strategy.explicit_A->cols() == data.n,
              "explicit initial matrix has wrong shape");
      out.A = *strategy.explicit_A;
      break;
  }
  require_feasible_start(out.A);
  return out;
}

namespace {

// QP iterates satisfy the constraints to solver tolerance only; snap the
// few 1e-10-scale violations so downstream feasibility checks hold exactly.
Matrix clean_A(Matrix A) {
  A = A.cwiseMax(0.0);
  for (Index i = 0; i < A.rows(); ++i) {
    const double row_sum = A.row(i).sum();
    if (row_sum > 1.0) A.row(i) /= row_sum;
  }
  return A;
}

}  // namespace

SolveTrace am_solve(const ProblemData& data, const InitStrategy& strategy,
                    const AmOptions& opts) {
  require(opts.max_iters >= 1, "am_solve: max_iters must be positive");
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - start).count();
  };

  InitialMatrix init = make_initial(data, strategy);
  Matrix A = init.A;

  SolveTrace trace;
  trace.init_clamped = init.clamped_negatives;

  bool improvement_done = false;  // the |L(A_{k+1},P_k) - L(A_k,P_k)| gate
  int polish_rounds = 0;

  Matrix P;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    QpSolution p_sol = qp_solve(build_op_a(data, A), opts.qp);
    if (p_sol.status == QpStatus::MaxIters) trace.subproblem_failure = true;
    P = unstack_rows(p_sol.x, data.n);
    const double obj_p = objective_direct(data, A, P);

    if (improvement_done) {
      // Polish: (A, P) now pairs the latest A with its own optimal P;
      // accept once the joint KKT residual is small enough.
      trace.kkt_residual = kkt_report(data, A, P).residuals.max();
      if (trace.kkt_residual <= opts.kkt_polish_tol ||
          polish_rounds >= opts.kkt_polish_cap) {
        AmIteration rec;
        rec.index = iter;
        rec.objective_after_P_step = obj_p;
        rec.objective_after_A_step = obj_p;  // no A-step in the final round
        rec.P_maxabs_norm = norm_maxabs(P);
        rec.wall_time = elapsed();
        trace.iterations.push_back(rec);
        trace.status = AmStatus::Converged;
        break;
      }
      ++polish_rounds;
    }

    QpSolution a_sol = qp_solve(build_op_p(data, P), opts.qp);
    if (a_sol.status == QpStatus::MaxIters) trace.subproblem_failure = true;
    Matrix A_next = clean_A(unstack_columns(a_sol.x, data.n));
    const double obj_a = objective_direct(data, A_next, P);

    AmIteration rec;
    rec.index = iter;
    rec.objective_after_P_step = obj_p;
    rec.objective_after_A_step = obj_a;
    rec.P_maxabs_norm = norm_maxabs(P);
    rec.wall_time = elapsed();
    trace.iterations.push_back(rec);

    A = A_next;
    if (trace.subproblem_failure) break;
    if (!improvement_done && std::abs(obj_a - obj_p) <= opts.tol) {
      improvement_done = true;
      if (opts.kkt_polish_tol <= 0.0) {
        trace.status = AmStatus::Converged;
        break;
      }
    }
    if (opts.time_budget > 0.0 && elapsed() > opts.time_budget) break;
  }

  trace.final.A = A;
  trace.final.P = P;
  trace.final.objective = objective_direct(data, A, P);
  trace.wall_time = elapsed();
  return trace;
}

Outcome classify_outcome(const SolveTrace& trace, double zero_threshold) {
  return trace.final.objective <= zero_threshold ? Outcome::SolutionFound
                                                 : Outcome::NoZeroValueFound;
}

}  // namespace sstiep
