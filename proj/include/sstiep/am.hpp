#pragma once

#include "sstiep/subproblems.hpp"
#include "sstiep/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sstiep {

enum class InitKind { DiagLambda, Zero, Tilde, Bar, Hat, Random, Explicit };

struct InitStrategy {
  InitKind kind = InitKind::DiagLambda;
  double epsilon = 1e-3;    // Hat, for the lambda_1 > lambda_2 >= 0 > lambda_3 case
  std::uint64_t seed = 0;   // Random
  std::optional<Matrix> explicit_A;

  static InitStrategy of(InitKind kind) {
    InitStrategy s;
    s.kind = kind;
    return s;
  }
  static InitStrategy diag_lambda() { return of(InitKind::DiagLambda); }
  static InitStrategy zero() { return of(InitKind::Zero); }
  static InitStrategy tilde() { return of(InitKind::Tilde); }
  static InitStrategy bar() { return of(InitKind::Bar); }
  static InitStrategy hat(double eps = 1e-3) {
    InitStrategy s = of(InitKind::Hat);
    s.epsilon = eps;
    return s;
  }
  static InitStrategy random(std::uint64_t seed) {
    InitStrategy s = of(InitKind::Random);
    s.seed = seed;
    return s;
  }
  static InitStrategy explicit_matrix(Matrix A) {
    InitStrategy s = of(InitKind::Explicit);
    s.explicit_A = std::move(A);
    return s;
  }
};

struct InitialMatrix {
  Matrix A;
  bool clamped_negatives = false;  // DiagLambda with negative spectrum entries
};

/// Builds the starting matrix A_0 for the given strategy. Tilde/Bar/Hat are
/// defined for n = 3 only; Hat throws NonnegativityViolated when its
/// similarity construction leaves a negative entry.
InitialMatrix make_initial(const ProblemData& data,
                           const InitStrategy& strategy);

enum class AmStatus { Converged, MaxIters };

struct AmIteration {
  int index = 0;
  double objective_after_P_step = 0.0;  // L(A_l, P_l)
  double objective_after_A_step = 0.0;  // L(A_{l+1}, P_l)
  double P_maxabs_norm = 0.0;
  double wall_time = 0.0;  // seconds since solve start
};

struct SolveTrace {
  std::vector<AmIteration> iterations;
  AmStatus status = AmStatus::MaxIters;
  MatrixPair final;
  bool subproblem_failure = false;  // a QP hit its iteration cap
  bool init_clamped = false;
  double wall_time = 0.0;
  double kkt_residual = -1.0;  // joint residual at the final pair; -1 when
                               // the polish phase is disabled
};

struct AmOptions {
  double tol = 1e-6;  // |L(A_{k+1}, P_k) - L(A_k, P_k)| termination
  int max_iters = 50000;
  double time_budget = 0.0;  // seconds; 0 disables; exceeding it stops
                             // the loop with status MaxIters
  // After the improvement criterion fires, keep alternating until the joint
  // KKT residual of (A_k, P_k) drops below this, so the reported pair is
  // stationary for both subproblems at once. 0 stops exactly at the
  // improvement criterion (the campaign protocol does that).
  double kkt_polish_tol = 1e-4;
  int kkt_polish_cap = 2000;  // extra rounds allowed for the polish phase
  QpOptions qp;
};

/// Alternating minimization: P-step solves the P-subproblem at fixed A,
/// A-step solves the A-subproblem at fixed P, until the A-step improvement
/// drops to tol (then a bounded polish phase, see AmOptions). Returns the
/// recorded trajectory and the final pair.
SolveTrace am_solve(const ProblemData& data, const InitStrategy& strategy,
                    const AmOptions& opts = {});

enum class Outcome { SolutionFound, NoZeroValueFound };

/// SolutionFound iff final objective <= zero_threshold (boundary inclusive).
Outcome classify_outcome(const SolveTrace& trace,
                         double zero_threshold = 1e-4);

}  // namespace sstiep
