#pragma once

#include "sstiep/subproblems.hpp"
#include "sstiep/types.hpp"

namespace sstiep {

struct Gradients {
  Matrix grad_P;  // d L / d p_ij
  Matrix grad_A;  // d L / d a_ij
};

/// Analytic gradients of L(A, P) = ||PA - diag(lambda)P||_F^2:
///   grad_P = 2 R A' - 2 diag(lambda) R,   grad_A = 2 P' R,
/// with R = PA - diag(lambda)P.
Gradients gradients(const ProblemData& data, const Matrix& A,
                    const Matrix& P);

struct KktMultipliers {
  Vector alpha;        // row-sum equalities of P, free sign
  Vector alpha_tilde;  // beta P >= 0 columns, >= 0
  Vector pi;           // row sums of A, >= 0
  Matrix pi_tilde;     // entrywise A >= 0, >= 0
};

struct KktResiduals {
  double stationarity_P = 0.0;
  double stationarity_A = 0.0;
  double complementarity = 0.0;
  double feasibility = 0.0;
  double max() const;
};

struct KktReport {
  Gradients grads;
  KktMultipliers multipliers;
  KktResiduals residuals;
};

struct InfeasiblePoint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Recovers multipliers for the stationarity systems of the two subproblems
/// by nonnegative least squares, pinning multipliers of constraints that are
/// inactive at tol_active to zero, and reports the remaining residuals.
/// Throws InfeasiblePoint when (A, P) violates the constraint set beyond
/// 1e-6.
KktReport kkt_report(const ProblemData& data, const Matrix& A,
                     const Matrix& P, double tol_active = 1e-7);

enum class ProbeKind { StrictDescent, Flat, AllIncreasing };

struct DescentProbe {
  Matrix direction;  // zero matrix when kind == AllIncreasing
  ProbeKind kind = ProbeKind::AllIncreasing;
  double delta = 0.0;  // L(A + step D, P) - L(A, P) along the direction
};

/// Coordinate probe for Theorem-style "not a local maximum" evidence:
/// searches feasible directions +-e_ij at the given step for one along
/// which L does not increase. AllIncreasing (zero direction) is returned
/// only at points the theory rules out for AM limit points, or at a
/// global-minimum candidate.
DescentProbe verify_not_local_max(const ProblemData& data, const Matrix& A,
                                  const Matrix& P, double step = 1e-4);

}  // namespace sstiep
