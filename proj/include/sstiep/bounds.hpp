#pragma once

#include "sstiep/subproblems.hpp"
#include "sstiep/types.hpp"

#include <optional>

namespace sstiep {

/// Cyclic index in 1..n: l mod n, with n substituted when the remainder is 0.
/// One-based on both sides.
Index cyclic_index(Index l, Index n);

/// Upper-bidiagonal feasible point of the P-subproblem: row sums are one and
/// beta * Delta = (1, 0, ..., 0).
Matrix build_delta(const Vector& beta);

/// max over l >= i of |beta_l| / |beta_i|; always >= 1.
double eta(const Vector& beta);

/// Objective bound (n + lambda_1)^2 ((n-1)n(2n-1)/3 eta^2 + n(n-1) eta + n),
/// valid for L(A, Delta) over all substochastic A.
double rho_bar(const ProblemData& data);

/// Positive table gamma_i^(k), 1 <= i <= n, 1 <= k <= n-1, built from
/// gamma_i^(1) = beta_i^2 and the pairwise spectral-gap recursion.
struct GammaTable {
  Index n;
  Matrix values;  // values(i, k-1) = gamma_{i+1}^{(k)}

  double at(Index i, Index k) const { return values(i - 1, k - 1); }  // 1-based
};

GammaTable gamma_table(const ProblemData& data);

/// The n^2 x (n^2 + n) matrix B whose transpose stacks the shifted blocks
/// A' - lambda_i I over the row [beta_1 I, ..., beta_n I].
Matrix build_B(const ProblemData& data, const Matrix& A);

/// Lower bound on det(B B') valid for every substochastic A; depends only on
/// (lambda, beta).
double det_gram_lower_bound(const ProblemData& data);

/// Uniform max-abs bound on solutions of the P-subproblem. The value is
/// astronomically large, so it is computed in log space; `linear` is present
/// only when exp(log_value) is representable.
struct RhoBound {
  double log_value;
  std::optional<double> linear;
};

RhoBound rho(const ProblemData& data);

struct BoundReport {
  double rho_bar;
  double rho_log;
  std::optional<double> rho_linear;
  double det_lower_bound;
  std::optional<double> det_BBt;  // present when an A was supplied
};

BoundReport bound_report(const ProblemData& data,
                         const Matrix* A = nullptr);

}  // namespace sstiep
