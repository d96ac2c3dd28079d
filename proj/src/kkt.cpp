#include "sstiep/kkt.hpp"

#include "sstiep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sstiep {

double KktResiduals::max() const {
  return std::max({stationarity_P, stationarity_A, complementarity,
                   feasibility});
}

Gradients gradients(const ProblemData& data, const Matrix& A,
                    const Matrix& P) {
  const Index n = data.n;
  require(A.rows() == n && A.cols() == n && P.rows() == n && P.cols() == n,
          "gradients: A/P must be n x n");
  Matrix residual = P * A - data.lambda.asDiagonal() * P;
  Gradients g;
  g.grad_P = 2.0 * residual * A.transpose() -
             2.0 * data.lambda.asDiagonal() * residual;
  g.grad_A = 2.0 * P.transpose() * residual;
  return g;
}

namespace {

// min ||M u - g||^2 with u >= 0 on the flagged coordinates and the rest
// free. Lawson-Hanson active set; free coordinates stay in the passive set
// permanently, so the recovered multipliers are least-squares exact.
Vector bounded_least_squares(const Matrix& M, const Vector& g,
                             const std::vector<bool>& nonneg) {
  const Index k = M.cols();
  std::vector<bool> passive(size_t(k), false);
  for (Index i = 0; i < k; ++i) passive[size_t(i)] = !nonneg[size_t(i)];

  auto solve_passive = [&](Vector& z) {
    std::vector<Index> idx;
    for (Index i = 0; i < k; ++i)
      if (passive[size_t(i)]) idx.push_back(i);
    z = Vector::Zero(k);
    if (idx.empty()) return;
    Matrix sub(M.rows(), Index(idx.size()));
    for (size_t c = 0; c < idx.size(); ++c) sub.col(Index(c)) = M.col(idx[c]);
    Vector zi = sub.colPivHouseholderQr().solve(g);
    for (size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zi(Index(c));
  };

  Vector u;
  solve_passive(u);
  const double tol = 1e-10 * std::max(1.0, norm_maxabs(Vector(M.transpose() * g)));
  for (int outer = 0; outer < 3 * int(k) + 10; ++outer) {
    Vector w = M.transpose() * (g - M * u);
    Index enter = -1;
    double best = tol;
    for (Index i = 0; i < k; ++i)
      if (nonneg[size_t(i)] && !passive[size_t(i)] && w(i) > best) {
        best = w(i);
        enter = i;
      }
    if (enter < 0) break;
    passive[size_t(enter)] = true;

    for (int inner = 0; inner < 3 * int(k) + 10; ++inner) {
      Vector z;
      solve_passive(z);
      bool feasible = true;
      double alpha = 1.0;
      for (Index i = 0; i < k; ++i)
        if (nonneg[size_t(i)] && passive[size_t(i)] && z(i) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, u(i) / (u(i) - z(i)));
        }
      if (feasible) {
        u = z;
        break;
      }
      u += alpha * (z - u);
      for (Index i = 0; i < k; ++i)
        if (nonneg[size_t(i)] && passive[size_t(i)] && u(i) <= 1e-14)
          passive[size_t(i)] = false;
    }
  }
  return u;
}

}  // namespace

KktReport kkt_report(const ProblemData& data, const Matrix& A,
                     const Matrix& P, double tol_active) {
  const Index n = data.n;
  KktReport report;
  report.grads = gradients(data, A, P);

  Vector row_sum_P(n), row_sum_A(n);
  for (Index i = 0; i < n; ++i) {
    row_sum_P(i) = P.row(i).sum();
    row_sum_A(i) = A.row(i).sum();
  }
  Vector beta_P = P.transpose() * data.beta;

  double feas = 0.0;
  for (Index i = 0; i < n; ++i) {
    feas = std::max(feas, std::abs(row_sum_P(i) - 1.0));
    feas = std::max(feas, row_sum_A(i) - 1.0);
    feas = std::max(feas, -beta_P(i));
  }
  feas = std::max(feas, -A.minCoeff());
  feas = std::max(feas, 0.0);
  if (feas > 1e-6)
    throw InfeasiblePoint("kkt_report: (A, P) infeasible beyond 1e-6");

  // P side: grad_P(i,j) + alpha_i - alpha_tilde_j beta_i = 0, with
  // alpha_tilde pinned to zero on columns where beta P is inactive.
  std::vector<Index> active_cols;
  for (Index j = 0; j < n; ++j)
    if (beta_P(j) <= tol_active) active_cols.push_back(j);
  {
    const Index k = n + Index(active_cols.size());
    Matrix M = Matrix::Zero(n * n, k);
    Vector g(n * n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        M(i * n + j, i) = 1.0;
        g(i * n + j) = -report.grads.grad_P(i, j);
      }
    for (size_t a = 0; a < active_cols.size(); ++a)
      for (Index i = 0; i < n; ++i)
        M(i * n + active_cols[a], n + Index(a)) = -data.beta(i);
    std::vector<bool> nonneg(size_t(k), false);
    for (size_t a = 0; a < active_cols.size(); ++a) nonneg[n + a] = true;
    Vector u = bounded_least_squares(M, g, nonneg);
    report.multipliers.alpha = u.head(n);
    report.multipliers.alpha_tilde = Vector::Zero(n);
    for (size_t a = 0; a < active_cols.size(); ++a)
      report.multipliers.alpha_tilde(active_cols[a]) =
          std::max(u(n + Index(a)), 0.0);
  }

  // A side: grad_A(i,j) + pi_i - pi_tilde_ij = 0, pinned by the active
  // pattern of the row-sum and nonnegativity constraints. Equation (i,j)
  // involves only row-i multipliers, so the recovery decouples by row.
  report.multipliers.pi = Vector::Zero(n);
  report.multipliers.pi_tilde = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const bool row_active = row_sum_A(i) >= 1.0 - tol_active;
    std::vector<Index> entry_cols;
    for (Index j = 0; j < n; ++j)
      if (A(i, j) <= tol_active) entry_cols.push_back(j);
    const Index k = Index(entry_cols.size()) + (row_active ? 1 : 0);
    if (k == 0) continue;
    Matrix M = Matrix::Zero(n, k);
    Vector g(n);
    for (Index j = 0; j < n; ++j) g(j) = -report.grads.grad_A(i, j);
    Index col = 0;
    if (row_active) M.col(col++).setOnes();
    for (Index j : entry_cols) M(j, col++) = -1.0;
    Vector u = bounded_least_squares(M, g, std::vector<bool>(size_t(k), true));
    col = 0;
    if (row_active) report.multipliers.pi(i) = std::max(u(col++), 0.0);
    for (Index j : entry_cols)
      report.multipliers.pi_tilde(i, j) = std::max(u(col++), 0.0);
  }

  KktResiduals& res = report.residuals;
  res.feasibility = feas;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      res.stationarity_P = std::max(
          res.stationarity_P,
          std::abs(report.grads.grad_P(i, j) + report.multipliers.alpha(i) -
                   report.multipliers.alpha_tilde(j) * data.beta(i)));
      res.stationarity_A = std::max(
          res.stationarity_A,
          std::abs(report.grads.grad_A(i, j) + report.multipliers.pi(i) -
                   report.multipliers.pi_tilde(i, j)));
      res.complementarity =
          std::max(res.complementarity,
                   std::abs(report.multipliers.pi_tilde(i, j) * A(i, j)));
    }
  for (Index i = 0; i < n; ++i) {
    res.complementarity = std::max(
        res.complementarity,
        std::abs(report.multipliers.alpha_tilde(i) * beta_P(i)));
    res.complementarity =
        std::max(res.complementarity,
                 std::abs(report.multipliers.pi(i) * (row_sum_A(i) - 1.0)));
  }
  return report;
}

DescentProbe verify_not_local_max(const ProblemData& data, const Matrix& A,
                                  const Matrix& P, double step) {
  const Index n = data.n;
  require(A.rows() == n && A.cols() == n && P.rows() == n && P.cols() == n,
          "verify_not_local_max: A/P must be n x n");
  for (Index i = 0; i < n; ++i)
    require(std::abs(P.row(i).sum() - 1.0) <= 1e-8,
            "verify_not_local_max: P rows must sum to 1");

  const double base = objective_direct(data, A, P);
  const double strict_tol = 1e-12 * std::max(1.0, base);
  const Matrix grad_A = gradients(data, A, P).grad_A;

  // Along D = s e_ij the objective moves by s t grad_A(i,j) + t^2 |P e_i|^2,
  // so a direction is exactly flat iff column i of P and the matching
  // gradient entry both vanish.
  const double scale = std::max(1.0, norm_maxabs(P));
  auto is_flat = [&](Index i, Index j) {
    return P.col(i).squaredNorm() <= 1e-12 * scale * scale &&
           std::abs(grad_A(i, j)) <= 1e-8 * std::max(1.0, base);
  };

  DescentProbe best;
  best.direction = Matrix::Zero(n, n);
  best.delta = std::numeric_limits<double>::infinity();
  Index flat_i = -1, flat_j = -1;
  double flat_sign = 0.0;

  Matrix trial = A;
  auto consider = [&](Index i, Index j, double sign) {
    trial(i, j) = A(i, j) + sign * step;
    Matrix r = P * trial - data.lambda.asDiagonal() * P;
    const double delta = norm_frobenius(r) * norm_frobenius(r) - base;
    trial(i, j) = A(i, j);
    if (delta < best.delta) {
      best.delta = delta;
      best.direction = Matrix::Zero(n, n);
      best.direction(i, j) = sign;
    }
    if (flat_i < 0 && is_flat(i, j)) {
      flat_i = i;
      flat_j = j;
      flat_sign = sign;
    }
  };

  for (Index i = 0; i < n; ++i) {
    const double row_sum = A.row(i).sum();
    for (Index j = 0; j < n; ++j) {
      if (row_sum + step <= 1.0 + 1e-12) consider(i, j, +1.0);
      if (A(i, j) - step >= -1e-12) consider(i, j, -1.0);
    }
  }

  if (best.delta < -strict_tol) {
    best.kind = ProbeKind::StrictDescent;
  } else if (flat_i >= 0) {
    best.kind = ProbeKind::Flat;
    best.direction = Matrix::Zero(n, n);
    best.direction(flat_i, flat_j) = flat_sign;
    best.delta = 0.0;
  } else {
    best.kind = ProbeKind::AllIncreasing;
    best.direction = Matrix::Zero(n, n);
    best.delta = 0.0;
  }
  return best;
}

}  // namespace sstiep
