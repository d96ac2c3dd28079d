#include "sstiep/qp.hpp"

#include "sstiep/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sstiep {

QpProblem::QpProblem(Matrix q, Vector lin, Matrix eq, Vector eq_rhs,
                     Matrix ineq, Vector ineq_rhs)
    : Q(std::move(q)),
      c(std::move(lin)),
      E(std::move(eq)),
      d(std::move(eq_rhs)),
      G(std::move(ineq)),
      h(std::move(ineq_rhs)) {
  const Index n = c.size();
  require(Q.rows() == n && Q.cols() == n, "QpProblem: Q must be n x n");
  if (E.size() == 0 && E.rows() != 0) E.resize(0, n);
  if (G.size() == 0 && G.rows() != 0) G.resize(0, n);
  require(E.rows() == d.size(), "QpProblem: E/d row mismatch");
  require(G.rows() == h.size(), "QpProblem: G/h row mismatch");
  require(E.rows() == 0 || E.cols() == n, "QpProblem: E column mismatch");
  require(G.rows() == 0 || G.cols() == n, "QpProblem: G column mismatch");
  const double asym = (Q - Q.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-12 * std::max(1.0, norm_maxabs(Q)) || asym <= 1e-12,
          "QpProblem: Q not symmetric");
  Q = 0.5 * (Q + Q.transpose());
}

namespace {

// Largest alpha in [0, 1] with v + alpha * dv >= (1 - tau) * v, elementwise.
double step_to_boundary(const Vector& v, const Vector& dv, double tau) {
  double alpha = 1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -tau * v(i) / dv(i));
  }
  return alpha;
}

// Contiguous diagonal blocks of a symmetric matrix. A dense matrix is one
// block; the subproblem Hessians split into n blocks of size n.
std::vector<std::pair<Index, Index>> diagonal_blocks(const Matrix& Q) {
  const Index n = Q.rows();
  std::vector<std::pair<Index, Index>> blocks;
  Index start = 0, reach = 0;
  for (Index i = 0; i < n; ++i) {
    Index hi = i;
    for (Index j = n - 1; j > hi; --j)
      if (Q(i, j) != 0.0) {
        hi = j;
        break;
      }
    reach = std::max(reach, hi);
    if (i >= reach) {
      blocks.emplace_back(start, i - start + 1);
      start = i + 1;
      reach = i + 1;
    }
  }
  return blocks;
}

// Newton-system solver exploiting the block-diagonal Hessian: inequality
// rows touching a single variable fold into the diagonal; the remaining
// equality/general rows form a small Schur complement over the blocks.
class KktSolver {
 public:
  KktSolver(const QpProblem& p, double delta)
      : p_(p),
        delta_(delta),
        blocks_(diagonal_blocks(p.Q)),
        bound_col_(p.num_ineq(), -1),
        bound_coeff_(p.num_ineq(), 0.0) {
    for (Index r = 0; r < p_.num_ineq(); ++r) {
      Index nonzeros = 0, col = -1;
      for (Index j = 0; j < p_.num_vars(); ++j)
        if (p_.G(r, j) != 0.0) {
          ++nonzeros;
          col = j;
          if (nonzeros > 1) break;
        }
      if (nonzeros == 1) {
        bound_col_[size_t(r)] = col;
        bound_coeff_[size_t(r)] = p_.G(r, col);
      } else {
        general_rows_.push_back(r);
      }
    }
    const Index k = p_.num_eq() + Index(general_rows_.size());
    border_.resize(k, p_.num_vars());
    border_.topRows(p_.num_eq()) = p_.E;
    for (size_t g = 0; g < general_rows_.size(); ++g)
      border_.row(p_.num_eq() + Index(g)) = p_.G.row(general_rows_[g]);
    factors_.resize(blocks_.size());
  }

  // Refactor for the current scaling w = z ./ s.
  void factor(const Vector& w) {
    const Index k = border_.rows();
    Vector diag = Vector::Constant(p_.num_vars(), delta_);
    for (Index r = 0; r < p_.num_ineq(); ++r)
      if (bound_col_[size_t(r)] >= 0)
        diag(bound_col_[size_t(r)]) +=
            w(r) * bound_coeff_[size_t(r)] * bound_coeff_[size_t(r)];
    for (size_t b = 0; b < blocks_.size(); ++b) {
      const auto [start, size] = blocks_[b];
      Matrix block = p_.Q.block(start, start, size, size);
      block.diagonal() += diag.segment(start, size);
      factors_[b].compute(block);
    }
    if (k > 0) {
      // Schur complement over the border rows.
      Matrix solved = solve_blocks(border_.transpose());
      Matrix schur = border_ * solved;
      for (size_t g = 0; g < general_rows_.size(); ++g) {
        const Index r = general_rows_[g];
        schur(p_.num_eq() + Index(g), p_.num_eq() + Index(g)) += 1.0 / w(r);
      }
      schur_.compute(schur);
    }
  }

  // Solves M dx + border' u = bx, border dx - diag(0, 1/w_gen) u = bu.
  void solve(const Vector& bx, const Vector& bu, Vector& dx,
             Vector& du) const {
    Vector mx = solve_blocks(bx);
    if (border_.rows() == 0) {
      dx = mx;
      du = Vector();
      return;
    }
    du = schur_.solve(border_ * mx - bu);
    dx = mx - solve_blocks(Vector(border_.transpose() * du));
  }

  const std::vector<Index>& general_rows() const { return general_rows_; }
  Index bound_col(Index r) const { return bound_col_[size_t(r)]; }
  double bound_coeff(Index r) const { return bound_coeff_[size_t(r)]; }

 private:
  template <typename Rhs>
  Matrix solve_blocks(const Rhs& rhs) const {
    Matrix out(rhs.rows(), rhs.cols());
    for (size_t b = 0; b < blocks_.size(); ++b) {
      const auto [start, size] = blocks_[b];
      out.middleRows(start, size) =
          factors_[b].solve(rhs.middleRows(start, size));
    }
    return out;
  }
  Vector solve_blocks(const Vector& rhs) const {
    Vector out(rhs.size());
    for (size_t b = 0; b < blocks_.size(); ++b) {
      const auto [start, size] = blocks_[b];
      out.segment(start, size) =
          factors_[b].solve(rhs.segment(start, size).eval());
    }
    return out;
  }

  const QpProblem& p_;
  double delta_;
  std::vector<std::pair<Index, Index>> blocks_;
  std::vector<Index> bound_col_;
  std::vector<double> bound_coeff_;
  std::vector<Index> general_rows_;
  Matrix border_;
  std::vector<Eigen::LDLT<Matrix>> factors_;
  Eigen::LDLT<Matrix> schur_;
};

}  // namespace

QpSolution qp_solve(const QpProblem& p, const QpOptions& opts) {
  const Index n = p.num_vars();
  const Index me = p.num_eq();
  const Index mi = p.num_ineq();

  // Proximal regularization on Q's diagonal inside the KKT matrix only;
  // the subproblem Hessians here are PSD but often singular.
  const double delta = 1e-9 * (1.0 + norm_maxabs(p.Q));
  KktSolver kkt(p, delta);

  // Starting point: least-squares solve of Ex = d (or 0), unit slacks and
  // multipliers. Mehrotra iterations tolerate the infeasible start.
  Vector x = Vector::Zero(n);
  if (me > 0) x = p.E.colPivHouseholderQr().solve(p.d);
  Vector y = Vector::Zero(me);
  Vector s = Vector::Ones(mi);
  Vector z = Vector::Ones(mi);

  QpSolution best;
  best.x = x;
  best.eq_multipliers = y;
  best.ineq_multipliers = z;
  double best_res = std::numeric_limits<double>::infinity();
  int stalled = 0;

  const Index k = me + Index(kkt.general_rows().size());

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    Vector r_dual = p.Q * x + p.c;
    if (me > 0) r_dual += p.E.transpose() * y;
    if (mi > 0) r_dual += p.G.transpose() * z;
    Vector r_eq = me > 0 ? Vector(p.E * x - p.d) : Vector();
    Vector r_in = mi > 0 ? Vector(p.G * x + s - p.h) : Vector();
    const double mu = mi > 0 ? s.dot(z) / double(mi) : 0.0;
    const double mu_max = mi > 0 ? s.cwiseProduct(z).maxCoeff() : 0.0;

    double res = norm_maxabs(r_dual);
    if (me > 0) res = std::max(res, norm_maxabs(r_eq));
    if (mi > 0) res = std::max(res, norm_maxabs(r_in));

    if (res <= opts.tol_feas && mu_max <= opts.tol_gap) {
      QpSolution sol;
      sol.x = x;
      sol.eq_multipliers = y;
      sol.ineq_multipliers = z;
      sol.objective = 0.5 * x.dot(p.Q * x) + p.c.dot(x);
      sol.status = QpStatus::Optimal;
      sol.iterations = iter;
      return sol;
    }

    const double merit = std::max(res, mu);
    if (merit < 0.99 * best_res) {
      best_res = merit;
      best.x = x;
      best.eq_multipliers = y;
      best.ineq_multipliers = z;
      best.iterations = iter;
      stalled = 0;
    } else if (++stalled >= opts.stall_window) {
      // No progress for a full window while still infeasible: treat as an
      // infeasibility certificate (heuristic).
      best.objective = 0.5 * best.x.dot(p.Q * best.x) + p.c.dot(best.x);
      best.status = QpStatus::Infeasible;
      return best;
    }

    Vector w = mi > 0 ? Vector(z.cwiseQuotient(s)) : Vector();
    kkt.factor(w);

    // r_cent is the complementarity target: Z ds + S dz = -r_cent.
    auto solve_step = [&](const Vector& r_cent, Vector& dx, Vector& dy,
                          Vector& ds, Vector& dz) {
      Vector bx = -r_dual;
      for (Index r = 0; r < mi; ++r) {
        const Index j = kkt.bound_col(r);
        if (j >= 0)
          bx(j) -= kkt.bound_coeff(r) * (z(r) * r_in(r) - r_cent(r)) / s(r);
      }
      Vector bu(k);
      if (me > 0) bu.head(me) = -r_eq;
      const auto& gen = kkt.general_rows();
      for (size_t g = 0; g < gen.size(); ++g)
        bu(me + Index(g)) = r_cent(gen[g]) / z(gen[g]) - r_in(gen[g]);
      Vector du;
      kkt.solve(bx, bu, dx, du);
      if (me > 0) dy = du.head(me);
      if (mi > 0) {
        ds = -r_in - p.G * dx;
        dz = -(r_cent + z.cwiseProduct(ds)).cwiseQuotient(s);
        // General rows already carry their multiplier step exactly.
        for (size_t g = 0; g < gen.size(); ++g)
          dz(gen[g]) = du(me + Index(g));
      }
    };

    Vector dx, dy = Vector::Zero(me), ds, dz;
    double sigma_mu = 0.0;
    Vector corr = mi > 0 ? Vector(Vector::Zero(mi)) : Vector();
    if (mi > 0) {
      // Predictor: pure Newton step on the complementarity target S z = 0.
      Vector r_cent_aff = s.cwiseProduct(z);
      solve_step(r_cent_aff, dx, dy, ds, dz);
      const double a_p = step_to_boundary(s, ds, 1.0);
      const double a_d = step_to_boundary(z, dz, 1.0);
      const double mu_aff = (s + a_p * ds).dot(z + a_d * dz) / double(mi);
      const double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
      sigma_mu = sigma * mu;
      corr = ds.cwiseProduct(dz);
    }

    // Corrector reuses the factorization with the centered target.
    Vector r_cent = mi > 0 ? Vector(s.cwiseProduct(z) + corr -
                                    Vector::Constant(mi, sigma_mu))
                           : Vector();
    solve_step(r_cent, dx, dy, ds, dz);

    double a_p = 1.0, a_d = 1.0;
    if (mi > 0) {
      const double tau = std::max(0.99, 1.0 - 10.0 * mu);
      a_p = step_to_boundary(s, ds, tau);
      a_d = step_to_boundary(z, dz, tau);
    }
    x += a_p * dx;
    if (mi > 0) s += a_p * ds;
    if (me > 0) y += a_d * dy;
    if (mi > 0) z += a_d * dz;
  }

  best.objective = 0.5 * best.x.dot(p.Q * best.x) + p.c.dot(best.x);
  best.status = QpStatus::MaxIters;
  best.iterations = opts.max_iters;
  return best;
}

QpResiduals qp_kkt_residual(const QpProblem& p, const QpSolution& s) {
  require(s.x.size() == p.num_vars(), "qp_kkt_residual: x size");
  require(s.eq_multipliers.size() == p.num_eq(), "qp_kkt_residual: y size");
  require(s.ineq_multipliers.size() == p.num_ineq(),
          "qp_kkt_residual: z size");
  QpResiduals r;
  Vector stat = p.Q * s.x + p.c;
  if (p.num_eq() > 0) stat += p.E.transpose() * s.eq_multipliers;
  if (p.num_ineq() > 0) stat += p.G.transpose() * s.ineq_multipliers;
  r.stationarity = norm_maxabs(stat);
  if (p.num_eq() > 0) r.primal = norm_maxabs(Vector(p.E * s.x - p.d));
  if (p.num_ineq() > 0) {
    Vector slack = p.h - p.G * s.x;
    r.primal = std::max(r.primal, (-slack).maxCoeff());
    r.complementarity =
        norm_maxabs(Vector(s.ineq_multipliers.cwiseProduct(slack)));
  }
  r.primal = std::max(r.primal, 0.0);
  return r;
}

}  // namespace sstiep
