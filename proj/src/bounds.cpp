#include "sstiep/bounds.hpp"

#include "sstiep/linalg.hpp"

#include <cmath>

namespace sstiep {

Index cyclic_index(Index l, Index n) {
  require(l >= 1 && n >= 1, "cyclic_index: one-based arguments required");
  const Index r = l % n;
  return r == 0 ? n : r;
}

namespace {

void require_valid_beta(const Vector& beta) {
  if (std::abs(beta.sum() - 1.0) > 1e-12)
    throw InvalidProblemData("beta must sum to 1");
  for (Index i = 0; i < beta.size(); ++i)
    if (std::abs(beta(i)) <= 1e-12)
      throw InvalidProblemData("beta components must be nonzero");
}

}  // namespace

Matrix build_delta(const Vector& beta) {
  require_valid_beta(beta);
  const Index n = beta.size();
  Matrix delta = Matrix::Zero(n, n);
  double tail = beta(n - 1);  // sum_{l=i}^{n} beta_l, built backwards
  delta(n - 1, n - 1) = 1.0;
  for (Index i = n - 2; i >= 0; --i) {
    delta(i, i + 1) = -tail / beta(i);
    tail += beta(i);
    delta(i, i) = tail / beta(i);
  }
  return delta;
}

double eta(const Vector& beta) {
  require_valid_beta(beta);
  double value = 1.0;
  for (Index i = 0; i < beta.size(); ++i)
    for (Index l = i; l < beta.size(); ++l)
      value = std::max(value, std::abs(beta(l)) / std::abs(beta(i)));
  return value;
}

double rho_bar(const ProblemData& data) {
  const double n = double(data.n);
  const double e = eta(data.beta);
  const double l1 = data.lambda(0);
  return (n + l1) * (n + l1) *
         ((n - 1.0) * n * (2.0 * n - 1.0) / 3.0 * e * e + n * (n - 1.0) * e +
          n);
}

GammaTable gamma_table(const ProblemData& data) {
  const Index n = data.n;
  GammaTable table;
  table.n = n;
  table.values.resize(n, n - 1);
  for (Index i = 0; i < n; ++i)
    table.values(i, 0) = data.beta(i) * data.beta(i);
  for (Index k = 1; k <= n - 2; ++k) {
    for (Index i = 1; i <= n; ++i) {
      const double gi = table.values(i - 1, k - 1);
      const double gnext = table.values(cyclic_index(i + 1, n) - 1, k - 1);
      const double gap =
          data.lambda(i - 1) - data.lambda(cyclic_index(i + k, n) - 1);
      table.values(i - 1, k) = gi * gnext * gap * gap / (gi + gnext);
    }
  }
  return table;
}

Matrix build_B(const ProblemData& data, const Matrix& A) {
  const Index n = data.n;
  require(A.rows() == n && A.cols() == n, "build_B: A must be n x n");
  Matrix B = Matrix::Zero(n * n, n * n + n);
  for (Index i = 0; i < n; ++i) {
    Matrix shifted = A;
    shifted.diagonal().array() -= data.lambda(i);
    B.block(i * n, i * n, n, n) = shifted;
    B.block(i * n, n * n, n, n) =
        data.beta(i) * Matrix::Identity(n, n);
  }
  return B;
}

namespace {

// Quotient at the core of the determinant bound:
//   sum_{i < j} g_i g_j (lambda_{[n+i-1]} - lambda_{[n+j-1]})^2 / sum_i g_i
// with g = gamma^{(n-1)}. The pair sum runs over unordered pairs: it is the
// variance identity sum g a^2 - (sum g a)^2 / sum g, and an ordered-pair
// reading would inflate the bound by 2^n past actual determinants.
double spectral_gap_quotient(const ProblemData& data) {
  const Index n = data.n;
  const GammaTable table = gamma_table(data);
  double pair_sum = 0.0;
  double gamma_sum = 0.0;
  for (Index i = 1; i <= n; ++i) {
    gamma_sum += table.at(i, n - 1);
    for (Index j = i + 1; j <= n; ++j) {
      const double gap = data.lambda(cyclic_index(n + i - 1, n) - 1) -
                         data.lambda(cyclic_index(n + j - 1, n) - 1);
      pair_sum += table.at(i, n - 1) * table.at(j, n - 1) * gap * gap;
    }
  }
  return pair_sum / gamma_sum;
}

}  // namespace

double det_gram_lower_bound(const ProblemData& data) {
  const double n = double(data.n);
  return std::exp2(-n * (n - 2.0)) * std::pow(spectral_gap_quotient(data), n);
}

RhoBound rho(const ProblemData& data) {
  const double n = double(data.n);
  const double beta_norm = norm_maxabs(data.beta);
  // (n^2 - 1)! via lgamma; everything accumulated in logs.
  double log_value = n * (n - 2.0) * std::log(2.0) -
                     n * std::log(spectral_gap_quotient(data)) +
                     (n * n - 1.0) * std::log(beta_norm * beta_norm + 4.0) +
                     std::lgamma(n * n) +
                     std::log(n + data.lambda(0) + beta_norm) +
                     std::log(std::max(std::sqrt(rho_bar(data)), 1.0));
  RhoBound bound{log_value, std::nullopt};
  if (log_value < std::log(1e300)) bound.linear = std::exp(log_value);
  return bound;
}

BoundReport bound_report(const ProblemData& data, const Matrix* A) {
  BoundReport report{};
  report.rho_bar = rho_bar(data);
  const RhoBound r = rho(data);
  report.rho_log = r.log_value;
  report.rho_linear = r.linear;
  report.det_lower_bound = det_gram_lower_bound(data);
  if (A != nullptr) {
    Matrix B = build_B(data, *A);
    report.det_BBt = determinant(B * B.transpose());
  }
  return report;
}

}  // namespace sstiep
