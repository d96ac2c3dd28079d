#include <doctest.h>

#include "oracles.hpp"
#include "sstiep/am.hpp"
#include "sstiep/bounds.hpp"
#include "sstiep/linalg.hpp"

#include <random>

using namespace sstiep;

namespace {

ProblemData trivial_data() {
  Vector l(2), b(2);
  l << 0.5, 0.2;
  b << 0.6, 0.4;
  return ProblemData(l, b);
}

void check_monotone_descent(const SolveTrace& trace) {
  double prev_after_a = std::numeric_limits<double>::infinity();
  for (const AmIteration& it : trace.iterations) {
    CHECK(it.objective_after_P_step <= prev_after_a + 1e-8);
    CHECK(it.objective_after_A_step <= it.objective_after_P_step + 1e-8);
    prev_after_a = it.objective_after_A_step;
  }
}

}  // namespace

TEST_CASE("paper initialization matrices") {
  Vector l(3), b(3);
  l << 0.8, -0.1, -0.6;
  b << 0.9422, 0.0343, 0.0235;
  ProblemData data(l, b);

  Matrix tilde = make_initial(data, InitStrategy::tilde()).A;
  Matrix tilde_expected(3, 3);
  tilde_expected << 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3,
      1.0 / 6, 1.0 / 6, 1.0 / 6;
  CHECK(norm_maxabs(Matrix(tilde - tilde_expected)) == 0.0);

  Matrix bar = make_initial(data, InitStrategy::bar()).A;
  CHECK(bar(2, 1) == 1.0);
  CHECK(bar(0, 0) == doctest::Approx(1.0 / 9).epsilon(1e-15));

  // The similarity construction for lambda_1 > 0 > lambda_2 > lambda_3.
  Matrix hat = make_initial(data, InitStrategy::hat()).A;
  Matrix hat_expected(3, 3);
  hat_expected << 0.0125, 0.39375, 0.39375, 0.1125, 0.04375, 0.64375, 0.1125,
      0.64375, 0.04375;
  CHECK(norm_maxabs(Matrix(hat - hat_expected)) <= 1e-12);

  Vector l4 = Vector::LinSpaced(4, 0.8, 0.2);
  Vector b4 = Vector::Constant(4, 0.25);
  ProblemData data4(l4, b4);
  CHECK(norm_maxabs(make_initial(data4, InitStrategy::zero()).A) == 0.0);
  CHECK_THROWS_AS(make_initial(data4, InitStrategy::tilde()),
                  UnsupportedDimension);
  CHECK_THROWS_AS(make_initial(data4, InitStrategy::bar()),
                  UnsupportedDimension);
  CHECK_THROWS_AS(make_initial(data4, InitStrategy::hat()),
                  UnsupportedDimension);

  // Spectra whose similarity construction leaves a negative entry are
  // rejected rather than silently clamped.
  Vector l_neg(3), b_neg(3);
  l_neg << 0.1, -0.06, -0.09;
  b_neg << 0.4, 0.35, 0.25;
  CHECK_THROWS_AS(make_initial(ProblemData(l_neg, b_neg), InitStrategy::hat()),
                  NonnegativityViolated);
}

TEST_CASE("diag initialization clamps negative spectrum entries") {
  Vector l(3), b(3);
  l << 0.8, -0.1, -0.6;
  b << 0.9422, 0.0343, 0.0235;
  ProblemData data(l, b);
  InitialMatrix init = make_initial(data, InitStrategy::diag_lambda());
  CHECK(init.clamped_negatives);
  CHECK(init.A(0, 0) == 0.8);
  CHECK(init.A(1, 1) == 0.0);
  CHECK(init.A(2, 2) == 0.0);

  InitialMatrix positive =
      make_initial(trivial_data(), InitStrategy::diag_lambda());
  CHECK_FALSE(positive.clamped_negatives);
}

TEST_CASE("random initialization is substochastic and seeded") {
  Vector l4 = Vector::LinSpaced(4, 0.8, 0.2);
  ProblemData data(l4, Vector::Constant(4, 0.25));
  Matrix a = make_initial(data, InitStrategy::random(99)).A;
  Matrix b = make_initial(data, InitStrategy::random(99)).A;
  Matrix c = make_initial(data, InitStrategy::random(100)).A;
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.minCoeff() >= 0.0);
  for (Index i = 0; i < 4; ++i) CHECK(a.row(i).sum() <= 1.0);
}

TEST_CASE("explicit initialization is validated") {
  ProblemData data = trivial_data();
  Matrix ok(2, 2);
  ok << 0.1, 0.2, 0.3, 0.4;
  CHECK_NOTHROW(make_initial(data, InitStrategy::explicit_matrix(ok)));
  Matrix bad(2, 2);
  bad << -0.1, 0.2, 0.3, 0.4;
  CHECK_THROWS_AS(make_initial(data, InitStrategy::explicit_matrix(bad)),
                  InfeasibleInput);
}

TEST_CASE("trivially realizable data converges immediately") {
  SolveTrace trace = am_solve(trivial_data(), InitStrategy::diag_lambda());
  CHECK(trace.status == AmStatus::Converged);
  CHECK(trace.iterations.size() <= 2);
  CHECK(trace.final.objective <= 1e-10);
  CHECK(classify_outcome(trace) == Outcome::SolutionFound);
  check_monotone_descent(trace);

  PairCheck pc = check_pair(trivial_data(), trace.final);
  CHECK(pc.ok);
}

TEST_CASE("known stationary scenario stays put") {
  // Zero start drives the first P-step to the uniform matrix; the A-step
  // pins every column sum to mean(lambda) and the loop is stationary from
  // there at a nonzero value.
  Vector l(3), b(3);
  l << 0.8, 0.5120, 0.3637;
  b << 0.17, 0.15, 0.68;
  ProblemData data(l, b);
  SolveTrace trace = am_solve(data, InitStrategy::zero());
  CHECK(trace.status == AmStatus::Converged);
  CHECK(trace.final.objective == doctest::Approx(0.0328105).epsilon(1e-4));
  CHECK(classify_outcome(trace) == Outcome::NoZeroValueFound);
  check_monotone_descent(trace);
}

TEST_CASE("iterates stay feasible and norm-bounded on random data") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 4; ++trial) {
    ProblemData data = oracle::random_data(rng, 3);
    AmOptions opts;
    opts.max_iters = 400;
    SolveTrace trace =
        am_solve(data, InitStrategy::random(trial), opts);
    REQUIRE(!trace.iterations.empty());
    check_monotone_descent(trace);
    CHECK(check_pair(data, trace.final).ok);

    const double rho_log = rho(data).log_value;
    for (const AmIteration& it : trace.iterations)
      CHECK(std::log(std::max(it.P_maxabs_norm, 1e-300)) <= rho_log);

    if (classify_outcome(trace) == Outcome::SolutionFound) {
      // Row-wise eigenvector residual is capped by the Frobenius objective.
      Matrix residual = trace.final.P * trace.final.A -
                        data.lambda.asDiagonal() * trace.final.P;
      for (Index i = 0; i < data.n; ++i)
        CHECK(residual.row(i).norm() <=
              std::sqrt(trace.final.objective) + 1e-12);
    }
  }
}

TEST_CASE("termination uses the A-step improvement") {
  ProblemData data = trivial_data();
  SolveTrace trace = am_solve(data, InitStrategy::diag_lambda());
  REQUIRE(trace.status == AmStatus::Converged);
  const AmIteration& last = trace.iterations.back();
  CHECK(std::abs(last.objective_after_A_step -
                 last.objective_after_P_step) <= 1e-6);
}

TEST_CASE("outcome classification thresholds") {
  SolveTrace trace;
  trace.final.objective = 6.7854e-07;
  CHECK(classify_outcome(trace) == Outcome::SolutionFound);
  trace.final.objective = 0.1105;
  CHECK(classify_outcome(trace) == Outcome::NoZeroValueFound);
  trace.final.objective = 1e-4;  // boundary is inclusive
  CHECK(classify_outcome(trace) == Outcome::SolutionFound);
}

TEST_CASE("time budget stops the loop early") {
  Vector l(3), b(3);
  l << 0.8, -0.1, -0.6;
  b << 0.9422, 0.0343, 0.0235;
  ProblemData data(l, b);
  AmOptions opts;
  opts.time_budget = 1e-9;
  SolveTrace trace = am_solve(data, InitStrategy::tilde(), opts);
  CHECK(trace.status == AmStatus::MaxIters);
  CHECK(trace.iterations.size() == 1);
}
