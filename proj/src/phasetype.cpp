#include "sstiep/phasetype.hpp"

#include "sstiep/linalg.hpp"

#include <cmath>
#include <sstream>

namespace sstiep {

PhaseTypeSpec::PhaseTypeSpec(Vector lambda_in, Vector residues_in)
    : n(lambda_in.size()),
      lambda(std::move(lambda_in)),
      residues(std::move(residues_in)) {
  if (n < 1) throw InvalidProblemData("phase-type spec needs n >= 1");
  if (residues.size() != n)
    throw InvalidProblemData("lambda and residues lengths differ");
  if (!all_finite(lambda) || !all_finite(residues))
    throw InvalidProblemData("non-finite entry");
  for (Index i = 0; i < n; ++i) {
    if (std::abs(residues(i)) <= 1e-12)
      throw InvalidProblemData("residues must be nonzero");
    if (std::abs(1.0 - lambda(i)) <= 1e-12)
      throw InvalidProblemData("lambda_i = 1 is not allowed");
  }
  double f1 = 0.0;
  for (Index i = 0; i < n; ++i) f1 += residues(i) / (1.0 - lambda(i));
  if (std::abs(f1 - 1.0) > 1e-3)
    throw NotNormalized("f(1) = " + std::to_string(f1) +
                        " differs from 1 beyond 1e-3");
  if (std::abs(f1 - 1.0) > 1e-6) {
    residues /= f1;  // rounded inputs: restore f(1) = 1 exactly
    renormalized = true;
  }
}

Vector beta_from_residues(const PhaseTypeSpec& spec) {
  Vector beta(spec.n);
  for (Index i = 0; i < spec.n; ++i)
    beta(i) = spec.residues(i) / (1.0 - spec.lambda(i));
  return beta;
}

double partial_fraction_mgf(const PhaseTypeSpec& spec, double z) {
  double sum = 0.0;
  for (Index i = 0; i < spec.n; ++i)
    sum += spec.residues(i) / (1.0 - spec.lambda(i) * z);
  return z * sum;
}

double mgf_eval(const Representation& rep, double z) {
  const Index n = rep.A.rows();
  require(rep.A.cols() == n && rep.alpha.size() == n,
          "mgf_eval: inconsistent representation");
  Matrix system = Matrix::Identity(n, n) - z * rep.A;
  Vector exit_mass = (Matrix::Identity(n, n) - rep.A) * Vector::Ones(n);
  Vector resolvent;
  try {
    resolvent = lu_solve(system, exit_mass);
  } catch (const SingularMatrix&) {
    throw SingularMatrix("mgf_eval: I - zA is singular at z = " +
                         std::to_string(z));
  }
  return z * rep.alpha.dot(resolvent);
}

PhaseTypeResult solve_phasetype(const PhaseTypeSpec& spec,
                                const InitStrategy& strategy,
                                const AmOptions& opts) {
  ProblemData data(spec.lambda, beta_from_residues(spec));
  PhaseTypeResult result{am_solve(data, strategy, opts), Outcome::NoZeroValueFound,
                         std::nullopt};
  result.outcome = classify_outcome(result.trace);
  if (result.outcome == Outcome::SolutionFound) {
    Representation rep;
    rep.A = result.trace.final.A;
    rep.alpha = result.trace.final.P.transpose() * data.beta;
    result.representation = rep;
  }
  return result;
}

ScreenResult nonexistence_screen_n3(const ProblemData& data) {
  if (data.n != 3)
    throw UnsupportedDimension("nonexistence screen is defined for n = 3");
  ScreenResult res{ScreenVerdict::PossiblyRealizable, 0.0, 0.0, ""};
  for (Index i = 0; i < 3; ++i) {
    const double r = (1.0 - data.lambda(i)) * data.beta(i);
    res.moment0 += r;
    res.moment1 += r * data.lambda(i);
  }
  std::ostringstream reason;
  if (res.moment0 < -1e-12) {
    res.verdict = ScreenVerdict::ProvablyUnrealizable;
    reason << "(1-lambda).beta sum = " << res.moment0;
  } else if (res.moment1 < -1e-12) {
    res.verdict = ScreenVerdict::ProvablyUnrealizable;
    reason << "(1-lambda).beta.lambda sum = " << res.moment1;
  }
  res.reason = reason.str();
  return res;
}

}  // namespace sstiep
