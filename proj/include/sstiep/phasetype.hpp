#pragma once

#include "sstiep/am.hpp"
#include "sstiep/types.hpp"

#include <optional>
#include <string>

namespace sstiep {

/// Partial-fraction data of a rational mgf
///   f(z) = z * sum_l r_l / (1 - lambda_l z),  r_l != 0.
///
/// Construction requires f(1) = sum r_l / (1 - lambda_l) = 1. Inputs off by
/// at most 1e-3 (rounded residues) are renormalized so f(1) = 1 holds
/// exactly; anything further off throws NotNormalized.
struct PhaseTypeSpec {
  Index n;
  Vector lambda;
  Vector residues;
  bool renormalized = false;

  PhaseTypeSpec(Vector lambda_in, Vector residues_in);
};

/// Initial distribution and transient transition block of an absorbing
/// chain on {0, 1, ..., n} with state 0 absorbing.
struct Representation {
  Vector alpha;
  Matrix A;
};

/// beta_l = r_l / (1 - lambda_l); sums to one by PhaseTypeSpec's normalization.
Vector beta_from_residues(const PhaseTypeSpec& spec);

/// f evaluated from the partial fractions, z sum_l r_l / (1 - lambda_l z).
double partial_fraction_mgf(const PhaseTypeSpec& spec, double z);

/// Absorbing-time mgf of the representation, z alpha (I - zA)^{-1} (I - A) 1'.
double mgf_eval(const Representation& rep, double z);

struct PhaseTypeResult {
  SolveTrace trace;
  Outcome outcome;
  std::optional<Representation> representation;  // present on SolutionFound
};

/// Runs the alternating solver on (lambda, beta_from_residues) and, when a
/// zero-value solution is found, extracts alpha = beta P.
PhaseTypeResult solve_phasetype(const PhaseTypeSpec& spec,
                                const InitStrategy& strategy =
                                    InitStrategy::diag_lambda(),
                                const AmOptions& opts = {});

enum class ScreenVerdict { PossiblyRealizable, ProvablyUnrealizable };

struct ScreenResult {
  ScreenVerdict verdict;
  double moment0;           // sum (1 - lambda_i) beta_i
  double moment1;           // sum (1 - lambda_i) beta_i lambda_i
  std::string reason;       // failing scalar, empty when possibly realizable
};

/// Necessary conditions for a 3-dimensional positive realization: both
/// scalars above must be nonnegative. n = 3 only.
ScreenResult nonexistence_screen_n3(const ProblemData& data);

}  // namespace sstiep
