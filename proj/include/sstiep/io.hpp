#pragma once

#include "sstiep/am.hpp"
#include "sstiep/bounds.hpp"
#include "sstiep/experiments.hpp"
#include "sstiep/kkt.hpp"
#include "sstiep/phasetype.hpp"

#include <optional>
#include <string>

namespace sstiep {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed problem document: data plus whatever solve settings the file pins.
struct ProblemFile {
  ProblemData data;
  std::optional<InitStrategy> strategy;
  std::optional<double> tol;
  std::optional<int> max_iters;
};

struct PhaseTypeFile {
  PhaseTypeSpec spec;
  std::optional<InitStrategy> strategy;
  std::optional<double> tol;
  std::optional<int> max_iters;
};

struct MgfSample {
  double z;
  double mgf;
  double partial_fraction;
};

/// Solve result document; carries the inputs back so `verify` can recheck
/// every invariant from the file alone.
struct ResultFile {
  Vector lambda;
  Vector beta;
  std::string status;  // "SolutionFound" or "NoZeroValueFound"
  double objective = 0.0;
  int iterations = 0;
  double wall_time = 0.0;
  Matrix A;
  Matrix P;
  KktResiduals kkt;
  BoundReport bounds;
  std::optional<Vector> alpha;
  std::vector<MgfSample> mgf_check;
};

ProblemFile read_problem_file(const std::string& path);
PhaseTypeFile read_phasetype_file(const std::string& path);
ResultFile read_result_file(const std::string& path);
CampaignReport read_campaign_file(const std::string& path);

/// Writers are atomic: a temp file in the target directory is renamed over
/// the destination, so interrupted runs never leave truncated documents.
void write_result_file(const std::string& path, const ResultFile& result);
void write_campaign_file(const std::string& path,
                         const CampaignReport& report);
void write_problem_file(const std::string& path, const ProblemFile& problem);

std::string strategy_name(const InitStrategy& s);
InitStrategy strategy_from_name(const std::string& name, double epsilon,
                                std::uint64_t seed);

/// Plain-text aligned table with one row per group, mirroring the campaign
/// summary layout.
std::string campaign_table(const CampaignReport& report);

}  // namespace sstiep
