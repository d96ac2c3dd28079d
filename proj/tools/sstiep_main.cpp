// Command-line front end: solve / verify / bounds / phasetype / campaign.
//
// Exit codes are a stable contract:
//   0 solved (or check passed), 1 input error, 2 no zero value found,
//   3 verification failure, 4 provably unrealizable spec.

#include <CLI11.hpp>

#include "sstiep/io.hpp"
#include "sstiep/linalg.hpp"

#include <cmath>
#include <iostream>

namespace {

using namespace sstiep;

constexpr int kExitSolved = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNoZeroValue = 2;
constexpr int kExitVerifyFailure = 3;
constexpr int kExitUnrealizable = 4;

struct SolveFlags {
  std::string input;
  std::string out;
  std::string init;
  double epsilon = 1e-3;
  std::uint64_t seed = 0;
  double tol = -1.0;
  int max_iters = -1;
  bool check_mgf = false;
};

InitStrategy pick_strategy(const SolveFlags& flags,
                           const std::optional<InitStrategy>& from_file) {
  if (!flags.init.empty())
    return strategy_from_name(flags.init, flags.epsilon, flags.seed);
  if (from_file) return *from_file;
  return InitStrategy::diag_lambda();
}

AmOptions pick_options(const SolveFlags& flags, std::optional<double> file_tol,
                       std::optional<int> file_iters) {
  AmOptions opts;
  if (file_tol) opts.tol = *file_tol;
  if (file_iters) opts.max_iters = *file_iters;
  if (flags.tol > 0.0) opts.tol = flags.tol;
  if (flags.max_iters > 0) opts.max_iters = flags.max_iters;
  return opts;
}

ResultFile make_result(const ProblemData& data, const SolveTrace& trace) {
  ResultFile r;
  r.lambda = data.lambda;
  r.beta = data.beta;
  r.status = classify_outcome(trace) == Outcome::SolutionFound
                 ? "SolutionFound"
                 : "NoZeroValueFound";
  r.objective = trace.final.objective;
  r.iterations = int(trace.iterations.size());
  r.wall_time = trace.wall_time;
  r.A = trace.final.A;
  r.P = trace.final.P;
  r.kkt = kkt_report(data, trace.final.A, trace.final.P).residuals;
  r.bounds = bound_report(data, &trace.final.A);
  return r;
}

int cmd_solve(const SolveFlags& flags) {
  ProblemFile file = read_problem_file(flags.input);
  InitStrategy strategy = pick_strategy(flags, file.strategy);
  AmOptions opts = pick_options(flags, file.tol, file.max_iters);
  SolveTrace trace = am_solve(file.data, strategy, opts);
  ResultFile result = make_result(file.data, trace);
  if (!flags.out.empty()) write_result_file(flags.out, result);
  std::cout << result.status << "  objective " << result.objective << "  in "
            << result.iterations << " iterations (" << result.wall_time
            << " s)\n";
  return classify_outcome(trace) == Outcome::SolutionFound ? kExitSolved
                                                           : kExitNoZeroValue;
}

int cmd_phasetype(const SolveFlags& flags) {
  PhaseTypeFile file = read_phasetype_file(flags.input);
  Vector beta = beta_from_residues(file.spec);
  if (file.spec.n == 3) {
    ProblemData data(file.spec.lambda, beta);
    ScreenResult screen = nonexistence_screen_n3(data);
    if (screen.verdict == ScreenVerdict::ProvablyUnrealizable) {
      std::cout << "ProvablyUnrealizable: " << screen.reason << "\n";
      return kExitUnrealizable;
    }
  }
  InitStrategy strategy = pick_strategy(flags, file.strategy);
  AmOptions opts = pick_options(flags, file.tol, file.max_iters);
  PhaseTypeResult solved = solve_phasetype(file.spec, strategy, opts);
  ProblemData data(file.spec.lambda, beta);
  ResultFile result = make_result(data, solved.trace);
  if (solved.representation) {
    result.alpha = solved.representation->alpha;
    if (flags.check_mgf) {
      for (double z : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9})
        result.mgf_check.push_back(
            {z, mgf_eval(*solved.representation, z),
             partial_fraction_mgf(file.spec, z)});
    }
  }
  if (!flags.out.empty()) write_result_file(flags.out, result);
  std::cout << result.status << "  objective " << result.objective << "\n";
  if (result.alpha) {
    std::cout << "alpha:";
    for (Index i = 0; i < result.alpha->size(); ++i)
      std::cout << " " << (*result.alpha)(i);
    std::cout << "\n";
  }
  return solved.outcome == Outcome::SolutionFound ? kExitSolved
                                                  : kExitNoZeroValue;
}

int cmd_verify(const std::string& path) {
  ResultFile r = read_result_file(path);
  ProblemData data(r.lambda, r.beta);
  int failures = 0;
  auto check = [&](const std::string& name, bool ok,
                   const std::string& detail = "") {
    std::cout << (ok ? "ok    " : "FAIL  ") << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  MatrixPair pair{r.A, r.P, r.objective};
  PairCheck pc = check_pair(data, pair);
  check("matrix pair invariants", pc.ok, pc.violation);

  const double recomputed = objective_direct(data, r.A, r.P);
  check("objective reproduces stored value",
        std::abs(recomputed - r.objective) <= 1e-8,
        "recomputed " + std::to_string(recomputed));

  try {
    KktReport kkt = kkt_report(data, r.A, r.P);
    check("kkt residuals within 1e-4", kkt.residuals.max() <= 1e-4);
  } catch (const InfeasiblePoint& e) {
    check("kkt residuals within 1e-4", false, e.what());
  }

  BoundReport bounds = bound_report(data, &r.A);
  check("det(BB') >= certified lower bound",
        bounds.det_BBt &&
            *bounds.det_BBt >=
                bounds.det_lower_bound -
                    1e-9 * std::max(1.0, std::abs(*bounds.det_BBt)));
  const double p_norm = norm_maxabs(r.P);
  check("||P|| within rho (log-space)",
        p_norm <= 0.0 || std::log(p_norm) <= bounds.rho_log);
  if (r.alpha) {
    check("alpha is a distribution",
          r.alpha->minCoeff() >= -1e-8 &&
              std::abs(r.alpha->sum() - 1.0) <= 1e-6);
  }
  return failures == 0 ? kExitSolved : kExitVerifyFailure;
}

int cmd_bounds(const std::string& path) {
  ProblemFile file = read_problem_file(path);
  const Matrix* A = nullptr;
  Matrix initial;
  if (file.strategy && file.strategy->kind == InitKind::Explicit) {
    initial = *file.strategy->explicit_A;
    A = &initial;
  }
  BoundReport report = bound_report(file.data, A);
  std::cout << "rho_bar      " << report.rho_bar << "\n"
            << "rho (log)    " << report.rho_log << "\n";
  if (report.rho_linear) std::cout << "rho          " << *report.rho_linear << "\n";
  std::cout << "det(BB') lower bound  " << report.det_lower_bound << "\n";
  if (report.det_BBt) std::cout << "det(BB')     " << *report.det_BBt << "\n";
  return kExitSolved;
}

struct CampaignFlags {
  CampaignConfig config;
  int group_size = 20;
  bool group1_set = false;
  bool group2_set = false;
  std::string init = "diag";
  std::string sampling = "mixed";
  std::string out;
};

int cmd_campaign(CampaignFlags& flags) {
  flags.config.init = strategy_from_name(flags.init, 1e-3, flags.config.seed);
  if (flags.sampling == "nonneg")
    flags.config.sampling = Sampling::NonnegativeSpectrum;
  else if (flags.sampling != "mixed")
    throw ParseError("unknown sampling '" + flags.sampling + "'");
  if (!flags.group1_set) flags.config.group1_size = flags.group_size;
  if (!flags.group2_set) flags.config.group2_size = flags.group_size;
  CampaignReport report = run_campaign(flags.config);
  std::cout << campaign_table(report);
  if (!flags.out.empty()) write_campaign_file(flags.out, report);
  return kExitSolved;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Substochastic inverse eigenvalue solver"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  CLI::App* solve = app.add_subcommand("solve", "run the alternating solver");
  solve->add_option("input", solve_flags.input, "problem file")->required();
  solve->add_option("--init", solve_flags.init,
                    "diag|zero|tilde|bar|hat|random");
  solve->add_option("--epsilon", solve_flags.epsilon, "hat epsilon");
  solve->add_option("--seed", solve_flags.seed, "random-init seed");
  solve->add_option("--tol", solve_flags.tol, "termination tolerance");
  solve->add_option("--max-iters", solve_flags.max_iters, "iteration cap");
  solve->add_option("--out", solve_flags.out, "result file path");

  std::string verify_path;
  CLI::App* verify = app.add_subcommand("verify", "recheck a result file");
  verify->add_option("result", verify_path, "result file")->required();

  std::string bounds_path;
  CLI::App* bounds = app.add_subcommand("bounds", "print bound report");
  bounds->add_option("input", bounds_path, "problem file")->required();

  SolveFlags pt_flags;
  CLI::App* phasetype =
      app.add_subcommand("phasetype", "solve a phase-type spec");
  phasetype->add_option("input", pt_flags.input, "phase-type spec file")
      ->required();
  phasetype->add_option("--init", pt_flags.init, "initial strategy");
  phasetype->add_option("--epsilon", pt_flags.epsilon, "hat epsilon");
  phasetype->add_option("--seed", pt_flags.seed, "random-init seed");
  phasetype->add_option("--tol", pt_flags.tol, "termination tolerance");
  phasetype->add_option("--max-iters", pt_flags.max_iters, "iteration cap");
  phasetype->add_option("--out", pt_flags.out, "result file path");
  phasetype->add_flag("--check-mgf", pt_flags.check_mgf,
                      "append an mgf grid check to the output");

  CampaignFlags campaign_flags;
  CLI::App* campaign = app.add_subcommand("campaign", "random-instance runs");
  campaign->add_option("--n", campaign_flags.config.n, "dimension")
      ->required();
  campaign->add_option("--init", campaign_flags.init, "initial strategy");
  campaign->add_option("--group-size", campaign_flags.group_size,
                       "target size for both groups");
  campaign->add_option("--group1-size", campaign_flags.config.group1_size,
                       "target size for group 1 only");
  campaign->add_option("--group2-size", campaign_flags.config.group2_size,
                       "target size for group 2 only");
  campaign->add_option("--sampling", campaign_flags.sampling,
                       "instance distribution: mixed|nonneg");
  campaign->add_option("--seed", campaign_flags.config.seed, "stream seed");
  campaign->add_option("--tol", campaign_flags.config.tol,
                       "termination tolerance");
  campaign->add_option("--zero-threshold",
                       campaign_flags.config.zero_threshold,
                       "group-1 classification threshold");
  campaign->add_option("--budget", campaign_flags.config.time_budget,
                       "seconds per instance");
  campaign->add_option("--max-iters", campaign_flags.config.max_iters,
                       "iteration cap per instance");
  campaign->add_option("--max-instances", campaign_flags.config.max_instances,
                       "cap on drawn instances");
  campaign->add_option("--jobs", campaign_flags.config.jobs,
                       "parallel workers");
  campaign->add_option("--out", campaign_flags.out, "report file path");

  try {
    app.parse(argc, argv);
    if (*solve) return cmd_solve(solve_flags);
    if (*verify) return cmd_verify(verify_path);
    if (*bounds) return cmd_bounds(bounds_path);
    if (*phasetype) return cmd_phasetype(pt_flags);
    if (*campaign) {
      campaign_flags.group1_set = campaign->count("--group1-size") > 0;
      campaign_flags.group2_set = campaign->count("--group2-size") > 0;
      return cmd_campaign(campaign_flags);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitSolved : kExitInputError;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
