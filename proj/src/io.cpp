#include "sstiep/io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sstiep {

using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* name : allowed)
      if (item.key() == name) known = true;
    if (!known)
      throw ParseError(where + ": unknown field '" + item.key() + "'");
  }
}

Vector parse_vector(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field + " must be an array");
  Vector v(j.size());
  Index i = 0;
  for (const auto& e : j) {
    if (!e.is_number()) throw ParseError(field + " must hold numbers");
    v(i++) = e.get<double>();
  }
  return v;
}

Matrix parse_matrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    throw ParseError(field + " must be a non-empty array of rows");
  const Index rows = Index(j.size());
  const Index cols = Index(j.front().size());
  Matrix m(rows, cols);
  Index i = 0;
  for (const auto& row : j) {
    if (!row.is_array() || Index(row.size()) != cols)
      throw ParseError(field + ": ragged rows");
    Index k = 0;
    for (const auto& e : row) {
      if (!e.is_number()) throw ParseError(field + " must hold numbers");
      m(i, k++) = e.get<double>();
    }
    ++i;
  }
  return m;
}

json dump_vector(const Vector& v) {
  json j = json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

json dump_matrix(const Matrix& m) {
  json j = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    j.push_back(row);
  }
  return j;
}

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path dir = target.parent_path();
  if (dir.empty()) dir = ".";
  fs::path tmp = dir / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::optional<InitStrategy> parse_strategy(const json& j,
                                           const std::string& where) {
  if (!j.contains("strategy") && !j.contains("initial_A")) return std::nullopt;
  double eps = j.value("epsilon", 1e-3);
  std::uint64_t seed = j.value("seed", std::uint64_t(0));
  std::string name = j.value("strategy", std::string("explicit"));
  if (name == "explicit") {
    if (!j.contains("initial_A"))
      throw ParseError(where + ": explicit strategy requires initial_A");
    return InitStrategy::explicit_matrix(
        parse_matrix(j.at("initial_A"), "initial_A"));
  }
  if (j.contains("initial_A"))
    throw ParseError(where + ": initial_A conflicts with strategy '" + name +
                     "'");
  return strategy_from_name(name, eps, seed);
}

}  // namespace

InitStrategy strategy_from_name(const std::string& name, double epsilon,
                                std::uint64_t seed) {
  if (name == "diag") return InitStrategy::diag_lambda();
  if (name == "zero") return InitStrategy::zero();
  if (name == "tilde") return InitStrategy::tilde();
  if (name == "bar") return InitStrategy::bar();
  if (name == "hat") return InitStrategy::hat(epsilon);
  if (name == "random") return InitStrategy::random(seed);
  throw ParseError("unknown strategy '" + name + "'");
}

std::string strategy_name(const InitStrategy& s) {
  switch (s.kind) {
    case InitKind::DiagLambda: return "diag";
    case InitKind::Zero: return "zero";
    case InitKind::Tilde: return "tilde";
    case InitKind::Bar: return "bar";
    case InitKind::Hat: return "hat";
    case InitKind::Random: return "random";
    case InitKind::Explicit: return "explicit";
  }
  return "unknown";
}

ProblemFile read_problem_file(const std::string& path) {
  json j = load_json(path);
  reject_unknown(j, path,
                 {"n", "lambda", "beta", "initial_A", "strategy", "epsilon",
                  "seed", "tol", "max_iters"});
  if (!j.contains("lambda")) throw ParseError(path + ": missing field 'lambda'");
  if (!j.contains("beta")) throw ParseError(path + ": missing field 'beta'");
  Vector lambda = parse_vector(j.at("lambda"), "lambda");
  Vector beta = parse_vector(j.at("beta"), "beta");
  if (j.contains("n") && Index(j.at("n").get<int>()) != lambda.size())
    throw ParseError(path + ": field 'n' disagrees with lambda length");
  ProblemData data = [&] {
    try {
      return ProblemData(std::move(lambda), std::move(beta));
    } catch (const InvalidProblemData& e) {
      throw ParseError(path + ": " + e.what());
    }
  }();
  ProblemFile file{std::move(data), parse_strategy(j, path), std::nullopt,
                   std::nullopt};
  if (j.contains("tol")) file.tol = j.at("tol").get<double>();
  if (j.contains("max_iters")) file.max_iters = j.at("max_iters").get<int>();
  return file;
}

PhaseTypeFile read_phasetype_file(const std::string& path) {
  json j = load_json(path);
  reject_unknown(j, path,
                 {"n", "lambda", "residues", "strategy", "epsilon", "seed",
                  "tol", "max_iters", "initial_A"});
  if (!j.contains("lambda")) throw ParseError(path + ": missing field 'lambda'");
  if (!j.contains("residues"))
    throw ParseError(path + ": missing field 'residues'");
  Vector lambda = parse_vector(j.at("lambda"), "lambda");
  Vector residues = parse_vector(j.at("residues"), "residues");
  if (j.contains("n") && Index(j.at("n").get<int>()) != lambda.size())
    throw ParseError(path + ": field 'n' disagrees with lambda length");
  PhaseTypeSpec spec = [&] {
    try {
      return PhaseTypeSpec(std::move(lambda), std::move(residues));
    } catch (const std::invalid_argument& e) {
      throw ParseError(path + ": " + e.what());
    }
  }();
  PhaseTypeFile file{std::move(spec), parse_strategy(j, path), std::nullopt,
                     std::nullopt};
  if (j.contains("tol")) file.tol = j.at("tol").get<double>();
  if (j.contains("max_iters")) file.max_iters = j.at("max_iters").get<int>();
  return file;
}

void write_problem_file(const std::string& path, const ProblemFile& problem) {
  json j;
  j["n"] = problem.data.n;
  j["lambda"] = dump_vector(problem.data.lambda);
  j["beta"] = dump_vector(problem.data.beta);
  if (problem.strategy) {
    if (problem.strategy->kind == InitKind::Explicit)
      j["initial_A"] = dump_matrix(*problem.strategy->explicit_A);
    else
      j["strategy"] = strategy_name(*problem.strategy);
  }
  if (problem.tol) j["tol"] = *problem.tol;
  if (problem.max_iters) j["max_iters"] = *problem.max_iters;
  atomic_write(path, j.dump(2) + "\n");
}

namespace {

json dump_bounds(const BoundReport& b) {
  json j;
  j["rho_bar"] = b.rho_bar;
  j["rho_log"] = b.rho_log;
  if (b.rho_linear) j["rho"] = *b.rho_linear;
  j["det_lower_bound"] = b.det_lower_bound;
  if (b.det_BBt) j["det_BBt"] = *b.det_BBt;
  return j;
}

BoundReport parse_bounds(const json& j) {
  reject_unknown(j, "bounds", {"rho_bar", "rho_log", "rho", "det_lower_bound",
                               "det_BBt"});
  BoundReport b{};
  b.rho_bar = j.at("rho_bar").get<double>();
  b.rho_log = j.at("rho_log").get<double>();
  if (j.contains("rho")) b.rho_linear = j.at("rho").get<double>();
  b.det_lower_bound = j.at("det_lower_bound").get<double>();
  if (j.contains("det_BBt")) b.det_BBt = j.at("det_BBt").get<double>();
  return b;
}

}  // namespace

void write_result_file(const std::string& path, const ResultFile& r) {
  json j;
  j["lambda"] = dump_vector(r.lambda);
  j["beta"] = dump_vector(r.beta);
  j["status"] = r.status;
  j["objective"] = r.objective;
  j["iterations"] = r.iterations;
  j["wall_time"] = r.wall_time;
  j["A"] = dump_matrix(r.A);
  j["P"] = dump_matrix(r.P);
  j["kkt"] = {{"stationarity_P", r.kkt.stationarity_P},
              {"stationarity_A", r.kkt.stationarity_A},
              {"complementarity", r.kkt.complementarity},
              {"feasibility", r.kkt.feasibility}};
  j["bounds"] = dump_bounds(r.bounds);
  if (r.alpha) j["alpha"] = dump_vector(*r.alpha);
  if (!r.mgf_check.empty()) {
    json grid = json::array();
    for (const MgfSample& s : r.mgf_check)
      grid.push_back({{"z", s.z},
                      {"mgf", s.mgf},
                      {"partial_fraction", s.partial_fraction}});
    j["mgf_check"] = grid;
  }
  atomic_write(path, j.dump(2) + "\n");
}

ResultFile read_result_file(const std::string& path) {
  json j = load_json(path);
  reject_unknown(j, path,
                 {"lambda", "beta", "status", "objective", "iterations",
                  "wall_time", "A", "P", "kkt", "bounds", "alpha",
                  "mgf_check"});
  ResultFile r;
  r.lambda = parse_vector(j.at("lambda"), "lambda");
  r.beta = parse_vector(j.at("beta"), "beta");
  r.status = j.at("status").get<std::string>();
  r.objective = j.at("objective").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.wall_time = j.at("wall_time").get<double>();
  r.A = parse_matrix(j.at("A"), "A");
  r.P = parse_matrix(j.at("P"), "P");
  const json& k = j.at("kkt");
  reject_unknown(k, "kkt", {"stationarity_P", "stationarity_A",
                            "complementarity", "feasibility"});
  r.kkt.stationarity_P = k.at("stationarity_P").get<double>();
  r.kkt.stationarity_A = k.at("stationarity_A").get<double>();
  r.kkt.complementarity = k.at("complementarity").get<double>();
  r.kkt.feasibility = k.at("feasibility").get<double>();
  r.bounds = parse_bounds(j.at("bounds"));
  if (j.contains("alpha")) r.alpha = parse_vector(j.at("alpha"), "alpha");
  if (j.contains("mgf_check")) {
    for (const auto& e : j.at("mgf_check")) {
      reject_unknown(e, "mgf_check", {"z", "mgf", "partial_fraction"});
      r.mgf_check.push_back({e.at("z").get<double>(),
                             e.at("mgf").get<double>(),
                             e.at("partial_fraction").get<double>()});
    }
  }
  return r;
}

void write_campaign_file(const std::string& path,
                         const CampaignReport& report) {
  auto dump_group = [](const CampaignGroup& g) {
    json inst = json::array();
    for (const CampaignInstance& e : g.instances)
      inst.push_back({{"index", e.index},
                      {"objective", e.objective},
                      {"iterations", e.iterations},
                      {"wall_time", e.wall_time}});
    return json{{"mean_wall_time", g.mean_wall_time},
                {"mean_iterations", g.mean_iterations},
                {"mean_objective", g.mean_objective},
                {"instances", inst}};
  };
  json j;
  j["config"] = {{"n", report.config.n},
                 {"group1_size", report.config.group1_size},
                 {"group2_size", report.config.group2_size},
                 {"sampling",
                  report.config.sampling == Sampling::Mixed ? "mixed"
                                                            : "nonneg"},
                 {"init", strategy_name(report.config.init)},
                 {"seed", report.config.seed},
                 {"tol", report.config.tol},
                 {"zero_threshold", report.config.zero_threshold},
                 {"time_budget", report.config.time_budget},
                 {"max_iters", report.config.max_iters},
                 {"max_instances", report.config.max_instances},
                 {"jobs", report.config.jobs}};
  j["group1"] = dump_group(report.group1);
  j["group2"] = dump_group(report.group2);
  j["aborted_count"] = report.aborted_count;
  j["drawn_instances"] = report.drawn_instances;
  j["complete"] = report.complete;
  atomic_write(path, j.dump(2) + "\n");
}

CampaignReport read_campaign_file(const std::string& path) {
  json j = load_json(path);
  reject_unknown(j, path, {"config", "group1", "group2", "aborted_count",
                           "drawn_instances", "complete"});
  CampaignReport r;
  const json& c = j.at("config");
  r.config.n = c.at("n").get<Index>();
  r.config.group1_size = c.at("group1_size").get<int>();
  r.config.group2_size = c.at("group2_size").get<int>();
  const std::string sampling = c.value("sampling", std::string("mixed"));
  if (sampling != "mixed" && sampling != "nonneg")
    throw ParseError(path + ": unknown sampling '" + sampling + "'");
  r.config.sampling = sampling == "mixed" ? Sampling::Mixed
                                          : Sampling::NonnegativeSpectrum;
  r.config.init = strategy_from_name(c.at("init").get<std::string>(), 1e-3,
                                     c.at("seed").get<std::uint64_t>());
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.tol = c.at("tol").get<double>();
  r.config.zero_threshold = c.at("zero_threshold").get<double>();
  r.config.time_budget = c.at("time_budget").get<double>();
  r.config.max_iters = c.at("max_iters").get<int>();
  r.config.max_instances = c.at("max_instances").get<int>();
  r.config.jobs = c.at("jobs").get<int>();
  auto parse_group = [](const json& g) {
    CampaignGroup out;
    out.mean_wall_time = g.at("mean_wall_time").get<double>();
    out.mean_iterations = g.at("mean_iterations").get<double>();
    out.mean_objective = g.at("mean_objective").get<double>();
    for (const auto& e : g.at("instances"))
      out.instances.push_back({e.at("index").get<int>(),
                               e.at("objective").get<double>(),
                               e.at("iterations").get<int>(),
                               e.at("wall_time").get<double>(), false});
    return out;
  };
  r.group1 = parse_group(j.at("group1"));
  r.group2 = parse_group(j.at("group2"));
  r.aborted_count = j.at("aborted_count").get<int>();
  r.drawn_instances = j.at("drawn_instances").get<int>();
  r.complete = j.at("complete").get<bool>();
  return r;
}

std::string campaign_table(const CampaignReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(10) << "group" << std::setw(8) << "size"
      << std::setw(16) << "mean time (s)" << std::setw(18)
      << "mean iterations" << std::setw(16) << "mean objective" << "\n";
  auto row = [&](const char* name, const CampaignGroup& g) {
    out << std::left << std::setw(10) << name << std::setw(8)
        << g.instances.size() << std::setw(16) << std::setprecision(4)
        << g.mean_wall_time << std::setw(18) << g.mean_iterations
        << std::setw(16) << std::scientific << std::setprecision(4)
        << g.mean_objective << std::defaultfloat << "\n";
  };
  row("group-1", report.group1);
  row("group-2", report.group2);
  out << "aborted: " << report.aborted_count
      << "  drawn: " << report.drawn_instances
      << "  complete: " << (report.complete ? "yes" : "no") << "\n";
  return out.str();
}

}  // namespace sstiep
