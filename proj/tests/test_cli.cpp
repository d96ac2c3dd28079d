// End-to-end checks of the command-line contract; spawns the built binary.
#include <doctest.h>

#include "sstiep/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace {

namespace fs = std::filesystem;

struct CliFixture {
  fs::path dir;
  std::string bin;

  CliFixture() {
    const char* env = std::getenv("SSTIEP_BIN");
    REQUIRE_MESSAGE(env != nullptr, "SSTIEP_BIN must point at the binary");
    bin = env;
    dir = fs::temp_directory_path() /
          ("sstiep_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~CliFixture() { fs::remove_all(dir); }

  std::string file(const std::string& name) const {
    return (dir / name).string();
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream out(file(name));
    out << text;
  }

  int run(const std::string& args) const {
    const std::string cmd = bin + " " + args + " > " + file("stdout.txt") +
                            " 2> " + file("stderr.txt");
    const int raw = std::system(cmd.c_str());
    return WEXITSTATUS(raw);
  }

  std::string stdout_text() const {
    std::ifstream in(file("stdout.txt"));
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
  }
};

}  // namespace

TEST_CASE("solve exits 0 on a solvable instance and writes a result") {
  CliFixture cli;
  cli.write("row3.json", R"({
    "lambda": [0.6, 0.3, 0.1],
    "beta": [0.4960, 0.2835, 0.2205]
  })");
  const int code = cli.run("solve " + cli.file("row3.json") +
                           " --init tilde --out " + cli.file("out.json"));
  CHECK(code == 0);
  sstiep::ResultFile result = sstiep::read_result_file(cli.file("out.json"));
  CHECK(result.status == "SolutionFound");
  CHECK(result.objective <= 1e-4);

  CHECK(cli.run("verify " + cli.file("out.json")) == 0);
}

TEST_CASE("solve exits 2 when no zero value is reachable") {
  CliFixture cli;
  cli.write("nosol.json", R"({
    "lambda": [0.6, 0.4, -0.2],
    "beta": [0.2727, 0.1818, 0.5455],
    "strategy": "tilde"
  })");
  CHECK(cli.run("solve " + cli.file("nosol.json")) == 2);
}

TEST_CASE("malformed input exits 1") {
  CliFixture cli;
  cli.write("broken.json", R"({"lambda": [0.5, 0.2]})");
  CHECK(cli.run("solve " + cli.file("broken.json")) == 1);
  CHECK(cli.run("solve " + cli.file("does_not_exist.json")) == 1);
  cli.write("unknown.json",
            R"({"lambda": [0.5,0.2], "beta": [0.6,0.4], "oops": true})");
  CHECK(cli.run("solve " + cli.file("unknown.json")) == 1);
}

TEST_CASE("verify exits 3 after tampering") {
  CliFixture cli;
  cli.write("trivial.json", R"({
    "lambda": [0.5, 0.2],
    "beta": [0.6, 0.4]
  })");
  REQUIRE(cli.run("solve " + cli.file("trivial.json") + " --out " +
                  cli.file("result.json")) == 0);
  sstiep::ResultFile result =
      sstiep::read_result_file(cli.file("result.json"));
  result.A(0, 0) += 0.5;  // break a row sum and the stored objective
  sstiep::write_result_file(cli.file("tampered.json"), result);
  CHECK(cli.run("verify " + cli.file("tampered.json")) == 3);
}

TEST_CASE("bounds subcommand prints the report") {
  CliFixture cli;
  cli.write("problem.json", R"({
    "lambda": [0.6, 0.3, 0.1],
    "beta": [0.4960, 0.2835, 0.2205]
  })");
  CHECK(cli.run("bounds " + cli.file("problem.json")) == 0);
  CHECK(cli.stdout_text().find("lower bound") != std::string::npos);
}

TEST_CASE("phasetype exits 4 on a provably unrealizable spec") {
  CliFixture cli;
  // Appendix triple 2 expressed through residues r_i = (1-l_i) b_i.
  cli.write("unreal.json", R"({
    "lambda": [0.6, 0.3, 0.1],
    "residues": [1.8806, -3.76117, 1.504440]
  })");
  CHECK(cli.run("phasetype " + cli.file("unreal.json")) == 4);
  CHECK(cli.stdout_text().find("-0.37") != std::string::npos);
}

TEST_CASE("phasetype solves the diagonal spec with an mgf grid") {
  CliFixture cli;
  cli.write("diag.json", R"({
    "lambda": [0.5, 0.2],
    "residues": [0.3, 0.32]
  })");
  const int code = cli.run("phasetype " + cli.file("diag.json") +
                           " --check-mgf --out " + cli.file("rep.json"));
  CHECK(code == 0);
  sstiep::ResultFile result = sstiep::read_result_file(cli.file("rep.json"));
  REQUIRE(result.alpha.has_value());
  CHECK(result.mgf_check.size() == 9);
  for (const auto& sample : result.mgf_check)
    CHECK(std::abs(sample.mgf - sample.partial_fraction) <= 1e-3);
}

TEST_CASE("campaign smoke run writes a report") {
  CliFixture cli;
  const int code =
      cli.run("campaign --n 3 --group-size 2 --seed 7 --max-instances 60 "
              "--out " +
              cli.file("campaign.json"));
  CHECK(code == 0);
  sstiep::CampaignReport report =
      sstiep::read_campaign_file(cli.file("campaign.json"));
  CHECK(report.drawn_instances > 0);
  CHECK(cli.run("campaign --n 3 --bogus-flag 1") == 1);
}
