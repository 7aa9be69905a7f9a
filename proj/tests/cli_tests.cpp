// End-to-end checks of the command-line surface: flag validation, exit codes
// and file outputs, driven through the installed binary.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "linscreen/matrix_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = LINSCREEN_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("linscreen_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string command = kCli + " " + args + " 2>/dev/null";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const std::string& path) {
  std::ifstream in(path);
  json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("check-rdd on the identity") {
  TempDir dir;
  write_text(dir.file("id.csv"), "1,0\n0,1\n");
  const int code =
      run("check-rdd --phi " + dir.file("id.csv") + " --s 1 --c0 5 --out " +
          dir.file("report.json") + " --log-level quiet");
  CHECK(code == 0);
  const json report = load(dir.file("report.json"));
  CHECK(report.at("holds") == true);
  CHECK(report.at("c0_max") == "unbounded");
}

TEST_CASE("bounds validation failure names the hypothesis") {
  TempDir dir;
  write_text(dir.file("params.json"),
             R"({"rho":2,"s":5,"sigma":0.5,"tau":1,"r":0.6,"p":500,"delta":0.1})");
  const int code = run("bounds --method sis --params " + dir.file("params.json"));
  CHECK(code == 2);
}

TEST_CASE("bounds prints the arithmetic value") {
  TempDir dir;
  write_text(dir.file("params.json"),
             R"({"K":1,"rho":1,"s":1,"sigma":0,"tau":1,"r":0,"p":3,"delta":1})");
  const std::string command = kCli + " bounds --method sis --params " + dir.file("params.json") +
                              " > " + dir.file("value.txt") + " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);
  const double value = linscreen::parse_double(slurp(dir.file("value.txt")));
  CHECK(value == doctest::Approx(144.0 * 9.0 * std::log(9.0)).epsilon(1e-12));
}

TEST_CASE("gen then screen recovers a strong signal") {
  TempDir dir;
  const int gen_code = run("gen --p 30 --n 25 --cov identity --s 3 --tau 2 --rho 2 --sigma 0.1 "
                           "--seed 99 --out-prefix " +
                           dir.file("run") + " --log-level quiet");
  REQUIRE(gen_code == 0);
  CHECK(fs::exists(dir.file("run_x.csv")));
  CHECK(fs::exists(dir.file("run_meta.json")));
  const json meta = load(dir.file("run_meta.json"));
  CHECK(meta.at("kappa") == 1.0);
  CHECK(meta.at("seed") == 99);

  const int screen_code = run("screen --x " + dir.file("run_x.csv") + " --y " +
                              dir.file("run_y.csv") +
                              " --method holp --top-d 3 --emit-estimates --out " +
                              dir.file("selected.json") + " --log-level quiet");
  REQUIRE(screen_code == 0);
  const json selected = load(dir.file("selected.json"));
  CHECK(selected.at("indices").size() == 3);
  CHECK(selected.at("estimates").size() == 30);

  // The generated support should be recovered by HOLP at this signal level.
  std::ifstream beta_file(dir.file("run_beta.csv"));
  std::string line;
  std::vector<int> truth;
  while (std::getline(beta_file, line)) {
    truth.push_back(std::stoi(line.substr(0, line.find(','))));
  }
  const auto selected_indices = selected.at("indices").get<std::vector<int>>();
  CHECK(selected_indices == truth);
}

TEST_CASE("screen rejects ambiguous selection rules") {
  TempDir dir;
  write_text(dir.file("x.csv"), "1,0\n0,1\n");
  write_text(dir.file("y.csv"), "1\n1\n");
  const int both = run("screen --x " + dir.file("x.csv") + " --y " + dir.file("y.csv") +
                       " --method sis --top-d 1 --gamma 0.5 --out " + dir.file("o.json") +
                       " --log-level quiet");
  CHECK(both == 2);
  const int neither = run("screen --x " + dir.file("x.csv") + " --y " + dir.file("y.csv") +
                          " --method sis --out " + dir.file("o.json") + " --log-level quiet");
  CHECK(neither == 2);
}

TEST_CASE("holp on duplicated rows exits with the numerical code") {
  TempDir dir;
  write_text(dir.file("x.csv"), "1,2\n1,2\n");
  write_text(dir.file("y.csv"), "1\n1\n");
  const int code = run("screen --x " + dir.file("x.csv") + " --y " + dir.file("y.csv") +
                       " --method holp --top-d 1 --out " + dir.file("o.json") +
                       " --log-level quiet");
  CHECK(code == 3);
}

TEST_CASE("check-ic fixed and worst case") {
  TempDir dir;
  write_text(dir.file("c.csv"), "1,0.5,0.5\n0.5,1,0.5\n0.5,0.5,1\n");
  const int fixed = run("check-ic --gram " + dir.file("c.csv") +
                        " --support 1 --signs + --out " + dir.file("ic.json") +
                        " --log-level quiet");
  REQUIRE(fixed == 0);
  CHECK(load(dir.file("ic.json")).at("value") == doctest::Approx(0.5));

  const int worst = run("check-ic --gram " + dir.file("c.csv") +
                        " --support 1,2 --worst-case --out " + dir.file("ic2.json") +
                        " --log-level quiet");
  REQUIRE(worst == 0);
  CHECK(load(dir.file("ic2.json")).at("sign_mode") == "worst_case");
}

TEST_CASE("sweep then simulate write deterministic artifacts") {
  TempDir dir;
  write_text(dir.file("cfg.json"), R"({
    "p": 24, "n_grid": [8, 16], "s": 2, "tau": 1.0, "rho": 2.0, "sigma": 0.3,
    "covariance": {"kind": "identity"}, "replications": 6, "seed": 31415,
    "methods": ["sis", "holp"]
  })");
  const int sweep_code =
      run("sweep --config " + dir.file("cfg.json") + " --out " + dir.file("summary.csv") +
          " --out-trials " + dir.file("r1.jsonl") + " --emit-gnuplot " + dir.file("plot.gp") +
          " --threads 2 --log-level quiet");
  REQUIRE(sweep_code == 0);

  const std::string summary = slurp(dir.file("summary.csv"));
  CHECK(summary.find("n,method,successes,trials,rate,se,bound_sis,bound_holp") !=
        std::string::npos);
  CHECK(summary.find("# config:") != std::string::npos);
  CHECK(slurp(dir.file("plot.gp")).find("plot $sis") != std::string::npos);

  const int sim_code = run("simulate --config " + dir.file("cfg.json") + " --out " +
                           dir.file("r2.jsonl") + " --threads 1 --log-level quiet");
  REQUIRE(sim_code == 0);
  CHECK(slurp(dir.file("r1.jsonl")) == slurp(dir.file("r2.jsonl")));
}

TEST_CASE("sweep config validation failures exit with 2") {
  TempDir dir;
  write_text(dir.file("bad.json"), R"({
    "p": 10, "n_grid": [20], "s": 2, "tau": 1.0, "rho": 2.0, "sigma": 0.0,
    "covariance": {"kind": "identity"}, "replications": 2, "seed": 1
  })");  // n > p with holp enabled by default
  CHECK(run("sweep --config " + dir.file("bad.json") + " --out " + dir.file("s.csv") +
            " --log-level quiet") == 2);
  write_text(dir.file("noseed.json"), R"({
    "p": 10, "n_grid": [5], "s": 2, "tau": 1.0, "rho": 2.0, "sigma": 0.0,
    "covariance": {"kind": "identity"}, "replications": 2
  })");
  CHECK(run("sweep --config " + dir.file("noseed.json") + " --out " + dir.file("s.csv") +
            " --log-level quiet") == 2);
}

TEST_CASE("covariance that is not positive definite exits with 3") {
  TempDir dir;
  write_text(dir.file("cfg.json"), R"({
    "p": 6, "n_grid": [4], "s": 1, "tau": 1.0, "rho": 1.0, "sigma": 0.0,
    "covariance": {"kind": "equicorrelated", "r": -0.5}, "replications": 1, "seed": 2
  })");
  CHECK(run("sweep --config " + dir.file("cfg.json") + " --out " + dir.file("s.csv") +
            " --log-level quiet") == 3);
}

TEST_CASE("theorems subcommand writes a passing report") {
  TempDir dir;
  const int code =
      run("theorems --seed 20240817 --out " + dir.file("report.json") + " --log-level quiet");
  CHECK(code == 0);
  const json report = load(dir.file("report.json"));
  CHECK(report.at("all_passed") == true);
  CHECK(report.at("checks").size() >= 8);
  for (const auto& check : report.at("checks")) {
    CHECK(check.at("failures") == 0);
  }
}

TEST_CASE("results jsonl carries a config header then one trial per line") {
  TempDir dir;
  write_text(dir.file("cfg.json"), R"({
    "p": 10, "n_grid": [6], "s": 1, "tau": 1.0, "rho": 1.0, "sigma": 0.0,
    "covariance": {"kind": "identity"}, "replications": 3, "seed": 8
  })");
  REQUIRE(run("simulate --config " + dir.file("cfg.json") + " --out " + dir.file("r.jsonl") +
              " --log-level quiet") == 0);
  std::ifstream in(dir.file("r.jsonl"));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(json::parse(line).contains("config"));
  int trials = 0;
  while (std::getline(in, line)) {
    CHECK(json::parse(line).contains("methods"));
    ++trials;
  }
  CHECK(trials == 3);
}

TEST_CASE("unknown flags exit with 2 and help exits with 0") {
  CHECK(run("check-rdd --nonsense 1") == 2);
  CHECK(run("--help") == 0);
  CHECK(run("screen --help") == 0);
}
