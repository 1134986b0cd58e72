#include "fracspec/io.hpp"
#include "fracspec/lagrange.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int exit_code = -1;
  fs::path dir;
  std::string stdout_text;
  std::string stderr_text;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir() {
  static std::atomic<int> counter{0};
  fs::path d = fs::temp_directory_path() /
               ("fracspec_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
  fs::create_directories(d);
  return d;
}

// runs the CLI with the given arguments inside a fresh scratch directory
CliRun run_cli(const std::string& args) {
  CliRun r;
  r.dir = fresh_dir();
  std::string cmd = "cd '" + r.dir.string() + "' && '" + FRACSPEC_CLI_PATH +
                    "' " + args + " >stdout.txt 2>stderr.txt";
  int status = std::system(cmd.c_str());
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.stdout_text = read_file(r.dir / "stdout.txt");
  r.stderr_text = read_file(r.dir / "stderr.txt");
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<std::string> fields_of(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, ',')) out.push_back(f);
  return out;
}

// the stderr contract: exactly one line, a JSON object with an "error" key
void check_error_line(const CliRun& r) {
  CHECK(r.exit_code != 0);
  std::vector<std::string> lines = lines_of(r.stderr_text);
  REQUIRE(lines.size() == 1);
  json j = json::parse(lines[0]);
  CHECK(j.contains("error"));
}

}  // namespace

TEST_CASE("cli points: legendre nodes with weights and metadata") {
  CliRun r = run_cli("points --family legendre --n 2 --out pts.csv");
  REQUIRE(r.exit_code == 0);
  std::vector<std::string> lines = lines_of(read_file(r.dir / "pts.csv"));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "i,x,w");
  std::vector<std::string> mid = fields_of(lines[2]);
  REQUIRE(mid.size() == 3);
  CHECK(std::stod(mid[1]) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::stod(mid[2]) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(std::stod(fields_of(lines[1])[2]) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  json meta = json::parse(read_file(r.dir / "pts.meta.json"));
  CHECK(meta["version"] == "0.1.0");
  CHECK(meta["command"] == "points");
  CHECK(meta["n"] == 2);
  CHECK(meta["family"] == "legendre");
}

TEST_CASE("cli points: chebyshev nodes carry no weight column") {
  CliRun r = run_cli("points --family chebyshev --n 4 --out c.csv");
  REQUIRE(r.exit_code == 0);
  std::vector<std::string> lines = lines_of(read_file(r.dir / "c.csv"));
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "i,x");
  CHECK(std::stod(fields_of(lines[2])[1]) ==
        doctest::Approx(-0.70710678118654752).epsilon(1e-12));
}

TEST_CASE("cli points: invalid degree produces one json error line") {
  check_error_line(run_cli("points --family legendre --n 0 --out x.csv"));
  check_error_line(run_cli("points --family nope --n 4 --out x.csv"));
}

TEST_CASE("cli diffmat: first-order matrix and flag validation") {
  CliRun r = run_cli("diffmat --kind first --family legendre --n 4 --out d.csv");
  REQUIRE(r.exit_code == 0);
  std::vector<std::string> lines = lines_of(read_file(r.dir / "d.csv"));
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "c0,c1,c2,c3,c4");
  CHECK(std::stod(fields_of(lines[1])[0]) == doctest::Approx(-5.0).epsilon(1e-12));
  json meta = json::parse(read_file(r.dir / "d.meta.json"));
  CHECK(meta["precision"] == "double");
  CHECK(!meta.contains("alpha"));

  check_error_line(run_cli("diffmat --kind first --alpha 1.5 --n 4 --out x.csv"));
  check_error_line(run_cli("diffmat --kind rl-left --n 4 --out x.csv"));
  check_error_line(
      run_cli("diffmat --kind rl-left --alpha 2.0 --n 4 --out x.csv"));
  check_error_line(
      run_cli("diffmat --kind sideways --alpha 1.5 --n 4 --out x.csv"));
}

TEST_CASE("cli diffmat: undefined boundary rows print inf tokens") {
  CliRun r =
      run_cli("diffmat --kind rl-left --alpha 1.5 --n 8 --out m.csv");
  REQUIRE(r.exit_code == 0);
  std::vector<std::string> lines = lines_of(read_file(r.dir / "m.csv"));
  REQUIRE(lines.size() == 10);
  for (const std::string& f : fields_of(lines[1])) CHECK(f == "inf");
  // interior rows are finite
  for (const std::string& f : fields_of(lines[2]))
    CHECK(std::isfinite(std::stod(f)));
  json meta = json::parse(read_file(r.dir / "m.meta.json"));
  CHECK(meta["alpha"] == 1.5);
}

TEST_CASE("cli converge: one csv per alpha with the expected errors") {
  CliRun r = run_cli(
      "converge --case ex5 --family legendre --alphas 1.9 --degrees 6,8");
  REQUIRE(r.exit_code == 0);
  fs::path csv = r.dir / "ex5_legendre_alpha1.9.csv";
  REQUIRE(fs::exists(csv));
  std::vector<std::string> lines = lines_of(read_file(csv));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "N,Linf,L2");
  std::vector<std::string> row8 = fields_of(lines[2]);
  CHECK(row8[0] == "8");
  double linf8 = std::stod(row8[1]);
  CHECK(linf8 >= 2.103e-3 / 2.0);
  CHECK(linf8 <= 2.103e-3 * 2.0);
  json meta = json::parse(read_file(r.dir / "ex5_legendre_alpha1.9.meta.json"));
  CHECK(meta["degrees"] == json::array({6, 8}));
  CHECK(meta["case"] == "ex5");
}

TEST_CASE("cli converge: empty degree list from a config file fails loudly") {
  fs::path dir = fresh_dir();
  std::ofstream(dir / "empty.json") << "{\"converge\": {\"degrees\": []}}";
  std::string cmd = "cd '" + dir.string() + "' && '" + FRACSPEC_CLI_PATH +
                    "' --config empty.json converge --case ex1 --alphas 1.5 "
                    ">stdout.txt 2>stderr.txt";
  int status = std::system(cmd.c_str());
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) != 0);
  std::vector<std::string> lines = lines_of(read_file(dir / "stderr.txt"));
  REQUIRE(lines.size() == 1);
  CHECK(json::parse(lines[0]).contains("error"));
}

TEST_CASE("cli config: command-line flags override config values") {
  fs::path dir = fresh_dir();
  std::ofstream(dir / "cfg.json")
      << "{\"points\": {\"n\": 6, \"family\": \"legendre\", \"out\": \"cfg.csv\"}}";
  std::string cmd = "cd '" + dir.string() + "' && '" + FRACSPEC_CLI_PATH +
                    "' --config cfg.json points --n 4 >stdout.txt 2>stderr.txt";
  int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  REQUIRE(WEXITSTATUS(status) == 0);
  // out comes from the config, n from the flag
  std::vector<std::string> lines = lines_of(read_file(dir / "cfg.csv"));
  CHECK(lines.size() == 6);  // header + 5 nodes
  json meta = json::parse(read_file(dir / "cfg.meta.json"));
  CHECK(meta["n"] == 4);
}

TEST_CASE("cli eigens: spectrum csv with unit-bounded moduli") {
  CliRun r = run_cli("eigens --case ex1 --n 6 --out e.csv");
  REQUIRE(r.exit_code == 0);
  std::vector<std::string> lines = lines_of(read_file(r.dir / "e.csv"));
  REQUIRE(lines.size() == 6);  // header + 5 interior eigenvalues
  CHECK(lines[0] == "re,im");
  for (size_t k = 1; k < lines.size(); ++k) {
    std::vector<std::string> f = fields_of(lines[k]);
    REQUIRE(f.size() == 2);
    double re = std::stod(f[0]), im = std::stod(f[1]);
    CHECK(std::hypot(re, im) <= 1.0 + 1e-10);
  }

  // theta = 1 with a vanishing step leaves the identity
  CliRun r1 = run_cli(
      "eigens --case ex1 --n 6 --theta 1 --tau 1e-12 --out one.csv");
  REQUIRE(r1.exit_code == 0);
  std::vector<std::string> l1 = lines_of(read_file(r1.dir / "one.csv"));
  for (size_t k = 1; k < l1.size(); ++k) {
    std::vector<std::string> f = fields_of(l1[k]);
    CHECK(std::stod(f[0]) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(std::stod(f[1])) <= 1e-9);
  }
}

TEST_CASE("cli levy-feller: snapshots decay and the skewness is validated") {
  CliRun r = run_cli(
      "levy-feller --alpha 1.8 --vartheta 0.1 --n 12 --t-final 0.4 "
      "--snapshots 0,0.2,0.4 --out-dir lv --prefix levy");
  REQUIRE(r.exit_code == 0);
  double prev_max = -1.0;
  bool first = true;
  for (const char* name : {"lv/levy_t0.csv", "lv/levy_t0.2.csv", "lv/levy_t0.4.csv"}) {
    fs::path p = r.dir / name;
    REQUIRE(fs::exists(p));
    std::vector<std::string> lines = lines_of(read_file(p));
    CHECK(lines[0] == "x,u");
    double mx = 0.0;
    for (size_t k = 1; k < lines.size(); ++k)
      mx = std::max(mx, std::abs(std::stod(fields_of(lines[k])[1])));
    if (!first) CHECK(mx < prev_max);
    prev_max = mx;
    first = false;
  }

  check_error_line(run_cli("levy-feller --alpha 1.6 --vartheta 0.5"));
}

TEST_CASE("cli coeff-report: table mirrors the library values") {
  CliRun r = run_cli("coeff-report --degrees 8,15 --out rep.csv");
  REQUIRE(r.exit_code == 0);
  std::vector<std::string> lines = lines_of(read_file(r.dir / "rep.csv"));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "N,coeff_error");
  // format_sci keeps 17 significant digits, so the round trip is exact
  CHECK(std::stod(fields_of(lines[1])[1]) == fracspec::coeff_error_report(8));
  CHECK(std::stod(fields_of(lines[2])[1]) == fracspec::coeff_error_report(15));
}

TEST_CASE("cli runs are deterministic byte for byte") {
  std::string args = "diffmat --kind rl-left --alpha 1.7 --n 10 --out a.csv";
  CliRun r1 = run_cli(args);
  CliRun r2 = run_cli(args);
  REQUIRE(r1.exit_code == 0);
  REQUIRE(r2.exit_code == 0);
  CHECK(read_file(r1.dir / "a.csv") == read_file(r2.dir / "a.csv"));

  std::string sweep =
      "converge --case ex1 --alphas 1.5 --degrees 4,6 --jobs 1";
  std::string sweep4 =
      "converge --case ex1 --alphas 1.5 --degrees 4,6 --jobs 4";
  CliRun s1 = run_cli(sweep);
  CliRun s4 = run_cli(sweep4);
  REQUIRE(s1.exit_code == 0);
  REQUIRE(s4.exit_code == 0);
  CHECK(read_file(s1.dir / "ex1_legendre_alpha1.5.csv") ==
        read_file(s4.dir / "ex1_legendre_alpha1.5.csv"));
}

TEST_CASE("cli rejects missing or unknown subcommands") {
  check_error_line(run_cli(""));
  check_error_line(run_cli("transmogrify --n 4"));
}
