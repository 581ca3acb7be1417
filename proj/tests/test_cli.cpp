#include <doctest.h>

#include <sys/wait.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pjd/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PJD_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  Run r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string example(const std::string& name) { return std::string(PJD_SPEC_DIR) + "/" + name; }
std::string data(const std::string& name) { return std::string(PJD_TEST_DATA) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pjd::CsvTable csv(const fs::path& p) {
  std::ifstream in(p);
  return pjd::read_csv(in);
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / ("pjd_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("validate exit codes") {
  CHECK(run("validate " + example("jacobi.json")).code == 0);
  const Run bad = run("validate " + data("jacobi_bad_theta.json"));
  CHECK(bad.code == 1);
  CHECK(bad.out.find("theta-domain") != std::string::npos);
  CHECK(run("validate " + data("malformed.json")).code == 2);
  CHECK(run("validate " + data("does_not_exist.json")).code == 2);
  CHECK(run("validate").code == 2);
}

TEST_CASE("every shipped example validates") {
  int n = 0;
  for (const auto& e : fs::directory_iterator(PJD_SPEC_DIR)) {
    CAPTURE(e.path().string());
    const Run r = run("validate " + e.path().string());
    CHECK(r.code == 0);
    CHECK(r.out == "ok\n");
    ++n;
  }
  CHECK(n >= 10);
}

TEST_CASE("classify") {
  const Run j = run("classify " + example("jacobi.json"));
  CHECK(j.code == 0);
  CHECK(j.out.rfind("interval-type-0\n", 0) == 0);
  const Run s = run("classify " + example("sin2_kernel.json"));
  CHECK(s.code == 0);
  CHECK(s.out.rfind("interval-type-2 q=-1\n", 0) == 0);
  const Run a = run("classify " + example("spt.json"));
  CHECK(a.code == 3);
  CHECK(a.out.rfind("unclassifiable", 0) == 0);
}

TEST_CASE("moment") {
  const Run r = run("moment " + example("jacobi.json") + " --poly x --x0 0.2 --T 1");
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - (0.5 - 0.3 * std::exp(-1.0))) <= 1e-9);

  const fs::path out = scratch() / "m.csv";
  CHECK(run("moment " + example("jacobi.json") + " --poly \"x^2 - (x - 1)*x\" --x0 0.2 --T-grid 0:2:5 --out " + out.string()).code == 0);
  const pjd::CsvTable t = csv(out);
  CHECK(t.header == std::vector<std::string>{"T", "value"});
  REQUIRE(t.rows.size() == 5);
  CHECK(std::stod(t.rows[4][0]) == 2.0);
  CHECK(std::stod(t.rows[4][1]) == doctest::Approx(0.5 - 0.3 * std::exp(-2.0)));
  CHECK(run("moment " + example("jacobi.json") + " --poly \"x +\" --x0 0.2 --T 1").code == 2);
}

TEST_CASE("simulate") {
  const fs::path d = scratch();
  const std::string flags = " --x0 0.2 --T 0.5 --dt 0.01 --paths 6 --seed 42 --save-every 10";
  CHECK(run("simulate " + example("reflection.json") + flags + " --out " + (d / "a.csv").string()).code == 0);
  CHECK(run("simulate " + example("reflection.json") + flags + " --threads 2 --out " + (d / "b.csv").string()).code == 0);
  CHECK(slurp(d / "a.csv") == slurp(d / "b.csv"));
  const pjd::CsvTable t = csv(d / "a.csv");
  CHECK(t.header == std::vector<std::string>{"time", "path_id", "x_1"});
  CHECK(t.rows.size() == 6 * 6);

  CHECK(run("simulate " + example("simplex_type1.json") + " --x0 0.2,0.3,0.5 --T 0.1 --dt 0.01 --paths 2 --out " +
            (d / "s.csv").string())
            .code == 0);
  CHECK(csv(d / "s.csv").header == std::vector<std::string>{"time", "path_id", "x_1", "x_2", "x_3"});

  CHECK(run("simulate " + example("jacobi.json") + " --x0 0.2 --T 1 --dt 0.01 --paths 0").code == 1);
  CHECK(run("simulate " + example("sin2_kernel.json") + " --x0 0.2 --T 1 --dt 0.01 --paths 2").code == 3);
}

TEST_CASE("price") {
  const fs::path out = scratch() / "p.csv";
  CHECK(run("price " + example("recovery.json") + " --S 0.4 --tenors 0,1,5 --out " + out.string()).code == 0);
  const pjd::CsvTable t = csv(out);
  CHECK(t.header == std::vector<std::string>{"tenor", "P", "F", "Ptilde"});
  REQUIRE(t.rows.size() == 3);
  CHECK(std::stod(t.rows[0][2]) == 0.4);
  CHECK(std::stod(t.rows[0][3]) == 0.4);
  CHECK(std::stod(t.rows[2][1]) == 0.88);
  CHECK(std::stod(t.rows[2][3]) == doctest::Approx(0.88 * std::stod(t.rows[2][2])));
}

TEST_CASE("spt and matrix") {
  const Run s = run("spt " + example("spt.json"));
  CHECK(s.code == 0);
  const fs::path out = scratch() / "g.csv";
  CHECK(run("matrix " + example("jacobi.json") + " --N 2 --out " + out.string()).code == 0);
  const pjd::CsvTable g = csv(out);
  CHECK(g.header == std::vector<std::string>{"1", "x", "x^2"});
  CHECK(g.rows.size() == 3);
}
