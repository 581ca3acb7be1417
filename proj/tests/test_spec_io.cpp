#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "pjd/csv.hpp"
#include "pjd/error.hpp"
#include "pjd/generator.hpp"
#include "pjd/spec_io.hpp"

using namespace pjd;

namespace {

ErrorCode parse_code(std::string_view text) {
  try {
    (void)parse_spec(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parsed");
  return ErrorCode::Parse;
}

}  // namespace

TEST_CASE("every example survives dump and parse") {
  for (const auto& entry : std::filesystem::directory_iterator(PJD_SPEC_DIR)) {
    CAPTURE(entry.path().string());
    const SpecDocument a = load_spec(entry.path().string());
    const SpecDocument b = parse_spec(dump_spec(a));
    CHECK(a.space == b.space);
    CHECK(a.typed.has_value() == b.typed.has_value());
    if (a.typed) CHECK(approx_equal(*a.typed, *b.typed, 1e-15));
    CHECK(a.metadata == b.metadata);
    const int N = a.space.is_interval() ? 4 : 2;
    const Eigen::MatrixXd ga = build_matrix(a.triplet(), N).G;
    const Eigen::MatrixXd gb = build_matrix(b.triplet(), N).G;
    CHECK((ga - gb).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("indices in files are one-based") {
  const SpecDocument d = load_spec(std::string(PJD_SPEC_DIR) + "/simplex_type3.json");
  const auto& s = std::get<SimplexType3>(*d.typed);
  CHECK(s.i == 0);
  CHECK(s.j == 1);
  CHECK(dump_spec(d).find("\"i\": 1") != std::string::npos);
}

TEST_CASE("fractions and expressions") {
  const SpecDocument d = parse_spec(R"({"version": "1", "space": {"kind": "interval"},
    "raw": {"a": [["x - x^2"]], "b": ["1/2 - x"]}})");
  const LevyTriplet t = d.triplet();
  CHECK(t.b[0].coefficient({0}) == 0.5);
  CHECK(t.a[0][0].coefficient({2}) == -1.0);
  const SpecDocument f = parse_spec(R"({"version": "1", "space": {"kind": "interval"},
    "typed": {"type": "interval-type-0", "A": "1/4", "kappa": 1, "theta": "2/3"}})");
  CHECK(std::get<IntervalType0>(*f.typed).theta == doctest::Approx(2.0 / 3.0).epsilon(1e-16));
}

TEST_CASE("malformed documents") {
  CHECK(parse_code("{") == ErrorCode::Parse);
  CHECK(parse_code(R"({"version": "2", "space": {"kind": "interval"}})") == ErrorCode::Parse);
  CHECK(parse_code(R"({"version": "1", "space": {"kind": "cube"}})") == ErrorCode::Parse);
  CHECK(parse_code(R"({"version": "1", "space": {"kind": "interval"},
    "typed": {"type": "interval-type-9"}})") == ErrorCode::Parse);
  CHECK(parse_code(R"({"version": "1", "space": {"kind": "interval"},
    "typed": {"type": "interval-type-0", "kappa": 1, "theta": 0.5}})") == ErrorCode::Parse);
  CHECK(parse_code(R"({"version": "1", "space": {"kind": "simplex", "d": 3},
    "typed": {"type": "simplex-type-3", "i": 0, "j": 2, "c": 1,
      "alpha": [[0,1,1],[1,0,1],[1,1,0]], "B": [[-1,0.5,0.5],[0.5,-1,0.5],[0.5,0.5,-1]],
      "qi": [0,0,0], "qj": [0,0,0], "mu": {"atoms": [{"point": [0.5], "weight": 1}]}}})") == ErrorCode::Parse);
  CHECK_THROWS_AS(load_spec(std::string(PJD_TEST_DATA) + "/malformed.json"), Error);
  CHECK_THROWS_AS(load_spec(std::string(PJD_TEST_DATA) + "/does_not_exist.json"), Error);
}

TEST_CASE("csv") {
  std::istringstream in("a,b\n1,2\n3,4\n");
  const CsvTable t = read_csv(in);
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.rows.size() == 2);
  std::istringstream ragged("a,b\n1\n");
  CHECK_THROWS_AS(read_csv(ragged), Error);

  std::ostringstream os;
  write_price_csv(os, {{0.0, 1.0, 0.4, 0.4}, {1.0, 0.98, 0.5, 0.49}});
  std::istringstream back(os.str());
  const CsvTable p = read_csv(back);
  CHECK(p.header == std::vector<std::string>{"tenor", "P", "F", "Ptilde"});
  CHECK(p.rows[1][3] == "0.49");
  CHECK(format_number(0.1) == "0.1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
