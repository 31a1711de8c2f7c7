// Exercises the installed command-line surface: exit codes, JSON outputs,
// and report determinism. The binary path comes from TDSCALC_CLI.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tdscalc/json_io.hpp"

namespace {

std::string cli_path() {
  const char* p = std::getenv("TDSCALC_CLI");
  REQUIRE_MESSAGE(p != nullptr, "TDSCALC_CLI must point at the tdscalc binary");
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string out_file = "/tmp/tdscalc_test_out.txt";
  std::string cmd = cli_path() + " " + args + " > " + out_file + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("verify: exit codes and determinism") {
  auto ok = run("verify algebra --seed 3 --samples 16");
  CHECK(ok.exit_code == 0);
  auto parsed = tdsc::json::parse(ok.out);
  CHECK(parsed["suite"] == "algebra");
  CHECK(parsed["summary"]["fail"] == 0);

  auto twice_a = run("verify tds --seed 7");
  auto twice_b = run("verify tds --seed 7");
  CHECK(twice_a.out == twice_b.out);

  auto unknown = run("verify bogus");
  CHECK(unknown.exit_code == 2);

  auto usage = run("verify");
  CHECK(usage.exit_code == 2);
}

TEST_CASE("eval: the volume form on the standard basis") {
  write_file("/tmp/tdscalc_form.json",
             R"({"dim": 2, "degree": 2, "coeffs": [{"idx": [0, 1], "num": 1, "den": 1}]})");
  write_file("/tmp/tdscalc_input.json", R"({"vectors": [["1", "0"], ["0", "1"]]})");
  auto r = run("eval --form /tmp/tdscalc_form.json --input /tmp/tdscalc_input.json");
  CHECK(r.exit_code == 0);
  auto value = tdsc::json::parse(r.out);
  CHECK(value["num"] == 1);
  CHECK(value["den"] == 1);

  // differential form at a point
  write_file("/tmp/tdscalc_dform.json",
             R"({"domain": {"dim": 1, "unbounded": true}, "degree": 1,
                 "coeffs": [{"idx": [0], "expr": "x0^2 + 1"}]})");
  write_file("/tmp/tdscalc_dinput.json", R"({"point": ["2"], "vectors": [["1"]]})");
  auto rd = run("eval --form /tmp/tdscalc_dform.json --input /tmp/tdscalc_dinput.json");
  CHECK(rd.exit_code == 0);
  CHECK(tdsc::json::parse(rd.out)["num"] == 5);

  // malformed JSON is a schema error
  write_file("/tmp/tdscalc_broken.json", "{not json");
  auto bad = run("eval --form /tmp/tdscalc_broken.json --input /tmp/tdscalc_input.json");
  CHECK(bad.exit_code == 2);

  // arity mismatch surfaces as a domain error
  write_file("/tmp/tdscalc_short.json", R"({"vectors": [["1", "0"]]})");
  auto dom = run("eval --form /tmp/tdscalc_form.json --input /tmp/tdscalc_short.json");
  CHECK(dom.exit_code == 3);
}

TEST_CASE("probe: line transversality certificate") {
  write_file("/tmp/tdscalc_p1.json",
             R"({"domain": {"dim": 1, "unbounded": true}, "components": ["x0", "0"]})");
  write_file("/tmp/tdscalc_p2.json",
             R"({"domain": {"dim": 1, "unbounded": true}, "components": ["0", "x0"]})");
  auto r = run("probe lines --p1 /tmp/tdscalc_p1.json --p2 /tmp/tdscalc_p2.json "
               "--mode strong");
  CHECK(r.exit_code == 0);
  auto parsed = tdsc::json::parse(r.out);
  CHECK(parsed["found"] == false);
  CHECK(parsed["certificate"]["kind"] == "line-direction-obstruction");

  auto joined = run("probe euclidean:2 --p1 /tmp/tdscalc_p1.json --p2 /tmp/tdscalc_p2.json "
                    "--mode strong");
  CHECK(joined.exit_code == 0);
  CHECK(tdsc::json::parse(joined.out)["found"] == true);

  auto bad_space = run("probe moebius --p1 /tmp/tdscalc_p1.json --p2 /tmp/tdscalc_p2.json");
  CHECK(bad_space.exit_code == 2);

  auto bad_mode = run("probe lines --p1 /tmp/tdscalc_p1.json --p2 /tmp/tdscalc_p2.json "
                      "--mode sideways");
  CHECK(bad_mode.exit_code == 2);
}
