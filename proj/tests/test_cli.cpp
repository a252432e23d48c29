#include <doctest.h>

#include "commands.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

using htva::cli::Arguments;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* kA1 = R"({"delta": [[1, 1]], "stability": [1]})";
const char* kThree = R"({"delta": [[1, 0, 1], [0, 1, 1]], "stability": ["2", 1]})";

fs::path write_problem(const std::string& name, const std::string& text) {
  fs::path dir = fs::temp_directory_path() / "htva_cli_tests";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

struct Outcome {
  int code;
  json report;
  std::string err;
};

Outcome run(Arguments a) {
  std::ostringstream out, err;
  int code = htva::cli::run(a, out, err);
  return {code, json::parse(out.str()), err.str()};
}

Arguments args(const std::string& command, const fs::path& problem) {
  Arguments a;
  a.command = command;
  a.problem = problem.string();
  return a;
}

}  // namespace

TEST_CASE("analyze") {
  auto r = run(args("analyze", write_problem("a1.json", kA1)));
  CHECK(r.code == 0);
  CHECK(r.report["status"] == "ok");
  CHECK(r.report["version"] == htva::cli::kVersion);
  CHECK(r.report["input_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  const auto& res = r.report["results"];
  CHECK(res["walls"] == 1);
  CHECK(res["charts"] == 2);
  CHECK(res["gram"] == json::parse("[[2]]"));
  CHECK(res["weyl_order"] == 2);
  CHECK(res["unimodular"] == true);

  auto t = run(args("analyze", write_problem("three.json", kThree)));
  CHECK(t.code == 0);
  CHECK(t.report["results"]["charts"] == 3);
  CHECK(t.report["results"]["weyl_order"] == 6);
  CHECK(t.report["results"]["gram"] == json::parse("[[2,1],[1,2]]"));
}

TEST_CASE("report key order") {
  std::ostringstream out, err;
  htva::cli::run(args("analyze", write_problem("a1.json", kA1)), out, err);
  auto report = nlohmann::ordered_json::parse(out.str());
  std::vector<std::string> keys;
  for (const auto& [k, v] : report.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"command", "arguments", "version", "input_hash", "status", "results", "timing"});
}

TEST_CASE("virasoro") {
  auto r = run(args("virasoro", write_problem("a1.json", kA1)));
  CHECK(r.code == 0);
  CHECK(r.report["results"]["central_charge"] == "-3");
  CHECK(r.report["results"]["match"] == true);
  auto t = run(args("virasoro", write_problem("three.json", kThree)));
  CHECK(t.report["results"]["central_charge"] == "-5");
  auto bad = args("virasoro", write_problem("a1.json", kA1));
  bad.lambda = "1,0";
  CHECK(run(bad).code == 2);
}

TEST_CASE("brst-check") {
  auto a = args("brst-check", write_problem("a1.json", kA1));
  a.max_weight = "1";
  auto r = run(a);
  CHECK(r.code == 0);
  const auto& res = r.report["results"];
  CHECK(res["d_squared_zero"] == true);
  CHECK(res["negative_ghost_vanishing"] == true);
  CHECK(res["comoment_ope_trivial"] == true);
  CHECK(res["classical_consistent"] == true);
}

TEST_CASE("ope and wakimoto") {
  auto p = write_problem("a1.json", kA1);
  auto a = args("ope", p);
  a.elements = {"x1[-1]", "y1[-1]"};
  auto r = run(a);
  CHECK(r.code == 0);
  REQUIRE(r.report["results"]["poles"].size() == 1);
  CHECK(r.report["results"]["poles"][0]["order"] == 1);
  CHECK(r.report["results"]["poles"][0]["coefficient"] == "-h");
  a.elements = {"x1[-1]"};
  CHECK(run(a).code == 2);
  a.elements = {"psi*3[-1]", "x1[-1]"};
  auto bad = run(a);
  CHECK(bad.code == 2);
  CHECK(bad.report["status"] == "input_error");
  CHECK_FALSE(bad.err.empty());

  auto w = args("wakimoto", p);
  w.elements = {"c1[-1]"};
  w.mode = 0;
  w.lambda = "3/2";
  auto wr = run(w);
  CHECK(wr.code == 0);
  CHECK(wr.report["results"]["result"] == "3/2");
}

TEST_CASE("charts and cohomology") {
  auto p = write_problem("three.json", kThree);
  auto c = run(args("charts", p));
  CHECK(c.code == 0);
  REQUIRE(c.report["results"]["charts"].size() == 3);
  for (const auto& ch : c.report["results"]["charts"]) CHECK(ch["local_ope_ok"] == true);
  auto h = args("cohomology", p);
  h.ghost = 0;
  h.max_weight = "1";
  CHECK(run(h).code == 0);

  auto nu = run(args("charts", write_problem("nu.json", R"({"delta": [[1, 2]], "stability": [1]})")));
  CHECK(nu.code == 2);
  CHECK(nu.report["status"] == "refused");
}

TEST_CASE("input errors") {
  auto zero = run(args("analyze", write_problem("zero.json", R"({"delta": [[1, 1]], "stability": ["1/0"]})")));
  CHECK(zero.code == 2);
  CHECK(zero.report["error"].get<std::string>().find("stability[0]") != std::string::npos);
  auto syntax = run(args("analyze", write_problem("syntax.json", "{\"delta\": [[1, 1]],\n \"stability\": [1,]}")));
  CHECK(syntax.code == 2);
  CHECK(syntax.report["error"].get<std::string>().find("line 2") != std::string::npos);
  auto unknown = run(args("analyze", write_problem("unk.json", R"({"delta": [[1, 1]], "stability": [1], "x": 1})")));
  CHECK(unknown.code == 2);
  CHECK(unknown.report["error"].get<std::string>().find("'x'") != std::string::npos);
  CHECK(run(args("analyze", "/nonexistent/problem.json")).code == 2);
  CHECK(run(args("bogus", write_problem("a1.json", kA1))).code == 2);
  CHECK_THROWS_AS(htva::cli::parse_problem_text(R"({"delta": [[1, 0], [0, 1]], "stability": [1, 1]})"),
                  htva::InputError);
}

TEST_CASE("options") {
  auto p = htva::cli::parse_problem_text(
      R"({"delta": [[1, 1]], "stability": [1], "options": {"max_weight": "1/2", "localization_chart": [2],
          "lambda_shift": [1, -1], "hbar_truncation_guard": 3}})");
  CHECK(p.options.max_weight == htva::Rational(1, 2));
  CHECK(p.options.localization_chart == std::vector<int>{1});
  CHECK(p.options.hbar_truncation_guard == 3);
  CHECK_THROWS_AS(htva::cli::parse_problem_text(R"({"delta": [[1, 1]], "stability": [1], "options": {"z": 1}})"),
                  htva::InputError);
}

TEST_CASE("json-out and determinism") {
  auto p = write_problem("three.json", kThree);
  auto a = args("zhu-compare", p);
  fs::path out = fs::temp_directory_path() / "htva_cli_tests" / "report.json";
  a.json_out = out.string();
  auto r1 = run(a);
  auto r2 = run(a);
  CHECK(r1.code == 0);
  r1.report.erase("timing");
  r2.report.erase("timing");
  CHECK(r1.report.dump() == r2.report.dump());
  std::ifstream f(out);
  json saved = json::parse(f);
  saved.erase("timing");
  CHECK(saved.dump() == r2.report.dump());
}

TEST_CASE("binary") {
  auto p = write_problem("a1.json", kA1);
  fs::path out = fs::temp_directory_path() / "htva_cli_tests" / "bin.json";
  std::string cmd = std::string(HTVA_BINARY) + " analyze --problem " + p.string() + " > " + out.string();
  CHECK(std::system(cmd.c_str()) == 0);
  std::ifstream f(out);
  CHECK(json::parse(f)["results"]["charts"] == 2);
  std::string bad = std::string(HTVA_BINARY) + " analyze > /dev/null 2>&1";
  int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
