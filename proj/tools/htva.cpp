#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace htva::cli;
  CLI::App app{"Exact computations for hypertoric vertex algebras"};
  app.set_version_flag("--version", kVersion);
  Arguments a;
  app.add_option("command", a.command, "analyze | charts | ope | brst-check | cohomology | virasoro | zhu-compare | wakimoto")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--problem", a.problem, "problem file (JSON)")->required();
  app.add_option("--max-weight", a.max_weight, "largest conformal weight W (half-integer)");
  app.add_option("--chart", a.chart, "chart sites J1,J2,... (1-based)");
  app.add_option("--lambda", a.lambda, "rational vector v1,v2,...");
  app.add_option("--element", a.elements, "element expression; repeat for binary commands");
  app.add_option("--mode", a.mode, "mode index n (wakimoto)");
  app.add_option("--ghost", a.ghost, "restrict cohomology to one ghost number");
  app.add_flag("--representatives", a.representatives, "include cohomology representatives");
  app.add_option("--json-out", a.json_out, "also write the report to this path");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }
  return run(a, std::cout, std::cerr);
}
