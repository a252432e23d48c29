#pragma once

#include <htva/hypertoric.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace htva::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kMismatch = 1, kInputError = 2 };

struct ProblemOptions {
  std::optional<Rational> max_weight;
  std::optional<int> hbar_truncation_guard;
  std::optional<std::vector<int>> localization_chart;  // 0-based
  std::optional<RatVec> lambda_shift;
};

struct Problem {
  HypertoricInput input;
  ProblemOptions options;
  std::string hash;  // FNV-1a 64 of the file bytes
};

// Schema errors name the offending field; JSON syntax errors carry line and column.
Problem parse_problem_text(const std::string& text);
Problem parse_problem(const std::string& path);

struct Arguments {
  std::string command;
  std::string problem;
  std::optional<std::string> max_weight;
  std::optional<std::string> chart;
  std::optional<std::string> lambda;
  std::vector<std::string> elements;
  std::optional<long> mode;
  std::optional<int> ghost;
  bool representatives = false;
  std::optional<std::string> json_out;
};

const std::vector<std::string>& command_names();

// Writes the report to out (and to json_out if set); diagnostics go to err.
int run(const Arguments& args, std::ostream& out, std::ostream& err);

}  // namespace htva::cli
