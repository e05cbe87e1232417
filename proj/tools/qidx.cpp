// qidx: command-line front end for the quarter-plane index library.
//
//   qidx wind "1+2*z"
//   qidx index2d "z1^2*z2^-3" --theta sqrt2
//   qidx matindex "z1, 0; 0, z2"
//   qidx demos --out table.json

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qidx/cli.hpp"
#include "qidx/error.hpp"

namespace {

int fail_usage(const std::string& detail) {
  qidx::cli::emit_report({{"error", "InvalidArgument"}, {"detail", detail}});
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  qidx::cli::RunConfig config;
  std::string command;
  std::vector<std::string> args;
  std::string theta, out, file, format = "json";
  double tol = 0.0;

  CLI::App app{"Generalized Fredholm index of quarter-plane Toeplitz operators"};
  std::string commands;
  for (const auto& c : qidx::cli::command_names()) commands += (commands.empty() ? "" : ", ") + c;
  app.add_option("command", command, "One of: " + commands)->required();
  app.add_option("symbols", args, "Symbol expression(s), e.g. \"z1^2*z2^-3 + 0.5i\"");
  app.add_option("--theta", theta, "Weights: sqrt2, sqrt3, sqrt5, sqrt7, golden or decimals, comma-separated");
  app.add_flag("--assert-irrational", config.assert_irrational, "Treat decimal theta weights as rationally independent");
  app.add_option("--truncation,-M", config.truncation, "Section truncation M")->capture_default_str();
  app.add_option("--tol", tol, "Vanishing tolerance for invertibility on the torus");
  app.add_option("--rank-tol", config.rank_tol, "Relative singular-value cutoff")->capture_default_str();
  app.add_option("--trace-tol", config.trace_tol, "Tolerance for integer traces")->capture_default_str();
  app.add_option("--grid", config.grid, "Sampling grid per axis")->capture_default_str();
  app.add_option("--out", out, "Write the report here instead of stdout");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json"}));
  app.add_option("--file", file, "Read the symbol (or matrix) from a JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << '\n';
    return fail_usage(e.what());
  }

  if (!theta.empty()) config.theta = theta;
  if (!out.empty()) config.out = out;
  if (!file.empty()) config.file = file;
  if (app.count("--tol") > 0) config.vanish_tol = tol;
  if (const char* env = std::getenv("QIDX_MAX_COLS")) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(env, &used);
      if (used != std::string(env).size() || v <= 0) throw std::invalid_argument(env);
      config.max_cols = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      return fail_usage(std::string("QIDX_MAX_COLS must be a positive integer, got '") + env + "'");
    }
  }

  const qidx::cli::CommandResult result = qidx::cli::run_command(command, args, config);
  try {
    qidx::cli::emit_report(result.report, result.exit_code == 0 ? config.out : std::nullopt);
  } catch (const qidx::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return result.exit_code;
}
