#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "generators.hpp"
#include "qidx/cli.hpp"
#include "qidx/error.hpp"

using namespace qidx;
using namespace qidx::cli;
using qidx::testing::Gen;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

Error error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an error");
  return Error(ErrorCode::InvalidArgument, "");
}

CommandResult run(const std::string& cmd, const std::vector<std::string>& args, RunConfig cfg = {}) {
  return run_command(cmd, args, cfg);
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qidx_test_" + name);
}

}  // namespace

TEST_CASE("parse_expression examples") {
  const LaurentPoly z = LaurentPoly::variable(1, 0);
  CHECK(parse_expression("z^3") == pow(z, 3));
  CHECK(parse_expression("1 + 2*z") == LaurentPoly::constant(1, 1.0) + 2.0 * z);
  CHECK(parse_expression("z1^2*z2^-3 + 0.5i") ==
        LaurentPoly::monomial({2, -3}) + LaurentPoly::constant(2, Complex(0.0, 0.5)));
  CHECK(parse_expression("-z + (1 + z)^2") == LaurentPoly::constant(1, 1.0) + z + pow(z, 2));
  CHECK(parse_expression("2.5e-1 * i * z") == LaurentPoly::monomial({1}, Complex(0.0, 0.25)));
  CHECK(parse_expression("z1 - 1", 2) == LaurentPoly::variable(2, 0) - LaurentPoly::constant(2, 1.0));
  CHECK(parse_expression("5", 3) == LaurentPoly::constant(3, 5.0));
  CHECK(parse_expression("z2").dim() == 2);
}

TEST_CASE("parse errors carry the offending position") {
  const Error e = error_of([] { (void)parse_expression("z^"); });
  CHECK(e.code() == ErrorCode::ParseError);
  CHECK(e.detail().rfind("position 2", 0) == 0);

  CHECK(error_of([] { (void)parse_expression("1 + * z"); }).detail().rfind("position 4", 0) == 0);
  CHECK(error_of([] { (void)parse_expression("(z + 1"); }).code() == ErrorCode::ParseError);
  CHECK(error_of([] { (void)parse_expression("y"); }).code() == ErrorCode::ParseError);
  CHECK(error_of([] { (void)parse_expression(""); }).code() == ErrorCode::ParseError);
  CHECK(error_of([] { (void)parse_expression("z^0"); }).code() == ErrorCode::ParseError);
}

TEST_CASE("dimension errors") {
  CHECK(error_of([] { (void)parse_expression("z + z1"); }).code() == ErrorCode::DimError);
  CHECK(error_of([] { (void)parse_expression("z3", 2); }).code() == ErrorCode::DimError);
  CHECK(error_of([] { (void)parse_expression("z", 2); }).code() == ErrorCode::DimError);
}

TEST_CASE("property: printed expressions parse back to the same symbol") {
  Gen g(61);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = static_cast<int>(g.integer(1, 3));
    const LaurentPoly a = g.sparse(dim, 4, 6, g.coin());
    CHECK(parse_expression(to_expression(a), dim) == a);
  }
}

TEST_CASE("property: JSON symbols round-trip") {
  Gen g(62);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = static_cast<int>(g.integer(1, 4));
    const LaurentPoly a = g.sparse(dim, 5, 8);
    const nlohmann::json j = nlohmann::json::parse(symbol_to_json(a).dump());
    CHECK(symbol_from_json(j) == a);
  }
}

TEST_CASE("JSON symbol validation") {
  const auto dup = nlohmann::json::parse(
      R"({"dim": 1, "terms": [{"k": [1], "re": 1, "im": 0}, {"k": [1], "re": 2, "im": 0}]})");
  CHECK(error_of([&] { (void)symbol_from_json(dup); }).code() == ErrorCode::DuplicateExponent);
  const auto bad_len = nlohmann::json::parse(R"({"dim": 2, "terms": [{"k": [1], "re": 1, "im": 0}]})");
  CHECK(error_of([&] { (void)symbol_from_json(bad_len); }).code() == ErrorCode::DimError);
  CHECK(error_of([] { (void)read_symbol_file("/nonexistent/qidx.json"); }).code() == ErrorCode::IoError);
}

TEST_CASE("matrix input") {
  const MatrixSymbol m = parse_matrix("z1, 0; 0, z2");
  CHECK(m.size() == 2);
  CHECK(m(0, 0) == LaurentPoly::variable(2, 0));
  CHECK(m(0, 1).is_zero());
  const MatrixSymbol j = matrix_from_json(nlohmann::json::parse(R"({"size": 2, "entries": [["z1", 1], [0, "z2"]]})"));
  CHECK(j(0, 1) == LaurentPoly::constant(2, 1.0));
  CHECK(error_of([] { (void)parse_matrix("z1, 0; 0"); }).code() == ErrorCode::DimError);
}

TEST_CASE("run_command: successful reports") {
  const CommandResult w = run("wind", {"1 + 2*z"});
  CHECK(w.exit_code == 0);
  CHECK(w.report["wn"] == 1);
  CHECK(w.report["wn_sampled"] == 1);

  const CommandResult i2 = run("index2d", {"z1^2*z2^-3"});
  CHECK(i2.exit_code == 0);
  CHECK(i2.report["m"] == nlohmann::json::array({2, -3}));
  CHECK(std::abs(i2.report["fredholm_index"].get<double>() - (3.0 - 2.0 * kSqrt2)) < 1e-12);
  CHECK(std::abs(i2.report["topological_index"].get<double>() - (2.0 * kSqrt2 - 3.0)) < 1e-12);

  const CommandResult f = run("fredholm", {"z1 - 1"});
  CHECK(f.exit_code == 0);
  CHECK(f.report["fredholm"] == false);

  const CommandResult nd = run("indexnd", {"z1*z2*z3"});
  CHECK(nd.report["m"] == nlohmann::json::array({1, 1, 1}));

  const CommandResult mi = run("matindex", {"z1, 0; 0, z2"});
  CHECK(mi.exit_code == 0);
  CHECK(std::abs(mi.report["fredholm_index"].get<double>() + kSqrt2 + 1.0) < 1e-12);

  RunConfig cfg;
  cfg.truncation = 8;
  const CommandResult o = run("oracle", {"z^2"}, cfg);
  CHECK(o.report["ker_dim"] == 0);
  CHECK(o.report["coker_dim"] == 2);
  CHECK(o.report["sigma_gap"].is_null());

  const CommandResult tv = run("tensor-verify", {"z", "z"});
  CHECK(std::abs(tv.report["lhs"].get<double>() - (kSqrt2 + 1.0)) < 1e-10);
}

TEST_CASE("run_command: theta options") {
  RunConfig cfg;
  cfg.theta = "golden";
  const CommandResult r = run("index2d", {"z1"}, cfg);
  CHECK(std::abs(r.report["topological_index"].get<double>() - std::numbers::phi) < 1e-12);
  cfg.theta = "1.5";
  CHECK(run("index2d", {"z1"}, cfg).report["rationally_independent"] == false);
  cfg.theta = "sqrt2,sqrt3,sqrt5";
  CHECK(run("index2d", {"z1"}, cfg).exit_code == 1);
}

TEST_CASE("run_command: exit codes and error payloads") {
  const CommandResult unknown = run("frobnicate", {});
  CHECK(unknown.exit_code == 1);
  CHECK(unknown.report["error"] == "InvalidArgument");

  const CommandResult parse = run("wind", {"1 + "});
  CHECK(parse.exit_code == 1);
  CHECK(parse.report["error"] == "ParseError");
  CHECK(parse.report.contains("detail"));

  const CommandResult vanish = run("index2d", {"z1 - 1"});
  CHECK(vanish.exit_code == 2);
  CHECK(vanish.report["error"] == "NotInvertibleOnTorus");

  const CommandResult singular = run("matindex", {"z1, 1; 1, z1"});
  CHECK(singular.exit_code == 2);
  CHECK(singular.report["error"] == "NotInvertibleOnTorus");

  RunConfig cfg;
  cfg.truncation = 0;
  CHECK(run("wind", {"z"}, cfg).exit_code == 1);
  CHECK(run("wind", {}).exit_code == 1);
}

TEST_CASE("demos report the cokernel growth table") {
  const CommandResult d = run("demos", {});
  REQUIRE(d.exit_code == 0);
  std::vector<std::size_t> dims;
  for (const auto& row : d.report["cokernel_growth"]["table"]) dims.push_back(row["coker_dim"].get<std::size_t>());
  CHECK(dims == std::vector<std::size_t>{5, 9, 17});
  CHECK(d.report["noncompact_witness"]["unit_singular_values"] == 17);
}

TEST_CASE("emit_report writes pretty JSON and the index report round-trips") {
  const auto path = temp_file("empty.json");
  emit_report(Report(), path.string());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "{}\n");
  std::filesystem::remove(path);

  const IndexValue v{{2, -3}, ThetaWeights::quarter_plane()};
  const IndexValue back = index_from_report(nlohmann::json::parse(index_report(v).dump()));
  CHECK(back.m == v.m);
  CHECK(back.theta.values == v.theta.values);
  CHECK(back.value() == v.value());

  CHECK(error_of([] { emit_report(Report::object(), "/nonexistent/dir/out.json"); }).code() == ErrorCode::IoError);
}

TEST_CASE("symbol files feed commands") {
  const auto path = temp_file("sym.json");
  {
    std::ofstream out(path);
    out << symbol_to_json(LaurentPoly::monomial({1, 1})).dump();
  }
  RunConfig cfg;
  cfg.file = path.string();
  const CommandResult r = run("index2d", {}, cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.report["m"] == nlohmann::json::array({1, 1}));
  std::filesystem::remove(path);
}
