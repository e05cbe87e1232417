#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qidx/error.hpp"
#include "qidx/hardy.hpp"
#include "qidx/index.hpp"
#include "qidx/symbol.hpp"

namespace qidx::cli {

using Report = nlohmann::ordered_json;

/// Lowers the expression language to a Laurent polynomial.
///
///   expr   := ['-'] term (('+' | '-') term)*
///   term   := factor ('*' factor)*
///   factor := var ['^' int] | number ['i'] | 'i' | '(' expr ')' ['^' uint]
///   var    := 'z' | 'z' digits
///
/// "z" is the 1-D variable; "zK" is coordinate K (1-based) and the dimension is
/// the largest K used. A dim_hint above the inferred dimension lifts the result
/// (so "5" or "z1 - 1" can be read as 2-D symbols); below it is a DimError.
/// Errors: ParseError (detail starts with the 0-based position), DimError.
LaurentPoly parse_expression(const std::string& src, int dim_hint = 0);

/// {"dim": d, "terms": [{"k": [..], "re": x, "im": y}, ...]}.
Report symbol_to_json(const LaurentPoly& a);
/// Inverse of symbol_to_json; DuplicateExponent when an exponent repeats.
LaurentPoly symbol_from_json(const nlohmann::json& j);
LaurentPoly read_symbol_file(const std::string& path);

/// "a, b; c, d" (rows split by ';', entries by ',') or a JSON object
/// {"size": n, "entries": [[e00, e01, ...], ...]} whose entries are expression
/// strings or symbol objects. Entries are read as 2-D symbols.
MatrixSymbol parse_matrix(const std::string& src);
MatrixSymbol matrix_from_json(const nlohmann::json& j);

struct RunConfig {
  std::optional<std::string> theta;
  bool assert_irrational = false;
  std::int64_t truncation = 16;
  double vanish_tol = kDefaultVanishTol;
  double rank_tol = kDefaultRankTol;
  double trace_tol = 1e-8;
  std::size_t grid = 256;
  std::size_t max_cols = kDefaultMaxColumns;
  std::optional<std::string> out;
  /// JSON symbol (or matrix, for matindex) file used instead of a positional expression.
  std::optional<std::string> file;

  /// Throws InvalidArgument unless every tolerance is positive, M >= 1 and grid >= 8.
  void validate() const;
};

struct CommandResult {
  int exit_code = 0;
  Report report = Report::object();
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"wind",   "index2d", "indexnd",      "decompose",     "fredholm",
                                              "matindex", "oracle", "trace-verify", "tensor-verify", "demos"};
  return names;
}

/// Never throws qidx::Error: failures become {"error": code, "detail": text}
/// with exit code 1 (usage) or 2 (mathematical).
CommandResult run_command(const std::string& cmd, const std::vector<std::string>& args, const RunConfig& config);

/// {fredholm, m, theta, topological_index, fredholm_index} for a topological index value.
Report index_report(const IndexValue& topological, bool fredholm = true);
/// Rebuilds the topological IndexValue from an index report.
IndexValue index_from_report(const nlohmann::json& j);

Report error_report(const Error& e);

/// Pretty-printed JSON to path, or stdout when path is empty; throws IoError.
void emit_report(const Report& r, const std::optional<std::string>& path = std::nullopt);

}  // namespace qidx::cli
