#include <fstream>
#include <sstream>

#include "qidx/cli.hpp"
#include "qidx/error.hpp"

namespace qidx::cli {
namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

LaurentPoly entry_from_json(const nlohmann::json& e) {
  if (e.is_string()) return parse_expression(e.get<std::string>(), 2);
  if (e.is_number()) return LaurentPoly::constant(2, e.get<double>());
  LaurentPoly p = symbol_from_json(e);
  if (p.dim() != 2) throw Error(ErrorCode::DimError, "matrix entries must be 2-D symbols");
  return p;
}

}  // namespace

Report symbol_to_json(const LaurentPoly& a) {
  Report terms = Report::array();
  for (const auto& [k, c] : a.terms()) {
    Report t;
    t["k"] = k;
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  Report r;
  r["dim"] = a.dim();
  r["terms"] = std::move(terms);
  return r;
}

LaurentPoly symbol_from_json(const nlohmann::json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    if (dim < 1) throw Error(ErrorCode::DimError, "dim must be >= 1");
    LaurentPoly::TermMap terms;
    for (const auto& t : j.at("terms")) {
      Exponent k = t.at("k").get<Exponent>();
      if (k.size() != static_cast<std::size_t>(dim)) {
        throw Error(ErrorCode::DimError, "exponent length " + std::to_string(k.size()) + " in a " +
                                             std::to_string(dim) + "-D symbol");
      }
      const Complex c(t.value("re", 0.0), t.value("im", 0.0));
      if (!terms.emplace(std::move(k), c).second) {
        throw Error(ErrorCode::DuplicateExponent, "exponent " + t.at("k").dump() + " appears twice");
      }
    }
    return LaurentPoly(dim, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("symbol JSON: ") + e.what());
  }
}

LaurentPoly read_symbol_file(const std::string& path) { return symbol_from_json(load_json(path)); }

MatrixSymbol parse_matrix(const std::string& src) {
  const auto first = src.find_first_not_of(" \t\n");
  if (first != std::string::npos && src[first] == '{') {
    try {
      return matrix_from_json(nlohmann::json::parse(src));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("matrix JSON: ") + e.what());
    }
  }
  std::vector<LaurentPoly> entries;
  std::size_t cols = 0, rows = 0;
  std::stringstream row_stream(src);
  std::string row;
  while (std::getline(row_stream, row, ';')) {
    std::stringstream col_stream(row);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(col_stream, cell, ',')) {
      entries.push_back(parse_expression(cell, 2));
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) throw Error(ErrorCode::DimError, "row " + std::to_string(rows) + " has " +
                                                            std::to_string(count) + " entries");
    ++rows;
  }
  if (rows == 0 || rows != cols) throw Error(ErrorCode::DimError, "matrix symbol must be square");
  return MatrixSymbol(rows, std::move(entries));
}

MatrixSymbol matrix_from_json(const nlohmann::json& j) {
  try {
    const auto& rows = j.at("entries");
    const std::size_t n = rows.size();
    if (j.contains("size") && j.at("size").get<std::size_t>() != n) {
      throw Error(ErrorCode::DimError, "size disagrees with the entry rows");
    }
    std::vector<LaurentPoly> entries;
    for (const auto& row : rows) {
      if (row.size() != n) throw Error(ErrorCode::DimError, "matrix symbol must be square");
      for (const auto& e : row) entries.push_back(entry_from_json(e));
    }
    if (n == 0) throw Error(ErrorCode::DimError, "empty matrix symbol");
    return MatrixSymbol(n, std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("matrix JSON: ") + e.what());
  }
}

}  // namespace qidx::cli
