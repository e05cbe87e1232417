#include <cmath>
#include <fstream>
#include <iostream>

#include "qidx/cli.hpp"
#include "qidx/error.hpp"
#include "qidx/indicial.hpp"
#include "qidx/winding.hpp"

namespace qidx::cli {
namespace {

LaurentPoly input_symbol(const std::vector<std::string>& args, const RunConfig& config, int dim_hint) {
  if (config.file) {
    if (!args.empty()) throw Error(ErrorCode::InvalidArgument, "give either an expression or --file, not both");
    LaurentPoly a = read_symbol_file(*config.file);
    if (dim_hint > 0 && a.dim() != dim_hint) {
      throw Error(ErrorCode::DimError, "file holds a " + std::to_string(a.dim()) + "-D symbol, expected " +
                                           std::to_string(dim_hint) + "-D");
    }
    return a;
  }
  if (args.size() != 1) throw Error(ErrorCode::InvalidArgument, "expected exactly one symbol expression");
  return parse_expression(args[0], dim_hint);
}

ThetaWeights theta_for(const RunConfig& config, std::size_t n) {
  if (!config.theta) return n == 2 ? ThetaWeights::quarter_plane() : ThetaWeights::torus(n);
  ThetaWeights t = ThetaWeights::parse(*config.theta, n, config.assert_irrational);
  return t;
}

/// JSON has no infinity; an absent gap (nothing dropped) is reported as null.
Report finite_or_null(double x) { return std::isfinite(x) ? Report(x) : Report(nullptr); }

Report cmd_wind(const std::vector<std::string>& args, const RunConfig& config) {
  const LaurentPoly a = input_symbol(args, config, 1);
  Report r;
  r["symbol"] = to_expression(a);
  r["wn"] = winding_exact(a, config.vanish_tol);
  r["wn_sampled"] = winding_sampled(a, config.grid);
  return r;
}

Report cmd_index2d(const std::vector<std::string>& args, const RunConfig& config) {
  const LaurentPoly a = input_symbol(args, config, 2);
  const ThetaWeights theta = theta_for(config, 2);
  if (!is_fredholm_T2(a, config.vanish_tol)) {
    throw Error(ErrorCode::NotInvertibleOnTorus, "symbol vanishes on the torus; T_a is not Fredholm");
  }
  Report r;
  r["symbol"] = to_expression(a);
  r.update(index_report(topological_index_T2(a, theta, config.vanish_tol)));
  return r;
}

Report cmd_indexnd(const std::vector<std::string>& args, const RunConfig& config) {
  const LaurentPoly a = input_symbol(args, config, 0);
  const ThetaWeights theta = theta_for(config, static_cast<std::size_t>(a.dim()));
  Report r;
  r["symbol"] = to_expression(a);
  r.update(index_report(index_TN(a, theta, config.vanish_tol)));
  return r;
}

Report cmd_decompose(const std::vector<std::string>& args, const RunConfig& config) {
  const LaurentPoly a = input_symbol(args, config, 2);
  const DecompositionResult d = decompose_torus2(a, config.grid, config.grid, config.vanish_tol);
  const auto band = static_cast<std::int64_t>(std::min<std::size_t>(8, d.psi_grid.shape[0] / 4));
  Report r;
  r["symbol"] = to_expression(a);
  r["m"] = d.m;
  r["n"] = d.n;
  r["grid"] = d.psi_grid.shape;
  r["reconstruction_error"] = d.reconstruction_error;
  r["psi_tail"] = d.psi_tail;
  r["psi_band"] = band;
  r["psi"] = symbol_to_json(psi_fourier(d, band).prune(1e-12));
  return r;
}

Report cmd_fredholm(const std::vector<std::string>& args, const RunConfig& config) {
  const LaurentPoly a = input_symbol(args, config, 2);
  const double mm = min_modulus(a);
  Report r;
  r["symbol"] = to_expression(a);
  if (mm > config.vanish_tol) {
    r.update(index_report(topological_index_T2(a, theta_for(config, 2), config.vanish_tol)));
  } else {
    r["fredholm"] = false;
  }
  r["min_modulus"] = mm;
  return r;
}

Report cmd_matindex(const std::vector<std::string>& args, const RunConfig& config) {
  MatrixSymbol phi(1);
  if (config.file) {
    if (!args.empty()) throw Error(ErrorCode::InvalidArgument, "give either a matrix or --file, not both");
    std::ifstream in(*config.file);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + *config.file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    phi = parse_matrix(text);
  } else {
    if (args.size() != 1) throw Error(ErrorCode::InvalidArgument, "expected one matrix argument \"a, b; c, d\"");
    phi = parse_matrix(args[0]);
  }
  const ThetaWeights theta = theta_for(config, 2);
  const LaurentPoly det = matrix_det(phi);
  Report r;
  r["size"] = phi.size();
  r["det"] = to_expression(det);
  r.update(index_report(fredholm_index_matrix(phi, theta, config.vanish_tol).negated()));
  return r;
}

Report cmd_oracle(const std::vector<std::string>& args, const RunConfig& config) {
  const LaurentPoly a = input_symbol(args, config, 0);
  const ToeplitzSection s = toeplitz_section(a, config.truncation, config.max_cols);
  const KernelReport k = kernel_cokernel_oracle(s, config.rank_tol, config.max_cols);
  Report r;
  r["symbol"] = to_expression(a);
  r["truncation"] = config.truncation;
  r["rows"] = s.rows.size();
  r["cols"] = s.cols.size();
  r["ker_dim"] = k.ker_dim;
  r["coker_dim"] = k.coker_dim;
  r["section_index"] = static_cast<std::int64_t>(k.ker_dim) - static_cast<std::int64_t>(k.coker_dim);
  r["sigma_gap"] = finite_or_null(k.sigma_gap);
  r["sigma_min"] = k.sigma_min;
  return r;
}

Report cmd_trace_verify(const std::vector<std::string>& args, const RunConfig& config) {
  const LaurentPoly a = input_symbol(args, config, 1);
  const std::int64_t wn = winding_exact(a, config.vanish_tol);
  const double trace = trace_winding_1d(a, config.trace_tol, config.vanish_tol);
  const double partial = partial_inverse_index_1d(a, config.truncation, a.bandwidth());
  const double trace_err = std::abs(trace - static_cast<double>(wn));
  const double partial_err = std::abs(partial + static_cast<double>(wn));
  Report r;
  r["symbol"] = to_expression(a);
  r["wn"] = wn;
  r["trace"] = trace;
  r["partial_inverse_index"] = partial;
  r["trace_error"] = trace_err;
  r["partial_inverse_error"] = partial_err;
  r["consistent"] = trace_err <= config.trace_tol && partial_err <= 1e-6;
  return r;
}

Report cmd_tensor_verify(const std::vector<std::string>& args, const RunConfig& config) {
  if (args.size() != 2) throw Error(ErrorCode::InvalidArgument, "tensor-verify takes two 1-D symbols");
  const LaurentPoly a = parse_expression(args[0], 1);
  const LaurentPoly b = parse_expression(args[1], 1);
  const ThetaWeights theta = theta_for(config, 2);
  const TensorIndexCheck c = tensor_index_verify(a, b, {theta.values[0], theta.values[1]});
  Report r;
  r["a"] = to_expression(a);
  r["b"] = to_expression(b);
  r["theta"] = theta.values;
  r["lhs"] = c.lhs;
  r["rhs"] = c.rhs;
  r["difference"] = std::abs(c.lhs - c.rhs);
  return r;
}

Report cmd_demos(const std::vector<std::string>& args, const RunConfig& config) {
  const LaurentPoly a = args.empty() && !config.file ? LaurentPoly::variable(2, 0) : input_symbol(args, config, 2);
  const std::vector<std::int64_t> ms{4, 8, 16};
  const std::vector<std::size_t> coker = cokernel_growth_demo(a, ms, config.rank_tol, config.max_cols);
  Report table = Report::array();
  for (std::size_t i = 0; i < ms.size(); ++i) table.push_back({{"M", ms[i]}, {"coker_dim", coker[i]}});

  const std::vector<double> sv = noncompact_witness(config.truncation);
  const auto units = std::count_if(sv.begin(), sv.end(), [](double s) { return std::abs(s - 1.0) < 1e-12; });

  const LaurentPoly psi = 0.3 * LaurentPoly::variable(2, 0);
  const std::int64_t weak_m = 24;
  std::vector<std::int64_t> ks;
  for (std::int64_t k = 0; k <= weak_m - psi.bandwidth(); ++k) ks.push_back(k);
  const std::vector<double> residuals = weak_invertibility_check(psi, weak_m, ks);

  Report r;
  r["cokernel_growth"] = {{"symbol", to_expression(a)}, {"table", std::move(table)}};
  r["noncompact_witness"] = {{"M", config.truncation}, {"unit_singular_values", units}, {"singular_values", sv}};
  r["weak_invertibility"] = {{"psi", to_expression(psi)}, {"M", weak_m}, {"k", ks}, {"r", residuals}};
  return r;
}

}  // namespace

void RunConfig::validate() const {
  if (!(vanish_tol > 0.0) || !(rank_tol > 0.0) || !(trace_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
  }
  if (truncation < 1) throw Error(ErrorCode::InvalidArgument, "truncation must be >= 1");
  if (grid < 8) throw Error(ErrorCode::InvalidArgument, "grid must be >= 8");
  if (max_cols == 0) throw Error(ErrorCode::InvalidArgument, "max_cols must be positive");
}

Report index_report(const IndexValue& topological, bool fredholm) {
  Report r;
  r["fredholm"] = fredholm;
  r["m"] = topological.m;
  r["theta"] = topological.theta.values;
  r["theta_names"] = topological.theta.tags;
  r["rationally_independent"] = topological.theta.rationally_independent;
  r["topological_index"] = topological.value();
  r["fredholm_index"] = topological.negated().value();
  return r;
}

IndexValue index_from_report(const nlohmann::json& j) {
  try {
    const auto values = j.at("theta").get<std::vector<double>>();
    auto names = j.value("theta_names", std::vector<std::string>{});
    IndexValue v;
    v.m = j.at("m").get<std::vector<std::int64_t>>();
    v.theta = ThetaWeights(values, std::move(names), j.value("rationally_independent", false));
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("index report: ") + e.what());
  }
}

Report error_report(const Error& e) {
  Report r;
  r["error"] = std::string(to_string(e.code()));
  r["detail"] = e.detail();
  return r;
}

CommandResult run_command(const std::string& cmd, const std::vector<std::string>& args, const RunConfig& config) {
  using Handler = Report (*)(const std::vector<std::string>&, const RunConfig&);
  static const std::pair<const char*, Handler> handlers[] = {
      {"wind", cmd_wind},         {"index2d", cmd_index2d},           {"indexnd", cmd_indexnd},
      {"decompose", cmd_decompose}, {"fredholm", cmd_fredholm},       {"matindex", cmd_matindex},
      {"oracle", cmd_oracle},     {"trace-verify", cmd_trace_verify}, {"tensor-verify", cmd_tensor_verify},
      {"demos", cmd_demos},
  };
  try {
    config.validate();
    for (const auto& [name, fn] : handlers) {
      if (cmd == name) return {0, fn(args, config)};
    }
    throw Error(ErrorCode::InvalidArgument, "unknown command '" + cmd + "'");
  } catch (const Error& e) {
    return {is_usage_error(e.code()) ? 1 : 2, error_report(e)};
  } catch (const std::exception& e) {
    return {2, Report{{"error", "InternalError"}, {"detail", e.what()}}};
  }
}

void emit_report(const Report& r, const std::optional<std::string>& path) {
  const std::string text = (r.is_null() ? Report::object() : r).dump(2) + "\n";
  if (!path || path->empty()) {
    std::cout << text << std::flush;
    if (!std::cout) throw Error(ErrorCode::IoError, "write to stdout failed");
    return;
  }
  std::ofstream out(*path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + *path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to " + *path + " failed");
}

}  // namespace qidx::cli
