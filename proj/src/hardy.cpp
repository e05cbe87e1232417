#include "qidx/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "qidx/error.hpp"

namespace qidx {
namespace {

/// All multi-indices of the box {0..hi_0} × ... in row-major order.
std::vector<Exponent> box(const std::vector<std::int64_t>& hi) {
  std::vector<Exponent> out;
  if (std::any_of(hi.begin(), hi.end(), [](std::int64_t h) { return h < 0; })) return out;
  Exponent idx(hi.size(), 0);
  for (;;) {
    out.push_back(idx);
    std::size_t axis = hi.size();
    while (axis-- > 0) {
      if (idx[axis] < hi[axis]) {
        ++idx[axis];
        break;
      }
      idx[axis] = 0;
    }
    if (axis == static_cast<std::size_t>(-1)) return out;
  }
}

std::size_t box_position(const Exponent& idx, const std::vector<std::int64_t>& hi) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) pos = pos * static_cast<std::size_t>(hi[i] + 1) + static_cast<std::size_t>(idx[i]);
  return pos;
}

bool in_box(const Exponent& idx, const std::vector<std::int64_t>& hi) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 0 || idx[i] > hi[i]) return false;
  }
  return true;
}

ToeplitzSection build_section(const LaurentPoly& a, std::int64_t truncation, std::size_t max_cols) {
  if (truncation < 0) throw Error(ErrorCode::InvalidArgument, "truncation must be >= 0");
  const auto d = static_cast<std::size_t>(a.dim());
  const double ncols = std::pow(static_cast<double>(truncation + 1), static_cast<double>(d));
  if (ncols > static_cast<double>(max_cols)) {
    throw Error(ErrorCode::SizeLimit, std::to_string(static_cast<std::size_t>(ncols)) + " columns exceed the limit of " +
                                          std::to_string(max_cols));
  }

  std::vector<std::int64_t> col_hi(d, truncation), row_hi(d);
  for (std::size_t i = 0; i < d; ++i) row_hi[i] = truncation + a.degree_range(static_cast<int>(i)).second;
  if (a.is_zero()) row_hi = col_hi;

  ToeplitzSection s;
  s.symbol = a;
  s.truncation = truncation;
  s.cols = box(col_hi);
  s.rows = box(row_hi);
  s.symbol_band = a.bandwidth();
  s.data = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(s.rows.size()), static_cast<Eigen::Index>(s.cols.size()));
  Exponent target(d);
  for (std::size_t c = 0; c < s.cols.size(); ++c) {
    for (const auto& [k, coeff] : a.terms()) {
      for (std::size_t i = 0; i < d; ++i) target[i] = s.cols[c][i] + k[i];
      if (in_box(target, row_hi)) {
        s.data(static_cast<Eigen::Index>(box_position(target, row_hi)), static_cast<Eigen::Index>(c)) = coeff;
      }
    }
  }
  return s;
}

struct KernelCount {
  std::size_t kernel = 0;
  double gap = std::numeric_limits<double>::infinity();
  double sigma_min = 0.0;
};

KernelCount numerical_kernel(const Eigen::MatrixXcd& m, double rank_tol) {
  KernelCount out;
  const auto cols = static_cast<std::size_t>(m.cols());
  if (m.rows() == 0 || m.cols() == 0) {
    out.kernel = cols;
    return out;
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  out.sigma_min = m.rows() >= m.cols() ? s(s.size() - 1) : 0.0;
  const double cutoff = rank_tol * s(0);
  Eigen::Index kept = 0;
  while (kept < s.size() && s(kept) >= cutoff && s(kept) > 0.0) ++kept;
  out.kernel = cols - static_cast<std::size_t>(kept);
  if (kept > 0 && kept < s.size() && s(kept) > 0.0) out.gap = s(kept - 1) / s(kept);
  return out;
}

}  // namespace

ToeplitzSection toeplitz_section_1d(const LaurentPoly& a, std::int64_t truncation) {
  if (a.dim() != 1) throw Error(ErrorCode::DimMismatch, "toeplitz_section_1d needs a 1-D symbol");
  return build_section(a, truncation, std::numeric_limits<std::size_t>::max());
}

ToeplitzSection toeplitz_section_2d(const LaurentPoly& a, std::int64_t truncation, std::size_t max_cols) {
  if (a.dim() != 2) throw Error(ErrorCode::DimMismatch, "toeplitz_section_2d needs a 2-D symbol");
  return build_section(a, truncation, max_cols);
}

ToeplitzSection toeplitz_section(const LaurentPoly& a, std::int64_t truncation, std::size_t max_cols) {
  switch (a.dim()) {
    case 1: return build_section(a, truncation, max_cols);
    case 2: return toeplitz_section_2d(a, truncation, max_cols);
    default: throw Error(ErrorCode::DimMismatch, "sections are built for 1-D and 2-D symbols");
  }
}

Eigen::MatrixXcd square_section(const LaurentPoly& a, std::int64_t truncation) {
  const auto d = static_cast<std::size_t>(a.dim());
  const std::vector<std::int64_t> hi(d, truncation);
  const std::vector<Exponent> idx = box(hi);
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  Exponent target(d);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (const auto& [k, coeff] : a.terms()) {
      for (std::size_t i = 0; i < d; ++i) target[i] = idx[static_cast<std::size_t>(c)][i] + k[i];
      if (in_box(target, hi)) m(static_cast<Eigen::Index>(box_position(target, hi)), c) = coeff;
    }
  }
  return m;
}

KernelReport kernel_cokernel_oracle(const ToeplitzSection& s, double rank_tol, std::size_t max_cols) {
  if (!(rank_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "rank_tol must be positive");
  const KernelCount direct = numerical_kernel(s.data, rank_tol);
  const ToeplitzSection adjoint = build_section(s.symbol.conj(), s.truncation, max_cols);
  const KernelCount adj = numerical_kernel(adjoint.data, rank_tol);

  KernelReport r;
  r.ker_dim = direct.kernel;
  r.coker_dim = adj.kernel;
  r.sigma_gap = std::min(direct.gap, adj.gap);
  r.sigma_min = direct.sigma_min;
  if (r.sigma_gap < 10.0) {
    throw Error(ErrorCode::AmbiguousRank, "singular value gap " + std::to_string(r.sigma_gap));
  }
  return r;
}

namespace {

double partial_inverse_trace(const LaurentPoly& a, const LaurentPoly& inv, std::int64_t truncation) {
  // The {0..M} block of T_a T_b and T_b T_a only touches intermediate indices
  // up to M + bandwidth(a), so a square section of that size is exact.
  const std::int64_t n = truncation + a.bandwidth();
  const Eigen::MatrixXcd ta = square_section(a, n);
  const Eigen::MatrixXcd tb = square_section(inv, n);
  Complex t{};
  for (Eigen::Index j = 0; j <= truncation; ++j) {
    t += (ta.row(j) * tb.col(j)).value() - (tb.row(j) * ta.col(j)).value();
  }
  return t.real();
}

}  // namespace

double partial_inverse_index_1d(const LaurentPoly& a, std::int64_t truncation, std::int64_t window,
                                std::int64_t max_truncation) {
  if (a.dim() != 1) throw Error(ErrorCode::DimMismatch, "partial_inverse_index_1d needs a 1-D symbol");
  std::int64_t m = std::max(truncation, a.bandwidth());
  std::int64_t w = std::max(window, a.bandwidth());
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (; m <= max_truncation; m *= 2, w *= 2) {
    const LaurentPoly inv = reciprocal_coeffs(a, w, 1e-12);
    const double value = partial_inverse_trace(a, inv, m);
    if (std::abs(value - prev) < 1e-8) return value;
    prev = value;
    if (m == 0) m = 1;
    if (w == 0) w = 1;
  }
  throw Error(ErrorCode::NoConvergence, "partial-inverse trace did not settle");
}

std::vector<double> noncompact_witness(std::int64_t truncation) {
  if (truncation < 0) throw Error(ErrorCode::InvalidArgument, "truncation must be >= 0");
  const auto n = static_cast<Eigen::Index>(truncation + 2);
  // [P, z] on {-1..M}: the single entry (0, -1) = 1.
  Eigen::MatrixXd commutator = Eigen::MatrixXd::Zero(n, n);
  commutator(1, 0) = 1.0;
  const Eigen::MatrixXd projection = Eigen::MatrixXd::Identity(n - 1, n - 1);
  const Eigen::MatrixXd m = Eigen::kroneckerProduct(commutator, projection);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1e-12) out.push_back(svd.singularValues()(i));
  }
  return out;
}

std::vector<double> weak_invertibility_check(const LaurentPoly& psi, std::int64_t truncation,
                                             std::span<const std::int64_t> ks) {
  if (psi.dim() != 2) throw Error(ErrorCode::DimMismatch, "weak_invertibility_check needs a 2-D symbol");
  const std::int64_t limit = truncation - psi.bandwidth();
  for (std::int64_t k : ks) {
    if (k < 0 || k > limit) throw Error(ErrorCode::InvalidArgument, "diagonal index outside [0, M - bandwidth]");
  }
  const Eigen::MatrixXcd symbol_of_exp = square_section(exp_series(psi, 1e-12), truncation);
  const Eigen::MatrixXcd exp_of_section = square_section(psi, truncation).exp();
  const Eigen::MatrixXcd diff = symbol_of_exp - exp_of_section;

  std::vector<double> r;
  const std::vector<std::int64_t> hi(2, truncation);
  for (std::int64_t k : ks) r.push_back(diff.col(static_cast<Eigen::Index>(box_position({k, k}, hi))).norm());
  return r;
}

std::vector<std::size_t> cokernel_growth_demo(const LaurentPoly& a, std::span<const std::int64_t> truncations,
                                              double rank_tol, std::size_t max_cols) {
  if (a.dim() != 2) throw Error(ErrorCode::DimMismatch, "cokernel_growth_demo needs a 2-D symbol");
  if (min_modulus(a) <= kDefaultVanishTol) throw Error(ErrorCode::NotInvertibleOnTorus, "symbol vanishes on the torus");
  std::vector<std::size_t> out;
  for (std::int64_t m : truncations) {
    out.push_back(kernel_cokernel_oracle(toeplitz_section_2d(a, m, max_cols), rank_tol, max_cols).coker_dim);
  }
  return out;
}

void write_section(std::ostream& os, const ToeplitzSection& s) {
  os << s.data.rows() << ' ' << s.data.cols() << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < s.data.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.data.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%s%.17g %.17g", j ? " " : "", s.data(i, j).real(), s.data(i, j).imag());
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace qidx
