#include "qidx/index.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/LU>

#include "fourier.hpp"
#include "qidx/error.hpp"

namespace qidx {
namespace {

struct NamedWeight {
  const char* name;
  double value;
};

constexpr NamedWeight kNamedWeights[] = {
    {"sqrt2", std::numbers::sqrt2},
    {"sqrt3", std::numbers::sqrt3},
    {"sqrt5", 2.23606797749978969641},
    {"sqrt7", 2.64575131106459059050},
    {"sqrt11", 3.31662479035539984911},
    {"sqrt13", 3.60555127546398929312},
    {"golden", std::numbers::phi},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::int64_t> first_primes(std::size_t count) {
  std::vector<std::int64_t> p;
  for (std::int64_t c = 2; p.size() < count; ++c) {
    if (std::none_of(p.begin(), p.end(), [c](std::int64_t q) { return c % q == 0; })) p.push_back(c);
  }
  return p;
}

void require_dim2(const LaurentPoly& a, const char* what) {
  if (a.dim() != 2) throw Error(ErrorCode::DimMismatch, std::string(what) + " needs a 2-D symbol");
}

}  // namespace

ThetaWeights::ThetaWeights(std::vector<double> v, std::vector<std::string> t, bool independent)
    : values(std::move(v)), tags(std::move(t)), rationally_independent(independent) {
  for (double x : values) {
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, "theta weights must be positive");
  }
  if (tags.empty()) tags.assign(values.size(), "");
  if (tags.size() != values.size()) throw Error(ErrorCode::LengthMismatch, "theta tags and values differ in length");
}

ThetaWeights ThetaWeights::quarter_plane() { return ThetaWeights({std::numbers::sqrt2, 1.0}, {"sqrt2", "1"}, true); }

ThetaWeights ThetaWeights::torus(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "torus dimension must be >= 1");
  std::vector<double> v;
  std::vector<std::string> t;
  for (std::int64_t p : first_primes(n - 1)) {
    v.push_back(std::sqrt(static_cast<double>(p)));
    t.push_back("sqrt" + std::to_string(p));
  }
  v.push_back(1.0);
  t.push_back("1");
  return ThetaWeights(std::move(v), std::move(t), true);
}

ThetaWeights ThetaWeights::parse(const std::string& text, std::size_t n, bool assert_irrational) {
  std::vector<double> v;
  std::vector<std::string> t;
  bool symbolic = true;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw Error(ErrorCode::InvalidArgument, "empty theta entry in '" + text + "'");
    const auto named = std::find_if(std::begin(kNamedWeights), std::end(kNamedWeights),
                                    [&](const NamedWeight& w) { return item == w.name; });
    if (named != std::end(kNamedWeights)) {
      v.push_back(named->value);
      t.push_back(item);
      continue;
    }
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(ErrorCode::InvalidArgument, "unrecognised theta entry '" + item + "'");
    v.push_back(x);
    t.push_back(item);
    // A literal 1 is the conventional last weight and does not spoil independence.
    if (x != 1.0) symbolic = false;
  }
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "empty theta list");
  if (v.size() + 1 == n) {
    v.push_back(1.0);
    t.push_back("1");
  }
  if (v.size() != n) {
    throw Error(ErrorCode::LengthMismatch,
                "theta has " + std::to_string(v.size()) + " weights, expected " + std::to_string(n));
  }
  // Repeated names (sqrt2, sqrt2) are rationally dependent; so are two literal 1s.
  const std::set<std::string> distinct(t.begin(), t.end());
  if (distinct.size() != t.size()) symbolic = false;
  return ThetaWeights(std::move(v), std::move(t), symbolic || assert_irrational);
}

double IndexValue::value() const {
  if (m.size() != theta.size()) throw Error(ErrorCode::LengthMismatch, "index vector and weights differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += theta.values[i] * static_cast<double>(m[i]);
  return s;
}

bool IndexValue::is_zero() const {
  return std::all_of(m.begin(), m.end(), [](std::int64_t x) { return x == 0; });
}

IndexValue IndexValue::negated() const {
  IndexValue r = *this;
  for (auto& x : r.m) {
    if (x == std::numeric_limits<std::int64_t>::min()) throw Error(ErrorCode::ExponentOverflow, "index negation");
    x = -x;
  }
  return r;
}

IndexValue operator+(const IndexValue& a, const IndexValue& b) {
  if (a.m.size() != b.m.size() || a.theta.values != b.theta.values) {
    throw Error(ErrorCode::LengthMismatch, "index values live over different weights");
  }
  IndexValue r = a;
  for (std::size_t i = 0; i < r.m.size(); ++i) {
    if (__builtin_add_overflow(r.m[i], b.m[i], &r.m[i])) throw Error(ErrorCode::ExponentOverflow, "index sum");
  }
  return r;
}

MatrixSymbol::MatrixSymbol(std::size_t size) : size_(size), entries_(size * size, LaurentPoly(2)) {
  if (size == 0) throw Error(ErrorCode::InvalidArgument, "matrix symbol must be at least 1x1");
}

MatrixSymbol::MatrixSymbol(std::size_t size, std::vector<LaurentPoly> entries) : size_(size), entries_(std::move(entries)) {
  if (size == 0) throw Error(ErrorCode::InvalidArgument, "matrix symbol must be at least 1x1");
  if (entries_.size() != size * size) throw Error(ErrorCode::LengthMismatch, "matrix symbol needs size^2 entries");
  for (const auto& e : entries_) require_dim2(e, "matrix symbol entry");
}

MatrixSymbol MatrixSymbol::identity(std::size_t size) {
  MatrixSymbol m(size);
  for (std::size_t i = 0; i < size; ++i) m(i, i) = LaurentPoly::constant(2, 1.0);
  return m;
}

MatrixSymbol MatrixSymbol::diagonal(std::vector<LaurentPoly> entries) {
  MatrixSymbol m(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    require_dim2(entries[i], "matrix symbol entry");
    m(i, i) = std::move(entries[i]);
  }
  return m;
}

MatrixSymbol operator*(const MatrixSymbol& a, const MatrixSymbol& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimMismatch, "matrix symbols differ in size");
  MatrixSymbol r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      for (std::size_t k = 0; k < a.size(); ++k) r(i, j) += a(i, k) * b(k, j);
    }
  }
  return r;
}

bool is_fredholm_T2(const LaurentPoly& a, double vanish_tol) {
  require_dim2(a, "is_fredholm_T2");
  return min_modulus(a) > vanish_tol;
}

IndexValue topological_index_T2(const LaurentPoly& a, const ThetaWeights& theta, double vanish_tol) {
  require_dim2(a, "topological_index_T2");
  if (theta.size() != 2) throw Error(ErrorCode::LengthMismatch, "quarter-plane index needs two weights");
  const DecompositionResult d = decompose_torus2(a, kDefaultDecompositionGrid, kDefaultDecompositionGrid, vanish_tol);
  return {{d.m, d.n}, theta};
}

IndexValue fredholm_index_T2(const LaurentPoly& a, const ThetaWeights& theta, double vanish_tol) {
  return topological_index_T2(a, theta, vanish_tol).negated();
}

bool zero_index_iff_exponential(const LaurentPoly& a, const ThetaWeights& theta, double vanish_tol) {
  if (!theta.rationally_independent) {
    throw Error(ErrorCode::ThetaNotIrrational, "zero index only decides m = 0 for rationally independent weights");
  }
  return topological_index_T2(a, theta, vanish_tol).is_zero();
}

IndexValue index_TN(const LaurentPoly& a, const ThetaWeights& theta, double vanish_tol) {
  if (theta.size() != static_cast<std::size_t>(a.dim())) {
    throw Error(ErrorCode::LengthMismatch, "need one weight per torus coordinate");
  }
  if (min_modulus(a) <= vanish_tol) throw Error(ErrorCode::NotInvertibleOnTorus, "symbol vanishes on the torus");
  return {winding_vector_n(a, vanish_tol), theta};
}

namespace {

LaurentPoly cofactor_det(const MatrixSymbol& phi, std::vector<std::size_t>& cols, std::size_t row) {
  if (cols.size() == 1) return phi(row, cols[0]);
  LaurentPoly total(2);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const LaurentPoly& entry = phi(row, cols[c]);
    if (entry.is_zero()) continue;
    const std::size_t col = cols[c];
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(c));
    LaurentPoly minor = entry * cofactor_det(phi, cols, row + 1);
    cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(c), col);
    if (c % 2 == 0) {
      total += minor;
    } else {
      total -= minor;
    }
  }
  return total;
}

LaurentPoly interpolated_det(const MatrixSymbol& phi) {
  const std::size_t n = phi.size();
  // Degree bound: each row contributes at most its widest entry range per axis.
  std::array<std::int64_t, 2> lo{0, 0}, hi{0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    for (int axis = 0; axis < 2; ++axis) {
      std::int64_t row_lo = std::numeric_limits<std::int64_t>::max(), row_hi = std::numeric_limits<std::int64_t>::min();
      for (std::size_t j = 0; j < n; ++j) {
        if (phi(i, j).is_zero()) continue;
        const auto [l, h] = phi(i, j).degree_range(axis);
        row_lo = std::min(row_lo, l);
        row_hi = std::max(row_hi, h);
      }
      if (row_lo > row_hi) return LaurentPoly(2);  // zero row
      lo[static_cast<std::size_t>(axis)] += row_lo;
      hi[static_cast<std::size_t>(axis)] += row_hi;
    }
  }
  std::vector<std::size_t> shape(2);
  double points = 1.0;
  for (std::size_t axis = 0; axis < 2; ++axis) {
    shape[axis] = static_cast<std::size_t>(hi[axis] - lo[axis] + 1);
    points *= static_cast<double>(shape[axis]);
  }
  if (points * static_cast<double>(n * n) > static_cast<double>(kMaxGridPoints)) {
    throw Error(ErrorCode::SizeLimit, "determinant interpolation grid too large");
  }

  std::vector<GridSamples> grids;
  grids.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) grids.push_back(evaluate_grid(phi(i, j), shape));
  }
  GridSamples det(shape, std::vector<Complex>(shape[0] * shape[1]));
  double scale = 0.0;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < det.size(); ++p) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = grids[i * n + j].values[p];
      }
    }
    det.values[p] = m.partialPivLu().determinant();
    scale = std::max(scale, std::abs(det.values[p]));
  }
  const std::vector<Complex> c = grid_coefficients(det);
  LaurentPoly::TermMap terms;
  for (std::int64_t e0 = lo[0]; e0 <= hi[0]; ++e0) {
    for (std::int64_t e1 = lo[1]; e1 <= hi[1]; ++e1) {
      terms.emplace(Exponent{e0, e1}, c[detail::fold(e0, shape[0]) * shape[1] + detail::fold(e1, shape[1])]);
    }
  }
  return LaurentPoly(2, std::move(terms)).prune(1e-12 * std::max(scale, 1.0));
}

}  // namespace

LaurentPoly matrix_det(const MatrixSymbol& phi) {
  if (phi.size() <= kMaxCofactorSize) {
    std::vector<std::size_t> cols(phi.size());
    for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
    return cofactor_det(phi, cols, 0);
  }
  return interpolated_det(phi);
}

IndexValue fredholm_index_matrix(const MatrixSymbol& phi, const ThetaWeights& theta, double vanish_tol) {
  const LaurentPoly det = matrix_det(phi);
  if (det.is_zero() || min_modulus(det) <= vanish_tol) {
    throw Error(ErrorCode::NotInvertibleOnTorus, "det of the matrix symbol vanishes on the torus");
  }
  return fredholm_index_T2(det, theta, vanish_tol);
}

}  // namespace qidx
