#include "qidx/indicial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "qidx/error.hpp"
#include "qidx/winding.hpp"

namespace qidx {

CommutatorMatrix::CommutatorMatrix(Entries entries) : entries_(std::move(entries)) {
  for (auto it = entries_.begin(); it != entries_.end();) {
    it = it->second == Complex{} ? entries_.erase(it) : std::next(it);
  }
}

Complex CommutatorMatrix::at(std::int64_t row, std::int64_t col) const {
  auto it = entries_.find({row, col});
  return it == entries_.end() ? Complex{} : it->second;
}

Complex CommutatorMatrix::trace() const {
  Complex t{};
  for (const auto& [idx, v] : entries_) {
    if (idx.first == idx.second) t += v;
  }
  return t;
}

std::pair<std::int64_t, std::int64_t> CommutatorMatrix::support_window() const {
  if (entries_.empty()) return {0, -1};
  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& [idx, v] : entries_) {
    lo = std::min({lo, idx.first, idx.second});
    hi = std::max({hi, idx.first, idx.second});
  }
  return {lo, hi};
}

Eigen::MatrixXcd CommutatorMatrix::dense(std::int64_t lo, std::int64_t hi) const {
  const Eigen::Index n = hi >= lo ? hi - lo + 1 : 0;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [idx, v] : entries_) {
    if (idx.first >= lo && idx.first <= hi && idx.second >= lo && idx.second <= hi) {
      m(idx.first - lo, idx.second - lo) = v;
    }
  }
  return m;
}

std::vector<double> CommutatorMatrix::singular_values() const {
  const auto [lo, hi] = support_window();
  if (hi < lo) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense(lo, hi));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t CommutatorMatrix::rank(double tol) const {
  const auto s = singular_values();
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [tol](double v) { return v > tol; }));
}

CommutatorMatrix commutator_P(const LaurentPoly& a) {
  if (a.dim() != 1) throw Error(ErrorCode::DimMismatch, "commutator_P needs a 1-D symbol");
  CommutatorMatrix::Entries out;
  for (const auto& [k, c] : a.terms()) {
    const std::int64_t s = k[0];
    // Nonzero only where exactly one of row, col is >= 0 and row - col = s.
    if (s > 0) {
      for (std::int64_t col = -s; col < 0; ++col) out.emplace(CommutatorMatrix::Index{col + s, col}, c);
    } else if (s < 0) {
      for (std::int64_t col = 0; col < -s; ++col) out.emplace(CommutatorMatrix::Index{col + s, col}, -c);
    }
  }
  return CommutatorMatrix(std::move(out));
}

namespace {

Complex log_derivative_trace(const LaurentPoly& a, const CommutatorMatrix& comm, double tol, double vanish_tol) {
  if (comm.empty()) {
    if (min_modulus(a) <= vanish_tol) throw Error(ErrorCode::NotInvertibleOnTorus, "symbol vanishes on the circle");
    return {};
  }
  const double recip_tol = tol / (10.0 * static_cast<double>(comm.size()));
  const LaurentPoly inv = reciprocal_coeffs(a, a.bandwidth(), recip_tol, vanish_tol);
  // tr(a^{-1} C) = Σ_{(j,k)} (a^{-1})_{kj} C_{jk}, and (a^{-1})_{kj} = inv^(k - j).
  Complex sum{};
  for (const auto& [idx, v] : comm.entries()) sum += inv.coeff(idx.second - idx.first) * v;
  return sum;
}

}  // namespace

double trace_winding_1d(const LaurentPoly& a, double tol, double vanish_tol) {
  if (a.dim() != 1) throw Error(ErrorCode::DimMismatch, "trace_winding_1d needs a 1-D symbol");
  const Complex t = log_derivative_trace(a, commutator_P(a), tol, vanish_tol);
  const double nearest = std::round(t.real());
  if (std::abs(t - Complex(nearest)) > tol) {
    throw Error(ErrorCode::NonIntegerTrace, "trace " + std::to_string(t.real()) + "+" + std::to_string(t.imag()) + "i");
  }
  return t.real();
}

Complex SymbolAtom::evaluate(double angle, double vanish_tol) const {
  const Complex v = symbol.evaluate(angle);
  switch (kind) {
    case Kind::Poly:
      return v;
    case Kind::Reciprocal:
      if (std::abs(v) <= vanish_tol) throw Error(ErrorCode::NotInvertibleOnTorus, "reciprocal factor vanishes");
      return 1.0 / v;
    case Kind::Exponential:
      return std::exp(v);
  }
  return v;
}

SymbolFactor SymbolFactor::poly(LaurentPoly a) {
  SymbolFactor f;
  f.atoms_.push_back({SymbolAtom::Kind::Poly, std::move(a)});
  return f;
}

SymbolFactor SymbolFactor::reciprocal(LaurentPoly a) {
  SymbolFactor f;
  f.atoms_.push_back({SymbolAtom::Kind::Reciprocal, std::move(a)});
  return f;
}

SymbolFactor SymbolFactor::exponential(LaurentPoly a) {
  SymbolFactor f;
  f.atoms_.push_back({SymbolAtom::Kind::Exponential, std::move(a)});
  return f;
}

Complex SymbolFactor::evaluate(double angle) const {
  Complex v = 1.0;
  for (const auto& atom : atoms_) v *= atom.evaluate(angle);
  return v;
}

SymbolFactor operator*(const SymbolFactor& a, const SymbolFactor& b) {
  SymbolFactor r = a;
  r.atoms_.insert(r.atoms_.end(), b.atoms_.begin(), b.atoms_.end());
  return r;
}

Word::Word(std::vector<SymbolFactor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw Error(ErrorCode::InvalidArgument, "a word needs at least one symbol factor");
}

Word operator*(const Word& a, const Word& b) {
  std::vector<SymbolFactor> f(a.factors_.begin(), a.factors_.end() - 1);
  f.push_back(a.factors_.back() * b.factors_.front());
  f.insert(f.end(), b.factors_.begin() + 1, b.factors_.end());
  return Word(std::move(f));
}

FormalSum commutator(const Word& a, const Word& b) {
  FormalSum s;
  s.add(1.0, a * b).add(-1.0, b * a);
  return s;
}

Complex char_eval(const Word& w, double angle) {
  Complex v = 1.0;
  for (const auto& f : w.factors()) v *= f.evaluate(angle);
  return v;
}

Complex char_eval(const FormalSum& s, double angle) {
  Complex v{};
  for (const auto& [weight, w] : s.terms) v += weight * char_eval(w, angle);
  return v;
}

TraceClassFactor TraceClassFactor::commutator(const LaurentPoly& a) {
  CommutatorMatrix m = commutator_P(a);
  const Complex t = m.trace();
  return TraceClassFactor(std::move(m), t);
}

TraceClassFactor TraceClassFactor::log_derivative(const LaurentPoly& a, double tol) {
  CommutatorMatrix m = commutator_P(a);
  const Complex t = log_derivative_trace(a, m, tol, kDefaultVanishTol);
  return TraceClassFactor(std::move(m), t);
}

namespace {

bool is_trace_class(const TensorFactor& f) { return std::holds_alternative<TraceClassFactor>(f); }

Complex character(const TensorFactor& f, double angle) {
  if (is_trace_class(f)) return {};
  return char_eval(std::get<Word>(f), angle);
}

Complex trace_of(const TensorFactor& f) { return std::get<TraceClassFactor>(f).trace(); }

}  // namespace

Complex composite_trace(const ClassifiedTensor& t, Theta2 theta, CharacterPoints points) {
  if (!is_trace_class(t.left) && !is_trace_class(t.right)) {
    throw Error(ErrorCode::Unclassifiable, "elementary tensor of two bounded words has no finite trace");
  }
  // (tr ⊗ τ): a trace-class right factor lies in ker τ, so a bounded left side gives 0.
  const Complex first = is_trace_class(t.left) ? trace_of(t.left) * character(t.right, points[1]) : Complex{};
  const Complex second = is_trace_class(t.right) ? character(t.left, points[0]) * trace_of(t.right) : Complex{};
  return theta[0] * first + theta[1] * second;
}

Complex composite_trace(const ClassifiedSum& s, Theta2 theta, CharacterPoints points) {
  Complex total{};
  for (const auto& [weight, t] : s.terms) total += weight * composite_trace(t, theta, points);
  return total;
}

ClassifiedSum log_derivative_expansion(const LaurentPoly& a, const LaurentPoly& b, double tol) {
  const Word conjugated_projection({SymbolFactor::reciprocal(b), SymbolFactor::poly(b)});
  ClassifiedSum s;
  s.terms.push_back({1.0, {TraceClassFactor::log_derivative(a, tol), conjugated_projection}});
  s.terms.push_back({1.0, {Word::projection(), TraceClassFactor::log_derivative(b, tol)}});
  return s;
}

TensorIndexCheck tensor_index_verify(const LaurentPoly& a, const LaurentPoly& b, Theta2 theta, CharacterPoints points) {
  const Complex lhs = composite_trace(log_derivative_expansion(a, b), theta, points);
  const double rhs = theta[0] * static_cast<double>(winding_exact(a)) + theta[1] * static_cast<double>(winding_exact(b));
  return {lhs.real(), rhs};
}

double tensor_index_n(std::span<const double> values, std::span<const double> theta) {
  if (values.size() != theta.size()) throw Error(ErrorCode::LengthMismatch, "index values and weights differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += theta[i] * values[i];
  return s;
}

}  // namespace qidx
