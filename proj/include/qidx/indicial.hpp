#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "qidx/symbol.hpp"

namespace qidx {

/// Finite matrix of [P, a] on ℓ²(ℤ), P the projection onto indices >= 0.
/// Entry (j, k) = â(j - k) (1_{j>=0} - 1_{k>=0}); the factor 2 of dφ = [F, φ]
/// is left to the formula layer.
class CommutatorMatrix {
 public:
  using Index = std::pair<std::int64_t, std::int64_t>;
  using Entries = std::map<Index, Complex>;

  CommutatorMatrix() = default;
  explicit CommutatorMatrix(Entries entries);

  const Entries& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }
  Complex at(std::int64_t row, std::int64_t col) const;

  /// Always zero: nonzero entries sit off the diagonal.
  Complex trace() const;

  /// Smallest index window [lo, hi] covering every row and column in the support.
  std::pair<std::int64_t, std::int64_t> support_window() const;
  /// Dense block on rows and columns lo..hi.
  Eigen::MatrixXcd dense(std::int64_t lo, std::int64_t hi) const;
  std::vector<double> singular_values() const;
  std::size_t rank(double tol = 1e-10) const;

 private:
  Entries entries_;
};

CommutatorMatrix commutator_P(const LaurentPoly& a);

/// tr(a^{-1}[P, a]) = ½ tr(a^{-1} da); an integer (the winding number) up to tol.
double trace_winding_1d(const LaurentPoly& a, double tol = 1e-9, double vanish_tol = kDefaultVanishTol);

/// One pointwise-evaluable piece of a word factor.
struct SymbolAtom {
  enum class Kind { Poly, Reciprocal, Exponential };
  Kind kind = Kind::Poly;
  LaurentPoly symbol;

  Complex evaluate(double angle, double vanish_tol = kDefaultVanishTol) const;
};

/// Product of atoms; the constant 1 is the empty product.
class SymbolFactor {
 public:
  SymbolFactor() = default;
  static SymbolFactor poly(LaurentPoly a);
  static SymbolFactor reciprocal(LaurentPoly a);
  static SymbolFactor exponential(LaurentPoly a);

  const std::vector<SymbolAtom>& atoms() const noexcept { return atoms_; }
  Complex evaluate(double angle) const;

  friend SymbolFactor operator*(const SymbolFactor& a, const SymbolFactor& b);

 private:
  std::vector<SymbolAtom> atoms_;
};

/// φ_0 P φ_1 P ... P φ_n with n >= 0 projections.
class Word {
 public:
  Word() : factors_(1) {}
  explicit Word(std::vector<SymbolFactor> factors);

  static Word projection() { return Word({SymbolFactor{}, SymbolFactor{}}); }
  static Word symbol(SymbolFactor f) { return Word({std::move(f)}); }

  const std::vector<SymbolFactor>& factors() const noexcept { return factors_; }
  std::size_t projections() const noexcept { return factors_.size() - 1; }

  /// Concatenation; the two adjoining symbol factors multiply.
  friend Word operator*(const Word& a, const Word& b);

 private:
  std::vector<SymbolFactor> factors_;
};

struct FormalSum {
  std::vector<std::pair<Complex, Word>> terms;

  FormalSum& add(Complex weight, Word w) {
    terms.emplace_back(weight, std::move(w));
    return *this;
  }
};

FormalSum commutator(const Word& a, const Word& b);

/// Point-evaluation character: τ_λ(φ_0 P ... P φ_n) = Π φ_i(λ), with τ(P) = 1.
Complex char_eval(const Word& w, double angle);
Complex char_eval(const FormalSum& s, double angle);

/// A trace-class factor built from [P, a], carrying its exact finite trace.
/// Such factors lie in the commutator ideal, so every character kills them.
class TraceClassFactor {
 public:
  /// [P, a].
  static TraceClassFactor commutator(const LaurentPoly& a);
  /// a^{-1}[P, a]; its trace is the winding number of a.
  static TraceClassFactor log_derivative(const LaurentPoly& a, double tol = 1e-9);

  const CommutatorMatrix& matrix() const noexcept { return matrix_; }
  Complex trace() const noexcept { return trace_; }

 private:
  TraceClassFactor(CommutatorMatrix m, Complex trace) : matrix_(std::move(m)), trace_(trace) {}
  CommutatorMatrix matrix_;
  Complex trace_;
};

using TensorFactor = std::variant<TraceClassFactor, Word>;

struct ClassifiedTensor {
  TensorFactor left;
  TensorFactor right;
};

struct ClassifiedSum {
  std::vector<std::pair<Complex, ClassifiedTensor>> terms;
};

using Theta2 = std::array<double, 2>;
using CharacterPoints = std::array<double, 2>;

/// θ_1 (tr ⊗ τ_{λ2}) + θ_2 (τ_{λ1} ⊗ tr) on elementary tensors, extended linearly.
/// Throws Unclassifiable for a summand with no trace-class side.
Complex composite_trace(const ClassifiedTensor& t, Theta2 theta, CharacterPoints points);
Complex composite_trace(const ClassifiedSum& s, Theta2 theta, CharacterPoints points);

/// (a ⊗ b)^{-1} [P ⊗ P, a ⊗ b] = a^{-1}[P, a] ⊗ b^{-1} P b + P ⊗ b^{-1}[P, b].
ClassifiedSum log_derivative_expansion(const LaurentPoly& a, const LaurentPoly& b, double tol = 1e-9);

struct TensorIndexCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs: composite trace of the expansion above; rhs: θ_1 wn(a) + θ_2 wn(b).
TensorIndexCheck tensor_index_verify(const LaurentPoly& a, const LaurentPoly& b, Theta2 theta,
                                     CharacterPoints points = {0.0, 0.0});

double tensor_index_n(std::span<const double> values, std::span<const double> theta);

}  // namespace qidx
