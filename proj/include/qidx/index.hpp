#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qidx/symbol.hpp"
#include "qidx/winding.hpp"

namespace qidx {

/// Positive weights θ_i attached to the torus coordinates.
///
/// Floating-point numbers carry no number-theoretic information, so whether the
/// weights are rationally independent is a declared property, not a computed
/// one. Only when it is declared does a zero index decide m = 0.
struct ThetaWeights {
  std::vector<double> values;
  std::vector<std::string> tags;
  bool rationally_independent = false;

  ThetaWeights() = default;
  ThetaWeights(std::vector<double> values, std::vector<std::string> tags, bool rationally_independent);

  std::size_t size() const noexcept { return values.size(); }

  /// (√2, 1), flagged independent.
  static ThetaWeights quarter_plane();
  /// (√2, √3, √5, ..., 1): square roots of the first N-1 primes, then 1.
  static ThetaWeights torus(std::size_t n);
  /// Comma-separated names ("sqrt2", "sqrt3", "sqrt5", "sqrt7", "golden") or
  /// decimals. Names mark the weights independent; decimals do not unless
  /// assert_irrational. With a single entry and n == 2 the weights are (θ, 1).
  static ThetaWeights parse(const std::string& text, std::size_t n, bool assert_irrational = false);
};

/// Σ θ_i m_i, carried exactly as the integer vector m.
struct IndexValue {
  std::vector<std::int64_t> m;
  ThetaWeights theta;

  double value() const;
  bool is_zero() const;
  IndexValue negated() const;
  /// Index of a product symbol: componentwise sum of the exponent vectors.
  friend IndexValue operator+(const IndexValue& a, const IndexValue& b);
};

/// 2×2 or larger square matrix of 2-D Laurent polynomials.
class MatrixSymbol {
 public:
  explicit MatrixSymbol(std::size_t size);
  MatrixSymbol(std::size_t size, std::vector<LaurentPoly> entries);

  static MatrixSymbol identity(std::size_t size);
  static MatrixSymbol diagonal(std::vector<LaurentPoly> entries);

  std::size_t size() const noexcept { return size_; }
  const LaurentPoly& operator()(std::size_t i, std::size_t j) const { return entries_[i * size_ + j]; }
  LaurentPoly& operator()(std::size_t i, std::size_t j) { return entries_[i * size_ + j]; }

  friend MatrixSymbol operator*(const MatrixSymbol& a, const MatrixSymbol& b);

 private:
  std::size_t size_;
  std::vector<LaurentPoly> entries_;
};

inline constexpr std::size_t kMaxCofactorSize = 6;

bool is_fredholm_T2(const LaurentPoly& a, double vanish_tol = kDefaultVanishTol);

IndexValue topological_index_T2(const LaurentPoly& a, const ThetaWeights& theta = ThetaWeights::quarter_plane(),
                                double vanish_tol = kDefaultVanishTol);
IndexValue fredholm_index_T2(const LaurentPoly& a, const ThetaWeights& theta = ThetaWeights::quarter_plane(),
                             double vanish_tol = kDefaultVanishTol);

/// True iff the exponent pair is (0, 0), i.e. a = exp(ψ) for a continuous ψ.
/// Throws ThetaNotIrrational unless theta is declared rationally independent.
bool zero_index_iff_exponential(const LaurentPoly& a, const ThetaWeights& theta = ThetaWeights::quarter_plane(),
                                double vanish_tol = kDefaultVanishTol);

/// Topological index on 𝕋^N; the Fredholm index is its negation.
IndexValue index_TN(const LaurentPoly& a, const ThetaWeights& theta, double vanish_tol = kDefaultVanishTol);

/// Cofactor expansion up to kMaxCofactorSize, evaluation/interpolation beyond.
LaurentPoly matrix_det(const MatrixSymbol& phi);

IndexValue fredholm_index_matrix(const MatrixSymbol& phi, const ThetaWeights& theta = ThetaWeights::quarter_plane(),
                                 double vanish_tol = kDefaultVanishTol);

}  // namespace qidx
