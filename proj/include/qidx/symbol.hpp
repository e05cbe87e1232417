#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qidx {

using Complex = std::complex<double>;
using Exponent = std::vector<std::int64_t>;

/// Below this modulus a symbol is treated as vanishing on the torus.
inline constexpr double kDefaultVanishTol = 1e-9;

/// Largest evaluation grid (total points) any sampling routine will build.
inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

/// Finitely supported Fourier series on the d-torus:
///   a(λ) = Σ_k c_k exp(i <k, λ>),  k ∈ ℤ^d.
///
/// The term map is always canonical: no coefficient that is exactly zero is
/// stored, and every coefficient is finite. Values are immutable once built;
/// the compound-assignment operators rebuild the map.
class LaurentPoly {
 public:
  using TermMap = std::map<Exponent, Complex>;

  explicit LaurentPoly(int dim = 1);
  LaurentPoly(int dim, TermMap terms);

  static LaurentPoly constant(int dim, Complex c);
  static LaurentPoly monomial(Exponent k, Complex c = 1.0);
  /// z_axis^power on the dim-torus; axis is zero based.
  static LaurentPoly variable(int dim, int axis, std::int64_t power = 1);
  /// 1-D polynomial with coefficients[i] at exponent lowest + i.
  static LaurentPoly from_coeffs(std::int64_t lowest, std::span<const Complex> coefficients);

  int dim() const noexcept { return dim_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;

  Complex coeff(const Exponent& k) const;
  Complex coeff(std::int64_t k) const;

  /// (min, max) exponent along an axis; (0, 0) for the zero polynomial.
  std::pair<std::int64_t, std::int64_t> degree_range(int axis) const;
  /// max over axes of max(|min|, |max|).
  std::int64_t bandwidth() const;
  /// Σ |c_k|, an upper bound for the sup norm on the torus.
  double l1_norm() const;

  Complex evaluate(std::span<const double> angles) const;
  Complex evaluate(double angle) const;

  /// Pointwise conjugate on the torus: coefficient at k becomes conj(c_{-k}).
  LaurentPoly conj() const;
  /// Drops terms with |c| <= eps. Never applied implicitly.
  LaurentPoly prune(double eps) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& rhs);
  LaurentPoly& operator-=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(Complex s);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(Complex s, LaurentPoly a) { return a *= s; }
  friend LaurentPoly operator*(LaurentPoly a, Complex s) { return a *= s; }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) = default;

 private:
  int dim_;
  TermMap terms_;
};

LaurentPoly pow(const LaurentPoly& a, std::int64_t n);

/// (a ⊗ b)(λ, μ) = a(λ) b(μ); dimensions add.
LaurentPoly tensor(const LaurentPoly& a, const LaurentPoly& b);

/// 1-D restriction λ ↦ a(base with base[axis] replaced by λ).
LaurentPoly slice(const LaurentPoly& a, int axis, std::span<const double> base);

/// Truncated exponential series Σ a^n/n!, stopped once the l1 norm of the
/// next term drops below tol.
LaurentPoly exp_series(const LaurentPoly& a, double tol = 1e-12);

/// Round-trippable expression text, e.g. "(1+0i)*z^-1 + (2+0i)".
std::string to_expression(const LaurentPoly& a);
std::ostream& operator<<(std::ostream& os, const LaurentPoly& a);

/// Samples on the equispaced torus grid, row-major with the last axis fastest.
/// Point index (i_1, ..., i_d) sits at angles (2π i_1 / K_1, ..., 2π i_d / K_d).
struct GridSamples {
  std::vector<std::size_t> shape;
  std::vector<Complex> values;

  GridSamples() = default;
  GridSamples(std::vector<std::size_t> shape, std::vector<Complex> values);

  std::size_t dims() const noexcept { return shape.size(); }
  std::size_t size() const noexcept { return values.size(); }
  double angle(std::size_t axis, std::size_t i) const;
  Complex at(std::size_t i0, std::size_t i1) const { return values[i0 * shape[1] + i1]; }
};

/// Exact evaluation at roots of unity (exponents are folded mod K, then a
/// per-axis FFT is applied).
GridSamples evaluate_grid(const LaurentPoly& a, std::vector<std::size_t> shape);

/// Inverse of evaluate_grid: the aliased Fourier coefficients of the samples,
/// laid out like the samples (index j ↔ frequency j or j - K).
std::vector<Complex> grid_coefficients(const GridSamples& samples);

/// Estimated min |a| over the torus. Starts at init_grid points per axis and
/// doubles until consecutive (locally polished) minima differ by less than
/// 1e-6 (1 + min).
double min_modulus(const LaurentPoly& a, std::size_t init_grid = 64);

inline bool is_invertible_on_torus(const LaurentPoly& a, double vanish_tol = kDefaultVanishTol) {
  return min_modulus(a) > vanish_tol;
}

/// Fourier coefficients of 1/a on exponents [-window, window], accurate to tol.
LaurentPoly reciprocal_coeffs(const LaurentPoly& a, std::int64_t window, double tol,
                              double vanish_tol = kDefaultVanishTol);

}  // namespace qidx
