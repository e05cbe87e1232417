#pragma once

// Seeded random symbols with known answers, for property and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qidx/symbol.hpp"

namespace qidx::testing {

struct RootedPoly {
  LaurentPoly poly;
  std::int64_t shift = 0;
  std::vector<Complex> roots;
  /// shift + #roots inside the unit disk, known by construction.
  std::int64_t winding = 0;
  /// Smallest | |r| - 1 | over the roots.
  double clearance = 1.0;
};

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin() { return integer(0, 1) == 1; }

  Complex unit_complex(double r_lo, double r_hi) {
    return std::polar(uniform(r_lo, r_hi), uniform(0.0, 2.0 * std::numbers::pi));
  }

  /// Root modulus in [0.3, 1 - gap] or [1 + gap, 2.5].
  Complex root_off_circle(double gap) {
    const double r = coin() ? uniform(0.3, 1.0 - gap) : uniform(1.0 + gap, 2.5);
    return std::polar(r, uniform(0.0, 2.0 * std::numbers::pi));
  }

  /// c z^s Π (z - r_i) with every root at least gap away from the circle.
  RootedPoly rooted(int max_degree, std::int64_t max_shift, double gap = 0.05) {
    RootedPoly out;
    out.shift = integer(-max_shift, max_shift);
    const auto degree = integer(max_degree > 0 ? 1 : 0, max_degree);
    LaurentPoly p = LaurentPoly::monomial({out.shift}, unit_complex(0.5, 2.0));
    for (std::int64_t i = 0; i < degree; ++i) {
      const Complex r = root_off_circle(gap);
      out.roots.push_back(r);
      out.clearance = std::min(out.clearance, std::abs(std::abs(r) - 1.0));
      p *= LaurentPoly::variable(1, 0) - LaurentPoly::constant(1, r);
      if (std::abs(r) < 1.0) ++out.winding;
    }
    out.winding += out.shift;
    out.poly = std::move(p);
    return out;
  }

  /// Small ψ on 𝕋² with exponents in [-band, band]² and Σ|coeff| <= l1.
  LaurentPoly small_psi(std::int64_t band, double l1) {
    LaurentPoly::TermMap terms;
    const auto count = integer(1, 6);
    std::vector<Complex> c;
    double total = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
      c.push_back(unit_complex(0.1, 1.0));
      total += std::abs(c.back());
    }
    for (std::int64_t i = 0; i < count; ++i) {
      terms[{integer(-band, band), integer(-band, band)}] += c[static_cast<std::size_t>(i)] * (l1 / total);
    }
    return LaurentPoly(2, std::move(terms));
  }

  /// Random sparse Laurent polynomial with integer or complex coefficients.
  LaurentPoly sparse(int dim, std::int64_t band, int max_terms, bool integer_coeffs = false) {
    LaurentPoly::TermMap terms;
    const auto count = integer(0, max_terms);
    for (std::int64_t i = 0; i < count; ++i) {
      Exponent k(static_cast<std::size_t>(dim));
      for (auto& e : k) e = integer(-band, band);
      terms[k] = integer_coeffs ? Complex(static_cast<double>(integer(-4, 4)), 0.0)
                                : Complex(uniform(-2.0, 2.0), uniform(-2.0, 2.0));
    }
    return LaurentPoly(dim, std::move(terms));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qidx::testing
