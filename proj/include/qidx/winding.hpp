#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qidx/symbol.hpp"

namespace qidx {

inline constexpr std::size_t kDefaultDecompositionGrid = 256;
inline constexpr std::size_t kMaxDecompositionGrid = 4096;

/// a = (z^m ⊗ z^n) exp(ψ), with ψ known on a torus grid.
struct DecompositionResult {
  std::int64_t m = 0;
  std::int64_t n = 0;
  GridSamples psi_grid;
  /// Σ|ĉ| of the grid spectrum of ψ outside the band used by psi_fourier's default.
  double psi_tail = 0.0;
  /// max over the grid of |exp(ψ) e^{i(mλ1 + nλ2)} - a|.
  double reconstruction_error = 0.0;
};

using WindingVector = std::vector<std::int64_t>;

/// Winding number of a 1-D symbol by counting companion-matrix roots inside the disk.
std::int64_t winding_exact(const LaurentPoly& a, double vanish_tol = kDefaultVanishTol);

/// Winding number of a sampled loop from its principal-branch phase increments.
/// Throws PhaseStepTooLarge when any increment reaches π/2; the caller resamples.
std::int64_t winding_sampled(const GridSamples& loop);

/// Samples a 1-D symbol at init_grid points, doubling while the phase steps are too large.
std::int64_t winding_sampled(const LaurentPoly& a, std::size_t init_grid = 256,
                             std::size_t max_grid = std::size_t{1} << 20);

DecompositionResult decompose_torus2(const LaurentPoly& a, std::size_t k1 = kDefaultDecompositionGrid,
                                     std::size_t k2 = kDefaultDecompositionGrid,
                                     double vanish_tol = kDefaultVanishTol);

/// Band-limited Fourier fit of ψ: grid frequencies with |f_i| <= band on every axis.
LaurentPoly psi_fourier(const DecompositionResult& d, std::int64_t band);

/// Component i is the winding of λ ↦ a(0, ..., λ, ..., 0) in slot i.
WindingVector winding_vector_n(const LaurentPoly& a, double vanish_tol = kDefaultVanishTol);

}  // namespace qidx
