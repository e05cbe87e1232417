#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "qidx/symbol.hpp"

namespace qidx {

inline constexpr std::size_t kDefaultMaxColumns = 4096;
inline constexpr double kDefaultRankTol = 1e-8;

/// Rectangular finite section of the Toeplitz operator T_a on H²(𝕋^d), d ∈ {1, 2}.
///
/// Columns are the box {0..M}^d. Rows are every non-negative multi-index that a
/// column can reach, {0..M + max_exponent_i} per axis, so the section acts
/// exactly like T_a on vectors supported in the column box. Entry (j, k) is
/// â(j - k). Multi-indices are ordered row-major with the last axis fastest.
struct ToeplitzSection {
  LaurentPoly symbol;
  std::int64_t truncation = 0;
  std::vector<Exponent> rows;
  std::vector<Exponent> cols;
  Eigen::MatrixXcd data;
  std::int64_t symbol_band = 0;
};

struct KernelReport {
  std::size_t ker_dim = 0;
  std::size_t coker_dim = 0;
  /// Smallest kept over largest dropped singular value, across both sections used.
  double sigma_gap = 0.0;
  /// Smallest singular value of the section itself.
  double sigma_min = 0.0;
};

ToeplitzSection toeplitz_section_1d(const LaurentPoly& a, std::int64_t truncation);
ToeplitzSection toeplitz_section_2d(const LaurentPoly& a, std::int64_t truncation,
                                    std::size_t max_cols = kDefaultMaxColumns);
ToeplitzSection toeplitz_section(const LaurentPoly& a, std::int64_t truncation,
                                 std::size_t max_cols = kDefaultMaxColumns);

/// Square compression of T_a to the box {0..M}^d.
Eigen::MatrixXcd square_section(const LaurentPoly& a, std::int64_t truncation);

/// Numerical kernel of the section and of the adjoint section T_{conj(a)}
/// (whose kernel is the cokernel of T_a). Throws AmbiguousRank when the
/// singular-value gap is below 10.
KernelReport kernel_cokernel_oracle(const ToeplitzSection& s, double rank_tol = kDefaultRankTol,
                                    std::size_t max_cols = kDefaultMaxColumns);

/// Tr(T_a T_{1/a} - T_{1/a} T_a) on the {0..M} block, doubling M and W until
/// two successive values agree to 1e-8.
double partial_inverse_index_1d(const LaurentPoly& a, std::int64_t truncation, std::int64_t window,
                                std::int64_t max_truncation = 4096);

/// Nonzero singular values (descending) of [P, z] ⊗ P on the window
/// {-1..M} × {0..M}.
std::vector<double> noncompact_witness(std::int64_t truncation);

/// r_k = ‖(T_{exp ψ} - exp(T_ψ)) e_{(k,k)}‖ on the square {0..M}² compression.
std::vector<double> weak_invertibility_check(const LaurentPoly& psi, std::int64_t truncation,
                                             std::span<const std::int64_t> ks);

std::vector<std::size_t> cokernel_growth_demo(const LaurentPoly& a, std::span<const std::int64_t> truncations,
                                              double rank_tol = kDefaultRankTol,
                                              std::size_t max_cols = kDefaultMaxColumns);

/// "rows cols" header, then one line per row of "re im" pairs.
void write_section(std::ostream& os, const ToeplitzSection& s);

}  // namespace qidx
