#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qidx/symbol.hpp"

namespace qidx::detail {

/// Unscaled DFT along one axis of a row-major array.
///   forward:  X_k = Σ_j x_j exp(-2πi jk/K)
///   backward: x_j = Σ_k X_k exp(+2πi jk/K)
void transform_axis(std::vector<Complex>& data, std::span<const std::size_t> shape, std::size_t axis,
                    bool backward);

void transform_all(std::vector<Complex>& data, std::span<const std::size_t> shape, bool backward);

/// Frequency represented by storage slot j of a length-K transform.
inline std::int64_t signed_frequency(std::size_t j, std::size_t k) {
  return j <= k / 2 ? static_cast<std::int64_t>(j) : static_cast<std::int64_t>(j) - static_cast<std::int64_t>(k);
}

inline std::size_t fold(std::int64_t e, std::size_t k) {
  const auto kk = static_cast<std::int64_t>(k);
  return static_cast<std::size_t>(((e % kk) + kk) % kk);
}

}  // namespace qidx::detail
