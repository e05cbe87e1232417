#include "fourier.hpp"

#include <unsupported/Eigen/FFT>

namespace qidx::detail {

void transform_axis(std::vector<Complex>& data, std::span<const std::size_t> shape, std::size_t axis,
                    bool backward) {
  const std::size_t n = shape[axis];
  if (n <= 1) return;
  std::size_t stride = 1;
  for (std::size_t i = axis + 1; i < shape.size(); ++i) stride *= shape[i];
  const std::size_t outer = data.size() / (n * stride);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<Complex> line(n), out(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * n * stride + s;
      for (std::size_t j = 0; j < n; ++j) line[j] = data[base + j * stride];
      if (backward) {
        fft.inv(out, line);
      } else {
        fft.fwd(out, line);
      }
      for (std::size_t j = 0; j < n; ++j) data[base + j * stride] = out[j];
    }
  }
}

void transform_all(std::vector<Complex>& data, std::span<const std::size_t> shape, bool backward) {
  for (std::size_t axis = 0; axis < shape.size(); ++axis) transform_axis(data, shape, axis, backward);
}

}  // namespace qidx::detail
