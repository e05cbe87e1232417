#include "qidx/winding.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <unsupported/Eigen/Polynomials>

#include "fourier.hpp"
#include "qidx/error.hpp"

namespace qidx {
namespace {

constexpr double kRootGuard = 1e-7;
constexpr double kMaxStep = std::numbers::pi / 2.0;

void require_invertible(const LaurentPoly& a, double vanish_tol) {
  const double mm = min_modulus(a);
  if (mm <= vanish_tol) throw Error(ErrorCode::NotInvertibleOnTorus, "min |a| = " + std::to_string(mm));
}

double step(Complex from, Complex to) { return std::arg(to * std::conj(from)); }

}  // namespace

std::int64_t winding_exact(const LaurentPoly& a, double vanish_tol) {
  if (a.dim() != 1) throw Error(ErrorCode::DimMismatch, "winding_exact needs a 1-D symbol");
  require_invertible(a, vanish_tol);
  const auto [lo, hi] = a.degree_range(0);
  if (lo == hi) return lo;

  // a = z^lo p(z), p of degree hi - lo with p(0) != 0.
  Eigen::VectorXcd p(hi - lo + 1);
  for (std::int64_t e = lo; e <= hi; ++e) p(e - lo) = a.coeff(e);
  Eigen::PolynomialSolver<Complex, Eigen::Dynamic> solver(p);

  std::int64_t inside = 0;
  for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
    const double r = std::abs(solver.roots()(i));
    if (std::abs(r - 1.0) < kRootGuard) {
      throw Error(ErrorCode::RootOnCircle, "root modulus " + std::to_string(r));
    }
    if (r < 1.0) ++inside;
  }
  return inside + lo;
}

std::int64_t winding_sampled(const GridSamples& loop) {
  if (loop.dims() != 1) throw Error(ErrorCode::DimMismatch, "winding_sampled needs a 1-D loop");
  const std::size_t k = loop.size();
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const Complex from = loop.values[i];
    const Complex to = loop.values[(i + 1) % k];
    if (from == Complex{}) throw Error(ErrorCode::ResidualTooLarge, "loop passes through zero");
    const double s = step(from, to);
    if (std::abs(s) >= kMaxStep) throw Error(ErrorCode::PhaseStepTooLarge, "phase step " + std::to_string(s));
    total += s;
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 0.1) {
    throw Error(ErrorCode::ResidualTooLarge, "winding residual " + std::to_string(turns - rounded));
  }
  return static_cast<std::int64_t>(rounded);
}

std::int64_t winding_sampled(const LaurentPoly& a, std::size_t init_grid, std::size_t max_grid) {
  for (std::size_t k = init_grid;; k *= 2) {
    try {
      return winding_sampled(evaluate_grid(a, {k}));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PhaseStepTooLarge || 2 * k > max_grid) throw;
    }
  }
}

DecompositionResult decompose_torus2(const LaurentPoly& a, std::size_t k1, std::size_t k2, double vanish_tol) {
  if (a.dim() != 2) throw Error(ErrorCode::DimMismatch, "decompose_torus2 needs a 2-D symbol");
  require_invertible(a, vanish_tol);

  const double origin[2] = {0.0, 0.0};
  DecompositionResult out;
  out.m = winding_sampled(slice(a, 0, origin));
  out.n = winding_sampled(slice(a, 1, origin));
  const LaurentPoly unwound = a * LaurentPoly::monomial({-out.m, -out.n});

  for (;; k1 *= 2, k2 *= 2) {
    const GridSamples g = evaluate_grid(unwound, {k1, k2});
    auto at = [&](std::size_t i, std::size_t j) { return g.values[(i % k1) * k2 + (j % k2)]; };

    double worst = 0.0;
    for (std::size_t i = 0; i < k1; ++i) {
      for (std::size_t j = 0; j < k2; ++j) {
        if (at(i, j) == Complex{}) throw Error(ErrorCode::UnwrapClosureFailure, "zero sample");
        worst = std::max({worst, std::abs(step(at(i, j), at(i, j + 1))), std::abs(step(at(i, j), at(i + 1, j)))});
      }
    }
    if (worst >= kMaxStep) {
      if (2 * k1 > kMaxDecompositionGrid || 2 * k2 > kMaxDecompositionGrid) {
        throw Error(ErrorCode::PhaseStepTooLarge, "phase step " + std::to_string(worst) + " at the largest grid");
      }
      continue;
    }

    // Every elementary plaquette and both periodic wraps must close.
    for (std::size_t i = 0; i < k1; ++i) {
      for (std::size_t j = 0; j < k2; ++j) {
        const double loop = step(at(i, j), at(i, j + 1)) + step(at(i, j + 1), at(i + 1, j + 1)) +
                            step(at(i + 1, j + 1), at(i + 1, j)) + step(at(i + 1, j), at(i, j));
        if (std::abs(loop) > std::numbers::pi) {
          throw Error(ErrorCode::UnwrapClosureFailure, "plaquette residual " + std::to_string(loop));
        }
      }
    }
    for (std::size_t i = 0; i < k1; ++i) {
      double wrap = 0.0;
      for (std::size_t j = 0; j < k2; ++j) wrap += step(at(i, j), at(i, j + 1));
      if (std::abs(wrap) > std::numbers::pi) throw Error(ErrorCode::UnwrapClosureFailure, "row wrap " + std::to_string(wrap));
    }
    for (std::size_t j = 0; j < k2; ++j) {
      double wrap = 0.0;
      for (std::size_t i = 0; i < k1; ++i) wrap += step(at(i, j), at(i + 1, j));
      if (std::abs(wrap) > std::numbers::pi) throw Error(ErrorCode::UnwrapClosureFailure, "column wrap " + std::to_string(wrap));
    }

    // Unwrap along the first row, then down each column.
    std::vector<double> phase(k1 * k2);
    phase[0] = std::arg(at(0, 0));
    for (std::size_t j = 1; j < k2; ++j) phase[j] = phase[j - 1] + step(at(0, j - 1), at(0, j));
    for (std::size_t i = 1; i < k1; ++i) {
      for (std::size_t j = 0; j < k2; ++j) phase[i * k2 + j] = phase[(i - 1) * k2 + j] + step(at(i - 1, j), at(i, j));
    }

    std::vector<Complex> psi(k1 * k2);
    for (std::size_t idx = 0; idx < psi.size(); ++idx) psi[idx] = {std::log(std::abs(g.values[idx])), phase[idx]};
    out.psi_grid = GridSamples({k1, k2}, std::move(psi));

    const GridSamples original = evaluate_grid(a, {k1, k2});
    double err = 0.0;
    for (std::size_t i = 0; i < k1; ++i) {
      for (std::size_t j = 0; j < k2; ++j) {
        const double chi = static_cast<double>(out.m) * g.angle(0, i) + static_cast<double>(out.n) * g.angle(1, j);
        const Complex rebuilt = std::exp(out.psi_grid.at(i, j)) * std::polar(1.0, chi);
        err = std::max(err, std::abs(rebuilt - original.at(i, j)));
      }
    }
    out.reconstruction_error = err;

    const std::vector<Complex> spectrum = grid_coefficients(out.psi_grid);
    const auto band = static_cast<std::int64_t>(std::min(k1, k2) / 4);
    for (std::size_t i = 0; i < k1; ++i) {
      for (std::size_t j = 0; j < k2; ++j) {
        if (std::abs(detail::signed_frequency(i, k1)) > band || std::abs(detail::signed_frequency(j, k2)) > band) {
          out.psi_tail += std::abs(spectrum[i * k2 + j]);
        }
      }
    }
    return out;
  }
}

LaurentPoly psi_fourier(const DecompositionResult& d, std::int64_t band) {
  const std::vector<Complex> spectrum = grid_coefficients(d.psi_grid);
  const std::size_t k1 = d.psi_grid.shape[0], k2 = d.psi_grid.shape[1];
  LaurentPoly::TermMap terms;
  for (std::size_t i = 0; i < k1; ++i) {
    for (std::size_t j = 0; j < k2; ++j) {
      const std::int64_t f1 = detail::signed_frequency(i, k1), f2 = detail::signed_frequency(j, k2);
      if (std::abs(f1) <= band && std::abs(f2) <= band) terms.emplace(Exponent{f1, f2}, spectrum[i * k2 + j]);
    }
  }
  return LaurentPoly(2, std::move(terms));
}

WindingVector winding_vector_n(const LaurentPoly& a, double vanish_tol) {
  require_invertible(a, vanish_tol);
  const std::vector<double> origin(static_cast<std::size_t>(a.dim()), 0.0);
  WindingVector w;
  for (int axis = 0; axis < a.dim(); ++axis) w.push_back(winding_sampled(slice(a, axis, origin)));
  return w;
}

}  // namespace qidx
