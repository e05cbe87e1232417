#include "qidx/symbol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "fourier.hpp"
#include "qidx/error.hpp"

namespace qidx {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinModulusPoints = 1 << 20;
constexpr std::size_t kMaxReciprocalGrid = std::size_t{1} << 22;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::ExponentOverflow, "exponent sum overflows");
  return r;
}

std::int64_t checked_neg(std::int64_t a) {
  if (a == std::numeric_limits<std::int64_t>::min()) throw Error(ErrorCode::ExponentOverflow, "exponent negation overflows");
  return -a;
}

void require_same_dim(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimMismatch, "dim " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

void accumulate(LaurentPoly::TermMap& terms, const Exponent& k, Complex c) {
  auto [it, inserted] = terms.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms.erase(it);
  } else if (c == Complex{}) {
    terms.erase(it);
  }
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

LaurentPoly::LaurentPoly(int dim) : dim_(dim) {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dim must be positive");
}

LaurentPoly::LaurentPoly(int dim, TermMap terms) : LaurentPoly(dim) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (static_cast<int>(it->first.size()) != dim) {
      throw Error(ErrorCode::DimMismatch, "exponent vector length differs from dim");
    }
    if (!std::isfinite(it->second.real()) || !std::isfinite(it->second.imag())) {
      throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
    }
    it = it->second == Complex{} ? terms.erase(it) : std::next(it);
  }
  terms_ = std::move(terms);
}

LaurentPoly LaurentPoly::constant(int dim, Complex c) {
  return LaurentPoly(dim, {{Exponent(static_cast<std::size_t>(dim), 0), c}});
}

LaurentPoly LaurentPoly::monomial(Exponent k, Complex c) {
  const int dim = static_cast<int>(k.size());
  return LaurentPoly(dim, {{std::move(k), c}});
}

LaurentPoly LaurentPoly::variable(int dim, int axis, std::int64_t power) {
  if (axis < 0 || axis >= dim) throw Error(ErrorCode::InvalidArgument, "axis out of range");
  Exponent k(static_cast<std::size_t>(dim), 0);
  k[static_cast<std::size_t>(axis)] = power;
  return monomial(std::move(k));
}

LaurentPoly LaurentPoly::from_coeffs(std::int64_t lowest, std::span<const Complex> coefficients) {
  TermMap terms;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    terms.emplace(Exponent{checked_add(lowest, static_cast<std::int64_t>(i))}, coefficients[i]);
  }
  return LaurentPoly(1, std::move(terms));
}

bool LaurentPoly::is_constant() const noexcept {
  return terms_.empty() ||
         (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                                            [](std::int64_t e) { return e == 0; }));
}

Complex LaurentPoly::coeff(const Exponent& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Complex{} : it->second;
}

Complex LaurentPoly::coeff(std::int64_t k) const {
  if (dim_ != 1) throw Error(ErrorCode::DimMismatch, "scalar exponent on a multivariate symbol");
  return coeff(Exponent{k});
}

std::pair<std::int64_t, std::int64_t> LaurentPoly::degree_range(int axis) const {
  if (axis < 0 || axis >= dim_) throw Error(ErrorCode::InvalidArgument, "axis out of range");
  if (terms_.empty()) return {0, 0};
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  for (const auto& [k, c] : terms_) {
    lo = std::min(lo, k[static_cast<std::size_t>(axis)]);
    hi = std::max(hi, k[static_cast<std::size_t>(axis)]);
  }
  return {lo, hi};
}

std::int64_t LaurentPoly::bandwidth() const {
  std::int64_t band = 0;
  for (int axis = 0; axis < dim_; ++axis) {
    auto [lo, hi] = degree_range(axis);
    band = std::max({band, hi, checked_neg(lo)});
  }
  return band;
}

double LaurentPoly::l1_norm() const {
  double s = 0.0;
  for (const auto& [k, c] : terms_) s += std::abs(c);
  return s;
}

Complex LaurentPoly::evaluate(std::span<const double> angles) const {
  if (static_cast<int>(angles.size()) != dim_) throw Error(ErrorCode::DimMismatch, "point length differs from dim");
  Complex sum{};
  for (const auto& [k, c] : terms_) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) phase += static_cast<double>(k[i]) * angles[i];
    sum += c * std::polar(1.0, phase);
  }
  return sum;
}

Complex LaurentPoly::evaluate(double angle) const { return evaluate(std::span<const double>(&angle, 1)); }

LaurentPoly LaurentPoly::conj() const {
  TermMap out;
  for (const auto& [k, c] : terms_) {
    Exponent neg(k.size());
    std::transform(k.begin(), k.end(), neg.begin(), checked_neg);
    out.emplace(std::move(neg), std::conj(c));
  }
  return LaurentPoly(dim_, std::move(out));
}

LaurentPoly LaurentPoly::prune(double eps) const {
  TermMap out;
  for (const auto& [k, c] : terms_) {
    if (std::abs(c) > eps) out.emplace(k, c);
  }
  return LaurentPoly(dim_, std::move(out));
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  require_same_dim(*this, rhs);
  for (const auto& [k, c] : rhs.terms_) accumulate(terms_, k, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
  require_same_dim(*this, rhs);
  for (const auto& [k, c] : rhs.terms_) accumulate(terms_, k, -c);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) { return *this = *this * rhs; }

LaurentPoly& LaurentPoly::operator*=(Complex s) {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw Error(ErrorCode::InvalidArgument, "non-finite scale");
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    it = it->second == Complex{} ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  require_same_dim(a, b);
  LaurentPoly::TermMap out;
  Exponent k(static_cast<std::size_t>(a.dim()));
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = checked_add(ka[i], kb[i]);
      accumulate(out, k, ca * cb);
    }
  }
  return LaurentPoly(a.dim(), std::move(out));
}

LaurentPoly pow(const LaurentPoly& a, std::int64_t n) {
  if (n < 0) {
    if (a.size() != 1) throw Error(ErrorCode::InvalidArgument, "negative power of a non-monomial");
    const auto& [k, c] = *a.terms().begin();
    Exponent neg(k.size());
    std::transform(k.begin(), k.end(), neg.begin(), checked_neg);
    return pow(LaurentPoly::monomial(std::move(neg), 1.0 / c), -n);
  }
  LaurentPoly result = LaurentPoly::constant(a.dim(), 1.0);
  LaurentPoly base = a;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

LaurentPoly tensor(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly::TermMap out;
  for (const auto& [ka, ca] : a.terms()) {
    for (const auto& [kb, cb] : b.terms()) {
      Exponent k = ka;
      k.insert(k.end(), kb.begin(), kb.end());
      accumulate(out, k, ca * cb);
    }
  }
  return LaurentPoly(a.dim() + b.dim(), std::move(out));
}

LaurentPoly slice(const LaurentPoly& a, int axis, std::span<const double> base) {
  if (static_cast<int>(base.size()) != a.dim()) throw Error(ErrorCode::DimMismatch, "base point length differs from dim");
  if (axis < 0 || axis >= a.dim()) throw Error(ErrorCode::InvalidArgument, "axis out of range");
  LaurentPoly::TermMap out;
  for (const auto& [k, c] : a.terms()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (static_cast<int>(i) != axis) phase += static_cast<double>(k[i]) * base[i];
    }
    accumulate(out, Exponent{k[static_cast<std::size_t>(axis)]}, c * std::polar(1.0, phase));
  }
  return LaurentPoly(1, std::move(out));
}

LaurentPoly exp_series(const LaurentPoly& a, double tol) {
  constexpr int kMaxTerms = 400;
  LaurentPoly sum = LaurentPoly::constant(a.dim(), 1.0);
  LaurentPoly term = sum;
  for (int n = 1; n <= kMaxTerms; ++n) {
    term = term * a;
    term *= Complex(1.0 / n);
    const double size = term.l1_norm();
    if (!std::isfinite(size)) break;
    sum += term;
    if (size < tol) return sum;
  }
  throw Error(ErrorCode::SeriesDivergence, "exponential series did not reach tolerance");
}

std::string to_expression(const LaurentPoly& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& [k, c] : a.terms()) {
    if (!out.empty()) out += " + ";
    out += "(" + format_real(c.real()) + (std::signbit(c.imag()) ? "-" : "+") + format_real(std::abs(c.imag())) + "i)";
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == 0) continue;
      out += a.dim() == 1 ? "*z" : "*z" + std::to_string(i + 1);
      out += "^" + std::to_string(k[i]);
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& a) { return os << to_expression(a); }

GridSamples::GridSamples(std::vector<std::size_t> s, std::vector<Complex> v) : shape(std::move(s)), values(std::move(v)) {
  const std::size_t n = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  if (shape.empty() || n != values.size() || std::find(shape.begin(), shape.end(), 0) != shape.end()) {
    throw Error(ErrorCode::InvalidArgument, "grid shape does not match value count");
  }
}

double GridSamples::angle(std::size_t axis, std::size_t i) const {
  return kTwoPi * static_cast<double>(i) / static_cast<double>(shape[axis]);
}

GridSamples evaluate_grid(const LaurentPoly& a, std::vector<std::size_t> shape) {
  if (static_cast<int>(shape.size()) != a.dim()) throw Error(ErrorCode::DimMismatch, "grid rank differs from dim");
  const std::size_t n = std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  if (n == 0 || n > kMaxGridPoints) throw Error(ErrorCode::SizeLimit, "grid of " + std::to_string(n) + " points");
  std::vector<Complex> data(n);
  for (const auto& [k, c] : a.terms()) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < shape.size(); ++i) idx = idx * shape[i] + detail::fold(k[i], shape[i]);
    data[idx] += c;
  }
  detail::transform_all(data, shape, /*backward=*/true);
  return GridSamples(std::move(shape), std::move(data));
}

std::vector<Complex> grid_coefficients(const GridSamples& samples) {
  std::vector<Complex> data = samples.values;
  detail::transform_all(data, samples.shape, /*backward=*/false);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
  return data;
}

namespace {

// Coordinate-wise golden-section descent of |a| inside a box of half-width h.
double polish_minimum(const LaurentPoly& a, std::vector<double> p, double h) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](const std::vector<double>& q) { return std::abs(a.evaluate(q)); };
  double best = f(p);
  for (int sweep = 0; sweep < 6; ++sweep) {
    for (std::size_t axis = 0; axis < p.size(); ++axis) {
      std::vector<double> q = p;
      double lo = p[axis] - h, hi = p[axis] + h;
      double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
      q[axis] = x1;
      double f1 = f(q);
      q[axis] = x2;
      double f2 = f(q);
      for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
          hi = x2, x2 = x1, f2 = f1;
          x1 = hi - inv_phi * (hi - lo);
          q[axis] = x1;
          f1 = f(q);
        } else {
          lo = x1, x1 = x2, f1 = f2;
          x2 = lo + inv_phi * (hi - lo);
          q[axis] = x2;
          f2 = f(q);
        }
      }
      q[axis] = f1 < f2 ? x1 : x2;
      const double v = std::min(f1, f2);
      if (v < best) {
        best = v;
        p = q;
      }
    }
    h *= 0.5;
  }
  return best;
}

}  // namespace

double min_modulus(const LaurentPoly& a, std::size_t init_grid) {
  if (a.is_zero()) return 0.0;
  if (a.is_constant()) return std::abs(a.terms().begin()->second);
  const auto d = static_cast<std::size_t>(a.dim());
  auto points = [d](std::size_t k) { return std::pow(static_cast<double>(k), static_cast<double>(d)); };
  std::size_t k = std::max<std::size_t>(init_grid, 4);
  while (k > 4 && points(k) > kMinModulusPoints) k /= 2;

  double prev = std::numeric_limits<double>::quiet_NaN();
  for (;;) {
    const GridSamples g = evaluate_grid(a, std::vector<std::size_t>(d, k));
    constexpr std::size_t kCandidates = 4;
    std::vector<std::size_t> order(g.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t m = std::min(kCandidates, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(),
                      [&](std::size_t x, std::size_t y) { return std::abs(g.values[x]) < std::abs(g.values[y]); });
    double est = std::abs(g.values[order[0]]);
    const double h = kTwoPi / static_cast<double>(k);
    for (std::size_t c = 0; c < m; ++c) {
      std::vector<double> p(d);
      std::size_t idx = order[c];
      for (std::size_t axis = d; axis-- > 0;) {
        p[axis] = g.angle(axis, idx % k);
        idx /= k;
      }
      est = std::min(est, polish_minimum(a, std::move(p), h));
    }
    if (!std::isnan(prev) && std::abs(est - prev) < 1e-6 * (1.0 + est)) return est;
    prev = est;
    if (points(2 * k) > kMinModulusPoints) return est;
    k *= 2;
  }
}

LaurentPoly reciprocal_coeffs(const LaurentPoly& a, std::int64_t window, double tol, double vanish_tol) {
  if (a.dim() != 1) throw Error(ErrorCode::DimMismatch, "reciprocal_coeffs needs a 1-D symbol");
  if (window < 0 || !(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "window >= 0 and tol > 0 required");
  const double mm = min_modulus(a);
  if (mm <= vanish_tol) throw Error(ErrorCode::NotInvertibleOnTorus, "min |a| = " + std::to_string(mm));

  const auto [lo, hi] = a.degree_range(0);
  const auto need = static_cast<std::size_t>(4 * (window + (hi - lo)));
  std::size_t k = std::bit_ceil(std::max<std::size_t>(need, 16));
  for (; k <= kMaxReciprocalGrid; k *= 2) {
    GridSamples g = evaluate_grid(a, {k});
    for (auto& v : g.values) v = 1.0 / v;
    const std::vector<Complex> c = grid_coefficients(g);
    // Aliasing error on the window is bounded by the size of the slowest-decaying
    // high frequencies, which we sample on the band |j| in [K/4, K/2].
    double tail = 0.0;
    for (std::size_t j = k / 4; j <= k - k / 4; ++j) tail = std::max(tail, std::abs(c[j]));
    if (tail >= tol) continue;
    LaurentPoly::TermMap terms;
    for (std::int64_t e = -window; e <= window; ++e) terms.emplace(Exponent{e}, c[detail::fold(e, k)]);
    return LaurentPoly(1, std::move(terms));
  }
  throw Error(ErrorCode::NoConvergence, "reciprocal tail above tolerance at the largest grid");
}

}  // namespace qidx
