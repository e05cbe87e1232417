#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "qidx/error.hpp"
#include "qidx/indicial.hpp"
#include "qidx/winding.hpp"

using namespace qidx;
using qidx::testing::Gen;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;

LaurentPoly z() { return LaurentPoly::variable(1, 0); }
LaurentPoly c1(Complex c) { return LaurentPoly::constant(1, c); }

// Independent oracle: [P, a] by brute force over a window.
Complex brute_commutator(const LaurentPoly& a, std::int64_t j, std::int64_t k) {
  const int pj = j >= 0 ? 1 : 0, pk = k >= 0 ? 1 : 0;
  return a.coeff(j - k) * static_cast<double>(pj - pk);
}

SymbolFactor random_factor(Gen& g) {
  switch (g.integer(0, 2)) {
    case 0: return SymbolFactor::poly(g.sparse(1, 3, 3) + c1(1.0));
    case 1: return SymbolFactor::reciprocal(g.rooted(3, 1, 0.2).poly);
    default: return SymbolFactor::exponential(0.3 * g.sparse(1, 2, 3));
  }
}

Word random_word(Gen& g) {
  std::vector<SymbolFactor> f;
  const auto n = g.integer(1, 4);
  for (std::int64_t i = 0; i < n; ++i) {
    SymbolFactor x = random_factor(g);
    if (g.coin()) x = x * random_factor(g);
    f.push_back(std::move(x));
  }
  return Word(std::move(f));
}

}  // namespace

TEST_CASE("commutator_P examples") {
  CHECK(commutator_P(c1(1.0)).empty());
  const CommutatorMatrix cz = commutator_P(z());
  CHECK(cz.size() == 1);
  CHECK(cz.at(0, -1) == Complex(1.0));
  const CommutatorMatrix czz = commutator_P(z() + pow(z(), -1));
  CHECK(czz.size() == 2);
  CHECK(czz.at(0, -1) == Complex(1.0));
  CHECK(czz.at(-1, 0) == Complex(-1.0));
  CHECK(czz.trace() == Complex(0.0));
}

TEST_CASE("commutator_P matches the indicator formula on a window") {
  Gen g(21);
  for (int trial = 0; trial < 30; ++trial) {
    const LaurentPoly a = g.sparse(1, 5, 6);
    const CommutatorMatrix m = commutator_P(a);
    for (std::int64_t j = -8; j <= 8; ++j) {
      for (std::int64_t k = -8; k <= 8; ++k) CHECK(m.at(j, k) == brute_commutator(a, j, k));
    }
    for (const auto& [idx, v] : m.entries()) CHECK((idx.first >= 0) != (idx.second >= 0));
  }
}

TEST_CASE("trace_winding_1d examples") {
  CHECK(trace_winding_1d(c1(1.0)) == doctest::Approx(0.0));
  CHECK(std::abs(trace_winding_1d(z()) - 1.0) < 1e-12);
  CHECK(std::abs(trace_winding_1d(c1(1.0) + 2.0 * z()) - 1.0) < 1e-9);
  CHECK(std::abs(trace_winding_1d(1.5 * pow(z(), -1) - c1(3.5) + z())) < 1e-9);
  try {
    (void)trace_winding_1d(z() - c1(1.0));
    FAIL("expected NotInvertibleOnTorus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInvertibleOnTorus);
  }
}

TEST_CASE("char_eval examples") {
  CHECK(char_eval(Word::projection(), 0.3) == Complex(1.0));
  const Word zpz({SymbolFactor::poly(z()), SymbolFactor::poly(z())});
  CHECK(std::abs(char_eval(zpz, kPi / 2) - Complex(-1.0)) < 1e-15);
  const LaurentPoly phi = c1(2.0) + z();
  const Word conj_p({SymbolFactor::reciprocal(phi), SymbolFactor::poly(phi)});
  for (double t : {0.0, 1.0, 2.5, 5.0}) CHECK(std::abs(char_eval(conj_p, t) - Complex(1.0)) < 1e-15);
}

TEST_CASE("composite_trace examples") {
  const LaurentPoly phi = c1(2.0) + z();
  const Word conj_p({SymbolFactor::reciprocal(phi), SymbolFactor::poly(phi)});
  // z^{-1}[P, z] has trace 1; the second slot is bounded, so only tr ⊗ τ contributes.
  const ClassifiedTensor t1{TraceClassFactor::log_derivative(z()), conj_p};
  CHECK(std::abs(composite_trace(t1, {1.0, 1.0}, {0.4, 1.1}) - Complex(1.0)) < 1e-12);

  const ClassifiedTensor t2{Word::projection(), TraceClassFactor::commutator(c1(1.0))};
  CHECK(composite_trace(t2, {1.0, 1.0}, {0.0, 0.0}) == Complex(0.0));

  const ClassifiedTensor t3{Word::projection(), TraceClassFactor::log_derivative(z())};
  CHECK(std::abs(composite_trace(t3, {kSqrt2, 0.7}, {2.0, 3.0}) - Complex(0.7)) < 1e-12);

  // The raw commutator is off-diagonal, so its trace vanishes.
  CHECK(TraceClassFactor::commutator(z()).trace() == Complex(0.0));
}

TEST_CASE("composite_trace refuses two bounded factors") {
  const ClassifiedTensor t{Word::projection(), Word::projection()};
  try {
    (void)composite_trace(t, {1.0, 1.0}, {0.0, 0.0});
    FAIL("expected Unclassifiable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unclassifiable);
  }
}

TEST_CASE("tensor_index_verify examples") {
  const auto zz = tensor_index_verify(z(), z(), {kSqrt2, 1.0});
  CHECK(std::abs(zz.lhs - (kSqrt2 + 1.0)) < 1e-10);
  CHECK(std::abs(zz.rhs - (kSqrt2 + 1.0)) < 1e-15);
  const auto oz = tensor_index_verify(c1(1.0), z(), {kSqrt2, 1.0});
  CHECK(std::abs(oz.lhs - 1.0) < 1e-10);
  const auto mixed = tensor_index_verify(c1(1.0) + 2.0 * z(), pow(z(), -1), {kSqrt2, 1.0});
  CHECK(std::abs(mixed.lhs - (kSqrt2 - 1.0)) < 1e-9);
  CHECK(std::abs(mixed.rhs - (kSqrt2 - 1.0)) < 1e-15);
}

TEST_CASE("tensor_index_n examples") {
  const std::vector<double> th3{kSqrt2, std::numbers::sqrt3, 1.0};
  CHECK(tensor_index_n(std::vector<double>{1, 1, 1}, th3) == doctest::Approx(kSqrt2 + std::numbers::sqrt3 + 1.0));
  CHECK(tensor_index_n(std::vector<double>{0, 0, 0}, th3) == 0.0);
  CHECK(tensor_index_n(std::vector<double>{2, -3}, std::vector<double>{kSqrt2, 1.0}) ==
        doctest::Approx(2 * kSqrt2 - 3));
  CHECK_THROWS_AS(tensor_index_n(std::vector<double>{1, 2}, th3), Error);
}

TEST_CASE("property: rank of [P, a] is bounded by the positive plus negative degree") {
  Gen g(31);
  for (int trial = 0; trial < 50; ++trial) {
    const LaurentPoly a = g.sparse(1, 6, 6);
    if (a.is_zero()) continue;
    const auto [lo, hi] = a.degree_range(0);
    const std::size_t bound = static_cast<std::size_t>(std::max<std::int64_t>(hi, 0) + std::max<std::int64_t>(-lo, 0));
    CHECK(commutator_P(a).rank() <= bound);
  }
}

TEST_CASE("property: the trace formula is additive and equals the winding number") {
  Gen g(32);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = g.rooted(4, 2, 0.1), b = g.rooted(4, 2, 0.1);
    const double ta = trace_winding_1d(a.poly, 1e-8), tb = trace_winding_1d(b.poly, 1e-8);
    const double tab = trace_winding_1d(a.poly * b.poly, 1e-8);
    CHECK(std::abs(tab - ta - tb) < 1e-8);
    CHECK(std::abs(ta - static_cast<double>(a.winding)) < 1e-8);
  }
}

TEST_CASE("property: the character is multiplicative on concatenation") {
  Gen g(33);
  for (int trial = 0; trial < 100; ++trial) {
    const Word w1 = random_word(g), w2 = random_word(g);
    const double t = g.uniform(0.0, 2.0 * kPi);
    const Complex lhs = char_eval(w1 * w2, t), rhs = char_eval(w1, t) * char_eval(w2, t);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    CHECK((w1 * w2).projections() == w1.projections() + w2.projections());
  }
}

TEST_CASE("property: the character kills commutators of words") {
  Gen g(34);
  for (int trial = 0; trial < 100; ++trial) {
    const Word w1 = random_word(g), w2 = random_word(g);
    const double t = g.uniform(0.0, 2.0 * kPi);
    const double scale = std::max(1.0, std::abs(char_eval(w1, t) * char_eval(w2, t)));
    CHECK(std::abs(char_eval(commutator(w1, w2), t)) <= 1e-12 * scale);
  }
}

TEST_CASE("property: composite trace does not depend on the character points") {
  Gen g(35);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = g.rooted(4, 2, 0.1), b = g.rooted(4, 2, 0.1);
    const double base = tensor_index_verify(a.poly, b.poly, {kSqrt2, 1.0}).lhs;
    for (int s = 0; s < 5; ++s) {
      const CharacterPoints pts{g.uniform(0.0, 2.0 * kPi), g.uniform(0.0, 2.0 * kPi)};
      CHECK(std::abs(tensor_index_verify(a.poly, b.poly, {kSqrt2, 1.0}, pts).lhs - base) < 1e-10);
    }
  }
}
