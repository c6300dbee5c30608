#include <random>

#include "doctest.h"
#include "orbint/errors.hpp"
#include "orbint/measure.hpp"

using namespace orbint;

namespace {

PAdic q(std::int64_t p, long n, long d = 1) {
  Rational x(n, d);
  x.canonicalize();
  return x == 0 ? PAdic::zero(p) : PAdic::from_rational(p, x);
}

PhaseSpec linear_phase(std::int64_t p, const PAdic& c, int level) {
  PhaseSpec ph;
  ph.n = 1;
  ph.p = p;
  ph.levels = {level};
  ph.eval = [c](std::span<const PAdic> x) { return psi(c * x[0]); };
  return ph;
}

// psi(b x y) on (p^m Z_p)^2, affine in both coordinates.
PhaseSpec bilinear_phase(std::int64_t p, const PAdic& b, int level) {
  PhaseSpec ph;
  ph.n = 2;
  ph.p = p;
  ph.levels = {level, level};
  ph.eval = [b](std::span<const PAdic> x) { return psi(b * x[0] * x[1]); };
  for (int i : {0, 1}) {
    int other = 1 - i;
    ph.affine[i] = AffineAccessor{[b, other](std::span<const PAdic> x) { return b * x[other]; },
                                  [p](std::span<const PAdic>) { return Angle(p, 0, 0); }};
  }
  return ph;
}

// sum over x, y in p^m Z / p^L Z of zeta_{p^K}^{b x y}, with b = u p^{-K}.
CycValue bilinear_oracle(std::int64_t p, int m, int K, std::int64_t u) {
  std::int64_t mod = pow_int(p, K);
  std::int64_t step = pow_int(p, m), count = pow_int(p, K - m);
  std::vector<Rational> hist(mod, Rational(0));
  for (std::int64_t i = 0; i < count; ++i)
    for (std::int64_t j = 0; j < count; ++j) {
      std::int64_t e = mulmod(mulmod(i * step % mod, j * step % mod, mod), u % mod, mod);
      hist[e] += 1;
    }
  return power_of(p, -2 * K) * CycValue::from_counts(p, K, hist);
}

}  // namespace

TEST_CASE("char_integral examples") {
  CHECK(char_integral(q(3, 1), 0) == 1);
  CHECK(char_integral(q(3, 1, 9), 0) == 0);
  CHECK(char_integral(q(3, 1, 9), 2) == Rational(1, 9));
  CHECK(char_integral(PAdic::zero(3), 1) == Rational(1, 3));
  CHECK(char_integral(q(5, 3, 25), -1) == 0);
}

TEST_CASE("char_integral against enumeration") {
  for (std::int64_t p : {2, 3, 5})
    for (int m = -1; m <= 2; ++m)
      for (int v = -4; v <= 1; ++v) {
        PAdic c = PAdic::from_parts(p, v, 1, 8);
        int level = std::max(m, -v);
        CycValue e = integrate(CellFunction::indicator(Cell::unit_box(p, 1, m)), linear_phase(p, c, level));
        CHECK(e == CycValue(char_integral(c, m), p));
      }
}

TEST_CASE("integrate examples") {
  CellFunction zp = CellFunction::indicator(Cell::unit_box(3, 1, 0));
  CHECK(integrate(zp, std::nullopt) == CycValue(Rational(1), 3));
  CHECK(integrate(zp, linear_phase(3, q(3, 1, 3), 1)).is_zero());
  CellFunction units(1, 3, {{Cell::box(3, {Rational(1)}, {1}), Rational(1)}, {Cell::box(3, {Rational(2)}, {1}), Rational(1)}});
  PhaseSpec kl;
  kl.n = 1;
  kl.p = 3;
  kl.levels = {1};
  PAdic third = q(3, 1, 3);
  kl.eval = [third](std::span<const PAdic> x) { return psi((x[0] + x[0].inverse()) * third); };
  CHECK(integrate(units, kl) == CycValue(Rational(-1, 3), 3));
  CHECK(integrate_stable(units, kl) == CycValue(Rational(-1, 3), 3));
  CHECK(integrate_stable(zp, linear_phase(3, q(3, 1), 0)) == CycValue(Rational(1), 3));
  CHECK_THROWS_AS(integrate_stable(zp, linear_phase(3, q(3, 1, 3), 0)), UnstableRefinement);
  IntegrateOptions tiny{10};
  CHECK_THROWS_AS(integrate(zp, linear_phase(3, q(3, 1, 81), 4), tiny), BudgetExceeded);
}

TEST_CASE("bilinear identity and elimination") {
  for (std::int64_t p : {2, 3, 5})
    for (int m = 1; m <= 2; ++m)
      for (int extra = 1; extra <= 2; ++extra) {
        int K = 2 * m + extra;
        PAdic b = PAdic::from_parts(p, -K, 1, 10);
        CellFunction box = CellFunction::indicator(Cell::unit_box(p, 2, m));
        PhaseSpec ph = bilinear_phase(p, b, K - m);
        CycValue expected(power_of(p, -K), p);
        CAPTURE(p);
        CAPTURE(m);
        CAPTURE(K);
        CHECK(bilinear_oracle(p, m, K, 1) == expected);
        if (pow_int(p, 2 * (K - 2 * m)) <= 1000000) CHECK(integrate(box, ph) == expected);
        auto [g, qh] = eliminate_linear(box, ph, 0);
        CHECK(integrate(g, qh) == expected);
      }
}

TEST_CASE("elimination of a linear Y coordinate yields a lattice condition") {
  // psi(Y A / a) over Y, A in Z_3 with a = 9: the A-line keeps A in 9 Z_3.
  PAdic ainv = q(3, 1, 9);
  PhaseSpec ph;
  ph.n = 2;
  ph.p = 3;
  ph.levels = {2, 2};
  ph.eval = [ainv](std::span<const PAdic> x) { return psi(x[0] * x[1] * ainv); };
  ph.affine[0] = AffineAccessor{[ainv](std::span<const PAdic> x) { return x[1] * ainv; },
                                [](std::span<const PAdic>) { return Angle(3, 0, 0); }};
  auto [g, qh] = eliminate_linear(CellFunction::indicator(Cell::unit_box(3, 2, 0)), ph, 0);
  CHECK(integrate(g, qh) == CycValue(Rational(1, 9), 3));
  std::vector<PAdic> in{q(3, 18)}, out{q(3, 3)};
  CHECK(qh.amplitude(in) == 1);
  CHECK(qh.amplitude(out) == 0);
}

TEST_CASE("elimination of an absent coordinate scales by the cell volume") {
  PhaseSpec ph;
  ph.n = 2;
  ph.p = 5;
  ph.levels = {0, 1};
  ph.eval = [](std::span<const PAdic> x) { return psi(x[1] * PAdic::from_rational(5, Rational(1, 5))); };
  ph.affine[0] = AffineAccessor{[](std::span<const PAdic>) { return PAdic::zero(5); },
                                [](std::span<const PAdic> x) { return psi(x[1] * PAdic::from_rational(5, Rational(1, 5))); }};
  CellFunction f = CellFunction::indicator(Cell::box(5, {Rational(0), Rational(2)}, {2, 1}));
  auto [g, qh] = eliminate_linear(f, ph, 0);
  CycValue direct = integrate(f, ph);
  CHECK(integrate(g, qh) == direct);
  CHECK(direct == Rational(1, 125) * CycValue::zeta_power(5, 1, 2));
}

TEST_CASE("a wrong affine declaration is caught") {
  PAdic ainv = q(3, 1, 9);
  PhaseSpec ph;
  ph.n = 2;
  ph.p = 3;
  ph.levels = {2, 2};
  ph.eval = [ainv](std::span<const PAdic> x) { return psi(x[0] * x[0] * x[1] * ainv); };
  ph.affine[0] = AffineAccessor{[ainv](std::span<const PAdic> x) { return x[1] * ainv; },
                                [](std::span<const PAdic>) { return Angle(3, 0, 0); }};
  CHECK_THROWS_AS(eliminate_linear(CellFunction::indicator(Cell::unit_box(3, 2, 0)), ph, 0), NotAffine);
}

TEST_CASE("cells") {
  Cell c = Cell::box(3, {Rational(10), Rational(1, 3)}, {2, 0});
  CHECK(c.center()[0] == q(3, 1));
  CHECK(c.volume() == Rational(1, 9));
  CHECK(c.split(0).size() == 3);
  CHECK(c.intersects(Cell::unit_box(3, 2, 0)) == false);
  Cell d = Cell::box(3, {Rational(1), Rational(1, 3)}, {1, 0});
  CHECK(c.intersect(d).has_value());
  CHECK(*c.intersect(d) == c);
  CHECK(c.min_valuation(1) == -1);
  CHECK(Cell::unit_box(3, 1, 2).min_valuation(0) == 2);
}

TEST_CASE("measure additivity, refinement and translation") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> d(0, 26);
  PAdic ainv = q(3, 1, 27);
  PhaseSpec ph;
  ph.n = 2;
  ph.p = 3;
  ph.levels = {3, 3};
  ph.eval = [ainv](std::span<const PAdic> x) { return psi((x[0] * x[0] * x[1] + x[1]) * ainv); };
  for (int t = 0; t < 10; ++t) {
    Cell c = Cell::box(3, {Rational(d(rng)), Rational(d(rng))}, {1, 1});
    CellFunction f = CellFunction::indicator(c, Rational(3));
    CycValue whole = integrate(f, ph);
    std::vector<CellEntry> parts;
    for (const auto& s : c.split(0)) parts.push_back({s, Rational(3)});
    CHECK(integrate(CellFunction(2, 3, parts), ph) == whole);
    CHECK(integrate(f.refined(), ph) == whole);
    std::vector<PAdic> pt{q(3, d(rng)), q(3, d(rng))};
    CHECK(f.refined().evaluate(pt) == f.evaluate(pt));
    Cell shifted = Cell::box(3, {Rational(d(rng)), Rational(d(rng))}, {1, 1});
    CHECK(integrate(CellFunction::indicator(shifted, Rational(3)), std::nullopt) == integrate(f, std::nullopt));
  }
}

TEST_CASE("cell function JSON round trip") {
  CellFunction f(2, 5, {{Cell::box(5, {Rational(3, 25), Rational(7)}, {0, 1}), Rational(-2, 3)},
                        {Cell::box(5, {Rational(0), Rational(1)}, {2, 1}), Rational(4)}});
  std::string text = f.to_json();
  CellFunction g = CellFunction::from_json(text);
  CHECK(g == f);
  CHECK(g.to_json() == text);
  CHECK(text.find("\"3*5^-2\"") != std::string::npos);
  CHECK_THROWS_AS(CellFunction::from_json("{\"n\": 2, \"p\": 5, \"cells\": ["), ParseError);
  CHECK_THROWS_AS(CellFunction::from_json("{\"n\": 1, \"p\": 6, \"cells\": []}"), ParseError);
}
