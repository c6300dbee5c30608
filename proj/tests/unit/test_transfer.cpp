#include <random>

#include "../support/random_data.hpp"
#include "doctest.h"
#include "orbint/errors.hpp"
#include "orbint/transfer.hpp"

using namespace orbint;

namespace {

PAdic elt(std::int64_t p, int r, std::int64_t u) { return PAdic::from_parts(p, r, u, PAdic::default_precision(p)); }

// p^{-K} sum over x = sign mod p^m, x mod p^K, of zeta_{p^K}^{(x + 1/x) / u}, a = u p^K.
CycValue piece_oracle(std::int64_t p, int K, std::int64_t u, int sign, int m) {
  std::int64_t mod = pow_int(p, K), step = pow_int(p, m);
  std::vector<Rational> hist(mod, Rational(0));
  std::int64_t ubar = inverse_mod(u % mod, mod);
  for (std::int64_t x = ((sign % step) + step) % step; x < mod; x += step) {
    std::int64_t k = mulmod((x + inverse_mod(x, mod)) % mod, ubar, mod);
    hist[k] += 1;
  }
  return power_of(p, -K) * CycValue::from_counts(p, K, hist);
}

StepFunction indicator_step(std::int64_t p, int v, const Rational& value = Rational(1)) {
  std::vector<CellEntry> e;
  for (std::int64_t u = 1; u < p; ++u) e.push_back({Cell({elt(p, v, u)}, {v + 1}), value});
  return StepFunction(CellFunction(1, p, e));
}

}  // namespace

TEST_CASE("step functions stay inside F^x") {
  CHECK_THROWS_AS(StepFunction(CellFunction::indicator(Cell::unit_box(3, 1, 0))), NotInDomain);
  CHECK_THROWS_AS(StepFunction(CellFunction::indicator(Cell::unit_box(3, 2, 0))), NotInDomain);
  CHECK_THROWS_AS(StepFunction(CellFunction::indicator(Cell({elt(3, 2, 1)}, {4})), 0, 1), NotInDomain);
  StepFunction s = indicator_step(3, 1, Rational(7));
  CHECK(s.r_min() == 1);
  CHECK(s.r_max() == 1);
  CHECK(s(elt(3, 1, 2)) == 7);
  CHECK(s(elt(3, 2, 1)) == 0);
  StepFunction back = StepFunction::from_json(s.to_json());
  CHECK(back.function() == s.function());
  CHECK(back.r_max() == 1);
}

TEST_CASE("germ reference pieces") {
  GermData zero{CycValue(Rational(0), 3), CycValue(Rational(0), 3), 1, 0};
  CHECK(germ_reference(elt(3, 3, 1), zero).is_zero());
  GermData both{CycValue(Rational(1), 3), CycValue(Rational(1), 3), 1, 2};
  CycValue plus = piece_oracle(3, 3, 1, 1, 1), minus = piece_oracle(3, 3, 1, -1, 1);
  CHECK(germ_reference(elt(3, 3, 1), both) == plus + minus);
  GermData only{CycValue(Rational(1), 3), CycValue(Rational(0), 3), 1, 2};
  CHECK(germ_reference(elt(3, 3, 1), only) == plus);
  CHECK_THROWS_AS(germ_reference(elt(3, 1, 1), both), BelowThreshold);
  for (std::int64_t p : {3, 5})
    for (int K = 2; K <= 4; ++K)
      for (std::int64_t u : unit_reps(p, 1)) {
        CHECK(germ_piece(elt(p, K, u), 1, 1) == piece_oracle(p, K, u, 1, 1));
        CHECK(germ_piece(elt(p, K, u), -1, 2) == piece_oracle(p, K, u, -1, 2));
      }
}

TEST_CASE("small-a localization of the Kloosterman integral") {
  for (std::int64_t p : {3, 5})
    for (int m = 1; m <= 2; ++m)
      for (int r = 2 * m + 1; r <= 2 * m + 2; ++r)
        for (std::int64_t u : unit_reps(p, 1)) {
          PAdic a = elt(p, r, u);
          CHECK(kloosterman(p, r, u) == germ_piece(a, 1, m) + germ_piece(a, -1, m));
        }
}

TEST_CASE("germ of the unit functions") {
  for (std::int64_t p : {3, 5}) {
    for (int id : {1, 2, 3}) {
      ModelSpec m = ModelSpec::get(id);
      GermResult g = check_germ_membership(m, unit_phi(m, p), nullptr);
      CHECK(g.member);
      CHECK(g.germ.c_plus == CycValue(Rational(1), p));
      CHECK(g.germ.c_minus == CycValue(Rational(1), p));
      GermResult g5 = check_germ_membership(m, unit_phi(m, p).scaled(Rational(5)), nullptr);
      CHECK(g5.germ.c_plus == CycValue(Rational(5), p));
    }
    ModelSpec m6 = ModelSpec::get(6);
    CellFunction php = unit_phiprime(m6, p);
    GermResult g = check_germ_membership(m6, unit_phi(m6, p), &php);
    CHECK(g.germ.c_plus == CycValue(Rational(1), p));
    CHECK(g.probes.size() == 2 * (p - 1));
  }
}

TEST_CASE("germ away from the identity is zero") {
  ModelSpec m = ModelSpec::get(2);
  std::vector<Rational> c(8, Rational(0));
  c[1] = 2;
  c[7] = 1;
  std::vector<int> lv(8, 1);
  lv[0] = 0;
  GermResult g = check_germ_membership(m, CellFunction::indicator(Cell::box(3, c, lv)), nullptr);
  CHECK(g.germ.c_plus.is_zero());
  CHECK(g.germ.c_minus.is_zero());
  for (const auto& pr : g.probes) CHECK(pr.left.is_zero());
}

TEST_CASE("germ membership on random functions") {
  std::mt19937_64 rng(21);
  for (int id : {1, 3, 5, 6}) {
    ModelSpec m = ModelSpec::get(id);
    for (int t = 0; t < 3; ++t) {
      CellFunction phi = testing::random_germ_phi(rng, m, 3);
      CellFunction php = m.family == Family::B ? testing::random_phiprime(rng, m, 3) : CellFunction();
      GermResult g = check_germ_membership(m, phi, m.family == Family::B ? &php : nullptr);
      CHECK(g.member);
    }
  }
}

TEST_CASE("a wrong germ is reported") {
  // phi with the identity cell removed from an a-slice that the probes hit.
  ModelSpec m = ModelSpec::get(1);
  CellFunction phi = unit_phi(m, 3);
  GermOptions opt;
  opt.r_probe = 0;  // |a| = 1 lies outside the germ regime
  CHECK_THROWS_AS(check_germ_membership(m, phi, nullptr, opt), Mismatch);
}

TEST_CASE("transfer of step functions to phi") {
  ModelSpec m1 = ModelSpec::get(1);
  TransferResult z = build_phi_from_step(StepFunction::zero(3), m1);
  CHECK(z.function.is_zero());
  CHECK(z.exact());
  TransferResult u = build_phi_from_step(indicator_step(3, 0), m1);
  CHECK(u.exact());
  for (const auto& pr : u.probes)
    if (pr.a.valuation() == 0) CHECK(pr.got == CycValue(Rational(1), 3));
  TransferResult s = build_phi_from_step(indicator_step(3, 1, Rational(7)), m1);
  CHECK(s.exact());
  std::mt19937_64 rng(5);
  for (int id : {1, 2, 6}) {
    ModelSpec m = ModelSpec::get(id);
    for (int t = 0; t < 3; ++t) {
      StepFunction f = testing::random_step(rng, 5);
      TransferResult r = build_phi_from_step(f, m);
      CHECK(r.exact());
      CHECK(r.phiprime.has_value() == (m.family == Family::B));
    }
  }
  CHECK_THROWS_AS(build_phi_from_step(indicator_step(2, 0), ModelSpec::get(5)), OddPrimeRequired);
}

TEST_CASE("transfer of step functions to f'") {
  CHECK(build_fprime_from_step(StepFunction::zero(5)).function.is_zero());
  TransferResult u = build_fprime_from_step(indicator_step(3, 0));
  CHECK(u.exact());
  TransferResult u3 = build_fprime_from_step(indicator_step(3, 0, Rational(3)));
  CHECK(u3.function.entries()[0].value == 3 * u.function.entries()[0].value);
  std::mt19937_64 rng(6);
  for (std::int64_t p : {2, 3, 5})
    for (int t = 0; t < 5; ++t) CHECK(build_fprime_from_step(testing::random_step(rng, p)).exact());
}

TEST_CASE("probe grid meets every support cell") {
  std::mt19937_64 rng(8);
  StepFunction f = testing::random_step(rng, 3);
  auto grid = probe_grid(f);
  for (const auto& e : f.function().entries()) {
    bool hit = false;
    for (const auto& a : grid) hit = hit || e.cell.coordinate_contains(0, a);
    CHECK(hit);
  }
}
