#include <random>

#include "doctest.h"
#include "orbint/cyclotomic.hpp"
#include "orbint/expsum.hpp"

using namespace orbint;

namespace {

CycValue as_value(const std::vector<Integer>& w, std::int64_t p, int R) {
  std::vector<Rational> c(w.begin(), w.end());
  return CycValue::from_counts(p, R, std::move(c));
}

ModPoly random_poly(std::mt19937_64& rng, std::int64_t p, int R, int nvars, int max_deg, int nterms) {
  ModPoly f;
  f.p = p;
  f.R = R;
  f.nvars = nvars;
  std::uniform_int_distribution<std::int64_t> coef(0, f.modulus() - 1);
  std::uniform_int_distribution<int> var(0, nvars - 1), deg(1, max_deg);
  for (int t = 0; t < nterms; ++t) {
    int d = deg(rng);
    std::map<int, int> m;
    for (int k = 0; k < d; ++k) m[var(rng)] += 1;
    f.terms.emplace_back(Monomial(m.begin(), m.end()), coef(rng));
  }
  f.normalize();
  return f;
}

}  // namespace

TEST_CASE("exp_sum agrees with brute force on random polynomials") {
  std::mt19937_64 rng(20240611);
  for (std::int64_t p : {2, 3, 5}) {
    for (int R = 1; R <= 3; ++R) {
      for (int trial = 0; trial < 25; ++trial) {
        int nvars = 1 + static_cast<int>(rng() % 4);
        if (pow_int(p, R * nvars) > 200000) nvars = 2;
        ModPoly f = random_poly(rng, p, R, nvars, 3, 1 + static_cast<int>(rng() % 6));
        CAPTURE(p);
        CAPTURE(R);
        CAPTURE(trial);
        CHECK(as_value(exp_sum(f), p, R) == as_value(exp_sum_bruteforce(f), p, R));
      }
    }
  }
}

TEST_CASE("exp_sum handles quadratic forms with many variables") {
  std::mt19937_64 rng(77);
  for (std::int64_t p : {2, 3}) {
    for (int trial = 0; trial < 20; ++trial) {
      ModPoly f = random_poly(rng, p, 1, 6, 2, 8);
      CHECK(as_value(exp_sum(f), p, 1) == as_value(exp_sum_bruteforce(f), p, 1));
    }
  }
}

TEST_CASE("Kloosterman-type sum via the engine") {
  // sum over x mod 9 of zeta_9^(x^2 + x) with a cubic perturbation
  ModPoly f;
  f.p = 3;
  f.R = 2;
  f.nvars = 2;
  f.terms = {{{{0, 2}}, 1}, {{{0, 1}}, 1}, {{{0, 1}, {1, 2}}, 4}, {{{1, 3}}, 2}};
  f.normalize();
  CHECK(as_value(exp_sum(f), 3, 2) == as_value(exp_sum_bruteforce(f), 3, 2));
}

TEST_CASE("find_partition on a determinant-like monomial set") {
  // det of 3x3: monomials x0 x4 x8 etc.; three fixed variables suffice.
  std::vector<Monomial> monos = {{{0, 1}, {4, 1}, {8, 1}}, {{0, 1}, {5, 1}, {7, 1}}, {{1, 1}, {3, 1}, {8, 1}},
                                 {{1, 1}, {5, 1}, {6, 1}}, {{2, 1}, {3, 1}, {7, 1}}, {{2, 1}, {4, 1}, {6, 1}}};
  auto part = find_partition(monos, 9, false);
  REQUIRE(part.has_value());
  CHECK(part->fixed.size() == 3);
}
