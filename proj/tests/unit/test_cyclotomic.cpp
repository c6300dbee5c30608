#include <algorithm>
#include <random>

#include "doctest.h"
#include "orbint/cyclotomic.hpp"
#include "orbint/errors.hpp"

using namespace orbint;

namespace {

Rational frac(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("accumulation examples") {
  CHECK(cyc_accumulate({{Angle(), Rational(1)}, {Angle(), Rational(1)}}) == CycValue(Rational(2)));
  CHECK(cyc_accumulate({{Angle(3, 1, 1), Rational(1)}, {Angle(3, 2, 1), Rational(1)}}) == CycValue(Rational(-1), 3));
  std::vector<std::pair<Angle, Rational>> orbit;
  for (int k = 1; k < 5; ++k) orbit.push_back({Angle(5, k, 1), Rational(1)});
  CHECK(cyc_accumulate(orbit) == CycValue(Rational(-1), 5));
  CHECK_THROWS_AS(cyc_accumulate({{Angle(3, 1, 1), Rational(1)}, {Angle(5, 1, 1), Rational(1)}}), MixedPrimes);
}

TEST_CASE("values descend to the smallest field") {
  // sum over the full box mod 9 of zeta_9^{3k} is rational.
  std::vector<std::pair<Angle, Rational>> t;
  for (int k = 0; k < 9; ++k) t.push_back({Angle(3, 3 * k, 2), Rational(1)});
  CycValue v = cyc_accumulate(t);
  CHECK(v.is_rational());
  CHECK(v == CycValue(Rational(0), 3));
  CycValue z = CycValue::zeta_power(3, 2, 3);
  CHECK(z.order_exponent() == 1);
  CHECK(z == CycValue::zeta_power(3, 1, 1));
}

TEST_CASE("order independence and character homomorphism") {
  std::mt19937_64 rng(9);
  for (std::int64_t p : {2, 3, 5}) {
    std::vector<std::pair<Angle, Rational>> t;
    std::uniform_int_distribution<std::int64_t> d(0, 200);
    for (int i = 0; i < 30; ++i)
      t.push_back({Angle(p, d(rng), static_cast<int>(d(rng) % 4)), frac(static_cast<long>(d(rng) - 100), 7)});
    CycValue a = cyc_accumulate(t);
    std::shuffle(t.begin(), t.end(), rng);
    CHECK(a == cyc_accumulate(t));
    Angle x(p, d(rng), 3), y(p, d(rng), 2);
    CHECK(CycValue::of_angle(x + y) == CycValue::of_angle(x) * CycValue::of_angle(y));
  }
}

TEST_CASE("complex embedding") {
  auto c = to_complex(CycValue(Rational(2)), 10);
  CHECK(std::abs(c.value - std::complex<double>(2, 0)) < 1e-12);
  auto m = to_complex(CycValue::zeta_power(3, 1, 1) + CycValue::zeta_power(3, 1, 2), 10);
  CHECK(std::abs(m.value - std::complex<double>(-1, 0)) < 1e-12);
  CycValue k = Rational(1, 5) * (CycValue(Rational(2), 5) + CycValue::zeta_power(5, 1, 2) + CycValue::zeta_power(5, 1, 3));
  auto kc = to_complex(k, 30);
  CHECK(std::abs(kc.value.real() - (3 - std::sqrt(5.0)) / 10) < 1e-12);
  CHECK(std::abs(kc.value.imag()) < 1e-12);
  CHECK(kc.real_text.substr(0, 12) == "0.0763932022");
}
