#include "orbint/rational.hpp"

#include "orbint/errors.hpp"

namespace orbint {

int valuation(const Integer& x, std::int64_t p) {
  if (x == 0) return kInfiniteValuation;
  Integer q = x;
  Integer pp = static_cast<long>(p);
  int v = 0;
  while (mpz_divisible_p(q.get_mpz_t(), pp.get_mpz_t())) {
    mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), pp.get_mpz_t());
    ++v;
  }
  return v;
}

int valuation(const Rational& x, std::int64_t p) {
  if (x == 0) return kInfiniteValuation;
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

Integer ipow(std::int64_t p, unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), e);
  return r;
}

Rational power_of(std::int64_t p, int e) {
  if (e >= 0) return Rational(ipow(p, static_cast<unsigned>(e)));
  Rational r(Integer(1), ipow(p, static_cast<unsigned>(-e)));
  return r;
}

std::int64_t pow_int(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

int max_precision(std::int64_t p) {
  int m = 0;
  unsigned __int128 acc = 1;
  while (acc * static_cast<unsigned __int128>(p) < (static_cast<unsigned __int128>(1) << 62)) {
    acc *= static_cast<unsigned __int128>(p);
    ++m;
  }
  return m;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  __int128 r = static_cast<__int128>(a) * b % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1 != 0) {
    std::int64_t q = g / a1;
    std::int64_t t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw std::invalid_argument("inverse_mod: not invertible");
  x %= m;
  if (x < 0) x += m;
  return x;
}

std::int64_t reduce_mod(const Rational& x, std::int64_t p, int R) {
  if (R == 0) return 0;
  if (valuation(x, p) < 0) throw InsufficientPrecision("reduce_mod of a non-integral value");
  std::int64_t mod = pow_int(p, R);
  Integer m = static_cast<long>(mod);
  Integer num = x.get_num() % m;
  Integer den = x.get_den() % m;
  std::int64_t n = num.get_si();
  std::int64_t d = den.get_si();
  if (n < 0) n += mod;
  return mulmod(n, inverse_mod(d, mod), mod);
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw ParseError("bad rational '" + text + "'");
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& x) { return x.get_str(10); }

}  // namespace orbint
