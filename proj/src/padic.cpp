#include "orbint/padic.hpp"

#include <algorithm>

namespace orbint {

namespace {

int sat_add(int a, int b) {
  if (a == kInfiniteValuation || b == kInfiniteValuation) return kInfiniteValuation;
  return a + b;
}

void check_prime(std::int64_t p) {
  if (p < 2) throw std::invalid_argument("PAdic: prime must be >= 2");
}

void check_same(const PAdic& x, const PAdic& y) {
  if (x.prime() != y.prime()) throw MixedPrimes("PAdic operands use different primes");
}

}  // namespace

int PAdic::default_precision(std::int64_t p) { return std::min(24, max_precision(p)); }

PAdic PAdic::zero(std::int64_t p, int absolute_precision) {
  check_prime(p);
  PAdic z;
  z.p_ = p;
  z.abs_ = absolute_precision;
  return z;
}

PAdic PAdic::from_parts(std::int64_t p, int v, std::int64_t unit, int precision) {
  check_prime(p);
  if (precision < 1 || precision > max_precision(p))
    throw InsufficientPrecision("precision " + std::to_string(precision) + " out of range");
  std::int64_t mod = pow_int(p, precision);
  std::int64_t u = unit % mod;
  if (u < 0) u += mod;
  if (u % p == 0) throw std::invalid_argument("PAdic: mantissa not a unit");
  PAdic x;
  x.p_ = p;
  x.v_ = v;
  x.u_ = u;
  x.abs_ = v + precision;
  return x;
}

PAdic PAdic::from_integer(std::int64_t p, std::int64_t value, int precision) {
  return from_rational(p, Rational(static_cast<long>(value)), precision);
}

PAdic PAdic::from_rational(std::int64_t p, const Rational& value, int precision) {
  check_prime(p);
  if (precision == 0) precision = default_precision(p);
  if (value == 0) return zero(p);
  int v = orbint::valuation(value, p);
  Rational unit = value * power_of(p, -v);
  return from_parts(p, v, reduce_mod(unit, p, precision), precision);
}

Rational PAdic::to_rational() const {
  if (is_zero()) return Rational(0);
  return Rational(static_cast<long>(u_)) * power_of(p_, v_);
}

Rational PAdic::residue(int k) const {
  if (abs_ < k) throw InsufficientPrecision("residue mod p^" + std::to_string(k) + " not represented");
  if (is_zero() || v_ >= k) return Rational(0);
  std::int64_t u = u_ % pow_int(p_, k - v_);
  return Rational(static_cast<long>(u)) * power_of(p_, v_);
}

std::string PAdic::to_string() const {
  if (is_zero()) return "0";
  return std::to_string(u_) + "*" + std::to_string(p_) + "^" + std::to_string(v_);
}

PAdic PAdic::operator-() const {
  if (is_zero()) return *this;
  PAdic r = *this;
  std::int64_t mod = pow_int(p_, abs_ - v_);
  r.u_ = (mod - u_) % mod;
  return r;
}

PAdic PAdic::inverse() const {
  if (is_zero()) throw std::domain_error("PAdic: inverse of zero");
  int m = abs_ - v_;
  PAdic r;
  r.p_ = p_;
  r.v_ = -v_;
  r.u_ = inverse_mod(u_, pow_int(p_, m));
  r.abs_ = -v_ + m;
  return r;
}

PAdic PAdic::with_absolute_precision(int absolute) const {
  if (absolute >= abs_) return *this;
  if (is_zero() || absolute <= v_) return zero(p_, absolute);
  PAdic r = *this;
  r.abs_ = absolute;
  r.u_ = u_ % pow_int(p_, absolute - v_);
  return r;
}

PAdic operator+(const PAdic& x, const PAdic& y) {
  check_same(x, y);
  int n = std::min(x.abs_, y.abs_);
  if (x.is_zero()) return y.with_absolute_precision(n);
  if (y.is_zero()) return x.with_absolute_precision(n);
  std::int64_t p = x.p_;
  int vmin = std::min(x.v_, y.v_);
  int width = n - vmin;
  std::int64_t mod = pow_int(p, width);
  auto term = [&](const PAdic& z) -> std::int64_t {
    int shift = z.v_ - vmin;
    if (shift >= width) return 0;
    return mulmod(z.u_ % mod, pow_int(p, shift), mod);
  };
  std::int64_t s = (term(x) + term(y)) % mod;
  if (s == 0) return PAdic::zero(p, n);
  int k = 0;
  while (s % p == 0) {
    s /= p;
    ++k;
  }
  PAdic r;
  r.p_ = p;
  r.v_ = vmin + k;
  r.u_ = s;
  r.abs_ = n;
  return r;
}

PAdic operator-(const PAdic& x, const PAdic& y) { return x + (-y); }

PAdic operator*(const PAdic& x, const PAdic& y) {
  check_same(x, y);
  if (x.is_zero() && y.is_zero()) return PAdic::zero(x.p_, sat_add(x.abs_, y.abs_));
  if (x.is_zero()) return PAdic::zero(x.p_, sat_add(x.abs_, y.v_));
  if (y.is_zero()) return PAdic::zero(x.p_, sat_add(y.abs_, x.v_));
  int m = std::min(x.abs_ - x.v_, y.abs_ - y.v_);
  std::int64_t mod = pow_int(x.p_, m);
  PAdic r;
  r.p_ = x.p_;
  r.v_ = x.v_ + y.v_;
  r.u_ = mulmod(x.u_ % mod, y.u_ % mod, mod);
  r.abs_ = r.v_ + m;
  return r;
}

PAdic operator/(const PAdic& x, const PAdic& y) { return x * y.inverse(); }

bool operator==(const PAdic& x, const PAdic& y) {
  if (x.p_ != y.p_) return false;
  return (x - y).is_zero();
}

Angle::Angle(std::int64_t p, std::int64_t numerator, int k) : p_(p), n_(numerator), k_(k) {
  if (k < 0) throw std::invalid_argument("Angle: negative exponent");
  if (k > max_precision(p)) throw InsufficientPrecision("Angle denominator too large");
  reduce();
}

Angle Angle::of_rational(std::int64_t p, const Rational& x) {
  int v = orbint::valuation(x, p);
  if (v >= 0) return Angle(p, 0, 0);
  Rational scaled = x * power_of(p, -v);
  return Angle(p, reduce_mod(scaled, p, -v), -v);
}

void Angle::reduce() {
  if (k_ == 0) {
    n_ = 0;
    return;
  }
  std::int64_t mod = pow_int(p_, k_);
  n_ %= mod;
  if (n_ < 0) n_ += mod;
  while (k_ > 0 && n_ % p_ == 0) {
    n_ /= p_;
    --k_;
  }
  if (k_ == 0) n_ = 0;
}

std::int64_t Angle::scaled(int K) const {
  if (K < k_) throw std::invalid_argument("Angle::scaled below own exponent");
  return n_ * pow_int(p_, K - k_);
}

std::string Angle::to_string() const {
  if (k_ == 0) return "0";
  return std::to_string(n_) + "/" + std::to_string(p_) + "^" + std::to_string(k_);
}

Angle operator+(const Angle& x, const Angle& y) {
  if (x.k_ == 0) return y;
  if (y.k_ == 0) return x;
  if (x.p_ != y.p_) throw MixedPrimes("Angle operands use different primes");
  int k = std::max(x.k_, y.k_);
  std::int64_t mod = pow_int(x.p_, k);
  return Angle(x.p_, (x.scaled(k) + y.scaled(k)) % mod, k);
}

Angle Angle::operator-() const { return k_ == 0 ? *this : Angle(p_, -n_, k_); }

int val(const PAdic& x) { return x.valuation(); }

Angle psi(const PAdic& x) {
  if (x.absolute_precision() < 0)
    throw InsufficientPrecision("polar digits of " + x.to_string() + " not represented");
  if (x.is_zero() || x.valuation() >= 0) return Angle(x.prime(), 0, 0);
  int k = -x.valuation();
  return Angle(x.prime(), x.unit() % pow_int(x.prime(), k), k);
}

std::vector<std::int64_t> unit_reps(std::int64_t p, int r) {
  std::vector<std::int64_t> out;
  if (r <= 0) return {1};
  std::int64_t mod = pow_int(p, r);
  for (std::int64_t u = 1; u < mod; ++u)
    if (u % p != 0) out.push_back(u);
  return out;
}

}  // namespace orbint
