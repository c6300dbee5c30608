#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbint/errors.hpp"
#include "orbint/rational.hpp"

namespace orbint {

// Element p^v * u of Q_p known modulo p^(v+M).  Zero carries the absolute
// precision it is known to (kInfiniteValuation for an exact zero).
class PAdic {
 public:
  PAdic() = default;

  static PAdic zero(std::int64_t p, int absolute_precision = kInfiniteValuation);
  static PAdic from_integer(std::int64_t p, std::int64_t value, int precision = 0);
  static PAdic from_rational(std::int64_t p, const Rational& value, int precision = 0);
  // unit need not be reduced; it must be coprime to p.
  static PAdic from_parts(std::int64_t p, int v, std::int64_t unit, int precision);

  std::int64_t prime() const { return p_; }
  int valuation() const { return v_; }
  std::int64_t unit() const { return u_; }
  int precision() const { return is_zero() ? 0 : abs_ - v_; }
  int absolute_precision() const { return abs_; }
  bool is_zero() const { return v_ == kInfiniteValuation; }
  bool is_exact_zero() const { return is_zero() && abs_ == kInfiniteValuation; }

  // Canonical representative p^v * u as an exact rational.
  Rational to_rational() const;
  // x mod p^k as a rational in [0, p^k) with p-power denominator.
  Rational residue(int k) const;
  // "u*p^v", or "0".
  std::string to_string() const;

  PAdic operator-() const;
  PAdic inverse() const;
  PAdic with_absolute_precision(int absolute) const;

  friend PAdic operator+(const PAdic& x, const PAdic& y);
  friend PAdic operator-(const PAdic& x, const PAdic& y);
  friend PAdic operator*(const PAdic& x, const PAdic& y);
  friend PAdic operator/(const PAdic& x, const PAdic& y);
  PAdic& operator+=(const PAdic& y) { return *this = *this + y; }
  PAdic& operator-=(const PAdic& y) { return *this = *this - y; }
  PAdic& operator*=(const PAdic& y) { return *this = *this * y; }

  // Equality on the jointly represented digits.
  friend bool operator==(const PAdic& x, const PAdic& y);

  static int default_precision(std::int64_t p);

 private:
  std::int64_t p_ = 0;
  int v_ = kInfiniteValuation;
  std::int64_t u_ = 0;
  int abs_ = kInfiniteValuation;
};

// Reduced n/p^k in Q/Z.
class Angle {
 public:
  Angle() = default;
  Angle(std::int64_t p, std::int64_t numerator, int k);

  static Angle of_rational(std::int64_t p, const Rational& x);

  std::int64_t prime() const { return p_; }
  std::int64_t numerator() const { return n_; }
  int exponent() const { return k_; }
  bool is_zero() const { return n_ == 0; }
  // Numerator over p^K for K >= exponent().
  std::int64_t scaled(int K) const;
  std::string to_string() const;

  friend Angle operator+(const Angle& x, const Angle& y);
  Angle operator-() const;
  Angle& operator+=(const Angle& y) { return *this = *this + y; }
  friend bool operator==(const Angle& x, const Angle& y) {
    return x.n_ == y.n_ && x.k_ == y.k_ && (x.k_ == 0 || x.p_ == y.p_);
  }
  friend bool operator<(const Angle& x, const Angle& y) {
    return x.k_ != y.k_ ? x.k_ < y.k_ : x.n_ < y.n_;
  }

 private:
  void reduce();
  std::int64_t p_ = 0;
  std::int64_t n_ = 0;
  int k_ = 0;
};

int val(const PAdic& x);
Angle psi(const PAdic& x);
std::vector<std::int64_t> unit_reps(std::int64_t p, int r);

}  // namespace orbint
