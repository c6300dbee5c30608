#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "orbint/padic.hpp"
#include "orbint/rational.hpp"

namespace orbint {

// Element of Q(zeta_{p^M}) in the power basis 1, zeta, ..., zeta^(phi-1).
// Always stored over the smallest field containing it, so equal values have
// identical representations.
class CycValue {
 public:
  CycValue() : p_(2), m_(0), c_(1) {}
  explicit CycValue(const Rational& q, std::int64_t p = 2) : p_(p), m_(0), c_{q} {}

  static CycValue zeta_power(std::int64_t p, int M, std::int64_t k);
  static CycValue of_angle(const Angle& a);
  // Sum_k counts[k] * zeta_{p^M}^k, counts.size() == p^M.
  static CycValue from_counts(std::int64_t p, int M, std::vector<Rational> counts);
  // Unreduced coefficients in the basis 1..zeta^(phi-1) of order p^M.
  static CycValue from_coefficients(std::int64_t p, int M, std::vector<Rational> coeffs);

  std::int64_t prime() const { return p_; }
  int order_exponent() const { return m_; }
  const std::vector<Rational>& coefficients() const { return c_; }
  bool is_zero() const { return m_ == 0 && c_[0] == 0; }
  bool is_rational() const { return m_ == 0; }
  Rational rational() const;

  // Coefficients in Q(zeta_{p^M}) for M >= order_exponent().
  std::vector<Rational> lifted(int M) const;

  CycValue operator-() const;
  friend CycValue operator+(const CycValue& x, const CycValue& y);
  friend CycValue operator-(const CycValue& x, const CycValue& y);
  friend CycValue operator*(const CycValue& x, const CycValue& y);
  friend CycValue operator*(const Rational& q, const CycValue& x);
  CycValue& operator+=(const CycValue& y) { return *this = *this + y; }
  friend bool operator==(const CycValue& x, const CycValue& y);
  friend bool operator!=(const CycValue& x, const CycValue& y) { return !(x == y); }

  std::string to_string() const;

 private:
  CycValue(std::int64_t p, int m, std::vector<Rational> c) : p_(p), m_(m), c_(std::move(c)) {}
  void descend();
  friend void align(const CycValue&, const CycValue&, std::int64_t&, int&);

  std::int64_t p_;
  int m_;
  std::vector<Rational> c_;
};

struct ComplexApprox {
  std::complex<double> value;
  double error_bound;
  std::string real_text;
  std::string imag_text;
};

CycValue cyc_accumulate(const std::vector<std::pair<Angle, Rational>>& terms);
ComplexApprox to_complex(const CycValue& c, int digits);

}  // namespace orbint
