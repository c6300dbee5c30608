#include "orbint/cyclotomic.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <map>
#include <sstream>

namespace orbint {

namespace {

std::int64_t totient(std::int64_t p, int M) { return M == 0 ? 1 : (p - 1) * pow_int(p, M - 1); }

// In-place reduction of a length p^M coefficient vector modulo Phi_{p^M}.
void reduce_counts(std::int64_t p, int M, std::vector<Rational>& a) {
  if (M == 0) return;
  std::int64_t phi = totient(p, M);
  std::int64_t step = pow_int(p, M - 1);
  for (std::int64_t j = static_cast<std::int64_t>(a.size()) - 1; j >= phi; --j) {
    if (a[j] == 0) continue;
    std::int64_t s = j - phi;
    for (std::int64_t i = 0; i + 1 < p; ++i) a[s + i * step] -= a[j];
  }
  a.resize(phi);
}

}  // namespace

void align(const CycValue& x, const CycValue& y, std::int64_t& p, int& M) {
  if (x.m_ > 0 && y.m_ > 0 && x.p_ != y.p_) throw MixedPrimes("cyclotomic values over different primes");
  M = std::max(x.m_, y.m_);
  p = x.m_ > 0 ? x.p_ : y.p_;
}

CycValue CycValue::zeta_power(std::int64_t p, int M, std::int64_t k) {
  std::int64_t mod = pow_int(p, M);
  std::vector<Rational> counts(mod);
  counts[((k % mod) + mod) % mod] = 1;
  return from_counts(p, M, std::move(counts));
}

CycValue CycValue::of_angle(const Angle& a) {
  if (a.exponent() == 0) return CycValue(Rational(1), a.prime() ? a.prime() : 2);
  return zeta_power(a.prime(), a.exponent(), a.numerator());
}

CycValue CycValue::from_counts(std::int64_t p, int M, std::vector<Rational> counts) {
  if (static_cast<std::int64_t>(counts.size()) != pow_int(p, M))
    throw std::invalid_argument("CycValue::from_counts: size mismatch");
  reduce_counts(p, M, counts);
  CycValue r(p, M, std::move(counts));
  r.descend();
  return r;
}

CycValue CycValue::from_coefficients(std::int64_t p, int M, std::vector<Rational> coeffs) {
  if (static_cast<std::int64_t>(coeffs.size()) != totient(p, M))
    throw std::invalid_argument("CycValue::from_coefficients: size mismatch");
  CycValue r(p, M, std::move(coeffs));
  r.descend();
  return r;
}

void CycValue::descend() {
  while (m_ >= 1) {
    if (m_ == 1) {
      for (std::size_t j = 1; j < c_.size(); ++j)
        if (c_[j] != 0) return;
      c_.resize(1);
      m_ = 0;
      return;
    }
    for (std::size_t j = 0; j < c_.size(); ++j)
      if (j % p_ != 0 && c_[j] != 0) return;
    std::vector<Rational> d(c_.size() / p_);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = c_[j * p_];
    c_ = std::move(d);
    --m_;
  }
}

Rational CycValue::rational() const {
  if (m_ != 0) throw std::domain_error("CycValue is not rational: " + to_string());
  return c_[0];
}

std::vector<Rational> CycValue::lifted(int M) const {
  if (M < m_) throw std::invalid_argument("CycValue::lifted below own order");
  if (M == m_) return c_;
  std::vector<Rational> out(totient(p_, M));
  std::int64_t stride = pow_int(p_, M - m_);
  for (std::size_t j = 0; j < c_.size(); ++j) out[j * stride] = c_[j];
  return out;
}

CycValue CycValue::operator-() const {
  CycValue r = *this;
  for (auto& q : r.c_) q = -q;
  return r;
}

CycValue operator+(const CycValue& x, const CycValue& y) {
  std::int64_t p;
  int M;
  align(x, y, p, M);
  CycValue xs = x, ys = y;
  xs.p_ = ys.p_ = p;
  std::vector<Rational> a = xs.lifted(M), b = ys.lifted(M);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] += b[j];
  CycValue r(p, M, std::move(a));
  r.descend();
  return r;
}

CycValue operator-(const CycValue& x, const CycValue& y) { return x + (-y); }

CycValue operator*(const Rational& q, const CycValue& x) {
  if (q == 0) return CycValue(Rational(0), x.p_);
  CycValue r = x;
  for (auto& c : r.c_) c *= q;
  return r;
}

CycValue operator*(const CycValue& x, const CycValue& y) {
  if (x.m_ == 0) return x.c_[0] * y;
  if (y.m_ == 0) return y.c_[0] * x;
  std::int64_t p;
  int M;
  align(x, y, p, M);
  std::vector<Rational> a = x.lifted(M), b = y.lifted(M);
  std::int64_t mod = pow_int(p, M);
  std::vector<Rational> prod(mod);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      prod[(i + j) % mod] += a[i] * b[j];
    }
  }
  return CycValue::from_counts(p, M, std::move(prod));
}

bool operator==(const CycValue& x, const CycValue& y) {
  if (x.m_ != y.m_) return false;
  if (x.m_ > 0 && x.p_ != y.p_) return false;
  return x.c_ == y.c_;
}

std::string CycValue::to_string() const {
  if (m_ == 0) return orbint::to_string(c_[0]);
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < c_.size(); ++j) {
    if (c_[j] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << orbint::to_string(c_[j]) << ")";
    if (j > 0) os << "*zeta(" << p_ << "^" << m_ << ")^" << j;
  }
  if (first) os << "0";
  return os.str();
}

CycValue cyc_accumulate(const std::vector<std::pair<Angle, Rational>>& terms) {
  std::int64_t p = 0;
  int M = 0;
  for (const auto& [angle, w] : terms) {
    if (angle.prime() != 0) {
      if (p != 0 && angle.prime() != p) throw MixedPrimes("cyc_accumulate over different primes");
      p = angle.prime();
    }
    M = std::max(M, angle.exponent());
  }
  if (p == 0) p = 2;
  std::vector<Rational> counts(pow_int(p, M));
  for (const auto& [angle, w] : terms) counts[angle.scaled(M)] += w;
  return CycValue::from_counts(p, M, std::move(counts));
}

ComplexApprox to_complex(const CycValue& c, int digits) {
  using Float = boost::multiprecision::cpp_bin_float_50;
  if (digits < 1 || digits > 40) throw std::invalid_argument("to_complex: digits must be in [1, 40]");
  const Float two_pi = 2 * boost::math::constants::pi<Float>();
  std::int64_t order = pow_int(c.prime(), c.order_exponent());
  Float re = 0, im = 0, mass = 0;
  const auto& coeffs = c.coefficients();
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0) continue;
    Float q = Float(coeffs[j].get_num().get_str()) / Float(coeffs[j].get_den().get_str());
    Float t = two_pi * Float(static_cast<long long>(j)) / Float(static_cast<long long>(order));
    re += q * cos(t);
    im += q * sin(t);
    mass += abs(q);
  }
  ComplexApprox out;
  out.value = {re.convert_to<double>(), im.convert_to<double>()};
  out.error_bound = ((mass + 1) * Float("1e-45")).convert_to<double>();
  out.real_text = re.str(digits, std::ios_base::fixed);
  out.imag_text = im.str(digits, std::ios_base::fixed);
  return out;
}

}  // namespace orbint
