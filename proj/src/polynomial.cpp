#include "orbint/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace orbint {

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

Polynomial Polynomial::constant(int nvars, const Rational& q) {
  Polynomial r(nvars);
  r.add_term({}, q);
  return r;
}

Polynomial Polynomial::variable(int nvars, int i) {
  if (i < 0 || i >= nvars) throw std::out_of_range("Polynomial::variable index");
  Polynomial r(nvars);
  r.add_term({{i, 1}}, Rational(1));
  return r;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) {
    int e = 0;
    for (const auto& f : m) e += f.second;
    d = std::max(d, e);
  }
  return d;
}

int Polynomial::degree_in(int i) const {
  int d = 0;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m)
      if (f.first == i) d = std::max(d, f.second);
  return d;
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& b) {
  if (n_ == 0) n_ = b.n_;
  for (const auto& [m, c] : b.terms_) add_term(m, c);
  return *this;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  r += b;
  return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r(std::max(a.n_, b.n_));
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(monomial_product(ma, mb), ca * cb);
  return r;
}

Polynomial operator*(const Rational& q, const Polynomial& a) {
  Polynomial r(a.n_);
  if (q == 0) return r;
  for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, q * c);
  return r;
}

Polynomial Polynomial::substitute_affine(const std::vector<Rational>& offset,
                                         const std::vector<Rational>& scale) const {
  std::vector<Polynomial> images;
  images.reserve(n_);
  for (int i = 0; i < n_; ++i) {
    Polynomial img(n_);
    img.add_term({}, offset[i]);
    img.add_term({{i, 1}}, scale[i]);
    images.push_back(std::move(img));
  }
  return compose(images);
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& images) const {
  int m = images.empty() ? 0 : images.front().nvars();
  Polynomial r(m);
  std::map<std::pair<int, int>, Polynomial> powers;
  auto power = [&](int var, int e) -> const Polynomial& {
    auto key = std::make_pair(var, e);
    auto it = powers.find(key);
    if (it != powers.end()) return it->second;
    Polynomial acc = Polynomial::constant(m, Rational(1));
    for (int k = 0; k < e; ++k) acc = acc * images[var];
    return powers.emplace(key, std::move(acc)).first->second;
  };
  for (const auto& [mono, c] : terms_) {
    Polynomial acc = Polynomial::constant(m, c);
    for (const auto& [var, e] : mono) acc = acc * power(var, e);
    r += acc;
  }
  r.n_ = m;
  return r;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial r(n_);
  for (const auto& [mono, c] : terms_) {
    for (std::size_t k = 0; k < mono.size(); ++k) {
      if (mono[k].first != i) continue;
      Monomial d = mono;
      int e = d[k].second;
      if (e == 1)
        d.erase(d.begin() + static_cast<std::ptrdiff_t>(k));
      else
        d[k].second = e - 1;
      r.add_term(d, c * e);
    }
  }
  return r;
}

Polynomial Polynomial::coefficient_of(int i, int e) const {
  Polynomial r(n_);
  for (const auto& [mono, c] : terms_) {
    int have = 0;
    Monomial rest;
    for (const auto& f : mono) {
      if (f.first == i)
        have = f.second;
      else
        rest.push_back(f);
    }
    if (have == e) r.add_term(rest, c);
  }
  return r;
}

Polynomial Polynomial::drop_variable(int i) const {
  Polynomial r(n_ - 1);
  for (const auto& [mono, c] : terms_) {
    Monomial m;
    for (const auto& f : mono) {
      if (f.first == i) throw std::invalid_argument("drop_variable: variable occurs");
      m.emplace_back(f.first > i ? f.first - 1 : f.first, f.second);
    }
    r.add_term(m, c);
  }
  return r;
}

Polynomial Polynomial::fix_variable(int i, const Rational& value) const {
  Polynomial r(n_);
  for (const auto& [mono, c] : terms_) {
    Rational coef = c;
    Monomial m;
    for (const auto& f : mono) {
      if (f.first == i) {
        for (int k = 0; k < f.second; ++k) coef *= value;
      } else {
        m.push_back(f);
      }
    }
    r.add_term(m, coef);
  }
  return r;
}

Polynomial Polynomial::renumber(int new_nvars, const std::vector<int>& positions) const {
  Polynomial r(new_nvars);
  for (const auto& [mono, c] : terms_) {
    Monomial m;
    for (const auto& f : mono) m.emplace_back(positions.at(f.first), f.second);
    std::sort(m.begin(), m.end());
    r.add_term(m, c);
  }
  return r;
}

Rational Polynomial::evaluate(std::span<const Rational> x) const {
  Rational s = 0;
  for (const auto& [mono, c] : terms_) {
    Rational t = c;
    for (const auto& [var, e] : mono)
      for (int k = 0; k < e; ++k) t *= x[var];
    s += t;
  }
  return s;
}

PAdic Polynomial::evaluate(std::span<const PAdic> x, int precision) const {
  if (x.empty()) throw std::invalid_argument("Polynomial::evaluate: empty point");
  return PAdicEvaluator(*this, x.front().prime(), precision)(x);
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << orbint::to_string(c) << ")";
    for (const auto& [var, e] : mono) {
      os << "*x" << var;
      if (e > 1) os << "^" << e;
    }
  }
  return os.str();
}

PAdicEvaluator::PAdicEvaluator(const Polynomial& poly, std::int64_t p, int precision) : p_(p) {
  for (const auto& [mono, c] : poly.terms()) terms_.emplace_back(PAdic::from_rational(p, c, precision), mono);
}

PAdic PAdicEvaluator::operator()(std::span<const PAdic> x) const {
  PAdic s = PAdic::zero(p_);
  for (const auto& [c, mono] : terms_) {
    PAdic t = c;
    for (const auto& [var, e] : mono)
      for (int k = 0; k < e; ++k) t *= x[var];
    s += t;
  }
  return s;
}

}  // namespace orbint
