#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orbint/padic.hpp"
#include "orbint/rational.hpp"

namespace orbint {

// Sorted (variable, exponent) pairs with positive exponents.
using Monomial = std::vector<std::pair<int, int>>;

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int nvars) : n_(nvars) {}

  static Polynomial constant(int nvars, const Rational& q);
  static Polynomial variable(int nvars, int i);

  int nvars() const { return n_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  void add_term(const Monomial& m, const Rational& c);
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  int degree_in(int i) const;
  Rational constant_term() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& q, const Polynomial& a);
  Polynomial& operator+=(const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  // x_i -> offset_i + scale_i * t_i.
  Polynomial substitute_affine(const std::vector<Rational>& offset,
                               const std::vector<Rational>& scale) const;
  // Replace each x_i by images[i] (polynomials in images[i].nvars()).
  Polynomial compose(const std::vector<Polynomial>& images) const;
  Polynomial derivative(int i) const;
  // Coefficient of x_i^e as a polynomial not involving x_i.
  Polynomial coefficient_of(int i, int e) const;
  // Remove variable i (which must not occur) and renumber the rest.
  Polynomial drop_variable(int i) const;
  // Set x_i to a constant, keeping the variable count.
  Polynomial fix_variable(int i, const Rational& value) const;
  // Embed into a larger variable set: variable i becomes positions[i].
  Polynomial renumber(int new_nvars, const std::vector<int>& positions) const;

  Rational evaluate(std::span<const Rational> x) const;
  PAdic evaluate(std::span<const PAdic> x, int precision = 0) const;

  std::string to_string() const;

 private:
  int n_ = 0;
  std::map<Monomial, Rational> terms_;
};

Monomial monomial_product(const Monomial& a, const Monomial& b);

// Fast evaluator of a polynomial at p-adic points: coefficients converted once.
class PAdicEvaluator {
 public:
  PAdicEvaluator() = default;
  PAdicEvaluator(const Polynomial& poly, std::int64_t p, int precision = 0);
  PAdic operator()(std::span<const PAdic> x) const;

 private:
  std::int64_t p_ = 0;
  std::vector<std::pair<PAdic, Monomial>> terms_;
};

}  // namespace orbint
