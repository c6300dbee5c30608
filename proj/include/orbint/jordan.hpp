#pragma once

#include <string>
#include <vector>

#include "orbint/padic.hpp"
#include "orbint/polynomial.hpp"

namespace orbint {

// Degree-3 Jordan algebra given by its cubic norm N and identity I.  The
// trace, the trace pairing T and the adjoint are derived from them:
// tr = grad N(I), T(x, y) = tr(x) tr(y) - S(x, y) with S the polarized
// quadratic coefficient of N(I + t x), and T(x#, y) = (d/dy) N(x).
class CubicNorm {
 public:
  CubicNorm(std::string name, std::vector<std::string> labels, Polynomial norm, std::vector<Rational> identity);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(const std::string& label) const;

  const std::vector<Rational>& identity() const { return identity_; }
  const Polynomial& norm_polynomial() const { return norm_; }
  const std::vector<Rational>& trace_vector() const { return trace_; }
  Polynomial trace_polynomial() const;
  const std::vector<Polynomial>& sharp_polynomials() const { return sharp_; }
  const std::vector<std::vector<Rational>>& pairing_matrix() const { return pairing_; }

  // Structure tables for audit.
  std::string to_json() const;

 private:
  std::string name_;
  std::vector<std::string> labels_;
  Polynomial norm_;
  std::vector<Rational> identity_;
  std::vector<Rational> trace_;
  std::vector<std::vector<Rational>> pairing_;
  std::vector<Polynomial> sharp_;
};

// Models 1..6; instances are built once and shared.
const CubicNorm& model_algebra(int model_id);

class JordanElement {
 public:
  JordanElement(const CubicNorm& algebra, std::vector<PAdic> coords);
  static JordanElement identity(const CubicNorm& algebra, std::int64_t p);

  const CubicNorm& algebra() const { return *alg_; }
  const std::vector<PAdic>& coords() const { return x_; }
  std::int64_t prime() const { return x_.front().prime(); }

  friend JordanElement operator+(const JordanElement& a, const JordanElement& b);
  friend JordanElement operator-(const JordanElement& a, const JordanElement& b);
  friend JordanElement operator*(const PAdic& s, const JordanElement& a);
  friend bool operator==(const JordanElement& a, const JordanElement& b);

 private:
  const CubicNorm* alg_;
  std::vector<PAdic> x_;
};

PAdic trace(const JordanElement& a);
PAdic norm(const JordanElement& a);
JordanElement sharp(const JordanElement& a);
// Trace pairing; pair(sharp(A), A) = 3 N(A).
PAdic pair(const JordanElement& a, const JordanElement& b);

}  // namespace orbint
