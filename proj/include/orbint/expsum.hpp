#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "orbint/polynomial.hpp"
#include "orbint/rational.hpp"

namespace orbint {

// Integer polynomial with coefficients reduced mod p^R.
struct ModPoly {
  std::int64_t p = 2;
  int R = 0;
  int nvars = 0;
  std::vector<std::pair<Monomial, std::int64_t>> terms;

  std::int64_t modulus() const { return pow_int(p, R); }
  // poly must have p-integral coefficients.
  static ModPoly from_polynomial(const Polynomial& poly, std::int64_t p, int R);
  void normalize();
  std::int64_t evaluate(std::span<const std::int64_t> x) const;
};

struct ExpSumOptions {
  std::uint64_t budget = 1000000000ULL;
  int restarts = 12;
};

struct ExpSumStats {
  std::uint64_t leaves = 0;
};

// Weights w with sum over t in (Z/p^R)^n of zeta_{p^R}^{f(t)} = sum_k w[k] zeta^k.
// w is not the value histogram; only its image in Q(zeta) is meaningful.
std::vector<Integer> exp_sum(const ModPoly& f, const ExpSumOptions& options = {},
                             ExpSumStats* stats = nullptr);

// Direct enumeration; returns the true value histogram.
std::vector<Integer> exp_sum_bruteforce(const ModPoly& f, std::uint64_t budget = 100000000ULL);

struct VariablePartition {
  std::vector<int> fixed;  // enumerated variables
  std::vector<int> left;   // bilinear: T side; quadratic: all remaining variables
  std::vector<int> right;  // bilinear: U side
  bool quadratic = false;
};

// Variables to enumerate so that the rest enters bilinearly (or quadratically).
std::optional<VariablePartition> find_partition(const std::vector<Monomial>& monomials, int nvars,
                                                bool quadratic, int restarts = 12);

}  // namespace orbint
