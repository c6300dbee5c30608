#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>

namespace orbint {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

// p-adic valuation; kInfiniteValuation for zero.
int valuation(const Integer& x, std::int64_t p);
int valuation(const Rational& x, std::int64_t p);

// p^e as an exact rational, e may be negative.
Rational power_of(std::int64_t p, int e);
Integer ipow(std::int64_t p, unsigned e);

// x mod p^R for x with val(x) >= 0; result in [0, p^R).
std::int64_t reduce_mod(const Rational& x, std::int64_t p, int R);

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& x);

std::int64_t pow_int(std::int64_t base, int e);
// Largest M with p^M < 2^62.
int max_precision(std::int64_t p);

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

}  // namespace orbint
