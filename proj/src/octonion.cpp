#include "orbint/octonion.hpp"

namespace orbint {

Octonion oct_mul(const Octonion& x, const Octonion& y) { return zorn_mul(x, y); }

PAdic oct_norm(const Octonion& x) { return zorn_norm(x); }

Octonion oct_conj(const Octonion& x) { return zorn_conj(x); }

Octonion oct_unit(std::int64_t p) {
  PAdic z = PAdic::zero(p), one = PAdic::from_integer(p, 1);
  return {one, {z, z, z}, {z, z, z}, one};
}

bool operator==(const Octonion& x, const Octonion& y) {
  return x.alpha == y.alpha && x.beta == y.beta && x.v == y.v && x.w == y.w;
}

}  // namespace orbint
