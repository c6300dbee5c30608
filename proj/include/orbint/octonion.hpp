#pragma once

#include <array>

#include "orbint/padic.hpp"

namespace orbint {

// Split octonion in Zorn vector-matrix form [[alpha, v], [w, beta]].
template <class S>
struct Zorn {
  S alpha;
  std::array<S, 3> v;
  std::array<S, 3> w;
  S beta;
};

namespace zorn_detail {

template <class S>
S dot(const std::array<S, 3>& a, const std::array<S, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class S>
std::array<S, 3> cross(const std::array<S, 3>& a, const std::array<S, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class S>
std::array<S, 3> scale(const S& s, const std::array<S, 3>& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

template <class S>
std::array<S, 3> add(const std::array<S, 3>& a, const std::array<S, 3>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

template <class S>
std::array<S, 3> sub(const std::array<S, 3>& a, const std::array<S, 3>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

}  // namespace zorn_detail

template <class S>
Zorn<S> zorn_mul(const Zorn<S>& x, const Zorn<S>& y) {
  using namespace zorn_detail;
  Zorn<S> r;
  r.alpha = x.alpha * y.alpha + dot(x.v, y.w);
  r.v = sub(add(scale(x.alpha, y.v), scale(y.beta, x.v)), cross(x.w, y.w));
  r.w = add(add(scale(y.alpha, x.w), scale(x.beta, y.w)), cross(x.v, y.v));
  r.beta = x.beta * y.beta + dot(x.w, y.v);
  return r;
}

template <class S>
S zorn_norm(const Zorn<S>& x) {
  return x.alpha * x.beta - zorn_detail::dot(x.v, x.w);
}

template <class S>
S zorn_trace(const Zorn<S>& x) {
  return x.alpha + x.beta;
}

template <class S>
Zorn<S> zorn_conj(const Zorn<S>& x) {
  return {x.beta, {-x.v[0], -x.v[1], -x.v[2]}, {-x.w[0], -x.w[1], -x.w[2]}, x.alpha};
}

template <class S>
Zorn<S> zorn_add(const Zorn<S>& x, const Zorn<S>& y) {
  return {x.alpha + y.alpha, zorn_detail::add(x.v, y.v), zorn_detail::add(x.w, y.w), x.beta + y.beta};
}

using Octonion = Zorn<PAdic>;

Octonion oct_mul(const Octonion& x, const Octonion& y);
PAdic oct_norm(const Octonion& x);
Octonion oct_conj(const Octonion& x);
Octonion oct_unit(std::int64_t p);
bool operator==(const Octonion& x, const Octonion& y);

}  // namespace orbint
