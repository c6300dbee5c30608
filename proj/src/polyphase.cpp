#include "orbint/polyphase.hpp"

#include <algorithm>
#include <memory>

namespace orbint {

namespace {

int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

}  // namespace

std::vector<int> polynomial_levels(const Polynomial& P, const Cell& cell) {
  const int n = cell.dim();
  const std::int64_t p = cell.prime();
  std::vector<int> nu(n);
  for (int j = 0; j < n; ++j) nu[j] = cell.min_valuation(j);
  std::vector<int> L = cell.levels();
  for (const auto& [mono, c] : P.terms()) {
    int vc = valuation(c, p);
    for (const auto& [i, e] : mono) {
      long base = vc;
      for (const auto& [k, a] : mono)
        if (k != i) base += static_cast<long>(a) * nu[k];
      for (int s = 1; s <= e; ++s) {
        long need = -(base + static_cast<long>(e - s) * nu[i]);
        L[i] = std::max(L[i], ceil_div(static_cast<int>(need), s));
      }
    }
  }
  return L;
}

PhaseSpec polynomial_phase(const Polynomial& P, std::int64_t p, std::vector<int> levels) {
  PhaseSpec ph;
  ph.n = P.nvars();
  ph.p = p;
  ph.levels = std::move(levels);
  auto ev = std::make_shared<PAdicEvaluator>(P, p);
  ph.eval = [ev](std::span<const PAdic> x) { return psi((*ev)(x)); };
  for (int i = 0; i < P.nvars(); ++i) {
    if (P.degree_in(i) != 1) continue;
    auto coef = std::make_shared<PAdicEvaluator>(P.coefficient_of(i, 1), p);
    auto rest = std::make_shared<PAdicEvaluator>(P.coefficient_of(i, 0), p);
    AffineAccessor acc;
    acc.coefficient = [coef](std::span<const PAdic> x) { return (*coef)(x); };
    acc.constant = [rest](std::span<const PAdic> x) { return psi((*rest)(x)); };
    ph.affine.emplace(i, std::move(acc));
  }
  return ph;
}

CycValue CellSum::value() const {
  std::vector<Rational> counts(weights.begin(), weights.end());
  CycValue sum = CycValue::from_counts(p, R, std::move(counts));
  return scale * (CycValue::of_angle(constant) * sum);
}

CellSum CellSum::twisted(std::int64_t u) const {
  CellSum t = *this;
  const std::int64_t mod = pow_int(p, R);
  if (R > 0) {
    std::int64_t um = ((u % mod) + mod) % mod;
    for (std::int64_t j = 0; j < mod; ++j) t.weights[j] = weights[mulmod(j, um, mod)];
  }
  if (constant.exponent() > 0) {
    std::int64_t cm = pow_int(p, constant.exponent());
    std::int64_t inv = inverse_mod(((u % cm) + cm) % cm, cm);
    t.constant = Angle(p, mulmod(constant.numerator(), inv, cm), constant.exponent());
  }
  return t;
}

CellSum polynomial_cell_sum(const Polynomial& P, const Cell& cell, const ExpSumOptions& options,
                            ExpSumStats* stats) {
  const int n = cell.dim();
  const std::int64_t p = cell.prime();
  if (P.nvars() != n) throw std::invalid_argument("polynomial_cell_sum: dimension mismatch");
  std::vector<Rational> offset = cell.center_rationals();
  std::vector<Rational> scale(n);
  for (int j = 0; j < n; ++j) scale[j] = power_of(p, cell.levels()[j]);
  Polynomial Q = P.substitute_affine(offset, scale);
  CellSum out;
  out.p = p;
  out.constant = Angle::of_rational(p, Q.constant_term());
  int R = 0;
  for (const auto& [m, c] : Q.terms())
    if (!m.empty()) R = std::max(R, -valuation(c, p));
  out.R = R;
  Polynomial phi(n);
  Rational pr = power_of(p, R);
  for (const auto& [m, c] : Q.terms())
    if (!m.empty()) phi.add_term(m, pr * c);
  out.weights = exp_sum(ModPoly::from_polynomial(phi, p, R), options, stats);
  out.scale = cell.volume() * power_of(p, -n * R);
  return out;
}

}  // namespace orbint
