#pragma once

#include <cstdint>
#include <vector>

#include "orbint/expsum.hpp"
#include "orbint/measure.hpp"
#include "orbint/polynomial.hpp"

namespace orbint {

// Per-coordinate levels on which psi(P(x)) is constant inside the cell.
std::vector<int> polynomial_levels(const Polynomial& P, const Cell& cell);

// psi(P(x)) as a PhaseSpec, with affine accessors for every coordinate in
// which P has degree one.
PhaseSpec polynomial_phase(const Polynomial& P, std::int64_t p, std::vector<int> levels);

// Integral of psi(P) over a cell, kept in unevaluated form:
// scale * zeta^constant * sum_k weights[k] zeta_{p^R}^k.
struct CellSum {
  std::int64_t p = 2;
  int R = 0;
  Angle constant;
  Rational scale;
  std::vector<Integer> weights;

  CycValue value() const;
  // The same integral for the phase P/u, u a p-adic unit given mod p^R.
  CellSum twisted(std::int64_t u) const;
};

CellSum polynomial_cell_sum(const Polynomial& P, const Cell& cell, const ExpSumOptions& options = {},
                            ExpSumStats* stats = nullptr);

}  // namespace orbint
