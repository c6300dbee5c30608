#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbint/cyclotomic.hpp"
#include "orbint/expsum.hpp"
#include "orbint/jordan.hpp"
#include "orbint/measure.hpp"
#include "orbint/polyphase.hpp"

namespace orbint {

enum class Family { A, B };

struct ModelSpec {
  int id = 0;
  Family family = Family::A;
  int n = 0;
  const CubicNorm* algebra = nullptr;

  // Family B only.  Y' has y_dim coordinates; <Y, A> = sum_k Y'_k A_{y_partner[k]}.
  int y_dim = 0;
  std::vector<int> y_partner;
  // <A, A> = sum of A_i A_j over these pairs.
  std::vector<std::pair<int, int>> aa_pairs;
  // Y.A = sum over factors of (A_a1 - Y'_y1)(A_a2 - Y'_y2).
  struct Factor {
    int a1, y1, a2, y2;
  };
  std::vector<Factor> y_dot_a;
  // J^eps: coordinates set to eps, coordinates left free; the rest vanish.
  std::vector<int> slice_eps;
  std::vector<int> slice_free;

  static ModelSpec get(int id);
  std::string label() const;
};

struct OrbitalOptions {
  std::uint64_t budget = 1000000000ULL;
  bool brute_force = false;  // enumerate lattice points instead of the exponential-sum engine
};

struct OrbitalStats {
  std::uint64_t points = 0;
};

// Integral over O^x of psi((x + 1/x)/a), a = p^r u.
CycValue kloosterman(std::int64_t p, int r, std::int64_t u);

CycValue j_unit_closed(const PAdic& a);

// f' on SL2 given as a CellFunction of the matrix entries (g11, g12, g21, g22).
CellFunction unit_fprime(std::int64_t p);
CycValue j_orbital(const PAdic& a, const CellFunction& fprime, const OrbitalOptions& options = {},
                   OrbitalStats* stats = nullptr);
CycValue j_plus(const CellFunction& fprime);
CycValue j_minus(const CellFunction& fprime);

// Unit test data: indicator of O + J(O), and of O^{y_dim} for Y'.
CellFunction unit_phi(const ModelSpec& model, std::int64_t p);
CellFunction unit_phiprime(const ModelSpec& model, std::int64_t p);

// Polynomial (tr(A) - N(A)) / a on J.
Polynomial family_a_phase(const ModelSpec& model, const Rational& a);

CycValue i_orbital_A(const ModelSpec& model, const PAdic& a, const CellFunction& phi,
                     const OrbitalOptions& options = {}, OrbitalStats* stats = nullptr);
// I(p^r u, phi) for each listed unit, one engine run per cell shared by all units.
std::vector<CycValue> i_orbital_A_units(const ModelSpec& model, std::int64_t p, int r,
                                        const std::vector<std::int64_t>& units, const CellFunction& phi,
                                        const OrbitalOptions& options = {}, OrbitalStats* stats = nullptr);
CycValue i_singular_A(const ModelSpec& model, int sign, const CellFunction& phi);

CycValue i_orbital_B(const ModelSpec& model, const PAdic& a, const CellFunction& phi, const CellFunction& phiprime,
                     const OrbitalOptions& options = {}, OrbitalStats* stats = nullptr);
// The full (dim J + dim Y')-fold integral without Y' elimination, by enumeration.
// With eliminate_y the Y' coordinates are removed by eliminate_linear first.
CycValue i_orbital_B_bruteforce(const ModelSpec& model, const PAdic& a, const CellFunction& phi,
                                const CellFunction& phiprime, bool eliminate_y, const OrbitalOptions& options = {},
                                OrbitalStats* stats = nullptr);
CycValue i_singular_B(const ModelSpec& model, int sign, const CellFunction& phi, const CellFunction& phiprime,
                      const OrbitalOptions& options = {});

struct OrbitalReport {
  int model = 0;
  std::int64_t p = 0;
  int r = 0;
  std::int64_t u = 1;
  std::string kind;  // "regular", "singular+", "singular-"
  CycValue left;     // Jordan side
  CycValue right;    // Kuznetsov side
  Rational scale;    // |a|^{(n+1)/2}, or 1 for singular terms
  Rational four;     // |4| for family B, 1 otherwise
  bool equal = false;
  std::uint64_t points = 0;
  double millis = 0;
};

struct UnitSample {
  bool all = true;
  int first_k = 0;
  std::vector<std::int64_t> pick(std::int64_t p, int r) const;
};

std::vector<OrbitalReport> verify_fl(const ModelSpec& model, std::int64_t p, int r_max,
                                     const UnitSample& units = {}, const OrbitalOptions& options = {});

}  // namespace orbint
