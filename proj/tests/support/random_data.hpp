#pragma once

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "orbint/orbital.hpp"
#include "orbint/transfer.hpp"

namespace orbint::testing {

inline std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline Rational nonzero_value(std::mt19937_64& rng) {
  std::int64_t k = draw(rng, 1, 9);
  return Rational(static_cast<long>(draw(rng, 0, 1) ? k : -k));
}

// Residues mod p of a J-center, used to keep level-one cells disjoint.
inline std::vector<std::int64_t> residues(const std::vector<Rational>& c, std::int64_t p) {
  std::vector<std::int64_t> out;
  for (const auto& q : c) {
    Integer num = q.get_num() % p;
    if (num < 0) num += p;
    out.push_back(num.get_si());
  }
  return out;
}

inline std::vector<Rational> scaled_identity(const ModelSpec& m, int sign) {
  std::vector<Rational> c;
  for (const auto& q : m.algebra->identity()) c.push_back(q * sign);
  return c;
}

// The J^eps centre with random free coordinates.
inline std::vector<Rational> slice_point(std::mt19937_64& rng, const ModelSpec& m, int sign, std::int64_t p) {
  std::vector<Rational> c(m.n, Rational(0));
  for (int i : m.slice_eps) c[i] = sign;
  for (int i : m.slice_free) c[i] = Rational(static_cast<long>(draw(rng, 0, p - 1)));
  return c;
}

inline bool near_slice(const ModelSpec& m, const std::vector<std::int64_t>& res, std::int64_t p) {
  for (int sign : {1, -1}) {
    bool hit = true;
    std::int64_t e = sign > 0 ? 1 : p - 1;
    for (int i = 0; i < m.n && hit; ++i) {
      if (std::find(m.slice_free.begin(), m.slice_free.end(), i) != m.slice_free.end()) continue;
      bool is_eps = std::find(m.slice_eps.begin(), m.slice_eps.end(), i) != m.slice_eps.end();
      hit = res[i] == (is_eps ? e : 0);
    }
    if (hit) return true;
  }
  return false;
}

// phi on F + J: level-one J-cells at +-I / the slices J^+-, and generic J-cells; a in p^j O.
inline CellFunction random_germ_phi(std::mt19937_64& rng, const ModelSpec& m, std::int64_t p) {
  const int cells = static_cast<int>(draw(rng, 1, 3));
  std::vector<std::vector<std::int64_t>> used;
  std::vector<CellEntry> entries;
  while (static_cast<int>(entries.size()) < cells) {
    int kind = static_cast<int>(draw(rng, 0, 2));
    std::vector<Rational> c;
    if (kind < 2) {
      int sign = kind == 0 ? 1 : -1;
      c = m.family == Family::A ? scaled_identity(m, sign) : slice_point(rng, m, sign, p);
    } else {
      for (int i = 0; i < m.n; ++i) c.push_back(Rational(static_cast<long>(draw(rng, 0, p - 1))));
      auto res = residues(c, p);
      if (m.family == Family::A && (res == residues(scaled_identity(m, 1), p) || res == residues(scaled_identity(m, -1), p)))
        continue;
      if (m.family == Family::B && near_slice(m, res, p)) continue;
    }
    auto res = residues(c, p);
    if (std::find(used.begin(), used.end(), res) != used.end()) continue;
    used.push_back(res);
    c.insert(c.begin(), Rational(0));
    std::vector<int> levels(m.n + 1, 1);
    levels[0] = static_cast<int>(draw(rng, 0, 1));
    entries.push_back({Cell::box(p, c, levels), nonzero_value(rng)});
  }
  return CellFunction(m.n + 1, p, std::move(entries));
}

inline CellFunction random_phiprime(std::mt19937_64& rng, const ModelSpec& m, std::int64_t p) {
  const int cells = static_cast<int>(draw(rng, 1, 2));
  std::vector<std::vector<Rational>> used;
  std::vector<CellEntry> entries;
  while (static_cast<int>(entries.size()) < cells) {
    std::vector<Rational> c;
    for (int i = 0; i < m.y_dim; ++i) c.push_back(Rational(static_cast<long>(draw(rng, 0, p - 1))));
    if (std::find(used.begin(), used.end(), c) != used.end()) continue;
    used.push_back(c);
    entries.push_back({Cell::box(p, c, std::vector<int>(m.y_dim, 1)), nonzero_value(rng)});
  }
  return CellFunction(m.y_dim, p, std::move(entries));
}

// Disjoint cells p^v u + p^m O with v in [-1, 2].
inline StepFunction random_step(std::mt19937_64& rng, std::int64_t p) {
  const int cells = static_cast<int>(draw(rng, 1, 3));
  std::vector<CellEntry> entries;
  while (static_cast<int>(entries.size()) < cells) {
    int v = static_cast<int>(draw(rng, -1, 2));
    int m = v + static_cast<int>(draw(rng, 1, 2));
    auto units = unit_reps(p, m - v);
    std::int64_t u = units[static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(units.size()) - 1))];
    Cell c({PAdic::from_parts(p, v, u, PAdic::default_precision(p))}, {m});
    bool clash = std::any_of(entries.begin(), entries.end(), [&](const CellEntry& e) { return e.cell.intersects(c); });
    if (clash) continue;
    entries.push_back({c, nonzero_value(rng)});
  }
  return StepFunction(CellFunction(1, p, std::move(entries)));
}

}  // namespace orbint::testing
