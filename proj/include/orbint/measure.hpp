#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orbint/cyclotomic.hpp"
#include "orbint/padic.hpp"

namespace orbint {

// center + prod p^{m_i} Z_p, centers reduced mod p^{m_i}.
class Cell {
 public:
  Cell() = default;
  Cell(std::vector<PAdic> center, std::vector<int> levels);
  static Cell box(std::int64_t p, const std::vector<Rational>& center, const std::vector<int>& levels);
  static Cell unit_box(std::int64_t p, int n, int level = 0);

  int dim() const { return static_cast<int>(levels_.size()); }
  std::int64_t prime() const { return p_; }
  const std::vector<PAdic>& center() const { return center_; }
  const std::vector<int>& levels() const { return levels_; }
  std::vector<Rational> center_rationals() const;
  Rational volume() const;

  bool contains(std::span<const PAdic> x) const;
  bool coordinate_contains(int i, const PAdic& x) const;
  bool coordinate_contains(int i, const Rational& x) const;
  bool intersects(const Cell& other) const;
  std::optional<Cell> intersect(const Cell& other) const;
  // Sub-cells one level deeper in coordinate i.
  std::vector<Cell> split(int i) const;
  Cell drop(int i) const;
  Cell with_coordinate(int i, const PAdic& center, int level) const;
  // Smallest valuation attained on the ball of coordinate i.
  int min_valuation(int i) const;

  friend bool operator==(const Cell& a, const Cell& b);

 private:
  std::int64_t p_ = 0;
  std::vector<PAdic> center_;
  std::vector<int> levels_;
};

struct CellEntry {
  Cell cell;
  Rational value;
};

class CellFunction {
 public:
  CellFunction() = default;
  CellFunction(int n, std::int64_t p, std::vector<CellEntry> entries);
  static CellFunction indicator(const Cell& cell, const Rational& value = Rational(1));

  int dim() const { return n_; }
  std::int64_t prime() const { return p_; }
  const std::vector<CellEntry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  Rational evaluate(std::span<const PAdic> x) const;
  CellFunction refined() const;
  CellFunction scaled(const Rational& c) const;

  std::string to_json() const;
  static CellFunction from_json(const std::string& text);

  friend bool operator==(const CellFunction& a, const CellFunction& b);

 private:
  int n_ = 0;
  std::int64_t p_ = 2;
  std::vector<CellEntry> entries_;
};

using PointFn = std::function<Angle(std::span<const PAdic>)>;

// phase(x) = psi(coefficient(x) * x_i) + constant(x), both independent of x_i.
struct AffineAccessor {
  std::function<PAdic(std::span<const PAdic>)> coefficient;
  PointFn constant;
};

struct PhaseSpec {
  int n = 0;
  std::int64_t p = 0;
  std::vector<int> levels;
  PointFn eval;
  // Optional locally constant rational weight multiplying the character.
  std::function<Rational(std::span<const PAdic>)> amplitude;
  std::map<int, AffineAccessor> affine;
};

struct IntegrateOptions {
  std::uint64_t budget = 1000000000ULL;
};

struct IntegrateStats {
  std::uint64_t points = 0;
};

Rational char_integral(const PAdic& c, int m);

CycValue integrate(const CellFunction& f, const std::optional<PhaseSpec>& phase,
                   const IntegrateOptions& options = {}, IntegrateStats* stats = nullptr);
CycValue integrate_stable(const CellFunction& f, const PhaseSpec& phase,
                          std::optional<int> start_level = std::nullopt,
                          const IntegrateOptions& options = {});

std::pair<CellFunction, PhaseSpec> eliminate_linear(const CellFunction& f, const PhaseSpec& phase,
                                                    int coord);

}  // namespace orbint
