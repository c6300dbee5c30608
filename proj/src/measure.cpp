#include "orbint/measure.hpp"

#include <algorithm>
#include <json.hpp>
#include <random>

namespace orbint {

namespace {

PAdic canonical_center(const PAdic& c, int m) {
  std::int64_t p = c.prime();
  if (c.absolute_precision() < m)
    throw InsufficientPrecision("cell center " + c.to_string() + " not known mod p^" + std::to_string(m));
  if (c.is_zero() || c.valuation() >= m) return PAdic::zero(p);
  int prec = m - c.valuation();
  return PAdic::from_parts(p, c.valuation(), c.unit() % pow_int(p, prec), prec);
}

PAdic parse_center(const std::string& s, std::int64_t p) {
  auto star = s.find('*');
  if (star == std::string::npos) {
    Rational q = parse_rational(s);
    return q == 0 ? PAdic::zero(p) : PAdic::from_rational(p, q);
  }
  auto caret = s.find('^', star);
  if (caret == std::string::npos) throw ParseError("center '" + s + "' is not of the form u*p^v");
  try {
    std::size_t used = 0;
    long long u = std::stoll(s.substr(0, star), &used);
    if (used != star) throw ParseError("bad mantissa in '" + s + "'");
    long long base = std::stoll(s.substr(star + 1, caret - star - 1), &used);
    if (used != caret - star - 1) throw ParseError("bad base in '" + s + "'");
    std::string vs = s.substr(caret + 1);
    int v = std::stoi(vs, &used);
    if (used != vs.size()) throw ParseError("bad exponent in '" + s + "'");
    if (base != p) throw ParseError("center '" + s + "' uses a different prime");
    if (u % p == 0) throw ParseError("mantissa of '" + s + "' is not a unit");
    return PAdic::from_rational(p, Rational(static_cast<long>(u)) * power_of(p, v));
  } catch (const std::logic_error&) {
    throw ParseError("malformed center '" + s + "'");
  }
}

std::uint64_t saturating_pow(std::int64_t p, int e) {
  unsigned __int128 r = 1;
  for (int i = 0; i < e; ++i) {
    r *= static_cast<unsigned __int128>(p);
    if (r > (static_cast<unsigned __int128>(1) << 63)) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

Cell::Cell(std::vector<PAdic> center, std::vector<int> levels) : levels_(std::move(levels)) {
  if (center.size() != levels_.size()) throw std::invalid_argument("Cell: center/level size mismatch");
  if (center.empty()) throw std::invalid_argument("Cell: dimension must be positive");
  p_ = center.front().prime();
  center_.reserve(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    if (center[i].prime() != p_) throw MixedPrimes("Cell center uses different primes");
    center_.push_back(canonical_center(center[i], levels_[i]));
  }
}

Cell Cell::box(std::int64_t p, const std::vector<Rational>& center, const std::vector<int>& levels) {
  std::vector<PAdic> c;
  c.reserve(center.size());
  for (const auto& q : center) c.push_back(q == 0 ? PAdic::zero(p) : PAdic::from_rational(p, q));
  return Cell(std::move(c), levels);
}

Cell Cell::unit_box(std::int64_t p, int n, int level) {
  return Cell(std::vector<PAdic>(n, PAdic::zero(p)), std::vector<int>(n, level));
}

std::vector<Rational> Cell::center_rationals() const {
  std::vector<Rational> out;
  out.reserve(center_.size());
  for (const auto& c : center_) out.push_back(c.to_rational());
  return out;
}

Rational Cell::volume() const {
  int s = 0;
  for (int m : levels_) s += m;
  return power_of(p_, -s);
}

bool Cell::coordinate_contains(int i, const PAdic& x) const {
  if (x.absolute_precision() < levels_[i])
    throw InsufficientPrecision("point coordinate not known to level " + std::to_string(levels_[i]));
  PAdic d = x - center_[i];
  return d.is_zero() || d.valuation() >= levels_[i];
}

bool Cell::coordinate_contains(int i, const Rational& x) const {
  return valuation(Rational(x - center_[i].to_rational()), p_) >= levels_[i];
}

bool Cell::contains(std::span<const PAdic> x) const {
  if (static_cast<int>(x.size()) != dim()) throw std::invalid_argument("Cell::contains: dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (!coordinate_contains(i, x[i])) return false;
  return true;
}

bool Cell::intersects(const Cell& other) const {
  if (other.dim() != dim()) throw std::invalid_argument("Cell::intersects: dimension mismatch");
  for (int i = 0; i < dim(); ++i) {
    int m = std::min(levels_[i], other.levels_[i]);
    Rational d = center_[i].to_rational() - other.center_[i].to_rational();
    if (valuation(d, p_) < m) return false;
  }
  return true;
}

std::optional<Cell> Cell::intersect(const Cell& other) const {
  if (!intersects(other)) return std::nullopt;
  Cell r = *this;
  for (int i = 0; i < dim(); ++i) {
    if (other.levels_[i] > levels_[i]) {
      r.levels_[i] = other.levels_[i];
      r.center_[i] = other.center_[i];
    }
  }
  return r;
}

std::vector<Cell> Cell::split(int i) const {
  std::vector<Cell> out;
  Rational c = center_[i].to_rational();
  Rational step = power_of(p_, levels_[i]);
  for (std::int64_t k = 0; k < p_; ++k) {
    Rational ck = c + step * Rational(static_cast<long>(k));
    PAdic pc = ck == 0 ? PAdic::zero(p_) : PAdic::from_rational(p_, ck);
    out.push_back(with_coordinate(i, pc, levels_[i] + 1));
  }
  return out;
}

Cell Cell::drop(int i) const {
  Cell r;
  r.p_ = p_;
  for (int j = 0; j < dim(); ++j) {
    if (j == i) continue;
    r.center_.push_back(center_[j]);
    r.levels_.push_back(levels_[j]);
  }
  return r;
}

Cell Cell::with_coordinate(int i, const PAdic& center, int level) const {
  Cell r = *this;
  r.center_[i] = canonical_center(center, level);
  r.levels_[i] = level;
  return r;
}

int Cell::min_valuation(int i) const {
  if (center_[i].is_zero()) return levels_[i];
  return center_[i].valuation();
}

bool operator==(const Cell& a, const Cell& b) {
  if (a.p_ != b.p_ || a.levels_ != b.levels_) return false;
  for (int i = 0; i < a.dim(); ++i)
    if (a.center_[i].to_string() != b.center_[i].to_string()) return false;
  return true;
}

CellFunction::CellFunction(int n, std::int64_t p, std::vector<CellEntry> entries)
    : n_(n), p_(p), entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.cell.dim() != n_) throw std::invalid_argument("CellFunction: cell dimension mismatch");
    if (e.cell.prime() != p_) throw MixedPrimes("CellFunction: cell prime mismatch");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (std::size_t j = i + 1; j < entries_.size(); ++j)
      if (entries_[i].cell.intersects(entries_[j].cell))
        throw std::invalid_argument("CellFunction: cells " + std::to_string(i) + " and " +
                                    std::to_string(j) + " overlap");
}

CellFunction CellFunction::indicator(const Cell& cell, const Rational& value) {
  return CellFunction(cell.dim(), cell.prime(), {CellEntry{cell, value}});
}

Rational CellFunction::evaluate(std::span<const PAdic> x) const {
  for (const auto& e : entries_)
    if (e.cell.contains(x)) return e.value;
  return Rational(0);
}

CellFunction CellFunction::refined() const {
  CellFunction r;
  r.n_ = n_;
  r.p_ = p_;
  for (const auto& e : entries_) {
    std::vector<Cell> cells{e.cell};
    for (int i = 0; i < n_; ++i) {
      std::vector<Cell> next;
      for (const auto& c : cells)
        for (auto& s : c.split(i)) next.push_back(std::move(s));
      cells = std::move(next);
    }
    for (auto& c : cells) r.entries_.push_back({std::move(c), e.value});
  }
  return r;
}

CellFunction CellFunction::scaled(const Rational& c) const {
  CellFunction r;
  r.n_ = n_;
  r.p_ = p_;
  if (c == 0) return r;
  for (const auto& e : entries_) r.entries_.push_back({e.cell, e.value * c});
  return r;
}

std::string CellFunction::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n_;
  j["p"] = p_;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& e : entries_) {
    nlohmann::ordered_json c;
    c["center"] = nlohmann::ordered_json::array();
    for (const auto& x : e.cell.center()) c["center"].push_back(x.to_string());
    c["levels"] = e.cell.levels();
    c["value"] = orbint::to_string(e.value);
    j["cells"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

CellFunction CellFunction::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("CellFunction JSON: ") + e.what());
  }
  try {
    int n = j.at("n").get<int>();
    std::int64_t p = j.at("p").get<std::int64_t>();
    if (n < 1) throw ParseError("CellFunction JSON: n must be positive");
    if (p < 2) throw ParseError("CellFunction JSON: p must be a prime");
    for (std::int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) throw ParseError("CellFunction JSON: p must be a prime");
    std::vector<CellEntry> entries;
    for (const auto& c : j.at("cells")) {
      const auto& centers = c.at("center");
      std::vector<int> levels = c.at("levels").get<std::vector<int>>();
      if (static_cast<int>(centers.size()) != n || static_cast<int>(levels.size()) != n)
        throw ParseError("CellFunction JSON: cell of wrong dimension");
      std::vector<PAdic> center;
      for (const auto& s : centers) center.push_back(parse_center(s.get<std::string>(), p));
      entries.push_back({Cell(std::move(center), std::move(levels)), parse_rational(c.at("value").get<std::string>())});
    }
    return CellFunction(n, p, std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("CellFunction JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("CellFunction JSON: ") + e.what());
  }
}

bool operator==(const CellFunction& a, const CellFunction& b) {
  if (a.n_ != b.n_ || a.p_ != b.p_ || a.entries_.size() != b.entries_.size()) return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i)
    if (!(a.entries_[i].cell == b.entries_[i].cell) || a.entries_[i].value != b.entries_[i].value) return false;
  return true;
}

Rational char_integral(const PAdic& c, int m) {
  std::int64_t p = c.prime();
  if (c.is_zero()) {
    if (c.absolute_precision() < -m) throw InsufficientPrecision("valuation of coefficient undetermined");
    return power_of(p, -m);
  }
  return c.valuation() >= -m ? power_of(p, -m) : Rational(0);
}

CycValue integrate(const CellFunction& f, const std::optional<PhaseSpec>& phase, const IntegrateOptions& options,
                   IntegrateStats* stats) {
  std::int64_t p = f.prime();
  if (phase && phase->n != f.dim()) throw std::invalid_argument("integrate: phase dimension mismatch");
  if (phase && phase->p != 0 && phase->p != p) throw MixedPrimes("integrate: phase prime differs");
  const int n = f.dim();

  std::uint64_t total = 0;
  for (const auto& e : f.entries()) {
    std::uint64_t count = 1;
    if (phase) {
      for (int j = 0; j < n; ++j) {
        int extra = std::max(0, phase->levels[j] - e.cell.levels()[j]);
        std::uint64_t c = saturating_pow(p, extra);
        if (c != 0 && count > std::numeric_limits<std::uint64_t>::max() / c)
          count = std::numeric_limits<std::uint64_t>::max();
        else
          count *= c;
      }
    }
    total = count > std::numeric_limits<std::uint64_t>::max() - total ? std::numeric_limits<std::uint64_t>::max()
                                                                        : total + count;
  }
  if (total > options.budget)
    throw BudgetExceeded(std::to_string(total) + " lattice points exceed budget " + std::to_string(options.budget));
  if (stats) stats->points += total;

  std::map<Angle, Rational> acc;
  for (const auto& e : f.entries()) {
    if (!phase || !phase->eval) {
      Rational w = e.value * e.cell.volume();
      if (phase && phase->amplitude) {
        std::vector<PAdic> c = e.cell.center();
        w *= phase->amplitude(c);
      }
      acc[Angle(p, 0, 0)] += w;
      continue;
    }
    std::vector<std::vector<PAdic>> axis(n);
    int level_sum = 0;
    std::vector<Rational> centers = e.cell.center_rationals();
    for (int j = 0; j < n; ++j) {
      int m = e.cell.levels()[j];
      int L = std::max(m, phase->levels[j]);
      level_sum += L;
      std::int64_t count = pow_int(p, L - m);
      Rational step = power_of(p, m);
      for (std::int64_t t = 0; t < count; ++t) {
        Rational x = centers[j] + step * Rational(static_cast<long>(t));
        axis[j].push_back(x == 0 ? PAdic::zero(p) : PAdic::from_rational(p, x));
      }
    }
    std::vector<std::size_t> idx(n, 0);
    std::vector<PAdic> point(n);
    for (int j = 0; j < n; ++j) point[j] = axis[j][0];
    std::map<Angle, std::int64_t> counts;
    std::map<Angle, Rational> weighted;
    for (;;) {
      Angle a = phase->eval(point);
      if (phase->amplitude) {
        Rational w = phase->amplitude(point);
        if (w != 0) weighted[a] += w;
      } else {
        ++counts[a];
      }
      int j = n - 1;
      while (j >= 0) {
        if (++idx[j] < axis[j].size()) {
          point[j] = axis[j][idx[j]];
          break;
        }
        idx[j] = 0;
        point[j] = axis[j][0];
        --j;
      }
      if (j < 0) break;
    }
    Rational scale = e.value * power_of(p, -level_sum);
    for (const auto& [a, c] : counts) acc[a] += scale * Rational(static_cast<long>(c));
    for (const auto& [a, w] : weighted) acc[a] += scale * w;
  }
  std::vector<std::pair<Angle, Rational>> terms(acc.begin(), acc.end());
  if (terms.empty()) return CycValue(Rational(0), p);
  return cyc_accumulate(terms);
}

CycValue integrate_stable(const CellFunction& f, const PhaseSpec& phase, std::optional<int> start_level,
                          const IntegrateOptions& options) {
  PhaseSpec first = phase, second = phase;
  for (int j = 0; j < phase.n; ++j) {
    first.levels[j] = start_level ? *start_level : phase.levels[j];
    second.levels[j] = first.levels[j] + 1;
  }
  CycValue a = integrate(f, first, options);
  CycValue b = integrate(f, second, options);
  if (a != b) throw UnstableRefinement("value " + a.to_string() + " changes to " + b.to_string() + " on refinement");
  return a;
}

namespace {

std::vector<PAdic> embed(std::span<const PAdic> y, int coord, const PAdic& value) {
  std::vector<PAdic> x;
  x.reserve(y.size() + 1);
  x.insert(x.end(), y.begin(), y.begin() + coord);
  x.push_back(value);
  x.insert(x.end(), y.begin() + coord, y.end());
  return x;
}

PAdic random_point_in_ball(std::mt19937_64& rng, std::int64_t p, const PAdic& center, int level, int depth) {
  Rational x = center.to_rational();
  std::uniform_int_distribution<std::int64_t> digit(0, p - 1);
  for (int k = 0; k < depth; ++k) x += power_of(p, level + k) * Rational(static_cast<long>(digit(rng)));
  return x == 0 ? PAdic::zero(p) : PAdic::from_rational(p, x);
}

}  // namespace

std::pair<CellFunction, PhaseSpec> eliminate_linear(const CellFunction& f, const PhaseSpec& phase, int coord) {
  const int n = f.dim();
  const std::int64_t p = f.prime();
  if (coord < 0 || coord >= n) throw std::out_of_range("eliminate_linear: coordinate out of range");
  if (n < 2) throw std::invalid_argument("eliminate_linear: need at least two coordinates");
  auto it = phase.affine.find(coord);
  if (it == phase.affine.end()) throw NotAffine("no affine accessor declared for coordinate " + std::to_string(coord));
  const AffineAccessor acc = it->second;

  struct Fiber {
    Cell projected;
    PAdic center;
    int level;
  };
  std::vector<Fiber> fibers;
  std::vector<CellEntry> entries;
  for (const auto& e : f.entries()) {
    Cell proj = e.cell.drop(coord);
    for (const auto& fb : fibers)
      if (fb.projected.intersects(proj))
        throw std::invalid_argument("eliminate_linear: cells overlap after projection; split the function first");
    fibers.push_back({proj, e.cell.center()[coord], e.cell.levels()[coord]});
    entries.push_back({proj, e.value});
  }

  // Randomized congruence spot-check of the declared affine structure.
  std::mt19937_64 rng(0x5eed0fa1ULL + static_cast<std::uint64_t>(coord));
  std::size_t checked = 0;
  for (const auto& e : f.entries()) {
    if (checked++ >= 8) break;
    for (int s = 0; s < 4; ++s) {
      std::vector<PAdic> x(n);
      for (int j = 0; j < n; ++j)
        x[j] = random_point_in_ball(rng, p, e.cell.center()[j], e.cell.levels()[j],
                                    std::max(1, phase.levels[j] - e.cell.levels()[j] + 1));
      std::vector<PAdic> x2 = x;
      x2[coord] = random_point_in_ball(rng, p, e.cell.center()[coord], e.cell.levels()[coord],
                                       std::max(1, phase.levels[coord] - e.cell.levels()[coord] + 1));
      PAdic c1 = acc.coefficient(x), c2 = acc.coefficient(x2);
      Angle k1 = acc.constant(x), k2 = acc.constant(x2);
      bool ok = c1 == c2 && k1 == k2;
      ok = ok && phase.eval(x) == k1 + psi(c1 * x[coord]);
      ok = ok && phase.eval(x2) == k2 + psi(c2 * x2[coord]);
      if (ok && phase.amplitude) ok = phase.amplitude(x) == phase.amplitude(x2);
      if (!ok) throw NotAffine("phase fails the affine spot-check in coordinate " + std::to_string(coord));
    }
  }

  auto locate = [fibers](std::span<const PAdic> y) -> const Fiber* {
    for (const auto& fb : fibers)
      if (fb.projected.contains(y)) return &fb;
    return nullptr;
  };

  PhaseSpec out;
  out.n = n - 1;
  out.p = p;
  for (int j = 0; j < n; ++j)
    if (j != coord) out.levels.push_back(phase.levels[j]);
  auto old_amp = phase.amplitude;
  out.eval = [locate, acc, coord, p](std::span<const PAdic> y) -> Angle {
    const Fiber* fb = locate(y);
    if (!fb) return Angle(p, 0, 0);
    std::vector<PAdic> x = embed(y, coord, fb->center);
    return acc.constant(x) + psi(acc.coefficient(x) * fb->center);
  };
  out.amplitude = [locate, acc, coord, old_amp](std::span<const PAdic> y) -> Rational {
    const Fiber* fb = locate(y);
    if (!fb) return Rational(0);
    std::vector<PAdic> x = embed(y, coord, fb->center);
    Rational w = char_integral(acc.coefficient(x), fb->level);
    if (old_amp) w *= old_amp(x);
    return w;
  };
  for (const auto& [j, a] : phase.affine) {
    if (j == coord) continue;
    int nj = j > coord ? j - 1 : j;
    AffineAccessor na;
    na.coefficient = [locate, a, coord, p](std::span<const PAdic> y) -> PAdic {
      const Fiber* fb = locate(y);
      if (!fb) return PAdic::zero(p);
      return a.coefficient(embed(y, coord, fb->center));
    };
    na.constant = [locate, a, coord, p](std::span<const PAdic> y) -> Angle {
      const Fiber* fb = locate(y);
      if (!fb) return Angle(p, 0, 0);
      return a.constant(embed(y, coord, fb->center));
    };
    out.affine.emplace(nj, std::move(na));
  }
  return {CellFunction(n - 1, p, std::move(entries)), std::move(out)};
}

}  // namespace orbint
