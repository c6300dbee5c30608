#include "orbint/orbital.hpp"

#include <chrono>
#include <memory>

namespace orbint {

namespace {

PAdic padic_of(std::int64_t p, const Rational& q) { return q == 0 ? PAdic::zero(p) : PAdic::from_rational(p, q); }

Rational abs_power(std::int64_t p, int r, int numer, int denom) {
  // |p^r|^{numer/denom}, exact because numer * r is divisible by denom for odd n.
  return power_of(p, -(r * numer) / denom);
}

CycValue zero_value(std::int64_t p) { return CycValue(Rational(0), p); }

void check_family(const ModelSpec& model, Family f) {
  if (model.family != f)
    throw FamilyMismatch("model " + std::to_string(model.id) + " belongs to family " +
                         (model.family == Family::A ? "A" : "B"));
}

// psi((x + 1/x)/a) integrated over the cell.
CycValue kloosterman_piece(const Cell& cell, const PAdic& a, int level) {
  const std::int64_t p = cell.prime();
  PAdic ainv = a.inverse();
  PhaseSpec ph;
  ph.n = 1;
  ph.p = p;
  ph.levels = {level};
  ph.eval = [ainv](std::span<const PAdic> x) { return psi((x[0] + x[0].inverse()) * ainv); };
  return integrate(CellFunction::indicator(cell), ph);
}

Polynomial var(int n, int i) { return Polynomial::variable(n, i); }

}  // namespace

ModelSpec ModelSpec::get(int id) {
  ModelSpec m;
  m.id = id;
  m.algebra = &model_algebra(id);
  m.n = m.algebra->dim();
  m.family = id <= 4 ? Family::A : Family::B;
  const CubicNorm& alg = *m.algebra;
  auto ix = [&](const char* s) { return alg.index_of(s); };
  if (id == 5) {
    m.y_dim = 4;  // Y2, Y3, Y4, Y5
    m.y_partner = {ix("A2"), ix("A3"), ix("A4"), ix("A5")};
    m.aa_pairs = {{ix("A2"), ix("A5")}, {ix("A3"), ix("A4")}};
    m.y_dot_a = {{ix("A12"), 3, ix("A15"), 0}, {ix("A13"), 2, ix("A14"), 1}};
    m.slice_eps = {ix("A1"), ix("A25"), ix("A34")};
    m.slice_free = {ix("A12"), ix("A13"), ix("A14"), ix("A15")};
  } else if (id == 6) {
    m.y_dim = 2;  // Y2, Y3
    m.y_partner = {ix("A2"), ix("A3")};
    m.aa_pairs = {{ix("A2"), ix("A3")}};
    m.y_dot_a = {{ix("A12"), 1, ix("A13"), 0}};
    m.slice_eps = {ix("A1"), ix("A23"), ix("b")};
    m.slice_free = {ix("A12"), ix("A13")};
  }
  return m;
}

std::string ModelSpec::label() const { return "model " + std::to_string(id) + " (" + algebra->name() + ")"; }

CycValue kloosterman(std::int64_t p, int r, std::int64_t u) {
  if (r < 0) throw std::invalid_argument("kloosterman: r must be >= 0");
  PAdic a = PAdic::from_parts(p, r, u, PAdic::default_precision(p));
  CycValue total = zero_value(p);
  for (std::int64_t k = 1; k < p; ++k)
    total += kloosterman_piece(Cell::box(p, {Rational(static_cast<long>(k))}, {1}), a, std::max(r, 1));
  return total;
}

CycValue j_unit_closed(const PAdic& a) {
  if (a.is_zero()) throw std::invalid_argument("j_unit_closed: a must be nonzero");
  const std::int64_t p = a.prime();
  int v = a.valuation();
  if (v < 0) return zero_value(p);
  if (v == 0) return CycValue(Rational(1), p);
  return power_of(p, v) * kloosterman(p, v, a.unit());
}

CellFunction unit_fprime(std::int64_t p) { return CellFunction::indicator(Cell::unit_box(p, 4, 0)); }

CycValue j_orbital(const PAdic& a, const CellFunction& fprime, const OrbitalOptions& options, OrbitalStats* stats) {
  if (fprime.dim() != 4) throw std::invalid_argument("j_orbital: f' must be a function of four matrix entries");
  const std::int64_t p = fprime.prime();
  if (a.prime() != p) throw MixedPrimes("j_orbital: a and f' use different primes");
  const Rational aq = a.to_rational();
  const int r = a.valuation();
  CycValue total = zero_value(p);
  for (const auto& e : fprime.entries()) {
    const Cell& B = e.cell;
    if (!B.coordinate_contains(2, a)) continue;
    std::vector<Rational> c = B.center_rationals();
    const auto& m = B.levels();
    Cell xy = Cell::box(p, {c[0] / aq, c[3] / aq}, {m[0] - r, m[3] - r});
    int nu_x = xy.min_valuation(0), nu_y = xy.min_valuation(1);
    PhaseSpec ph;
    ph.n = 2;
    ph.p = p;
    ph.levels = {std::max({m[0] - r, 0, m[1] - r - nu_y}), std::max({m[3] - r, 0, m[1] - r - nu_x})};
    ph.eval = [](std::span<const PAdic> x) { return psi(x[0] + x[1]); };
    const Rational c12 = c[1];
    const int m12 = m[1];
    ph.amplitude = [aq, c12, m12, p](std::span<const PAdic> x) -> Rational {
      Rational g12 = aq * x[0].to_rational() * x[1].to_rational() - 1 / aq;
      return valuation(Rational(g12 - c12), p) >= m12 ? Rational(1) : Rational(0);
    };
    IntegrateOptions io{options.budget};
    IntegrateStats is;
    total += e.value * integrate(CellFunction::indicator(xy), ph, io, &is);
    if (stats) stats->points += is.points;
  }
  return total;
}

namespace {

// Integral of f'(s n(x)) psi(x) dx for s = +-1, n(x) = [[1, x], [0, 1]].
CycValue j_unipotent(const CellFunction& fprime, int s) {
  const std::int64_t p = fprime.prime();
  PAdic sp = PAdic::from_integer(p, s), zero = PAdic::zero(p);
  CycValue total = zero_value(p);
  for (const auto& e : fprime.entries()) {
    const Cell& B = e.cell;
    if (!B.coordinate_contains(0, sp) || !B.coordinate_contains(2, zero) || !B.coordinate_contains(3, sp)) continue;
    // g12 = s x ranges over B2, so x ranges over s B2.
    int m = B.levels()[1];
    if (m < 0) continue;
    Rational c = B.center_rationals()[1] * s;
    total += (e.value * power_of(p, -m)) * CycValue::of_angle(Angle::of_rational(p, c));
  }
  return total;
}

}  // namespace

CycValue j_plus(const CellFunction& fprime) { return j_unipotent(fprime, 1); }

CycValue j_minus(const CellFunction& fprime) { return j_unipotent(fprime, -1); }

CellFunction unit_phi(const ModelSpec& model, std::int64_t p) {
  return CellFunction::indicator(Cell::unit_box(p, model.n + 1, 0));
}

CellFunction unit_phiprime(const ModelSpec& model, std::int64_t p) {
  if (model.y_dim == 0) throw FamilyMismatch("model " + std::to_string(model.id) + " has no Y' variables");
  return CellFunction::indicator(Cell::unit_box(p, model.y_dim, 0));
}

Polynomial family_a_phase(const ModelSpec& model, const Rational& a) {
  const CubicNorm& alg = *model.algebra;
  return (1 / a) * (alg.trace_polynomial() - alg.norm_polynomial());
}

namespace {

CycValue cell_integral(const Polynomial& P, const Cell& cell, const OrbitalOptions& options, OrbitalStats* stats) {
  if (options.brute_force) {
    PhaseSpec ph = polynomial_phase(P, cell.prime(), polynomial_levels(P, cell));
    IntegrateStats is;
    CycValue v = integrate(CellFunction::indicator(cell), ph, IntegrateOptions{options.budget}, &is);
    if (stats) stats->points += is.points;
    return v;
  }
  ExpSumStats es;
  CellSum s = polynomial_cell_sum(P, cell, ExpSumOptions{options.budget, 12}, &es);
  if (stats) stats->points += es.leaves;
  return s.value();
}

}  // namespace

CycValue i_orbital_A(const ModelSpec& model, const PAdic& a, const CellFunction& phi, const OrbitalOptions& options,
                     OrbitalStats* stats) {
  check_family(model, Family::A);
  if (a.is_zero()) throw std::invalid_argument("i_orbital_A: a must be nonzero");
  if (phi.dim() != model.n + 1) throw std::invalid_argument("i_orbital_A: phi must live on F + J");
  const std::int64_t p = phi.prime();
  Polynomial P = family_a_phase(model, a.to_rational());
  CycValue total = zero_value(p);
  for (const auto& e : phi.entries()) {
    if (!e.cell.coordinate_contains(0, a)) continue;
    total += e.value * cell_integral(P, e.cell.drop(0), options, stats);
  }
  return total;
}

std::vector<CycValue> i_orbital_A_units(const ModelSpec& model, std::int64_t p, int r,
                                        const std::vector<std::int64_t>& units, const CellFunction& phi,
                                        const OrbitalOptions& options, OrbitalStats* stats) {
  check_family(model, Family::A);
  if (options.brute_force) {
    std::vector<CycValue> out;
    for (std::int64_t u : units)
      out.push_back(i_orbital_A(model, PAdic::from_parts(p, r, u, PAdic::default_precision(p)), phi, options, stats));
    return out;
  }
  std::vector<CycValue> out(units.size(), zero_value(p));
  Polynomial P = family_a_phase(model, power_of(p, r));
  for (const auto& e : phi.entries()) {
    std::vector<std::size_t> hit;
    for (std::size_t k = 0; k < units.size(); ++k)
      if (e.cell.coordinate_contains(0, PAdic::from_parts(p, r, units[k], PAdic::default_precision(p))))
        hit.push_back(k);
    if (hit.empty()) continue;
    ExpSumStats es;
    CellSum s = polynomial_cell_sum(P, e.cell.drop(0), ExpSumOptions{options.budget, 12}, &es);
    if (stats) stats->points += es.leaves;
    for (std::size_t k : hit) out[k] += e.value * s.twisted(units[k]).value();
  }
  return out;
}

CycValue i_singular_A(const ModelSpec& model, int sign, const CellFunction& phi) {
  check_family(model, Family::A);
  const std::int64_t p = phi.prime();
  std::vector<PAdic> x{PAdic::zero(p)};
  for (const auto& q : model.algebra->identity()) x.push_back(padic_of(p, q * sign));
  return CycValue(phi.evaluate(x), p);
}

namespace {

void check_family_b(const ModelSpec& model, std::int64_t p) {
  check_family(model, Family::B);
  if (p == 2) throw OddPrimeRequired("model " + std::to_string(model.id) + " needs an odd residue characteristic");
}

// The A-cell cut down by the Y' integral: A_partner(k) in p^{r - m_k} O.
std::optional<Cell> y_constrained(const ModelSpec& model, const Cell& jcell, const Cell& ycell, int r) {
  std::int64_t p = jcell.prime();
  Cell bound = jcell;
  for (int k = 0; k < model.y_dim; ++k) {
    int c = model.y_partner[k];
    int L = r - ycell.levels()[k];
    if (L > jcell.levels()[c]) bound = bound.with_coordinate(c, PAdic::zero(p), L);
  }
  auto cut = jcell.intersect(bound);
  if (!cut) return std::nullopt;
  for (int k = 0; k < model.y_dim; ++k) {
    int c = model.y_partner[k];
    int L = r - ycell.levels()[k];
    if (!cut->coordinate_contains(c, PAdic::zero(p)) && cut->min_valuation(c) < L) return std::nullopt;
  }
  return cut;
}

Polynomial family_b_phase(const ModelSpec& model, const Rational& a, const std::vector<Rational>& y0) {
  const CubicNorm& alg = *model.algebra;
  const int n = model.n;
  Polynomial P = alg.trace_polynomial() - alg.norm_polynomial();
  for (int k = 0; k < model.y_dim; ++k) P = P - y0[k] * var(n, model.y_partner[k]);
  Polynomial aa(n);
  for (const auto& [i, j] : model.aa_pairs) aa += var(n, i) * var(n, j);
  return (1 / a) * P - (1 / (2 * a * a)) * aa;
}

}  // namespace

CycValue i_orbital_B(const ModelSpec& model, const PAdic& a, const CellFunction& phi, const CellFunction& phiprime,
                     const OrbitalOptions& options, OrbitalStats* stats) {
  const std::int64_t p = phi.prime();
  check_family_b(model, p);
  if (a.is_zero()) throw std::invalid_argument("i_orbital_B: a must be nonzero");
  if (phi.dim() != model.n + 1 || phiprime.dim() != model.y_dim)
    throw std::invalid_argument("i_orbital_B: dimension mismatch");
  const Rational aq = a.to_rational();
  const int r = a.valuation();
  CycValue total = zero_value(p);
  for (const auto& e : phi.entries()) {
    if (!e.cell.coordinate_contains(0, a)) continue;
    Cell jcell = e.cell.drop(0);
    for (const auto& ey : phiprime.entries()) {
      auto cut = y_constrained(model, jcell, ey.cell, r);
      if (!cut) continue;
      Polynomial P = family_b_phase(model, aq, ey.cell.center_rationals());
      total += (e.value * ey.value * ey.cell.volume()) * cell_integral(P, *cut, options, stats);
    }
  }
  return total;
}

CycValue i_orbital_B_bruteforce(const ModelSpec& model, const PAdic& a, const CellFunction& phi,
                                const CellFunction& phiprime, bool eliminate_y, const OrbitalOptions& options,
                                OrbitalStats* stats) {
  const std::int64_t p = phi.prime();
  check_family_b(model, p);
  const int n = model.n, N = model.n + model.y_dim;
  const Rational aq = a.to_rational();
  const CubicNorm& alg = *model.algebra;
  std::vector<int> embed_j(n);
  for (int i = 0; i < n; ++i) embed_j[i] = i;
  Polynomial P = (alg.trace_polynomial() - alg.norm_polynomial()).renumber(N, embed_j);
  for (int k = 0; k < model.y_dim; ++k) P = P - var(N, n + k) * var(N, model.y_partner[k]);
  Polynomial aa(N);
  for (const auto& [i, j] : model.aa_pairs) aa += var(N, i) * var(N, j);
  P = (1 / aq) * P - (1 / (2 * aq * aq)) * aa;

  std::vector<CellEntry> entries;
  std::vector<int> levels(N, std::numeric_limits<int>::min());
  for (const auto& e : phi.entries()) {
    if (!e.cell.coordinate_contains(0, a)) continue;
    Cell jcell = e.cell.drop(0);
    for (const auto& ey : phiprime.entries()) {
      std::vector<PAdic> c = jcell.center();
      std::vector<int> m = jcell.levels();
      c.insert(c.end(), ey.cell.center().begin(), ey.cell.center().end());
      m.insert(m.end(), ey.cell.levels().begin(), ey.cell.levels().end());
      Cell cell(c, m);
      auto L = polynomial_levels(P, cell);
      for (int j = 0; j < N; ++j) levels[j] = std::max(levels[j], L[j]);
      entries.push_back({cell, e.value * ey.value});
    }
  }
  if (entries.empty()) return zero_value(p);
  CellFunction f(N, p, std::move(entries));
  PhaseSpec ph = polynomial_phase(P, p, levels);
  if (eliminate_y) {
    for (int k = model.y_dim - 1; k >= 0; --k) {
      auto [g, q] = eliminate_linear(f, ph, n + k);
      f = std::move(g);
      ph = std::move(q);
    }
  }
  IntegrateStats is;
  CycValue v = integrate(f, ph, IntegrateOptions{options.budget}, &is);
  if (stats) stats->points += is.points;
  return v;
}

CycValue i_singular_B(const ModelSpec& model, int sign, const CellFunction& phi, const CellFunction& phiprime,
                      const OrbitalOptions& options) {
  const std::int64_t p = phi.prime();
  check_family_b(model, p);
  const int n = model.n;
  const int k = static_cast<int>(model.slice_free.size());
  const int D = k + model.y_dim;
  std::vector<int> free_pos(n, -1);
  for (int i = 0; i < k; ++i) free_pos[model.slice_free[i]] = i;
  // 2 Y.A on (free A coordinates, Y').
  Polynomial P(D);
  for (const auto& f : model.y_dot_a) {
    Polynomial l1 = var(D, free_pos[f.a1]) - var(D, k + f.y1);
    Polynomial l2 = var(D, free_pos[f.a2]) - var(D, k + f.y2);
    P += Rational(2) * (l1 * l2);
  }
  std::vector<char> is_eps(n, 0);
  for (int c : model.slice_eps) is_eps[c] = 1;
  CycValue total = zero_value(p);
  for (const auto& e : phi.entries()) {
    if (!e.cell.coordinate_contains(0, PAdic::zero(p))) continue;
    Cell jcell = e.cell.drop(0);
    bool on_slice = true;
    for (int c = 0; c < n && on_slice; ++c) {
      if (free_pos[c] >= 0) continue;
      PAdic t = is_eps[c] ? PAdic::from_integer(p, sign) : PAdic::zero(p);
      on_slice = jcell.coordinate_contains(c, t);
    }
    if (!on_slice) continue;
    for (const auto& ey : phiprime.entries()) {
      std::vector<PAdic> c;
      std::vector<int> m;
      for (int i = 0; i < k; ++i) {
        c.push_back(jcell.center()[model.slice_free[i]]);
        m.push_back(jcell.levels()[model.slice_free[i]]);
      }
      c.insert(c.end(), ey.cell.center().begin(), ey.cell.center().end());
      m.insert(m.end(), ey.cell.levels().begin(), ey.cell.levels().end());
      total += (e.value * ey.value) * cell_integral(P, Cell(c, m), options, nullptr);
    }
  }
  return total;
}

std::vector<std::int64_t> UnitSample::pick(std::int64_t p, int r) const {
  std::vector<std::int64_t> u = unit_reps(p, r);
  if (!all && first_k >= 0 && static_cast<std::size_t>(first_k) < u.size()) u.resize(first_k);
  return u;
}

std::vector<OrbitalReport> verify_fl(const ModelSpec& model, std::int64_t p, int r_max, const UnitSample& units,
                                     const OrbitalOptions& options) {
  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };
  if (model.family == Family::B && p == 2)
    throw OddPrimeRequired("model " + std::to_string(model.id) + " needs an odd residue characteristic");
  if (r_max < 0) throw std::invalid_argument("verify_fl: r_max must be >= 0");
  const Rational four = model.family == Family::B ? power_of(p, -valuation(Rational(4), p)) : Rational(1);
  CellFunction phi = unit_phi(model, p);
  CellFunction fprime = unit_fprime(p);
  std::vector<OrbitalReport> out;
  for (int r = 0; r <= r_max; ++r) {
    std::vector<std::int64_t> us = units.pick(p, r);
    std::vector<CycValue> left;
    std::vector<std::uint64_t> left_points(us.size(), 0);
    std::vector<double> left_ms(us.size(), 0);
    if (model.family == Family::A && !options.brute_force) {
      auto t0 = clock::now();
      OrbitalStats st;
      left = i_orbital_A_units(model, p, r, us, phi, options, &st);
      double ms = ms_since(t0) / static_cast<double>(us.size());
      for (std::size_t k = 0; k < us.size(); ++k) {
        left_points[k] = st.points / us.size();
        left_ms[k] = ms;
      }
    } else {
      for (std::size_t k = 0; k < us.size(); ++k) {
        auto t0 = clock::now();
        OrbitalStats st;
        PAdic a = PAdic::from_parts(p, r, us[k], PAdic::default_precision(p));
        if (model.family == Family::A)
          left.push_back(i_orbital_A(model, a, phi, options, &st));
        else
          left.push_back(i_orbital_B(model, a, phi, unit_phiprime(model, p), options, &st));
        left_points[k] = st.points;
        left_ms[k] = ms_since(t0);
      }
    }
    for (std::size_t k = 0; k < us.size(); ++k) {
      auto t0 = clock::now();
      OrbitalStats st;
      PAdic a = PAdic::from_parts(p, r, us[k], PAdic::default_precision(p));
      OrbitalReport rep;
      rep.model = model.id;
      rep.p = p;
      rep.r = r;
      rep.u = us[k];
      rep.kind = "regular";
      rep.left = left[k];
      rep.right = j_orbital(a, fprime, options, &st);
      rep.scale = abs_power(p, r, model.n + 1, 2);
      rep.four = four;
      rep.equal = rep.left == (rep.four * rep.scale) * rep.right;
      rep.points = left_points[k] + st.points;
      rep.millis = left_ms[k] + ms_since(t0);
      out.push_back(std::move(rep));
    }
  }
  for (int sign : {1, -1}) {
    auto t0 = clock::now();
    OrbitalReport rep;
    rep.model = model.id;
    rep.p = p;
    rep.r = 0;
    rep.u = 1;
    rep.kind = sign > 0 ? "singular+" : "singular-";
    rep.left = model.family == Family::A ? i_singular_A(model, sign, phi)
                                         : i_singular_B(model, sign, phi, unit_phiprime(model, p), options);
    rep.right = sign > 0 ? j_plus(fprime) : j_minus(fprime);
    rep.scale = 1;
    rep.four = four;
    rep.equal = rep.left == rep.right;
    rep.millis = ms_since(t0);
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace orbint
