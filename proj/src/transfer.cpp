#include "orbint/transfer.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"
#include "orbint/errors.hpp"

namespace orbint {

namespace {

PAdic make(std::int64_t p, int v, std::int64_t u) { return PAdic::from_parts(p, v, u, PAdic::default_precision(p)); }

std::string describe(const PAdic& a) { return a.to_string(); }

// Cell centers carry only the cell's precision; probes need full precision.
PAdic lift(const PAdic& x) { return PAdic::from_rational(x.prime(), x.to_rational()); }

}  // namespace

StepFunction::StepFunction(CellFunction f) : f_(std::move(f)) {
  if (f_.dim() != 1) throw NotInDomain("step function must be one-dimensional");
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  for (const auto& e : f_.entries()) {
    if (e.cell.center()[0].is_zero()) throw NotInDomain("step function cell contains 0");
    lo = std::min(lo, e.cell.center()[0].valuation());
    hi = std::max(hi, e.cell.center()[0].valuation());
  }
  if (!f_.is_zero()) {
    r_min_ = lo;
    r_max_ = hi;
  }
  validate();
}

StepFunction::StepFunction(CellFunction f, int r_min, int r_max) : f_(std::move(f)), r_min_(r_min), r_max_(r_max) {
  validate();
}

StepFunction StepFunction::zero(std::int64_t p) { return StepFunction(CellFunction(1, p, {})); }

void StepFunction::validate() const {
  if (f_.dim() != 1) throw NotInDomain("step function must be one-dimensional");
  if (r_min_ > r_max_) throw NotInDomain("empty valuation band");
  for (const auto& e : f_.entries()) {
    const PAdic& c = e.cell.center()[0];
    if (c.is_zero()) throw NotInDomain("step function cell contains 0");
    if (c.valuation() < r_min_ || c.valuation() > r_max_)
      throw NotInDomain("cell at valuation " + std::to_string(c.valuation()) + " outside band [" +
                        std::to_string(r_min_) + ", " + std::to_string(r_max_) + "]");
  }
}

Rational StepFunction::operator()(const PAdic& a) const {
  std::vector<PAdic> x{a};
  return f_.evaluate(x);
}

std::string StepFunction::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(f_.to_json());
  j["band"] = {r_min_, r_max_};
  return j.dump(2) + "\n";
}

StepFunction StepFunction::from_json(const std::string& text) {
  CellFunction f = CellFunction::from_json(text);
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("band")) {
    auto band = j.at("band");
    if (!band.is_array() || band.size() != 2) throw ParseError("step function band must be [r_min, r_max]");
    return StepFunction(std::move(f), band[0].get<int>(), band[1].get<int>());
  }
  return StepFunction(std::move(f));
}

int germ_level(std::int64_t p) { return p == 2 ? 2 : 1; }

CycValue germ_piece(const PAdic& a, int sign, int m) {
  if (a.is_zero()) throw std::invalid_argument("germ_piece: a must be nonzero");
  if (m < 1) throw std::invalid_argument("germ_piece: m must be positive");
  const std::int64_t p = a.prime();
  PAdic ainv = a.inverse();
  PhaseSpec ph;
  ph.n = 1;
  ph.p = p;
  ph.levels = {std::max(a.valuation(), m)};
  ph.eval = [ainv](std::span<const PAdic> x) { return psi((x[0] + x[0].inverse()) * ainv); };
  Cell cell = Cell::box(p, {Rational(sign)}, {m});
  return integrate(CellFunction::indicator(cell), ph);
}

CycValue germ_reference(const PAdic& a, const GermData& germ) {
  if (a.valuation() < germ.r0)
    throw BelowThreshold("val(a) = " + std::to_string(a.valuation()) + " is below the germ threshold " +
                         std::to_string(germ.r0));
  const std::int64_t p = a.prime();
  CycValue out(Rational(0), p);
  if (!germ.c_plus.is_zero()) out += germ.c_plus * germ_piece(a, 1, germ.m);
  if (!germ.c_minus.is_zero()) out += germ.c_minus * germ_piece(a, -1, germ.m);
  return out;
}

GermResult check_germ_membership(const ModelSpec& model, const CellFunction& phi, const CellFunction* phiprime,
                                 const GermOptions& options) {
  const std::int64_t p = phi.prime();
  GermResult res;
  if (model.family == Family::A) {
    res.germ.c_plus = i_singular_A(model, 1, phi);
    res.germ.c_minus = i_singular_A(model, -1, phi);
  } else {
    if (!phiprime) throw std::invalid_argument("check_germ_membership: family B needs phi'");
    Rational four = power_of(p, -valuation(Rational(4), p));
    res.germ.c_plus = four * i_singular_B(model, 1, phi, *phiprime, options.orbital);
    res.germ.c_minus = four * i_singular_B(model, -1, phi, *phiprime, options.orbital);
  }
  res.germ.m = germ_level(p);
  std::vector<std::int64_t> units = unit_reps(p, options.unit_level);

  auto run = [&](int r0, std::string& failure) {
    res.germ.r0 = r0;
    std::vector<GermProbe> probes;
    GermData finer = res.germ;
    finer.m += 1;
    for (int v = r0; v <= r0 + 1; ++v) {
      std::vector<CycValue> vals;
      if (model.family == Family::A) {
        vals = i_orbital_A_units(model, p, v, units, phi, options.orbital);
      } else {
        for (std::int64_t u : units) vals.push_back(i_orbital_B(model, make(p, v, u), phi, *phiprime, options.orbital));
      }
      Rational norm = power_of(p, v * (model.n - 1) / 2);
      for (std::size_t k = 0; k < units.size(); ++k) {
        PAdic a = make(p, v, units[k]);
        GermProbe g;
        g.v = v;
        g.u = units[k];
        g.left = norm * vals[k];
        g.right = germ_reference(a, res.germ);
        bool stable = g.right == germ_reference(a, finer);
        g.equal = stable && g.left == g.right;
        if (!g.equal && failure.empty())
          failure = "a = " + describe(a) + ": orbital side " + g.left.to_string() + ", germ side " +
                    g.right.to_string() + (stable ? "" : " (reference not stable in m)");
        probes.push_back(std::move(g));
      }
    }
    res.probes = std::move(probes);
    return failure.empty();
  };

  std::string failure;
  if (run(options.r_probe, failure)) {
    res.member = true;
    return res;
  }
  std::string first = failure;
  failure.clear();
  res.retries = 1;
  if (run(options.r_probe + 2, failure)) {
    res.member = true;
    return res;
  }
  throw Mismatch(first + "; retry at r_probe + 2: " + failure);
}

bool TransferResult::exact() const {
  return std::all_of(probes.begin(), probes.end(), [](const TransferProbe& t) { return t.equal; });
}

std::vector<PAdic> probe_grid(const StepFunction& target) {
  const std::int64_t p = target.prime();
  std::vector<PAdic> pts;
  auto add = [&](const PAdic& a) {
    for (const auto& b : pts)
      if (b == a) return;
    pts.push_back(a);
  };
  for (const auto& e : target.function().entries())
    for (const auto& sub : e.cell.split(0)) add(lift(sub.center()[0]));
  for (int v = target.r_min() - 1; v <= target.r_max() + 1; ++v)
    for (std::int64_t u : unit_reps(p, 1)) add(make(p, v, u));
  return pts;
}

namespace {

CycValue evaluate_phi(const ModelSpec& model, const PAdic& a, const CellFunction& phi,
                      const std::optional<CellFunction>& phiprime, const OrbitalOptions& options) {
  if (model.family == Family::A) return i_orbital_A(model, a, phi, options);
  return i_orbital_B(model, a, phi, *phiprime, options);
}

std::vector<TransferProbe> run_probes(const StepFunction& target,
                                      const std::function<CycValue(const PAdic&)>& side) {
  std::vector<TransferProbe> out;
  for (const PAdic& a : probe_grid(target)) {
    TransferProbe t;
    t.a = a;
    t.expected = target(a);
    t.got = side(a);
    t.equal = t.got == CycValue(t.expected, a.prime());
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TransferResult build_phi_from_step(const StepFunction& target, const ModelSpec& model,
                                   const TransferOptions& options) {
  const std::int64_t p = target.prime();
  const int n = model.n;
  std::optional<CellFunction> phiprime;
  if (model.family == Family::B) {
    if (p == 2) throw OddPrimeRequired("family B transfer needs an odd residue characteristic");
    phiprime = unit_phiprime(model, p);
  }
  std::vector<CellEntry> entries;
  for (const auto& e : target.function().entries()) {
    const Cell& acell = e.cell;
    const int v = acell.center()[0].valuation();
    std::vector<PAdic> samples;
    for (const auto& sub : acell.split(0)) samples.push_back(lift(sub.center()[0]));
    bool done = false;
    for (int s = std::max(0, v); s <= std::max(0, v) + options.max_depth && !done; ++s) {
      std::vector<PAdic> center{acell.center()[0]};
      std::vector<int> levels{acell.levels()[0]};
      for (int i = 0; i < n; ++i) {
        center.push_back(PAdic::zero(p));
        levels.push_back(s);
      }
      Cell cell(center, levels);
      CellFunction probe = CellFunction::indicator(cell);
      std::optional<CycValue> c;
      bool stable = true;
      for (const PAdic& a : samples) {
        CycValue ca = evaluate_phi(model, a, probe, phiprime, options.orbital);
        if (!c)
          c = ca;
        else if (!(ca == *c))
          stable = false;
      }
      if (!stable || !c || c->is_zero() || !c->is_rational()) continue;
      entries.push_back({cell, e.value / c->rational()});
      done = true;
    }
    if (!done)
      throw CellShrinkFailed("no stable inner cell for the target cell at " + acell.center()[0].to_string());
  }
  TransferResult res;
  res.function = CellFunction(n + 1, p, std::move(entries));
  res.phiprime = phiprime;
  const CellFunction& phi = res.function;
  res.probes = run_probes(target, [&](const PAdic& a) { return evaluate_phi(model, a, phi, phiprime, options.orbital); });
  return res;
}

TransferResult build_fprime_from_step(const StepFunction& target, const TransferOptions& options) {
  const std::int64_t p = target.prime();
  std::vector<CellEntry> entries;
  for (const auto& e : target.function().entries()) {
    const PAdic& ca = e.cell.center()[0];
    const int v = ca.valuation(), ma = e.cell.levels()[0];
    // g11, g22 in p^v O make x, y integral; g12 = axy - 1/a then only needs -1/c_a + p^k O.
    const int k = std::min(v, ma - 2 * v);
    Rational cq = ca.to_rational();
    Cell cell = Cell::box(p, {Rational(0), -1 / cq, cq, Rational(0)}, {v, k, ma, v});
    entries.push_back({cell, e.value});
  }
  TransferResult res;
  res.function = CellFunction(4, p, std::move(entries));
  const CellFunction& fp = res.function;
  res.probes = run_probes(target, [&](const PAdic& a) { return j_orbital(a, fp, options.orbital); });
  return res;
}

}  // namespace orbint
