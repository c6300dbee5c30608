// Acceptance campaign: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "../support/random_data.hpp"
#include "orbint/errors.hpp"
#include "orbint/jordan.hpp"
#include "orbint/octonion.hpp"
#include "orbint/orbital.hpp"
#include "orbint/polyphase.hpp"
#include "orbint/transfer.hpp"

using namespace orbint;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = "first failure: " + what;
    }
  }
};

PAdic elt(std::int64_t p, int r, std::int64_t u) { return PAdic::from_parts(p, r, u, PAdic::default_precision(p)); }

std::string where(int model, std::int64_t p, int r, std::int64_t u) {
  return "model " + std::to_string(model) + ", p " + std::to_string(p) + ", r " + std::to_string(r) + ", u " +
         std::to_string(u);
}

Rational abs_a_power(std::int64_t p, int r, int n) { return power_of(p, -r * (n + 1) / 2); }

bool singular_ok(const OrbitalReport& rep) {
  return rep.kind == "regular" || (rep.equal && rep.left == CycValue(Rational(1), rep.p));
}

// Runs verify_fl and folds the verdicts into the outcome.
std::size_t run_fl(Outcome& o, int model, std::int64_t p, int r_max) {
  auto reps = verify_fl(ModelSpec::get(model), p, r_max);
  for (const auto& rep : reps) {
    o.require(rep.equal, where(model, p, rep.r, rep.u) + " " + rep.kind + " unequal");
    o.require(singular_ok(rep), where(model, p, 0, 1) + " " + rep.kind + " is not 1");
  }
  return reps.size();
}

Outcome criterion1() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::size_t n = 0, brute = 0;
  for (int model : {1, 2, 3})
    for (std::int64_t p : {2, 3, 5}) n += run_fl(o, model, p, 2);
  OrbitalOptions bf;
  bf.brute_force = true;
  ModelSpec m1 = ModelSpec::get(1);
  for (std::int64_t p : {2, 3, 5})
    for (int r = 0; r <= 1; ++r)
      for (std::int64_t u : unit_reps(p, r)) {
        PAdic a = elt(p, r, u);
        CycValue b = i_orbital_A(m1, a, unit_phi(m1, p), bf);
        CycValue j = j_orbital(a, unit_fprime(p));
        o.require(b == abs_a_power(p, r, m1.n) * j, "brute force, " + where(1, p, r, u));
        o.require(b == i_orbital_A(m1, a, unit_phi(m1, p)), "brute force vs engine, " + where(1, p, r, u));
        ++brute;
      }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs <= 600.0, "runtime above 10 min");
  if (o.pass) {
    o.detail = std::to_string(n) + " comparisons equal, " + std::to_string(brute) +
               " model-1 brute-force cross-checks equal, within the 10 min target";
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::size_t n = 0;
  for (std::int64_t p : {2, 3}) n += run_fl(o, 4, p, 1);
  const CubicNorm& alg = model_algebra(4);
  std::mt19937_64 rng(0xa11ce);
  std::uint64_t points = 0;
  int instances = 0;
  for (int t = 0; t < 60; ++t) {
    std::int64_t p = t % 2 == 0 ? 2 : 3;
    int r = 1 + static_cast<int>(testing::draw(rng, 0, 1));
    auto units = unit_reps(p, r);
    std::int64_t u = units[testing::draw(rng, 0, static_cast<std::int64_t>(units.size()) - 1)];
    std::vector<int> order(27);
    for (int i = 0; i < 27; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> free(order.begin(), order.begin() + 6);
    std::sort(free.begin(), free.end());
    Polynomial P = (1 / (power_of(p, r) * u)) * (alg.trace_polynomial() - alg.norm_polynomial());
    std::vector<int> pos(27, -1);
    for (int k = 0; k < 6; ++k) pos[free[k]] = k;
    for (int i = 26; i >= 0; --i)
      if (pos[i] < 0) P = P.fix_variable(i, Rational(static_cast<long>(testing::draw(rng, -p * p, p * p))));
    P = P.renumber(6, pos);
    Cell cell = Cell::unit_box(p, 6, 0);
    CycValue engine = polynomial_cell_sum(P, cell).value();
    PhaseSpec ph = polynomial_phase(P, p, polynomial_levels(P, cell));
    IntegrateStats st;
    CycValue direct = integrate(CellFunction::indicator(cell), ph, {}, &st);
    points += st.points;
    int coord = -1;
    for (int k = 0; k < 6 && coord < 0; ++k)
      if (P.degree_in(k) == 1) coord = k;
    CycValue eliminated = direct;
    if (coord >= 0) {
      auto [g, q] = eliminate_linear(CellFunction::indicator(cell), ph, coord);
      eliminated = integrate(g, q);
    }
    o.require(engine == direct && eliminated == direct, "sub-problem " + std::to_string(t));
    ++instances;
  }
  if (o.pass)
    o.detail = std::to_string(n) + " comparisons equal, " + std::to_string(instances) +
               " six-coordinate sub-problems agree (engine, elimination, " + std::to_string(points) +
               " brute-force points)";
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::size_t n = 0, brute = 0;
  for (std::int64_t p : {3, 5}) {
    n += run_fl(o, 5, p, 1);
    n += run_fl(o, 6, p, 2);
  }
  ModelSpec m6 = ModelSpec::get(6);
  for (std::int64_t p : {3, 5})
    for (int r = 0; r <= 1; ++r)
      for (std::int64_t u : unit_reps(p, r)) {
        PAdic a = elt(p, r, u);
        CycValue target = abs_a_power(p, r, m6.n) * j_orbital(a, unit_fprime(p));
        if (p == 3) {
          CycValue full = i_orbital_B_bruteforce(m6, a, unit_phi(m6, p), unit_phiprime(m6, p), false);
          o.require(full == target, "full brute force, " + where(6, p, r, u));
          ++brute;
        }
        CycValue elim = i_orbital_B_bruteforce(m6, a, unit_phi(m6, p), unit_phiprime(m6, p), true);
        o.require(elim == target, "Y'-eliminated brute force, " + where(6, p, r, u));
        ++brute;
      }
  if (o.pass)
    o.detail = std::to_string(n) + " comparisons equal, " + std::to_string(brute) +
               " model-6 brute-force cross-checks equal";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::size_t n = 0;
  for (std::int64_t p : {2, 3, 5})
    for (int r = -1; r <= 2; ++r)
      for (std::int64_t u : unit_reps(p, std::max(r, 0))) {
        PAdic a = elt(p, r, u);
        o.require(j_orbital(a, unit_fprime(p)) == j_unit_closed(a), "a = " + a.to_string());
        ++n;
      }
  if (o.pass) o.detail = std::to_string(n) + " values of a agree";
  return o;
}

Outcome criterion5() {
  Outcome o;
  int functions = 0, retries = 0, probes = 0;
  for (Family fam : {Family::A, Family::B})
    for (std::int64_t p : {3, 5}) {
      std::mt19937_64 rng(fam == Family::A ? 500 + p : 700 + p);
      for (int t = 0; t < 20; ++t) {
        int id = fam == Family::A ? 1 + t % 3 : 5 + t % 2;
        ModelSpec m = ModelSpec::get(id);
        CellFunction phi = testing::random_germ_phi(rng, m, p);
        CellFunction php = fam == Family::B ? testing::random_phiprime(rng, m, p) : CellFunction();
        std::string tag = "model " + std::to_string(id) + ", p " + std::to_string(p) + ", function " + std::to_string(t);
        try {
          GermResult g = check_germ_membership(m, phi, fam == Family::B ? &php : nullptr);
          CycValue cp = fam == Family::A ? i_singular_A(m, 1, phi) : i_singular_B(m, 1, phi, php);
          CycValue cm = fam == Family::A ? i_singular_A(m, -1, phi) : i_singular_B(m, -1, phi, php);
          o.require(g.member && g.germ.c_plus == cp && g.germ.c_minus == cm, tag + ": germ constants");
          bool v0 = false, v1 = false;
          for (const auto& pr : g.probes) {
            o.require(pr.equal, tag + ": probe");
            v0 = v0 || pr.v == g.germ.r0;
            v1 = v1 || pr.v == g.germ.r0 + 1;
          }
          o.require(v0 && v1, tag + ": two probe valuations");
          retries += g.retries;
          probes += static_cast<int>(g.probes.size());
        } catch (const Mismatch& e) {
          o.require(false, tag + ": " + e.what());
        }
        ++functions;
      }
    }
  if (o.pass)
    o.detail = std::to_string(functions) + " functions are members (" + std::to_string(probes) + " probes, " +
               std::to_string(retries) + " retries)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  int functions = 0;
  std::size_t probes = 0;
  for (std::int64_t p : {3, 5}) {
    std::mt19937_64 rng(900 + p);
    for (int t = 0; t < 20; ++t) {
      StepFunction f = testing::random_step(rng, p);
      int id = 1 + t % 6;
      TransferResult phi = build_phi_from_step(f, ModelSpec::get(id));
      TransferResult fp = build_fprime_from_step(f);
      std::string tag = "p " + std::to_string(p) + ", step function " + std::to_string(t);
      o.require(phi.exact(), tag + ": phi round trip (model " + std::to_string(id) + ")");
      o.require(fp.exact(), tag + ": f' round trip");
      for (const auto& e : f.function().entries()) {
        bool hit = false;
        for (const auto& pr : phi.probes) hit = hit || e.cell.coordinate_contains(0, pr.a);
        o.require(hit, tag + ": probe grid misses a support cell");
      }
      probes += phi.probes.size() + fp.probes.size();
      ++functions;
    }
  }
  if (o.pass)
    o.detail = std::to_string(functions) + " step functions round-trip on both sides (" + std::to_string(probes) +
               " probes)";
  return o;
}

PAdic random_scalar(std::mt19937_64& rng, std::int64_t p) {
  std::int64_t k = testing::draw(rng, -500, 500);
  if (k == 0) return PAdic::zero(p);
  Rational q(static_cast<long>(k));
  if (testing::draw(rng, 0, 3) == 0) q /= p;
  return PAdic::from_rational(p, q);
}

Outcome criterion7() {
  Outcome o;
  int elements = 0, pairs = 0;
  for (int id = 1; id <= 6; ++id) {
    const CubicNorm& alg = model_algebra(id);
    for (std::int64_t p : {2, 3, 5}) {
      std::mt19937_64 rng(100 * id + p);
      JordanElement I = JordanElement::identity(alg, p);
      o.require(trace(I) == PAdic::from_integer(p, 3), "tr(I), model " + std::to_string(id));
      o.require(norm(I) == PAdic::from_integer(p, 1), "N(I), model " + std::to_string(id));
      for (int t = 0; t < 100; ++t) {
        std::vector<PAdic> c;
        for (int i = 0; i < alg.dim(); ++i) c.push_back(random_scalar(rng, p));
        JordanElement x(alg, c);
        JordanElement xs = sharp(x);
        PAdic N = norm(x);
        std::string tag = "model " + std::to_string(id) + ", p " + std::to_string(p);
        o.require(sharp(xs) == N * x, tag + ": (x#)# = N(x) x");
        o.require(norm(xs) == N * N, tag + ": N(x#) = N(x)^2");
        ++elements;
      }
    }
  }
  for (std::int64_t p : {2, 3, 5}) {
    std::mt19937_64 rng(4000 + p);
    auto oct = [&] {
      Octonion z;
      z.alpha = random_scalar(rng, p);
      z.beta = random_scalar(rng, p);
      for (int i = 0; i < 3; ++i) {
        z.v[i] = random_scalar(rng, p);
        z.w[i] = random_scalar(rng, p);
      }
      return z;
    };
    for (int t = 0; t < 100; ++t) {
      Octonion x = oct(), y = oct();
      o.require(oct_norm(oct_mul(x, y)) == oct_norm(x) * oct_norm(y), "octonion norm, p " + std::to_string(p));
      ++pairs;
    }
  }
  if (o.pass)
    o.detail = std::to_string(elements) + " elements over 6 models and 3 primes, " + std::to_string(pairs) +
               " octonion pairs";
  return o;
}

Outcome criterion8() {
  Outcome o;
  int cases = 0;
  for (std::int64_t p : {2, 3, 5})
    for (int m = 1; m <= 2; ++m)
      for (int K : {2 * m + 1, 2 * m + 2})
        for (std::int64_t u : unit_reps(p, 1)) {
          PAdic b = elt(p, -K, u);
          PhaseSpec ph;
          ph.n = 2;
          ph.p = p;
          ph.levels = {K - m, K - m};
          ph.eval = [b](std::span<const PAdic> x) { return psi(b * x[0] * x[1]); };
          ph.affine[0] = AffineAccessor{[b](std::span<const PAdic> x) { return b * x[1]; },
                                        [p](std::span<const PAdic>) { return Angle(p, 0, 0); }};
          CellFunction box = CellFunction::indicator(Cell::unit_box(p, 2, m));
          CycValue expected(power_of(p, -K), p);
          std::string tag = "p " + std::to_string(p) + ", m " + std::to_string(m) + ", |b| = p^" + std::to_string(K);
          o.require(integrate(box, ph) == expected, tag + " (enumeration)");
          auto [g, q] = eliminate_linear(box, ph, 0);
          o.require(integrate(g, q) == expected, tag + " (elimination)");
          ++cases;
        }
  if (o.pass) o.detail = std::to_string(cases) + " cases equal |b|^-1 by enumeration and by elimination";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "family A fundamental lemma, models 1-3, p in {2,3,5}, r <= 2, all units", criterion1},
      {2, "model 4 fundamental lemma, p in {2,3}, r <= 1; 60 six-coordinate sub-problems", criterion2},
      {3, "family B fundamental lemma, models 5-6, p in {3,5}, r <= 1 (model 6: r <= 2)", criterion3},
      {4, "j_orbital(a, f'0) equals the closed form", criterion4},
      {5, "germ membership, 20 random functions per family and p in {3,5}", criterion5},
      {6, "transfer round trips, 20 random step functions per p in {3,5}", criterion6},
      {7, "cubic norm identities and octonion norm, 100 elements per model and p", criterion7},
      {8, "double integral of psi(bxy) over (p^m Z_p)^2 equals |b|^-1", criterion8},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s | %s | tolerance: exact equality in Q(zeta) | %s | %.1f s\n", c.id,
                o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
