#include "orbint/jordan.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <json.hpp>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "orbint/octonion.hpp"

namespace orbint {

namespace {

Rational eval_at(const Polynomial& P, const std::vector<Rational>& x) { return P.evaluate(x); }

std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw std::logic_error("CubicNorm: trace pairing is degenerate");
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    Rational d = a[c][c];
    for (int j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

// Determinant of a square matrix of variables, Leibniz formula.
Polynomial determinant(int nvars, const std::vector<std::vector<int>>& var) {
  const int k = static_cast<int>(var.size());
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  Polynomial det(nvars);
  do {
    std::map<int, int> mono;
    for (int i = 0; i < k; ++i) mono[var[i][perm[i]]] += 1;
    det.add_term(Monomial(mono.begin(), mono.end()), Rational(permutation_sign(perm)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

void matchings(std::vector<int>& rest, std::vector<int>& seq, std::vector<std::vector<int>>& out) {
  if (rest.empty()) {
    out.push_back(seq);
    return;
  }
  int first = rest.front();
  for (std::size_t j = 1; j < rest.size(); ++j) {
    int partner = rest[j];
    std::vector<int> next;
    for (std::size_t k = 1; k < rest.size(); ++k)
      if (k != j) next.push_back(rest[k]);
    seq.push_back(first);
    seq.push_back(partner);
    matchings(next, seq, out);
    seq.pop_back();
    seq.pop_back();
  }
}

// Pfaffian of the skew matrix with upper entries var(i, j), i < j, as a sum
// over perfect matchings.
Polynomial pfaffian(int nvars, int size, const std::function<int(int, int)>& var) {
  std::vector<int> all(size);
  for (int i = 0; i < size; ++i) all[i] = i;
  std::vector<int> seq;
  std::vector<std::vector<int>> ms;
  matchings(all, seq, ms);
  Polynomial pf(nvars);
  for (const auto& m : ms) {
    std::map<int, int> mono;
    for (std::size_t k = 0; k < m.size(); k += 2) mono[var(m[k], m[k + 1])] += 1;
    pf.add_term(Monomial(mono.begin(), mono.end()), Rational(permutation_sign(m)));
  }
  return pf;
}

CubicNorm make_mat3() {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> var(3, std::vector<int>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      var[i][j] = 3 * i + j;
      labels.push_back("x" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  std::vector<Rational> id(9, Rational(0));
  id[0] = id[4] = id[8] = 1;
  return CubicNorm("Mat3", labels, determinant(9, var), id);
}

// F + Asym4 with N(b, A) = b Pf(A).  labels[k] names the coordinate in slot k;
// slot_of maps "b", "a12", ..., "a34" to slots.
CubicNorm make_mat1_asym4(const std::string& name, const std::vector<std::string>& labels,
                          const std::vector<std::string>& canonical) {
  auto slot = [&](const std::string& c) {
    auto it = std::find(canonical.begin(), canonical.end(), c);
    return static_cast<int>(it - canonical.begin());
  };
  auto var = [&](int i, int j) { return slot("a" + std::to_string(i + 1) + std::to_string(j + 1)); };
  Polynomial pf = pfaffian(7, 4, var);
  Polynomial N = Polynomial::variable(7, slot("b")) * pf;
  std::vector<Rational> id(7, Rational(0));
  id[slot("b")] = 1;
  id[slot("a14")] = 1;
  id[slot("a23")] = 1;
  return CubicNorm(name, labels, N, id);
}

CubicNorm make_asym6(const std::string& name, const std::vector<std::string>& labels,
                     const std::vector<std::string>& canonical) {
  auto slot = [&](const std::string& c) {
    auto it = std::find(canonical.begin(), canonical.end(), c);
    if (it == canonical.end()) throw std::logic_error("make_asym6: missing " + c);
    return static_cast<int>(it - canonical.begin());
  };
  auto var = [&](int i, int j) { return slot("a" + std::to_string(i + 1) + std::to_string(j + 1)); };
  Polynomial pf = pfaffian(15, 6, var);
  std::vector<Rational> id(15, Rational(0));
  id[slot("a16")] = 1;
  id[slot("a25")] = 1;
  id[slot("a34")] = 1;
  if (pf.evaluate(id) < 0) pf = -pf;
  return CubicNorm(name, labels, pf, id);
}

std::vector<std::string> asym6_canonical() {
  std::vector<std::string> c;
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j) c.push_back("a" + std::to_string(i) + std::to_string(j));
  return c;
}

// Model 5 coordinates: A1 = a16, A_i = a_i6 (i = 2..5), A_ij = a_ij (i < j <= 5).
void model5_layout(std::vector<std::string>& labels, std::vector<std::string>& canonical) {
  labels = {"A1", "A2", "A3", "A4", "A5"};
  canonical = {"a16", "a26", "a36", "a46", "a56"};
  for (int i = 1; i <= 5; ++i)
    for (int j = i + 1; j <= 5; ++j) {
      labels.push_back("A" + std::to_string(i) + std::to_string(j));
      canonical.push_back("a" + std::to_string(i) + std::to_string(j));
    }
}

CubicNorm make_herm3_octonion() {
  const int n = 27;
  std::vector<std::string> labels = {"a1", "a2", "a3"};
  const char* parts[8] = {"a", "v1", "v2", "v3", "w1", "w2", "w3", "b"};
  for (int k = 1; k <= 3; ++k)
    for (const char* s : parts) labels.push_back("x" + std::to_string(k) + "_" + s);
  auto V = [&](int i) { return Polynomial::variable(n, i); };
  auto oct = [&](int k) {
    int b = 3 + 8 * (k - 1);
    return Zorn<Polynomial>{V(b), {V(b + 1), V(b + 2), V(b + 3)}, {V(b + 4), V(b + 5), V(b + 6)}, V(b + 7)};
  };
  Zorn<Polynomial> x1 = oct(1), x2 = oct(2), x3 = oct(3);
  Polynomial N = V(0) * V(1) * V(2);
  N = N - V(0) * zorn_norm(x1) - V(1) * zorn_norm(x2) - V(2) * zorn_norm(x3);
  N = N + zorn_trace(zorn_mul(zorn_mul(x1, x2), x3));
  std::vector<Rational> id(n, Rational(0));
  id[0] = id[1] = id[2] = 1;
  return CubicNorm("Herm3(O_split)", labels, N, id);
}

std::vector<Polynomial> gradient(const Polynomial& P) {
  std::vector<Polynomial> g;
  for (int i = 0; i < P.nvars(); ++i) g.push_back(P.derivative(i));
  return g;
}

PAdic evaluate_padic(const Polynomial& P, const std::vector<PAdic>& x) {
  return PAdicEvaluator(P, x.front().prime())(x);
}

}  // namespace

CubicNorm::CubicNorm(std::string name, std::vector<std::string> labels, Polynomial norm,
                     std::vector<Rational> identity)
    : name_(std::move(name)), labels_(std::move(labels)), norm_(std::move(norm)), identity_(std::move(identity)) {
  const int n = dim();
  if (norm_.nvars() != n || static_cast<int>(identity_.size()) != n)
    throw std::invalid_argument("CubicNorm: dimension mismatch");
  auto grad = gradient(norm_);
  trace_.resize(n);
  for (int i = 0; i < n; ++i) trace_[i] = eval_at(grad[i], identity_);
  pairing_.assign(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pairing_[i][j] = trace_[i] * trace_[j] - eval_at(grad[i].derivative(j), identity_);
  auto inv = invert(pairing_);
  sharp_.assign(n, Polynomial(n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      if (inv[k][j] != 0) sharp_[k] += inv[k][j] * grad[j];
}

int CubicNorm::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("CubicNorm " + name_ + " has no coordinate " + label);
  return static_cast<int>(it - labels_.begin());
}

Polynomial CubicNorm::trace_polynomial() const {
  Polynomial t(dim());
  for (int i = 0; i < dim(); ++i) t.add_term({{i, 1}}, trace_[i]);
  return t;
}

std::string CubicNorm::to_json() const {
  using nlohmann::ordered_json;
  auto poly_json = [](const Polynomial& P) {
    ordered_json terms = ordered_json::array();
    for (const auto& [m, c] : P.terms()) {
      ordered_json mono = ordered_json::array();
      for (const auto& [v, e] : m) mono.push_back({v, e});
      terms.push_back({{"monomial", mono}, {"coefficient", orbint::to_string(c)}});
    }
    return terms;
  };
  ordered_json j;
  j["name"] = name_;
  j["dim"] = dim();
  j["labels"] = labels_;
  ordered_json id = ordered_json::array(), tr = ordered_json::array();
  for (int i = 0; i < dim(); ++i) {
    id.push_back(orbint::to_string(identity_[i]));
    tr.push_back(orbint::to_string(trace_[i]));
  }
  j["identity"] = id;
  j["trace"] = tr;
  j["norm"] = poly_json(norm_);
  ordered_json sh = ordered_json::array();
  for (const auto& s : sharp_) sh.push_back(poly_json(s));
  j["sharp"] = sh;
  ordered_json pr = ordered_json::array();
  for (int i = 0; i < dim(); ++i)
    for (int k = 0; k < dim(); ++k)
      if (pairing_[i][k] != 0) pr.push_back({i, k, orbint::to_string(pairing_[i][k])});
  j["pairing"] = pr;
  return j.dump(2) + "\n";
}

const CubicNorm& model_algebra(int model_id) {
  static std::once_flag once;
  static std::vector<std::unique_ptr<CubicNorm>> models;
  if (model_id < 1 || model_id > 6) throw std::out_of_range("model id must be in 1..6");
  std::call_once(once, [] {
    std::vector<std::string> m2 = {"b", "a12", "a13", "a14", "a23", "a24", "a34"};
    std::vector<std::string> m6_labels = {"A1", "A2", "A3", "A12", "A13", "A23", "b"};
    std::vector<std::string> m6_canon = {"a14", "a24", "a34", "a12", "a13", "a23", "b"};
    std::vector<std::string> l5, c5;
    model5_layout(l5, c5);
    models.push_back(std::make_unique<CubicNorm>(make_mat3()));
    models.push_back(std::make_unique<CubicNorm>(make_mat1_asym4("Mat1+Asym4", m2, m2)));
    models.push_back(std::make_unique<CubicNorm>(make_asym6("Asym6", asym6_canonical(), asym6_canonical())));
    models.push_back(std::make_unique<CubicNorm>(make_herm3_octonion()));
    models.push_back(std::make_unique<CubicNorm>(make_asym6("Asym6", l5, c5)));
    models.push_back(std::make_unique<CubicNorm>(make_mat1_asym4("Mat1+Asym4", m6_labels, m6_canon)));
  });
  return *models[model_id - 1];
}

JordanElement::JordanElement(const CubicNorm& algebra, std::vector<PAdic> coords)
    : alg_(&algebra), x_(std::move(coords)) {
  if (static_cast<int>(x_.size()) != algebra.dim()) throw std::invalid_argument("JordanElement: wrong dimension");
}

JordanElement JordanElement::identity(const CubicNorm& algebra, std::int64_t p) {
  std::vector<PAdic> x;
  for (const auto& q : algebra.identity()) x.push_back(q == 0 ? PAdic::zero(p) : PAdic::from_rational(p, q));
  return JordanElement(algebra, std::move(x));
}

JordanElement operator+(const JordanElement& a, const JordanElement& b) {
  if (a.alg_ != b.alg_) throw std::invalid_argument("JordanElement: different algebras");
  std::vector<PAdic> x(a.x_.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = a.x_[i] + b.x_[i];
  return JordanElement(*a.alg_, std::move(x));
}

JordanElement operator-(const JordanElement& a, const JordanElement& b) {
  if (a.alg_ != b.alg_) throw std::invalid_argument("JordanElement: different algebras");
  std::vector<PAdic> x(a.x_.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = a.x_[i] - b.x_[i];
  return JordanElement(*a.alg_, std::move(x));
}

JordanElement operator*(const PAdic& s, const JordanElement& a) {
  std::vector<PAdic> x(a.x_.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = s * a.x_[i];
  return JordanElement(*a.alg_, std::move(x));
}

bool operator==(const JordanElement& a, const JordanElement& b) { return a.alg_ == b.alg_ && a.x_ == b.x_; }

PAdic trace(const JordanElement& a) { return evaluate_padic(a.algebra().trace_polynomial(), a.coords()); }

PAdic norm(const JordanElement& a) { return evaluate_padic(a.algebra().norm_polynomial(), a.coords()); }

JordanElement sharp(const JordanElement& a) {
  std::vector<PAdic> x;
  for (const auto& s : a.algebra().sharp_polynomials()) x.push_back(evaluate_padic(s, a.coords()));
  return JordanElement(a.algebra(), std::move(x));
}

PAdic pair(const JordanElement& a, const JordanElement& b) {
  if (&a.algebra() != &b.algebra()) throw std::invalid_argument("pair: different algebras");
  const auto& T = a.algebra().pairing_matrix();
  const std::int64_t p = a.prime();
  PAdic s = PAdic::zero(p);
  for (int i = 0; i < a.algebra().dim(); ++i)
    for (int j = 0; j < a.algebra().dim(); ++j)
      if (T[i][j] != 0) s += PAdic::from_rational(p, T[i][j]) * a.coords()[i] * b.coords()[j];
  return s;
}

}  // namespace orbint
