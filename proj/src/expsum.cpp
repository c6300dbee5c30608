#include "orbint/expsum.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "orbint/errors.hpp"

namespace orbint {

ModPoly ModPoly::from_polynomial(const Polynomial& poly, std::int64_t p, int R) {
  ModPoly f;
  f.p = p;
  f.R = R;
  f.nvars = poly.nvars();
  for (const auto& [m, c] : poly.terms()) f.terms.emplace_back(m, reduce_mod(c, p, R));
  f.normalize();
  return f;
}

void ModPoly::normalize() {
  std::int64_t mod = modulus();
  std::map<Monomial, std::int64_t> acc;
  for (auto& [m, c] : terms) {
    std::int64_t& slot = acc[m];
    slot = (slot + ((c % mod) + mod) % mod) % mod;
  }
  terms.clear();
  for (auto& [m, c] : acc)
    if (c != 0) terms.emplace_back(m, c);
}

std::int64_t ModPoly::evaluate(std::span<const std::int64_t> x) const {
  std::int64_t mod = modulus();
  std::int64_t s = 0;
  for (const auto& [m, c] : terms) {
    std::int64_t t = c % mod;
    for (const auto& [var, e] : m)
      for (int k = 0; k < e; ++k) t = mulmod(t, ((x[var] % mod) + mod) % mod, mod);
    s = (s + t) % mod;
  }
  return s;
}

namespace {

// Sum_e p^e * counts[e][k].
class Buckets {
 public:
  Buckets(std::int64_t p, std::int64_t size) : p_(p), size_(size) {}
  void add(int e, std::int64_t k, std::int64_t c) {
    auto& v = by_exp_[e];
    if (v.empty()) v.assign(size_, 0);
    v[k] += c;
  }
  std::vector<Integer> finish() const {
    std::vector<Integer> out(size_);
    for (const auto& [e, v] : by_exp_) {
      Integer scale = ipow(p_, static_cast<unsigned>(e));
      for (std::int64_t k = 0; k < size_; ++k)
        if (v[k] != 0) out[k] += scale * Integer(static_cast<long>(v[k]));
    }
    return out;
  }

 private:
  std::int64_t p_;
  std::int64_t size_;
  std::map<int, std::vector<std::int64_t>> by_exp_;
};

std::int64_t md(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

struct AffineSolution {
  bool ok = false;
  std::vector<std::int64_t> x0;
  std::vector<std::vector<std::int64_t>> kernel;
};

// Solves A x = b over F_p; A is rows x cols.
AffineSolution solve_mod_p(std::vector<std::vector<std::int64_t>> A, std::vector<std::int64_t> b, int cols,
                           std::int64_t p) {
  const int rows = static_cast<int>(A.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (A[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(A[piv], A[r]);
    std::swap(b[piv], b[r]);
    std::int64_t inv = inverse_mod(A[r][c], p);
    for (int j = c; j < cols; ++j) A[r][j] = A[r][j] * inv % p;
    b[r] = b[r] * inv % p;
    for (int i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      std::int64_t f = A[i][c];
      for (int j = c; j < cols; ++j) A[i][j] = md(A[i][j] - f * A[r][j], p);
      b[i] = md(b[i] - f * b[r], p);
    }
    pivot_col.push_back(c);
    ++r;
  }
  AffineSolution s;
  for (int i = r; i < rows; ++i)
    if (b[i] != 0) return s;
  s.ok = true;
  s.x0.assign(cols, 0);
  for (int i = 0; i < r; ++i) s.x0[pivot_col[i]] = b[i];
  std::vector<char> is_pivot(cols, 0);
  for (int c : pivot_col) is_pivot[c] = 1;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<std::int64_t> k(cols, 0);
    k[f] = 1;
    for (int i = 0; i < r; ++i) k[pivot_col[i]] = md(-A[i][f], p);
    s.kernel.push_back(std::move(k));
  }
  return s;
}

int legendre(std::int64_t a, std::int64_t p) {
  a = md(a, p);
  if (a == 0) return 0;
  std::int64_t e = (p - 1) / 2, r = 1, b = a;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

// Outcome of a quadratic character sum over F_p^m:
// sign * p^exponent * zeta^shift * G^(gauss ? 1 : 0), G = sum_y zeta^(y^2).
struct QuadResult {
  bool zero = false;
  int sign = 1;
  int exponent = 0;
  std::int64_t shift = 0;
  bool gauss = false;
};

// Q = d + sum l_i x_i + sum_{i<=j} q[i][j] x_i x_j over F_p.
QuadResult quadratic_sum(std::int64_t p, int m, std::int64_t d, std::vector<std::int64_t> l,
                         std::vector<std::vector<std::int64_t>> q) {
  auto Q = [&](int i, int j) -> std::int64_t& { return i <= j ? q[i][j] : q[j][i]; };
  std::vector<char> alive(m, 1);
  QuadResult res;
  int leg = 1, squares = 0;
  const bool two = p == 2;
  auto fold_squares = [&]() {
    if (!two) return;
    for (int i = 0; i < m; ++i)
      if (alive[i] && q[i][i] != 0) {
        l[i] = (l[i] + q[i][i]) % 2;
        q[i][i] = 0;
      }
  };
  fold_squares();
  for (;;) {
    int sq = -1;
    if (!two)
      for (int i = 0; i < m; ++i)
        if (alive[i] && q[i][i] != 0) {
          sq = i;
          break;
        }
    if (sq >= 0) {
      const int i = sq;
      std::int64_t a = q[i][i];
      leg *= legendre(a, p);
      ++squares;
      std::int64_t inv4a = inverse_mod(md(4 * a, p), p);
      // Q = a (x_i + L/2a)^2 - L^2/4a + rest, L = l_i + sum_j q_ij x_j.
      std::vector<std::int64_t> L(m, 0);
      for (int j = 0; j < m; ++j)
        if (alive[j] && j != i) L[j] = Q(i, j);
      std::int64_t L0 = l[i];
      alive[i] = 0;
      d = md(d - inv4a * (L0 * L0 % p), p);
      for (int j = 0; j < m; ++j) {
        if (!alive[j]) continue;
        l[j] = md(l[j] - inv4a * (2 * L0 % p * L[j] % p), p);
        for (int k = j; k < m; ++k) {
          if (!alive[k]) continue;
          std::int64_t coef = j == k ? L[j] * L[j] % p : 2 * L[j] % p * L[k] % p;
          q[j][k] = md(q[j][k] - inv4a * coef, p);
        }
      }
      continue;
    }
    int pi = -1, pj = -1;
    for (int i = 0; i < m && pi < 0; ++i) {
      if (!alive[i]) continue;
      for (int j = 0; j < m; ++j)
        if (j != i && alive[j] && Q(i, j) != 0) {
          pi = i;
          pj = j;
          break;
        }
    }
    if (pi < 0) break;
    const int i = pi, j = pj;
    // Summing x_i forces A = l_i + sum_k q_ik x_k = 0; solve for x_j.
    std::int64_t inv = inverse_mod(Q(i, j), p);
    std::int64_t alpha = md(-l[i] * inv, p);
    std::vector<std::int64_t> beta(m, 0);
    for (int k = 0; k < m; ++k)
      if (alive[k] && k != i && k != j) beta[k] = md(-Q(i, k) * inv, p);
    alive[i] = 0;
    res.exponent += 1;
    alive[j] = 0;
    // Substitute x_j = alpha + sum beta_k x_k into the remaining form.
    std::int64_t qjj = q[j][j];
    std::int64_t lj = l[j];
    std::vector<std::int64_t> qj(m, 0);
    for (int k = 0; k < m; ++k)
      if (alive[k]) qj[k] = Q(j, k);
    d = md(d + lj * alpha + qjj * (alpha * alpha % p), p);
    for (int k = 0; k < m; ++k) {
      if (!alive[k]) continue;
      l[k] = md(l[k] + lj * beta[k] + 2 * qjj % p * alpha % p * beta[k] + qj[k] * alpha, p);
      for (int k2 = k; k2 < m; ++k2) {
        if (!alive[k2]) continue;
        std::int64_t add = k == k2 ? qjj * beta[k] % p * beta[k] % p
                                   : 2 * qjj % p * beta[k] % p * beta[k2] % p;
        add += k == k2 ? qj[k] * beta[k] % p : (qj[k] * beta[k2] + qj[k2] * beta[k]) % p;
        q[k][k2] = md(q[k][k2] + add, p);
      }
    }
    fold_squares();
  }
  for (int i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    if (l[i] != 0) {
      res.zero = true;
      return res;
    }
    res.exponent += 1;
  }
  if (!two) {
    res.sign = leg;
    res.exponent += squares / 2;
    if ((squares / 2) % 2 == 1 && legendre(p - 1, p) == -1) res.sign = -res.sign;
    res.gauss = squares % 2 == 1;
  }
  res.shift = d;
  return res;
}

// Reduce exponents with x^p = x, valid for values mod p.
std::vector<std::pair<Monomial, std::int64_t>> reduce_mod_p(const ModPoly& f) {
  const std::int64_t p = f.p;
  std::map<Monomial, std::int64_t> acc;
  for (const auto& [m, c] : f.terms) {
    std::int64_t cm = c % p;
    if (cm == 0) continue;
    Monomial r = m;
    for (auto& fac : r) fac.second = static_cast<int>((fac.second - 1) % (p - 1) + 1);
    acc[r] = (acc[r] + cm) % p;
  }
  std::vector<std::pair<Monomial, std::int64_t>> out;
  for (auto& [m, c] : acc)
    if (c != 0) out.emplace_back(m, c);
  return out;
}

struct Context {
  std::uint64_t budget;
  int restarts;
  std::uint64_t leaves = 0;
  void charge(std::uint64_t k) {
    leaves += k;
    if (leaves > budget)
      throw BudgetExceeded("exponential-sum engine exceeded " + std::to_string(budget) + " leaves");
  }
};

bool partition_feasible(const std::vector<Monomial>& monos, const std::vector<char>& inS, bool quadratic,
                        std::vector<int>* color, int* suggest, std::mt19937_64& rng) {
  const int n = static_cast<int>(inS.size());
  std::vector<int> score(n, 0);
  bool violated = false;
  std::vector<std::vector<int>> adj(n);
  for (const auto& m : monos) {
    int count = 0, deg = 0;
    bool square = false;
    for (const auto& [v, e] : m)
      if (!inS[v]) {
        ++count;
        deg += e;
        if (e >= 2) square = true;
      }
    bool bad = quadratic ? deg >= 3 : (count >= 3 || square);
    if (bad) {
      violated = true;
      for (const auto& [v, e] : m)
        if (!inS[v]) score[v] += 1;
    } else if (!quadratic && count == 2) {
      int a = -1, b = -1;
      for (const auto& [v, e] : m)
        if (!inS[v]) (a < 0 ? a : b) = v;
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  auto pick = [&](const std::vector<int>& s) {
    int best = -1;
    int best_score = 0;
    int ties = 0;
    for (int v = 0; v < n; ++v) {
      if (s[v] > best_score) {
        best_score = s[v];
        best = v;
        ties = 1;
      } else if (s[v] == best_score && best_score > 0) {
        ++ties;
        if (std::uniform_int_distribution<int>(1, ties)(rng) == 1) best = v;
      }
    }
    return best;
  };
  if (violated) {
    if (suggest) *suggest = pick(score);
    return false;
  }
  if (quadratic) return true;
  std::vector<int> col(n, -1);
  for (int s = 0; s < n; ++s) {
    if (inS[s] || col[s] >= 0) continue;
    col[s] = 0;
    std::vector<int> stack{s};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adj[u]) {
        if (col[w] < 0) {
          col[w] = 1 - col[u];
          stack.push_back(w);
        } else if (col[w] == col[u]) {
          if (suggest) {
            std::vector<int> deg(n, 0);
            deg[u] = static_cast<int>(adj[u].size());
            deg[w] = static_cast<int>(adj[w].size());
            *suggest = pick(deg);
          }
          return false;
        }
      }
    }
  }
  if (color) *color = col;
  return true;
}

}  // namespace

std::optional<VariablePartition> find_partition(const std::vector<Monomial>& monomials, int nvars, bool quadratic,
                                                int restarts) {
  std::mt19937_64 rng(0x0b17a1ULL + (quadratic ? 1 : 0));
  std::optional<VariablePartition> best;
  for (int attempt = 0; attempt < std::max(1, restarts); ++attempt) {
    std::vector<char> inS(nvars, 0);
    for (;;) {
      int suggest = -1;
      if (partition_feasible(monomials, inS, quadratic, nullptr, &suggest, rng)) break;
      if (suggest < 0) return std::nullopt;
      inS[suggest] = 1;
    }
    std::vector<int> order;
    for (int v = 0; v < nvars; ++v)
      if (inS[v]) order.push_back(v);
    std::shuffle(order.begin(), order.end(), rng);
    for (int v : order) {
      inS[v] = 0;
      if (!partition_feasible(monomials, inS, quadratic, nullptr, nullptr, rng)) inS[v] = 1;
    }
    std::vector<int> color;
    partition_feasible(monomials, inS, quadratic, &color, nullptr, rng);
    VariablePartition part;
    part.quadratic = quadratic;
    std::vector<char> appears(nvars, 0);
    for (const auto& m : monomials)
      for (const auto& fac : m) appears[fac.first] = 1;
    for (int v = 0; v < nvars; ++v) {
      if (inS[v])
        part.fixed.push_back(v);
      else if (quadratic)
        part.left.push_back(v);
      else if (appears[v] && color[v] == 0)
        part.left.push_back(v);
      else
        part.right.push_back(v);
    }
    if (!best || part.fixed.size() < best->fixed.size()) best = std::move(part);
  }
  return best;
}

namespace {

// Enumerates assignments of the fixed variables and exposes the residual
// linear/bilinear/quadratic data for each.
class Slicer {
 public:
  Slicer(std::int64_t p, int nvars, const std::vector<std::pair<Monomial, std::int64_t>>& terms,
         const VariablePartition& part)
      : p_(p), part_(part) {
    pos_.assign(nvars, -1);
    side_.assign(nvars, 0);
    for (std::size_t i = 0; i < part.fixed.size(); ++i) {
      pos_[part.fixed[i]] = static_cast<int>(i);
      side_[part.fixed[i]] = 0;
    }
    for (std::size_t i = 0; i < part.left.size(); ++i) {
      pos_[part.left[i]] = static_cast<int>(i);
      side_[part.left[i]] = 1;
    }
    for (std::size_t i = 0; i < part.right.size(); ++i) {
      pos_[part.right[i]] = static_cast<int>(i);
      side_[part.right[i]] = 2;
    }
    for (const auto& [m, c] : terms) {
      Term t;
      t.coef = c % p;
      if (t.coef == 0) continue;
      std::vector<std::pair<int, int>> rest;
      for (const auto& [v, e] : m) {
        if (side_[v] == 0)
          t.fixed.emplace_back(pos_[v], e);
        else
          for (int k = 0; k < e; ++k) rest.emplace_back(side_[v], pos_[v]);
      }
      if (rest.empty()) {
        t.kind = 0;
      } else if (rest.size() == 1) {
        t.kind = rest[0].first == 1 ? 1 : 2;
        t.a = rest[0].second;
      } else if (rest.size() == 2) {
        if (part.quadratic) {
          t.kind = 3;
          t.a = std::min(rest[0].second, rest[1].second);
          t.b = std::max(rest[0].second, rest[1].second);
        } else {
          t.kind = 3;
          if (rest[0].first == 2) std::swap(rest[0], rest[1]);
          if (rest[0].first != 1 || rest[1].first != 2)
            throw std::logic_error("Slicer: partition is not bilinear");
          t.a = rest[1].second;  // U index (row)
          t.b = rest[0].second;  // T index (column)
        }
      } else {
        throw std::logic_error("Slicer: residual degree too high");
      }
      terms_.push_back(std::move(t));
      max_exp_ = std::max(max_exp_, [&] {
        int e = 1;
        for (auto& f : terms_.back().fixed) e = std::max(e, f.second);
        return e;
      }());
    }
    pow_.assign(p, std::vector<std::int64_t>(max_exp_ + 1, 1));
    for (std::int64_t x = 0; x < p; ++x)
      for (int e = 1; e <= max_exp_; ++e) pow_[x][e] = pow_[x][e - 1] * x % p;
  }

  std::uint64_t count() const {
    std::uint64_t c = 1;
    for (std::size_t i = 0; i < part_.fixed.size(); ++i) c *= static_cast<std::uint64_t>(p_);
    return c;
  }

  // Fills d, lin_left (c_T), lin_right (b_U), and the matrix for fixed values s.
  void slice(const std::vector<std::int64_t>& s, std::int64_t& d, std::vector<std::int64_t>& lin_left,
             std::vector<std::int64_t>& lin_right, std::vector<std::vector<std::int64_t>>& mat) const {
    d = 0;
    std::fill(lin_left.begin(), lin_left.end(), 0);
    std::fill(lin_right.begin(), lin_right.end(), 0);
    for (auto& row : mat) std::fill(row.begin(), row.end(), 0);
    for (const auto& t : terms_) {
      std::int64_t w = t.coef;
      for (const auto& [i, e] : t.fixed) w = w * pow_[s[i]][e] % p_;
      if (w == 0) continue;
      switch (t.kind) {
        case 0:
          d = (d + w) % p_;
          break;
        case 1:
          lin_left[t.a] = (lin_left[t.a] + w) % p_;
          break;
        case 2:
          lin_right[t.a] = (lin_right[t.a] + w) % p_;
          break;
        default:
          mat[t.a][t.b] = (mat[t.a][t.b] + w) % p_;
      }
    }
  }

 private:
  struct Term {
    std::int64_t coef = 0;
    std::vector<std::pair<int, int>> fixed;
    int kind = 0;
    int a = 0, b = 0;
  };
  std::int64_t p_;
  VariablePartition part_;
  std::vector<int> pos_;
  std::vector<int> side_;
  std::vector<Term> terms_;
  int max_exp_ = 1;
  std::vector<std::vector<std::int64_t>> pow_;
};

bool next_assignment(std::vector<std::int64_t>& s, std::int64_t p) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (++s[i] < p) return true;
    s[i] = 0;
  }
  return false;
}

double partition_cost(const VariablePartition& part, std::int64_t p, std::size_t nterms) {
  double leaves = std::pow(static_cast<double>(p), static_cast<double>(part.fixed.size()));
  double m = static_cast<double>(part.left.size() + part.right.size());
  double work = part.quadratic ? m * m * m / 3 : static_cast<double>(part.left.size()) *
                                                      static_cast<double>(part.right.size()) *
                                                      static_cast<double>(std::min(part.left.size(), part.right.size()) + 1);
  return leaves * (static_cast<double>(nterms) + work + 1);
}

// All sums at R = 1.  f has coefficients mod p.
void leaf_sum(const ModPoly& f, Context& ctx, Buckets& out, int extra_exponent) {
  const std::int64_t p = f.p;
  auto terms = reduce_mod_p(f);
  std::vector<Monomial> monos;
  for (const auto& t : terms) monos.push_back(t.first);
  auto bil = find_partition(monos, f.nvars, false, ctx.restarts);
  auto quad = find_partition(monos, f.nvars, true, ctx.restarts);
  const VariablePartition* part = nullptr;
  if (bil && quad)
    part = partition_cost(*bil, p, terms.size()) <= partition_cost(*quad, p, terms.size()) ? &*bil : &*quad;
  else
    part = bil ? &*bil : &*quad;
  if (!part) throw std::logic_error("leaf_sum: no partition");
  Slicer slicer(p, f.nvars, terms, *part);
  ctx.charge(slicer.count());

  const int nl = static_cast<int>(part->left.size());
  const int nr = static_cast<int>(part->right.size());
  std::vector<std::int64_t> s(part->fixed.size(), 0);
  std::int64_t d;
  std::vector<std::int64_t> lin_left(nl), lin_right(nr);
  std::vector<std::vector<std::int64_t>> mat(part->quadratic ? nl : nr, std::vector<std::int64_t>(nl));
  std::vector<std::int64_t> g1(p, 0);
  for (std::int64_t y = 0; y < p; ++y) g1[y * y % p] += 1;
  do {
    slicer.slice(s, d, lin_left, lin_right, mat);
    if (part->quadratic) {
      QuadResult q = quadratic_sum(p, nl, d, lin_left, mat);
      if (q.zero) continue;
      if (!q.gauss) {
        out.add(q.exponent + extra_exponent, q.shift, q.sign);
      } else {
        for (std::int64_t j = 0; j < p; ++j)
          if (g1[j] != 0) out.add(q.exponent + extra_exponent, (q.shift + j) % p, q.sign * g1[j]);
      }
    } else {
      std::vector<std::int64_t> rhs(nr);
      for (int i = 0; i < nr; ++i) rhs[i] = md(-lin_right[i], p);
      AffineSolution sol = solve_mod_p(mat, rhs, nl, p);
      if (!sol.ok) continue;
      bool orth = true;
      for (const auto& k : sol.kernel) {
        std::int64_t dot = 0;
        for (int j = 0; j < nl; ++j) dot = (dot + lin_left[j] * k[j]) % p;
        if (dot != 0) {
          orth = false;
          break;
        }
      }
      if (!orth) continue;
      std::int64_t val = d;
      for (int j = 0; j < nl; ++j) val = (val + lin_left[j] * sol.x0[j]) % p;
      out.add(nr + static_cast<int>(sol.kernel.size()) + extra_exponent, val, 1);
    }
  } while (next_assignment(s, p));
}

std::vector<std::vector<std::int64_t>> span_points(const AffineSolution& sol, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> pts{sol.x0};
  for (const auto& k : sol.kernel) {
    std::vector<std::vector<std::int64_t>> next;
    next.reserve(pts.size() * static_cast<std::size_t>(p));
    for (const auto& x : pts)
      for (std::int64_t c = 0; c < p; ++c) {
        std::vector<std::int64_t> y = x;
        for (std::size_t j = 0; j < y.size(); ++j) y[j] = (y[j] + c * k[j]) % p;
        next.push_back(std::move(y));
      }
    pts = std::move(next);
  }
  return pts;
}

// Points y in F_p^n where the gradient of f vanishes mod p.
std::vector<std::vector<std::int64_t>> critical_points(const ModPoly& f, Context& ctx) {
  const std::int64_t p = f.p;
  const int n = f.nvars;
  std::vector<std::pair<Monomial, std::int64_t>> bar;
  for (const auto& [m, c] : f.terms)
    if (c % p != 0) bar.emplace_back(m, c % p);
  std::vector<ModPoly> grad(n);
  for (int j = 0; j < n; ++j) {
    grad[j].p = p;
    grad[j].R = 1;
    grad[j].nvars = n;
  }
  for (const auto& [m, c] : bar) {
    for (std::size_t k = 0; k < m.size(); ++k) {
      auto [v, e] = m[k];
      std::int64_t dc = c * (e % p) % p;
      if (dc == 0) continue;
      Monomial dm = m;
      if (e == 1)
        dm.erase(dm.begin() + static_cast<std::ptrdiff_t>(k));
      else
        dm[k].second = e - 1;
      grad[v].terms.emplace_back(dm, dc);
    }
  }
  for (auto& g : grad) {
    g.normalize();
    if (g.terms.size() == 1 && g.terms[0].first.empty()) return {};
  }
  std::vector<Monomial> monos;
  for (const auto& t : bar) monos.push_back(t.first);
  auto part = find_partition(monos, n, false, ctx.restarts);
  std::vector<std::vector<std::int64_t>> out;
  if (!part) throw std::logic_error("critical_points: no partition");
  Slicer slicer(p, n, bar, *part);
  ctx.charge(slicer.count());
  const int nl = static_cast<int>(part->left.size());
  const int nr = static_cast<int>(part->right.size());
  std::vector<std::int64_t> s(part->fixed.size(), 0);
  std::int64_t d;
  std::vector<std::int64_t> cl(nl), br(nr);
  std::vector<std::vector<std::int64_t>> mat(nr, std::vector<std::int64_t>(nl));
  std::vector<std::int64_t> y(n);
  do {
    slicer.slice(s, d, cl, br, mat);
    std::vector<std::int64_t> rhs_t(nr), rhs_u(nl);
    for (int i = 0; i < nr; ++i) rhs_t[i] = md(-br[i], p);
    for (int j = 0; j < nl; ++j) rhs_u[j] = md(-cl[j], p);
    AffineSolution st = solve_mod_p(mat, rhs_t, nl, p);
    if (!st.ok) continue;
    std::vector<std::vector<std::int64_t>> matT(nl, std::vector<std::int64_t>(nr));
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < nl; ++j) matT[j][i] = mat[i][j];
    AffineSolution su = solve_mod_p(matT, rhs_u, nr, p);
    if (!su.ok) continue;
    ctx.charge(static_cast<std::uint64_t>(std::pow(static_cast<double>(p),
                                                   static_cast<double>(st.kernel.size() + su.kernel.size()))));
    auto tp = span_points(st, p);
    auto up = span_points(su, p);
    for (std::size_t i = 0; i < part->fixed.size(); ++i) y[part->fixed[i]] = s[i];
    for (const auto& t : tp) {
      for (int j = 0; j < nl; ++j) y[part->left[j]] = t[j];
      for (const auto& u : up) {
        for (int i = 0; i < nr; ++i) y[part->right[i]] = u[i];
        bool crit = true;
        for (int v : part->fixed)
          if (grad[v].evaluate(y) != 0) {
            crit = false;
            break;
          }
        if (crit) out.push_back(y);
      }
    }
  } while (next_assignment(s, p));
  return out;
}

// (f(y0 + p s) - f(y0)) / p^2 as a polynomial in s, mod p^(R-2).
ModPoly taylor_shift(const ModPoly& f, const std::vector<std::int64_t>& y0) {
  const std::int64_t p = f.p;
  const std::int64_t mod = f.modulus();
  std::map<Monomial, std::int64_t> acc;
  for (const auto& [m, c] : f.terms) {
    // Expand prod (y_v + p s_v)^e.
    std::vector<std::pair<Monomial, std::int64_t>> parts{{Monomial{}, c % mod}};
    for (const auto& [v, e] : m) {
      std::vector<std::pair<Monomial, std::int64_t>> next;
      std::int64_t binom = 1;
      for (int j = 0; j <= e; ++j) {
        if (j > 0) binom = binom * (e - j + 1) / j;
        std::int64_t coef = binom % mod;
        for (int k = 0; k < e - j; ++k) coef = mulmod(coef, y0[v], mod);
        for (int k = 0; k < j; ++k) coef = mulmod(coef, p, mod);
        if (coef == 0) continue;
        for (const auto& [pm, pc] : parts) {
          Monomial nm = pm;
          if (j > 0) nm.emplace_back(v, j);
          next.emplace_back(std::move(nm), mulmod(pc, coef, mod));
        }
      }
      parts = std::move(next);
    }
    for (auto& [pm, pc] : parts) {
      if (pm.empty()) continue;
      std::int64_t& slot = acc[pm];
      slot = (slot + pc) % mod;
    }
  }
  ModPoly g;
  g.p = p;
  g.R = f.R - 2;
  g.nvars = f.nvars;
  std::int64_t p2 = p * p;
  for (auto& [m, c] : acc) {
    if (c % p2 != 0) throw std::logic_error("taylor_shift: expansion not divisible by p^2");
    g.terms.emplace_back(m, c / p2);
  }
  g.normalize();
  return g;
}

std::vector<Integer> solve(const ModPoly& input, Context& ctx) {
  ModPoly f = input;
  f.normalize();
  const std::int64_t p = f.p;
  const int R = f.R;
  const std::int64_t mod = f.modulus();
  std::vector<Integer> H(mod);
  if (R == 0) {
    H[0] = 1;
    return H;
  }
  // Variables absent from f contribute p^R each.
  std::vector<int> used_index(f.nvars, -1);
  int used = 0;
  for (const auto& [m, c] : f.terms)
    for (const auto& fac : m)
      if (used_index[fac.first] < 0) used_index[fac.first] = 0;
  for (int v = 0; v < f.nvars; ++v)
    if (used_index[v] == 0) used_index[v] = used++;
  const int absent = f.nvars - used;
  if (absent > 0) {
    for (auto& [m, c] : f.terms)
      for (auto& fac : m) fac.first = used_index[fac.first];
    f.nvars = used;
  }
  const Integer absent_factor = ipow(p, static_cast<unsigned>(absent * R));
  const int n = f.nvars;

  std::int64_t c0 = 0;
  int g = R;
  for (const auto& [m, c] : f.terms) {
    if (m.empty())
      c0 = c;
    else
      g = std::min(g, valuation(Integer(static_cast<long>(c)), p));
  }
  if (g >= R) {
    H[c0] = absent_factor * ipow(p, static_cast<unsigned>(n * R));
    return H;
  }
  if (g >= 1) {
    ModPoly h;
    h.p = p;
    h.R = R - g;
    h.nvars = n;
    std::int64_t pg = pow_int(p, g);
    for (const auto& [m, c] : f.terms)
      if (!m.empty()) h.terms.emplace_back(m, c / pg);
    h.normalize();
    auto Hh = solve(h, ctx);
    Integer scale = absent_factor * ipow(p, static_cast<unsigned>(n * g));
    for (std::size_t j = 0; j < Hh.size(); ++j)
      if (Hh[j] != 0) H[(c0 + pg * static_cast<std::int64_t>(j)) % mod] += scale * Hh[j];
    return H;
  }
  if (R == 1) {
    Buckets b(p, p);
    leaf_sum(f, ctx, b, 0);
    H = b.finish();
    if (absent > 0)
      for (auto& h : H) h *= absent_factor;
    return H;
  }
  auto crit = critical_points(f, ctx);
  const Integer scale = absent_factor * ipow(p, static_cast<unsigned>(n));
  const std::int64_t p2 = p * p;
  for (const auto& y0 : crit) {
    std::int64_t v0 = f.evaluate(y0);
    ModPoly sh = taylor_shift(f, y0);
    auto Hs = solve(sh, ctx);
    for (std::size_t j = 0; j < Hs.size(); ++j)
      if (Hs[j] != 0) H[(v0 + p2 * static_cast<std::int64_t>(j)) % mod] += scale * Hs[j];
  }
  return H;
}

}  // namespace

std::vector<Integer> exp_sum(const ModPoly& f, const ExpSumOptions& options, ExpSumStats* stats) {
  Context ctx{options.budget, options.restarts};
  auto H = solve(f, ctx);
  if (stats) stats->leaves += ctx.leaves;
  return H;
}

std::vector<Integer> exp_sum_bruteforce(const ModPoly& f, std::uint64_t budget) {
  const std::int64_t mod = f.modulus();
  double total = std::pow(static_cast<double>(mod), static_cast<double>(f.nvars));
  if (total > static_cast<double>(budget))
    throw BudgetExceeded("brute-force sum of " + std::to_string(total) + " points");
  std::vector<std::int64_t> counts(mod, 0);
  std::vector<std::int64_t> x(f.nvars, 0);
  for (;;) {
    ++counts[f.evaluate(x)];
    int j = 0;
    while (j < f.nvars && ++x[j] == mod) x[j++] = 0;
    if (j == f.nvars) break;
  }
  std::vector<Integer> out(mod);
  for (std::int64_t k = 0; k < mod; ++k) out[k] = Integer(static_cast<long>(counts[k]));
  return out;
}

}  // namespace orbint
