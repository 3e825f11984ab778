#pragma once

// Builders for concrete extensions (matrix algebras and their diagonal and
// triangular subalgebras, the exterior algebra on two generators, the
// 27-dimensional triangular example, group algebras) and the closure
// constructions: direct products, tensor products and matrix extensions,
// with transport of quasibase certificates along each.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "depthtwo/depth.hpp"

namespace depthtwo {

// ---------------------------------------------------------------- matrix family

/// M_n with basis e_ij at index i * n + j.
template <class F>
Algebra<F> matrix_algebra(std::size_t n) {
  Vector<F> unit(n * n, F(0));
  for (std::size_t i = 0; i < n; ++i) unit[i * n + i] = F(1);
  return Algebra<F>::from_products(
      n * n,
      [n](std::size_t a, std::size_t b) {
        Vector<F> v(n * n, F(0));
        if (a % n == b / n) v[(a / n) * n + b % n] = F(1);
        return v;
      },
      std::move(unit), "M" + std::to_string(n));
}

/// Subalgebra of M_n spanned by the matrix units e_ij with (i,j) in `units` (listed in basis order).
template <class F>
Subalgebra<F> matrix_unit_subalgebra(const Algebra<F>& mn, std::size_t n,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& units,
                                     std::string name) {
  std::vector<Vector<F>> vs;
  for (auto [i, j] : units) vs.push_back(mn.basis(i * n + j));
  const auto d = units.size();
  Matrix<F> inc = Matrix<F>::from_columns(vs, n * n);
  Vector<F> c(d * d * d, F(0));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      if (units[a].second != units[b].first) continue;
      auto target = std::make_pair(units[a].first, units[b].second);
      auto it = std::find(units.begin(), units.end(), target);
      if (it == units.end()) throw AlgebraError("matrix units not closed under multiplication");
      c[(a * d + b) * d + static_cast<std::size_t>(it - units.begin())] = F(1);
    }
  Vector<F> unit(d, F(0));
  for (std::size_t a = 0; a < d; ++a)
    if (units[a].first == units[a].second) unit[a] = F(1);
  return {share(Algebra<F>(d, std::move(c), std::move(unit), std::move(name))), inc, Subspace<F>::span(n * n, vs)};
}

template <class F>
struct MatrixFamily {
  Extension<F> full_over_diagonal;    // M_n | Diag_n
  Extension<F> full_over_triangular;  // M_n | T_n
  Extension<F> triangular_over_diagonal;  // T_n | Diag_n
};

template <class F>
MatrixFamily<F> build_matrix_family(std::size_t n) {
  if (n < 2) throw std::invalid_argument("matrix family needs n >= 2");
  auto m = share(matrix_algebra<F>(n));
  std::vector<std::pair<std::size_t, std::size_t>> diag, tri;
  for (std::size_t i = 0; i < n; ++i) diag.emplace_back(i, i);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) tri.emplace_back(i, j);
  const std::string sn = std::to_string(n);
  auto d = matrix_unit_subalgebra(*m, n, diag, "Diag" + sn);
  auto t = matrix_unit_subalgebra(*m, n, tri, "T" + sn);
  // Diag_n inside T_n
  Matrix<F> dt(tri.size(), diag.size());
  for (std::size_t a = 0; a < diag.size(); ++a)
    dt(static_cast<std::size_t>(std::find(tri.begin(), tri.end(), diag[a]) - tri.begin()), a) = F(1);
  return {{d.algebra, m, d.inclusion, "M" + sn + "|Diag" + sn},
          {t.algebra, m, t.inclusion, "M" + sn + "|T" + sn},
          {d.algebra, t.algebra, dt, "T" + sn + "|Diag" + sn}};
}

/// The ideal of T_n spanned by the first-row units e_1i (basis indices in T_n's ordering).
template <class F>
Subspace<F> first_row_ideal(const Extension<F>& triangular_over_diagonal, std::size_t n) {
  std::vector<Vector<F>> vs;
  for (std::size_t j = 0; j < n; ++j) vs.push_back(triangular_over_diagonal.total->basis(j));
  return Subspace<F>::span(triangular_over_diagonal.total->dim(), vs);
}

// ---------------------------------------------------------------- exterior algebra

template <class F>
struct ExteriorExample {
  Extension<F> over_ground;  // E(W_2) | K 1
  Extension<F> over_center;  // E(W_2) | V, V = K 1 + K e1^e2
};

/// Basis {1, e1, e2, e1^e2}.
template <class F>
ExteriorExample<F> build_exterior_example() {
  if (FieldTraits<F>::characteristic() == 2)
    throw std::invalid_argument("the exterior algebra example needs characteristic different from 2");
  // products of basis monomials: index = bitmask (0:1, 1:e1, 2:e2, 3:e1e2)
  auto product = [](std::size_t a, std::size_t b) {
    Vector<F> v(4, F(0));
    if (a & b) return v;
    // sign: number of transpositions moving e2 of `a` past e1 of `b`
    const bool negative = (a & 2) && (b & 1);
    v[a | b] = negative ? F(-1) : F(1);
    return v;
  };
  auto e = share(Algebra<F>::from_products(4, product, {F(1), F(0), F(0), F(0)}, "E(W2)"));
  Vector<F> vc(8, F(0));
  // V basis {1, w}: 1*1 = 1, 1*w = w*1 = w, w*w = 0
  vc[(0 * 2 + 0) * 2 + 0] = F(1);
  vc[(0 * 2 + 1) * 2 + 1] = F(1);
  vc[(1 * 2 + 0) * 2 + 1] = F(1);
  auto v = share(Algebra<F>(2, std::move(vc), {F(1), F(0)}, "V"));
  Matrix<F> inc(4, 2);
  inc(0, 0) = F(1);
  inc(3, 1) = F(1);
  auto ground = unit_extension(e);
  ground.name = "E(W2)|K";
  return {ground, {v, e, inc, "E(W2)|V"}};
}

// ---------------------------------------------------------------- 27-dimensional example

/// M_3 over the 3-dimensional triangular algebra embedded as
/// e11 -> E11 + E22, e12 -> E23, e22 -> E33 (or the transposed, right-sided version).
template <class F>
Extension<F> build_triangular_example(bool transpose = false) {
  auto m3 = share(matrix_algebra<F>(3));
  auto t2 = matrix_unit_subalgebra(matrix_algebra<F>(2), 2,
                                   transpose ? std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 0}, {1, 1}}
                                             : std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {0, 1}, {1, 1}},
                                   transpose ? "T2t" : "T2");
  Matrix<F> lam(9, 3);
  lam(0 * 3 + 0, 0) = F(1);
  lam(1 * 3 + 1, 0) = F(1);
  if (transpose)
    lam(2 * 3 + 1, 1) = F(1);
  else
    lam(1 * 3 + 2, 1) = F(1);
  lam(2 * 3 + 2, 2) = F(1);
  return {t2.algebra, m3, lam, transpose ? "M3|T2t" : "M3|T2"};
}

/// Rank of b |-> sum_k lambda(b_k) g_k (left) or sum_k g_k lambda(b_k) (right) on B^{#g};
/// equals dim A exactly when the g_k form a free basis of the module.
template <class F>
bool is_free_basis(const Extension<F>& ext, const std::vector<Vector<F>>& g, Side side) {
  const auto& a = *ext.total;
  std::vector<Vector<F>> cols;
  for (const auto& gk : g)
    for (std::size_t b = 0; b < ext.base->dim(); ++b) {
      const auto lb = ext.image_of_basis(b);
      cols.push_back(side == Side::Left ? a.multiply(lb, gk) : a.multiply(gk, lb));
    }
  return cols.size() == a.dim() && rank(Matrix<F>::from_rows(cols, a.dim())) == a.dim();
}

/// The column-separation basis E_1k + E_3k of M_3 over the triangular example (rows for the transpose).
template <class F>
bool triangular_example_free_of_rank_3(const Extension<F>& ext, bool transpose) {
  std::vector<Vector<F>> g;
  for (std::size_t k = 0; k < 3; ++k) {
    Vector<F> v(9, F(0));
    if (transpose) {
      v[k * 3 + 0] = F(1);
      v[k * 3 + 2] = F(1);
    } else {
      v[0 * 3 + k] = F(1);
      v[2 * 3 + k] = F(1);
    }
    g.push_back(std::move(v));
  }
  return is_free_basis(ext, g, transpose ? Side::Right : Side::Left);
}

// ---------------------------------------------------------------- direct products

template <class F>
Algebra<F> product_algebra(const std::vector<AlgebraPtr<F>>& parts) {
  std::size_t d = 0;
  for (const auto& p : parts) d += p->dim();
  Vector<F> c(d * d * d, F(0)), unit;
  std::string name;
  std::size_t off = 0;
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p->dim(); ++i)
      for (std::size_t j = 0; j < p->dim(); ++j)
        for (std::size_t k = 0; k < p->dim(); ++k)
          c[((off + i) * d + off + j) * d + off + k] = p->c(i, j, k);
    unit.insert(unit.end(), p->unit().begin(), p->unit().end());
    name += (name.empty() ? "" : "x") + p->name();
    off += p->dim();
  }
  return Algebra<F>(d, std::move(c), std::move(unit), name);
}

template <class F>
struct ProductExtension {
  Extension<F> ext;
  std::vector<std::size_t> total_offsets;
  std::vector<std::size_t> base_offsets;
};

template <class F>
ProductExtension<F> direct_product(const std::vector<Extension<F>>& exts) {
  if (exts.size() < 2) throw std::invalid_argument("direct product needs at least two factors");
  std::vector<AlgebraPtr<F>> bases, totals;
  ProductExtension<F> p;
  std::size_t ob = 0, ot = 0;
  std::string name;
  for (const auto& e : exts) {
    bases.push_back(e.base);
    totals.push_back(e.total);
    p.base_offsets.push_back(ob);
    p.total_offsets.push_back(ot);
    ob += e.base->dim();
    ot += e.total->dim();
    name += (name.empty() ? "" : " x ") + e.name;
  }
  Matrix<F> map(ot, ob);
  for (std::size_t k = 0; k < exts.size(); ++k)
    for (std::size_t i = 0; i < exts[k].map.rows(); ++i)
      for (std::size_t j = 0; j < exts[k].map.cols(); ++j)
        map(p.total_offsets[k] + i, p.base_offsets[k] + j) = exts[k].map(i, j);
  p.ext = {share(product_algebra(bases)), share(product_algebra(totals)), std::move(map), "(" + name + ")"};
  return p;
}

/// Embeds per-factor certificates into the product tensor square and concatenates them.
template <class F>
QuasibaseCertificate<F> glue_certificates(const ProductExtension<F>& p, const TensorSquare<F>& product_square,
                                          const std::vector<TensorSquare<F>>& factor_squares,
                                          const std::vector<QuasibaseCertificate<F>>& certs) {
  if (certs.empty() || certs.size() != factor_squares.size()) throw std::invalid_argument("glue: certificate count");
  const std::size_t d = p.ext.total->dim();
  QuasibaseCertificate<F> out;
  out.side = certs.front().side;
  for (std::size_t k = 0; k < certs.size(); ++k) {
    if (certs[k].side != out.side) throw std::invalid_argument("glue: certificates of different sides");
    const std::size_t off = p.total_offsets[k];
    const std::size_t dk = factor_squares[k].algebra().dim();
    for (std::size_t i = 0; i < certs[k].count(); ++i) {
      Vector<F> t(product_square.dim(), F(0));
      for (std::size_t q = 0; q < factor_squares[k].dim(); ++q) {
        const F& c = certs[k].t[i][q];
        if (c.is_zero()) continue;
        auto [x, y] = factor_squares[k].tensor.section[q];
        axpy(t, c, product_square.pure_basis(off + x, off + y));
      }
      Matrix<F> beta(d, d);
      for (std::size_t r = 0; r < dk; ++r)
        for (std::size_t s = 0; s < dk; ++s) beta(off + r, off + s) = certs[k].beta[i](r, s);
      out.t.push_back(std::move(t));
      out.beta.push_back(std::move(beta));
    }
  }
  return out;
}

/// Projects a product certificate onto factor k via p_k (x) p_k.
template <class F>
QuasibaseCertificate<F> project_certificate(const ProductExtension<F>& p, const TensorSquare<F>& product_square,
                                            const TensorSquare<F>& factor_square, std::size_t k,
                                            const QuasibaseCertificate<F>& cert) {
  const std::size_t off = p.total_offsets[k];
  const std::size_t dk = factor_square.algebra().dim();
  QuasibaseCertificate<F> out;
  out.side = cert.side;
  for (std::size_t i = 0; i < cert.count(); ++i) {
    Vector<F> t(factor_square.dim(), F(0));
    for (std::size_t q = 0; q < product_square.dim(); ++q) {
      const F& c = cert.t[i][q];
      if (c.is_zero()) continue;
      auto [x, y] = product_square.tensor.section[q];
      if (x < off || x >= off + dk || y < off || y >= off + dk) continue;
      axpy(t, c, factor_square.pure_basis(x - off, y - off));
    }
    Matrix<F> beta(dk, dk);
    for (std::size_t r = 0; r < dk; ++r)
      for (std::size_t s = 0; s < dk; ++s) beta(r, s) = cert.beta[i](off + r, off + s);
    if (is_zero(t) && beta.is_zero()) continue;
    out.t.push_back(std::move(t));
    out.beta.push_back(std::move(beta));
  }
  return out;
}

// ---------------------------------------------------------------- tensor products

/// A1 (x) A2 with lexicographic basis (i, j) -> i * dim A2 + j.
template <class F>
Algebra<F> tensor_algebra(const Algebra<F>& a, const Algebra<F>& b) {
  const std::size_t da = a.dim(), db = b.dim(), d = da * db;
  Vector<F> c(d * d * d, F(0));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < da; ++k)
      for (std::size_t m = 0; m < da; ++m) {
        const F& x = a.c(i, k, m);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < db; ++j)
          for (std::size_t l = 0; l < db; ++l)
            for (std::size_t n = 0; n < db; ++n) {
              const F& y = b.c(j, l, n);
              if (!y.is_zero()) c[((i * db + j) * d + k * db + l) * d + m * db + n] = x * y;
            }
      }
  Vector<F> unit(d, F(0));
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) unit[i * db + j] = a.unit()[i] * b.unit()[j];
  return Algebra<F>(d, std::move(c), std::move(unit), a.name() + "(x)" + b.name());
}

template <class F>
Extension<F> tensor_product(const Extension<F>& e1, const Extension<F>& e2) {
  return {share(tensor_algebra(*e1.base, *e2.base)), share(tensor_algebra(*e1.total, *e2.total)),
          kron(e1.map, e2.map), "(" + e1.name + ")(x)(" + e2.name + ")"};
}

template <class F>
Extension<F> tensor_product(const std::vector<Extension<F>>& exts) {
  if (exts.empty()) throw std::invalid_argument("tensor product of no extensions");
  Extension<F> acc = exts.front();
  for (std::size_t k = 1; k < exts.size(); ++k) acc = tensor_product(acc, exts[k]);
  return acc;
}

/// gamma = gamma1 (x) gamma2 and u = (u1^1 (x) u2^1) (x) (u1^2 (x) u2^2), over all index pairs.
template <class F>
QuasibaseCertificate<F> combine_certificates(const TensorSquare<F>& ts, const TensorSquare<F>& ts1,
                                             const TensorSquare<F>& ts2, const QuasibaseCertificate<F>& c1,
                                             const QuasibaseCertificate<F>& c2) {
  if (c1.side != c2.side) throw std::invalid_argument("combine: certificates of different sides");
  const std::size_t d2 = ts2.algebra().dim();
  QuasibaseCertificate<F> out;
  out.side = c1.side;
  for (std::size_t i = 0; i < c1.count(); ++i)
    for (std::size_t j = 0; j < c2.count(); ++j) {
      Vector<F> t(ts.dim(), F(0));
      for (std::size_t p = 0; p < ts1.dim(); ++p) {
        if (c1.t[i][p].is_zero()) continue;
        auto [x1, y1] = ts1.tensor.section[p];
        for (std::size_t q = 0; q < ts2.dim(); ++q) {
          if (c2.t[j][q].is_zero()) continue;
          auto [x2, y2] = ts2.tensor.section[q];
          axpy(t, c1.t[i][p] * c2.t[j][q], ts.pure_basis(x1 * d2 + x2, y1 * d2 + y2));
        }
      }
      out.t.push_back(std::move(t));
      out.beta.push_back(kron(c1.beta[i], c2.beta[j]));
    }
  return out;
}

/// M_n(A) | M_n(B), realized as (A|B) (x) (M_n|M_n).
template <class F>
Extension<F> matrix_extension(const Extension<F>& ext, std::size_t n) {
  if (n == 0) throw std::invalid_argument("matrix extension needs n >= 1");
  auto mn = share(matrix_algebra<F>(n));
  Extension<F> e = tensor_product(ext, identity_extension(mn));
  e.name = "M" + std::to_string(n) + "(" + ext.name + ")";
  return e;
}

// ---------------------------------------------------------------- group algebras

using Permutation = std::vector<std::size_t>;  // zero-based images

inline Permutation compose_permutations(const Permutation& g, const Permutation& h) {
  // (g h)(x) = g(h(x))
  Permutation r(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) r[x] = g[h[x]];
  return r;
}

/// Cycle notation "(1 2 3)(4 5)" or one-line images "2 3 1" / "[2,3,1]"; points are 1-based.
inline Permutation parse_permutation(const std::string& text, std::size_t degree) {
  std::string s = text;
  Permutation p(degree);
  for (std::size_t i = 0; i < degree; ++i) p[i] = i;
  auto numbers = [](const std::string& chunk) {
    std::vector<std::size_t> out;
    std::string cleaned = chunk;
    for (auto& ch : cleaned)
      if (ch == ',' || ch == '[' || ch == ']') ch = ' ';
    std::istringstream is(cleaned);
    long v;
    while (is >> v) {
      if (v < 1) throw ParseError("permutation points are 1-based positive integers");
      out.push_back(static_cast<std::size_t>(v - 1));
    }
    if (!is.eof()) throw ParseError("malformed permutation '" + chunk + "'");
    return out;
  };
  const auto first = s.find_first_not_of(' ');
  if (first == std::string::npos || s == "()" ) return p;
  if (s[first] == '(') {
    std::size_t pos = first;
    while (pos < s.size()) {
      const auto open = s.find('(', pos);
      if (open == std::string::npos) break;
      const auto close = s.find(')', open);
      if (close == std::string::npos) throw ParseError("unbalanced parenthesis in '" + text + "'");
      auto cyc = numbers(s.substr(open + 1, close - open - 1));
      for (auto x : cyc)
        if (x >= degree) throw ParseError("point out of range in '" + text + "'");
      // cycles compose right to left
      Permutation c(degree);
      for (std::size_t i = 0; i < degree; ++i) c[i] = i;
      for (std::size_t k = 0; k < cyc.size(); ++k) c[cyc[k]] = cyc[(k + 1) % cyc.size()];
      p = compose_permutations(p, c);
      pos = close + 1;
    }
    return p;
  }
  auto imgs = numbers(s);
  if (imgs.size() != degree) throw ParseError("one-line permutation '" + text + "' has wrong length");
  std::vector<bool> seen(degree, false);
  for (auto x : imgs) {
    if (x >= degree || seen[x]) throw ParseError("'" + text + "' is not a permutation");
    seen[x] = true;
  }
  return imgs;
}

/// Largest degree mentioned in a permutation string.
inline std::size_t permutation_degree(const std::string& text) {
  std::size_t best = 0;
  long v = 0;
  bool in = false;
  for (char ch : text + " ") {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      v = v * 10 + (ch - '0');
      in = true;
    } else if (in) {
      best = std::max(best, static_cast<std::size_t>(v));
      v = 0;
      in = false;
    }
  }
  return best;
}

inline constexpr std::size_t kGroupElementCap = 512;

/// Multiplication table of a finite group: table[i][j] = index of g_i g_j; element 0 is the identity.
struct FiniteGroup {
  std::vector<std::vector<std::size_t>> table;
  std::vector<std::string> labels;
  std::size_t order() const { return table.size(); }
};

inline std::string permutation_label(const Permutation& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i] + 1);
  return s + "]";
}

/// Closure of the generators; elements sorted by one-line images (identity first).
inline std::vector<Permutation> permutation_closure(const std::vector<Permutation>& gens, std::size_t degree) {
  Permutation id(degree);
  for (std::size_t i = 0; i < degree; ++i) id[i] = i;
  std::set<Permutation> seen{id};
  std::vector<Permutation> queue{id};
  while (!queue.empty()) {
    Permutation g = queue.back();
    queue.pop_back();
    for (const auto& h : gens) {
      auto gh = compose_permutations(g, h);
      if (seen.insert(gh).second) {
        if (seen.size() > kGroupElementCap)
          throw std::invalid_argument("group has more than " + std::to_string(kGroupElementCap) + " elements");
        queue.push_back(std::move(gh));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

inline FiniteGroup group_from_permutations(const std::vector<Permutation>& elements) {
  FiniteGroup g;
  std::map<Permutation, std::size_t> index;
  for (std::size_t i = 0; i < elements.size(); ++i) index[elements[i]] = i;
  for (const auto& a : elements) {
    std::vector<std::size_t> row;
    for (const auto& b : elements) row.push_back(index.at(compose_permutations(a, b)));
    g.table.push_back(std::move(row));
    g.labels.push_back(permutation_label(a));
  }
  return g;
}

inline void validate_cayley_table(const std::vector<std::vector<std::size_t>>& t) {
  const std::size_t n = t.size();
  if (n == 0) throw std::invalid_argument("empty Cayley table");
  for (const auto& row : t) {
    if (row.size() != n) throw std::invalid_argument("Cayley table is not square");
    for (auto v : row)
      if (v >= n) throw std::invalid_argument("Cayley table entry out of range");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (t[0][i] != i || t[i][0] != i) throw std::invalid_argument("element 0 of a Cayley table must be the identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]]) throw std::invalid_argument("Cayley table is not associative");
  for (std::size_t a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (std::size_t b = 0; b < n && !has_inverse; ++b) has_inverse = t[a][b] == 0;
    if (!has_inverse) throw std::invalid_argument("Cayley table element without inverse");
  }
}

template <class F>
Algebra<F> group_algebra(const FiniteGroup& g, std::string name) {
  const std::size_t n = g.order();
  return Algebra<F>::from_products(
      n,
      [&](std::size_t a, std::size_t b) {
        Vector<F> v(n, F(0));
        v[g.table[a][b]] = F(1);
        return v;
      },
      unit_vector<F>(n, 0), std::move(name));
}

/// kH -> kG for a subset H of G (indices into G's table); H must be a subgroup containing the identity.
template <class F>
Extension<F> group_algebra_extension(const FiniteGroup& g, std::vector<std::size_t> h, const std::string& gname,
                                     const std::string& hname) {
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  if (h.empty() || h.front() != 0) throw std::invalid_argument("subgroup must contain the identity");
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < h.size(); ++i) pos[h[i]] = i;
  for (auto a : h)
    for (auto b : h)
      if (!pos.count(g.table[a][b])) throw std::invalid_argument("H is not closed under the group operation");
  FiniteGroup sub;
  for (auto a : h) {
    std::vector<std::size_t> row;
    for (auto b : h) row.push_back(pos.at(g.table[a][b]));
    sub.table.push_back(std::move(row));
    sub.labels.push_back(g.labels.empty() ? std::to_string(a) : g.labels[a]);
  }
  auto kg = share(group_algebra<F>(g, "k" + gname));
  auto kh = share(group_algebra<F>(sub, "k" + hname));
  Matrix<F> map(g.order(), h.size());
  for (std::size_t i = 0; i < h.size(); ++i) map(h[i], i) = F(1);
  return {kh, kg, std::move(map), "k" + gname + "|k" + hname};
}

struct GroupPair {
  FiniteGroup group;
  std::vector<std::size_t> subgroup;  // indices into group
};

/// G generated by g_gens, H generated by h_gens (all in cycle or one-line notation).
inline GroupPair group_pair_from_generators(const std::vector<std::string>& g_gens,
                                            const std::vector<std::string>& h_gens) {
  std::size_t degree = 1;
  for (const auto& s : g_gens) degree = std::max(degree, permutation_degree(s));
  for (const auto& s : h_gens) degree = std::max(degree, permutation_degree(s));
  std::vector<Permutation> gp, hp;
  for (const auto& s : g_gens) gp.push_back(parse_permutation(s, degree));
  for (const auto& s : h_gens) hp.push_back(parse_permutation(s, degree));
  const auto elements = permutation_closure(gp, degree);
  const auto h_elements = permutation_closure(hp, degree);
  GroupPair out{group_from_permutations(elements), {}};
  for (const auto& h : h_elements) {
    auto it = std::find(elements.begin(), elements.end(), h);
    if (it == elements.end()) throw std::invalid_argument("subgroup element " + permutation_label(h) + " is not in G");
    out.subgroup.push_back(static_cast<std::size_t>(it - elements.begin()));
  }
  std::sort(out.subgroup.begin(), out.subgroup.end());
  return out;
}

/// Augmentation ideal span{g - 1} of kG and the ideal of kG generated by {h - 1 : h in H}.
template <class F>
std::vector<std::pair<std::string, Subspace<F>>> augmentation_ideals(const Extension<F>& group_ext) {
  const auto& kg = *group_ext.total;
  std::vector<Vector<F>> aug;
  for (std::size_t g = 1; g < kg.dim(); ++g) aug.push_back(kg.basis(g) - kg.basis(0));
  std::vector<Vector<F>> hgens;
  for (std::size_t h = 1; h < group_ext.base->dim(); ++h) hgens.push_back(group_ext.image_of_basis(h) - kg.unit());
  return {{"augmentation", Subspace<F>::span(kg.dim(), aug)},
          {"generated-by-subgroup-augmentation", ideal_generated(kg, hgens)}};
}

// ---------------------------------------------------------------- D2 after H-separable

/// From 1 (x)_B 1 = sum_k r_k e_k for C|B and a quasibase of A|C, a quasibase of A|B:
/// right: gamma' = lambda_{r_k} gamma_j, u' = Phi_k(u_j); left: beta' = rho_{r_k} beta_i, t' = Phi_k(t_i),
/// where Phi_k(a (x)_C a') = a e_k^1 (x)_B e_k^2 a'.
template <class F>
QuasibaseCertificate<F> d2_after_hseparable(const TensorSquare<F>& ts_cb, const HSeparabilityCertificate<F>& hsep,
                                            const TensorSquare<F>& ts_ac, const QuasibaseCertificate<F>& cert,
                                            const TensorSquare<F>& ts_ab) {
  const Extension<F>& cb = ts_cb.ext;
  const Extension<F>& ac = ts_ac.ext;
  if (!same_algebra(cb.total, ac.base)) throw AlgebraError("tower mismatch: C differs between the two extensions");
  if (!same_algebra(ts_ab.ext.total, ac.total) || !same_algebra(ts_ab.ext.base, cb.base) ||
      ts_ab.ext.map != ac.map * cb.map)
    throw AlgebraError("tower mismatch: target tensor square is not A (x)_B A for the composite");
  const auto& a = *ac.total;
  QuasibaseCertificate<F> out;
  out.side = cert.side;
  for (std::size_t k = 0; k < hsep.r.size(); ++k) {
    const Vector<F> rk = ac.image(hsep.r[k]);
    // e_k terms embedded in A
    std::vector<std::tuple<F, Vector<F>, Vector<F>>> ek;
    for (std::size_t q = 0; q < ts_cb.dim(); ++q) {
      if (hsep.e[k][q].is_zero()) continue;
      auto [x, y] = ts_cb.tensor.section[q];
      ek.emplace_back(hsep.e[k][q], ac.image_of_basis(x), ac.image_of_basis(y));
    }
    for (std::size_t j = 0; j < cert.count(); ++j) {
      Vector<F> t(ts_ab.dim(), F(0));
      for (std::size_t q = 0; q < ts_ac.dim(); ++q) {
        const F& c = cert.t[j][q];
        if (c.is_zero()) continue;
        auto [x, y] = ts_ac.tensor.section[q];
        for (const auto& [ce, e1, e2] : ek)
          axpy(t, c * ce, ts_ab.pure(a.multiply(a.basis(x), e1), a.multiply(e2, a.basis(y))));
      }
      out.t.push_back(std::move(t));
      out.beta.push_back(cert.side == Side::Right ? a.left_mult_by(rk) * cert.beta[j]
                                                  : a.right_mult_by(rk) * cert.beta[j]);
    }
  }
  return out;
}

// ---------------------------------------------------------------- catalog

template <class F>
struct CatalogEntry {
  std::string name;
  Extension<F> ext;
  std::map<std::string, bool> expected;  // property -> value known from the literature
};

/// Small extensions with known properties; used by the residual and closure suites.
template <class F>
std::vector<CatalogEntry<F>> catalog() {
  std::vector<CatalogEntry<F>> out;
  for (std::size_t n : {2u, 3u}) {
    auto fam = build_matrix_family<F>(n);
    out.push_back({fam.full_over_diagonal.name, fam.full_over_diagonal, {{"hsep", true}, {"d2", true}}});
    out.push_back({fam.full_over_triangular.name, fam.full_over_triangular, {{"hsep", true}, {"d2", true}}});
    out.push_back({fam.triangular_over_diagonal.name, fam.triangular_over_diagonal,
                   {{"left-d2", false}, {"right-d2", false}}});
  }
  auto ex = build_exterior_example<F>();
  out.push_back({ex.over_ground.name, ex.over_ground, {{"d2", true}}});
  out.push_back({ex.over_center.name, ex.over_center, {{"d2", false}}});
  auto e32 = build_triangular_example<F>(false);
  out.push_back({e32.name, e32, {{"hsep", true}, {"split", false}}});
  auto e32t = build_triangular_example<F>(true);
  out.push_back({e32t.name, e32t, {{"hsep", true}, {"split", false}}});
  auto m2 = share(matrix_algebra<F>(2));
  out.push_back({"M2|M2", identity_extension(m2), {{"hsep", true}, {"d2", true}}});
  auto t2 = build_matrix_family<F>(2).triangular_over_diagonal.total;
  out.push_back({"T2|K", unit_extension(t2), {{"d2", true}}});
  out.push_back({"Diag2|K", unit_extension(build_matrix_family<F>(2).triangular_over_diagonal.base), {{"d2", true}}});
  return out;
}

}  // namespace depthtwo
