#pragma once

// Tensor products over an algebra, the tensor-square of an extension and the
// objects attached to it: B-central and Casimir elements, the multiplication
// map, and the endomorphism algebra S = End_{B-B}(A) with its R-actions.
//
// M (x)_Y N is the quotient of M (x) N (raw index a * dim N + b) by the
// balancing relations m y (x) n - m (x) y n for the algebra generators y of Y.
// The quotient basis consists of the raw basis tensors in non-pivot columns
// of the reduced relation matrix, so every quotient basis element has a
// single pure-tensor representative (the section).

#include <string>
#include <utility>
#include <vector>

#include "depthtwo/bimodule.hpp"

namespace depthtwo {

template <class F>
struct TensorProduct {
  using Sparse = std::vector<std::pair<std::uint32_t, F>>;

  Bimodule<F> module;  // X-Z bimodule structure on the quotient
  std::size_t left_dim = 0;
  std::size_t right_dim = 0;
  std::vector<std::pair<std::size_t, std::size_t>> section;  // quotient basis -> (a, b)
  std::vector<Sparse> proj;  // raw basis index -> quotient vector

  std::size_t dim() const { return module.dim; }
  std::size_t raw_dim() const { return left_dim * right_dim; }

  void accumulate(Vector<F>& out, std::size_t raw, const F& coeff) const {
    if (coeff.is_zero()) return;
    for (const auto& [q, v] : proj[raw]) out[q] += coeff * v;
  }

  Vector<F> project(std::span<const F> raw) const {
    if (raw.size() != raw_dim()) throw DimensionMismatch("tensor projection: wrong raw length");
    Vector<F> out(dim(), F(0));
    for (std::size_t j = 0; j < raw.size(); ++j) accumulate(out, j, raw[j]);
    return out;
  }

  /// Class of m (x) n.
  Vector<F> pure(std::span<const F> m, std::span<const F> n) const {
    if (m.size() != left_dim || n.size() != right_dim) throw DimensionMismatch("pure tensor: wrong factor length");
    Vector<F> out(dim(), F(0));
    for (std::size_t a = 0; a < left_dim; ++a) {
      if (m[a].is_zero()) continue;
      for (std::size_t b = 0; b < right_dim; ++b)
        if (!n[b].is_zero()) accumulate(out, a * right_dim + b, m[a] * n[b]);
    }
    return out;
  }
  Vector<F> pure(const Vector<F>& m, const Vector<F>& n) const {
    return pure(std::span<const F>(m), std::span<const F>(n));
  }

  Vector<F> pure_basis(std::size_t a, std::size_t b) const {
    Vector<F> out(dim(), F(0));
    accumulate(out, a * right_dim + b, F(1));
    return out;
  }

  Matrix<F> projection_matrix() const {
    Matrix<F> p(dim(), raw_dim());
    for (std::size_t j = 0; j < raw_dim(); ++j)
      for (const auto& [q, v] : proj[j]) p(q, j) = v;
    return p;
  }

  /// Evaluates a balanced bilinear map given on pure basis tensors, via the section.
  template <class Bilinear>
  auto evaluate(std::span<const F> x, Bilinear&& phi) const {
    using R = decltype(phi(std::size_t{}, std::size_t{}));
    std::optional<R> acc;
    for (std::size_t q = 0; q < dim(); ++q) {
      if (x[q].is_zero()) continue;
      auto v = phi(section[q].first, section[q].second);
      for (auto& e : v) e *= x[q];
      if (!acc)
        acc = std::move(v);
      else
        *acc = *acc + v;
    }
    return acc;
  }
};

template <class F>
TensorProduct<F> tensor_over(const Bimodule<F>& m, const Bimodule<F>& n, std::size_t guard = kDefaultDimensionGuard,
                             bool with_actions = true) {
  if (!same_algebra(m.right, n.left)) throw AlgebraError("tensor_over: middle algebras differ");
  const std::size_t dm = m.dim, dn = n.dim, raw = dm * dn;
  if (raw > guard)
    throw DimensionGuard("tensor product " + m.name + " (x) " + n.name + " would have " + std::to_string(raw) +
                         " raw dimensions (guard " + std::to_string(guard) + ")");
  TensorProduct<F> t;
  t.left_dim = dm;
  t.right_dim = dn;
  SparseSystem<F> rel(raw);
  for (auto y : m.right->generators()) {
    const Matrix<F>& my = m.right_ops[y];
    const Matrix<F>& yn = n.left_ops[y];
    for (std::size_t a = 0; a < dm && !rel.saturated(); ++a)
      for (std::size_t b = 0; b < dn && !rel.saturated(); ++b) {
        SparseRow<F> row;
        for (std::size_t c = 0; c < dm; ++c)
          if (!my(c, a).is_zero()) row.emplace_back(static_cast<std::uint32_t>(c * dn + b), my(c, a));
        for (std::size_t d = 0; d < dn; ++d)
          if (!yn(d, b).is_zero()) row.emplace_back(static_cast<std::uint32_t>(a * dn + d), -yn(d, b));
        rel.add_equation(std::move(row));
      }
  }
  const auto red = rel.reduced();
  std::vector<long> quotient_index(raw, -1);
  for (std::size_t j = 0; j < raw; ++j)
    if (!rel.is_pivot(j)) {
      quotient_index[j] = static_cast<long>(t.section.size());
      t.section.emplace_back(j / dn, j % dn);
    }
  t.proj.assign(raw, {});
  for (std::size_t j = 0; j < raw; ++j)
    if (quotient_index[j] >= 0) t.proj[j].emplace_back(static_cast<std::uint32_t>(quotient_index[j]), F(1));
  for (std::size_t k = 0; k < red.pivots.size(); ++k)
    for (const auto& [c, v] : red.rows[k])
      if (c != red.pivots[k]) t.proj[red.pivots[k]].emplace_back(static_cast<std::uint32_t>(quotient_index[c]), -v);

  const std::size_t dq = t.section.size();
  t.module = Bimodule<F>{m.left, n.right, dq, {}, {}, m.name + "(x)" + n.name};
  if (!with_actions) return t;
  for (std::size_t x = 0; x < m.left->dim(); ++x) {
    Matrix<F> op(dq, dq);
    for (std::size_t q = 0; q < dq; ++q) {
      auto [a, b] = t.section[q];
      Vector<F> col(dq, F(0));
      for (std::size_t c = 0; c < dm; ++c) t.accumulate(col, c * dn + b, m.left_ops[x](c, a));
      for (std::size_t r = 0; r < dq; ++r) op(r, q) = col[r];
    }
    t.module.left_ops.push_back(std::move(op));
  }
  for (std::size_t z = 0; z < n.right->dim(); ++z) {
    Matrix<F> op(dq, dq);
    for (std::size_t q = 0; q < dq; ++q) {
      auto [a, b] = t.section[q];
      Vector<F> col(dq, F(0));
      for (std::size_t d = 0; d < dn; ++d) t.accumulate(col, a * dn + d, n.right_ops[z](d, b));
      for (std::size_t r = 0; r < dq; ++r) op(r, q) = col[r];
    }
    t.module.right_ops.push_back(std::move(op));
  }
  return t;
}

/// A (x)_B A with its A-A-bimodule structure and multiplication map.
template <class F>
struct TensorSquare {
  Extension<F> ext;
  TensorProduct<F> tensor;
  Matrix<F> mu;  // dim A x dim Q

  std::size_t dim() const { return tensor.dim(); }
  const Algebra<F>& algebra() const { return *ext.total; }
  const Bimodule<F>& aa() const { return tensor.module; }
  Bimodule<F> ba() const { return restrict_left(tensor.module, ext); }
  Bimodule<F> ab() const { return restrict_right(tensor.module, ext); }
  Bimodule<F> bb() const { return restrict_both(tensor.module, ext, ext); }

  Vector<F> pure(const Vector<F>& x, const Vector<F>& y) const { return tensor.pure(x, y); }
  Vector<F> pure_basis(std::size_t i, std::size_t j) const { return tensor.pure_basis(i, j); }
  Vector<F> one() const { return pure(algebra().unit(), algebra().unit()); }

  /// a . t and t . a for an element a of A, computed through the section so the action matrices are optional.
  Vector<F> left_mul(const Vector<F>& a, const Vector<F>& t) const { return act(a, t, true); }
  Vector<F> right_mul(const Vector<F>& t, const Vector<F>& a) const { return act(a, t, false); }

 private:
  Vector<F> act(const Vector<F>& a, const Vector<F>& t, bool from_left) const {
    const std::size_t d = algebra().dim();
    const auto& c = algebra().constants();
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < d; ++i)
      if (!a[i].is_zero()) support.push_back(i);
    Vector<F> out(dim(), F(0));
    for (std::size_t q = 0; q < dim(); ++q) {
      if (t[q].is_zero()) continue;
      auto [x, y] = tensor.section[q];
      for (std::size_t i : support) {
        // a e_x (left) or e_y a (right)
        const std::size_t base = from_left ? (i * d + x) * d : (y * d + i) * d;
        const F coeff = t[q] * a[i];
        for (std::size_t k = 0; k < d; ++k)
          if (!c[base + k].is_zero()) tensor.accumulate(out, from_left ? k * d + y : x * d + k, coeff * c[base + k]);
      }
    }
    return out;
  }
};

template <class F>
TensorSquare<F> tensor_square(const Extension<F>& ext, std::size_t guard = kDefaultDimensionGuard,
                              bool with_actions = true) {
  const Bimodule<F> reg = regular_bimodule(ext.total);
  TensorSquare<F> ts{ext, tensor_over(restrict_right(reg, ext), restrict_left(reg, ext), guard, with_actions), {}};
  ts.tensor.module.name = ext.total->name() + "(x)_" + ext.base->name() + ext.total->name();
  const std::size_t d = ext.total->dim();
  ts.mu = Matrix<F>(d, ts.dim());
  for (std::size_t q = 0; q < ts.dim(); ++q) {
    auto [a, b] = ts.tensor.section[q];
    auto ab = ext.total->basis_product(a, b);
    for (std::size_t k = 0; k < d; ++k) ts.mu(k, q) = ab[k];
  }
  return ts;
}

/// Elements t of a bimodule with x t = t x for all x in the given list (elements of the acting algebra).
template <class F>
Subspace<F> central_space(const Bimodule<F>& m, const std::vector<Vector<F>>& xs) {
  SparseSystem<F> sys(m.dim);
  for (const auto& x : xs) {
    Matrix<F> d = m.left_action(x) - m.right_action(x);
    for (std::size_t r = 0; r < d.rows() && !sys.saturated(); ++r) {
      SparseRow<F> row;
      for (std::size_t c = 0; c < d.cols(); ++c)
        if (!d(r, c).is_zero()) row.emplace_back(static_cast<std::uint32_t>(c), d(r, c));
      sys.add_equation(std::move(row));
    }
  }
  return sys.solution_space();
}

/// (A (x)_B A)^B, computed through the section.
template <class F>
Subspace<F> central_elements(const TensorSquare<F>& ts) {
  const std::size_t n = ts.dim();
  SparseSystem<F> sys(n);
  for (const auto& b : ts.ext.generator_images()) {
    Matrix<F> d(n, n);
    for (std::size_t q = 0; q < n; ++q) {
      const auto e = unit_vector<F>(n, q);
      auto col = ts.left_mul(b, e);
      axpy(col, F(-1), ts.right_mul(e, b));
      for (std::size_t r = 0; r < n; ++r) d(r, q) = col[r];
    }
    for (std::size_t r = 0; r < n && !sys.saturated(); ++r) {
      typename SparseSystem<F>::Row row;
      for (std::size_t c = 0; c < n; ++c)
        if (!d(r, c).is_zero()) row.emplace_back(static_cast<std::uint32_t>(c), d(r, c));
      sys.add_equation(std::move(row));
    }
  }
  return sys.solution_space();
}

/// Casimir elements (A (x)_B A)^A.
template <class F>
Subspace<F> casimir_elements(const TensorSquare<F>& ts) {
  std::vector<Vector<F>> gens;
  for (auto g : ts.algebra().generators()) gens.push_back(ts.algebra().basis(g));
  return central_space(ts.aa(), gens);
}

/// S = End_{B-B}(A) as an algebra under composition, with its R-R-bimodule structure
/// (r . alpha = lambda_r o alpha, alpha . r = rho_r o alpha).
template <class F>
struct EndAlgebra {
  Extension<F> ext;
  HomSpace<F> space;        // basis of S as matrices on A
  AlgebraPtr<F> algebra;    // composition: (alpha beta)(x) = alpha(beta(x))
  Subalgebra<F> centralizer;  // R inside A
  Bimodule<F> rr;           // S as an R-R-bimodule

  std::size_t dim() const { return space.dim(); }
  Matrix<F> element(std::size_t i) const { return space.map(i); }
  Matrix<F> element(const Vector<F>& c) const { return space.combination(c); }
  std::optional<Vector<F>> coordinates(const Matrix<F>& m) const { return space.coordinates(m); }
};

template <class F>
Bimodule<F> bimodule_over(const Extension<F>& left, const Extension<F>& right) {
  return restrict_both(regular_bimodule(left.total), left, right);
}

template <class F>
EndAlgebra<F> end_bimodule_algebra(const Extension<F>& ext) {
  const Bimodule<F> a_bb = bimodule_over(ext, ext);
  EndAlgebra<F> s{ext, hom_space(a_bb, a_bb), nullptr, centralizer(ext), {}};
  const std::size_t n = s.dim();
  const auto maps = s.space.maps();
  auto coords = [&](const Matrix<F>& m) {
    auto c = s.space.coordinates(m);
    if (!c) throw std::logic_error("End_{B-B}(A) is not closed under the expected operation");
    return *c;
  };
  Vector<F> unit = coords(Matrix<F>::identity(ext.total->dim()));
  Vector<F> constants(n * n * n, F(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto c = coords(maps[i] * maps[j]);
      for (std::size_t k = 0; k < n; ++k) constants[(i * n + j) * n + k] = c[k];
    }
  s.algebra = share(Algebra<F>(n, std::move(constants), std::move(unit), "S(" + ext.name + ")"));
  const auto& r = *s.centralizer.algebra;
  s.rr = Bimodule<F>{s.centralizer.algebra, s.centralizer.algebra, n, {}, {}, "S"};
  for (std::size_t k = 0; k < r.dim(); ++k) {
    const Vector<F> rk = s.centralizer.embed(r.basis(k));
    const Matrix<F> lam = ext.total->left_mult_by(rk);
    const Matrix<F> rho = ext.total->right_mult_by(rk);
    Matrix<F> lop(n, n), rop(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      auto lc = coords(lam * maps[j]);
      auto rc = coords(rho * maps[j]);
      for (std::size_t i = 0; i < n; ++i) {
        lop(i, j) = lc[i];
        rop(i, j) = rc[i];
      }
    }
    s.rr.left_ops.push_back(std::move(lop));
    s.rr.right_ops.push_back(std::move(rop));
  }
  return s;
}

}  // namespace depthtwo
