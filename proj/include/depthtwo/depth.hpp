#pragma once

// Depth-two style decision procedures for an algebra extension B -> A, each
// returning either a verified certificate or an auditable refusal.
//
// Notation: R = V_A(B), S = End_{B-B}(A), Q = A (x)_B A,
// W = V_A(V_A(B)).  Left D2 quasibases (t_i, beta_i) satisfy
//   sum_i t_i beta_i(x) y = x (x) y,
// right D2 quasibases (u_j, gamma_j) satisfy
//   sum_j x gamma_j(y) u_j = x (x) y.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "depthtwo/tensor.hpp"

namespace depthtwo {

enum class Side { Left, Right };

inline const char* side_name(Side s) { return s == Side::Left ? "left" : "right"; }

// ---------------------------------------------------------------- separability

template <class F>
struct SeparabilityResult {
  std::optional<Vector<F>> element;  // in A (x)_B A
  std::size_t casimir_dim = 0;
  std::size_t mu_image_rank = 0;  // rank of mu on Casimir elements
};

template <class F>
bool verify_separability_element(const TensorSquare<F>& ts, const Vector<F>& e) {
  if (e.size() != ts.dim()) return false;
  if (ts.mu.apply(e) != ts.algebra().unit()) return false;
  for (std::size_t a = 0; a < ts.algebra().dim(); ++a) {
    const auto x = ts.algebra().basis(a);
    if (ts.left_mul(x, e) != ts.right_mul(e, x)) return false;
  }
  return true;
}

/// Solves mu(e) = 1 over the Casimir elements; free coefficients are set to zero.
template <class F>
SeparabilityResult<F> separability_element(const TensorSquare<F>& ts) {
  SeparabilityResult<F> r;
  const auto cas = casimir_elements(ts);
  r.casimir_dim = cas.dim();
  std::vector<Vector<F>> images;
  for (std::size_t k = 0; k < cas.dim(); ++k) images.push_back(ts.mu.apply(cas.basis_vector(k)));
  if (!images.empty()) r.mu_image_rank = rank(Matrix<F>::from_rows(images, ts.algebra().dim()));
  auto c = solve_membership(images, ts.algebra().unit());
  if (!c || images.empty()) return r;
  r.element = cas.element(*c);
  if (!verify_separability_element(ts, *r.element))
    throw std::logic_error("separability element fails verification");
  return r;
}

// ---------------------------------------------------------------- H-separability

/// 1 (x) 1 = sum_k r_k e_k with r_k in R and e_k Casimir.
template <class F>
struct HSeparabilityCertificate {
  std::vector<Vector<F>> r;  // elements of A
  std::vector<Vector<F>> e;  // elements of A (x)_B A
};

template <class F>
struct HSeparabilityResult {
  std::optional<HSeparabilityCertificate<F>> certificate;
  std::size_t centralizer_dim = 0;
  std::size_t casimir_dim = 0;
  std::size_t span_dim = 0;  // dim of span{r e}
};

template <class F>
bool verify_h_separability(const TensorSquare<F>& ts, const HSeparabilityCertificate<F>& c) {
  if (c.r.size() != c.e.size()) return false;
  const auto gens = ts.ext.generator_images();
  Vector<F> sum(ts.dim(), F(0));
  for (std::size_t k = 0; k < c.r.size(); ++k) {
    for (const auto& b : gens)
      if (ts.algebra().multiply(b, c.r[k]) != ts.algebra().multiply(c.r[k], b)) return false;
    for (auto g : ts.algebra().generators()) {
      const auto a = ts.algebra().basis(g);
      if (ts.left_mul(a, c.e[k]) != ts.right_mul(c.e[k], a)) return false;
    }
    axpy(sum, F(1), ts.left_mul(c.r[k], c.e[k]));
  }
  return sum == ts.one();
}

template <class F>
HSeparabilityResult<F> check_h_separable(const TensorSquare<F>& ts) {
  HSeparabilityResult<F> res;
  const auto rsub = centralizer(ts.ext);
  const auto cas = casimir_elements(ts);
  res.centralizer_dim = rsub.space.dim();
  res.casimir_dim = cas.dim();
  std::vector<Vector<F>> products;
  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t i = 0; i < rsub.space.dim(); ++i) {
    const auto lam = ts.aa().left_action(rsub.space.basis_vector(i));
    for (std::size_t k = 0; k < cas.dim(); ++k) {
      products.push_back(lam.apply(cas.basis_vector(k)));
      index.emplace_back(i, k);
    }
  }
  if (!products.empty()) res.span_dim = rank(Matrix<F>::from_rows(products, ts.dim()));
  auto c = products.empty() ? std::optional<Vector<F>>{} : solve_membership(products, ts.one());
  if (!c) return res;
  // Group by Casimir basis element: 1 (x) 1 = sum_k (sum_i c_ik r_i) e_k.
  std::map<std::size_t, Vector<F>> grouped;
  for (std::size_t t = 0; t < index.size(); ++t) {
    if ((*c)[t].is_zero()) continue;
    auto [i, k] = index[t];
    auto it = grouped.try_emplace(k, Vector<F>(ts.algebra().dim(), F(0))).first;
    axpy(it->second, (*c)[t], rsub.space.basis_vector(i));
  }
  HSeparabilityCertificate<F> cert;
  for (auto& [k, r] : grouped) {
    cert.r.push_back(std::move(r));
    cert.e.push_back(cas.basis_vector(k));
  }
  if (!verify_h_separability(ts, cert)) throw std::logic_error("H-separability certificate fails verification");
  res.certificate = std::move(cert);
  return res;
}

// ---------------------------------------------------------------- depth two

template <class F>
struct QuasibaseCertificate {
  Side side = Side::Left;
  std::vector<Vector<F>> t;     // t_i (left) or u_j (right), in A (x)_B A
  std::vector<Matrix<F>> beta;  // beta_i (left) or gamma_j (right), in End_{B-B}(A)
  std::size_t count() const { return t.size(); }
};

/// Decides the quasibase condition as one membership problem without action matrices on A (x)_B A.
/// Left: x (x) 1 lies in the span of x -> t beta(x), t in (A (x)_B A)^B, beta in End_{B-B}(A).
/// Right: 1 (x) y lies in the span of y -> gamma(y) u.
template <class F>
bool quasibase_exists(const TensorSquare<F>& ts, Side side) {
  using Row = typename SparseSystem<F>::Row;
  const auto& a = ts.algebra();
  const std::size_t d = a.dim(), n = ts.dim();
  const bool left = side == Side::Left;
  const auto t = central_elements(ts).basis_vectors();
  const Bimodule<F> a_bb = bimodule_over(ts.ext, ts.ext);
  const auto betas = hom_space(a_bb, a_bb).maps();
  auto sparse = [](const Vector<F>& v) {
    Row r;
    for (std::size_t q = 0; q < v.size(); ++q)
      if (!v[q].is_zero()) r.emplace_back(static_cast<std::uint32_t>(q), v[q]);
    return r;
  };
  // mult[k][c] = t_k e_c (left) or e_c t_k (right)
  std::vector<std::vector<Row>> mult(t.size(), std::vector<Row>(d));
  for (std::size_t k = 0; k < t.size(); ++k)
    for (std::size_t c = 0; c < d; ++c)
      mult[k][c] = sparse(left ? ts.right_mul(t[k], a.basis(c)) : ts.left_mul(a.basis(c), t[k]));
  SparseSystem<F> span(d * n);
  for (std::size_t k = 0; k < t.size() && !span.saturated(); ++k)
    for (const auto& beta : betas) {
      Row col;
      for (std::size_t x = 0; x < d; ++x)
        for (std::size_t c = 0; c < d; ++c) {
          if (beta(c, x).is_zero()) continue;
          for (const auto& [q, v] : mult[k][c]) col.emplace_back(static_cast<std::uint32_t>(x * n + q), beta(c, x) * v);
        }
      span.add_equation(std::move(col));
    }
  const std::size_t r = span.rank();
  Row target;
  for (std::size_t x = 0; x < d; ++x) {
    const auto p = left ? ts.pure(a.basis(x), a.unit()) : ts.pure(a.unit(), a.basis(x));
    for (std::size_t q = 0; q < n; ++q)
      if (!p[q].is_zero()) target.emplace_back(static_cast<std::uint32_t>(x * n + q), p[q]);
  }
  span.add_equation(std::move(target));
  return span.rank() == r;
}

template <class F>
struct D2Result {
  Side side = Side::Left;
  std::optional<QuasibaseCertificate<F>> certificate;
  SummandWitness<F> witness;
  bool is_d2() const { return certificate.has_value(); }
};

/// Left and right multiplications by the images of the generators of B.
template <class F>
std::vector<Matrix<F>> bb_operators(const Extension<F>& ext) {
  std::vector<Matrix<F>> ops;
  for (const auto& b : ext.generator_images()) {
    ops.push_back(ext.total->left_mult_by(b));
    ops.push_back(ext.total->right_mult_by(b));
  }
  return ops;
}

template <class F>
bool is_bb_linear(const std::vector<Matrix<F>>& bb_ops, const Matrix<F>& alpha) {
  for (const auto& op : bb_ops)
    if (alpha * op != op * alpha) return false;
  return true;
}

/// Checks centrality of the t's, B-B-linearity of the betas and the quasibase identity on all basis pairs.
/// With all_pairs false the identity is checked on x (x) 1 (left) or 1 (x) y (right) only; the other
/// variable enters A-linearly on both sides, so the two conditions agree.
template <class F>
ValidationReport verify_quasibase(const TensorSquare<F>& ts, const QuasibaseCertificate<F>& c, bool all_pairs = true) {
  const auto& a = ts.algebra();
  const std::size_t d = a.dim();
  if (c.t.size() != c.beta.size()) return {false, "t and beta lists differ in length"};
  const auto bb_ops = bb_operators(ts.ext);
  for (std::size_t i = 0; i < c.count(); ++i) {
    if (c.t[i].size() != ts.dim()) return {false, "element " + std::to_string(i) + " has wrong length"};
    if (c.beta[i].rows() != d || c.beta[i].cols() != d)
      return {false, "endomorphism " + std::to_string(i) + " has wrong shape"};
    for (const auto& b : ts.ext.generator_images())
      if (ts.left_mul(b, c.t[i]) != ts.right_mul(c.t[i], b))
        return {false, "element " + std::to_string(i) + " is not B-central"};
    if (!is_bb_linear(bb_ops, c.beta[i]))
      return {false, "endomorphism " + std::to_string(i) + " is not B-B-linear"};
  }
  const bool left = c.side == Side::Left;
  const bool have_ops = !ts.aa().left_ops.empty();
  // act[i]: A -> Q, a -> t_i a (left) or a -> a u_i (right); only tabulated when the action matrices exist
  std::vector<Matrix<F>> act;
  if (have_ops)
    for (std::size_t i = 0; i < c.count(); ++i) {
      Matrix<F> m(ts.dim(), d);
      for (std::size_t k = 0; k < d; ++k) {
        const auto& op = left ? ts.aa().right_ops[k] : ts.aa().left_ops[k];
        const auto col = op.apply(c.t[i]);
        for (std::size_t r = 0; r < ts.dim(); ++r) m(r, k) = col[r];
      }
      act.push_back(std::move(m));
    }
  const std::size_t unit_index = d;  // marks the unit in place of a basis element
  std::vector<std::size_t> free_range;
  if (all_pairs)
    for (std::size_t k = 0; k < d; ++k) free_range.push_back(k);
  else
    free_range.push_back(unit_index);
  auto element = [&](std::size_t k) { return k == unit_index ? a.unit() : a.basis(k); };
  for (std::size_t fixed = 0; fixed < d; ++fixed)
    for (std::size_t other : free_range) {
      // left: x = fixed, y = other, sum beta_i(x) y ;  right: y = fixed, x = other, sum x gamma_i(y)
      Vector<F> sum(ts.dim(), F(0));
      for (std::size_t i = 0; i < c.count(); ++i) {
        const Vector<F> coeff = left ? a.multiply(c.beta[i].column(fixed), element(other))
                                     : a.multiply(element(other), c.beta[i].column(fixed));
        axpy(sum, F(1), have_ops ? act[i].apply(coeff) : (left ? ts.right_mul(c.t[i], coeff) : ts.left_mul(coeff, c.t[i])));
      }
      const Vector<F> expected = left ? ts.pure(a.basis(fixed), element(other)) : ts.pure(element(other), a.basis(fixed));
      if (sum != expected) {
        const std::string o = other == unit_index ? "1" : std::to_string(other);
        const std::string f = std::to_string(fixed);
        return {false, "quasibase identity fails at basis pair (" + (left ? f + "," + o : o + "," + f) + ")"};
      }
    }
  return {};
}

template <class F>
D2Result<F> check_d2(const TensorSquare<F>& ts, Side side) {
  const Extension<F>& ext = ts.ext;
  const Extension<F> id = identity_extension(ext.total);
  D2Result<F> res;
  res.side = side;
  const Bimodule<F> m = side == Side::Left ? ts.ba() : ts.ab();
  const Bimodule<F> p = side == Side::Left ? bimodule_over(ext, id) : bimodule_over(id, ext);
  auto sr = add_membership(m, p);
  res.witness = sr.witness;
  if (!sr.certificate) return res;
  const auto& a = *ext.total;
  QuasibaseCertificate<F> cert;
  cert.side = side;
  for (std::size_t i = 0; i < sr.certificate->count(); ++i) {
    const Matrix<F>& f = sr.certificate->f[i];
    const Matrix<F>& g = sr.certificate->g[i];
    cert.t.push_back(g.apply(a.unit()));
    // left: beta(x) = f(x (x) 1) ;  right: gamma(y) = f(1 (x) y)
    Matrix<F> beta(a.dim(), a.dim());
    for (std::size_t x = 0; x < a.dim(); ++x) {
      const auto tensor = side == Side::Left ? ts.pure(a.basis(x), a.unit()) : ts.pure(a.unit(), a.basis(x));
      const auto col = f.apply(tensor);
      for (std::size_t r = 0; r < a.dim(); ++r) beta(r, x) = col[r];
    }
    cert.beta.push_back(std::move(beta));
  }
  if (auto v = verify_quasibase(ts, cert); !v)
    throw std::logic_error("extracted quasibase fails verification: " + v.message);
  res.certificate = std::move(cert);
  return res;
}

/// mu((alpha (x) id) t) for t in A (x)_B A, alpha B-B-linear.
template <class F>
Vector<F> evaluate_left_factor(const TensorSquare<F>& ts, const Matrix<F>& alpha, const Vector<F>& t) {
  const auto& a = ts.algebra();
  Vector<F> out(a.dim(), F(0));
  for (std::size_t q = 0; q < ts.dim(); ++q) {
    if (t[q].is_zero()) continue;
    auto [x, y] = ts.tensor.section[q];
    axpy(out, t[q], a.right_mult(y).apply(alpha.column(x)));
  }
  return out;
}

/// mu((id (x) alpha) t).
template <class F>
Vector<F> evaluate_right_factor(const TensorSquare<F>& ts, const Matrix<F>& alpha, const Vector<F>& t) {
  const auto& a = ts.algebra();
  Vector<F> out(a.dim(), F(0));
  for (std::size_t q = 0; q < ts.dim(); ++q) {
    if (t[q].is_zero()) continue;
    auto [x, y] = ts.tensor.section[q];
    axpy(out, t[q], a.left_mult(x).apply(alpha.column(y)));
  }
  return out;
}

template <class F>
struct DualBasesReport {
  bool ok = false;
  std::size_t checked = 0;
  std::string message;
};

/// Left certificate: T_i(alpha) = alpha(t_i^1) t_i^2 in R and alpha = sum_i T_i(alpha) beta_i.
/// Right certificate: U_j(alpha) = u_j^1 alpha(u_j^2) in R and alpha = sum_j gamma_j(-) U_j(alpha).
template <class F>
DualBasesReport<F> verify_dual_bases(const TensorSquare<F>& ts, const EndAlgebra<F>& s,
                                     const QuasibaseCertificate<F>& c) {
  DualBasesReport<F> rep;
  const auto& a = ts.algebra();
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const Matrix<F> alpha = s.element(k);
    Matrix<F> sum(a.dim(), a.dim());
    for (std::size_t i = 0; i < c.count(); ++i) {
      const Vector<F> r = c.side == Side::Left ? evaluate_left_factor(ts, alpha, c.t[i])
                                               : evaluate_right_factor(ts, alpha, c.t[i]);
      if (!s.centralizer.space.contains(r)) {
        rep.message = "coefficient for basis endomorphism " + std::to_string(k) + " is not in the centralizer";
        return rep;
      }
      sum += c.side == Side::Left ? a.left_mult_by(r) * c.beta[i] : a.right_mult_by(r) * c.beta[i];
    }
    ++rep.checked;
    if (sum != alpha) {
      rep.message = "dual bases identity fails on basis endomorphism " + std::to_string(k);
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

// ---------------------------------------------------------------- weak depth two

/// Psi: A (x)_B A -> Hom(_R S, _R A), Psi(x (x) y)(beta) = beta(x) y.
template <class F>
struct PsiData {
  HomSpace<F> hom;           // G: S -> A as dim A x dim S matrices (S in its basis coordinates)
  Bimodule<F> hom_bimodule;  // B-A: (b G a)(beta) = b G(beta) a
  Matrix<F> psi;             // dim H x dim Q
};

template <class F>
Representation<F> left_r_module_of_s(const EndAlgebra<F>& s) {
  Representation<F> rep{s.dim(), {}, {{'L', s.centralizer.algebra}}};
  for (auto g : s.centralizer.algebra->generators()) rep.ops.push_back(s.rr.left_ops[g]);
  return rep;
}

template <class F>
Representation<F> regular_left_module(const AlgebraPtr<F>& r) {
  Representation<F> rep{r->dim(), {}, {{'L', r}}};
  for (auto g : r->generators()) rep.ops.push_back(r->left_mult(g));
  return rep;
}

template <class F>
Representation<F> regular_right_module(const AlgebraPtr<F>& r) {
  Representation<F> rep{r->dim(), {}, {{'R', r}}};
  for (auto g : r->generators()) rep.ops.push_back(r->right_mult(g));
  return rep;
}

template <class F>
PsiData<F> compute_psi(const TensorSquare<F>& ts, const EndAlgebra<F>& s) {
  const auto& a = ts.algebra();
  const auto& rsub = s.centralizer;
  Representation<F> a_as_r{a.dim(), {}, {{'L', rsub.algebra}}};
  for (auto g : rsub.algebra->generators()) a_as_r.ops.push_back(a.left_mult_by(rsub.embed(rsub.algebra->basis(g))));
  PsiData<F> pd{hom_space(left_r_module_of_s(s), a_as_r), {}, {}};
  const std::size_t h = pd.hom.dim();
  auto coords = [&](const Matrix<F>& g) {
    auto c = pd.hom.coordinates(g);
    if (!c) throw std::logic_error("Hom(_R S, _R A) not closed under the bimodule actions");
    return *c;
  };
  const auto maps = pd.hom.maps();
  pd.hom_bimodule = Bimodule<F>{ts.ext.base, ts.ext.total, h, {}, {}, "Hom(S,A)"};
  auto op_matrix = [&](const Matrix<F>& mult) {
    Matrix<F> op(h, h);
    for (std::size_t j = 0; j < h; ++j) {
      auto c = coords(mult * maps[j]);
      for (std::size_t i = 0; i < h; ++i) op(i, j) = c[i];
    }
    return op;
  };
  for (std::size_t b = 0; b < ts.ext.base->dim(); ++b)
    pd.hom_bimodule.left_ops.push_back(op_matrix(a.left_mult_by(ts.ext.image_of_basis(b))));
  for (std::size_t k = 0; k < a.dim(); ++k) pd.hom_bimodule.right_ops.push_back(op_matrix(a.right_mult(k)));

  const auto s_basis = s.space.maps();
  pd.psi = Matrix<F>(h, ts.dim());
  for (std::size_t q = 0; q < ts.dim(); ++q) {
    auto [x, y] = ts.tensor.section[q];
    Matrix<F> g(a.dim(), s.dim());
    for (std::size_t k = 0; k < s.dim(); ++k) {
      const auto v = a.right_mult(y).apply(s_basis[k].column(x));
      for (std::size_t r = 0; r < a.dim(); ++r) g(r, k) = v[r];
    }
    const auto c = coords(g);
    for (std::size_t i = 0; i < h; ++i) pd.psi(i, q) = c[i];
  }
  return pd;
}

template <class F>
struct WeakD2Report {
  Side side = Side::Left;
  bool rs_projective = false;
  std::size_t s_dim = 0;
  std::size_t hom_dim = 0;  // dim Hom(_R S, _R A)
  std::size_t psi_rank = 0;
  std::optional<Matrix<F>> splitting;  // sigma with Psi sigma = id
  bool weak_d2 = false;
  // reject decomposition
  std::size_t reject_dim = 0;
  bool reject_is_psi_kernel = false;
  std::optional<std::size_t> complement_dim;
  bool decomposition_direct = false;
  bool reject_has_no_maps_to_a = false;
  bool complement_is_summand = false;
};

/// Left version on the given extension; the right version runs on the opposite extension.
template <class F>
WeakD2Report<F> check_weak_d2(const Extension<F>& ext_in, Side side, std::size_t guard = kDefaultDimensionGuard) {
  const Extension<F> ext = side == Side::Left ? ext_in : opposite(ext_in);
  WeakD2Report<F> rep;
  rep.side = side;
  const auto ts = tensor_square(ext, guard);
  const auto s = end_bimodule_algebra(ext);
  rep.s_dim = s.dim();
  rep.rs_projective = add_membership(left_r_module_of_s(s), regular_left_module(s.centralizer.algebra)).is_summand();
  const auto pd = compute_psi(ts, s);
  rep.hom_dim = pd.hom.dim();
  rep.psi_rank = rank(pd.psi);

  const Bimodule<F> q_ba = ts.ba();
  const auto sigma_space = hom_space(pd.hom_bimodule, q_ba);
  const auto gens = module_generators(representation(pd.hom_bimodule));
  std::vector<Vector<F>> vals;
  for (std::size_t l = 0; l < sigma_space.dim(); ++l) {
    const Matrix<F> comp = pd.psi * sigma_space.map(l);
    Vector<F> v;
    for (const auto& g : gens) {
      auto w = comp.apply(g);
      v.insert(v.end(), w.begin(), w.end());
    }
    vals.push_back(std::move(v));
  }
  Vector<F> target;
  for (const auto& g : gens) target.insert(target.end(), g.begin(), g.end());
  std::optional<Vector<F>> coeff;
  if (pd.hom.dim() == 0)
    coeff = Vector<F>(sigma_space.dim(), F(0));
  else if (!vals.empty())
    coeff = solve_membership(vals, target);
  if (coeff) {
    Matrix<F> sigma = sigma_space.dim() ? sigma_space.combination(*coeff) : Matrix<F>(ts.dim(), pd.hom.dim());
    if (!(pd.psi * sigma).is_identity()) throw std::logic_error("weak D2 splitting fails verification");
    rep.splitting = std::move(sigma);
  }
  rep.weak_d2 = rep.rs_projective && rep.splitting.has_value();

  // Reject of A in Q: intersection of kernels of all B-A maps Q -> A.
  const Bimodule<F> a_ba = bimodule_over(ext, identity_extension(ext.total));
  const auto to_a = hom_space(q_ba, a_ba);
  std::vector<Vector<F>> rows;
  for (std::size_t l = 0; l < to_a.dim(); ++l) {
    const auto m = to_a.map(l);
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row_vector(r));
  }
  const Subspace<F> u = rows.empty() ? Subspace<F>::full(ts.dim()) : kernel(Matrix<F>::from_rows(rows, ts.dim()));
  rep.reject_dim = u.dim();
  rep.reject_is_psi_kernel = (u == kernel(pd.psi));
  if (rep.splitting) {
    const Subspace<F> l = image(*rep.splitting);
    rep.complement_dim = l.dim();
    rep.decomposition_direct = u.intersect(l).dim() == 0 && u.dim() + l.dim() == ts.dim();
    const auto q_rep = representation(q_ba);
    rep.reject_has_no_maps_to_a = hom_space(restrict_to(q_rep, u), representation(a_ba)).dim() == 0;
    rep.complement_is_summand = add_membership(restrict_to(q_rep, l), representation(a_ba)).is_summand();
  }
  return rep;
}

// ---------------------------------------------------------------- splitting via a separability element

template <class F>
struct SplittingReport {
  bool applicable = false;
  std::string reason;
  Side side = Side::Left;
  std::size_t w_dim = 0;
  std::size_t s_dim = 0;
  std::size_t s_prime_dim = 0;
  std::optional<Vector<F>> separability_element;  // in W (x)_B W
  bool eta_lands_in_s_prime = false;
  bool eta_splits_inclusion = false;
  bool eta_r_bilinear = false;
  std::size_t hom_dim = 0;
  std::optional<Matrix<F>> sigma;  // Hom(_R S', _R A) -> A (x)_W A
  bool psi_sigma_identity = false;
  bool verified() const {
    return applicable && eta_lands_in_s_prime && eta_splits_inclusion && eta_r_bilinear && psi_sigma_identity;
  }
};

/// Builds the averaging map eta: S -> S' and the splitting of Psi for A|W, W the double centralizer,
/// from a left D2 quasibase of A|B and a separability element of W|B.  W must be the double centralizer.
template <class F>
SplittingReport<F> double_centralizer_splitting(const Extension<F>& ext_in, Side side,
                                       std::optional<Subspace<F>> requested_w = std::nullopt,
                                       std::size_t guard = kDefaultDimensionGuard) {
  const Extension<F> ext = side == Side::Left ? ext_in : opposite(ext_in);
  SplittingReport<F> rep;
  rep.side = side;
  const auto& a = *ext.total;
  const auto ts = tensor_square(ext, guard);
  const auto d2 = check_d2(ts, Side::Left);
  const auto rsub = centralizer(ext);
  const auto wsub = centralizer_of(a, rsub.space, "W");
  rep.w_dim = wsub.space.dim();
  if (requested_w && !(*requested_w == wsub.space)) {
    rep.reason = "the intermediate algebra must be the double centralizer";
    return rep;
  }
  if (!d2.certificate) {
    rep.reason = std::string("extension is not ") + side_name(side) + " D2";
    return rep;
  }
  // W | B
  Matrix<F> b_in_w(wsub.space.dim(), ext.base->dim());
  for (std::size_t b = 0; b < ext.base->dim(); ++b) {
    auto c = wsub.space.coordinates(ext.image_of_basis(b));
    if (!c) throw std::logic_error("B is not contained in its double centralizer");
    for (std::size_t i = 0; i < c->size(); ++i) b_in_w(i, b) = (*c)[i];
  }
  const Extension<F> w_over_b{ext.base, wsub.algebra, b_in_w, "W|B"};
  const auto ts_wb = tensor_square(w_over_b, guard);
  const auto sep = separability_element(ts_wb);
  if (!sep.element) {
    rep.reason = "W|B has no separability element";
    return rep;
  }
  rep.applicable = true;
  rep.separability_element = sep.element;

  // e = sum_q c_q e1_q (x) e2_q with factors embedded in A.
  struct Term {
    F c;
    Vector<F> e1, e2;
  };
  std::vector<Term> e;
  for (std::size_t q = 0; q < ts_wb.dim(); ++q) {
    if ((*sep.element)[q].is_zero()) continue;
    auto [i, j] = ts_wb.tensor.section[q];
    e.push_back({(*sep.element)[q], wsub.embed(wsub.algebra->basis(i)), wsub.embed(wsub.algebra->basis(j))});
  }
  const Extension<F> a_over_w = wsub.as_extension(ext.total, "A|W");
  const auto s = end_bimodule_algebra(ext);
  const auto sp = end_bimodule_algebra(a_over_w);
  rep.s_dim = s.dim();
  rep.s_prime_dim = sp.dim();

  // eta(alpha)(x) = sum e1 alpha(e2 x ebar1) ebar2 over two copies e, ebar of the separability element
  std::vector<std::pair<Matrix<F>, Matrix<F>>> outer_inner;
  for (const auto& t : e)
    for (const auto& tb : e) {
      Matrix<F> outer = a.left_mult_by(t.e1) * a.right_mult_by(tb.e2);
      Matrix<F> inner = a.left_mult_by(t.e2) * a.right_mult_by(tb.e1);
      outer *= t.c * tb.c;
      outer_inner.emplace_back(std::move(outer), std::move(inner));
    }
  auto eta = [&](const Matrix<F>& alpha) {
    Matrix<F> out(a.dim(), a.dim());
    for (const auto& [o, i] : outer_inner) out += o * alpha * i;
    return out;
  };
  rep.eta_lands_in_s_prime = true;
  rep.eta_r_bilinear = true;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const Matrix<F> alpha = s.element(k);
    const Matrix<F> ea = eta(alpha);
    if (!sp.coordinates(ea)) rep.eta_lands_in_s_prime = false;
    for (auto g : rsub.algebra->generators()) {
      const auto r = rsub.embed(rsub.algebra->basis(g));
      const Matrix<F> lam = a.left_mult_by(r), rho = a.right_mult_by(r);
      if (eta(lam * alpha) != lam * ea || eta(rho * alpha) != rho * ea) rep.eta_r_bilinear = false;
    }
  }
  rep.eta_splits_inclusion = true;
  for (std::size_t k = 0; k < sp.dim(); ++k)
    if (eta(sp.element(k)) != sp.element(k)) rep.eta_splits_inclusion = false;
  if (!rep.eta_lands_in_s_prime) return rep;

  // sigma(G) = sum_i e1 t_i1 (x)_W t_i2 e2 G(eta(beta_i))
  const auto ts_w = tensor_square(a_over_w, guard);
  const auto pd = compute_psi(ts_w, sp);
  rep.hom_dim = pd.hom.dim();
  const auto& cert = *d2.certificate;
  std::vector<Vector<F>> eta_beta;  // coordinates in S'
  for (const auto& beta : cert.beta) eta_beta.push_back(*sp.coordinates(eta(beta)));
  Matrix<F> sigma(ts_w.dim(), pd.hom.dim());
  for (std::size_t m = 0; m < pd.hom.dim(); ++m) {
    const Matrix<F> g = pd.hom.map(m);
    Vector<F> col(ts_w.dim(), F(0));
    for (std::size_t i = 0; i < cert.count(); ++i) {
      const Vector<F> gval = g.apply(eta_beta[i]);
      for (std::size_t q = 0; q < ts.dim(); ++q) {
        const F& tq = cert.t[i][q];
        if (tq.is_zero()) continue;
        auto [x, y] = ts.tensor.section[q];
        for (const auto& term : e) {
          const Vector<F> left = a.multiply(term.e1, a.basis(x));
          const Vector<F> right = a.multiply(a.multiply(a.basis(y), term.e2), gval);
          axpy(col, term.c * tq, ts_w.pure(left, right));
        }
      }
    }
    for (std::size_t r = 0; r < ts_w.dim(); ++r) sigma(r, m) = col[r];
  }
  rep.psi_sigma_identity = (pd.psi * sigma).is_identity();
  rep.sigma = std::move(sigma);
  return rep;
}

// ---------------------------------------------------------------- split extensions

template <class F>
struct SplitResult {
  std::optional<Matrix<F>> projection;  // E: A -> B, dim B x dim A
  std::size_t hom_dim = 0;              // dim Hom_{B-B}(A, B)
  std::size_t restriction_rank = 0;     // rank of {E o map}
};

template <class F>
SplitResult<F> check_split_extension(const Extension<F>& ext) {
  SplitResult<F> res;
  const Extension<F> idb = identity_extension(ext.base);
  const auto hom = hom_space(bimodule_over(ext, ext), regular_bimodule(ext.base));
  res.hom_dim = hom.dim();
  std::vector<Vector<F>> restricted;
  for (std::size_t l = 0; l < hom.dim(); ++l) restricted.push_back((hom.map(l) * ext.map).flat());
  const auto target = Matrix<F>::identity(ext.base->dim()).flat();
  if (!restricted.empty()) res.restriction_rank = rank(Matrix<F>::from_rows(restricted, target.size()));
  auto c = restricted.empty() ? std::optional<Vector<F>>{} : solve_membership(restricted, target);
  if (!c) return res;
  Matrix<F> e = hom.combination(*c);
  if (!(e * ext.map).is_identity()) throw std::logic_error("split projection fails verification");
  res.projection = std::move(e);
  return res;
}

// ---------------------------------------------------------------- normality

template <class F>
struct NormalityReport {
  bool invariant = false;
  std::size_t centralizer_dim = 0;
  std::size_t contracted_dim = 0;  // dim R cap I
  std::size_t left_span_dim = 0;   // dim C (R cap I)
  std::size_t right_span_dim = 0;  // dim (R cap I) C
};

template <class F>
NormalityReport<F> check_normal_wrt_ideal(const Extension<F>& ext, const Subspace<F>& ideal) {
  const auto& c = *ext.total;
  if (!is_two_sided_ideal(c, ideal)) throw AlgebraError("the given subspace is not a two-sided ideal");
  NormalityReport<F> rep;
  const auto rsub = centralizer(ext);
  const auto ri = rsub.space.intersect(ideal);
  const auto all = Subspace<F>::full(c.dim());
  const auto left = product_space(c, all, ri);
  const auto right = product_space(c, ri, all);
  rep.centralizer_dim = rsub.space.dim();
  rep.contracted_dim = ri.dim();
  rep.left_span_dim = left.dim();
  rep.right_span_dim = right.dim();
  rep.invariant = left == right;
  return rep;
}

// ---------------------------------------------------------------- balanced modules and Galois

template <class F>
struct BalancedReport {
  std::size_t b_dim = 0;
  Subspace<F> invariants;       // A^S
  Subspace<F> double_centralizer;  // W
  bool b_in_invariants = false;
  bool invariants_in_w = false;
  std::size_t end_ab_dim = 0;        // End(A_B)
  std::size_t double_end_ab_dim = 0;
  bool ab_balanced = false;
  std::size_t end_ba_dim = 0;        // End(_B A)
  std::size_t double_end_ba_dim = 0;
  bool ba_balanced = false;
};

/// A^S = {x : alpha(x) = alpha(1) x for all alpha in S}.
template <class F>
Subspace<F> s_invariants(const EndAlgebra<F>& s) {
  const auto& a = *s.ext.total;
  std::vector<Vector<F>> rows;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    const Matrix<F> alpha = s.element(k);
    const Matrix<F> m = alpha - a.left_mult_by(alpha.apply(a.unit()));
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row_vector(r));
  }
  if (rows.empty()) return Subspace<F>::full(a.dim());
  return kernel(Matrix<F>::from_rows(rows, a.dim()));
}

template <class F>
Representation<F> operator_representation(std::size_t dim, std::vector<Matrix<F>> ops) {
  return {dim, std::move(ops), {}};
}

template <class F>
BalancedReport<F> balanced_and_invariants(const Extension<F>& ext) {
  BalancedReport<F> rep;
  const auto& a = *ext.total;
  const auto s = end_bimodule_algebra(ext);
  const auto b_space = ext.image_subspace();
  rep.b_dim = b_space.dim();
  rep.invariants = s_invariants(s);
  rep.double_centralizer = centralizer_of(a, s.centralizer.space).space;
  rep.b_in_invariants = rep.invariants.contains(b_space);
  rep.invariants_in_w = rep.double_centralizer.contains(rep.invariants);

  auto double_commutant = [&](bool right_module, std::size_t& end_dim, std::size_t& dbl_dim) {
    std::vector<Matrix<F>> ops;
    for (const auto& b : ext.generator_images()) ops.push_back(right_module ? a.right_mult_by(b) : a.left_mult_by(b));
    const auto e1 = hom_space(operator_representation(a.dim(), ops), operator_representation(a.dim(), ops));
    end_dim = e1.dim();
    const auto e1_ops = e1.maps();
    const auto e2 = hom_space(operator_representation(a.dim(), e1_ops), operator_representation(a.dim(), e1_ops));
    dbl_dim = e2.dim();
    // balanced: the double commutant is exactly the image of B
    for (std::size_t b = 0; b < ext.base->dim(); ++b) {
      const auto img = ext.image_of_basis(b);
      if (!e2.coordinates(right_module ? a.right_mult_by(img) : a.left_mult_by(img))) return false;
    }
    return e2.dim() == b_space.dim();
  };
  rep.ab_balanced = double_commutant(true, rep.end_ab_dim, rep.double_end_ab_dim);
  rep.ba_balanced = double_commutant(false, rep.end_ba_dim, rep.double_end_ba_dim);
  return rep;
}

/// A as a right B-module, for projectivity tests against B_B.
template <class F>
Representation<F> right_b_module_of_a(const Extension<F>& ext) {
  Representation<F> rep{ext.total->dim(), {}, {{'R', ext.base}}};
  for (const auto& b : ext.generator_images()) rep.ops.push_back(ext.total->right_mult_by(b));
  return rep;
}

template <class F>
HomSpace<F> end_right_b_module(const Extension<F>& ext) {
  const auto rep = right_b_module_of_a(ext);
  return hom_space(rep, rep);
}

template <class F>
struct GaloisReport {
  bool precondition = false;  // A_B finitely generated projective
  bool rs_projective = false;
  std::size_t tensor_dim = 0;  // dim A (x)_R S
  std::size_t end_dim = 0;     // dim End(A_B)
  std::size_t j_rank = 0;
  bool j_bijective = false;
  Subspace<F> invariants;
  bool invariants_equal_b = false;
  bool galois = false;
};

template <class F>
GaloisReport<F> check_left_galois(const Extension<F>& ext, std::size_t guard = kDefaultDimensionGuard) {
  GaloisReport<F> rep;
  const auto& a = *ext.total;
  rep.precondition = add_membership(right_b_module_of_a(ext), regular_right_module(ext.base)).is_summand();
  const auto s = end_bimodule_algebra(ext);
  rep.invariants = s_invariants(s);
  rep.invariants_equal_b = rep.invariants == ext.image_subspace();
  if (!rep.precondition) return rep;
  rep.rs_projective = add_membership(left_r_module_of_s(s), regular_left_module(s.centralizer.algebra)).is_summand();
  const auto end_ab = end_right_b_module(ext);
  rep.end_dim = end_ab.dim();
  const auto r_ext = s.centralizer.as_extension(ext.total, "R");
  const auto a_kr = forget_left(restrict_right(regular_bimodule(ext.total), r_ext));
  const auto s_rk = forget_right(s.rr);
  const auto t = tensor_over(a_kr, s_rk, guard);
  rep.tensor_dim = t.dim();
  Matrix<F> j(end_ab.dim(), t.dim());
  for (std::size_t q = 0; q < t.dim(); ++q) {
    auto [x, k] = t.section[q];
    auto c = end_ab.coordinates(a.left_mult(x) * s.element(k));
    if (!c) throw std::logic_error("j does not land in End(A_B)");
    for (std::size_t r = 0; r < end_ab.dim(); ++r) j(r, q) = (*c)[r];
  }
  rep.j_rank = rank(j);
  rep.j_bijective = rep.j_rank == t.dim() && rep.j_rank == end_ab.dim();
  rep.galois = rep.rs_projective && rep.j_bijective && rep.invariants_equal_b;
  return rep;
}

template <class F>
struct GroupGaloisReport {
  bool ab_projective = false;
  std::size_t smash_dim = 0;
  std::size_t end_dim = 0;
  std::size_t j_rank = 0;
  bool j_bijective = false;
  Subspace<F> invariants;  // A^G
  bool invariants_equal_b = false;
  bool galois = false;
};

template <class F>
ValidationReport validate_automorphism(const Extension<F>& ext, const Matrix<F>& sigma) {
  const auto& a = *ext.total;
  if (sigma.rows() != a.dim() || sigma.cols() != a.dim()) return {false, "automorphism has wrong shape"};
  if (rank(sigma) != a.dim()) return {false, "map is not invertible"};
  if (sigma.apply(a.unit()) != a.unit()) return {false, "map does not preserve the unit"};
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      if (sigma.apply(a.basis_product(i, j)) != a.multiply(sigma.column(i), sigma.column(j)))
        return {false, "map is not multiplicative at (" + std::to_string(i) + "," + std::to_string(j) + ")"};
  if (sigma * ext.map != ext.map) return {false, "map does not fix B pointwise"};
  return {};
}

template <class F>
GroupGaloisReport<F> check_group_galois(const Extension<F>& ext, const std::vector<Matrix<F>>& group) {
  for (std::size_t g = 0; g < group.size(); ++g)
    if (auto v = validate_automorphism(ext, group[g]); !v)
      throw AlgebraError("automorphism " + std::to_string(g) + ": " + v.message);
  GroupGaloisReport<F> rep;
  const auto& a = *ext.total;
  rep.ab_projective = add_membership(right_b_module_of_a(ext), regular_right_module(ext.base)).is_summand();
  const auto end_ab = end_right_b_module(ext);
  rep.end_dim = end_ab.dim();
  rep.smash_dim = a.dim() * group.size();
  std::vector<Vector<F>> cols;
  for (const auto& sigma : group)
    for (std::size_t x = 0; x < a.dim(); ++x) {
      auto c = end_ab.coordinates(a.left_mult(x) * sigma);
      if (!c) throw std::logic_error("j does not land in End(A_B)");
      cols.push_back(*c);
    }
  rep.j_rank = cols.empty() ? 0 : rank(Matrix<F>::from_rows(cols, end_ab.dim()));
  rep.j_bijective = rep.j_rank == rep.smash_dim && rep.j_rank == rep.end_dim;
  std::vector<Vector<F>> rows;
  for (const auto& sigma : group) {
    const Matrix<F> m = sigma - Matrix<F>::identity(a.dim());
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row_vector(r));
  }
  rep.invariants = rows.empty() ? Subspace<F>::full(a.dim()) : kernel(Matrix<F>::from_rows(rows, a.dim()));
  rep.invariants_equal_b = rep.invariants == ext.image_subspace();
  rep.galois = rep.ab_projective && rep.j_bijective && rep.invariants_equal_b;
  return rep;
}

}  // namespace depthtwo
