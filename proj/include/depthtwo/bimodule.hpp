#pragma once

// Bimodules given by action matrices, hom-space solvers and the
// direct-summand test (is M a summand of some P^N?).
//
// Hom computations work on a Representation: a vector space with a list of
// operators that must be intertwined.  Bimodules contribute the operators of
// the algebra generators on both sides; comodules (see cocore.hpp) contribute
// slices of their coaction matrices.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "depthtwo/algebra.hpp"

namespace depthtwo {

class DimensionGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultDimensionGuard = 20000;

template <class F>
struct Bimodule {
  AlgebraPtr<F> left;
  AlgebraPtr<F> right;
  std::size_t dim = 0;
  std::vector<Matrix<F>> left_ops;   // m -> e_i m, one per basis element of `left`
  std::vector<Matrix<F>> right_ops;  // m -> m e_j, one per basis element of `right`
  std::string name;

  Matrix<F> left_action(std::span<const F> x) const { return combination(left_ops, x); }
  Matrix<F> right_action(std::span<const F> y) const { return combination(right_ops, y); }
  Matrix<F> left_action(const Vector<F>& x) const { return left_action(std::span<const F>(x)); }
  Matrix<F> right_action(const Vector<F>& y) const { return right_action(std::span<const F>(y)); }

 private:
  Matrix<F> combination(const std::vector<Matrix<F>>& ops, std::span<const F> x) const {
    if (x.size() != ops.size()) throw DimensionMismatch("action: element of wrong length");
    Matrix<F> m(dim, dim);
    for (std::size_t i = 0; i < ops.size(); ++i) m.add_scaled(x[i], ops[i]);
    return m;
  }
};

/// A as an A-A-bimodule.
template <class F>
Bimodule<F> regular_bimodule(const AlgebraPtr<F>& a) {
  Bimodule<F> m{a, a, a->dim(), {}, {}, a->name()};
  for (std::size_t i = 0; i < a->dim(); ++i) {
    m.left_ops.push_back(a->left_mult(i));
    m.right_ops.push_back(a->right_mult(i));
  }
  return m;
}

/// Pull the left action back along ext: base -> left algebra of m.
template <class F>
Bimodule<F> restrict_left(const Bimodule<F>& m, const Extension<F>& ext) {
  if (!same_algebra(ext.total, m.left)) throw AlgebraError("restrict_left: algebra mismatch");
  Bimodule<F> r{ext.base, m.right, m.dim, {}, m.right_ops, m.name};
  for (std::size_t b = 0; b < ext.base->dim(); ++b) r.left_ops.push_back(m.left_action(ext.image_of_basis(b)));
  return r;
}

template <class F>
Bimodule<F> restrict_right(const Bimodule<F>& m, const Extension<F>& ext) {
  if (!same_algebra(ext.total, m.right)) throw AlgebraError("restrict_right: algebra mismatch");
  Bimodule<F> r{m.left, ext.base, m.dim, m.left_ops, {}, m.name};
  for (std::size_t b = 0; b < ext.base->dim(); ++b) r.right_ops.push_back(m.right_action(ext.image_of_basis(b)));
  return r;
}

template <class F>
Bimodule<F> restrict_both(const Bimodule<F>& m, const Extension<F>& left_ext, const Extension<F>& right_ext) {
  return restrict_right(restrict_left(m, left_ext), right_ext);
}

/// Forget the right action (replace it by the ground field).
template <class F>
Bimodule<F> forget_right(const Bimodule<F>& m) {
  return {m.left, share(Algebra<F>::ground()), m.dim, m.left_ops, {Matrix<F>::identity(m.dim)}, m.name};
}

template <class F>
Bimodule<F> forget_left(const Bimodule<F>& m) {
  return {share(Algebra<F>::ground()), m.right, m.dim, {Matrix<F>::identity(m.dim)}, m.right_ops, m.name};
}

template <class F>
ValidationReport validate_bimodule(const Bimodule<F>& m) {
  auto check_side = [&](const Algebra<F>& a, const std::vector<Matrix<F>>& ops, bool is_left) -> ValidationReport {
    const char* side = is_left ? "left" : "right";
    if (ops.size() != a.dim()) return {false, std::string(side) + " action has wrong number of matrices"};
    for (const auto& op : ops)
      if (op.rows() != m.dim || op.cols() != m.dim) return {false, std::string(side) + " action matrix has wrong shape"};
    Matrix<F> u(m.dim, m.dim);
    for (std::size_t i = 0; i < a.dim(); ++i) u.add_scaled(a.unit()[i], ops[i]);
    if (!u.is_identity()) return {false, std::string(side) + " action is not unital"};
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j) {
        Matrix<F> prod(m.dim, m.dim);
        const Vector<F> ij = a.basis_product(i, j);
        for (std::size_t k = 0; k < a.dim(); ++k) prod.add_scaled(ij[k], ops[k]);
        // left: e_i(e_j m) = (e_i e_j) m ;  right: (m e_i) e_j = m (e_i e_j)
        const Matrix<F> composite = is_left ? ops[i] * ops[j] : ops[j] * ops[i];
        if (composite != prod)
          return {false, std::string(side) + " action not associative at (" + std::to_string(i) + "," +
                             std::to_string(j) + ")"};
      }
    return {};
  };
  if (auto r = check_side(*m.left, m.left_ops, true); !r) return r;
  if (auto r = check_side(*m.right, m.right_ops, false); !r) return r;
  for (const auto& l : m.left_ops)
    for (const auto& r : m.right_ops)
      if (l * r != r * l) return {false, "left and right actions do not commute"};
  return {};
}

/// Vector space with operators; homomorphisms are the linear maps intertwining them.
template <class F>
struct Representation {
  std::size_t dim = 0;
  std::vector<Matrix<F>> ops;
  std::vector<std::pair<char, AlgebraPtr<F>>> acting;  // tag and algebra, for compatibility checks
};

template <class F>
Representation<F> representation(const Bimodule<F>& m) {
  Representation<F> r{m.dim, {}, {{'L', m.left}, {'R', m.right}}};
  for (auto g : m.left->generators()) r.ops.push_back(m.left_ops[g]);
  for (auto g : m.right->generators()) r.ops.push_back(m.right_ops[g]);
  return r;
}

template <class F>
void require_compatible(const Representation<F>& a, const Representation<F>& b) {
  if (a.ops.size() != b.ops.size() || a.acting.size() != b.acting.size())
    throw AlgebraError("hom space between modules over different algebras");
  for (std::size_t i = 0; i < a.acting.size(); ++i)
    if (a.acting[i].first != b.acting[i].first || !same_algebra(a.acting[i].second, b.acting[i].second))
      throw AlgebraError("hom space between modules over different algebras");
}

/// Linear maps dst_dim x src_dim, flattened row-major.
template <class F>
struct HomSpace {
  std::size_t src_dim = 0;
  std::size_t dst_dim = 0;
  Subspace<F> space;

  std::size_t dim() const { return space.dim(); }
  Matrix<F> map(std::size_t i) const {
    return Matrix<F>::from_flat(dst_dim, src_dim, space.basis().row(i));
  }
  std::vector<Matrix<F>> maps() const {
    std::vector<Matrix<F>> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(map(i));
    return out;
  }
  Matrix<F> combination(std::span<const F> c) const {
    auto flat = space.element(c);
    return Matrix<F>::from_flat(dst_dim, src_dim, std::span<const F>(flat));
  }
  Matrix<F> combination(const Vector<F>& c) const { return combination(std::span<const F>(c)); }
  std::optional<Vector<F>> coordinates(const Matrix<F>& m) const {
    if (m.rows() != dst_dim || m.cols() != src_dim) throw DimensionMismatch("hom coordinates: wrong shape");
    return space.coordinates(m.flat());
  }
  Vector<F> pivot_coordinates(const Matrix<F>& m) const { return space.pivot_coordinates(m.flat()); }
};

template <class F>
using SparseRow = typename SparseSystem<F>::Row;

/// Adds the equations f * op_src = op_dst * f for one operator pair.
template <class F>
void add_intertwining_equations(SparseSystem<F>& sys, const Matrix<F>& op_src, const Matrix<F>& op_dst) {
  const std::size_t m = op_src.rows();
  const std::size_t n = op_dst.rows();
  for (std::size_t r = 0; r < n && !sys.saturated(); ++r)
    for (std::size_t c = 0; c < m && !sys.saturated(); ++c) {
      SparseRow<F> row;
      for (std::size_t s = 0; s < m; ++s)
        if (!op_src(s, c).is_zero()) row.emplace_back(static_cast<std::uint32_t>(r * m + s), op_src(s, c));
      for (std::size_t s = 0; s < n; ++s)
        if (!op_dst(r, s).is_zero()) row.emplace_back(static_cast<std::uint32_t>(s * m + c), -op_dst(r, s));
      sys.add_equation(std::move(row));
    }
}

template <class F>
HomSpace<F> hom_space(const Representation<F>& src, const Representation<F>& dst) {
  require_compatible(src, dst);
  SparseSystem<F> sys(src.dim * dst.dim);
  for (std::size_t k = 0; k < src.ops.size() && !sys.saturated(); ++k)
    add_intertwining_equations(sys, src.ops[k], dst.ops[k]);
  return {src.dim, dst.dim, sys.solution_space()};
}

template <class F>
HomSpace<F> hom_space(const Bimodule<F>& src, const Bimodule<F>& dst) {
  return hom_space(representation(src), representation(dst));
}

template <class F>
bool is_homomorphism(const Matrix<F>& f, const Representation<F>& src, const Representation<F>& dst) {
  require_compatible(src, dst);
  if (f.rows() != dst.dim || f.cols() != src.dim) return false;
  for (std::size_t k = 0; k < src.ops.size(); ++k)
    if (f * src.ops[k] != dst.ops[k] * f) return false;
  return true;
}

/// Smallest invariant subspace containing the given vectors.
template <class F>
Subspace<F> submodule_generated(const Representation<F>& rep, const std::vector<Vector<F>>& vectors) {
  EchelonBasis<F> sub(rep.dim);
  std::vector<Vector<F>> queue = vectors;
  while (!queue.empty()) {
    Vector<F> v = std::move(queue.back());
    queue.pop_back();
    if (!sub.add(v)) continue;
    for (const auto& op : rep.ops) queue.push_back(op.apply(v));
  }
  return sub.subspace();
}

/// Greedy generating set drawn from the standard basis (in index order).
template <class F>
std::vector<Vector<F>> module_generators(const Representation<F>& rep) {
  EchelonBasis<F> sub(rep.dim);
  std::vector<Vector<F>> gens;
  for (std::size_t i = 0; i < rep.dim && sub.dim() < rep.dim; ++i) {
    auto e = unit_vector<F>(rep.dim, i);
    if (sub.contains(e)) continue;
    gens.push_back(e);
    std::vector<Vector<F>> queue{e};
    while (!queue.empty()) {
      Vector<F> v = std::move(queue.back());
      queue.pop_back();
      if (!sub.add(v)) continue;
      for (const auto& op : rep.ops) queue.push_back(op.apply(v));
    }
  }
  return gens;
}

/// The representation on an invariant subspace, in its canonical coordinates.
template <class F>
Representation<F> restrict_to(const Representation<F>& rep, const Subspace<F>& u) {
  Representation<F> r{u.dim(), {}, rep.acting};
  for (const auto& op : rep.ops) {
    Matrix<F> m(u.dim(), u.dim());
    for (std::size_t j = 0; j < u.dim(); ++j) {
      auto img = u.coordinates(op.apply(u.basis_vector(j)));
      if (!img) throw AlgebraError("subspace is not invariant");
      for (std::size_t i = 0; i < u.dim(); ++i) m(i, j) = (*img)[i];
    }
    r.ops.push_back(std::move(m));
  }
  return r;
}

/// Split maps exhibiting M as a direct summand of P^N: sum_i g_i f_i = id_M.
template <class F>
struct SummandCertificate {
  std::vector<Matrix<F>> f;  // M -> P
  std::vector<Matrix<F>> g;  // P -> M
  std::size_t count() const { return f.size(); }
};

template <class F>
struct SummandWitness {
  std::size_t hom_out_dim = 0;       // dim Hom(M, P)
  std::size_t hom_in_dim = 0;        // dim Hom(P, M)
  std::size_t composite_span_dim = 0;
  std::optional<std::size_t> end_dim;  // dim End(M), when computed
  std::optional<std::size_t> codimension() const {
    if (!end_dim) return std::nullopt;
    return *end_dim - composite_span_dim;
  }
};

template <class F>
struct SummandResult {
  std::optional<SummandCertificate<F>> certificate;
  SummandWitness<F> witness;
  bool is_summand() const { return certificate.has_value(); }
};

template <class F>
bool verify_summand(const SummandCertificate<F>& cert, const Representation<F>& m, const Representation<F>& p) {
  if (cert.f.size() != cert.g.size()) return false;
  Matrix<F> sum(m.dim, m.dim);
  for (std::size_t i = 0; i < cert.f.size(); ++i) {
    if (!is_homomorphism(cert.f[i], m, p) || !is_homomorphism(cert.g[i], p, m)) return false;
    sum += cert.g[i] * cert.f[i];
  }
  return sum.is_identity();
}

/// Largest End(M) we are willing to solve for when reporting a refusal witness.
inline constexpr std::size_t kWitnessEndLimit = 4096;

/// Decides whether id_M lies in the span of composites g o f (f: M -> P, g: P -> M).
/// Composites are compared through their values on module generators of M,
/// which determine a module endomorphism uniquely.
template <class F>
SummandResult<F> add_membership(const Representation<F>& m, const Representation<F>& p) {
  require_compatible(m, p);
  SummandResult<F> result;
  const HomSpace<F> out = hom_space(m, p);
  const HomSpace<F> in = hom_space(p, m);
  result.witness.hom_out_dim = out.dim();
  result.witness.hom_in_dim = in.dim();

  const auto gens = module_generators(m);
  const auto fs = out.maps();
  const auto gs = in.maps();
  // f_l(v) for every generator v, cached.
  std::vector<std::vector<Vector<F>>> f_on_gens(fs.size());
  for (std::size_t l = 0; l < fs.size(); ++l)
    for (const auto& v : gens) f_on_gens[l].push_back(fs[l].apply(v));

  std::vector<Vector<F>> composites;
  std::vector<std::pair<std::size_t, std::size_t>> index;
  for (std::size_t k = 0; k < gs.size(); ++k)
    for (std::size_t l = 0; l < fs.size(); ++l) {
      Vector<F> val;
      val.reserve(gens.size() * m.dim);
      for (const auto& fv : f_on_gens[l]) {
        auto w = gs[k].apply(fv);
        val.insert(val.end(), w.begin(), w.end());
      }
      composites.push_back(std::move(val));
      index.emplace_back(k, l);
    }
  Vector<F> target;
  for (const auto& v : gens) target.insert(target.end(), v.begin(), v.end());

  if (!composites.empty())
    result.witness.composite_span_dim = rank(Matrix<F>::from_rows(composites, target.size()));
  auto coeffs = composites.empty() ? std::optional<Vector<F>>{} : solve_membership(composites, target);
  if (m.dim == 0) coeffs = Vector<F>(composites.size(), F(0));
  if (!coeffs) {
    if (m.dim * m.dim <= kWitnessEndLimit) result.witness.end_dim = hom_space(m, m).dim();
    return result;
  }
  // Group terms by g_k:  sum_k g_k o (sum_l c_kl f_l).
  std::map<std::size_t, Matrix<F>> grouped;
  for (std::size_t t = 0; t < index.size(); ++t) {
    const F& c = (*coeffs)[t];
    if (c.is_zero()) continue;
    auto [k, l] = index[t];
    auto it = grouped.find(k);
    if (it == grouped.end()) it = grouped.emplace(k, Matrix<F>(p.dim, m.dim)).first;
    it->second.add_scaled(c, fs[l]);
  }
  SummandCertificate<F> cert;
  for (auto& [k, f] : grouped) {
    cert.f.push_back(std::move(f));
    cert.g.push_back(gs[k]);
  }
  if (!verify_summand(cert, m, p)) throw std::logic_error("add_membership: extracted certificate fails verification");
  result.certificate = std::move(cert);
  return result;
}

template <class F>
SummandResult<F> add_membership(const Bimodule<F>& m, const Bimodule<F>& p) {
  return add_membership(representation(m), representation(p));
}

}  // namespace depthtwo
