#pragma once

// Finite-dimensional unital associative algebras given by structure
// constants, unit-preserving algebra maps (extensions), subalgebras,
// centralizers and two-sided ideals.

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "depthtwo/linalg.hpp"

namespace depthtwo {

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
class Algebra {
 public:
  Algebra() = default;

  /// constants[(i * dim + j) * dim + k] is the coefficient of e_k in e_i e_j.
  Algebra(std::size_t dim, Vector<F> constants, Vector<F> unit, std::string name = {})
      : dim_(dim), c_(std::move(constants)), unit_(std::move(unit)), name_(std::move(name)) {
    if (c_.size() != dim_ * dim_ * dim_) throw DimensionMismatch("structure constants must have dim^3 entries");
    if (unit_.size() != dim_) throw DimensionMismatch("unit must have dim entries");
    build_caches();
  }

  template <class Product>
  static Algebra from_products(std::size_t dim, Product&& product, Vector<F> unit, std::string name = {}) {
    Vector<F> c(dim * dim * dim, F(0));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        Vector<F> v = product(i, j);
        for (std::size_t k = 0; k < dim; ++k) c[(i * dim + j) * dim + k] = v[k];
      }
    return Algebra(dim, std::move(c), std::move(unit), std::move(name));
  }

  /// The ground field as a one-dimensional algebra.
  static Algebra ground(std::string name = "K") { return Algebra(1, {F(1)}, {F(1)}, std::move(name)); }

  std::size_t dim() const { return dim_; }
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  const Vector<F>& unit() const { return unit_; }
  const Vector<F>& constants() const { return c_; }
  const F& c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }

  /// Matrix of x -> e_i x.
  const Matrix<F>& left_mult(std::size_t i) const { return left_[i]; }
  /// Matrix of x -> x e_i.
  const Matrix<F>& right_mult(std::size_t i) const { return right_[i]; }

  Matrix<F> left_mult_by(std::span<const F> a) const { return combine(left_, a); }
  Matrix<F> right_mult_by(std::span<const F> a) const { return combine(right_, a); }
  Matrix<F> left_mult_by(const Vector<F>& a) const { return left_mult_by(std::span<const F>(a)); }
  Matrix<F> right_mult_by(const Vector<F>& a) const { return right_mult_by(std::span<const F>(a)); }

  Vector<F> basis_product(std::size_t i, std::size_t j) const {
    return Vector<F>(c_.begin() + static_cast<std::ptrdiff_t>((i * dim_ + j) * dim_),
                     c_.begin() + static_cast<std::ptrdiff_t>((i * dim_ + j + 1) * dim_));
  }

  Vector<F> multiply(std::span<const F> x, std::span<const F> y) const {
    if (x.size() != dim_ || y.size() != dim_) throw DimensionMismatch("multiply: wrong element length");
    Vector<F> out(dim_, F(0));
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (y[j].is_zero()) continue;
        const F xy = x[i] * y[j];
        const std::size_t base = (i * dim_ + j) * dim_;
        for (std::size_t k = 0; k < dim_; ++k)
          if (!c_[base + k].is_zero()) out[k] += xy * c_[base + k];
      }
    }
    return out;
  }
  Vector<F> multiply(const Vector<F>& x, const Vector<F>& y) const {
    return multiply(std::span<const F>(x), std::span<const F>(y));
  }

  Vector<F> basis(std::size_t i) const { return unit_vector<F>(dim_, i); }

  /// Indices of basis elements generating the algebra (greedy, in index order).
  const std::vector<std::size_t>& generators() const { return generators_; }

  friend bool operator==(const Algebra& a, const Algebra& b) {
    return a.dim_ == b.dim_ && a.unit_ == b.unit_ && a.c_ == b.c_;
  }

 private:
  Matrix<F> combine(const std::vector<Matrix<F>>& ms, std::span<const F> a) const {
    if (a.size() != dim_) throw DimensionMismatch("element has wrong length");
    Matrix<F> m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i) m.add_scaled(a[i], ms[i]);
    return m;
  }

  void build_caches() {
    left_.assign(dim_, Matrix<F>(dim_, dim_));
    right_.assign(dim_, Matrix<F>(dim_, dim_));
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        for (std::size_t k = 0; k < dim_; ++k) {
          const F& v = c(i, j, k);
          if (v.is_zero()) continue;
          left_[i](k, j) = v;
          right_[j](k, i) = v;
        }
    // Greedy generators: closure of span{1} under left multiplication by the chosen set.
    EchelonBasis<F> sub(dim_);
    std::vector<Vector<F>> members;
    auto close = [&](std::vector<Vector<F>> queue) {
      while (!queue.empty()) {
        Vector<F> v = std::move(queue.back());
        queue.pop_back();
        if (!sub.add(v)) continue;
        members.push_back(v);
        for (auto g : generators_) queue.push_back(left_[g].apply(v));
      }
    };
    if (dim_ == 0) return;
    close({unit_});
    for (std::size_t i = 0; i < dim_ && sub.dim() < dim_; ++i) {
      if (sub.contains(basis(i))) continue;
      generators_.push_back(i);
      std::vector<Vector<F>> queue;
      for (const auto& m : members) queue.push_back(left_[i].apply(m));
      queue.push_back(basis(i));
      close(std::move(queue));
    }
  }

  std::size_t dim_ = 0;
  Vector<F> c_;
  Vector<F> unit_;
  std::string name_;
  std::vector<Matrix<F>> left_, right_;
  std::vector<std::size_t> generators_;
};

template <class F>
using AlgebraPtr = std::shared_ptr<const Algebra<F>>;

template <class F>
AlgebraPtr<F> share(Algebra<F> a) {
  return std::make_shared<const Algebra<F>>(std::move(a));
}

template <class F>
bool same_algebra(const AlgebraPtr<F>& a, const AlgebraPtr<F>& b) {
  return a == b || (a && b && *a == *b);
}

struct ValidationReport {
  bool ok = true;
  std::string message;
  explicit operator bool() const { return ok; }
};

template <class F>
ValidationReport validate_algebra(const Algebra<F>& a) {
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i) {
    if (a.multiply(a.unit(), a.basis(i)) != a.basis(i) || a.multiply(a.basis(i), a.unit()) != a.basis(i))
      return {false, "unit law fails at basis element " + std::to_string(i)};
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const Vector<F> ij = a.basis_product(i, j);
      for (std::size_t k = 0; k < d; ++k) {
        // (e_i e_j) e_k = R_k (e_i e_j),  e_i (e_j e_k) = L_i (e_j e_k)
        if (a.right_mult(k).apply(ij) != a.left_mult(i).apply(a.basis_product(j, k)))
          return {false, "associativity fails at triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                             std::to_string(k) + ")"};
      }
    }
  return {};
}

template <class F>
Algebra<F> opposite(const Algebra<F>& a) {
  return Algebra<F>::from_products(
      a.dim(), [&](std::size_t i, std::size_t j) { return a.basis_product(j, i); }, a.unit(), a.name() + "^op");
}

/// A unit-preserving algebra map base -> total; column j of `map` is the image of the j-th base basis element.
template <class F>
struct Extension {
  AlgebraPtr<F> base;
  AlgebraPtr<F> total;
  Matrix<F> map;
  std::string name;

  Vector<F> image(std::span<const F> b) const { return map.apply(b); }
  Vector<F> image(const Vector<F>& b) const { return map.apply(b); }
  Vector<F> image_of_basis(std::size_t i) const { return map.column(i); }

  /// Images of the algebra generators of the base.
  std::vector<Vector<F>> generator_images() const {
    std::vector<Vector<F>> out;
    for (auto g : base->generators()) out.push_back(image_of_basis(g));
    return out;
  }

  Subspace<F> image_subspace() const { return depthtwo::image(map); }
};

template <class F>
ValidationReport validate_extension(const Extension<F>& e) {
  if (!e.base || !e.total) return {false, "extension is missing an algebra"};
  if (e.map.rows() != e.total->dim() || e.map.cols() != e.base->dim())
    return {false, "map has shape " + std::to_string(e.map.rows()) + "x" + std::to_string(e.map.cols()) +
                       ", expected " + std::to_string(e.total->dim()) + "x" + std::to_string(e.base->dim())};
  if (auto r = validate_algebra(*e.base); !r) return {false, "base: " + r.message};
  if (auto r = validate_algebra(*e.total); !r) return {false, "total: " + r.message};
  if (e.image(e.base->unit()) != e.total->unit()) return {false, "map does not preserve the unit"};
  for (std::size_t i = 0; i < e.base->dim(); ++i)
    for (std::size_t j = 0; j < e.base->dim(); ++j)
      if (e.image(e.base->basis_product(i, j)) != e.total->multiply(e.image_of_basis(i), e.image_of_basis(j)))
        return {false, "map is not multiplicative on basis pair (" + std::to_string(i) + "," + std::to_string(j) + ")"};
  return {};
}

template <class F>
Extension<F> identity_extension(const AlgebraPtr<F>& a) {
  return {a, a, Matrix<F>::identity(a->dim()), a->name() + "|" + a->name()};
}

/// K.1 -> A.
template <class F>
Extension<F> unit_extension(const AlgebraPtr<F>& a) {
  Matrix<F> m(a->dim(), 1);
  for (std::size_t i = 0; i < a->dim(); ++i) m(i, 0) = a->unit()[i];
  return {share(Algebra<F>::ground()), a, std::move(m), a->name() + "|K"};
}

template <class F>
Extension<F> opposite(const Extension<F>& e) {
  return {share(opposite(*e.base)), share(opposite(*e.total)), e.map, e.name + "^op"};
}

/// B -> C -> A composed to B -> A.
template <class F>
Extension<F> compose(const Extension<F>& lower, const Extension<F>& upper) {
  if (!same_algebra(lower.total, upper.base)) throw AlgebraError("tower mismatch: middle algebras differ");
  return {lower.base, upper.total, upper.map * lower.map, upper.name + "/" + lower.name};
}

/// A subalgebra with its basis expressed in the ambient algebra.
template <class F>
struct Subalgebra {
  AlgebraPtr<F> algebra;
  Matrix<F> inclusion;  // ambient dim x sub dim
  Subspace<F> space;

  Vector<F> embed(std::span<const F> x) const { return inclusion.apply(x); }
  Vector<F> embed(const Vector<F>& x) const { return inclusion.apply(x); }
  Extension<F> as_extension(const AlgebraPtr<F>& ambient, std::string name = {}) const {
    return {algebra, ambient, inclusion, std::move(name)};
  }
};

/// Structure constants on the canonical basis of a multiplicatively closed subspace containing 1.
template <class F>
Subalgebra<F> subalgebra(const Algebra<F>& a, const Subspace<F>& v, std::string name = {}) {
  if (v.ambient_dim() != a.dim()) throw DimensionMismatch("subalgebra: subspace in wrong ambient space");
  auto unit = v.coordinates(a.unit());
  if (!unit) throw AlgebraError("subspace does not contain the unit");
  const std::size_t d = v.dim();
  Vector<F> c(d * d * d, F(0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      auto coords = v.coordinates(a.multiply(v.basis_vector(i), v.basis_vector(j)));
      if (!coords) throw AlgebraError("subspace is not closed under multiplication");
      for (std::size_t k = 0; k < d; ++k) c[(i * d + j) * d + k] = (*coords)[k];
    }
  Matrix<F> inc(a.dim(), d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t r = 0; r < a.dim(); ++r) inc(r, i) = v.basis()(i, r);
  return {share(Algebra<F>(d, std::move(c), std::move(*unit), std::move(name))), std::move(inc), v};
}

/// {a : a x = x a for every x in xs}.
template <class F>
Subspace<F> centralizer_space(const Algebra<F>& a, const std::vector<Vector<F>>& xs) {
  SparseSystem<F> sys(a.dim());
  for (const auto& x : xs) {
    // rows of (R_x - L_x): a x - x a = 0
    Matrix<F> m = a.right_mult_by(x) - a.left_mult_by(x);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      typename SparseSystem<F>::Row row;
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (!m(r, c).is_zero()) row.emplace_back(static_cast<std::uint32_t>(c), m(r, c));
      sys.add_equation(std::move(row));
    }
  }
  return sys.solution_space();
}

/// V_A(B) for an extension, as a subalgebra of A.
template <class F>
Subalgebra<F> centralizer(const Extension<F>& e) {
  return subalgebra(*e.total, centralizer_space(*e.total, e.generator_images()), "V(" + e.name + ")");
}

/// Centralizer of a subspace of A (all of its basis vectors).
template <class F>
Subalgebra<F> centralizer_of(const Algebra<F>& a, const Subspace<F>& v, std::string name = {}) {
  return subalgebra(a, centralizer_space(a, v.basis_vectors()), std::move(name));
}

template <class F>
Subalgebra<F> center(const AlgebraPtr<F>& a) {
  std::vector<Vector<F>> gens;
  for (auto g : a->generators()) gens.push_back(a->basis(g));
  return subalgebra(*a, centralizer_space(*a, gens), "Z(" + a->name() + ")");
}

/// Two-sided ideal generated by the given elements (closure under multiplication by basis elements).
template <class F>
Subspace<F> ideal_generated(const Algebra<F>& a, const std::vector<Vector<F>>& generators) {
  EchelonBasis<F> ideal(a.dim());
  std::vector<Vector<F>> queue = generators;
  while (!queue.empty()) {
    Vector<F> v = std::move(queue.back());
    queue.pop_back();
    if (!ideal.add(v)) continue;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      queue.push_back(a.left_mult(i).apply(v));
      queue.push_back(a.right_mult(i).apply(v));
    }
  }
  return ideal.subspace();
}

template <class F>
bool is_two_sided_ideal(const Algebra<F>& a, const Subspace<F>& v) {
  for (std::size_t k = 0; k < v.dim(); ++k) {
    const auto x = v.basis_vector(k);
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (!v.contains(a.left_mult(i).apply(x)) || !v.contains(a.right_mult(i).apply(x))) return false;
  }
  return true;
}

/// span{x y : x in X, y in Y}.
template <class F>
Subspace<F> product_space(const Algebra<F>& a, const Subspace<F>& x, const Subspace<F>& y) {
  EchelonBasis<F> out(a.dim());
  for (std::size_t i = 0; i < x.dim(); ++i)
    for (std::size_t j = 0; j < y.dim(); ++j) out.add(a.multiply(x.basis_vector(i), y.basis_vector(j)));
  return out.subspace();
}

template <class F>
std::string describe(const Algebra<F>& a) {
  std::ostringstream os;
  os << (a.name().empty() ? "algebra" : a.name()) << " (dim " << a.dim() << ")";
  return os.str();
}

}  // namespace depthtwo
