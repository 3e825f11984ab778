#pragma once

// The B-relative Hochschild cochain complex of an extension with values in A:
// C^n = Hom_{B-B}(A (x)_B ... (x)_B A, A), n factors, C^0 = R.
//
// Coboundary, exactly in the order
//   (d f)(a_1..a_{n+1}) = a_1 f(a_2..a_{n+1}) + (-1)^{n+1} f(a_1..a_n) a_{n+1}
//                         + sum_{i=1..n} (-1)^i f(a_1..a_i a_{i+1}..a_{n+1}),
// cup product (f u g)(a_1..a_{m+n}) = f(a_1..a_m) g(a_{m+1}..a_{m+n}).
// Cochains are evaluated on the section of the iterated tensor power, whose
// basis elements are pure tensors of basis elements of A.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "depthtwo/depth.hpp"

namespace depthtwo {

class DegreeCapExceeded : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

inline constexpr std::size_t kDefaultDegreeCap = 3;

template <class F>
struct Cochain {
  std::size_t degree = 0;
  Vector<F> coords;
};

template <class F>
struct HochschildComplex {
  Extension<F> ext;
  std::size_t cap = kDefaultDegreeCap;
  std::vector<Bimodule<F>> powers;                    // P_n = A^{(x)_B n}, index n >= 1
  std::vector<std::optional<TensorProduct<F>>> tensors;  // P_n = P_{n-1} (x)_B A, n >= 2
  std::vector<std::vector<std::vector<std::size_t>>> sequences;  // basis of P_n -> A basis indices
  std::vector<HomSpace<F>> cochains;                  // C^n as dim A x dim P_n matrices
  std::vector<Matrix<F>> coboundary;                  // d_n : C^n -> C^{n+1} in cochain coordinates

  const Algebra<F>& algebra() const { return *ext.total; }

  std::size_t power_dim(std::size_t n) const { return n == 0 ? 1 : powers[n].dim; }
  std::size_t dim(std::size_t n) const {
    require(n);
    return cochains[n].dim();
  }

  void require(std::size_t n) const {
    if (n > cap) throw DegreeCapExceeded("degree " + std::to_string(n) + " exceeds the degree cap " + std::to_string(cap));
  }

  /// Class of x_1 (x) ... (x) x_n in P_n.
  Vector<F> pure(const std::vector<Vector<F>>& xs) const {
    if (xs.empty()) return Vector<F>{F(1)};
    Vector<F> acc = xs.front();
    for (std::size_t k = 1; k < xs.size(); ++k) acc = tensors[k + 1]->pure(acc, xs[k]);
    return acc;
  }

  Vector<F> pure_indices(const std::vector<std::size_t>& idx) const {
    std::vector<Vector<F>> xs;
    for (auto i : idx) xs.push_back(algebra().basis(i));
    return pure(xs);
  }

  /// Value matrix of a cochain (dim A x dim P_n).
  Matrix<F> matrix(const Cochain<F>& c) const {
    require(c.degree);
    return cochains[c.degree].combination(c.coords);
  }

  Cochain<F> cochain_of(std::size_t n, const Matrix<F>& values) const {
    auto c = cochains[n].coordinates(values);
    if (!c) throw std::logic_error("values do not define a B-B-linear cochain of degree " + std::to_string(n));
    return {n, std::move(*c)};
  }

  Cochain<F> basis_cochain(std::size_t n, std::size_t i) const { return {n, unit_vector<F>(dim(n), i)}; }
};

/// Values of d f on the basis of P_{n+1}, for f given by its values on P_n.
template <class F>
Matrix<F> coboundary_values(const HochschildComplex<F>& h, std::size_t n, const Matrix<F>& f) {
  h.require(n + 1);
  const auto& a = h.algebra();
  const std::size_t dn1 = h.power_dim(n + 1);
  const F last_sign = (n + 1) % 2 == 0 ? F(1) : F(-1);
  Matrix<F> out(a.dim(), dn1);
  for (std::size_t q = 0; q < dn1; ++q) {
    const auto& s = h.sequences[n + 1][q];
    const std::vector<std::size_t> tail(s.begin() + 1, s.end());
    const std::vector<std::size_t> head(s.begin(), s.end() - 1);
    Vector<F> col = a.left_mult(s.front()).apply(f.apply(h.pure_indices(tail)));
    axpy(col, last_sign, a.right_mult(s.back()).apply(f.apply(h.pure_indices(head))));
    for (std::size_t i = 1; i <= n; ++i) {
      std::vector<Vector<F>> xs;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (k == i) continue;
        xs.push_back(k + 1 == i ? a.basis_product(s[k], s[k + 1]) : a.basis(s[k]));
      }
      axpy(col, i % 2 == 0 ? F(1) : F(-1), f.apply(h.pure(xs)));
    }
    for (std::size_t r = 0; r < a.dim(); ++r) out(r, q) = col[r];
  }
  return out;
}

/// Values of f u g on the basis of P_{m+n}.
template <class F>
Matrix<F> cup_values(const HochschildComplex<F>& h, std::size_t m, const Matrix<F>& f, std::size_t n,
                     const Matrix<F>& g) {
  h.require(m + n);
  const auto& a = h.algebra();
  const std::size_t dmn = h.power_dim(m + n);
  Matrix<F> out(a.dim(), dmn);
  for (std::size_t q = 0; q < dmn; ++q) {
    const auto& s = h.sequences[m + n][q];
    const std::vector<std::size_t> left(s.begin(), s.begin() + static_cast<long>(m));
    const std::vector<std::size_t> right(s.begin() + static_cast<long>(m), s.end());
    const auto col = a.multiply(f.apply(h.pure_indices(left)), g.apply(h.pure_indices(right)));
    for (std::size_t r = 0; r < a.dim(); ++r) out(r, q) = col[r];
  }
  return out;
}

template <class F>
HochschildComplex<F> build_hochschild(const Extension<F>& ext, std::size_t cap = kDefaultDegreeCap,
                                      std::size_t guard = kDefaultDimensionGuard) {
  if (cap == 0) throw std::invalid_argument("degree cap must be at least 1");
  HochschildComplex<F> h;
  h.ext = ext;
  h.cap = cap;
  const auto& a = *ext.total;
  h.powers.resize(cap + 1);
  h.tensors.resize(cap + 1);
  h.sequences.resize(cap + 1);
  h.sequences[0] = {{}};
  h.powers[1] = regular_bimodule(ext.total);
  for (std::size_t i = 0; i < a.dim(); ++i) h.sequences[1].push_back({i});
  const Bimodule<F> a_left = restrict_left(regular_bimodule(ext.total), ext);
  for (std::size_t n = 2; n <= cap; ++n) {
    h.tensors[n] = tensor_over(restrict_right(h.powers[n - 1], ext), a_left, guard);
    h.tensors[n]->module.name = "A^" + std::to_string(n);
    h.powers[n] = h.tensors[n]->module;
    for (const auto& [p, b] : h.tensors[n]->section) {
      auto s = h.sequences[n - 1][p];
      s.push_back(b);
      h.sequences[n].push_back(std::move(s));
    }
  }
  // C^0 = R as dim A x 1 matrices
  h.cochains.push_back(HomSpace<F>{1, a.dim(), centralizer(ext).space});
  const Bimodule<F> target = bimodule_over(ext, ext);
  for (std::size_t n = 1; n <= cap; ++n) h.cochains.push_back(hom_space(restrict_both(h.powers[n], ext, ext), target));
  for (std::size_t n = 0; n + 1 <= cap; ++n) {
    Matrix<F> d(h.cochains[n + 1].dim(), h.cochains[n].dim());
    for (std::size_t k = 0; k < h.cochains[n].dim(); ++k) {
      const auto c = h.cochain_of(n + 1, coboundary_values(h, n, h.cochains[n].map(k)));
      for (std::size_t r = 0; r < c.coords.size(); ++r) d(r, k) = c.coords[r];
    }
    h.coboundary.push_back(std::move(d));
  }
  return h;
}

template <class F>
Cochain<F> coboundary(const HochschildComplex<F>& h, const Cochain<F>& f) {
  h.require(f.degree + 1);
  return {f.degree + 1, h.coboundary[f.degree].apply(f.coords)};
}

template <class F>
Cochain<F> cup(const HochschildComplex<F>& h, const Cochain<F>& f, const Cochain<F>& g) {
  h.require(f.degree + g.degree);
  return h.cochain_of(f.degree + g.degree, cup_values(h, f.degree, h.matrix(f), g.degree, h.matrix(g)));
}

/// Unit of the DGA: 1_A as a degree-zero cochain.
template <class F>
Cochain<F> unit_cochain(const HochschildComplex<F>& h) {
  auto c = h.cochains[0].coordinates(Matrix<F>::from_columns({h.algebra().unit()}, h.algebra().dim()));
  return {0, *c};
}

/// d_{n+1} d_n = 0 for every n with n + 2 <= cap.
template <class F>
bool coboundary_squares_to_zero(const HochschildComplex<F>& h) {
  for (std::size_t n = 0; n + 2 <= h.cap; ++n)
    if (!(h.coboundary[n + 1] * h.coboundary[n]).is_zero()) return false;
  return true;
}

/// Ranks of d_n and dims of H^n = ker d_n / im d_{n-1} for n < cap.
struct CohomologyDims {
  std::vector<std::size_t> cochain_dims;
  std::vector<std::size_t> coboundary_ranks;
  std::vector<std::size_t> cohomology;
};

template <class F>
CohomologyDims cohomology_dims(const HochschildComplex<F>& h) {
  CohomologyDims out;
  for (std::size_t n = 0; n <= h.cap; ++n) out.cochain_dims.push_back(h.dim(n));
  for (const auto& d : h.coboundary) out.coboundary_ranks.push_back(rank(d));
  for (std::size_t n = 0; n < h.cap; ++n) {
    const std::size_t ker = h.dim(n) - out.coboundary_ranks[n];
    const std::size_t im = n == 0 ? 0 : out.coboundary_ranks[n - 1];
    out.cohomology.push_back(ker - im);
  }
  return out;
}

struct LeibnizReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string message;
};

/// d(f u g) = (d f) u g + (-1)^m f u (d g) on all pairs of basis cochains with m + n + 1 <= cap.
template <class F>
LeibnizReport check_leibniz(const HochschildComplex<F>& h) {
  LeibnizReport rep;
  for (std::size_t m = 0; m <= h.cap; ++m)
    for (std::size_t n = 0; m + n + 1 <= h.cap; ++n)
      for (std::size_t i = 0; i < h.dim(m); ++i)
        for (std::size_t j = 0; j < h.dim(n); ++j) {
          const auto f = h.basis_cochain(m, i), g = h.basis_cochain(n, j);
          const auto lhs = coboundary(h, cup(h, f, g));
          auto rhs = cup(h, coboundary(h, f), g).coords;
          axpy(rhs, m % 2 == 0 ? F(1) : F(-1), cup(h, f, coboundary(h, g)).coords);
          ++rep.checked;
          if (lhs.coords != rhs) {
            rep.ok = false;
            rep.message = "Leibniz identity fails for basis cochains (" + std::to_string(m) + "," + std::to_string(i) +
                          ") and (" + std::to_string(n) + "," + std::to_string(j) + ")";
            return rep;
          }
        }
  return rep;
}

// ---------------------------------------------------------------- generation by degree one

template <class F>
struct GenerationReport {
  std::size_t degree = 0;
  std::size_t tensor_dim = 0;   // dim S (x)_R ... (x)_R S
  std::size_t cochain_dim = 0;  // dim C^n
  Matrix<F> forward;            // cup product, cochain coords x tensor coords
  Matrix<F> inverse;            // quasibase inverse, tensor coords x cochain coords
  bool forward_then_inverse = false;  // inverse * forward = id
  bool inverse_then_forward = false;  // forward * inverse = id
  bool verified() const { return forward_then_inverse && inverse_then_forward; }
};

/// S (x)_R ... (x)_R S (n factors), built as S (x)_R (previous).
template <class F>
struct SPower {
  std::vector<Bimodule<F>> modules;                      // index n >= 1
  std::vector<std::optional<TensorProduct<F>>> tensors;  // n >= 2
  std::vector<std::vector<std::vector<std::size_t>>> sequences;
};

template <class F>
SPower<F> s_tensor_powers(const EndAlgebra<F>& s, std::size_t n, std::size_t guard = kDefaultDimensionGuard) {
  SPower<F> p;
  p.modules.resize(n + 1);
  p.tensors.resize(n + 1);
  p.sequences.resize(n + 1);
  p.modules[1] = s.rr;
  for (std::size_t k = 0; k < s.dim(); ++k) p.sequences[1].push_back({k});
  for (std::size_t m = 2; m <= n; ++m) {
    p.tensors[m] = tensor_over(s.rr, p.modules[m - 1], guard);
    p.modules[m] = p.tensors[m]->module;
    for (const auto& [k, rest] : p.tensors[m]->section) {
      std::vector<std::size_t> seq{k};
      const auto& tail = p.sequences[m - 1][rest];
      seq.insert(seq.end(), tail.begin(), tail.end());
      p.sequences[m].push_back(std::move(seq));
    }
  }
  return p;
}

/// alpha_1 u ... u alpha_n  <->  sum_j gamma_j (x)_R inv(u_j^1 f(u_j^2 (x) -)), from a right D2 quasibase.
template <class F>
GenerationReport<F> generation_isomorphism(const HochschildComplex<F>& h, const EndAlgebra<F>& s,
                                           const TensorSquare<F>& ts, const QuasibaseCertificate<F>& right_cert,
                                           std::size_t n, std::size_t guard = kDefaultDimensionGuard) {
  if (n == 0) throw std::invalid_argument("generation isomorphism starts in degree 1");
  h.require(n);
  if (right_cert.side != Side::Right) throw std::invalid_argument("generation isomorphism needs a right D2 quasibase");
  if (auto v = verify_quasibase(ts, right_cert); !v) throw std::invalid_argument("quasibase rejected: " + v.message);
  const auto& a = h.algebra();
  const auto powers = s_tensor_powers(s, n, guard);
  GenerationReport<F> rep;
  rep.degree = n;
  rep.tensor_dim = powers.modules[n].dim;
  rep.cochain_dim = h.dim(n);

  std::vector<Matrix<F>> s_maps = s.space.maps();
  rep.forward = Matrix<F>(rep.cochain_dim, rep.tensor_dim);
  for (std::size_t q = 0; q < rep.tensor_dim; ++q) {
    const auto& seq = powers.sequences[n][q];
    Matrix<F> acc = s_maps[seq.back()];
    for (std::size_t k = seq.size() - 1; k-- > 0;) acc = cup_values(h, 1, s_maps[seq[k]], seq.size() - 1 - k, acc);
    const auto c = h.cochain_of(n, acc);
    for (std::size_t r = 0; r < rep.cochain_dim; ++r) rep.forward(r, q) = c.coords[r];
  }

  // u_j as lists of (coefficient, u^1, u^2)
  struct Term {
    F c;
    std::size_t x, y;
  };
  std::vector<std::vector<Term>> u;
  std::vector<Vector<F>> gamma;
  for (std::size_t j = 0; j < right_cert.count(); ++j) {
    std::vector<Term> terms;
    for (std::size_t q = 0; q < ts.dim(); ++q)
      if (!right_cert.t[j][q].is_zero()) terms.push_back({right_cert.t[j][q], ts.tensor.section[q].first, ts.tensor.section[q].second});
    u.push_back(std::move(terms));
    auto g = s.coordinates(right_cert.beta[j]);
    if (!g) throw std::logic_error("quasibase endomorphism outside S");
    gamma.push_back(std::move(*g));
  }
  std::function<Vector<F>(std::size_t, const Matrix<F>&)> inverse = [&](std::size_t m, const Matrix<F>& f) {
    if (m == 1) {
      auto c = s.coordinates(f);
      if (!c) throw std::logic_error("degree-one cochain outside S");
      return *c;
    }
    Vector<F> out(powers.modules[m].dim, F(0));
    for (std::size_t j = 0; j < u.size(); ++j) {
      // g_j(a_2..a_m) = sum u^1 f(u^2 (x) a_2 (x) ... (x) a_m)
      const std::size_t dp = h.power_dim(m - 1);
      Matrix<F> g(a.dim(), dp);
      for (std::size_t p = 0; p < dp; ++p) {
        Vector<F> col(a.dim(), F(0));
        for (const auto& t : u[j]) {
          std::vector<Vector<F>> xs{a.basis(t.y)};
          for (auto idx : h.sequences[m - 1][p]) xs.push_back(a.basis(idx));
          axpy(col, t.c, a.left_mult(t.x).apply(f.apply(h.pure(xs))));
        }
        for (std::size_t r = 0; r < a.dim(); ++r) g(r, p) = col[r];
      }
      axpy(out, F(1), powers.tensors[m]->pure(gamma[j], inverse(m - 1, g)));
    }
    return out;
  };
  rep.inverse = Matrix<F>(rep.tensor_dim, rep.cochain_dim);
  for (std::size_t k = 0; k < rep.cochain_dim; ++k) {
    const auto v = inverse(n, h.cochains[n].map(k));
    for (std::size_t r = 0; r < rep.tensor_dim; ++r) rep.inverse(r, k) = v[r];
  }
  rep.forward_then_inverse = (rep.inverse * rep.forward).is_identity();
  rep.inverse_then_forward = (rep.forward * rep.inverse).is_identity();
  return rep;
}

}  // namespace depthtwo
