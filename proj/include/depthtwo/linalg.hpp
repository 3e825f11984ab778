#pragma once

// Dense exact linear algebra: matrices, canonical reduced row echelon form,
// subspaces kept in canonical form, and two elimination engines used by the
// hom-space solvers (an incremental dense echelon basis and a sparse
// equation accumulator).
//
// Conventions: a linear map V -> W is a dim(W) x dim(V) matrix whose j-th
// column is the image of the j-th basis vector.  Subspace bases are the rows
// of their reduced row echelon form, so two equal subspaces have identical
// bases.  Pivot rule: leftmost column, topmost row.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "depthtwo/field.hpp"

namespace depthtwo {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class F>
using Vector = std::vector<F>;

template <class F>
Vector<F> zero_vector(std::size_t n) {
  return Vector<F>(n, F(0));
}

template <class F>
Vector<F> unit_vector(std::size_t n, std::size_t i) {
  Vector<F> v(n, F(0));
  v.at(i) = F(1);
  return v;
}

template <class F>
bool is_zero(std::span<const F> v) {
  return std::all_of(v.begin(), v.end(), [](const F& x) { return x.is_zero(); });
}

template <class F>
bool is_zero(const Vector<F>& v) {
  return is_zero(std::span<const F>(v));
}

/// y += a * x
template <class F>
void axpy(Vector<F>& y, const F& a, std::span<const F> x) {
  if (y.size() != x.size()) throw DimensionMismatch("axpy: length mismatch");
  if (a.is_zero()) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) y[i] += a * x[i];
}

template <class F>
void axpy(Vector<F>& y, const F& a, const Vector<F>& x) {
  axpy(y, a, std::span<const F>(x));
}

template <class F>
Vector<F> operator+(Vector<F> a, const Vector<F>& b) {
  axpy(a, F(1), b);
  return a;
}

template <class F>
Vector<F> operator-(Vector<F> a, const Vector<F>& b) {
  axpy(a, F(-1), b);
  return a;
}

template <class F>
Vector<F> scaled(Vector<F> v, const F& a) {
  for (auto& x : v) x *= a;
  return v;
}

template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, F(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  static Matrix from_rows(const std::vector<Vector<F>>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionMismatch("from_rows: ragged rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * cols));
    }
    return m;
  }

  static Matrix from_columns(const std::vector<Vector<F>>& columns, std::size_t rows) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw DimensionMismatch("from_columns: ragged columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  /// Row-major flattening back into a matrix.
  static Matrix from_flat(std::size_t rows, std::size_t cols, std::span<const F> flat) {
    if (flat.size() != rows * cols) throw DimensionMismatch("from_flat: wrong length");
    Matrix m(rows, cols);
    std::copy(flat.begin(), flat.end(), m.data_.begin());
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  F& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const F> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<F> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  Vector<F> row_vector(std::size_t i) const { return Vector<F>(row(i).begin(), row(i).end()); }

  Vector<F> column(std::size_t j) const {
    Vector<F> c;
    c.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c.push_back((*this)(i, j));
    return c;
  }

  const Vector<F>& flat() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const { return depthtwo::is_zero(data_); }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if ((*this)(i, j) != (i == j ? F(1) : F(0))) return false;
    return true;
  }

  Vector<F> apply(std::span<const F> v) const {
    if (v.size() != cols_) throw DimensionMismatch("apply: vector length " + std::to_string(v.size()) +
                                                   " vs " + std::to_string(cols_) + " columns");
    Vector<F> out(rows_, F(0));
    for (std::size_t j = 0; j < cols_; ++j) {
      if (v[j].is_zero()) continue;
      for (std::size_t i = 0; i < rows_; ++i) {
        const F& a = (*this)(i, j);
        if (!a.is_zero()) out[i] += a * v[j];
      }
    }
    return out;
  }
  Vector<F> apply(const Vector<F>& v) const { return apply(std::span<const F>(v)); }

  Matrix& operator+=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (!o.data_[k].is_zero()) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (!o.data_[k].is_zero()) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const F& a) {
    for (auto& x : data_) x *= a;
    return *this;
  }

  /// this += a * o
  void add_scaled(const F& a, const Matrix& o) {
    check_same_shape(o);
    if (a.is_zero()) return;
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (!o.data_[k].is_zero()) data_[k] += a * o.data_[k];
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const F& s) { return a *= s; }
  friend Matrix operator*(const F& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_)
      throw DimensionMismatch("matrix product " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) + " * " +
                              std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const F& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const F& y = b(k, j);
          if (!y.is_zero()) c(i, j) += x * y;
        }
      }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  void check_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector<F> data_;
};

/// Kronecker product: (A (x) B)[(i,k),(j,l)] = A[i][j] B[k][l], lexicographic indices.
template <class F>
Matrix<F> kron(const Matrix<F>& a, const Matrix<F>& b) {
  Matrix<F> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const F& x = a(i, j);
      if (x.is_zero()) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          if (!b(p, q).is_zero()) k(i * b.rows() + p, j * b.cols() + q) = x * b(p, q);
    }
  return k;
}

/// Direct sum of two matrices (block diagonal).
template <class F>
Matrix<F> block_diagonal(const Matrix<F>& a, const Matrix<F>& b) {
  Matrix<F> m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

template <class F>
struct RrefResult {
  Matrix<F> reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

template <class F>
RrefResult<F> rref(Matrix<F> m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const F inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const F f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  return rref(m).rank();
}

/// A subspace of F^n stored as the canonical RREF of a spanning set.
template <class F>
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

  static Subspace zero(std::size_t ambient) { return Subspace(ambient); }

  static Subspace full(std::size_t ambient) {
    Subspace s(ambient);
    s.basis_ = Matrix<F>::identity(ambient);
    for (std::size_t i = 0; i < ambient; ++i) s.pivots_.push_back(i);
    return s;
  }

  static Subspace span(std::size_t ambient, const std::vector<Vector<F>>& vectors) {
    if (vectors.empty()) return Subspace(ambient);
    auto r = rref(Matrix<F>::from_rows(vectors, ambient));
    return from_reduced(ambient, r);
  }

  static Subspace row_space(const Matrix<F>& m) {
    auto r = rref(m);
    return from_reduced(m.cols(), r);
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return pivots_.size(); }
  const Matrix<F>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  Vector<F> basis_vector(std::size_t i) const { return basis_.row_vector(i); }

  std::vector<Vector<F>> basis_vectors() const {
    std::vector<Vector<F>> out;
    for (std::size_t i = 0; i < dim(); ++i) out.push_back(basis_vector(i));
    return out;
  }

  /// Entries at the pivot columns: the coordinates of v when v lies in the
  /// subspace, and a fixed linear extension of the coordinate map otherwise.
  Vector<F> pivot_coordinates(std::span<const F> v) const {
    check(v.size());
    Vector<F> c;
    c.reserve(dim());
    for (auto p : pivots_) c.push_back(v[p]);
    return c;
  }

  std::optional<Vector<F>> coordinates(std::span<const F> v) const {
    auto c = pivot_coordinates(v);
    if (element(c) != Vector<F>(v.begin(), v.end())) return std::nullopt;
    return c;
  }
  std::optional<Vector<F>> coordinates(const Vector<F>& v) const { return coordinates(std::span<const F>(v)); }

  bool contains(std::span<const F> v) const { return coordinates(v).has_value(); }
  bool contains(const Vector<F>& v) const { return contains(std::span<const F>(v)); }

  bool contains(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionMismatch("subspaces in different ambient spaces");
    for (std::size_t i = 0; i < other.dim(); ++i)
      if (!contains(other.basis_.row(i))) return false;
    return true;
  }

  Vector<F> element(std::span<const F> coords) const {
    if (coords.size() != dim()) throw DimensionMismatch("coordinate vector has wrong length");
    Vector<F> v(ambient_, F(0));
    for (std::size_t i = 0; i < dim(); ++i) axpy(v, coords[i], basis_.row(i));
    return v;
  }
  Vector<F> element(const Vector<F>& coords) const { return element(std::span<const F>(coords)); }

  Subspace plus(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw DimensionMismatch("subspaces in different ambient spaces");
    auto vs = basis_vectors();
    auto ws = other.basis_vectors();
    vs.insert(vs.end(), ws.begin(), ws.end());
    return span(ambient_, vs);
  }

  Subspace intersect(const Subspace& other) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.pivots_ == b.pivots_ && a.basis_ == b.basis_;
  }

 private:
  static Subspace from_reduced(std::size_t ambient, const RrefResult<F>& r) {
    Subspace s(ambient);
    s.pivots_ = r.pivots;
    s.basis_ = Matrix<F>(r.rank(), ambient);
    for (std::size_t i = 0; i < r.rank(); ++i)
      for (std::size_t j = 0; j < ambient; ++j) s.basis_(i, j) = r.reduced(i, j);
    return s;
  }

  void check(std::size_t n) const {
    if (n != ambient_)
      throw DimensionMismatch("vector of length " + std::to_string(n) + " in ambient dimension " +
                              std::to_string(ambient_));
  }

  std::size_t ambient_ = 0;
  Matrix<F> basis_;
  std::vector<std::size_t> pivots_;
};

/// Null space {x : m x = 0}.
template <class F>
Subspace<F> kernel(const Matrix<F>& m) {
  const auto r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<Vector<F>> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector<F> v(m.cols(), F(0));
    v[f] = F(1);
    for (std::size_t i = 0; i < r.rank(); ++i) v[r.pivots[i]] = -r.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return Subspace<F>::span(m.cols(), basis);
}

/// Column space of m as a subspace of F^{rows}.
template <class F>
Subspace<F> image(const Matrix<F>& m) {
  return Subspace<F>::row_space(m.transpose());
}

template <class F>
Subspace<F> Subspace<F>::intersect(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw DimensionMismatch("subspaces in different ambient spaces");
  if (dim() == 0 || other.dim() == 0) return Subspace(ambient_);
  // x = sum a_i u_i lies in `other` iff x - other.element(pivot_coordinates(x)) = 0.
  Matrix<F> cond(ambient_, dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    auto u = basis_vector(i);
    auto residual = u - other.element(other.pivot_coordinates(u));
    for (std::size_t r = 0; r < ambient_; ++r) cond(r, i) = residual[r];
  }
  auto k = kernel(cond);
  std::vector<Vector<F>> vs;
  for (std::size_t i = 0; i < k.dim(); ++i) vs.push_back(element(k.basis_vector(i)));
  return span(ambient_, vs);
}

/// Particular solution of m x = b (free variables set to zero), if any.
template <class F>
std::optional<Vector<F>> solve_linear(const Matrix<F>& m, std::span<const F> b) {
  if (b.size() != m.rows()) throw DimensionMismatch("solve_linear: right-hand side length");
  Matrix<F> aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto r = rref(std::move(aug));
  if (!r.pivots.empty() && r.pivots.back() == m.cols()) return std::nullopt;
  Vector<F> x(m.cols(), F(0));
  for (std::size_t i = 0; i < r.rank(); ++i) x[r.pivots[i]] = r.reduced(i, m.cols());
  return x;
}

template <class F>
std::optional<Vector<F>> solve_linear(const Matrix<F>& m, const Vector<F>& b) {
  return solve_linear(m, std::span<const F>(b));
}

/// Coefficients c with sum c_i v_i = target, or nullopt when target is not in the span.
template <class F>
std::optional<Vector<F>> solve_membership(const std::vector<Vector<F>>& span_vectors, const Vector<F>& target) {
  for (const auto& v : span_vectors)
    if (v.size() != target.size()) throw DimensionMismatch("solve_membership: vectors of different lengths");
  if (span_vectors.empty()) {
    if (is_zero(target)) return Vector<F>{};
    return std::nullopt;
  }
  return solve_linear(Matrix<F>::from_columns(span_vectors, target.size()), std::span<const F>(target));
}

/// Incrementally grown echelon basis (forward elimination only).
template <class F>
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t n) : n_(n), row_of_pivot_(n, -1) {}

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return rows_.size(); }

  Vector<F> reduce(Vector<F> v) const {
    if (v.size() != n_) throw DimensionMismatch("echelon basis: wrong vector length");
    for (std::size_t c = 0; c < n_; ++c) {
      if (v[c].is_zero() || row_of_pivot_[c] < 0) continue;
      const F f = v[c];
      axpy(v, -f, rows_[static_cast<std::size_t>(row_of_pivot_[c])]);
    }
    return v;
  }

  bool contains(const Vector<F>& v) const { return is_zero(reduce(v)); }

  /// Returns true when v enlarged the span.
  bool add(const Vector<F>& v) {
    auto r = reduce(v);
    auto lead = std::find_if(r.begin(), r.end(), [](const F& x) { return !x.is_zero(); });
    if (lead == r.end()) return false;
    const auto c = static_cast<std::size_t>(lead - r.begin());
    const F inv = lead->inverse();
    for (auto& x : r) x *= inv;
    row_of_pivot_[c] = static_cast<long>(rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

  Subspace<F> subspace() const { return Subspace<F>::span(n_, rows_); }

 private:
  std::size_t n_;
  std::vector<long> row_of_pivot_;
  std::vector<Vector<F>> rows_;
};

/// Accumulates sparse homogeneous linear equations in n unknowns and returns
/// the solution space.  Rows are eliminated as they arrive, so redundant
/// equations cost one reduction and no storage.
template <class F>
class SparseSystem {
 public:
  using Entry = std::pair<std::uint32_t, F>;
  using Row = std::vector<Entry>;

  explicit SparseSystem(std::size_t unknowns) : n_(unknowns), row_of_pivot_(unknowns, -1) {}

  std::size_t unknowns() const { return n_; }
  std::size_t rank() const { return rows_.size(); }
  bool saturated() const { return rows_.size() == n_; }

  /// Entries may be unsorted and contain repeated columns; they are combined.
  void add_equation(Row row) {
    if (saturated()) return;
    normalize(row);
    reduce(row);
    if (row.empty()) return;
    const F inv = row.front().second.inverse();
    for (auto& e : row) e.second *= inv;
    row_of_pivot_[row.front().first] = static_cast<long>(rows_.size());
    rows_.push_back(std::move(row));
  }

  /// Fully reduced echelon rows, ordered by pivot column.
  struct Reduced {
    std::vector<std::size_t> pivots;
    std::vector<Row> rows;
  };

  Reduced reduced() const {
    // Back substitution in decreasing pivot order.
    std::vector<Row> by_index(rows_.size());
    std::vector<std::size_t> pivot_cols;
    for (std::size_t c = 0; c < n_; ++c)
      if (row_of_pivot_[c] >= 0) pivot_cols.push_back(c);
    Vector<F> dense(n_, F(0));
    for (auto it = pivot_cols.rbegin(); it != pivot_cols.rend(); ++it) {
      const auto idx = static_cast<std::size_t>(row_of_pivot_[*it]);
      for (const auto& [c, v] : rows_[idx]) dense[c] = v;
      for (const auto& [c, v] : rows_[idx]) {
        if (c == *it || row_of_pivot_[c] < 0 || dense[c].is_zero()) continue;
        const F f = dense[c];
        for (const auto& [c2, v2] : by_index[static_cast<std::size_t>(row_of_pivot_[c])]) dense[c2] -= f * v2;
      }
      Row out;
      for (std::size_t c = *it; c < n_; ++c)
        if (!dense[c].is_zero()) {
          out.emplace_back(static_cast<std::uint32_t>(c), dense[c]);
          dense[c] = F(0);
        }
      by_index[idx] = std::move(out);
    }
    Reduced r;
    r.pivots = pivot_cols;
    for (auto p : pivot_cols) r.rows.push_back(std::move(by_index[static_cast<std::size_t>(row_of_pivot_[p])]));
    return r;
  }

  /// True when column c carries a pivot of the equations seen so far.
  bool is_pivot(std::size_t c) const { return row_of_pivot_[c] >= 0; }

  Subspace<F> solution_space() const {
    const Reduced red = reduced();
    std::vector<long> free_index(n_, -1);
    std::vector<Vector<F>> basis;
    for (std::size_t f = 0; f < n_; ++f) {
      if (row_of_pivot_[f] >= 0) continue;
      free_index[f] = static_cast<long>(basis.size());
      Vector<F> v(n_, F(0));
      v[f] = F(1);
      basis.push_back(std::move(v));
    }
    // Column f of each reduced pivot row feeds the kernel vector of free column f.
    for (std::size_t k = 0; k < red.pivots.size(); ++k)
      for (const auto& [c, v] : red.rows[k]) {
        if (c == red.pivots[k]) continue;
        basis[static_cast<std::size_t>(free_index[c])][red.pivots[k]] = -v;
      }
    return Subspace<F>::span(n_, basis);
  }

 private:
  static void normalize(Row& row) {
    std::sort(row.begin(), row.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Row merged;
    for (auto& e : row) {
      if (!merged.empty() && merged.back().first == e.first)
        merged.back().second += e.second;
      else
        merged.push_back(std::move(e));
    }
    std::erase_if(merged, [](const Entry& e) { return e.second.is_zero(); });
    row = std::move(merged);
  }

  void reduce(Row& row) const {
    while (!row.empty()) {
      std::size_t k = 0;
      while (k < row.size() && row_of_pivot_[row[k].first] < 0) ++k;
      if (k == row.size()) break;
      const F f = row[k].second;
      const Row& p = rows_[static_cast<std::size_t>(row_of_pivot_[row[k].first])];
      row = combine(row, p, -f);
    }
  }

  static Row combine(const Row& a, const Row& b, const F& s) {
    Row out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
      if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
        out.push_back(a[i++]);
      } else if (i == a.size() || b[j].first < a[i].first) {
        out.emplace_back(b[j].first, s * b[j].second);
        ++j;
      } else {
        F v = a[i].second + s * b[j].second;
        if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
        ++i;
        ++j;
      }
    }
    return out;
  }

  std::size_t n_;
  std::vector<long> row_of_pivot_;
  std::vector<Row> rows_;
};

}  // namespace depthtwo
