#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "depthtwo/linalg.hpp"

using namespace depthtwo;
using Q = Rational;
using MQ = Matrix<Q>;

namespace {

MQ from_ints(const std::vector<std::vector<long>>& rows) {
  MQ m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = Q(rows[i][j]);
  return m;
}

// Oracle: determinant by cofactor expansion, no elimination involved.
Q det_cofactor(const MQ& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  Q total(0);
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    MQ minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    Q term = m(0, j) * det_cofactor(minor);
    total += (j % 2 == 0) ? term : -term;
  }
  return total;
}

bool next_subset(std::vector<std::size_t>& s, std::size_t n) {
  const std::size_t k = s.size();
  for (std::size_t i = k; i-- > 0;) {
    if (s[i] < n - k + i) {
      ++s[i];
      for (std::size_t j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Oracle: largest k with a nonzero k x k minor.
std::size_t rank_by_minors(const MQ& m) {
  for (std::size_t k = std::min(m.rows(), m.cols()); k > 0; --k) {
    std::vector<std::size_t> rs(k), cs(k);
    std::iota(rs.begin(), rs.end(), 0);
    do {
      std::iota(cs.begin(), cs.end(), 0);
      do {
        MQ sub(k, k);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) sub(a, b) = m(rs[a], cs[b]);
        if (!det_cofactor(sub).is_zero()) return k;
      } while (next_subset(cs, m.cols()));
    } while (next_subset(rs, m.rows()));
  }
  return 0;
}

MQ random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo = -3, int hi = 3) {
  std::uniform_int_distribution<int> d(lo, hi);
  MQ m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Q(d(rng));
  return m;
}

}  // namespace

TEST(Rref, IdentityIsFixed) {
  auto r = rref(MQ::identity(2));
  EXPECT_EQ(r.reduced, MQ::identity(2));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0, 1}));
}

TEST(Rref, RankOneExample) {
  auto r = rref(from_ints({{2, 4}, {1, 2}}));
  EXPECT_EQ(r.reduced, from_ints({{1, 2}, {0, 0}}));
  EXPECT_EQ(r.pivots, (std::vector<std::size_t>{0}));
}

TEST(Rref, RandomRankThreeMatchesMinorOracle) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    MQ m = random_matrix(rng, 5, 3) * random_matrix(rng, 3, 7);
    auto r = rref(m);
    EXPECT_EQ(r.rank(), rank_by_minors(m));
    EXPECT_TRUE(std::is_sorted(r.pivots.begin(), r.pivots.end()));
    EXPECT_EQ(std::adjacent_find(r.pivots.begin(), r.pivots.end()), r.pivots.end());
  }
  MQ m = from_ints({{1, 2, 0, 1, 0, 3, 1}, {0, 1, 1, 0, 2, 0, 1}, {1, 0, 1, 2, 1, 1, 0},
                    {2, 2, 1, 3, 1, 4, 1}, {1, 1, 2, 2, 3, 1, 1}});
  EXPECT_EQ(rank_by_minors(m), 3u);
  EXPECT_EQ(rref(m).rank(), 3u);
}

TEST(Rref, IdempotentAndRowPermutationInvariant) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    MQ m = random_matrix(rng, 4, 3) * random_matrix(rng, 3, 6);
    auto r = rref(m);
    EXPECT_EQ(rref(r.reduced).reduced, r.reduced);
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    MQ p(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) p(i, j) = m(perm[i], j);
    EXPECT_EQ(rref(p).reduced, r.reduced);
  }
}

TEST(Kernel, TrivialCases) {
  EXPECT_EQ(kernel(MQ(3, 3)).dim(), 3u);
  EXPECT_EQ(kernel(MQ::identity(3)).dim(), 0u);
  auto k = kernel(from_ints({{1, 1}}));
  ASSERT_EQ(k.dim(), 1u);
  EXPECT_EQ(k.basis_vector(0), (Vector<Q>{Q(1), Q(-1)}));
}

TEST(Kernel, RankNullityAndAnnihilation) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    MQ m = random_matrix(rng, 4, 2) * random_matrix(rng, 2, 6);
    auto k = kernel(m);
    EXPECT_EQ(k.dim() + rank(m), m.cols());
    for (std::size_t i = 0; i < k.dim(); ++i) EXPECT_TRUE(is_zero(m.apply(k.basis_vector(i))));
  }
}

TEST(SolveMembership, Basic) {
  std::vector<Vector<Q>> span{{Q(1), Q(0)}, {Q(0), Q(1)}};
  auto c = solve_membership(span, Vector<Q>{Q(1), Q(3)});
  ASSERT_TRUE(c);
  EXPECT_EQ(*c, (Vector<Q>{Q(1), Q(3)}));
  EXPECT_FALSE(solve_membership(std::vector<Vector<Q>>{{Q(1), Q(0)}}, Vector<Q>{Q(0), Q(1)}));
  EXPECT_THROW(solve_membership(span, Vector<Q>{Q(1)}), DimensionMismatch);
}

TEST(SolveMembership, RandomCombinationRecoveredBySubstitution) {
  std::mt19937 rng(5);
  std::vector<Vector<Q>> vs;
  MQ gen = random_matrix(rng, 10, 4) * random_matrix(rng, 4, 8);
  for (std::size_t i = 0; i < 10; ++i) vs.push_back(gen.row_vector(i));
  Vector<Q> target(8, Q(0));
  std::uniform_int_distribution<int> d(-5, 5);
  for (auto& v : vs) axpy(target, Q(d(rng), 3), v);
  auto c = solve_membership(vs, target);
  ASSERT_TRUE(c);
  Vector<Q> back(8, Q(0));
  for (std::size_t i = 0; i < vs.size(); ++i) axpy(back, (*c)[i], vs[i]);
  EXPECT_EQ(back, target);
}

TEST(Subspace, SumIntersectionDimensionFormula) {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    auto u = Subspace<Q>::row_space(random_matrix(rng, 3, 6, -1, 1));
    auto v = Subspace<Q>::row_space(random_matrix(rng, 4, 6, -1, 1));
    auto s = u.plus(v);
    auto i = u.intersect(v);
    EXPECT_EQ(s.dim() + i.dim(), u.dim() + v.dim());
    EXPECT_TRUE(u.contains(i));
    EXPECT_TRUE(v.contains(i));
    EXPECT_TRUE(s.contains(u));
  }
}

TEST(SparseSystem, AgreesWithDenseKernel) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    MQ m = random_matrix(rng, 7, 3, -2, 2) * random_matrix(rng, 3, 9, -2, 2);
    SparseSystem<Q> sys(9);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      SparseSystem<Q>::Row row;
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (!m(i, j).is_zero()) row.emplace_back(static_cast<std::uint32_t>(j), m(i, j));
      sys.add_equation(row);
    }
    EXPECT_EQ(sys.solution_space(), kernel(m));
  }
}

TEST(EchelonBasis, RankMatches) {
  std::mt19937 rng(29);
  MQ m = random_matrix(rng, 8, 3) * random_matrix(rng, 3, 5);
  EchelonBasis<Q> e(5);
  for (std::size_t i = 0; i < m.rows(); ++i) e.add(m.row_vector(i));
  EXPECT_EQ(e.dim(), rank(m));
  EXPECT_EQ(e.subspace(), Subspace<Q>::row_space(m));
}

TEST(PrimeField, ArithmeticAndMismatch) {
  ModP::Context ctx(5);
  ModP a(3), b(4);
  EXPECT_EQ((a * b).value(), 2u);
  EXPECT_EQ((a / b * b), a);
  EXPECT_EQ(ModP::parse("1/2").value(), 3u);
  EXPECT_THROW(ModP::parse("1/5"), ParseError);
  ModP other(1, 7);
  EXPECT_THROW(a + other, FieldMismatch);
  Matrix<ModP> m(2, 2);
  m(0, 0) = ModP(2);
  m(0, 1) = ModP(4);
  m(1, 0) = ModP(1);
  m(1, 1) = ModP(2);
  EXPECT_EQ(rref(m).rank(), 1u);
}

TEST(Rational, CanonicalForm) {
  EXPECT_EQ(Q::parse("4/-6").to_string(), "-2/3");
  EXPECT_EQ(Q(6, 3).to_string(), "2");
  EXPECT_THROW(Q::parse("1/0"), ParseError);
  EXPECT_THROW(Q::parse("x"), ParseError);
}
