#include <gtest/gtest.h>

#include <random>

#include "depthtwo/constructions.hpp"

using namespace depthtwo;
using Q = Rational;

namespace {

using Units = std::vector<std::pair<std::size_t, std::size_t>>;

Units diagonal_units(std::size_t n) {
  Units u;
  for (std::size_t i = 0; i < n; ++i) u.emplace_back(i, i);
  return u;
}

Units triangular_units(std::size_t n) {
  Units u;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) u.emplace_back(i, j);
  return u;
}

// Oracle: A (x)_D A over the diagonal idempotents splits as sum_i A e_i (x) e_i A.
std::size_t peirce_tensor_dim(const Units& a, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t col = 0, row = 0;
    for (auto [r, c] : a) {
      col += c == i;
      row += r == i;
    }
    total += col * row;
  }
  return total;
}

// Oracle: End of A over the diagonal, sum over corners of dim(e_i A e_j)^2.
std::size_t corner_end_dim(const Units& a, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t d = 0;
      for (auto [r, c] : a) d += (r == i && c == j);
      total += d * d;
    }
  return total;
}

Matrix<Q> random_invertible(std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> dist(-3, 3);
  while (true) {
    Matrix<Q> m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = Q(dist(rng));
    if (rank(m) == n) return m;
  }
}

Matrix<Q> inverse(const Matrix<Q>& m) {
  const std::size_t n = m.rows();
  std::vector<Vector<Q>> cols;
  for (std::size_t j = 0; j < n; ++j) cols.push_back(*solve_linear(m, unit_vector<Q>(n, j)));
  return Matrix<Q>::from_columns(cols, n);
}

Representation<Q> regular_left(const AlgebraPtr<Q>& a) {
  Representation<Q> r{a->dim(), {}, {{'L', a}}};
  for (std::size_t i = 0; i < a->dim(); ++i) r.ops.push_back(a->left_mult(i));
  return r;
}

}  // namespace

TEST(Algebra, MatrixAlgebrasValidate) {
  for (std::size_t n : {1u, 2u, 3u}) EXPECT_TRUE(validate_algebra(matrix_algebra<Q>(n)));
  auto fam = build_matrix_family<Q>(3);
  EXPECT_TRUE(validate_extension(fam.full_over_diagonal));
  EXPECT_TRUE(validate_extension(fam.full_over_triangular));
  EXPECT_TRUE(validate_extension(fam.triangular_over_diagonal));
}

TEST(Algebra, PerturbedConstantsBreakAssociativity) {
  auto m = matrix_algebra<Q>(2);
  Vector<Q> c = m.constants();
  c[(1 * 4 + 2) * 4 + 0] += Q(1);  // e12 e21 = e11 + e11
  Algebra<Q> bad(4, c, m.unit(), "bad");
  auto r = validate_algebra(bad);
  EXPECT_FALSE(r);
  EXPECT_NE(r.message.find("associativity"), std::string::npos);
}

TEST(Algebra, BrokenUnitIsReported) {
  auto m = matrix_algebra<Q>(2);
  Algebra<Q> bad(4, m.constants(), unit_vector<Q>(4, 0), "bad");
  auto r = validate_algebra(bad);
  EXPECT_FALSE(r);
  EXPECT_NE(r.message.find("unit"), std::string::npos);
}

TEST(Algebra, OppositeReversesProducts) {
  auto t = build_matrix_family<Q>(2).triangular_over_diagonal.total;
  auto op = opposite(*t);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(op.basis_product(i, j), t->basis_product(j, i));
  EXPECT_TRUE(validate_algebra(op));
}

TEST(Algebra, GeneratorsGenerate) {
  for (const auto& entry : catalog<Q>()) {
    const auto& a = *entry.ext.total;
    EchelonBasis<Q> span(a.dim());
    span.add(a.unit());
    std::vector<Vector<Q>> frontier{a.unit()};
    while (!frontier.empty()) {
      auto v = frontier.back();
      frontier.pop_back();
      for (auto g : a.generators()) {
        auto w = a.multiply(v, a.basis(g));
        if (span.add(w)) frontier.push_back(w);
      }
    }
    EXPECT_EQ(span.dim(), a.dim()) << entry.name;
  }
}

TEST(Algebra, CenterDimensions) {
  EXPECT_EQ(center(share(matrix_algebra<Q>(3))).space.dim(), 1u);
  auto ex = build_exterior_example<Q>();
  auto z = center(ex.over_center.total);
  EXPECT_EQ(z.space.dim(), 2u);
  EXPECT_EQ(z.space, ex.over_center.image_subspace());
}

TEST(Algebra, CentralizerOfTriangularExample) {
  auto e = build_triangular_example<Q>();
  EXPECT_TRUE(validate_extension(e));
  auto r = centralizer(e);
  Vector<Q> e11(9, Q(0)), e21(9, Q(0)), e2233(9, Q(0));
  e11[0] = Q(1);
  e21[3] = Q(1);
  e2233[4] = Q(1);
  e2233[8] = Q(1);
  EXPECT_EQ(r.space, Subspace<Q>::span(9, {e11, e21, e2233}));
  EXPECT_TRUE(validate_algebra(*r.algebra));
}

TEST(Algebra, TransposedTriangularExampleIsAnExtension) {
  auto e = build_triangular_example<Q>(true);
  EXPECT_TRUE(validate_extension(e));
  EXPECT_EQ(centralizer(e).space.dim(), 3u);
}

TEST(Algebra, Ideals) {
  auto fam = build_matrix_family<Q>(2);
  const auto& t2 = *fam.triangular_over_diagonal.total;
  auto row = first_row_ideal(fam.triangular_over_diagonal, 2);
  EXPECT_TRUE(is_two_sided_ideal(t2, row));
  EXPECT_FALSE(is_two_sided_ideal(t2, Subspace<Q>::span(3, {t2.basis(0)})));
  EXPECT_EQ(ideal_generated(t2, {t2.basis(1)}).dim(), 1u);
  auto m2 = matrix_algebra<Q>(2);
  EXPECT_EQ(ideal_generated(m2, {m2.basis(1)}).dim(), 4u);
}

TEST(Algebra, ComposeChecksTheMiddle) {
  auto fam = build_matrix_family<Q>(2);
  EXPECT_THROW(compose(fam.full_over_diagonal, fam.triangular_over_diagonal), AlgebraError);
  auto c = compose(fam.triangular_over_diagonal, identity_extension(fam.triangular_over_diagonal.total));
  EXPECT_TRUE(validate_extension(c));
}

TEST(Tensor, PeirceDimensions) {
  for (std::size_t n : {2u, 3u}) {
    auto fam = build_matrix_family<Q>(n);
    EXPECT_EQ(tensor_square(fam.triangular_over_diagonal).dim(), peirce_tensor_dim(triangular_units(n), n));
    Units full;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) full.emplace_back(i, j);
    EXPECT_EQ(tensor_square(fam.full_over_diagonal).dim(), peirce_tensor_dim(full, n));
  }
}

TEST(Tensor, TriangularExampleIs27) {
  EXPECT_EQ(tensor_square(build_triangular_example<Q>()).dim(), 27u);
  EXPECT_EQ(tensor_square(build_triangular_example<Q>(true)).dim(), 27u);
}

TEST(Tensor, OverGroundIsFullTensor) {
  auto m2 = share(matrix_algebra<Q>(2));
  EXPECT_EQ(tensor_square(unit_extension(m2)).dim(), 16u);
  EXPECT_EQ(tensor_square(identity_extension(m2)).dim(), 4u);
}

TEST(Tensor, PureTensorsAreBalanced) {
  auto e = build_triangular_example<Q>();
  auto ts = tensor_square(e);
  const auto& a = *e.total;
  for (std::size_t b = 0; b < e.base->dim(); ++b) {
    auto lb = e.image_of_basis(b);
    for (std::size_t x = 0; x < 9; ++x)
      for (std::size_t y = 0; y < 9; y += 2)
        EXPECT_EQ(ts.pure(a.multiply(a.basis(x), lb), a.basis(y)), ts.pure(a.basis(x), a.multiply(lb, a.basis(y))));
  }
}

TEST(Tensor, MultiplicationIsWellDefined) {
  auto ts = tensor_square(build_matrix_family<Q>(2).full_over_triangular);
  const auto& a = ts.algebra();
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t y = 0; y < 4; ++y) EXPECT_EQ(ts.mu.apply(ts.pure_basis(x, y)), a.basis_product(x, y));
}

TEST(Tensor, DimensionGuard) {
  auto fam = build_matrix_family<Q>(3);
  EXPECT_THROW(tensor_square(fam.full_over_diagonal, 50), DimensionGuard);
}

TEST(Tensor, EndAlgebraCornerFormula) {
  for (std::size_t n : {2u, 3u}) {
    auto fam = build_matrix_family<Q>(n);
    Units full;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) full.emplace_back(i, j);
    auto s = end_bimodule_algebra(fam.full_over_diagonal);
    EXPECT_EQ(s.dim(), corner_end_dim(full, n));
    EXPECT_TRUE(validate_algebra(*s.algebra));
    EXPECT_TRUE(validate_bimodule(s.rr));
    EXPECT_EQ(end_bimodule_algebra(fam.triangular_over_diagonal).dim(), corner_end_dim(triangular_units(n), n));
  }
}

TEST(Bimodule, RegularAndRestrictedValidate) {
  auto e = build_triangular_example<Q>();
  EXPECT_TRUE(validate_bimodule(regular_bimodule(e.total)));
  EXPECT_TRUE(validate_bimodule(bimodule_over(e, e)));
  EXPECT_TRUE(validate_bimodule(tensor_square(e).ba()));
}

TEST(Bimodule, HomFromBAIntoAIsCentralizer) {
  for (const auto& entry : catalog<Q>()) {
    const auto& ext = entry.ext;
    auto hom = hom_space(bimodule_over(ext, identity_extension(ext.total)),
                         bimodule_over(ext, identity_extension(ext.total)));
    EXPECT_EQ(hom.dim(), centralizer(ext).space.dim()) << entry.name;
  }
}

TEST(Bimodule, SummandOfRegularUnderBaseChange) {
  std::mt19937 rng(7);
  auto t2 = build_matrix_family<Q>(2).triangular_over_diagonal.total;
  auto reg = regular_left(t2);
  for (int trial = 0; trial < 4; ++trial) {
    auto g = random_invertible(3, rng);
    auto gi = inverse(g);
    Representation<Q> moved = reg;
    for (auto& op : moved.ops) op = gi * op * g;
    auto r = add_membership(moved, reg);
    ASSERT_TRUE(r.is_summand());
    EXPECT_TRUE(verify_summand(*r.certificate, moved, reg));
  }
}

TEST(Bimodule, SimpleTopIsNotProjective) {
  auto t2 = build_matrix_family<Q>(2).triangular_over_diagonal.total;
  // e11 -> 0, e12 -> 0, e22 -> 1
  Representation<Q> simple{1, {}, {{'L', t2}}};
  for (std::size_t i = 0; i < 3; ++i) {
    Matrix<Q> m(1, 1);
    m(0, 0) = Q(i == 2 ? 1 : 0);
    simple.ops.push_back(m);
  }
  auto r = add_membership(simple, regular_left(t2));
  EXPECT_FALSE(r.is_summand());
  ASSERT_TRUE(r.witness.codimension().has_value());
  EXPECT_GT(*r.witness.codimension(), 0u);
}

TEST(Bimodule, IncompatibleActingAlgebrasRejected) {
  auto fam = build_matrix_family<Q>(2);
  EXPECT_THROW(add_membership(regular_left(fam.triangular_over_diagonal.total), regular_left(fam.full_over_diagonal.total)),
               std::exception);
}

TEST(Constructions, ExteriorRejectsCharacteristicTwo) {
  ModP::Context ctx(2);
  EXPECT_THROW(build_exterior_example<ModP>(), std::invalid_argument);
}

TEST(Constructions, ExteriorOverFp) {
  ModP::Context ctx(5);
  auto ex = build_exterior_example<ModP>();
  EXPECT_TRUE(validate_extension(ex.over_center));
}

TEST(Constructions, TriangularExampleColumnSeparation) {
  EXPECT_TRUE(triangular_example_free_of_rank_3(build_triangular_example<Q>(), false));
  EXPECT_TRUE(triangular_example_free_of_rank_3(build_triangular_example<Q>(true), true));
  // the column basis does not work on the wrong side
  EXPECT_FALSE(triangular_example_free_of_rank_3(build_triangular_example<Q>(), true));
}

TEST(Constructions, Permutations) {
  auto p = parse_permutation("(1 2 3)", 3);
  EXPECT_EQ(p, (Permutation{1, 2, 0}));
  EXPECT_EQ(parse_permutation("[2,3,1]", 3), p);
  EXPECT_EQ(parse_permutation("2 3 1", 3), p);
  EXPECT_EQ(parse_permutation("(1 2)(2 3)", 3), compose_permutations(parse_permutation("(1 2)", 3), parse_permutation("(2 3)", 3)));
  EXPECT_THROW(parse_permutation("[1,1,2]", 3), ParseError);
  EXPECT_THROW(parse_permutation("(1 2", 3), ParseError);
}

TEST(Constructions, SymmetricGroup) {
  auto gp = group_pair_from_generators({"(1 2 3)", "(1 2)"}, {"(1 2 3)"});
  EXPECT_EQ(gp.group.order(), 6u);
  EXPECT_EQ(gp.subgroup.size(), 3u);
  validate_cayley_table(gp.group.table);
  auto ext = group_algebra_extension<Q>(gp.group, gp.subgroup, "S3", "A3");
  EXPECT_TRUE(validate_extension(ext));
  auto ideals = augmentation_ideals(ext);
  EXPECT_EQ(ideals[0].second.dim(), 5u);
  for (auto& [name, ideal] : ideals) EXPECT_TRUE(is_two_sided_ideal(*ext.total, ideal)) << name;
}

TEST(Constructions, SubgroupMustBeClosed) {
  auto gp = group_pair_from_generators({"(1 2 3)", "(1 2)"}, {});
  // identity and one transposition and a 3-cycle: not closed
  EXPECT_THROW(group_algebra_extension<Q>(gp.group, {0, 1, 3}, "S3", "H"), std::invalid_argument);
  EXPECT_THROW(group_pair_from_generators({"(1 2 3)"}, {"(1 2)"}), std::invalid_argument);
}

TEST(Constructions, ProductAndTensorAlgebrasValidate) {
  auto fam = build_matrix_family<Q>(2);
  auto ex = build_exterior_example<Q>();
  auto p = direct_product<Q>({fam.triangular_over_diagonal, ex.over_center});
  EXPECT_TRUE(validate_extension(p.ext));
  auto t = tensor_product(fam.triangular_over_diagonal, ex.over_ground);
  EXPECT_TRUE(validate_extension(t));
  EXPECT_EQ(t.total->dim(), 12u);
  auto m = matrix_extension(fam.triangular_over_diagonal, 2);
  EXPECT_TRUE(validate_extension(m));
  EXPECT_EQ(m.total->dim(), 12u);
}
