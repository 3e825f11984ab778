#include <gtest/gtest.h>

#include "depthtwo/cocore.hpp"
#include "depthtwo/constructions.hpp"

using namespace depthtwo;
using Q = Rational;

namespace {

CoalgebraPtr<Q> shared(Coalgebra<Q> c) { return std::make_shared<const Coalgebra<Q>>(std::move(c)); }

CoalgebraHom<Q> grouplike_counit() { return counit_hom(shared(grouplike_coalgebra<Q>(2))); }

CoalgebraHom<Q> dual_m2_diag() { return dualize_extension(build_matrix_family<Q>(2).full_over_diagonal); }

CoalgebraHom<Q> m2_identity() { return identity_hom(shared(dualize(matrix_algebra<Q>(2)))); }

}  // namespace

TEST(Coalgebra, DualizeRoundTrip) {
  for (const auto& entry : catalog<Q>()) {
    const auto& a = *entry.ext.total;
    const auto c = dualize(a);
    EXPECT_TRUE(validate_coalgebra(c)) << entry.name;
    EXPECT_EQ(dual_algebra(c).constants(), a.constants()) << entry.name;
    EXPECT_EQ(dual_algebra(c).unit(), a.unit()) << entry.name;
  }
}

TEST(Coalgebra, ValidationRejectsBrokenData) {
  auto c = grouplike_coalgebra<Q>(2);
  EXPECT_TRUE(validate_coalgebra(c));
  auto bad = c;
  bad.counit[1] = Q(2);
  EXPECT_FALSE(validate_coalgebra(bad));
  bad = c;
  bad.delta(1, 0) = Q(1);  // e0 -> e0 (x) e0 + e0 (x) e1
  EXPECT_FALSE(validate_coalgebra(bad));
}

TEST(Coalgebra, DualExtensionsAreCoalgebraMaps) {
  for (const auto& entry : catalog<Q>()) EXPECT_TRUE(validate_coalgebra_hom(dualize_extension(entry.ext))) << entry.name;
  auto h = grouplike_counit();
  EXPECT_TRUE(validate_coalgebra_hom(h));
  h.g(0, 0) = Q(2);
  EXPECT_FALSE(validate_coalgebra_hom(h));
  EXPECT_THROW(make_context(h), AlgebraError);
}

TEST(Cotensor, DimensionsMatchAlgebraTensorSquare) {
  // C []_D C is dual to A (x)_B A for g dual to B -> A
  for (const auto& entry : catalog<Q>()) {
    if (entry.ext.total->dim() > 9) continue;
    const auto ctx = make_context(dualize_extension(entry.ext));
    EXPECT_EQ(cotensor_square(ctx).dim(), tensor_square(entry.ext).tensor.dim()) << entry.name;
  }
  EXPECT_EQ(cotensor_square(make_context(m2_identity())).dim(), 4u);
  EXPECT_EQ(cotensor_square(make_context(grouplike_counit())).dim(), 4u);
  EXPECT_EQ(cotensor_square(make_context(counit_hom(shared(dualize(matrix_algebra<Q>(2)))))).dim(), 16u);
}

TEST(Cotensor, DiagonalAndRetractions) {
  for (const auto& h : {m2_identity(), grouplike_counit(), dual_m2_diag()}) {
    const auto ctx = make_context(h);
    const auto sq = cotensor_square(ctx);
    EXPECT_TRUE(sq.under_delta_lands) << h.name;
    EXPECT_TRUE(sq.left_retraction_splits) << h.name;
    EXPECT_TRUE(sq.right_retraction_splits) << h.name;
  }
}

TEST(CoEnd, HomIsomorphisms) {
  for (const auto& h : {m2_identity(), grouplike_counit(), dual_m2_diag()}) {
    const auto ctx = make_context(h);
    const auto sq = cotensor_square(ctx);
    const auto e = end_dd(ctx);
    EXPECT_TRUE(end_to_cotensor_iso(ctx, sq, e).verified()) << h.name;
    const auto lemma = dual_centralizer_iso(ctx);
    EXPECT_TRUE(lemma.iso.verified()) << h.name;
    EXPECT_TRUE(lemma.anti_multiplicative) << h.name;
    EXPECT_TRUE(hom_to_c_iso(ctx, sq.dc).verified()) << h.name;
    EXPECT_TRUE(hom_to_c_iso(ctx, ctx.c_dc()).verified()) << h.name;
  }
}

TEST(CoEnd, CounitOnGrouplikes) {
  // g = eps: E = End(C) and R = C*
  const auto ctx = make_context(grouplike_counit());
  EXPECT_EQ(end_dd(ctx).dim(), 4u);
  EXPECT_EQ(centralizer(ctx.dual_ext).space.dim(), 2u);
}

TEST(CoD2, StandardCases) {
  for (const auto& h : {m2_identity(), grouplike_counit(), dual_m2_diag()}) {
    const auto ctx = make_context(h);
    const auto sq = cotensor_square(ctx);
    const auto res = check_cod2(ctx, sq);
    ASSERT_TRUE(res.is_cod2()) << h.name;
    EXPECT_TRUE(verify_cod2(ctx, sq, *res.certificate)) << h.name;
  }
}

TEST(CoD2, TamperedQuasibaseFails) {
  const auto ctx = make_context(dual_m2_diag());
  const auto sq = cotensor_square(ctx);
  auto cert = *check_cod2(ctx, sq).certificate;
  cert.alpha[0] = cert.alpha[0] * Q(2);
  EXPECT_FALSE(verify_cod2(ctx, sq, cert));
  EXPECT_THROW(build_bialgebroid(ctx, sq, cert), std::invalid_argument);
}

TEST(CoD2, AgreesWithRightD2OfDual) {
  for (const auto& entry : catalog<Q>()) {
    if (entry.ext.total->dim() > 9) continue;
    const auto ctx = make_context(dualize_extension(entry.ext));
    const auto sq = cotensor_square(ctx);
    const bool cod2 = check_cod2(ctx, sq).is_cod2();
    const auto ts = tensor_square(entry.ext);
    EXPECT_EQ(cod2, check_d2(ts, Side::Right).is_d2()) << entry.name;
  }
}

TEST(Bialgebroid, AxiomsHold) {
  for (const auto& h : {m2_identity(), grouplike_counit(), dual_m2_diag()}) {
    const auto ctx = make_context(h);
    const auto sq = cotensor_square(ctx);
    const auto cert = *check_cod2(ctx, sq).certificate;
    const auto b = build_bialgebroid(ctx, sq, cert);
    EXPECT_TRUE(b.s_t_in_e) << h.name;
    EXPECT_TRUE(b.source_homomorphism) << h.name;
    EXPECT_TRUE(b.target_antihomomorphism) << h.name;
    EXPECT_TRUE(b.source_target_commute) << h.name;
    EXPECT_TRUE(b.identification_iso) << h.name;
    EXPECT_TRUE(b.distribution_law) << h.name;
    EXPECT_TRUE(b.projective_dual_bases) << h.name;
    EXPECT_TRUE(b.axiom_coring()) << h.name;
    EXPECT_TRUE(b.axiom_unit()) << h.name;
    EXPECT_TRUE(b.axiom_takeuchi()) << h.name;
    EXPECT_TRUE(b.axiom_multiplicative()) << h.name;
    EXPECT_TRUE(b.axiom_counit_module()) << h.name;
    EXPECT_EQ(b.ere_dim, b.hom_dim) << h.name;
  }
}

TEST(Bialgebroid, CounitCaseIsEndomorphismRing) {
  const auto ctx = make_context(grouplike_counit());
  const auto sq = cotensor_square(ctx);
  const auto b = build_bialgebroid(ctx, sq, *check_cod2(ctx, sq).certificate);
  EXPECT_EQ(b.e_dim, 4u);
  EXPECT_EQ(b.r_dim, 2u);
  // End(C) (x)_{C*} End(C) with C* = K x K acting by rows and columns
  EXPECT_EQ(b.ere_dim, 8u);
}

TEST(Bridge, DualOfD2Extension) {
  const auto ext = build_matrix_family<Q>(2).full_over_diagonal;
  const auto ctx = make_context(dualize_extension(ext));
  const auto sq = cotensor_square(ctx);
  const bool cod2 = check_cod2(ctx, sq).is_cod2();
  const bool d2 = check_d2(tensor_square(ctx.dual_ext), Side::Left).is_d2();
  const auto br = duality_bridge(ctx, cod2, d2);
  EXPECT_TRUE(br.lands_in_s);
  EXPECT_TRUE(br.anti_multiplicative);
  EXPECT_TRUE(br.bijective);
  EXPECT_EQ(br.e_dim, br.s_dim);
  EXPECT_THROW(duality_bridge(ctx, false, d2), std::invalid_argument);
}

TEST(Cotensor, PrimeField) {
  ModP::Context guard(5);
  const auto ctx = make_context(dualize_extension(build_matrix_family<ModP>(2).full_over_diagonal));
  const auto sq = cotensor_square(ctx);
  EXPECT_EQ(sq.dim(), 8u);
  EXPECT_TRUE(check_cod2(ctx, sq).is_cod2());
}
