// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if any fail.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "depthtwo/cli.hpp"
#include "depthtwo/depthtwo.hpp"

using namespace depthtwo;
using Q = Rational;

namespace {

/// Collects failed checks and a short summary for one criterion.
struct Outcome {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<void(Outcome&)> body;
};

bool d2(const TensorSquare<Q>& ts, Side side) { return check_d2(ts, side).is_d2(); }

// ---------------------------------------------------------------- 1

void matrix_family(Outcome& o) {
  for (std::size_t n : {2u, 3u}) {
    const auto start = std::chrono::steady_clock::now();
    const auto fam = build_matrix_family<Q>(n);
    const std::string tag = " (n=" + std::to_string(n) + ")";
    const auto ts_d = tensor_square(fam.full_over_diagonal);
    const auto ts_t = tensor_square(fam.full_over_triangular);
    const auto ts_td = tensor_square(fam.triangular_over_diagonal);
    const auto hd = check_h_separable(ts_d), ht = check_h_separable(ts_t);
    o.check(hd.certificate && verify_h_separability(ts_d, *hd.certificate), "M_n|Diag_n H-separable" + tag);
    o.check(ht.certificate && verify_h_separability(ts_t, *ht.certificate), "M_n|T_n H-separable" + tag);
    for (Side side : {Side::Left, Side::Right}) {
      const auto r = check_d2(ts_td, side);
      o.check(!r.is_d2() && r.witness.codimension().value_or(0) > 0,
              std::string("T_n|Diag_n not ") + side_name(side) + " D2 with witness" + tag);
    }
    const auto norm = check_normal_wrt_ideal(fam.triangular_over_diagonal, first_row_ideal(fam.triangular_over_diagonal, n));
    o.check(!norm.invariant, "first-row ideal not invariant" + tag);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(s < 10.0, "n=" + std::to_string(n) + " within 10 s");
    std::ostringstream ss;
    ss.precision(2);
    ss << std::fixed << "n=" << n << " " << s << "s";
    o.note(ss.str());
  }
}

// ---------------------------------------------------------------- 2

void triangular_example(Outcome& o) {
  const auto ext = build_triangular_example<Q>();
  const auto ts = tensor_square(ext);
  o.check(ts.dim() == 27, "dim A (x)_B A = 27 (got " + std::to_string(ts.dim()) + ")");
  const auto h = check_h_separable(ts);
  o.check(h.certificate && verify_h_separability(ts, *h.certificate), "H-separable with verified certificate");
  const auto split = check_split_extension(ext);
  o.check(!split.projection, "not split");
  o.check(split.restriction_rank < ext.base->dim() * ext.base->dim(), "split refusal witness: identity outside span");
  o.check(triangular_example_free_of_rank_3(ext, false), "_B A free of rank 3 via column separation");
  const auto tr = build_triangular_example<Q>(true);
  o.check(tensor_square(tr).dim() == 27, "transposed variant: dim 27");
  o.check(triangular_example_free_of_rank_3(tr, true), "transposed variant: A_B free of rank 3");
  o.note("dim 27, hsep terms " + std::to_string(h.certificate ? h.certificate->r.size() : 0) +
         ", split restriction rank " + std::to_string(split.restriction_rank) + " of 9");
}

// ---------------------------------------------------------------- 3

void exterior(Outcome& o) {
  const auto ex = build_exterior_example<Q>();
  const auto ts_k = tensor_square(ex.over_ground);
  o.check(d2(ts_k, Side::Left) && d2(ts_k, Side::Right), "E|Q is D2");
  const auto z = center(ex.over_ground.total);
  o.check(z.space.dim() == 2, "center of E has dim 2");
  o.check(ex.over_center.image_subspace() == z.space, "V is the center");
  const auto ts_v = tensor_square(ex.over_center);
  const auto left = check_d2(ts_v, Side::Left);
  o.check(!left.is_d2(), "E|V is not left D2");
  o.check(!d2(ts_v, Side::Right), "E|V is not right D2");
  o.note("E|V witness codimension " + std::to_string(left.witness.codimension().value_or(0)));
}

// ---------------------------------------------------------------- 4

void residual_suite(Outcome& o) {
  std::size_t certs = 0, pairs = 0, s_elems = 0;
  for (const auto& entry : catalog<Q>()) {
    const auto ts = tensor_square(entry.ext);
    const auto s = end_bimodule_algebra(entry.ext);
    for (Side side : {Side::Left, Side::Right}) {
      const auto r = check_d2(ts, side);
      const std::string key = std::string(side_name(side)) + "-d2";
      if (entry.expected.count("d2")) o.check(r.is_d2() == entry.expected.at("d2"), entry.name + " d2 verdict");
      if (entry.expected.count(key)) o.check(r.is_d2() == entry.expected.at(key), entry.name + " " + key + " verdict");
      if (!r.certificate) continue;
      ++certs;
      const auto v = verify_quasibase(ts, *r.certificate);
      o.check(v.ok, entry.name + " " + side_name(side) + " quasibase residual: " + v.message);
      pairs += entry.ext.total->dim() * entry.ext.total->dim();
      const auto db = verify_dual_bases(ts, s, *r.certificate);
      o.check(db.ok, entry.name + " " + side_name(side) + " dual bases: " + db.message);
      s_elems += db.checked;
    }
  }
  o.check(certs > 0, "some certificates emitted");
  o.note(std::to_string(certs) + " certificates, " + std::to_string(pairs) + " basis pairs, " + std::to_string(s_elems) +
         " S elements");
}

// ---------------------------------------------------------------- 5

/// Tensor products are decided by the quasibase membership test when dim T * dim S is at most
/// kMembershipComposites (T = (A (x)_B A)^B, S = End_{B-B}(A)) and always when a factor is not D2;
/// the summand test additionally runs on the smallest ones.  Positive verdicts are also proved by the
/// verified combined certificate.
constexpr std::size_t kMembershipComposites = 5000;
constexpr std::size_t kSummandTestComposites = 100;
constexpr std::size_t kSummandTestUnknowns = 3000;

void closure(Outcome& o) {
  const auto cat = catalog<Q>();
  struct Factor {
    TensorSquare<Q> ts;
    std::optional<QuasibaseCertificate<Q>> left, right;
    std::size_t composites;
  };
  std::vector<Factor> f;
  for (const auto& e : cat) {
    auto ts = tensor_square(e.ext);
    auto l = check_d2(ts, Side::Left).certificate;
    auto r = check_d2(ts, Side::Right).certificate;
    const std::size_t composites = central_elements(ts).dim() * end_bimodule_algebra(e.ext).dim();
    f.push_back({std::move(ts), std::move(l), std::move(r), composites});
  }
  using Clock = std::chrono::steady_clock;
  std::chrono::duration<double> product_time{}, tensor_time{}, matrix_time{};
  std::size_t products = 0, tensors = 0, by_summand = 0, by_membership = 0, combined = 0, matrices = 0;
  for (std::size_t i = 0; i < cat.size(); ++i)
    for (std::size_t j = i; j < cat.size(); ++j) {
      const std::string pair = cat[i].name + " , " + cat[j].name;
      // direct product
      auto t0 = Clock::now();
      if (f[i].ts.dim() + f[j].ts.dim() <= 2000) {
        const auto p = direct_product<Q>({cat[i].ext, cat[j].ext});
        const auto ts = tensor_square(p.ext);
        for (Side side : {Side::Left, Side::Right}) {
          const auto& ci = side == Side::Left ? f[i].left : f[i].right;
          const auto& cj = side == Side::Left ? f[j].left : f[j].right;
          const auto r = check_d2(ts, side);
          o.check(r.is_d2() == (ci && cj), "product verdict " + pair + " " + side_name(side));
          if (ci && cj) {
            const auto glued = glue_certificates(p, ts, {f[i].ts, f[j].ts}, {*ci, *cj});
            o.check(verify_quasibase(ts, glued).ok, "glued certificate " + pair + " " + side_name(side));
          }
          if (r.certificate) {
            const auto back = project_certificate(p, ts, f[i].ts, 0, *r.certificate);
            o.check(verify_quasibase(f[i].ts, back).ok, "projected certificate " + pair + " " + side_name(side));
          }
        }
        ++products;
      }
      // tensor product
      product_time += Clock::now() - t0;
      t0 = Clock::now();
      const std::size_t tdim = f[i].ts.dim() * f[j].ts.dim();
      if (tdim > 2000) continue;
      const auto t = tensor_product(cat[i].ext, cat[j].ext);
      const std::size_t composites = f[i].composites * f[j].composites;
      const bool small = composites <= kSummandTestComposites &&
                         tdim * cat[i].ext.total->dim() * cat[j].ext.total->dim() <= kSummandTestUnknowns;
      const auto ts = tensor_square(t, kDefaultDimensionGuard, small);
      o.check(ts.dim() == tdim, "tensor square dim multiplies for " + pair);
      for (Side side : {Side::Left, Side::Right}) {
        const auto& ci = side == Side::Left ? f[i].left : f[i].right;
        const auto& cj = side == Side::Left ? f[j].left : f[j].right;
        const bool expected = ci && cj;
        if (expected) {
          const auto c = combine_certificates(ts, f[i].ts, f[j].ts, *ci, *cj);
          o.check(verify_quasibase(ts, c, small).ok, "combined certificate " + pair + " " + side_name(side));
          ++combined;
        }
        if (!expected || composites <= kMembershipComposites) {
          o.check(quasibase_exists(ts, side) == expected, "membership verdict " + pair + " " + side_name(side));
          ++by_membership;
        }
        if (small) {
          o.check(check_d2(ts, side).is_d2() == expected, "summand verdict " + pair + " " + side_name(side));
          ++by_summand;
        }
      }
      ++tensors;
      tensor_time += Clock::now() - t0;
    }
  const auto matrix_start = Clock::now();
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto m = matrix_extension(cat[i].ext, 2);
    const auto ts = tensor_square(m);
    if (ts.dim() > 2000) continue;
    for (Side side : {Side::Left, Side::Right}) {
      const auto& ci = side == Side::Left ? f[i].left : f[i].right;
      const auto r = check_d2(ts, side);
      o.check(r.is_d2() == ci.has_value(), "matrix verdict " + cat[i].name + " " + side_name(side));
      if (r.certificate) o.check(verify_quasibase(ts, *r.certificate).ok, "matrix certificate " + cat[i].name);
    }
    ++matrices;
  }
  matrix_time = Clock::now() - matrix_start;
  std::ostringstream times;
  times.precision(1);
  times << std::fixed << "products " << product_time.count() << " s, tensors " << tensor_time.count() << " s, matrices "
        << matrix_time.count() << " s";
  o.note(times.str());
  o.note(std::to_string(products) + " products, " + std::to_string(tensors) + " tensor products (" +
         std::to_string(by_summand) + " verdicts by summand test, " + std::to_string(by_membership) +
         " by quasibase membership, " + std::to_string(combined) + " by combined certificate), " +
         std::to_string(matrices) + " matrix extensions");
}

// ---------------------------------------------------------------- 6

void hochschild(Outcome& o) {
  const auto fam = build_matrix_family<Q>(2);
  const std::vector<Extension<Q>> exts = {fam.full_over_diagonal, identity_extension(share(matrix_algebra<Q>(2)))};
  for (const auto& ext : exts) {
    const auto h = build_hochschild(ext, 3);
    o.check(coboundary_squares_to_zero(h), ext.name + ": d^2 = 0");
    const auto l = check_leibniz(h);
    o.check(l.ok, ext.name + ": Leibniz " + l.message);
    const auto ts = tensor_square(ext);
    const auto s = end_bimodule_algebra(ext);
    const auto cert = check_d2(ts, Side::Right).certificate;
    o.check(cert.has_value(), ext.name + ": right D2");
    if (!cert) continue;
    for (std::size_t n : {2u, 3u}) {
      const auto g = generation_isomorphism(h, s, ts, *cert, n);
      o.check(g.forward_then_inverse && g.inverse_then_forward,
              ext.name + ": generation isomorphism in degree " + std::to_string(n));
    }
    o.note(ext.name + " dims " + cli::dims_text(cohomology_dims(h).cochain_dims) + ", Leibniz pairs " +
           std::to_string(l.checked));
  }
}

// ---------------------------------------------------------------- 7

void cocore(Outcome& o) {
  auto grouplike = std::make_shared<const Coalgebra<Q>>(grouplike_coalgebra<Q>(2));
  auto m2dual = std::make_shared<const Coalgebra<Q>>(dualize(matrix_algebra<Q>(2)));
  const std::vector<std::pair<std::string, CoalgebraHom<Q>>> cases = {
      {"id", identity_hom(m2dual)},
      {"counit", counit_hom(grouplike)},
      {"dual Diag2 in M2", dualize_extension(build_matrix_family<Q>(2).full_over_diagonal)}};
  for (const auto& [name, hom] : cases) {
    const auto ctx = make_context(hom);
    const auto sq = cotensor_square(ctx);
    const auto ts = tensor_square(ctx.dual_ext);
    o.check(sq.dim() == ts.dim(), name + ": cotensor dim " + std::to_string(sq.dim()) + " vs algebra tensor square " +
                                      std::to_string(ts.dim()));
    const auto e = end_dd(ctx);
    o.check(end_to_cotensor_iso(ctx, sq, e).verified(), name + ": End^{D-D}(C) = Hom^{D-C}(C, C[]C)");
    const auto lemma = dual_centralizer_iso(ctx);
    o.check(lemma.iso.verified() && lemma.anti_multiplicative, name + ": End^{D-C}(C) anti-isomorphic to V_{C*}(D*)");
    o.check(hom_to_c_iso(ctx, sq.dc).verified(), name + ": Hom^{D-C}(C[]C, C) = invariants");
    const auto res = check_cod2(ctx, sq);
    o.check(res.is_cod2(), name + ": coD2");
    if (!res.certificate) continue;
    o.check(verify_cod2(ctx, sq, *res.certificate).ok, name + ": coD2 quasibase residual");
    const auto b = build_bialgebroid(ctx, sq, *res.certificate);
    o.check(b.axiom_coring() && b.axiom_unit() && b.axiom_takeuchi() && b.axiom_multiplicative() &&
                b.axiom_counit_module(),
            name + ": five bialgebroid axioms");
    o.check(b.all_axioms() && b.distribution_law && b.identification_iso, name + ": structure maps");
    const bool dual_d2 = d2(ts, Side::Left);
    o.check(dual_d2, name + ": dual extension D2");
    if (dual_d2) {
      const auto br = duality_bridge(ctx, true, true);
      o.check(br.anti_multiplicative && br.lands_in_s && br.injective, name + ": duality bridge");
    }
    o.note(name + " cotensor " + std::to_string(sq.dim()) + " E " + std::to_string(b.e_dim) + " R " +
           std::to_string(b.r_dim));
  }
}

// ---------------------------------------------------------------- 8

void groups(Outcome& o) {
  const std::vector<std::pair<std::string, std::string>> subs = {{"A3", "(1 2 3)"}, {"C2", "(1 2)"}};
  for (const auto& [hname, gen] : subs) {
    const auto pair = group_pair_from_generators({"(1 2 3)", "(1 2)"}, {gen});
    const auto ext = group_algebra_extension<Q>(pair.group, pair.subgroup, "S3", hname);
    const auto ts = tensor_square(ext);
    const bool l = d2(ts, Side::Left), r = d2(ts, Side::Right);
    bool all_invariant = true;
    std::string inv;
    for (const auto& [iname, ideal] : augmentation_ideals(ext)) {
      const auto n = check_normal_wrt_ideal(ext, ideal);
      all_invariant = all_invariant && n.invariant;
      inv += " " + iname + "=" + (n.invariant ? "invariant" : "not-invariant");
    }
    // invariance on every ideal is necessary for depth two
    o.check(!(l || r) || all_invariant, ext.name + ": D2 but an augmentation ideal is not invariant");
    o.check(l == r, ext.name + ": left and right verdicts differ");
    o.note(ext.name + " d2=" + (l ? "true" : "false") + inv);
  }
}

// ---------------------------------------------------------------- 9

std::string suite_json() {
  std::ostringstream all;
  std::vector<std::vector<std::string>> builds = {{"build", "matrix-family", "--n", "2"},
                                                  {"build", "matrix-family", "--n", "2", "--member", "full-over-diagonal"},
                                                  {"build", "matrix-family", "--n", "3", "--member", "full-over-triangular"},
                                                  {"build", "exterior"},
                                                  {"build", "exterior", "--over", "center"},
                                                  {"build", "example-3-2"},
                                                  {"build", "identity", "--n", "2"},
                                                  {"build", "group", "--gen", "(1 2 3)", "--gen", "(1 2)", "--sub", "(1 2 3)"},
                                                  {"build", "grouplike-counit", "--n", "2"}};
  for (const auto& b : builds) {
    std::istringstream none;
    std::ostringstream ext, err;
    cli::run(b, none, ext, err);
    std::istringstream in(ext.str());
    std::ostringstream rep;
    const bool hom = b[1] == "grouplike-counit";
    std::vector<std::string> args = {"analyze", "--out", "json", "--cod2", "--bialgebroid"};
    if (!hom)
      for (const char* a : {"--d2", "--hsep", "--sep", "--weak-d2", "--split", "--normal", "--balanced", "--galois"})
        args.push_back(a);
    if (b[1] == "identity" || (b.size() > 3 && b[3] == "2")) args.push_back("--hochschild");
    args.push_back("-");
    const int code = cli::run(args, in, rep, err);
    all << "# " << b[1] << " exit " << code << "\n" << rep.str() << err.str();
  }
  return all.str();
}

void determinism(Outcome& o) {
  const std::string a = suite_json();
  const std::string b = suite_json();
  o.check(!a.empty() && a == b, "two suite runs differ");
  o.check(a.find("\"verdict\"") != std::string::npos, "suite produced reports");
  o.check(a.find("error") == std::string::npos, "suite produced no errors");
  o.note(std::to_string(a.size()) + " bytes identical");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "matrix family triple, n = 2, 3", 20, matrix_family},
      {2, "triangular example: dim 27, H-separable, not split, free of rank 3", 30, triangular_example},
      {3, "exterior algebra over the ground field and over its center", 5, exterior},
      {4, "quasibase residual suite over the catalog", 120, residual_suite},
      {5, "product, tensor and matrix closure", 120, closure},
      {6, "Hochschild complex on M2|Diag2 and the identity", 60, hochschild},
      {7, "coalgebra suite: cotensor, isomorphisms, coD2, bialgebroid, bridge", 120, cocore},
      {8, "S3 over A3 and over C2 with augmentation-ideal normality", 300, groups},
      {9, "determinism of JSON reports", 120, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (s > c.limit_seconds) o.failures.push_back("time limit exceeded");
    const bool pass = o.failures.empty();
    failed += pass ? 0 : 1;
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.title << " (" << s << " s)";
    std::cout << line.str() << "\n";
    for (const auto& n : o.notes) std::cout << "       " << n << "\n";
    for (const auto& f : o.failures) std::cout << "       failed: " << f << "\n";
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
