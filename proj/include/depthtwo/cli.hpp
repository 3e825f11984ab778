#pragma once

// Command-line front end: `build`, `analyze` and `verify`, run in process.
//
// Exit codes: 0 analysis finished (whatever the verdicts) or certificate
// valid; 1 certificate invalid; 2 input error; 3 dimension guard or degree cap
// exceeded; 4 internal failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "depthtwo/cocore.hpp"
#include "depthtwo/constructions.hpp"
#include "depthtwo/depth.hpp"
#include "depthtwo/hochschild.hpp"
#include "depthtwo/json_io.hpp"

namespace depthtwo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitInternal = 4;

inline constexpr const char* kFieldEnv = "DEPTHTWO_FIELD";

inline const std::vector<std::string>& analysis_names() {
  static const std::vector<std::string> names = {"d2",     "hsep",     "sep",          "weak-d2",    "split",
                                                 "normal", "balanced", "galois",       "group-galois", "hochschild",
                                                 "cod2",   "bialgebroid", "bridge"};
  return names;
}

struct AnalysisRequest {
  std::vector<std::string> analyses;  // canonical order, no repeats
  std::string side = "both";
  std::string field;  // empty: environment, then the input file, then q
  std::size_t degree_cap = kDefaultDegreeCap;
  std::size_t dim_guard = kDefaultDimensionGuard;
  std::string out = "text";
  std::string input = "-";
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json read_json(const std::string& path, std::istream& in) {
  try {
    if (path == "-") return Json::parse(in);
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in " + (path == "-" ? std::string("standard input") : path) + ": " + e.what());
  }
}

/// --field, then the environment, then the data itself, then q.
inline FieldSpec choose_field(const std::string& flag, const Json* data) {
  if (!flag.empty()) return parse_field(flag);
  if (const char* env = std::getenv(kFieldEnv); env && *env) return parse_field(env);
  if (data && data->is_object() && data->contains("field")) return parse_field(data->at("field").get<std::string>());
  return {};
}

template <class Fn>
auto with_field(const FieldSpec& f, Fn&& fn) {
  if (f.p == 0) return fn(Rational{});
  ModP::Context ctx(f.p);
  return fn(ModP{});
}

// ---------------------------------------------------------------- report assembly

struct Report {
  Json json;
  std::vector<std::string> text;
  void line(std::string s) { text.push_back(std::move(s)); }
};

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline std::string dims_text(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

inline std::string witness_text(const Json& w) {
  std::string s = "composite span " + w["composite_span_dim"].dump();
  if (!w["end_dim"].is_null()) s += " of End " + w["end_dim"].dump() + ", codimension " + w["codimension"].dump();
  return s;
}

template <class F>
class Analyzer {
 public:
  Analyzer(const Json& input, const AnalysisRequest& req) : req_(req) {
    if (is_hom_json(input)) {
      hom_ = parse_hom<F>(input);
      ctx_ = make_context(*hom_);
      ext_ = ctx_->dual_ext;
      input_kind_ = "coalgebra-map";
    } else {
      auto f = parse_extension_file<F>(input);
      ext_ = f.ext;
      file_ = std::move(f);
      input_kind_ = "extension";
    }
  }

  Report run() {
    Report rep;
    Json target;
    target["kind"] = input_kind_;
    target["name"] = hom_ ? hom_->name : ext_.name;
    target["field"] = field_name<F>();
    target["base_dim"] = ext_.base->dim();
    target["total_dim"] = ext_.total->dim();
    if (hom_) {
      target["coalgebra_dim"] = hom_->source->dim;
      target["subcoalgebra_dim"] = hom_->target->dim;
    }
    rep.json["target"] = std::move(target);
    rep.line("target " + (hom_ ? hom_->name : ext_.name) + " over " + field_name<F>() + ": dim B = " +
             std::to_string(ext_.base->dim()) + ", dim A = " + std::to_string(ext_.total->dim()) +
             (hom_ ? " (dual of the coalgebra map)" : ""));
    Json analyses;
    for (const auto& name : req_.analyses) {
      const auto start = std::chrono::steady_clock::now();
      std::vector<std::string> lines;
      Json j = dispatch(name, lines);
      const auto ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
      for (std::size_t i = 0; i < lines.size(); ++i)
        rep.line(lines[i] + (i + 1 == lines.size() ? "  [" + std::to_string(ms) + " ms]" : ""));
      analyses[name] = std::move(j);
    }
    rep.json["analyses"] = std::move(analyses);
    rep.json["dimensions"] = dimensions();
    rep.json["exact_verification"] = true;
    return rep;
  }

 private:
  std::vector<Side> sides() const {
    if (req_.side == "left") return {Side::Left};
    if (req_.side == "right") return {Side::Right};
    return {Side::Left, Side::Right};
  }

  const TensorSquare<F>& ts() {
    if (!ts_) ts_ = tensor_square(ext_, req_.dim_guard);
    return *ts_;
  }
  const EndAlgebra<F>& s() {
    if (!s_) s_ = end_bimodule_algebra(ext_);
    return *s_;
  }
  const D2Result<F>& d2(Side side) {
    auto& slot = side == Side::Left ? d2_left_ : d2_right_;
    if (!slot) slot = check_d2(ts(), side);
    return *slot;
  }
  const CoContext<F>& ctx() {
    if (!ctx_) {
      hom_ = dualize_extension(ext_);
      ctx_ = make_context(*hom_);
    }
    return *ctx_;
  }
  const CotensorSquare<F>& sq() {
    if (!sq_) sq_ = cotensor_square(ctx());
    return *sq_;
  }
  const CoD2Result<F>& cod2() {
    if (!cod2_) cod2_ = check_cod2(ctx(), sq());
    return *cod2_;
  }

  Json dimensions() {
    Json d;
    d["base"] = ext_.base->dim();
    d["total"] = ext_.total->dim();
    if (ts_) d["tensor_square"] = ts_->dim();
    if (s_) {
      d["end_bimodule"] = s_->dim();
      d["centralizer"] = s_->centralizer.space.dim();
    }
    if (sq_) d["cotensor_square"] = sq_->dim();
    return d;
  }

  Json dispatch(const std::string& name, std::vector<std::string>& out) {
    if (name == "d2") return run_d2(out);
    if (name == "hsep") return run_hsep(out);
    if (name == "sep") return run_sep(out);
    if (name == "weak-d2") return run_weak_d2(out);
    if (name == "split") return run_split(out);
    if (name == "normal") return run_normal(out);
    if (name == "balanced") return run_balanced(out);
    if (name == "galois") return run_galois(out);
    if (name == "group-galois") return run_group_galois(out);
    if (name == "hochschild") return run_hochschild(out);
    if (name == "cod2") return run_cod2(out);
    if (name == "bialgebroid") return run_bialgebroid(out);
    if (name == "bridge") return run_bridge(out);
    throw InputError("unknown analysis '" + name + "'");
  }

  Json run_d2(std::vector<std::string>& out) {
    Json j;
    for (Side side : sides()) {
      const auto& res = d2(side);
      Json r;
      r["verdict"] = res.is_d2();
      if (res.certificate) {
        const auto check = verify_quasibase(ts(), *res.certificate);
        if (!check) throw std::logic_error("emitted quasibase fails: " + check.message);
        const auto dual = verify_dual_bases(ts(), s(), *res.certificate);
        r["N"] = res.certificate->count();
        r["certificate"] = quasibase_json(ts(), *res.certificate, true);
        r["dual_bases"] = Json{{"ok", dual.ok}, {"checked", dual.checked}};
        out.push_back(std::string("d2 ") + side_name(side) + ": true (N = " + std::to_string(res.certificate->count()) +
                      ", residual zero on all basis pairs, dual bases " + (dual.ok ? "hold" : "FAIL") + " on " +
                      std::to_string(dual.checked) + " elements of S)");
      } else {
        out.push_back(std::string("d2 ") + side_name(side) + ": false (witness: " + witness_text(witness_json(res.witness)) +
                      ")");
      }
      r["witness"] = witness_json(res.witness);
      j[side_name(side)] = std::move(r);
    }
    return j;
  }

  Json run_hsep(std::vector<std::string>& out) {
    const auto res = check_h_separable(ts());
    Json j;
    j["verdict"] = res.certificate.has_value();
    if (res.certificate) {
      if (!verify_h_separability(ts(), *res.certificate)) throw std::logic_error("emitted H-separability certificate fails");
      j["certificate"] = hsep_json(*res.certificate);
    }
    j["centralizer_dim"] = res.centralizer_dim;
    j["casimir_dim"] = res.casimir_dim;
    j["span_dim"] = res.span_dim;
    out.push_back("hsep: " + yes_no(res.certificate.has_value()) +
                  (res.certificate ? " (" + std::to_string(res.certificate->r.size()) + " terms)"
                                   : " (1 (x) 1 outside R * Casimir span of dim " + std::to_string(res.span_dim) + ")"));
    return j;
  }

  Json run_sep(std::vector<std::string>& out) {
    const auto res = separability_element(ts());
    Json j;
    j["verdict"] = res.element.has_value();
    if (res.element) {
      if (!verify_separability_element(ts(), *res.element)) throw std::logic_error("emitted separability element fails");
      j["certificate"] = separability_json(*res.element);
    }
    j["casimir_dim"] = res.casimir_dim;
    j["mu_image_rank"] = res.mu_image_rank;
    out.push_back("sep: " + yes_no(res.element.has_value()) + " (Casimir dim " + std::to_string(res.casimir_dim) +
                  ", mu rank " + std::to_string(res.mu_image_rank) + ")");
    return j;
  }

  Json run_weak_d2(std::vector<std::string>& out) {
    Json j;
    for (Side side : sides()) {
      const auto r = check_weak_d2(ext_, side, req_.dim_guard);
      Json x;
      x["verdict"] = r.weak_d2;
      x["rs_projective"] = r.rs_projective;
      x["s_dim"] = r.s_dim;
      x["hom_dim"] = r.hom_dim;
      x["psi_rank"] = r.psi_rank;
      x["splitting"] = r.splitting ? matrix_json(*r.splitting) : Json(nullptr);
      x["reject_dim"] = r.reject_dim;
      x["reject_is_psi_kernel"] = r.reject_is_psi_kernel;
      x["complement_dim"] = r.complement_dim ? Json(*r.complement_dim) : Json(nullptr);
      x["decomposition_direct"] = r.decomposition_direct;
      x["reject_has_no_maps_to_a"] = r.reject_has_no_maps_to_a;
      x["complement_is_summand"] = r.complement_is_summand;
      out.push_back(std::string("weak-d2 ") + side_name(side) + ": " + yes_no(r.weak_d2) + " (Hom(_R S, _R A) dim " +
                    std::to_string(r.hom_dim) + ", Psi rank " + std::to_string(r.psi_rank) + ", reject dim " +
                    std::to_string(r.reject_dim) + ")");
      j[side_name(side)] = std::move(x);
    }
    return j;
  }

  Json run_split(std::vector<std::string>& out) {
    const auto r = check_split_extension(ext_);
    Json j;
    j["verdict"] = r.projection.has_value();
    if (r.projection) j["certificate"] = split_json(*r.projection);
    j["hom_dim"] = r.hom_dim;
    j["restriction_rank"] = r.restriction_rank;
    const std::size_t db = ext_.base->dim();
    j["witness"] = r.projection ? Json(nullptr)
                                : Json{{"reason", "id_B outside the span of E o map over Hom_{B-B}(A, B)"},
                                       {"restriction_rank", r.restriction_rank},
                                       {"hom_dim", r.hom_dim}};
    out.push_back("split: " + yes_no(r.projection.has_value()) + " (Hom_{B-B}(A,B) dim " + std::to_string(r.hom_dim) +
                  ", restrictions span " + std::to_string(r.restriction_rank) + " in End(B) of dim " +
                  std::to_string(db * db) + ")");
    return j;
  }

  std::vector<std::pair<std::string, Subspace<F>>> ideals() {
    const auto& a = *ext_.total;
    std::vector<std::pair<std::string, Subspace<F>>> out;
    if (file_ && !file_->ideals.empty()) {
      for (const auto& [name, gens] : file_->ideals) out.emplace_back(name, ideal_generated(a, gens));
      return out;
    }
    for (std::size_t i = 0; i < a.dim(); ++i) {
      auto sub = ideal_generated(a, {a.basis(i)});
      if (sub.dim() == a.dim()) continue;
      bool seen = false;
      for (const auto& o : out) seen = seen || o.second == sub;
      if (!seen) out.emplace_back("generated-by-e" + std::to_string(i), std::move(sub));
    }
    return out;
  }

  Json run_normal(std::vector<std::string>& out) {
    Json list = Json::array();
    bool all = true;
    for (const auto& [name, ideal] : ideals()) {
      const auto r = check_normal_wrt_ideal(ext_, ideal);
      Json x;
      x["ideal"] = name;
      x["ideal_dim"] = ideal.dim();
      x["ideal_basis"] = vectors_json(ideal.basis_vectors());
      x["invariant"] = r.invariant;
      x["centralizer_dim"] = r.centralizer_dim;
      x["contracted_dim"] = r.contracted_dim;
      x["left_span_dim"] = r.left_span_dim;
      x["right_span_dim"] = r.right_span_dim;
      all = all && r.invariant;
      out.push_back("normal wrt " + name + " (dim " + std::to_string(ideal.dim()) + "): " + yes_no(r.invariant) +
                    " (C(R cap I) dim " + std::to_string(r.left_span_dim) + ", (R cap I)C dim " +
                    std::to_string(r.right_span_dim) + ")");
      list.push_back(std::move(x));
    }
    if (list.empty()) out.push_back("normal: no proper ideal to test");
    return Json{{"all_invariant", all}, {"ideals", std::move(list)}};
  }

  Json run_balanced(std::vector<std::string>& out) {
    const auto r = balanced_and_invariants(ext_);
    Json j;
    j["b_dim"] = r.b_dim;
    j["invariants_dim"] = r.invariants.dim();
    j["double_centralizer_dim"] = r.double_centralizer.dim();
    j["b_in_invariants"] = r.b_in_invariants;
    j["invariants_in_double_centralizer"] = r.invariants_in_w;
    j["end_ab_dim"] = r.end_ab_dim;
    j["double_end_ab_dim"] = r.double_end_ab_dim;
    j["ab_balanced"] = r.ab_balanced;
    j["end_ba_dim"] = r.end_ba_dim;
    j["double_end_ba_dim"] = r.double_end_ba_dim;
    j["ba_balanced"] = r.ba_balanced;
    out.push_back("balanced: A_B " + yes_no(r.ab_balanced) + ", _B A " + yes_no(r.ba_balanced) + " (dim A^S " +
                  std::to_string(r.invariants.dim()) + ", dim V_A(V_A(B)) " +
                  std::to_string(r.double_centralizer.dim()) + ")");
    return j;
  }

  Json run_galois(std::vector<std::string>& out) {
    Json j;
    for (Side side : sides()) {
      const auto r = check_left_galois(side == Side::Left ? ext_ : opposite(ext_), req_.dim_guard);
      Json x;
      x["verdict"] = r.galois;
      x["precondition"] = r.precondition;
      x["rs_projective"] = r.rs_projective;
      x["tensor_dim"] = r.tensor_dim;
      x["end_dim"] = r.end_dim;
      x["j_rank"] = r.j_rank;
      x["j_bijective"] = r.j_bijective;
      x["invariants_dim"] = r.invariants.dim();
      x["invariants_equal_b"] = r.invariants_equal_b;
      out.push_back(std::string("galois ") + side_name(side) + ": " + yes_no(r.galois) + " (j rank " +
                    std::to_string(r.j_rank) + " of " + std::to_string(r.end_dim) + ")");
      j[side_name(side)] = std::move(x);
    }
    return j;
  }

  Json run_group_galois(std::vector<std::string>& out) {
    if (!file_ || file_->automorphisms.empty())
      throw InputError("group-galois needs an 'automorphisms' list in the extension file");
    const auto r = check_group_galois(ext_, file_->automorphisms);
    Json j;
    j["verdict"] = r.galois;
    j["group_order"] = file_->automorphisms.size();
    j["ab_projective"] = r.ab_projective;
    j["smash_dim"] = r.smash_dim;
    j["end_dim"] = r.end_dim;
    j["j_rank"] = r.j_rank;
    j["j_bijective"] = r.j_bijective;
    j["invariants_dim"] = r.invariants.dim();
    j["invariants_equal_b"] = r.invariants_equal_b;
    out.push_back("group-galois: " + yes_no(r.galois) + " (|G| = " + std::to_string(file_->automorphisms.size()) +
                  ", j rank " + std::to_string(r.j_rank) + " of " + std::to_string(r.end_dim) + ")");
    return j;
  }

  Json run_hochschild(std::vector<std::string>& out) {
    const auto h = build_hochschild(ext_, req_.degree_cap, req_.dim_guard);
    const auto dims = cohomology_dims(h);
    const bool sq_zero = coboundary_squares_to_zero(h);
    const auto leib = check_leibniz(h);
    Json j;
    j["degree_cap"] = h.cap;
    j["cochain_dims"] = dims.cochain_dims;
    j["coboundary_ranks"] = dims.coboundary_ranks;
    j["cohomology_dims"] = dims.cohomology;
    j["coboundary_squares_to_zero"] = sq_zero;
    j["leibniz"] = Json{{"ok", leib.ok}, {"checked", leib.checked}};
    Json mats = Json::array();
    for (const auto& d : h.coboundary) mats.push_back(matrix_json(d));
    j["coboundary_matrices"] = std::move(mats);
    j["unit_cochain"] = vector_json(unit_cochain(h).coords);
    out.push_back("hochschild: dim C^n = " + dims_text(dims.cochain_dims) + ", rank d_n = " +
                  dims_text(dims.coboundary_ranks) + ", dim H^n = " + dims_text(dims.cohomology));
    out.push_back("  d^2 = 0: " + yes_no(sq_zero) + ", Leibniz on " + std::to_string(leib.checked) +
                  " basis pairs: " + yes_no(leib.ok));
    const auto& right = d2(Side::Right);
    Json gen = Json::array();
    if (right.certificate) {
      for (std::size_t n = 1; n <= h.cap; ++n) {
        const auto g = generation_isomorphism(h, s(), ts(), *right.certificate, n, req_.dim_guard);
        gen.push_back(Json{{"degree", n},
                           {"tensor_dim", g.tensor_dim},
                           {"cochain_dim", g.cochain_dim},
                           {"forward_then_inverse", g.forward_then_inverse},
                           {"inverse_then_forward", g.inverse_then_forward},
                           {"verified", g.verified()}});
        out.push_back("  S^(x)_R " + std::to_string(n) + " -> C^" + std::to_string(n) + ": " +
                      (g.verified() ? "isomorphism verified" : "NOT an isomorphism") + " (dims " +
                      std::to_string(g.tensor_dim) + ", " + std::to_string(g.cochain_dim) + ")");
      }
      j["generation"] = std::move(gen);
    } else {
      j["generation"] = Json{{"applicable", false}, {"reason", "not right depth two"}};
      out.push_back("  generation by degree one: not applicable (not right depth two)");
    }
    return j;
  }

  Json run_cod2(std::vector<std::string>& out) {
    const auto& c = ctx();
    const auto& q = sq();
    const auto& res = cod2();
    const auto e = end_dd(c);
    const auto e_iso = end_to_cotensor_iso(c, q, e);
    const auto lemma = dual_centralizer_iso(c);
    const auto hc_sq = hom_to_c_iso(c, q.dc);
    const auto hc_c = hom_to_c_iso(c, c.c_dc());
    Json j;
    j["verdict"] = res.is_cod2();
    j["cotensor_dim"] = q.dim();
    j["algebra_tensor_square_dim"] = ts().dim();
    j["diagonal_lands"] = q.under_delta_lands;
    j["left_retraction_splits"] = q.left_retraction_splits;
    j["right_retraction_splits"] = q.right_retraction_splits;
    j["end_dim"] = e.dim();
    j["isomorphisms"] = Json{{"end_to_cotensor_hom", e_iso.verified()},
                             {"end_to_dual_centralizer", lemma.iso.verified()},
                             {"end_to_dual_centralizer_anti", lemma.anti_multiplicative},
                             {"cotensor_hom_to_invariants", hc_sq.verified()},
                             {"hom_to_invariants", hc_c.verified()}};
    if (res.certificate) {
      if (!verify_cod2(c, q, *res.certificate)) throw std::logic_error("emitted coD2 quasibase fails");
      j["N"] = res.certificate->count();
      j["certificate"] = cod2_json(*res.certificate);
    }
    j["witness"] = witness_json(res.witness);
    out.push_back("cod2: " + yes_no(res.is_cod2()) +
                  (res.certificate ? " (N = " + std::to_string(res.certificate->count()) + ", residual zero)"
                                   : " (witness: " + witness_text(witness_json(res.witness)) + ")"));
    out.push_back("  dim C[]_D C = " + std::to_string(q.dim()) + ", dim A (x)_B A = " + std::to_string(ts().dim()) +
                  ", isomorphism round trips: " +
                  yes_no(e_iso.verified() && lemma.iso.verified() && hc_sq.verified() && hc_c.verified()));
    return j;
  }

  Json run_bialgebroid(std::vector<std::string>& out) {
    const auto& res = cod2();
    if (!res.certificate) {
      out.push_back("bialgebroid: not applicable (not codepth two)");
      return Json{{"applicable", false}, {"reason", "not codepth two"}};
    }
    const auto b = build_bialgebroid(ctx(), sq(), *res.certificate, req_.dim_guard);
    Json j;
    j["applicable"] = true;
    j["e_dim"] = b.e_dim;
    j["r_dim"] = b.r_dim;
    j["e_tensor_r_e_dim"] = b.ere_dim;
    j["hom_dim"] = b.hom_dim;
    j["axioms"] = Json{{"coring", b.axiom_coring()},
                       {"unit", b.axiom_unit()},
                       {"takeuchi", b.axiom_takeuchi()},
                       {"multiplicative", b.axiom_multiplicative()},
                       {"counit_module", b.axiom_counit_module()}};
    j["checks"] = Json{{"s_t_in_e", b.s_t_in_e},
                       {"source_homomorphism", b.source_homomorphism},
                       {"target_antihomomorphism", b.target_antihomomorphism},
                       {"source_target_commute", b.source_target_commute},
                       {"identification_iso", b.identification_iso},
                       {"distribution_law", b.distribution_law},
                       {"projective_dual_bases", b.projective_dual_bases},
                       {"delta_bilinear", b.delta_bilinear},
                       {"counit_left", b.counit_left},
                       {"counit_right", b.counit_right},
                       {"coassociative", b.coassociative}};
    j["source"] = matrices_json(b.source);
    j["target"] = matrices_json(b.target);
    j["delta"] = matrix_json(b.delta_e);
    j["epsilon"] = matrix_json(b.epsilon_e);
    out.push_back("bialgebroid: E dim " + std::to_string(b.e_dim) + " over R dim " + std::to_string(b.r_dim) +
                  ", axioms coring " + yes_no(b.axiom_coring()) + ", unit " + yes_no(b.axiom_unit()) + ", Takeuchi " +
                  yes_no(b.axiom_takeuchi()) + ", multiplicative " + yes_no(b.axiom_multiplicative()) +
                  ", counit module " + yes_no(b.axiom_counit_module()));
    return j;
  }

  Json run_bridge(std::vector<std::string>& out) {
    const bool co = cod2().is_cod2();
    const bool d = d2(Side::Left).is_d2();
    if (!co || !d) {
      out.push_back("bridge: not applicable (coD2 " + yes_no(co) + ", D2 of the dual " + yes_no(d) + ")");
      return Json{{"applicable", false}, {"cod2", co}, {"d2", d}};
    }
    const auto b = duality_bridge(ctx(), co, d);
    out.push_back("bridge: E dim " + std::to_string(b.e_dim) + " -> S dim " + std::to_string(b.s_dim) +
                  ", anti-multiplicative " + yes_no(b.anti_multiplicative) + ", injective " + yes_no(b.injective) +
                  ", bijective " + yes_no(b.bijective));
    return Json{{"applicable", true},         {"cod2", co},
                {"d2", d},                    {"e_dim", b.e_dim},
                {"s_dim", b.s_dim},           {"lands_in_s", b.lands_in_s},
                {"anti_multiplicative", b.anti_multiplicative}, {"injective", b.injective},
                {"bijective", b.bijective}};
  }

  AnalysisRequest req_;
  Extension<F> ext_;
  std::optional<ExtensionFile<F>> file_;
  std::optional<CoalgebraHom<F>> hom_;
  std::optional<CoContext<F>> ctx_;
  std::string input_kind_;
  std::optional<TensorSquare<F>> ts_;
  std::optional<EndAlgebra<F>> s_;
  std::optional<D2Result<F>> d2_left_, d2_right_;
  std::optional<CotensorSquare<F>> sq_;
  std::optional<CoD2Result<F>> cod2_;
};

inline void emit(const Report& rep, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << rep.json.dump(2) << "\n";
  } else {
    for (const auto& l : rep.text) out << l << "\n";
  }
}

// ---------------------------------------------------------------- build

struct BuildRequest {
  std::string name;
  std::size_t n = 2;
  std::string member = "triangular-over-diagonal";
  std::string over = "ground";
  bool transpose = false;
  std::vector<std::string> generators;
  std::vector<std::string> subgroup;
  std::string group_name = "G";
  std::string subgroup_name = "H";
  std::vector<std::string> files;
  std::string field;
};

template <class F>
Json build_extension(const BuildRequest& b, std::istream& in) {
  auto load = [&](const std::string& path) { return parse_extension_file<F>(read_json(path, in)).ext; };
  ExtensionFile<F> f;
  if (b.name == "matrix-family") {
    auto fam = build_matrix_family<F>(b.n);
    if (b.member == "triangular-over-diagonal") {
      f.ext = fam.triangular_over_diagonal;
      f.ideals.emplace_back("first-row", first_row_ideal(fam.triangular_over_diagonal, b.n).basis_vectors());
    } else if (b.member == "full-over-diagonal") {
      f.ext = fam.full_over_diagonal;
    } else if (b.member == "full-over-triangular") {
      f.ext = fam.full_over_triangular;
    } else {
      throw InputError("unknown matrix-family member '" + b.member + "'");
    }
  } else if (b.name == "exterior") {
    auto ex = build_exterior_example<F>();
    if (b.over == "ground")
      f.ext = ex.over_ground;
    else if (b.over == "center")
      f.ext = ex.over_center;
    else
      throw InputError("exterior: --over must be ground or center");
  } else if (b.name == "example-3-2") {
    f.ext = build_triangular_example<F>(b.transpose);
  } else if (b.name == "identity") {
    f.ext = identity_extension(share(matrix_algebra<F>(b.n)));
    f.ext.name = "M" + std::to_string(b.n) + "|M" + std::to_string(b.n);
  } else if (b.name == "group") {
    if (b.generators.empty()) throw InputError("group: give at least one --gen");
    const auto pair = group_pair_from_generators(b.generators, b.subgroup);
    f.ext = group_algebra_extension<F>(pair.group, pair.subgroup, b.group_name, b.subgroup_name);
    for (const auto& [name, sub] : augmentation_ideals(f.ext)) f.ideals.emplace_back(name, sub.basis_vectors());
  } else if (b.name == "product" || b.name == "tensor") {
    if (b.files.size() < 2) throw InputError(b.name + ": give at least two extension files");
    std::vector<Extension<F>> parts;
    for (const auto& p : b.files) parts.push_back(load(p));
    f.ext = b.name == "product" ? direct_product(parts).ext : tensor_product(parts);
  } else if (b.name == "matrix-of") {
    if (b.files.size() != 1) throw InputError("matrix-of: give exactly one extension file");
    f.ext = matrix_extension(load(b.files[0]), b.n);
  } else if (b.name == "dual") {
    if (b.files.size() != 1) throw InputError("dual: give exactly one extension file");
    return hom_json(dualize_extension(load(b.files[0])));
  } else if (b.name == "grouplike-counit") {
    auto h = counit_hom(std::make_shared<const Coalgebra<F>>(grouplike_coalgebra<F>(b.n)));
    h.name = "K^" + std::to_string(b.n) + "->K";
    return hom_json(h);
  } else {
    throw InputError("unknown builder '" + b.name + "'");
  }
  return extension_file_json(f);
}

// ---------------------------------------------------------------- verify

template <class F>
bool verify_certificate(const Json& cert, const Json& target, std::string& message) {
  const std::string kind = require_key(cert, "kind").get<std::string>();
  if (kind == "cod2") {
    const auto hom = is_hom_json(target) ? parse_hom<F>(target) : dualize_extension(parse_extension<F>(target));
    const auto ctx = make_context(hom);
    const auto sq = cotensor_square(ctx);
    const auto v = verify_cod2(ctx, sq, parse_cod2(ctx, sq, cert));
    message = v.ok ? "coD2 quasibase verified" : v.message;
    return v.ok;
  }
  const Extension<F> ext = is_hom_json(target) ? make_context(parse_hom<F>(target)).dual_ext : parse_extension<F>(target);
  if (kind == "split") {
    const auto p = parse_matrix<F>(require_key(cert, "projection"), ext.base->dim(), ext.total->dim());
    const bool ok = (p * ext.map).is_identity() &&
                    is_homomorphism(p, representation(bimodule_over(ext, ext)),
                                    representation(regular_bimodule(ext.base)));
    message = ok ? "conditional expectation verified" : "projection is not a B-B-bimodule retraction of the map";
    return ok;
  }
  const auto ts = tensor_square(ext);
  if (kind == "quasibase") {
    const auto v = verify_quasibase(ts, parse_quasibase(ts, cert));
    message = v.ok ? "quasibase verified with zero residual" : v.message;
    return v.ok;
  }
  if (kind == "h-separability") {
    const bool ok = verify_h_separability(ts, parse_hsep(ts, cert));
    message = ok ? "H-separability certificate verified" : "H-separability identity fails";
    return ok;
  }
  if (kind == "separability") {
    const bool ok = verify_separability_element(ts, parse_vector<F>(require_key(cert, "e"), ts.dim()));
    message = ok ? "separability element verified" : "element is not a separability element";
    return ok;
  }
  throw InputError("unknown certificate kind '" + kind + "'");
}

// ---------------------------------------------------------------- entry point

inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DimensionGuard& e) {
    err << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const DegreeCapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& e) {
    err << "error: bad input: " << e.what() << "\n";
    return kExitInput;
  } catch (const AlgebraError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Depth two, separability and codepth two analysis of finite-dimensional extensions", "depthtwo"};
  app.require_subcommand(1);

  BuildRequest breq;
  auto* build = app.add_subcommand("build", "Write a catalog extension or coalgebra map as JSON");
  build->add_option("name", breq.name,
                    "matrix-family, exterior, example-3-2, identity, group, product, tensor, matrix-of, dual, "
                    "grouplike-counit")
      ->required();
  build->add_option("files", breq.files, "Extension files for product, tensor, matrix-of and dual");
  build->add_option("--n", breq.n, "Matrix size or number of grouplikes")->check(CLI::Range(1, 64));
  build->add_option("--member", breq.member,
                    "matrix-family member: triangular-over-diagonal, full-over-diagonal, full-over-triangular");
  build->add_option("--over", breq.over, "exterior: ground or center");
  build->add_flag("--transpose", breq.transpose, "example-3-2: lower-triangular variant");
  build->add_option("--gen", breq.generators, "group: generator of G (cycle or one-line notation)");
  build->add_option("--sub", breq.subgroup, "group: generator of H");
  build->add_option("--group-name", breq.group_name);
  build->add_option("--subgroup-name", breq.subgroup_name);
  build->add_option("--field", breq.field, "q or fp:<p>");

  AnalysisRequest areq;
  auto* analyze = app.add_subcommand("analyze", "Run analyses on an extension or coalgebra map");
  std::vector<std::string> flagged;
  for (const auto& name : analysis_names())
    analyze->add_flag_callback("--" + name, [&flagged, name] { flagged.push_back(name); }, "Run the " + name + " analysis");
  std::vector<std::string> named;
  analyze->add_option("--run", named, "Analysis by name (repeatable)");
  analyze->add_option("--side", areq.side, "left, right or both")->check(CLI::IsMember({"left", "right", "both"}));
  analyze->add_option("--field", areq.field, "q or fp:<p>");
  analyze->add_option("--degree-cap", areq.degree_cap, "Highest Hochschild degree")->check(CLI::Range(1, 8));
  analyze->add_option("--dim-guard", areq.dim_guard, "Largest tensor product dimension")->check(CLI::PositiveNumber);
  analyze->add_option("--out", areq.out, "text or json")->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("input", areq.input, "Extension or coalgebra-map JSON, or - for standard input");

  std::string cert_path, target_path, vfield;
  auto* verify = app.add_subcommand("verify", "Re-verify a certificate against an extension");
  verify->add_option("certificate", cert_path)->required();
  verify->add_option("extension", target_path)->required();
  verify->add_option("--field", vfield, "q or fp:<p>");

  std::vector<const char*> argv{"depthtwo"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (build->parsed()) {
    return guarded(err, [&] {
      const FieldSpec f = choose_field(breq.field, nullptr);
      const Json j = with_field(f, [&](auto tag) { return build_extension<decltype(tag)>(breq, in); });
      out << j.dump(2) << "\n";
      return kExitOk;
    });
  }

  if (analyze->parsed()) {
    return guarded(err, [&] {
      for (const auto& n : named)
        if (std::find(analysis_names().begin(), analysis_names().end(), n) == analysis_names().end())
          throw InputError("unknown analysis '" + n + "'");
      for (const auto& name : analysis_names())
        if (std::count(flagged.begin(), flagged.end(), name) || std::count(named.begin(), named.end(), name))
          areq.analyses.push_back(name);
      if (areq.analyses.empty()) throw InputError("no analysis requested");
      const Json input = read_json(areq.input, in);
      const FieldSpec f = choose_field(areq.field, &input);
      const Report rep = with_field(f, [&](auto tag) { return Analyzer<decltype(tag)>(input, areq).run(); });
      emit(rep, areq.out, out);
      return kExitOk;
    });
  }

  return guarded(err, [&] {
    const Json cert = read_json(cert_path, in);
    const Json target = read_json(target_path, in);
    const FieldSpec f = choose_field(vfield, &cert);
    std::string message;
    const bool ok =
        with_field(f, [&](auto tag) { return verify_certificate<decltype(tag)>(cert, target, message); });
    (ok ? out : err) << (ok ? "valid: " : "invalid: ") << message << "\n";
    return ok ? kExitOk : kExitInvalid;
  });
}

}  // namespace depthtwo::cli
