#pragma once

// JSON forms of algebras, extensions, coalgebras, coalgebra maps and
// certificates.  Scalars are written as strings ("p/q" or an integer) and read
// from strings or JSON integers.  Keys keep insertion order, so output is
// byte-stable.

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "depthtwo/cocore.hpp"
#include "depthtwo/depth.hpp"

namespace depthtwo {

using Json = nlohmann::ordered_json;

/// "q" or "fp:<p>".
struct FieldSpec {
  std::uint64_t p = 0;  // 0 for the rationals
  std::string name() const { return p == 0 ? "q" : "fp:" + std::to_string(p); }
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

inline FieldSpec parse_field(const std::string& text) {
  if (text == "q" || text == "Q") return {};
  if (text.rfind("fp:", 0) == 0) {
    const std::string digits = text.substr(3);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad field '" + text + "'");
    const std::uint64_t p = std::stoull(digits);
    if (!ModP::is_prime(p) || p > ModP::kMaxModulus) throw ParseError("field modulus " + digits + " is not a usable prime");
    return {p};
  }
  throw ParseError("bad field '" + text + "' (expected q or fp:<p>)");
}

template <class F>
std::string field_name() {
  return FieldTraits<F>::name();
}

template <class F>
Json scalar_json(const F& x) {
  return x.to_string();
}

template <class F>
F parse_scalar(const Json& j) {
  if (j.is_string()) return FieldTraits<F>::from_rational(Rational::parse(j.get<std::string>()));
  if (j.is_number_integer()) return FieldTraits<F>::from_rational(Rational::parse(std::to_string(j.get<long long>())));
  throw ParseError("scalar must be a string or an integer, got " + j.dump());
}

template <class F>
Json vector_json(const Vector<F>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_json(x));
  return a;
}

template <class F>
Vector<F> parse_vector(const Json& j, std::size_t expected) {
  if (!j.is_array()) throw ParseError("expected an array of scalars");
  if (j.size() != expected)
    throw ParseError("expected " + std::to_string(expected) + " scalars, got " + std::to_string(j.size()));
  Vector<F> v;
  for (const auto& x : j) v.push_back(parse_scalar<F>(x));
  return v;
}

/// Row-major list of rows.
template <class F>
Json matrix_json(const Matrix<F>& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row_vector(i)));
  return a;
}

template <class F>
Matrix<F> parse_matrix(const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows)
    throw ParseError("expected a matrix with " + std::to_string(rows) + " rows");
  std::vector<Vector<F>> r;
  for (const auto& row : j) r.push_back(parse_vector<F>(row, cols));
  return Matrix<F>::from_rows(r, cols);
}

template <class F>
Json vectors_json(const std::vector<Vector<F>>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(vector_json(v));
  return a;
}

template <class F>
Json matrices_json(const std::vector<Matrix<F>>& ms) {
  Json a = Json::array();
  for (const auto& m : ms) a.push_back(matrix_json(m));
  return a;
}

inline const Json& require_key(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing key '") + key + "'");
  return j.at(key);
}

inline std::size_t parse_dim(const Json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ParseError("dimension must be a non-negative integer");
  return j.get<std::size_t>();
}

/// Rejects data written over F_p when another field is requested.
inline void check_field(const Json& j, const std::string& requested) {
  if (!j.contains("field")) return;
  const auto f = parse_field(j.at("field").get<std::string>());
  if (f.p != 0 && f.name() != requested)
    throw ParseError("data is over " + f.name() + " but the analysis field is " + requested);
}

// ---------------------------------------------------------------- algebras and extensions

template <class F>
Json algebra_json(const Algebra<F>& a) {
  const std::size_t d = a.dim();
  Json c = Json::array();
  for (std::size_t i = 0; i < d; ++i) {
    Json ci = Json::array();
    for (std::size_t j = 0; j < d; ++j) {
      Json cij = Json::array();
      for (std::size_t k = 0; k < d; ++k) cij.push_back(scalar_json(a.c(i, j, k)));
      ci.push_back(std::move(cij));
    }
    c.push_back(std::move(ci));
  }
  Json out;
  out["name"] = a.name();
  out["dim"] = d;
  out["field"] = field_name<F>();
  out["structure_constants"] = std::move(c);
  out["unit"] = vector_json(a.unit());
  return out;
}

template <class F>
Algebra<F> parse_algebra(const Json& j) {
  check_field(j, field_name<F>());
  const std::size_t d = parse_dim(require_key(j, "dim"));
  const auto& c = require_key(j, "structure_constants");
  if (!c.is_array() || c.size() != d) throw ParseError("structure_constants must be dim x dim x dim");
  Vector<F> constants(d * d * d, F(0));
  for (std::size_t i = 0; i < d; ++i) {
    if (!c[i].is_array() || c[i].size() != d) throw ParseError("structure_constants must be dim x dim x dim");
    for (std::size_t j2 = 0; j2 < d; ++j2) {
      const auto v = parse_vector<F>(c[i][j2], d);
      for (std::size_t k = 0; k < d; ++k) constants[(i * d + j2) * d + k] = v[k];
    }
  }
  Algebra<F> a(d, std::move(constants), parse_vector<F>(require_key(j, "unit"), d),
               j.contains("name") ? j.at("name").get<std::string>() : std::string{});
  if (auto v = validate_algebra(a); !v) throw ParseError("invalid algebra: " + v.message);
  return a;
}

/// An extension file: the extension plus optional named ideals (generators in A)
/// and an optional list of automorphisms of A over B.
template <class F>
struct ExtensionFile {
  Extension<F> ext;
  std::vector<std::pair<std::string, std::vector<Vector<F>>>> ideals;
  std::vector<Matrix<F>> automorphisms;
};

template <class F>
Json extension_json(const Extension<F>& e) {
  Json out;
  out["name"] = e.name;
  out["field"] = field_name<F>();
  out["base"] = algebra_json(*e.base);
  out["total"] = algebra_json(*e.total);
  out["map_matrix"] = matrix_json(e.map.transpose());  // row i is the image of base basis element i
  return out;
}

template <class F>
Json extension_file_json(const ExtensionFile<F>& f) {
  Json out = extension_json(f.ext);
  if (!f.ideals.empty()) {
    Json ideals = Json::array();
    for (const auto& [name, gens] : f.ideals) {
      Json i;
      i["name"] = name;
      i["generators"] = vectors_json(gens);
      ideals.push_back(std::move(i));
    }
    out["ideals"] = std::move(ideals);
  }
  if (!f.automorphisms.empty()) out["automorphisms"] = matrices_json(f.automorphisms);
  return out;
}

template <class F>
ExtensionFile<F> parse_extension_file(const Json& j) {
  check_field(j, field_name<F>());
  ExtensionFile<F> f;
  auto base = share(parse_algebra<F>(require_key(j, "base")));
  auto total = share(parse_algebra<F>(require_key(j, "total")));
  const Matrix<F> rows = parse_matrix<F>(require_key(j, "map_matrix"), base->dim(), total->dim());
  f.ext = {base, total, rows.transpose(), j.contains("name") ? j.at("name").get<std::string>() : std::string{}};
  if (auto v = validate_extension(f.ext); !v) throw ParseError("invalid extension: " + v.message);
  if (j.contains("ideals"))
    for (const auto& i : j.at("ideals")) {
      std::vector<Vector<F>> gens;
      for (const auto& g : require_key(i, "generators")) gens.push_back(parse_vector<F>(g, total->dim()));
      f.ideals.emplace_back(require_key(i, "name").get<std::string>(), std::move(gens));
    }
  if (j.contains("automorphisms"))
    for (const auto& m : j.at("automorphisms")) f.automorphisms.push_back(parse_matrix<F>(m, total->dim(), total->dim()));
  return f;
}

template <class F>
Extension<F> parse_extension(const Json& j) {
  return parse_extension_file<F>(j).ext;
}

// ---------------------------------------------------------------- coalgebras

template <class F>
Json coalgebra_json(const Coalgebra<F>& c) {
  const std::size_t d = c.dim;
  Json dc = Json::array();
  for (std::size_t k = 0; k < d; ++k) {
    Json dk = Json::array();
    for (std::size_t i = 0; i < d; ++i) {
      Json dki = Json::array();
      for (std::size_t j = 0; j < d; ++j) dki.push_back(scalar_json(c.delta(i * d + j, k)));
      dk.push_back(std::move(dki));
    }
    dc.push_back(std::move(dk));
  }
  Json out;
  out["name"] = c.name;
  out["dim"] = d;
  out["field"] = field_name<F>();
  out["delta_constants"] = std::move(dc);
  out["counit"] = vector_json(c.counit);
  return out;
}

template <class F>
Coalgebra<F> parse_coalgebra(const Json& j) {
  check_field(j, field_name<F>());
  const std::size_t d = parse_dim(require_key(j, "dim"));
  const auto& dc = require_key(j, "delta_constants");
  if (!dc.is_array() || dc.size() != d) throw ParseError("delta_constants must be dim x dim x dim");
  Vector<F> flat(d * d * d, F(0));
  for (std::size_t k = 0; k < d; ++k) {
    if (!dc[k].is_array() || dc[k].size() != d) throw ParseError("delta_constants must be dim x dim x dim");
    for (std::size_t i = 0; i < d; ++i) {
      const auto v = parse_vector<F>(dc[k][i], d);
      for (std::size_t jj = 0; jj < d; ++jj) flat[(k * d + i) * d + jj] = v[jj];
    }
  }
  auto c = Coalgebra<F>::from_constants(d, flat, parse_vector<F>(require_key(j, "counit"), d),
                                        j.contains("name") ? j.at("name").get<std::string>() : std::string{});
  if (auto v = validate_coalgebra(c); !v) throw ParseError("invalid coalgebra: " + v.message);
  return c;
}

template <class F>
Json hom_json(const CoalgebraHom<F>& h) {
  Json out;
  out["name"] = h.name;
  out["field"] = field_name<F>();
  out["source"] = coalgebra_json(*h.source);
  out["target"] = coalgebra_json(*h.target);
  out["matrix"] = matrix_json(h.g);  // dim D x dim C, column j is g(e_j)
  return out;
}

template <class F>
CoalgebraHom<F> parse_hom(const Json& j) {
  check_field(j, field_name<F>());
  CoalgebraHom<F> h;
  h.source = std::make_shared<const Coalgebra<F>>(parse_coalgebra<F>(require_key(j, "source")));
  h.target = std::make_shared<const Coalgebra<F>>(parse_coalgebra<F>(require_key(j, "target")));
  h.g = parse_matrix<F>(require_key(j, "matrix"), h.target->dim, h.source->dim);
  h.name = j.contains("name") ? j.at("name").get<std::string>() : std::string{};
  if (auto v = validate_coalgebra_hom(h); !v) throw ParseError("invalid coalgebra map: " + v.message);
  return h;
}

inline bool is_hom_json(const Json& j) { return j.is_object() && j.contains("source") && j.contains("matrix"); }

// ---------------------------------------------------------------- certificates

template <class F>
Json quasibase_json(const TensorSquare<F>& ts, const QuasibaseCertificate<F>& c, bool residual_checked) {
  Json out;
  out["kind"] = "quasibase";
  out["field"] = field_name<F>();
  out["side"] = side_name(c.side);
  out["N"] = c.count();
  Json basis = Json::array();
  for (const auto& [a, b] : ts.tensor.section) basis.push_back(Json::array({a, b}));
  out["t_basis"] = std::move(basis);  // quotient basis of A (x)_B A as pairs of A-basis indices
  out["t"] = vectors_json(c.t);
  out["beta"] = matrices_json(c.beta);
  out["residual_checked"] = residual_checked;
  return out;
}

template <class F>
QuasibaseCertificate<F> parse_quasibase(const TensorSquare<F>& ts, const Json& j) {
  check_field(j, field_name<F>());
  QuasibaseCertificate<F> c;
  const auto side = require_key(j, "side").get<std::string>();
  if (side != "left" && side != "right") throw ParseError("side must be left or right");
  c.side = side == "left" ? Side::Left : Side::Right;
  const std::size_t n = parse_dim(require_key(j, "N"));
  const auto& t = require_key(j, "t");
  const auto& beta = require_key(j, "beta");
  if (t.size() != n || beta.size() != n) throw ParseError("N does not match the lengths of t and beta");
  const std::size_t d = ts.algebra().dim();
  for (std::size_t i = 0; i < n; ++i) {
    c.t.push_back(parse_vector<F>(t[i], ts.dim()));
    c.beta.push_back(parse_matrix<F>(beta[i], d, d));
  }
  return c;
}

template <class F>
Json hsep_json(const HSeparabilityCertificate<F>& c) {
  Json out;
  out["kind"] = "h-separability";
  out["field"] = field_name<F>();
  out["N"] = c.r.size();
  out["r"] = vectors_json(c.r);
  out["e"] = vectors_json(c.e);
  return out;
}

template <class F>
HSeparabilityCertificate<F> parse_hsep(const TensorSquare<F>& ts, const Json& j) {
  check_field(j, field_name<F>());
  HSeparabilityCertificate<F> c;
  const auto& r = require_key(j, "r");
  const auto& e = require_key(j, "e");
  if (!r.is_array() || !e.is_array() || r.size() != e.size()) throw ParseError("r and e must be lists of equal length");
  for (std::size_t i = 0; i < r.size(); ++i) {
    c.r.push_back(parse_vector<F>(r[i], ts.algebra().dim()));
    c.e.push_back(parse_vector<F>(e[i], ts.dim()));
  }
  return c;
}

template <class F>
Json separability_json(const Vector<F>& e) {
  Json out;
  out["kind"] = "separability";
  out["field"] = field_name<F>();
  out["e"] = vector_json(e);
  return out;
}

template <class F>
Json split_json(const Matrix<F>& projection) {
  Json out;
  out["kind"] = "split";
  out["field"] = field_name<F>();
  out["projection"] = matrix_json(projection);
  return out;
}

template <class F>
Json cod2_json(const CoD2Certificate<F>& c) {
  Json out;
  out["kind"] = "cod2";
  out["field"] = field_name<F>();
  out["side"] = "left";
  out["N"] = c.count();
  out["eta"] = vectors_json(c.eta);
  out["alpha"] = matrices_json(c.alpha);
  out["residual_checked"] = true;
  return out;
}

template <class F>
CoD2Certificate<F> parse_cod2(const CoContext<F>& ctx, const CotensorSquare<F>& sq, const Json& j) {
  check_field(j, field_name<F>());
  CoD2Certificate<F> c;
  const auto& eta = require_key(j, "eta");
  const auto& alpha = require_key(j, "alpha");
  if (!eta.is_array() || !alpha.is_array() || eta.size() != alpha.size())
    throw ParseError("eta and alpha must be lists of equal length");
  for (std::size_t i = 0; i < eta.size(); ++i) {
    c.eta.push_back(parse_vector<F>(eta[i], sq.dim()));
    c.alpha.push_back(parse_matrix<F>(alpha[i], ctx.dc(), ctx.dc()));
  }
  return c;
}

template <class F>
Json witness_json(const SummandWitness<F>& w) {
  Json out;
  out["hom_out_dim"] = w.hom_out_dim;
  out["hom_in_dim"] = w.hom_in_dim;
  out["composite_span_dim"] = w.composite_span_dim;
  out["end_dim"] = w.end_dim ? Json(*w.end_dim) : Json(nullptr);
  out["codimension"] = w.codimension() ? Json(*w.codimension()) : Json(nullptr);
  return out;
}

}  // namespace depthtwo
