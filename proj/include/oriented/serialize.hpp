#pragma once

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "oriented/cohomology.hpp"
#include "oriented/conner_floyd.hpp"
#include "oriented/errors.hpp"
#include "oriented/fgl.hpp"
#include "oriented/hopf.hpp"
#include "oriented/lazard.hpp"
#include "oriented/presented_ring.hpp"
#include "oriented/ring_map.hpp"
#include "oriented/thom.hpp"
#include "oriented/towers.hpp"

// Canonical JSON. Keys are emitted in a fixed order, optional keys only when
// present, polynomial terms in the ring's term order (leading term first),
// coefficients as strings. Reading canonical text and writing it back gives
// the same bytes.

namespace oriented {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// The canonical text of a document: two-space indent, trailing newline.
inline std::string canonical_text(const Json& j) { return j.dump(2) + "\n"; }

/// Parses text, reporting the byte offset of a syntax error.
inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed JSON in " + what + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object()) throw InputError(what + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(what + " is missing \"" + key + "\"");
  return *it;
}

inline int int_field(const Json& j, const char* key, const std::string& what) {
  const Json& v = field(j, key, what);
  if (!v.is_number_integer()) throw InputError(what + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

inline void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      throw InputError(what + ": unexpected key \"" + it.key() + "\"");
}

}  // namespace detail

// ---- integers and matrices ----

/// Machine-size integers as JSON numbers, anything larger as a string.
inline Json integer_to_json(const mpz_class& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());
}

inline mpz_class integer_from_json(const Json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    mpz_class v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw InputError("bad integer \"" + j.get<std::string>() + "\"");
    return v;
  }
  throw InputError("expected an integer, got " + j.dump());
}

inline Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.cols; ++k) row.push_back(integer_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

/// A list of rows; `cols` fixes the width, which an empty list cannot carry.
inline IntMatrix matrix_from_json(const Json& j, std::size_t cols, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be a list of rows");
  IntMatrix m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw InputError(what + ": row " + std::to_string(i) + " needs " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = integer_from_json(j[i][k]);
  }
  return m;
}

inline Json invariants_to_json(const CokernelInvariants& c) {
  Json t = Json::array();
  for (const auto& v : c.torsion) t.push_back(v.get_str());
  return Json{{"rank", c.free_rank}, {"torsion", t}};
}

// ---- base rings, polynomials, presentations, maps ----

inline Json base_to_json(const BaseRing& b) {
  Json j;
  switch (b.scalar_kind()) {
    case ScalarKind::Integers: j["scalars"] = "Integers"; break;
    case ScalarKind::Rationals: j["scalars"] = "Rationals"; break;
    case ScalarKind::IntegersModuloN:
      j["scalars"] = "IntegersModuloN";
      j["modulus"] = b.modulus().get_str();
      break;
  }
  if (b.has_laurent()) j["laurent"] = Json{{"symbol", b.symbol()}, {"weight", b.symbol_weight()}};
  return j;
}

inline BaseRing base_from_json(const Json& j) {
  const std::string what = "base ring";
  detail::only_keys(j, {"scalars", "modulus", "laurent"}, what);
  const Json& s = detail::field(j, "scalars", what);
  if (!s.is_string()) throw InputError("base ring \"scalars\" must be a string");
  BaseRing b = BaseRing::integers();
  const std::string kind = s.get<std::string>();
  if (kind == "Integers") {
    b = BaseRing::integers();
  } else if (kind == "Rationals") {
    b = BaseRing::rationals();
  } else if (kind == "IntegersModuloN") {
    b = BaseRing::integers_mod(integer_from_json(detail::field(j, "modulus", what)));
  } else {
    throw InputError("unknown scalars \"" + kind + "\" (expected Integers, IntegersModuloN, Rationals)");
  }
  if (kind != "IntegersModuloN" && j.contains("modulus")) throw InputError("modulus given for " + kind);
  if (j.contains("laurent")) {
    const Json& l = j["laurent"];
    const Json& sym = detail::field(l, "symbol", "laurent");
    if (!sym.is_string()) throw InputError("laurent symbol must be a string");
    b = BaseRing::laurent(b, sym.get<std::string>(), detail::int_field(l, "weight", "laurent"));
  }
  return b;
}

inline Json variables_to_json(const std::vector<Variable>& vars) {
  Json out = Json::array();
  for (const auto& v : vars) {
    Json j{{"name", v.name}, {"weight", v.weight}};
    if (v.parameter) j["parameter"] = true;
    out.push_back(j);
  }
  return out;
}

inline std::vector<Variable> variables_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("variables must be a list");
  std::vector<Variable> out;
  for (const auto& v : j) {
    detail::only_keys(v, {"name", "weight", "parameter"}, "variable");
    const Json& name = detail::field(v, "name", "variable");
    if (!name.is_string()) throw InputError("variable name must be a string");
    Variable var{name.get<std::string>(), detail::int_field(v, "weight", "variable"), false};
    if (v.contains("parameter")) {
      if (!v["parameter"].is_boolean()) throw InputError("variable \"parameter\" must be a boolean");
      var.parameter = v["parameter"].get<bool>();
    }
    out.push_back(var);
  }
  return out;
}

/// [[exponents], "coefficient"] pairs, leading term first.
inline Json terms_to_json(const Polynomial& p) {
  Json out = Json::array();
  const BaseRing& base = p.ring()->base();
  for (const auto& [m, c] : p.terms()) {
    Json e = Json::array();
    for (auto x : m.exponents) e.push_back(x);
    out.push_back(Json::array({e, base.coeff_to_string(c)}));
  }
  return out;
}

inline Polynomial terms_from_json(const RingPtr& ring, const Json& j) {
  if (!j.is_array()) throw InputError("polynomial terms must be a list");
  Polynomial p(ring);
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_array() || !t[1].is_string())
      throw InputError("a term is [[exponents], \"coefficient\"], got " + t.dump());
    if (t[0].size() != ring->size())
      throw InputError("exponent vector " + t[0].dump() + " needs " + std::to_string(ring->size()) + " entries");
    Monomial m(ring->size());
    for (std::size_t i = 0; i < ring->size(); ++i) {
      if (!t[0][i].is_number_unsigned()) throw InputError("exponents must be non-negative integers");
      m[i] = t[0][i].get<std::uint32_t>();
    }
    p.add_term(m, ring->base().parse_coeff(t[1].get<std::string>()));
  }
  return p;
}

inline Json poly_ring_to_json(const PolyRing& r) {
  return Json{{"base", base_to_json(r.base())},
              {"variables", variables_to_json(r.variables())},
              {"truncation", r.truncation()},
              {"parameterTruncation", r.parameter_truncation()}};
}

inline RingPtr poly_ring_from_json(const Json& j) {
  const std::string what = "ring";
  const int pt = j.contains("parameterTruncation") ? detail::int_field(j, "parameterTruncation", what) : 0;
  return PolyRing::make(base_from_json(detail::field(j, "base", what)),
                        variables_from_json(detail::field(j, "variables", what)),
                        detail::int_field(j, "truncation", what), pt);
}

/// A polynomial together with its ambient ring.
inline Json polynomial_to_json(const Polynomial& p) {
  Json j = poly_ring_to_json(*p.ring());
  j["terms"] = terms_to_json(p);
  return j;
}

inline Polynomial polynomial_from_json(const Json& j) {
  detail::only_keys(j, {"base", "variables", "truncation", "parameterTruncation", "terms"}, "polynomial");
  return terms_from_json(poly_ring_from_json(j), detail::field(j, "terms", "polynomial"));
}

inline Json presented_ring_to_json(const PresentedRing& r) {
  Json j = poly_ring_to_json(*r.ring());
  Json rel = Json::array();
  for (const auto& p : r.relations()) rel.push_back(terms_to_json(p));
  j["relations"] = rel;
  return j;
}

inline PresentedRing presented_ring_from_json(const Json& j) {
  detail::only_keys(j, {"base", "variables", "truncation", "parameterTruncation", "relations"}, "presented ring");
  RingPtr ring = poly_ring_from_json(j);
  const Json& rel = detail::field(j, "relations", "presented ring");
  if (!rel.is_array()) throw InputError("relations must be a list");
  std::vector<Polynomial> rels;
  for (const auto& r : rel) rels.push_back(terms_from_json(ring, r));
  return PresentedRing(ring, rels);
}

inline Json ring_map_to_json(const RingMap& m) {
  Json images = Json::array();
  for (const auto& p : m.images()) images.push_back(terms_to_json(p));
  Json j{{"source", presented_ring_to_json(m.source())},
         {"target", presented_ring_to_json(m.target())},
         {"images", images}};
  if (m.symbol_image()) j["symbolImage"] = terms_to_json(*m.symbol_image());
  if (!m.checks_truncation()) j["relationsOnly"] = true;
  return j;
}

inline RingMap ring_map_from_json(const Json& j) {
  const std::string what = "ring map";
  detail::only_keys(j, {"source", "target", "images", "symbolImage", "relationsOnly"}, what);
  PresentedRing src = presented_ring_from_json(detail::field(j, "source", what));
  PresentedRing tgt = presented_ring_from_json(detail::field(j, "target", what));
  const Json& im = detail::field(j, "images", what);
  if (!im.is_array()) throw InputError("images must be a list");
  std::vector<Polynomial> images;
  for (const auto& t : im) images.push_back(terms_from_json(tgt.ring(), t));
  std::optional<Polynomial> symbol;
  if (j.contains("symbolImage")) symbol = terms_from_json(tgt.ring(), j["symbolImage"]);
  RingMap map(src, tgt, images, symbol);
  if (j.contains("relationsOnly") && j["relationsOnly"].get<bool>()) map = map.relations_only();
  return map;
}

// ---- formal group laws ----

/// {base, truncation, series, betaSymbol?, parameters?}. Series exponents run
/// over x, y, then the parameters.
inline Json fgl_to_json(const FormalGroupLaw& f) {
  Json j{{"base", base_to_json(f.base())}, {"truncation", f.truncation()}, {"series", terms_to_json(f.series())}};
  if (f.beta_symbol()) j["betaSymbol"] = *f.beta_symbol();
  if (!f.parameters().empty()) {
    Json rel = Json::array();
    for (const auto& p : f.parameter_relations()) rel.push_back(terms_to_json(p));
    j["parameters"] = Json{{"variables", variables_to_json(f.parameters())},
                           {"truncation", f.parameter_truncation()},
                           {"relations", rel}};
  }
  return j;
}

inline FormalGroupLaw fgl_from_json(const Json& j) {
  const std::string what = "formal group law";
  detail::only_keys(j, {"base", "truncation", "series", "betaSymbol", "parameters"}, what);
  const BaseRing base = base_from_json(detail::field(j, "base", what));
  const int d = detail::int_field(j, "truncation", what);
  std::vector<Variable> params;
  std::vector<std::string> relations;
  int pt = 0;
  if (j.contains("parameters")) {
    const Json& p = j["parameters"];
    detail::only_keys(p, {"variables", "truncation", "relations"}, "parameters");
    params = variables_from_json(detail::field(p, "variables", "parameters"));
    for (auto& v : params) v.parameter = true;
    pt = detail::int_field(p, "truncation", "parameters");
    const RingPtr pr = PolyRing::make(base, params, 0, pt);
    for (const auto& r : detail::field(p, "relations", "parameters"))
      relations.push_back(terms_from_json(pr, r).to_string());
  }
  std::vector<Variable> vars{{"x", 1, false}, {"y", 1, false}};
  vars.insert(vars.end(), params.begin(), params.end());
  if (d < 1) throw InputError("formal group law needs truncation at least 1");
  const RingPtr ring = PolyRing::make(base, vars, d, pt);
  const std::string series = terms_from_json(ring, detail::field(j, "series", what)).to_string();
  std::optional<std::string> beta;
  if (j.contains("betaSymbol")) {
    if (!j["betaSymbol"].is_string()) throw InputError("betaSymbol must be a string");
    beta = j["betaSymbol"].get<std::string>();
  }
  return FormalGroupLaw(base, series, d, beta, params, relations, pt);
}

// ---- space descriptors ----

inline Json space_to_json(const SpaceDescriptor& s) {
  using K = SpaceDescriptor::Kind;
  auto bundle = [&](Json body) {
    if (s.base && s.base->kind != K::Point) body["base"] = space_to_json(*s.base);
    if (!s.chern.empty()) body["chern"] = s.chern;
    return body;
  };
  switch (s.kind) {
    case K::Point: return Json{{"Point", Json::object()}};
    case K::ProjectiveSpace: return Json{{"Pn", s.n}};
    case K::InfiniteProjectiveSpace: return Json{{"Pinf", Json::object()}};
    case K::ProjectiveBundle: {
      Json body;
      body["base"] = s.base ? space_to_json(*s.base) : space_to_json(SpaceDescriptor::point());
      body["chern"] = s.chern;
      return Json{{"ProjectiveBundle", body}};
    }
    case K::FlagBundle: return Json{{"Flag", bundle(Json{{"n", s.n}})}};
    case K::GrassmannianBundle: return Json{{"Grassmannian", bundle(Json{{"m", s.m}, {"n", s.n}})}};
    case K::ClassifyingBGL: return s.infinite ? Json{{"BGL", "inf"}} : Json{{"BGL", s.n}};
    case K::Product: return Json{{"Product", Json::array({space_to_json(*s.left), space_to_json(*s.right)})}};
  }
  return Json();
}

inline SpaceDescriptor space_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "Point") return SpaceDescriptor::point();
  if (!j.is_object() || j.size() != 1)
    throw InputError("a space is an object with exactly one key such as {\"Pn\":2}, got " + j.dump());
  const std::string kind = j.begin().key();
  const Json& body = j.begin().value();
  auto nonneg = [&](const Json& v, const std::string& what) {
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 64)
      throw InputError(kind + ": " + what + " must be an integer in 0..64");
    return v.get<int>();
  };
  auto chern_of = [&](const Json& b) {
    std::vector<std::string> out;
    if (!b.contains("chern")) return out;
    for (const auto& c : b["chern"]) {
      if (!c.is_string()) throw InputError(kind + ": Chern classes are polynomial strings");
      out.push_back(c.get<std::string>());
    }
    return out;
  };
  auto attach_base = [&](SpaceDescriptor s, const Json& b) {
    if (b.contains("base")) s.base = std::make_shared<const SpaceDescriptor>(space_from_json(b["base"]));
    s.chern = chern_of(b);
    if (!s.chern.empty() && static_cast<int>(s.chern.size()) != s.n)
      throw InputError(kind + ": need exactly n Chern classes c_1..c_n");
    return s;
  };
  if (kind == "Point") return SpaceDescriptor::point();
  if (kind == "Pn") return SpaceDescriptor::projective(nonneg(body, "n"));
  if (kind == "Pinf") return SpaceDescriptor::infinite_projective();
  if (kind == "ProjectiveBundle") {
    detail::only_keys(body, {"base", "chern"}, kind);
    SpaceDescriptor base = body.contains("base") ? space_from_json(body["base"]) : SpaceDescriptor::point();
    std::vector<std::string> chern = chern_of(body);
    if (chern.empty()) throw InputError("ProjectiveBundle needs the Chern classes of V");
    return SpaceDescriptor::projective_bundle(base, chern);
  }
  if (kind == "Flag") {
    if (body.is_number_integer()) return SpaceDescriptor::flag(nonneg(body, "n"));
    detail::only_keys(body, {"n", "base", "chern"}, kind);
    return attach_base(SpaceDescriptor::flag(nonneg(detail::field(body, "n", kind), "n")), body);
  }
  if (kind == "Grassmannian") {
    detail::only_keys(body, {"m", "n", "base", "chern"}, kind);
    const int m = nonneg(detail::field(body, "m", kind), "m");
    const int n = nonneg(detail::field(body, "n", kind), "n");
    if (m > n) throw InputError("Grassmannian needs m <= n");
    return attach_base(SpaceDescriptor::grassmannian(m, n), body);
  }
  if (kind == "BGL") {
    if (body.is_string() && body.get<std::string>() == "inf") return SpaceDescriptor::bgl_infinite();
    return SpaceDescriptor::bgl(nonneg(body, "n"));
  }
  if (kind == "Product") {
    if (!body.is_array() || body.size() != 2) throw InputError("Product takes a list of two spaces");
    return SpaceDescriptor::product(space_from_json(body[0]), space_from_json(body[1]));
  }
  throw InputError("unknown space kind \"" + kind +
                   "\" (expected Point, Pn, Pinf, ProjectiveBundle, Flag, Grassmannian, BGL, Product)");
}

// ---- towers ----

inline Json module_to_json(const FPModule& m) {
  return Json{{"generators", m.generators}, {"relations", matrix_to_json(m.relations)}};
}

inline FPModule module_from_json(const Json& j) {
  detail::only_keys(j, {"generators", "relations"}, "module");
  const int g = detail::int_field(j, "generators", "module");
  if (g < 0) throw InputError("module generators must be non-negative");
  const auto n = static_cast<std::size_t>(g);
  const Json rel = j.contains("relations") ? j["relations"] : Json::array();
  return FPModule(n, matrix_from_json(rel, n, "module relations"));
}

namespace detail {

inline Json stages_to_json(const std::vector<std::vector<FPModule>>& stages) {
  Json out = Json::array();
  for (const auto& s : stages) {
    Json row = Json::array();
    for (const auto& m : s) row.push_back(module_to_json(m));
    out.push_back(row);
  }
  return out;
}

inline std::vector<std::vector<FPModule>> stages_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("stages must be a list of per-weight module lists");
  std::vector<std::vector<FPModule>> out;
  for (const auto& s : j) {
    if (!s.is_array()) throw InputError("each stage is a list of modules, one per weight");
    std::vector<FPModule> row;
    for (const auto& m : s) row.push_back(module_from_json(m));
    out.push_back(row);
  }
  return out;
}

inline Json maps_to_json(const std::vector<std::vector<IntMatrix>>& maps) {
  Json out = Json::array();
  for (const auto& k : maps) {
    Json row = Json::array();
    for (const auto& m : k) row.push_back(matrix_to_json(m));
    out.push_back(row);
  }
  return out;
}

/// maps[k][w] with shape rows(k, w) x cols(k, w).
template <class Rows, class Cols>
std::vector<std::vector<IntMatrix>> maps_from_json(const Json& j, std::size_t count, std::size_t weights, Rows rows,
                                                   Cols cols, const std::string& what) {
  if (!j.is_array() || j.size() != count)
    throw InputError(what + " needs " + std::to_string(count) + " entries");
  std::vector<std::vector<IntMatrix>> out;
  for (std::size_t k = 0; k < count; ++k) {
    if (!j[k].is_array() || j[k].size() != weights)
      throw InputError(what + " " + std::to_string(k) + " needs one matrix per weight");
    std::vector<IntMatrix> row;
    for (std::size_t w = 0; w < weights; ++w) {
      const std::string label = what + " " + std::to_string(k) + ", weight " + std::to_string(w);
      IntMatrix m = matrix_from_json(j[k][w], cols(k, w), label);
      if (m.rows != rows(k, w)) throw InputError(label + " needs " + std::to_string(rows(k, w)) + " rows");
      row.push_back(std::move(m));
    }
    out.push_back(std::move(row));
  }
  return out;
}

inline Json periodicity_to_json(const Periodicity& p) { return Json{{"start", p.start}, {"period", p.period}}; }

inline Periodicity periodicity_from_json(const Json& j) {
  detail::only_keys(j, {"start", "period"}, "periodicity");
  const int s = int_field(j, "start", "periodicity"), p = int_field(j, "period", "periodicity");
  if (s < 0 || p < 1) throw InputError("periodicity needs start >= 0 and period >= 1");
  return {static_cast<std::size_t>(s), static_cast<std::size_t>(p)};
}

inline std::size_t uniform_weights(const std::vector<std::vector<FPModule>>& stages) {
  if (stages.empty()) throw InputError("at least one stage is needed");
  for (const auto& s : stages)
    if (s.size() != stages.front().size()) throw InputError("every stage needs the same weights");
  return stages.front().size();
}

}  // namespace detail

/// stages[k][w] modules, maps[k][w] : M_(k+1) -> M_k with rows acting on the right.
inline Json tower_to_json(const ModuleTower& t) {
  Json j{{"stages", detail::stages_to_json(t.stages)}, {"maps", detail::maps_to_json(t.maps)}};
  if (t.periodicity) j["periodicity"] = detail::periodicity_to_json(*t.periodicity);
  if (!t.surjective_declared.empty()) {
    Json flags = Json::array();
    for (const auto& f : t.surjective_declared) flags.push_back(f ? Json(*f) : Json(nullptr));
    j["surjective"] = flags;
  }
  return j;
}

inline ModuleTower tower_from_json(const Json& j) {
  detail::only_keys(j, {"stages", "maps", "periodicity", "surjective"}, "tower");
  ModuleTower t;
  t.stages = detail::stages_from_json(detail::field(j, "stages", "tower"));
  const std::size_t wc = detail::uniform_weights(t.stages);
  t.maps = detail::maps_from_json(
      detail::field(j, "maps", "tower"), t.stages.size() - 1, wc,
      [&](std::size_t k, std::size_t w) { return t.stages[k + 1][w].generators; },
      [&](std::size_t k, std::size_t w) { return t.stages[k][w].generators; }, "tower map");
  if (j.contains("periodicity")) t.periodicity = detail::periodicity_from_json(j["periodicity"]);
  if (j.contains("surjective")) {
    for (const auto& f : j["surjective"]) {
      if (f.is_null())
        t.surjective_declared.push_back(std::nullopt);
      else if (f.is_boolean())
        t.surjective_declared.push_back(f.get<bool>());
      else
        throw InputError("surjectivity flags are true, false or null");
    }
  }
  t.validate();
  return t;
}

/// maps[k][w] : M_k -> M_(k+1).
inline Json telescope_to_json(const TelescopeDiagram& t) {
  Json j{{"stages", detail::stages_to_json(t.stages)}, {"maps", detail::maps_to_json(t.maps)}};
  if (t.periodicity) j["periodicity"] = detail::periodicity_to_json(*t.periodicity);
  return j;
}

inline TelescopeDiagram telescope_from_json(const Json& j) {
  detail::only_keys(j, {"stages", "maps", "periodicity"}, "telescope");
  TelescopeDiagram t;
  t.stages = detail::stages_from_json(detail::field(j, "stages", "telescope"));
  const std::size_t wc = detail::uniform_weights(t.stages);
  t.maps = detail::maps_from_json(
      detail::field(j, "maps", "telescope"), t.stages.size() - 1, wc,
      [&](std::size_t k, std::size_t w) { return t.stages[k][w].generators; },
      [&](std::size_t k, std::size_t w) { return t.stages[k + 1][w].generators; }, "telescope map");
  if (j.contains("periodicity")) t.periodicity = detail::periodicity_from_json(j["periodicity"]);
  t.validate();
  return t;
}

/// Input of the retract comparison: towers Y and Z with r : Y -> Z and s : Z -> Y.
struct SplitTowerInput {
  ModuleTower y;
  ModuleTower z;
  StageMaps r;
  StageMaps s;
};

inline Json split_input_to_json(const SplitTowerInput& in) {
  return Json{{"split", Json{{"Y", tower_to_json(in.y)},
                             {"Z", tower_to_json(in.z)},
                             {"r", detail::maps_to_json(in.r)},
                             {"s", detail::maps_to_json(in.s)}}}};
}

inline SplitTowerInput split_input_from_json(const Json& j) {
  detail::only_keys(j, {"split"}, "split input");
  const Json& b = detail::field(j, "split", "split input");
  detail::only_keys(b, {"Y", "Z", "r", "s"}, "split input");
  SplitTowerInput in;
  in.y = tower_from_json(detail::field(b, "Y", "split input"));
  in.z = tower_from_json(detail::field(b, "Z", "split input"));
  if (in.y.stages.size() != in.z.stages.size() || in.y.weight_count() != in.z.weight_count())
    throw InputError("towers Y and Z need the same stages and weights");
  const std::size_t n = in.y.stages.size(), wc = in.y.weight_count();
  in.r = detail::maps_from_json(
      detail::field(b, "r", "split input"), n, wc,
      [&](std::size_t k, std::size_t w) { return in.y.stages[k][w].generators; },
      [&](std::size_t k, std::size_t w) { return in.z.stages[k][w].generators; }, "r");
  in.s = detail::maps_from_json(
      detail::field(b, "s", "split input"), n, wc,
      [&](std::size_t k, std::size_t w) { return in.z.stages[k][w].generators; },
      [&](std::size_t k, std::size_t w) { return in.y.stages[k][w].generators; }, "s");
  return in;
}

// ---- reports ----

inline Json axiom_check_to_json(const AxiomCheck& c) {
  Json j{{"pass", c.pass}};
  if (!c.pass) {
    j["monomial"] = c.monomial;
    j["left"] = c.left;
    j["right"] = c.right;
  }
  return j;
}

inline Json axiom_report_to_json(const AxiomReport& r) {
  return Json{{"unit", axiom_check_to_json(r.unit)},
              {"commutativity", axiom_check_to_json(r.commutativity)},
              {"associativity", axiom_check_to_json(r.associativity)},
              {"allPass", r.all_pass()}};
}

/// A univariate series as its text and its terms.
inline Json series_to_json(const Polynomial& p) {
  return Json{{"text", p.to_string()}, {"terms", terms_to_json(p)}};
}

inline Json ranks_to_json(const std::vector<std::size_t>& ranks) {
  Json out = Json::array();
  for (auto r : ranks) out.push_back(r);
  return out;
}

inline Json graded_piece_to_json(const GradedPiece& p, const PolyRing& ring) {
  Json basis = Json::array();
  for (const auto& m : p.basis) basis.push_back(detail::monomial_string(ring, m));
  Json t = Json::array();
  for (const auto& v : p.torsion) t.push_back(v.get_str());
  Json j{{"weight", p.weight}, {"rank", p.free_rank}, {"torsion", t}, {"basis", basis}};
  if (!p.note.empty()) j["note"] = p.note;
  return j;
}

inline Json homology_dual_to_json(const HomologyDual& h, const BaseRing& base) {
  Json pieces = Json::array();
  for (const auto& p : h.pieces) {
    Json table = Json::array();
    for (const auto& row : p.pairing) {
      Json r = Json::array();
      for (const auto& c : row) r.push_back(base.coeff_to_string(c));
      table.push_back(r);
    }
    pieces.push_back(Json{{"weight", p.weight}, {"labels", p.labels}, {"dualTo", p.dual_to}, {"pairing", table}});
  }
  return Json{{"pieces", pieces}, {"unimodular", h.unimodular}};
}

inline Json invariance_to_json(const InvarianceReport& r) {
  Json j{{"n", r.n}, {"truncation", r.truncation}, {"monomialsChecked", r.monomials_checked}, {"pass", r.pass}};
  if (!r.pass) j["failure"] = r.failure;
  return j;
}

inline Json isomorphism_report_to_json(const IsomorphismReport& r) {
  Json weights = Json::array();
  for (const auto& w : r.weights) {
    Json st = Json::array(), tt = Json::array();
    for (const auto& v : w.source_torsion) st.push_back(v.get_str());
    for (const auto& v : w.target_torsion) tt.push_back(v.get_str());
    Json j{{"weight", w.weight},     {"sourceRank", w.source_rank}, {"targetRank", w.target_rank},
           {"sourceTorsion", st},    {"targetTorsion", tt},         {"bijective", w.bijective}};
    if (!w.note.empty()) j["note"] = w.note;
    weights.push_back(j);
  }
  Json j{{"isomorphism", r.isomorphism}, {"weights", weights}};
  if (r.first_failure) j["firstFailure"] = *r.first_failure;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json conner_floyd_to_json(const ConnerFloydReport& r) {
  return Json{{"instance", r.instance},
              {"truncation", r.truncation},
              {"cobordismRanks", ranks_to_json(r.cobordism_ranks)},
              {"left", ranks_to_json(r.base_changed_ranks)},
              {"right", ranks_to_json(r.k_theory_ranks)},
              {"relationsMatch", r.relations_match},
              {"comparison", isomorphism_report_to_json(r.comparison)},
              {"verdict", r.verdict}};
}

/// Basis labels of weight w in the cohomology term order, and the
/// permutation taking the Hopf basis order to it.
inline std::vector<std::size_t> canonical_sigma_order(const HopfData& h, int w) {
  std::vector<std::size_t> order(h.basis[w].size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const PolyRing& ring = *h.cohomology->ring();
  std::vector<Monomial> monos;
  for (const auto& a : h.basis[w]) monos.push_back(h.sigma_monomial(a).leading().first);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ring.compare(monos[a], monos[b]) > 0; });
  return order;
}

inline Json primitives_to_json(const HopfData& h, const PrimitiveBasis& p) {
  const auto order = canonical_sigma_order(h, p.weight);
  Json labels = Json::array();
  for (auto i : order) labels.push_back(partition_label(h.basis[p.weight][i], "sigma"));
  Json vectors = Json::array();
  for (std::size_t r = 0; r < p.vectors.rows; ++r) {
    Json v = Json::array();
    for (auto i : order) v.push_back(integer_to_json(p.vectors(r, i)));
    vectors.push_back(v);
  }
  return Json{{"weight", p.weight}, {"rank", p.rank()}, {"monomials", labels}, {"vectors", vectors},
              {"elements", p.elements}};
}

inline Json coproduct_to_json(const HopfData& h, const Partition& alpha) {
  Json terms = Json::array();
  for (const auto& [key, c] : h.coproduct(alpha))
    terms.push_back(Json::array({partition_label(key.first, "sigma"), partition_label(key.second, "sigma"), c.get_str()}));
  return Json{{"element", partition_label(alpha, "sigma")}, {"terms", terms}};
}

inline Json additive_to_json(const AdditiveReport& r, const BaseRing& base) {
  Json weights = Json::array();
  for (const auto& w : r.weights) {
    Json j{{"weight", w.weight},
           {"primitiveRank", w.primitive_rank},
           {"lineRank", w.line_rank},
           {"determinant", base.coeff_to_string(w.determinant)},
           {"bijective", w.bijective}};
    if (!w.note.empty()) j["note"] = w.note;
    weights.push_back(j);
  }
  return Json{{"weights", weights}, {"isomorphism", r.isomorphism}};
}

inline Json indecomposables_to_json(const IndecomposablesReport& r, const BaseRing& base) {
  Json t = Json::array();
  for (const auto& v : r.torsion) t.push_back(v.get_str());
  return Json{{"weight", r.weight},       {"squareRank", r.square_rank},
              {"rank", r.rank},           {"torsion", t},
              {"basis", r.basis},         {"pairingDeterminant", base.coeff_to_string(r.pairing_determinant)},
              {"unimodular", r.unimodular}};
}

inline Json thom_decomposition_to_json(const ThomDecomposition& dec) {
  Json pieces = Json::array();
  for (const auto& piece : dec.pieces) {
    Json ranks = Json::array(), labels = Json::array();
    for (const auto& fp : piece.weights) {
      ranks.push_back(fp.free_rank);
      Json l = Json::array();
      for (const auto& p : fp.basis) l.push_back(partition_label(p, "b"));
      labels.push_back(l);
    }
    pieces.push_back(Json{{"level", piece.level}, {"ranks", ranks}, {"labels", labels}});
  }
  Json classes = Json::array();
  for (const auto& c : dec.thom_classes) classes.push_back(partition_label(c, "b"));
  return Json{{"truncation", dec.truncation},
              {"pieces", pieces},
              {"thomClasses", classes},
              {"pieceTotals", ranks_to_json(dec.piece_totals)},
              {"bglRanks", ranks_to_json(dec.bgl_ranks)},
              {"consistent", dec.consistent}};
}

inline Json thom_product_to_json(const ThomProductReport& r) {
  Json j{{"p", r.p},
         {"q", r.q},
         {"productsChecked", r.products_checked},
         {"filtrationCompatible", r.filtration_compatible},
         {"thomMultiplicative", r.thom_multiplicative},
         {"commutative", r.commutative},
         {"squareCommutes", r.square_commutes},
         {"pass", r.pass()}};
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

inline Json thom_iso_to_json(const ThomIsoReport& r) {
  Json weights = Json::array();
  for (const auto& w : r.weights)
    weights.push_back(Json{{"weight", w.weight},
                           {"pieceRank", w.piece_rank},
                           {"shiftedBglRank", w.shifted_bgl_rank},
                           {"bijective", w.bijective}});
  return Json{{"n", r.n}, {"weights", weights}, {"isomorphism", r.isomorphism}};
}

inline Json limit_to_json(const LimitResult& r) {
  Json j{{"weight", r.weight},
         {"lim", invariants_to_json(r.lim)},
         {"limExact", r.lim_exact},
         {"lim1", r.lim1},
         {"lim1Zero", r.lim1_zero},
         {"lim1Exact", r.lim1_exact},
         {"mittagLeffler", r.mittag_leffler},
         {"kernelStable", r.kernel_stable},
         {"partial", r.partial}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json colimit_to_json(const ColimitResult& r) {
  Json j{{"weight", r.weight}, {"value", invariants_to_json(r.value)}};
  if (r.localized_at) j["localizedAt"] = r.localized_at->get_str();
  j["finitelyGenerated"] = r.finitely_generated;
  j["partial"] = r.partial;
  j["description"] = r.description;
  return j;
}

inline Json split_report_to_json(const SplitTowerReport& r) {
  Json weights = Json::array();
  for (const auto& w : r.weights) {
    Json comp = Json::array();
    for (const auto& c : w.complement) comp.push_back(invariants_to_json(c));
    weights.push_back(Json{{"weight", w.weight},
                           {"Y", limit_to_json(w.y)},
                           {"Z", limit_to_json(w.z)},
                           {"complement", comp},
                           {"complementMapZero", w.complement_map_zero},
                           {"agree", w.agree}});
  }
  Json j{{"hypothesesHold", r.hypotheses_hold}};
  if (r.first_bad_weight) j["firstBadWeight"] = *r.first_bad_weight;
  if (!r.failure.empty()) j["failure"] = r.failure;
  j["weights"] = weights;
  j["pass"] = r.pass();
  return j;
}

// ---- schemas ----

namespace detail {

inline Json object_schema(Json properties, std::vector<std::string> required) {
  return Json{{"type", "object"}, {"properties", std::move(properties)}, {"required", std::move(required)},
              {"additionalProperties", false}};
}

inline Json ref(const std::string& name) { return Json{{"$ref", "#/schemas/" + name}}; }
inline Json list_of(Json items) { return Json{{"type", "array"}, {"items", std::move(items)}}; }
inline Json integer_value() {
  return Json{{"oneOf", Json::array({Json{{"type", "integer"}}, Json{{"type", "string"}, {"pattern", "^-?[0-9]+$"}}})}};
}

}  // namespace detail

/// Every input and output document, versioned as a whole.
inline Json all_schemas() {
  using detail::list_of;
  using detail::object_schema;
  using detail::ref;
  const Json integer{{"type", "integer"}};
  const Json boolean{{"type", "boolean"}};
  const Json string{{"type", "string"}};
  const Json term{{"type", "array"},
                  {"prefixItems", Json::array({list_of(Json{{"type", "integer"}, {"minimum", 0}}), string})},
                  {"minItems", 2},
                  {"maxItems", 2}};
  const Json matrix = list_of(list_of(detail::integer_value()));

  Json s;
  s["BaseRing"] = object_schema(
      Json{{"scalars", Json{{"enum", Json::array({"Integers", "IntegersModuloN", "Rationals"})}}},
           {"modulus", string},
           {"laurent", object_schema(Json{{"symbol", string}, {"weight", integer}}, {"symbol", "weight"})}},
      {"scalars"});
  s["Variable"] =
      object_schema(Json{{"name", string}, {"weight", Json{{"type", "integer"}, {"minimum", 1}}}, {"parameter", boolean}},
                    {"name", "weight"});
  s["Terms"] = Json{{"description", "[exponent-vector, coefficient-string] pairs, leading term first"},
                    {"type", "array"},
                    {"items", term}};
  const Json ring_props{{"base", ref("BaseRing")},
                        {"variables", list_of(ref("Variable"))},
                        {"truncation", integer},
                        {"parameterTruncation", integer}};
  Json poly = ring_props;
  poly["terms"] = ref("Terms");
  s["Polynomial"] = object_schema(poly, {"base", "variables", "truncation", "terms"});
  Json pr = ring_props;
  pr["relations"] = list_of(ref("Terms"));
  s["PresentedRing"] = object_schema(pr, {"base", "variables", "truncation", "relations"});
  s["RingMap"] = object_schema(Json{{"source", ref("PresentedRing")},
                                    {"target", ref("PresentedRing")},
                                    {"images", list_of(ref("Terms"))},
                                    {"symbolImage", ref("Terms")},
                                    {"relationsOnly", boolean}},
                               {"source", "target", "images"});
  s["FormalGroupLaw"] = object_schema(
      Json{{"base", ref("BaseRing")},
           {"truncation", Json{{"type", "integer"}, {"minimum", 1}}},
           {"series", Json{{"description", "terms over x, y, then the parameters"}, {"$ref", "#/schemas/Terms"}}},
           {"betaSymbol", string},
           {"parameters", object_schema(Json{{"variables", list_of(ref("Variable"))},
                                             {"truncation", integer},
                                             {"relations", list_of(ref("Terms"))}},
                                        {"variables", "truncation", "relations"})}},
      {"base", "truncation", "series"});
  const Json small{{"type", "integer"}, {"minimum", 0}};
  const Json bundle_props{{"base", ref("SpaceDescriptor")}, {"chern", list_of(string)}};
  Json flag = bundle_props, grass = bundle_props;
  flag["n"] = small;
  grass["m"] = small;
  grass["n"] = small;
  s["SpaceDescriptor"] = Json{
      {"description", "an object with exactly one key naming the space"},
      {"oneOf",
       Json::array({object_schema(Json{{"Point", Json{{"type", "object"}}}}, {"Point"}),
                    object_schema(Json{{"Pn", small}}, {"Pn"}),
                    object_schema(Json{{"Pinf", Json{{"type", "object"}}}}, {"Pinf"}),
                    object_schema(Json{{"ProjectiveBundle", object_schema(bundle_props, {"chern"})}}, {"ProjectiveBundle"}),
                    object_schema(Json{{"Flag", Json{{"oneOf", Json::array({small, object_schema(flag, {"n"})})}}}},
                                  {"Flag"}),
                    object_schema(Json{{"Grassmannian", object_schema(grass, {"m", "n"})}}, {"Grassmannian"}),
                    object_schema(Json{{"BGL", Json{{"oneOf", Json::array({small, Json{{"const", "inf"}}})}}}}, {"BGL"}),
                    object_schema(Json{{"Product", Json{{"type", "array"},
                                                        {"items", ref("SpaceDescriptor")},
                                                        {"minItems", 2},
                                                        {"maxItems", 2}}}},
                                  {"Product"})})}};
  s["Module"] = object_schema(Json{{"generators", small}, {"relations", matrix}}, {"generators"});
  const Json stages = list_of(list_of(ref("Module")));
  const Json maps = list_of(list_of(matrix));
  const Json periodicity =
      object_schema(Json{{"start", small}, {"period", Json{{"type", "integer"}, {"minimum", 1}}}}, {"start", "period"});
  s["ModuleTower"] = object_schema(
      Json{{"stages", stages},
           {"maps", Json{{"description", "maps[k][w] : M_(k+1),w -> M_k,w, rows act on the right"},
                         {"type", "array"},
                         {"items", list_of(matrix)}}},
           {"periodicity", periodicity},
           {"surjective", list_of(Json{{"type", Json::array({"boolean", "null"})}})}},
      {"stages", "maps"});
  s["TelescopeDiagram"] = object_schema(
      Json{{"stages", stages},
           {"maps", Json{{"description", "maps[k][w] : M_k,w -> M_(k+1),w"}, {"type", "array"}, {"items", list_of(matrix)}}},
           {"periodicity", periodicity}},
      {"stages", "maps"});
  s["SplitTowers"] = object_schema(
      Json{{"split", object_schema(Json{{"Y", ref("ModuleTower")}, {"Z", ref("ModuleTower")}, {"r", maps}, {"s", maps}},
                                   {"Y", "Z", "r", "s"})}},
      {"split"});
  const Json invariants = object_schema(Json{{"rank", small}, {"torsion", list_of(string)}}, {"rank", "torsion"});
  const Json ranks = list_of(small);
  s["CohomologyReport"] = Json{
      {"type", "object"},
      {"required", Json::array({"schemaVersion", "space", "theory", "truncation", "ranks", "pieces", "presentation"})},
      {"properties", Json{{"ranks", ranks}, {"presentation", ref("PresentedRing")}}}};
  s["HopfReport"] = Json{
      {"type", "object"},
      {"required", Json::array({"schemaVersion", "theory", "truncation", "ranks", "primitives", "additive",
                                "indecomposables", "coproducts"})},
      {"properties",
       Json{{"ranks", ranks},
            {"primitives",
             list_of(object_schema(Json{{"weight", small},
                                        {"rank", small},
                                        {"monomials", list_of(string)},
                                        {"vectors", list_of(list_of(detail::integer_value()))},
                                        {"elements", list_of(string)}},
                                   {"weight", "rank", "monomials", "vectors", "elements"}))}}}};
  s["ThomReport"] = Json{
      {"type", "object"},
      {"required", Json::array({"schemaVersion", "theory", "truncation", "decomposition", "products", "thomIsomorphism"})},
      {"properties",
       Json{{"decomposition",
             Json{{"type", "object"},
                  {"properties",
                   Json{{"pieces", list_of(object_schema(
                                       Json{{"level", small}, {"ranks", ranks}, {"labels", list_of(list_of(string))}},
                                       {"level", "ranks", "labels"}))}}}}}}}};
  s["TowerReport"] = Json{{"type", "object"},
                          {"required", Json::array({"schemaVersion", "weights"})},
                          {"properties", Json{{"weights", list_of(Json{{"type", "object"},
                                                                       {"properties", Json{{"lim", invariants},
                                                                                           {"lim1", string}}}})}}}};
  s["TelescopeReport"] =
      Json{{"type", "object"},
           {"required", Json::array({"schemaVersion", "weights"})},
           {"properties", Json{{"weights", list_of(Json{{"type", "object"},
                                                        {"properties", Json{{"value", invariants},
                                                                            {"description", string}}}})}}}};
  s["ConnerFloydReport"] =
      Json{{"type", "object"},
           {"required",
            Json::array({"schemaVersion", "instance", "truncation", "left", "right", "comparison", "verdict"})},
           {"properties", Json{{"instance", string},
                               {"truncation", integer},
                               {"left", ranks},
                               {"right", ranks},
                               {"verdict", Json{{"enum", Json::array({"isomorphism", "not an isomorphism"})}}}}}};
  s["FglReport"] = Json{{"type", "object"},
                        {"required", Json::array({"schemaVersion", "law", "axioms", "inverse", "nSeries", "logarithm"})},
                        {"properties", Json{{"law", ref("FormalGroupLaw")}}}};
  s["LazardReport"] = Json{{"type", "object"},
                           {"required", Json::array({"schemaVersion", "truncation", "ranks", "presentation"})},
                           {"properties", Json{{"ranks", ranks}, {"presentation", ref("PresentedRing")}}}};
  s["RestrictionReport"] =
      Json{{"type", "object"},
           {"required", Json::array({"schemaVersion", "source", "target", "map", "surjective", "wellDefined"})},
           {"properties", Json{{"map", ref("RingMap")}, {"surjective", list_of(Json{{"type", Json::array({"boolean", "null"})}})}}}};
  return Json{{"schemaVersion", kSchemaVersion}, {"schemas", s}};
}

}  // namespace oriented
