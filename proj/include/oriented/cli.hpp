#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oriented/cohomology.hpp"
#include "oriented/conner_floyd.hpp"
#include "oriented/fgl.hpp"
#include "oriented/hopf.hpp"
#include "oriented/lazard.hpp"
#include "oriented/serialize.hpp"
#include "oriented/symmetric.hpp"
#include "oriented/thom.hpp"
#include "oriented/towers.hpp"

namespace oriented::cli {

enum Exit { kOk = 0, kVerificationFailed = 1, kInputError = 2 };

/// Which subcommand reaches each library operation, and the report key that
/// carries its result.
struct Coverage {
  const char* module;
  const char* operation;
  const char* subcommand;
  const char* key;
};

inline const std::vector<Coverage>& coverage_table() {
  static const std::vector<Coverage> table = {
      {"algebra-kernel", "normal_form", "cohomology", "normalForm"},
      {"algebra-kernel", "graded_basis", "cohomology", "pieces"},
      {"algebra-kernel", "graded_rank_snf", "fgl-lazard", "snf"},
      {"algebra-kernel", "elementary_symmetric_decompose", "cohomology", "symmetricDecomposition"},
      {"algebra-kernel", "ringmap_check_and_apply", "restriction", "image"},
      {"algebra-kernel", "is_graded_isomorphism", "conner-floyd", "comparison"},
      {"fgl", "make_additive", "fgl-check", "law"},
      {"fgl", "make_multiplicative", "fgl-check", "law"},
      {"fgl", "check_axioms", "fgl-check", "axioms"},
      {"fgl", "formal_inverse", "fgl-check", "inverse"},
      {"fgl", "n_series", "fgl-check", "nSeries"},
      {"fgl", "logarithm", "fgl-check", "logarithm"},
      {"fgl", "lazard_ring", "fgl-lazard", "presentation"},
      {"fgl", "lazard_graded_ranks", "fgl-lazard", "ranks"},
      {"fgl", "classifying_map", "fgl-lazard", "classifying"},
      {"oriented-cohomology", "cohomology", "cohomology", "presentation"},
      {"oriented-cohomology", "chern_tensor", "cohomology", "chernTensor"},
      {"oriented-cohomology", "restriction_map", "restriction", "map"},
      {"oriented-cohomology", "homology_dual", "cohomology", "homologyDual"},
      {"oriented-cohomology", "invariance_check", "cohomology", "invariance"},
      {"hopf-bgl", "build_hopf", "hopf-primitives", "coproducts"},
      {"hopf-bgl", "primitives", "hopf-primitives", "primitives"},
      {"hopf-bgl", "additive_maps_identification", "hopf-primitives", "additive"},
      {"hopf-bgl", "indecomposables", "hopf-primitives", "indecomposables"},
      {"thom-mgl", "thom_decompose", "thom-decompose", "decomposition"},
      {"thom-mgl", "thom_product_check", "thom-decompose", "products"},
      {"thom-mgl", "thom_iso_check", "thom-decompose", "thomIsomorphism"},
      {"towers", "telescope_colimit", "telescope", "weights"},
      {"towers", "tower_limit_and_lim1", "tower", "weights"},
      {"towers", "split_tower_compare", "tower", "split"},
      {"conner-floyd", "cobordism_presentation", "conner-floyd", "cobordismPresentation"},
      {"conner-floyd", "k_theory_presentation", "conner-floyd", "kTheoryPresentation"},
      {"conner-floyd", "verify_conner_floyd", "conner-floyd", "verdict"},
  };
  return table;
}

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"fgl-check", "fgl-lazard", "cohomology", "restriction",
                                                 "hopf-primitives", "thom-decompose", "tower", "telescope",
                                                 "conner-floyd", "schema"};
  return names;
}

struct Options {
  std::string subcommand;
  std::string input;
  std::string space;
  std::string target;
  std::string theory = "additive";
  std::string element;
  int truncation = 8;
  std::string format = "pretty";
  std::uint64_t seed = 0;
  long n = 2;
};

/// A finished computation: the JSON report, a table for csv/pretty output,
/// summary lines for pretty output, and the exit code.
struct Report {
  Json json;
  std::vector<std::vector<std::string>> table;  // header row first
  std::vector<std::string> summary;
  int exit = kOk;
};

/// Worker count from ORIENTED_WORKERS, default 1.
inline std::size_t worker_count() {
  const char* env = std::getenv("ORIENTED_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw InputError("ORIENTED_WORKERS must be a positive integer");
  return static_cast<std::size_t>(std::min<long>(v, 64));
}

/// fn(0..count-1) across workers; results in index order. The exception of
/// the lowest failing index is rethrown, so failures are deterministic too.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn fn) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::min(worker_count(), std::max<std::size_t>(count, 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Json input_json(const Options& o) {
  if (o.input.empty()) throw InputError(o.subcommand + " needs --input PATH");
  return parse_json(read_file(o.input), o.input);
}

inline SpaceDescriptor space_option(const std::string& text, const char* flag) {
  if (text.empty()) throw InputError(std::string("missing ") + flag);
  return space_from_json(parse_json(text, flag));
}

inline std::string yes(bool b) { return b ? "true" : "false"; }

inline std::string join(const Json& list, const std::string& sep = " ") {
  std::string out;
  for (const auto& v : list) {
    if (!out.empty()) out += sep;
    out += v.is_string() ? v.get<std::string>() : v.dump();
  }
  return out;
}

inline Json header(const Options& o) { return Json{{"schemaVersion", kSchemaVersion}, {"command", o.subcommand}}; }

inline void require_truncation(const Options& o) {
  if (o.truncation < 0 || o.truncation > 64) throw InputError("--truncation must be in 0..64");
}

}  // namespace detail

// ---- subcommands ----

inline Report run_fgl_check(const Options& o) {
  const FormalGroupLaw f = o.input.empty() ? theory_by_name(o.theory, std::max(o.truncation, 1)).law
                                           : fgl_from_json(detail::input_json(o));
  Report r;
  r.json = detail::header(o);
  r.json["law"] = fgl_to_json(f);
  const AxiomReport axioms = check_axioms(f);
  r.json["axioms"] = axiom_report_to_json(axioms);
  bool ok = axioms.all_pass();
  r.table = {{"check", "pass", "detail"}};
  auto row = [&](const std::string& name, const AxiomCheck& c) {
    r.table.push_back({name, detail::yes(c.pass), c.pass ? "" : c.monomial + ": " + c.left + " vs " + c.right});
  };
  row("unit", axioms.unit);
  row("commutativity", axioms.commutativity);
  row("associativity", axioms.associativity);

  const PresentedRing ux = f.univariate_ring();
  const Polynomial x = ux.variable("x");
  const Polynomial inv = formal_inverse(f);
  const bool inverse_ok = f.apply(x, inv, ux).is_zero();
  Json ij = series_to_json(inv);
  ij["cancels"] = inverse_ok;
  r.json["inverse"] = ij;
  r.table.push_back({"inverse", detail::yes(inverse_ok), "i(x) = " + inv.to_string()});
  ok = ok && inverse_ok;

  // [m+n](x) = F([m](x), [n](x)) on seeded samples
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<long> pick(-4, 4);
  Json samples = Json::array();
  bool additive_ok = true;
  for (int t = 0; t < 6; ++t) {
    const long a = pick(rng), b = pick(rng);
    const bool pass = ux.equal(n_series(f, a + b), f.apply(n_series(f, a), n_series(f, b), ux));
    samples.push_back(Json{{"m", a}, {"n", b}, {"pass", pass}});
    additive_ok = additive_ok && pass;
  }
  const Polynomial ns = n_series(f, o.n);
  Json nj = series_to_json(ns);
  nj = Json{{"n", o.n}, {"text", nj["text"]}, {"terms", nj["terms"]}, {"seed", o.seed}, {"samples", samples},
            {"pass", additive_ok}};
  r.json["nSeries"] = nj;
  r.table.push_back({"n-series", detail::yes(additive_ok), "[" + std::to_string(o.n) + "](x) = " + ns.to_string()});
  ok = ok && additive_ok;

  try {
    const Polynomial log = logarithm(f);
    const PresentedRing& xy = f.ring();
    const Polynomial lx = f.compose(log, xy.variable("x"), xy);
    const Polynomial ly = f.compose(log, xy.variable("y"), xy);
    const Polynomial lf = f.compose(log, f.apply(xy.variable("x"), xy.variable("y"), xy), xy);
    const bool linear = xy.equal(lf, lx + ly);
    Json lj = series_to_json(log);
    lj["linearizes"] = linear;
    r.json["logarithm"] = lj;
    r.table.push_back({"logarithm", detail::yes(linear), "l(x) = " + log.to_string()});
    ok = ok && linear;
  } catch (const NonDivisibleBase& e) {
    r.json["logarithm"] = Json{{"available", false}, {"weight", e.weight}, {"reason", e.what()}};
    r.table.push_back({"logarithm", "n/a", e.what()});
  }
  r.summary = {"law: F(x,y) = " + f.series().to_string() + " over " + f.base().describe(),
               "truncation: " + std::to_string(f.truncation()), std::string("verdict: ") + (ok ? "pass" : "FAIL")};
  r.json["pass"] = ok;
  r.exit = ok ? kOk : kVerificationFailed;
  return r;
}

inline Report run_fgl_lazard(const Options& o) {
  detail::require_truncation(o);
  if (o.truncation > 10) throw InputError("fgl-lazard supports --truncation up to 10");
  const LazardPresentation l = lazard_ring(o.truncation, std::max(o.truncation, 6));
  Report r;
  r.json = detail::header(o);
  r.json["truncation"] = o.truncation;
  Json gens = Json::array();
  for (std::size_t k = 0; k < l.indices.size(); ++k)
    gens.push_back(Json{{"name", l.generators()[k].name}, {"weight", l.generators()[k].weight}});
  r.json["generators"] = gens;
  const std::vector<std::size_t> ranks = lazard_graded_ranks(o.truncation, std::max(o.truncation, 6));
  r.json["ranks"] = ranks_to_json(ranks);
  Json snf = Json::array();
  r.table = {{"weight", "rank", "torsion"}};
  for (int w = 0; w <= o.truncation; ++w) {
    GradedPiece p = l.ring->graded_basis(w);
    IntMatrix block(p.relations.size(), p.monomials.size());
    for (std::size_t i = 0; i < p.relations.size(); ++i)
      for (std::size_t k = 0; k < p.monomials.size(); ++k) block(i, k) = p.relations[i][k].scalar().get_num();
    CokernelInvariants c = graded_rank_snf(block);
    Json j = invariants_to_json(c);
    j = Json{{"weight", w}, {"monomials", p.monomials.size()}, {"relations", p.relations.size()}, {"rank", j["rank"]},
             {"torsion", j["torsion"]}};
    snf.push_back(j);
    r.table.push_back({std::to_string(w), std::to_string(c.free_rank), detail::join(j["torsion"])});
  }
  r.json["snf"] = snf;
  r.json["presentation"] = presented_ring_to_json(*l.ring);

  const FormalGroupLaw f = o.input.empty() ? theory_by_name(o.theory, o.truncation + 1).law
                                           : fgl_from_json(detail::input_json(o));
  Json cls{{"law", f.series().to_string()}};
  bool ok = true;
  try {
    RingMap map = classifying_map(f, l);
    Json images = Json::object();
    for (std::size_t k = 0; k < l.indices.size(); ++k) images[l.generators()[k].name] = map.images()[k].to_string();
    cls["images"] = images;
    cls["wellDefined"] = true;
  } catch (const IllDefinedMap& e) {
    cls["wellDefined"] = false;
    cls["violatedRelation"] = e.relation_index;
    cls["reason"] = e.what();
    ok = false;
  }
  r.json["classifying"] = cls;
  r.summary = {"Lazard ring through weight " + std::to_string(o.truncation) + ", " +
                   std::to_string(l.indices.size()) + " generators, " + std::to_string(l.relations().size()) +
                   " relations",
               "classifying map of " + f.series().to_string() + ": " + (ok ? "well defined" : "ILL DEFINED")};
  r.exit = ok ? kOk : kVerificationFailed;
  return r;
}

inline Report run_cohomology(const Options& o) {
  detail::require_truncation(o);
  const SpaceDescriptor space = detail::space_option(o.space, "--space");
  const OrientedTheory theory = theory_by_name(o.theory, std::max(o.truncation, 1));
  const PresentedRing ring = cohomology(theory, space, o.truncation);
  Report r;
  r.json = detail::header(o);
  r.json["space"] = space_to_json(space);
  r.json["instance"] = space.describe();
  r.json["theory"] = theory.name;
  r.json["truncation"] = o.truncation;

  // weights past the last nonzero piece are omitted
  std::vector<GradedPiece> pieces = ring.graded_pieces();
  std::size_t top = 0;
  for (std::size_t w = 0; w < pieces.size(); ++w)
    if (pieces[w].free_rank > 0 || !pieces[w].torsion.empty()) top = w + 1;
  pieces.resize(top);
  Json ranks = Json::array(), pj = Json::array();
  r.table = {{"weight", "rank", "torsion"}};
  bool free = true;
  for (const auto& p : pieces) {
    ranks.push_back(p.free_rank);
    pj.push_back(graded_piece_to_json(p, *ring.ring()));
    std::string t;
    for (const auto& v : p.torsion) t += (t.empty() ? "" : " ") + v.get_str();
    r.table.push_back({std::to_string(p.weight), std::to_string(p.free_rank), t});
    free = free && p.torsion.empty();
  }
  r.json["ranks"] = ranks;
  r.json["degreewiseFree"] = free;
  r.json["pieces"] = pj;
  r.json["presentation"] = presented_ring_to_json(ring);
  std::size_t total = 0;
  for (const auto& p : pieces) total += p.free_rank;
  r.summary = {space.describe() + " with the " + theory.name + " theory, truncation " + std::to_string(o.truncation),
               "total rank " + std::to_string(total) + (free ? ", degreewise free" : ", with torsion")};

  if (!o.element.empty()) {
    const Polynomial nf = ring.normal_form(ring.element(o.element));
    r.json["normalForm"] = Json{{"input", o.element}, {"result", nf.to_string()}, {"terms", terms_to_json(nf)}};
    r.summary.push_back("normal form of " + o.element + ": " + nf.to_string());
  }
  if (free && !ring.ring()->has_parameters()) {
    const HomologyDual h = homology_dual(ring);
    r.json["homologyDual"] = homology_dual_to_json(h, ring.base());
  }
  std::vector<std::string> lines;
  for (const auto& v : ring.variables())
    if (!v.parameter && v.weight == 1) lines.push_back(v.name);
  if (!lines.empty()) {
    const Polynomial a = ring.variable(lines[0]);
    const Polynomial b = ring.variable(lines.size() > 1 ? lines[1] : lines[0]);
    const Polynomial t = chern_tensor(theory, ring, a, b);
    const Polynomial d = chern_dual(theory, ring, a);
    r.json["chernTensor"] = Json{{"left", lines[0]},
                                 {"right", lines.size() > 1 ? lines[1] : lines[0]},
                                 {"tensor", t.to_string()},
                                 {"dual", d.to_string()}};
  }
  if (space.kind == SpaceDescriptor::Kind::ClassifyingBGL && !space.infinite && space.n >= 1 && space.n <= 4) {
    const InvarianceReport inv = invariance_check(theory.coefficients().scalar_ring(), space.n, o.truncation);
    r.json["invariance"] = invariance_to_json(inv);
    // Newton: the power sum lambda_1^k + ... + lambda_n^k in elementary terms
    const int k = std::max(1, std::min(space.n, o.truncation));
    std::vector<Variable> lv;
    for (int i = 1; i <= space.n; ++i) lv.push_back({"lambda" + std::to_string(i), 1, false});
    RingPtr lr = PolyRing::make(theory.coefficients().scalar_ring(), lv, std::max(o.truncation, k));
    Polynomial power(lr);
    for (std::size_t i = 0; i < lv.size(); ++i) power += Polynomial::variable(lr, i).pow(static_cast<unsigned>(k));
    const Polynomial e = elementary_symmetric_decompose(power, elementary_ring(lr));
    r.json["symmetricDecomposition"] = Json{{"input", power.to_string()}, {"output", e.to_string()}};
    if (!inv.pass) r.exit = kVerificationFailed;
    r.summary.push_back("invariant subring check: " + std::string(inv.pass ? "pass" : "FAIL"));
  }
  return r;
}

inline Report run_restriction(const Options& o) {
  detail::require_truncation(o);
  const SpaceDescriptor big = detail::space_option(o.space, "--space");
  const SpaceDescriptor small = detail::space_option(o.target, "--target");
  const OrientedTheory theory = theory_by_name(o.theory, std::max(o.truncation, 1));
  Report r;
  r.json = detail::header(o);
  r.json["source"] = space_to_json(big);
  r.json["target"] = space_to_json(small);
  r.json["theory"] = theory.name;
  r.json["truncation"] = o.truncation;
  RestrictionReport rep = [&]() {
    try {
      return restriction_map(theory, big, small, o.truncation);
    } catch (const IllDefinedMap& e) {
      r.json["wellDefined"] = false;
      r.json["reason"] = e.what();
      throw;
    }
  }();
  r.json["map"] = ring_map_to_json(rep.map);
  r.json["wellDefined"] = true;
  Json surj = Json::array();
  r.table = {{"weight", "surjective"}};
  for (std::size_t w = 0; w < rep.surjective.size(); ++w) {
    surj.push_back(rep.surjective[w] ? Json(*rep.surjective[w]) : Json(nullptr));
    r.table.push_back({std::to_string(w), rep.surjective[w] ? detail::yes(*rep.surjective[w]) : "unknown"});
  }
  r.json["surjective"] = surj;
  r.json["surjectiveEverywhere"] = rep.surjective_everywhere();
  Json images = Json::object();
  for (std::size_t k = 0; k < rep.map.images().size(); ++k)
    images[rep.map.source().variables()[k].name] = rep.map.images()[k].to_string();
  r.json["generatorImages"] = images;
  if (!o.element.empty()) {
    const Polynomial img = rep.map.apply(rep.map.source().element(o.element));
    r.json["image"] = Json{{"input", o.element}, {"result", img.to_string()}, {"terms", terms_to_json(img)}};
  }
  r.summary = {"restriction " + big.describe() + " -> " + small.describe() + ": well defined",
               std::string("surjective in every weight: ") + detail::yes(rep.surjective_everywhere())};
  return r;
}

inline Report run_hopf_primitives(const Options& o) {
  detail::require_truncation(o);
  const OrientedTheory theory = theory_by_name(o.theory, std::max(o.truncation, 1));
  const HopfData h = build_hopf(theory, o.truncation);
  const BaseRing& base = h.coefficients;
  Report r;
  r.json = detail::header(o);
  r.json["theory"] = theory.name;
  r.json["truncation"] = o.truncation;
  Json ranks = Json::array();
  for (const auto& b : h.basis) ranks.push_back(b.size());
  r.json["ranks"] = ranks;
  Json cop = Json::array();
  for (int k = 1; k <= o.truncation; ++k) cop.push_back(coproduct_to_json(h, Partition{k}));
  r.json["coproducts"] = cop;

  const auto prims = parallel_map<PrimitiveBasis>(static_cast<std::size_t>(o.truncation + 1),
                                                  [&](std::size_t w) { return primitives(h, static_cast<int>(w)); });
  const auto indec = parallel_map<IndecomposablesReport>(
      static_cast<std::size_t>(o.truncation), [&](std::size_t i) { return indecomposables(h, static_cast<int>(i) + 1); });
  const AdditiveReport add = additive_maps_identification(h);
  Json pj = Json::array(), ij = Json::array();
  bool ok = add.isomorphism;
  for (int w = 1; w <= o.truncation; ++w) {
    pj.push_back(primitives_to_json(h, prims[w]));
    ok = ok && prims[w].rank() == 1;
  }
  for (const auto& i : indec) {
    ij.push_back(indecomposables_to_json(i, base));
    ok = ok && i.rank == 1 && i.unimodular;
  }
  r.json["primitives"] = pj;
  r.json["additive"] = additive_to_json(add, base);
  r.json["indecomposables"] = ij;
  r.json["pass"] = ok;
  r.table = {{"weight", "bgl_rank", "primitive_rank", "line_rank", "restriction_det", "indecomposable_rank",
              "pairing_det"}};
  for (int w = 0; w <= o.truncation; ++w) {
    const auto& aw = add.weights[w];
    const bool pos = w >= 1;
    r.table.push_back({std::to_string(w), std::to_string(h.basis[w].size()), std::to_string(aw.primitive_rank),
                       std::to_string(aw.line_rank), base.coeff_to_string(aw.determinant),
                       pos ? std::to_string(indec[w - 1].rank) : "", pos ? base.coeff_to_string(indec[w - 1].pairing_determinant) : ""});
  }
  r.summary = {"R^0(BGL) Hopf algebra, " + theory.name + " theory, truncation " + std::to_string(o.truncation),
               std::string("primitives rank 1 and restriction bijective in every weight: ") + (ok ? "pass" : "FAIL")};
  r.exit = ok ? kOk : kVerificationFailed;
  return r;
}

inline Report run_thom_decompose(const Options& o) {
  detail::require_truncation(o);
  const OrientedTheory theory = theory_by_name(o.theory, std::max(o.truncation, 1));
  const ThomDecomposition dec = thom_decompose(build_hopf(theory, o.truncation));
  Report r;
  r.json = detail::header(o);
  r.json["theory"] = theory.name;
  r.json["truncation"] = o.truncation;
  r.json["decomposition"] = thom_decomposition_to_json(dec);
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p <= o.truncation; ++p)
    for (int q = 0; p + q <= o.truncation; ++q) pairs.emplace_back(p, q);
  const auto products = parallel_map<ThomProductReport>(
      pairs.size(), [&](std::size_t i) { return thom_product_check(dec, pairs[i].first, pairs[i].second); });
  bool ok = dec.consistent;
  Json pj = Json::array();
  for (const auto& p : products) {
    pj.push_back(thom_product_to_json(p));
    ok = ok && p.pass();
  }
  r.json["products"] = pj;
  Json iso = Json::array();
  for (int n = 0; n <= std::min(3, o.truncation); ++n) {
    const ThomIsoReport t = thom_iso_check(theory, n, o.truncation);
    iso.push_back(thom_iso_to_json(t));
    ok = ok && t.isomorphism;
  }
  r.json["thomIsomorphism"] = iso;
  r.json["pass"] = ok;
  r.table = {{"piece", "weight", "rank", "labels"}};
  for (const auto& piece : dec.pieces)
    for (const auto& fp : piece.weights) {
      if (fp.free_rank == 0) continue;
      std::string labels;
      for (const auto& b : fp.basis) labels += (labels.empty() ? "" : " ") + partition_label(b, "b");
      r.table.push_back({std::to_string(piece.level), std::to_string(fp.weight), std::to_string(fp.free_rank), labels});
    }
  r.summary = {"Thom pieces of R^0(BGL), " + theory.name + " theory, truncation " + std::to_string(o.truncation),
               std::to_string(products.size()) + " product checks; verdict: " + (ok ? "pass" : "FAIL")};
  r.exit = ok ? kOk : kVerificationFailed;
  return r;
}

inline Report run_tower(const Options& o) {
  const Json in = detail::input_json(o);
  Report r;
  r.json = detail::header(o);
  if (in.is_object() && in.contains("split")) {
    const SplitTowerInput s = split_input_from_json(in);
    const SplitTowerReport rep = split_tower_compare(s.y, s.z, s.r, s.s);
    r.json["kind"] = "split";
    r.json["split"] = split_report_to_json(rep);
    r.table = {{"weight", "lim_Y", "lim1_Y", "lim_Z", "lim1_Z", "agree"}};
    for (const auto& w : rep.weights)
      r.table.push_back({std::to_string(w.weight), describe(w.y.lim), w.y.lim1, describe(w.z.lim), w.z.lim1,
                         detail::yes(w.agree && w.complement_map_zero)});
    r.summary = {rep.hypotheses_hold ? "hypotheses hold" : "hypothesis failure: " + rep.failure,
                 std::string("verdict: ") + (rep.pass() ? "lim and lim^1 of Y and Z agree" : "FAIL")};
    r.exit = rep.pass() ? kOk : kVerificationFailed;
    return r;
  }
  const ModuleTower t = tower_from_json(in);
  const auto results = parallel_map<LimitResult>(
      t.weight_count(), [&](std::size_t w) { return tower_limit_and_lim1(t, static_cast<int>(w)); });
  r.json["kind"] = "tower";
  Json weights = Json::array();
  r.table = {{"weight", "lim", "lim1", "mittag_leffler", "partial"}};
  for (const auto& lr : results) {
    weights.push_back(limit_to_json(lr));
    r.table.push_back({std::to_string(lr.weight), describe(lr.lim), lr.lim1, detail::yes(lr.mittag_leffler),
                       detail::yes(lr.partial)});
  }
  r.json["weights"] = weights;
  r.summary = {"tower with " + std::to_string(t.stages.size()) + " stored stages, " +
               std::to_string(t.weight_count()) + " weights"};
  return r;
}

inline Report run_telescope(const Options& o) {
  detail::require_truncation(o);
  Report r;
  r.json = detail::header(o);
  TelescopeDiagram t;
  if (o.input.empty()) {
    t = projective_bott_system(theory_by_name(o.theory, std::max(o.truncation, 1)), o.truncation);
    r.json["source"] = "projective Bott system";
  } else {
    t = telescope_from_json(detail::input_json(o));
    r.json["source"] = o.input;
  }
  const auto results =
      parallel_map<ColimitResult>(t.weight_count(), [&](std::size_t w) { return telescope_colimit(t, static_cast<int>(w)); });
  Json weights = Json::array();
  r.table = {{"weight", "rank", "torsion", "localized_at", "description"}};
  for (const auto& c : results) {
    weights.push_back(colimit_to_json(c));
    std::string tor;
    for (const auto& v : c.value.torsion) tor += (tor.empty() ? "" : " ") + v.get_str();
    r.table.push_back({std::to_string(c.weight), std::to_string(c.value.free_rank), tor,
                       c.localized_at ? c.localized_at->get_str() : "", c.description});
  }
  r.json["weights"] = weights;
  r.summary = {"telescope with " + std::to_string(t.stages.size()) + " stored stages, " +
               std::to_string(t.weight_count()) + " weights"};
  return r;
}

inline Report run_conner_floyd(const Options& o) {
  detail::require_truncation(o);
  const SpaceDescriptor space = detail::space_option(o.space, "--space");
  const ConnerFloydReport rep = verify_conner_floyd(space, o.truncation);
  Report r;
  r.json = detail::header(o);
  r.json["space"] = space_to_json(space);
  const Json body = conner_floyd_to_json(rep);
  for (const auto& [k, v] : body.items()) r.json[k] = v;
  r.json["cobordismPresentation"] = presented_ring_to_json(cobordism_presentation(space, o.truncation));
  r.json["kTheoryPresentation"] = presented_ring_to_json(k_theory_presentation(space, o.truncation));
  r.table = {{"weight", "left", "right", "bijective"}};
  for (const auto& w : rep.comparison.weights)
    r.table.push_back({std::to_string(w.weight), std::to_string(w.source_rank), std::to_string(w.target_rank),
                       detail::yes(w.bijective)});
  r.summary = {"Conner-Floyd comparison for " + rep.instance + " at truncation " + std::to_string(o.truncation),
               "verdict: " + rep.verdict};
  r.exit = rep.isomorphism() ? kOk : kVerificationFailed;
  return r;
}

inline Report run_schema(const Options&) {
  Report r;
  r.json = all_schemas();
  r.table = {{"schema"}};
  for (const auto& [k, v] : r.json["schemas"].items()) r.table.push_back({k});
  return r;
}

inline Report dispatch(const Options& o) {
  static const std::map<std::string, std::function<Report(const Options&)>> table = {
      {"fgl-check", run_fgl_check},
      {"fgl-lazard", run_fgl_lazard},
      {"cohomology", run_cohomology},
      {"restriction", run_restriction},
      {"hopf-primitives", run_hopf_primitives},
      {"thom-decompose", run_thom_decompose},
      {"tower", run_tower},
      {"telescope", run_telescope},
      {"conner-floyd", run_conner_floyd},
      {"schema", run_schema},
  };
  auto it = table.find(o.subcommand);
  if (it == table.end()) throw InputError("unknown subcommand " + o.subcommand);
  return it->second(o);
}

// ---- output ----

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline void write_report(const Report& r, const std::string& format, const std::string& subcommand, std::ostream& out) {
  if (format == "json" || (subcommand == "schema" && format == "pretty")) {
    out << canonical_text(r.json);
    return;
  }
  if (format == "csv") {
    for (const auto& row : r.table) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
      out << "\n";
    }
    return;
  }
  for (const auto& s : r.summary) out << s << "\n";
  if (r.table.empty()) return;
  std::vector<std::size_t> width(r.table.front().size(), 0);
  for (const auto& row : r.table)
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  if (!r.summary.empty()) out << "\n";
  for (const auto& row : r.table) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string cell = row[i];
      if (i + 1 < row.size()) cell += std::string(width[i] - row[i].size() + 2, ' ');
      line += cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << "\n";
  }
}

inline std::string usage() {
  std::string s = "usage: oriented <subcommand> [options]\n\nsubcommands:\n";
  const char* help[] = {"check the formal group law axioms, inverse, n-series and logarithm",
                        "truncated Lazard ring: ranks, Smith normal form, classifying map",
                        "presentation and graded ranks of a space's cohomology",
                        "restriction map between spaces and its surjectivity",
                        "Hopf algebra R^0(BGL): primitives, indecomposables, additive maps",
                        "Thom pieces of R^0(BGL), Thom class products, Thom isomorphism",
                        "lim and lim^1 of a module tower, or the split tower comparison",
                        "colimit of a telescope (default: projective Bott system)",
                        "Conner-Floyd base change comparison for a space",
                        "print the JSON schemas"};
  for (std::size_t i = 0; i < subcommands().size(); ++i) {
    std::string name = subcommands()[i];
    name.resize(18, ' ');
    s += "  " + name + help[i] + "\n";
  }
  s +=
      "\noptions:\n"
      "  --input PATH        JSON input file (law, tower, telescope)\n"
      "  --space JSON        space descriptor, e.g. '{\"Pn\":2}' or '{\"Grassmannian\":{\"m\":2,\"n\":4}}'\n"
      "  --target JSON       smaller space for restriction\n"
      "  --theory NAME       additive, additive-rational, multiplicative, universal (default additive)\n"
      "  --element TEXT      element to reduce or restrict, e.g. 'lambda^3 + 2*lambda'\n"
      "  --truncation D      weight truncation (default 8)\n"
      "  --format F          json, csv or pretty (default pretty)\n"
      "  --seed N            seed for randomized property checks\n"
      "  --n N               n for the n-series (default 2)\n"
      "\nexit codes: 0 verified, 1 verification failed, 2 input error\n"
      "ORIENTED_WORKERS sets the worker count.\n";
  return s;
}

/// Parses arguments, runs the subcommand, writes the report. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"oriented"};
  app.set_help_flag();
  bool help = false;
  app.add_flag("-h,--help", help);
  for (const auto& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->set_help_flag();
    sub->add_flag("-h,--help", help);
    sub->add_option("--input", o.input);
    sub->add_option("--space", o.space);
    sub->add_option("--target", o.target);
    sub->add_option("--theory", o.theory);
    sub->add_option("--element", o.element);
    sub->add_option("--truncation", o.truncation);
    sub->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv", "pretty"}));
    sub->add_option("--seed", o.seed);
    sub->add_option("--n", o.n);
  }
  app.require_subcommand(0, 1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << usage();
    return kInputError;
  }
  if (help) {
    out << usage();
    return kOk;
  }
  if (app.get_subcommands().empty()) {
    err << "error: a subcommand is required\n\n" << usage();
    return kInputError;
  }
  o.subcommand = app.get_subcommands().front()->get_name();
  try {
    worker_count();
    const Report r = dispatch(o);
    write_report(r, o.format, o.subcommand, out);
    return r.exit;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const UndecidableTower& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const NonConfluentPresentation& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const IllDefinedMap& e) {
    err << "verification failed: ill-defined map (relation " << e.relation_index << "): " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const AlgebraError& e) {
    err << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kVerificationFailed;
  }
}

}  // namespace oriented::cli
