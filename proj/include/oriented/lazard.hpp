#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "oriented/errors.hpp"
#include "oriented/fgl.hpp"
#include "oriented/presented_ring.hpp"
#include "oriented/ring_map.hpp"

namespace oriented {

inline constexpr int kDefaultLazardBound = 6;

/// Truncated presentation of the Lazard ring: generators a_ij (i <= j,
/// weight i+j-1 <= D) modulo the associativity coefficients of the generic law.
struct LazardPresentation {
  int bound_weight = 0;
  std::vector<std::pair<int, int>> indices;  // (i, j) per generator, in variable order
  std::string generic_series;
  std::shared_ptr<PresentedRing> ring;       // a_ij as graded generators, truncation D

  std::vector<Variable> generators() const { return ring->variables(); }
  const std::vector<Polynomial>& relations() const { return ring->relations(); }
};

inline std::string lazard_generator_name(int i, int j) { return "a" + std::to_string(i) + std::to_string(j); }

namespace detail {

inline std::vector<std::pair<int, int>> lazard_indices(int d) {
  std::vector<std::pair<int, int>> out;
  for (int w = 1; w <= d; ++w)
    for (int i = 1; i <= (w + 1) / 2; ++i) out.emplace_back(i, w + 1 - i);
  return out;
}

inline std::string monomial_text(int i, int j) {
  auto pw = [](const char* v, int e) { return e == 1 ? std::string(v) : std::string(v) + "^" + std::to_string(e); };
  return pw("x", i) + "*" + pw("y", j);
}

inline std::string generic_series_text(const std::vector<std::pair<int, int>>& idx) {
  std::string s = "x + y";
  for (auto [i, j] : idx) {
    s += " + " + lazard_generator_name(i, j) + "*";
    if (i == j)
      s += monomial_text(i, j);
    else
      s += "(" + monomial_text(i, j) + " + " + monomial_text(j, i) + ")";
  }
  return s;
}

inline std::vector<Variable> lazard_variables(const std::vector<std::pair<int, int>>& idx, bool parameter) {
  std::vector<Variable> vars;
  for (auto [i, j] : idx) vars.push_back({lazard_generator_name(i, j), i + j - 1, parameter});
  return vars;
}

}  // namespace detail

/// Associativity relations of the generic law up to weight D. D is capped by
/// `bound` because the expansion grows combinatorially.
inline LazardPresentation lazard_ring(int d, int bound = kDefaultLazardBound) {
  if (d < 0) throw InputError("Lazard truncation must be non-negative");
  if (d > bound) throw InputError("Lazard truncation " + std::to_string(d) + " exceeds the configured bound " +
                                  std::to_string(bound));
  LazardPresentation out;
  out.bound_weight = d;
  out.indices = detail::lazard_indices(d);
  out.generic_series = detail::generic_series_text(out.indices);

  const BaseRing z = BaseRing::integers();
  auto target = PolyRing::make(z, detail::lazard_variables(out.indices, false), d);
  std::vector<Polynomial> relations;
  if (d >= 1) {
    // coefficients of x^a y^b z^c with a+b+c <= D+1 carry weight a+b+c-1 <= D
    FormalGroupLaw generic(z, out.generic_series, d + 1, {}, detail::lazard_variables(out.indices, true), {}, d);
    PresentedRing xyz = generic.make_ring({"x", "y", "z"});
    const Polynomial X = xyz.variable("x"), Y = xyz.variable("y"), Z = xyz.variable("z");
    const Polynomial diff = generic.apply(generic.apply(X, Y, xyz), Z, xyz) -
                            generic.apply(X, generic.apply(Y, Z, xyz), xyz);
    const RingPtr& r = xyz.ring();
    const std::size_t np = out.indices.size();
    std::map<Monomial, Polynomial, std::function<bool(const Monomial&, const Monomial&)>> by_space(
        [&r](const Monomial& a, const Monomial& b) { return r->compare(a, b) < 0; });
    for (const auto& [m, c] : diff.terms()) {
      Monomial s(r->size()), p(np);
      for (std::size_t v = 0; v < 3; ++v) s[v] = m[v];
      for (std::size_t k = 0; k < np; ++k) p[k] = m[3 + k];
      auto it = by_space.try_emplace(s, Polynomial(target)).first;
      it->second.add_term(p, c);
    }
    std::vector<Polynomial> seen;
    for (auto& [s, rel] : by_space) {
      if (rel.is_zero()) continue;
      Polynomial norm = rel.leading().second.scalar() < 0 ? -rel : rel;
      bool dup = false;
      for (const auto& q : seen)
        if (q == norm) dup = true;
      if (!dup) seen.push_back(norm);
    }
    // lowest weight first, so relation indices in error reports follow weight
    std::stable_sort(seen.begin(), seen.end(),
                     [](const Polynomial& a, const Polynomial& b) { return a.min_weight() < b.min_weight(); });
    relations = std::move(seen);
  }
  out.ring = std::make_shared<PresentedRing>(target, relations);
  return out;
}

/// Free rank of each weight piece 0..D, via Smith normal form per weight.
inline std::vector<std::size_t> lazard_graded_ranks(int d, int bound = kDefaultLazardBound) {
  LazardPresentation l = lazard_ring(d, bound);
  std::vector<std::size_t> out;
  for (int w = 0; w <= d; ++w) {
    GradedPiece piece = l.ring->graded_basis(w);
    if (!piece.torsion.empty()) throw AlgebraError("torsion in weight " + std::to_string(w) + " of the Lazard ring");
    out.push_back(piece.free_rank);
  }
  return out;
}

/// The generic law over the presentation: a_ij become coefficient parameters
/// subject to the associativity relations.
inline FormalGroupLaw universal_law(const LazardPresentation& l) {
  std::vector<std::string> rels;
  for (const auto& r : l.relations()) rels.push_back(r.to_string());
  return FormalGroupLaw(BaseRing::integers(), l.generic_series, l.bound_weight + 1,
                        {}, detail::lazard_variables(l.indices, true), rels, l.bound_weight);
}

/// Map from the Lazard presentation to the coefficients of F sending a_ij to
/// the x^i y^j coefficient. Needs F known through weight D+1. Only the listed
/// relations are checked: a_ij has positive weight but its image need not.
inline RingMap classifying_map(const FormalGroupLaw& f, const LazardPresentation& l) {
  if (f.truncation() < l.bound_weight + 1)
    throw InputError("classifying map needs the law through weight " + std::to_string(l.bound_weight + 1));
  const PresentedRing coeffs = f.coefficient_ring();
  const RingPtr& tr = coeffs.ring();
  const std::size_t np = f.parameters().size();
  const std::size_t nrel = l.relations().size();

  auto coefficient = [&](int i, int j) {
    Polynomial out(tr);
    for (const auto& [m, c] : f.series().terms()) {
      if (m[0] != static_cast<std::uint32_t>(i) || m[1] != static_cast<std::uint32_t>(j)) continue;
      Monomial t(tr->size());
      for (std::size_t k = 0; k < np; ++k) t[k] = m[2 + k];
      out.add_term(t, c);
    }
    return coeffs.normal_form(out);
  };
  // the a_ij only see x^i y^j with i <= j, so the unit and symmetry axioms
  // are checked directly; a failure is reported past the relation indices
  const PresentedRing& xy = f.ring();
  const Polynomial x = xy.variable("x"), y = xy.variable("y");
  if (!xy.equal(f.apply(x, xy.zero(), xy), x) || !xy.equal(f.apply(xy.zero(), y, xy), y))
    throw IllDefinedMap(nrel, "series violates the unit axiom");
  if (!xy.equal(f.apply(x, y, xy), f.apply(y, x, xy)))
    throw IllDefinedMap(nrel + 1, "series is not symmetric in x and y");

  std::vector<Polynomial> images;
  for (auto [i, j] : l.indices) images.push_back(coefficient(i, j));
  RingMap map = RingMap(*l.ring, coeffs, images).relations_only();
  map.check();
  return map;
}

}  // namespace oriented
