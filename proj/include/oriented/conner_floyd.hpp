#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oriented/cohomology.hpp"
#include "oriented/errors.hpp"
#include "oriented/fgl.hpp"
#include "oriented/lazard.hpp"
#include "oriented/ring_map.hpp"

// Cobordism is modeled by the universal theory: the generic law over the
// truncated Lazard presentation. Its coefficients stand in for those of the
// periodic cobordism spectrum, whose true coefficient ring over a general
// base is not known; the checks here verify the algebra of base change only.

namespace oriented {

namespace detail {

inline void require_conner_floyd_space(const SpaceDescriptor& s) {
  using K = SpaceDescriptor::Kind;
  const bool ok = s.over_point() && (s.kind == K::Point || s.kind == K::ProjectiveSpace || s.kind == K::FlagBundle ||
                                     s.kind == K::GrassmannianBundle);
  if (!ok) throw InputError("Conner-Floyd comparison supports a point, P^n, flags and Grassmannians; got " + s.describe());
}

inline Coeff constant_value(const Polynomial& p) {
  if (p.is_zero()) return Coeff{};
  if (p.size() != 1 || !p.leading().first.is_one())
    throw InputError("coefficient image " + p.to_string() + " is not a constant");
  return p.leading().second;
}

}  // namespace detail

inline PresentedRing cobordism_presentation(const SpaceDescriptor& space, int d) {
  detail::require_conner_floyd_space(space);
  return cohomology(universal_theory(d), space, d);
}

inline PresentedRing k_theory_presentation(const SpaceDescriptor& space, int d) {
  detail::require_conner_floyd_space(space);
  return cohomology(multiplicative_theory(d), space, d);
}

/// Values of the coefficient parameters under a change of coefficients.
struct CoefficientChange {
  BaseRing target;
  std::map<std::string, Coeff> parameters;
  std::optional<Coeff> symbol_image;  // Laurent symbol of the source base
};

/// The change Lazard -> Z[beta^(+-1)] classifying the multiplicative law.
inline CoefficientChange multiplicative_change(const LazardPresentation& l) {
  const RingMap map = classifying_map(make_multiplicative(l.bound_weight + 1), l);
  CoefficientChange c{map.target().base(), {}, std::nullopt};
  for (std::size_t k = 0; k < l.indices.size(); ++k)
    c.parameters[lazard_generator_name(l.indices[k].first, l.indices[k].second)] =
        detail::constant_value(map.images()[k]);
  return c;
}

/// beta -> -beta on Z[beta^(+-1)].
inline CoefficientChange beta_sign_change(const BaseRing& laurent) {
  return {laurent, {}, Coeff::monomial(1, -1)};
}

/// Apply `second` after `first` on parameter values.
inline CoefficientChange compose(const CoefficientChange& first, const CoefficientChange& second) {
  CoefficientChange out{second.target, {}, first.symbol_image};
  auto move = [&](const Coeff& c) {
    if (!second.symbol_image) return c;
    const BaseRing& b = second.target;
    const Coeff u = *second.symbol_image, uinv = b.inverse(u);
    Coeff r;
    for (const auto& [e, v] : c.terms()) {
      Coeff term(v);
      for (int i = 0; i < std::abs(e); ++i) term = term * (e > 0 ? u : uinv);
      r += term;
    }
    return b.canonical(r);
  };
  for (const auto& [name, v] : first.parameters) out.parameters[name] = move(v);
  if (first.symbol_image) out.symbol_image = move(*first.symbol_image);
  return out;
}

struct BaseChange {
  PresentedRing ring;   // space variables over the new coefficients
  RingMap map;          // source -> ring, identity on space variables
};

/// Tensor a presentation along a change of coefficients: space variables are
/// kept, parameters become their values, every relation is pushed forward.
/// Pure parameter relations must die, or the change is not a ring map.
inline BaseChange base_change(const PresentedRing& source, const CoefficientChange& change) {
  std::vector<Variable> space;
  for (const auto& v : source.variables())
    if (!v.parameter) space.push_back(v);
  const RingPtr ring = PolyRing::make(change.target, space, source.truncation());
  std::vector<Polynomial> images;
  for (const auto& v : source.variables()) {
    if (!v.parameter) {
      images.push_back(Polynomial::variable(ring, v.name));
      continue;
    }
    auto it = change.parameters.find(v.name);
    if (it == change.parameters.end()) throw InputError("no value for coefficient parameter " + v.name);
    images.push_back(Polynomial::constant(ring, it->second));
  }
  std::optional<Polynomial> symbol;
  if (change.symbol_image) symbol = Polynomial::constant(ring, *change.symbol_image);
  RingMap push(source, PresentedRing(ring, {}), images, symbol);

  std::vector<Polynomial> relations;
  for (std::size_t i = 0; i < source.relations().size(); ++i) {
    const Polynomial& rel = source.relations()[i];
    Polynomial img = push.push(rel);
    bool touches_space = false;
    for (const auto& [m, c] : rel.terms())
      for (auto s : source.ring()->space_indices()) touches_space = touches_space || m[s] != 0;
    if (!touches_space && !img.is_zero())
      throw IllDefinedMap(i, "coefficient relation " + rel.to_string() + " maps to " + img.to_string());
    if (!img.is_zero()) relations.push_back(img);
  }
  PresentedRing target(ring, relations);
  return {target, RingMap(source, target, images, symbol).relations_only()};
}

/// Every relation of each side reduces to zero in the other.
inline bool same_relations(const PresentedRing& a, const PresentedRing& b) {
  for (const auto& r : a.relations())
    if (!b.normal_form(r).is_zero()) return false;
  for (const auto& r : b.relations())
    if (!a.normal_form(r).is_zero()) return false;
  return true;
}

struct ConnerFloydReport {
  std::string instance;
  int truncation = 0;
  std::vector<std::size_t> cobordism_ranks;  // over the Lazard coefficients
  std::vector<std::size_t> base_changed_ranks;
  std::vector<std::size_t> k_theory_ranks;
  IsomorphismReport comparison;
  bool relations_match = false;
  std::string verdict;
  bool isomorphism() const { return comparison.isomorphism && relations_match; }
};

inline ConnerFloydReport verify_conner_floyd(const SpaceDescriptor& space, int d) {
  ConnerFloydReport r;
  r.instance = space.describe();
  r.truncation = d;
  PresentedRing cob = cobordism_presentation(space, d);
  PresentedRing k = k_theory_presentation(space, d);
  LazardPresentation l = lazard_ring(std::max(d, 1), std::max(d, 1));
  BaseChange tensored = base_change(cob, multiplicative_change(l));
  r.cobordism_ranks = cob.graded_ranks();
  r.base_changed_ranks = tensored.ring.graded_ranks();
  r.k_theory_ranks = k.graded_ranks();
  r.comparison = is_graded_isomorphism(RingMap::by_name(tensored.ring, k));
  r.relations_match = same_relations(tensored.ring, k);
  r.verdict = r.isomorphism() ? "isomorphism" : "not an isomorphism";
  return r;
}

struct FunctorialityReport {
  bool relations_match = false;  // two-step and composite base changes agree
  bool isomorphism = false;      // the identity-on-generators map between them
};

/// Base change along Lazard -> Z[beta^(+-1)] -> Z[beta^(+-1)] (beta -> -beta)
/// in two steps against the composite in one.
inline FunctorialityReport base_change_functoriality(const SpaceDescriptor& space, int d) {
  PresentedRing cob = cobordism_presentation(space, d);
  LazardPresentation l = lazard_ring(std::max(d, 1), std::max(d, 1));
  CoefficientChange first = multiplicative_change(l);
  CoefficientChange second = beta_sign_change(first.target);
  BaseChange two_step = base_change(base_change(cob, first).ring, second);
  BaseChange direct = base_change(cob, compose(first, second));
  FunctorialityReport out;
  out.relations_match = same_relations(two_step.ring, direct.ring);
  out.isomorphism = is_graded_isomorphism(RingMap::by_name(two_step.ring, direct.ring)).isomorphism;
  return out;
}

}  // namespace oriented
