#pragma once

#include <cctype>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oriented/errors.hpp"
#include "oriented/fgl.hpp"
#include "oriented/integer_matrix.hpp"
#include "oriented/lazard.hpp"
#include "oriented/presented_ring.hpp"
#include "oriented/ring_map.hpp"
#include "oriented/symmetric.hpp"

namespace oriented {

/// Degree-zero data of a periodic oriented theory: coefficients, the law on
/// first Chern classes, and the period unit (when the law designates one).
struct OrientedTheory {
  std::string name;
  FormalGroupLaw law;
  std::optional<Coeff> period_unit;

  const BaseRing& coefficients() const { return law.base(); }
};

inline OrientedTheory additive_theory(int truncation, const BaseRing& base = BaseRing::integers()) {
  return {"additive", make_additive(base, truncation), std::nullopt};
}

inline OrientedTheory multiplicative_theory(int truncation) {
  return {"multiplicative", make_multiplicative(truncation), Coeff::monomial(1, 1)};
}

/// Generic law over the truncated Lazard presentation, with a_ij as
/// coefficient parameters.
inline OrientedTheory universal_theory(int truncation) {
  const int d = std::max(truncation, 1);
  return {"universal", universal_law(lazard_ring(d, d)), std::nullopt};
}

inline OrientedTheory theory_by_name(const std::string& name, int truncation) {
  if (name == "additive") return additive_theory(truncation);
  if (name == "additive-rational") return additive_theory(truncation, BaseRing::rationals());
  if (name == "multiplicative") return multiplicative_theory(truncation);
  if (name == "universal") return universal_theory(truncation);
  throw InputError("unknown theory '" + name + "' (expected additive, additive-rational, multiplicative, universal)");
}

struct SpaceDescriptor {
  enum class Kind { Point, ProjectiveSpace, InfiniteProjectiveSpace, ProjectiveBundle, FlagBundle, GrassmannianBundle,
                    ClassifyingBGL, Product };
  Kind kind = Kind::Point;
  int n = 0;        // dimension, bundle rank, or BGL rank
  int m = 0;        // Grassmannian subspace dimension
  bool infinite = false;  // BGL of infinite rank
  std::shared_ptr<const SpaceDescriptor> base;  // bundles; null means a point
  std::vector<std::string> chern;  // c_1..c_n in the base ring; empty means trivial
  std::shared_ptr<const SpaceDescriptor> left, right;

  static SpaceDescriptor point() { return {}; }
  static SpaceDescriptor projective(int n) { return with(Kind::ProjectiveSpace, n); }
  static SpaceDescriptor infinite_projective() { return with(Kind::InfiniteProjectiveSpace, 0); }
  static SpaceDescriptor flag(int n) { return with(Kind::FlagBundle, n); }
  static SpaceDescriptor grassmannian(int m, int n) {
    SpaceDescriptor s = with(Kind::GrassmannianBundle, n);
    s.m = m;
    return s;
  }
  static SpaceDescriptor bgl(int n) { return with(Kind::ClassifyingBGL, n); }
  static SpaceDescriptor bgl_infinite() {
    SpaceDescriptor s = with(Kind::ClassifyingBGL, 0);
    s.infinite = true;
    return s;
  }
  static SpaceDescriptor projective_bundle(SpaceDescriptor base, std::vector<std::string> chern) {
    SpaceDescriptor s = with(Kind::ProjectiveBundle, static_cast<int>(chern.size()));
    s.base = std::make_shared<const SpaceDescriptor>(std::move(base));
    s.chern = std::move(chern);
    return s;
  }
  static SpaceDescriptor product(SpaceDescriptor l, SpaceDescriptor r) {
    SpaceDescriptor s = with(Kind::Product, 0);
    s.left = std::make_shared<const SpaceDescriptor>(std::move(l));
    s.right = std::make_shared<const SpaceDescriptor>(std::move(r));
    return s;
  }

  bool over_point() const { return !base || base->kind == Kind::Point; }

  std::string describe() const {
    auto over = [&]() { return over_point() ? std::string() : " over " + base->describe(); };
    switch (kind) {
      case Kind::Point: return "point";
      case Kind::ProjectiveSpace: return "P^" + std::to_string(n);
      case Kind::InfiniteProjectiveSpace: return "P^inf";
      case Kind::ProjectiveBundle: return "P(V" + std::to_string(n) + ")" + over();
      case Kind::FlagBundle: return "Flag(" + std::to_string(n) + ")" + over();
      case Kind::GrassmannianBundle: return "Gr(" + std::to_string(m) + "," + std::to_string(n) + ")" + over();
      case Kind::ClassifyingBGL: return infinite ? "BGL" : "BGL_" + std::to_string(n);
      case Kind::Product: return "(" + left->describe() + " x " + right->describe() + ")";
    }
    return "?";
  }

 private:
  static SpaceDescriptor with(Kind k, int n) {
    SpaceDescriptor s;
    s.kind = k;
    s.n = n;
    return s;
  }
};

namespace detail {

/// Space variables and relations of a cohomology presentation, before the
/// theory's coefficient parameters are attached.
struct Presentation {
  std::vector<Variable> vars;
  std::vector<std::string> relations;  // parsed once the full ring exists
};

inline std::string fresh_name(const std::vector<Variable>& vars, std::string name) {
  auto taken = [&](const std::string& n) {
    for (const auto& v : vars)
      if (v.name == n) return true;
    return false;
  };
  while (taken(name)) name += "'";
  return name;
}

inline std::string pw(const std::string& v, int e) { return e == 1 ? v : v + "^" + std::to_string(e); }

/// Elementary symmetric polynomial text e_k(names).
inline std::string elementary_text(const std::vector<std::string>& names, int k) {
  if (k == 0) return "1";
  std::string out;
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int from) {
    if (static_cast<int>(pick.size()) == k) {
      std::string t;
      for (int i : pick) t += (t.empty() ? "" : "*") + names[i];
      out += (out.empty() ? "" : " + ") + t;
      return;
    }
    for (int i = from; i < static_cast<int>(names.size()); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out.empty() ? "0" : out;
}

inline std::string chern_text(const SpaceDescriptor& s, int k) {
  if (k == 0) return "1";
  if (s.chern.empty()) return "0";
  if (k > static_cast<int>(s.chern.size())) return "0";
  return "(" + s.chern[k - 1] + ")";
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

inline Presentation presentation_of(const SpaceDescriptor& s, int d) {
  using K = SpaceDescriptor::Kind;
  Presentation p;
  auto add_var = [&](const std::string& base_name, int weight) {
    std::string n = fresh_name(p.vars, base_name);
    p.vars.push_back({n, weight, false});
    return n;
  };
  auto check_weight = [&](int w, const std::string& what) {
    if (w > d)
      throw InputError(what + " has weight " + std::to_string(w) + " above the truncation " + std::to_string(d));
  };
  auto start_bundle = [&]() {
    if (s.base) p = presentation_of(*s.base, d);
    if (!s.chern.empty()) require(static_cast<int>(s.chern.size()) == s.n, "bundle needs one Chern class per rank");
  };
  switch (s.kind) {
    case K::Point:
      break;
    case K::ProjectiveSpace: {
      require(s.n >= 0, "projective space dimension must be non-negative");
      check_weight(s.n + 1, "relation lambda^" + std::to_string(s.n + 1));
      std::string l = add_var("lambda", 1);
      p.relations.push_back(pw(l, s.n + 1));
      break;
    }
    case K::InfiniteProjectiveSpace:
      add_var("lambda", 1);
      break;
    case K::ProjectiveBundle: {
      require(s.n >= 1, "projective bundle needs rank at least 1");
      start_bundle();
      check_weight(s.n, "projective bundle relation");
      std::string l = add_var("lambda", 1);
      // lambda^n - c1 lambda^(n-1) + ... + (-1)^n c_n
      std::string rel;
      for (int k = 0; k <= s.n; ++k) {
        std::string term = chern_text(s, k);
        if (s.n - k > 0) term += "*" + pw(l, s.n - k);
        rel += (k == 0 ? "" : (k % 2 ? " - " : " + ")) + term;
      }
      p.relations.push_back(rel);
      break;
    }
    case K::FlagBundle: {
      require(s.n >= 1, "flag bundle needs rank at least 1");
      start_bundle();
      check_weight(s.n, "flag relation");
      std::vector<std::string> ls;
      for (int i = 1; i <= s.n; ++i) ls.push_back(add_var("lambda" + std::to_string(i), 1));
      for (int k = 1; k <= s.n; ++k) p.relations.push_back(chern_text(s, k) + " - (" + elementary_text(ls, k) + ")");
      break;
    }
    case K::GrassmannianBundle: {
      require(s.n >= 1 && s.m >= 0 && s.m <= s.n, "Grassmannian needs 0 <= m <= n and n >= 1");
      start_bundle();
      check_weight(s.n, "Grassmannian relation");
      std::vector<std::string> sig{"1"}, tau{"1"};
      for (int i = 1; i <= s.m; ++i) sig.push_back(add_var("sigma" + std::to_string(i), i));
      for (int j = 1; j <= s.n - s.m; ++j) tau.push_back(add_var("tau" + std::to_string(j), j));
      for (int k = 1; k <= s.n; ++k) {
        std::string sum;
        for (int i = 0; i <= s.m; ++i) {
          const int j = k - i;
          if (j < 0 || j > s.n - s.m) continue;
          sum += (sum.empty() ? "" : " + ") + sig[i] + "*" + tau[j];
        }
        p.relations.push_back(chern_text(s, k) + " - (" + (sum.empty() ? "0" : sum) + ")");
      }
      break;
    }
    case K::ClassifyingBGL: {
      if (!s.infinite) require(s.n >= 0, "BGL rank must be non-negative");
      const int top = s.infinite ? d : s.n;
      // BGL_1 is P^inf; its generator keeps the name lambda
      if (!s.infinite && s.n == 1) {
        add_var("lambda", 1);
      } else {
        for (int i = 1; i <= top; ++i) add_var("sigma" + std::to_string(i), i);
      }
      break;
    }
    case K::Product: {
      Presentation l = presentation_of(*s.left, d);
      Presentation r = presentation_of(*s.right, d);
      p = l;
      // right-hand names that collide get primes, consistently in relations
      std::vector<std::pair<std::string, std::string>> renames;
      for (const auto& v : r.vars) {
        std::string n = fresh_name(p.vars, v.name);
        p.vars.push_back({n, v.weight, false});
        if (n != v.name) renames.emplace_back(v.name, n);
      }
      for (auto rel : r.relations) {
        if (!renames.empty()) {
          // token-wise rename
          std::string out;
          std::size_t i = 0;
          while (i < rel.size()) {
            if (std::isalpha(static_cast<unsigned char>(rel[i])) || rel[i] == '_') {
              std::size_t j = i;
              while (j < rel.size() && (std::isalnum(static_cast<unsigned char>(rel[j])) || rel[j] == '_' ||
                                        rel[j] == '\''))
                ++j;
              std::string tok = rel.substr(i, j - i);
              for (const auto& [from, to] : renames)
                if (tok == from) {
                  tok = to;
                  break;
                }
              out += tok;
              i = j;
            } else {
              out += rel[i++];
            }
          }
          rel = out;
        }
        p.relations.push_back(rel);
      }
      break;
    }
  }
  return p;
}

}  // namespace detail

/// The presentation of R^0(X) over the theory's coefficients, truncated at D.
inline PresentedRing cohomology(const OrientedTheory& theory, const SpaceDescriptor& space, int d) {
  if (d < 0) throw InputError("truncation must be non-negative");
  detail::Presentation p = detail::presentation_of(space, d);
  if (space.kind == SpaceDescriptor::Kind::Product) {
    // Kunneth only for degreewise free factors
    for (const auto* f : {space.left.get(), space.right.get()})
      if (!cohomology(theory, *f, d).degreewise_free())
        throw InputError("product factor " + f->describe() + " is not degreewise free");
  }
  PresentedRing bare = theory.law.space_ring(p.vars, d);
  std::vector<Polynomial> rels;
  for (const auto& r : p.relations) {
    Polynomial rel = parse_polynomial(bare.ring(), r);
    if (!rel.is_zero() && !rel.homogeneous_weight())
      throw InputError("relation " + r + " is not weight-homogeneous (Chern classes must have weight k)");
    rels.push_back(rel);
  }
  return theory.law.space_ring(p.vars, d, rels);
}

/// c_1 of a tensor product: the law evaluated on two first Chern classes.
inline Polynomial chern_tensor(const OrientedTheory& theory, const PresentedRing& ring, const Polynomial& a,
                               const Polynomial& b) {
  if (a.homogeneous_weight().value_or(1) != 1 || b.homogeneous_weight().value_or(1) != 1)
    throw InputError("chern_tensor needs weight-1 classes");
  if (theory.law.truncation() < ring.truncation())
    throw InputError("the theory's law is truncated below the ring's truncation");
  return theory.law.apply(ring.normal_form(a), ring.normal_form(b), ring);
}

/// c_1 of the dual line bundle, through the formal inverse.
inline Polynomial chern_dual(const OrientedTheory& theory, const PresentedRing& ring, const Polynomial& a) {
  if (a.homogeneous_weight().value_or(1) != 1) throw InputError("chern_dual needs a weight-1 class");
  return theory.law.compose(formal_inverse(theory.law), ring.normal_form(a), ring);
}

namespace detail {

/// Whether the images of the source piece span the target piece in weight w.
/// Needs scalar coordinates; answers nullopt when that is not available.
inline std::optional<bool> surjective_in_weight(const RingMap& map, int w) {
  const PresentedRing& src = map.source();
  const PresentedRing& tgt = map.target();
  const BaseRing& base = tgt.base();
  if (tgt.ring()->has_parameters()) return std::nullopt;
  GradedPiece tp = tgt.graded_basis(w);
  std::vector<Polynomial> imgs = piece_images(map, src.graded_basis(w).monomials, w);
  IntMatrix stacked(0, tp.monomials.size());
  for (const auto& img : imgs) {
    std::vector<mpz_class> row(tp.monomials.size());
    for (std::size_t j = 0; j < tp.monomials.size(); ++j) {
      Coeff c = img.coefficient(tp.monomials[j]);
      if (!c.is_scalar() || c.scalar().get_den() != 1) return std::nullopt;
      row[j] = c.scalar().get_num();
    }
    stacked.append_row(row);
  }
  for (const auto& r : tp.relations) {
    std::vector<mpz_class> row(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!r[j].is_scalar() || r[j].scalar().get_den() != 1) return std::nullopt;
      row[j] = r[j].scalar().get_num();
    }
    stacked.append_row(row);
  }
  if (base.scalar_kind() == ScalarKind::IntegersModuloN)
    for (std::size_t j = 0; j < tp.monomials.size(); ++j) {
      std::vector<mpz_class> row(tp.monomials.size());
      row[j] = base.modulus();
      stacked.append_row(row);
    }
  CokernelInvariants c = graded_rank_snf(stacked);
  if (base.scalar_kind() == ScalarKind::Rationals) return c.free_rank == 0;
  return c.free_rank == 0 && c.torsion.empty();
}

}  // namespace detail

struct RestrictionReport {
  RingMap map;
  std::vector<std::optional<bool>> surjective;  // per weight 0..D
  bool surjective_everywhere() const {
    for (const auto& s : surjective)
      if (!s || !*s) return false;
    return true;
  }
};

/// Restriction along a canonical inclusion smaller -> bigger: P^m in P^n or
/// P^inf, BGL_m in BGL_n or BGL, Gr_m(A^(n-1)) in Gr_m(A^n), X in X.
inline RestrictionReport restriction_map(const OrientedTheory& theory, const SpaceDescriptor& bigger,
                                         const SpaceDescriptor& smaller, int d) {
  using K = SpaceDescriptor::Kind;
  PresentedRing src = cohomology(theory, bigger, d);
  PresentedRing tgt = cohomology(theory, smaller, d);
  std::vector<Polynomial> images;
  auto same_or_zero = [&]() {
    for (const auto& v : src.variables()) {
      if (v.parameter) {
        images.push_back(tgt.variable(v.name));
        continue;
      }
      images.push_back(tgt.ring()->index_of(v.name) ? tgt.variable(v.name) : tgt.zero());
    }
  };
  const bool p_big = bigger.kind == K::ProjectiveSpace || bigger.kind == K::InfiniteProjectiveSpace;
  const bool p_small = smaller.kind == K::ProjectiveSpace || smaller.kind == K::InfiniteProjectiveSpace;
  const bool bgl_small_one = smaller.kind == K::ClassifyingBGL && !smaller.infinite && smaller.n == 1;
  if (p_big && p_small) {
    if (bigger.kind == K::ProjectiveSpace && (smaller.kind == K::InfiniteProjectiveSpace || smaller.n > bigger.n))
      throw InputError(smaller.describe() + " does not embed in " + bigger.describe());
    same_or_zero();
  } else if (bigger.kind == K::ClassifyingBGL && smaller.kind == K::ClassifyingBGL) {
    if (!bigger.infinite && (smaller.infinite || smaller.n > bigger.n))
      throw InputError(smaller.describe() + " does not embed in " + bigger.describe());
    if (bgl_small_one) {
      // sigma_1 restricts to lambda, higher sigma_i to 0
      for (const auto& v : src.variables()) {
        if (v.parameter)
          images.push_back(tgt.variable(v.name));
        else if (v.name == "sigma1" || v.name == "lambda")
          images.push_back(tgt.variable("lambda"));
        else
          images.push_back(tgt.zero());
      }
    } else {
      same_or_zero();
    }
  } else if (bigger.kind == K::GrassmannianBundle && smaller.kind == K::GrassmannianBundle && bigger.over_point() &&
             smaller.over_point() && bigger.chern.empty() && smaller.chern.empty() && bigger.m == smaller.m &&
             smaller.n <= bigger.n) {
    same_or_zero();
  } else if (bigger.describe() == smaller.describe()) {
    same_or_zero();
  } else {
    throw InputError("unsupported inclusion " + smaller.describe() + " -> " + bigger.describe());
  }
  RestrictionReport report{RingMap(src, tgt, images), {}};
  report.map.check();
  for (int w = 0; w <= d; ++w) report.surjective.push_back(detail::surjective_in_weight(report.map, w));
  return report;
}

/// Homology as the degreewise dual of free cohomology.
struct HomologyPiece {
  int weight = 0;
  std::vector<std::string> labels;        // b_w or b_w_i
  std::vector<std::string> dual_to;       // the cohomology basis element paired with each label
  std::vector<std::vector<Coeff>> pairing;  // <b_i, generator_j>
};

struct HomologyDual {
  std::vector<HomologyPiece> pieces;
  bool unimodular = true;  // every pairing table is the identity
};

inline HomologyDual homology_dual(const PresentedRing& ring) {
  if (!ring.degreewise_free()) throw AlgebraError("cohomology has torsion; the homology dual is not free");
  HomologyDual out;
  const BaseRing& base = ring.base();
  for (int w = 0; w <= ring.truncation(); ++w) {
    GradedPiece piece = ring.graded_basis(w);
    HomologyPiece h;
    h.weight = w;
    for (std::size_t i = 0; i < piece.free_rank; ++i) {
      h.labels.push_back(piece.free_rank == 1 ? "b" + std::to_string(w)
                                              : "b" + std::to_string(w) + "_" + std::to_string(i + 1));
      Polynomial g = piece.generator(i, ring.ring());
      h.dual_to.push_back(g.to_string());
    }
    for (std::size_t i = 0; i < piece.free_rank; ++i) h.pairing.emplace_back(piece.free_rank);
    for (std::size_t j = 0; j < piece.free_rank; ++j) {
      auto coords = piece.coordinates(ring.normal_form(piece.generator(j, ring.ring())), base);
      for (std::size_t i = 0; i < piece.free_rank; ++i) h.pairing[i][j] = coords[i];
    }
    for (std::size_t i = 0; i < piece.free_rank; ++i)
      for (std::size_t j = 0; j < piece.free_rank; ++j)
        if (h.pairing[i][j] != Coeff(i == j ? 1 : 0)) out.unimodular = false;
    out.pieces.push_back(std::move(h));
  }
  return out;
}

struct InvarianceReport {
  int n = 0;
  int truncation = 0;
  std::size_t monomials_checked = 0;
  bool pass = true;
  std::string failure;
};

/// Every sigma-monomial of weight <= D, expanded through sigma_i -> e_i(lambda),
/// is symmetric and decomposes back to itself.
inline InvarianceReport invariance_check(const BaseRing& base, int n, int d) {
  if (n < 1 || n > 4) throw InputError("invariance check supports 1 <= n <= 4");
  InvarianceReport report;
  report.n = n;
  report.truncation = d;
  std::vector<Variable> lambdas, sigmas;
  for (int i = 1; i <= n; ++i) {
    lambdas.push_back({"lambda" + std::to_string(i), 1, false});
    sigmas.push_back({"sigma" + std::to_string(i), i, false});
  }
  RingPtr lr = PolyRing::make(base, lambdas, d);
  RingPtr sr = PolyRing::make(base, sigmas, d);
  std::vector<std::size_t> all;
  for (int i = 0; i < n; ++i) all.push_back(i);
  std::vector<Polynomial> e;
  for (int k = 1; k <= n; ++k) e.push_back(elementary_symmetric(lr, all, k));
  std::vector<std::size_t> sblock(all);
  for (int w = 0; w <= d; ++w)
    for (const auto& m : monomials_of_weight(*sr, sblock, w)) {
      Polynomial mono(sr);
      mono.add_term(m, Coeff(1));
      Polynomial expanded = evaluate(mono, e, lr);
      ++report.monomials_checked;
      try {
        Polynomial back = elementary_symmetric_decompose(expanded, sr);
        if (back != mono) {
          report.pass = false;
          report.failure = mono.to_string() + " decomposes to " + back.to_string();
          return report;
        }
      } catch (const NotSymmetric& err) {
        report.pass = false;
        report.failure = mono.to_string() + ": " + err.what();
        return report;
      }
    }
  return report;
}

}  // namespace oriented
