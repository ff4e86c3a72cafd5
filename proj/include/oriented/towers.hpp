#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "oriented/cohomology.hpp"
#include "oriented/errors.hpp"
#include "oriented/integer_matrix.hpp"

// Towers and telescopes of finitely presented abelian groups, one group per
// weight. Elements are row vectors over the generators and every map is a
// matrix acting on the right: f(x) = x * A.
//
// Window sufficiency. A tower that repeats with period rho from stage k0 has
// the same lim and lim^1 as its cofinal subtower M_k0 <- M_(k0+rho) <- ...,
// which is the constant tower (M, phi) for phi = f_k0 o ... o f_(k0+rho-1).
// So everything reduces to one endomorphism phi of one finitely generated
// group M = Z^g / R, and the product over all stages collapses to a single
// period as follows.
//  * The kernels K_j = ker phi^j increase and stop at some N (M is
//    noetherian); the loop below finds N as the first j with K_(j+1) = K_j.
//  * On S = phi^N(M) the map phi is injective, since ker phi meets S in
//    phi^N(K_(N+1)) = phi^N(K_N) = 0.
//  * A thread (x_0, x_1, ...) with x_j = phi(x_(j+1)) has every x_j in S
//    and is determined by x_0, because phi is injective there. So
//    ker(1 - shift) = lim embeds in S as the intersection of the phi^j(S).
//  * If phi(S) = S (Mittag-Leffler: the images stabilize), phi is an
//    automorphism of S. Then lim = S, and (1 - shift) is onto: solve
//    x_(j+1) = phi^-1(x_j - y_j) one coordinate at a time, so lim^1 = 0.
//    The whole infinite product is thus decided on the window [0, N + 1].
//  * If phi(S) != S, injectivity makes the chain phi^j(S) strictly
//    decreasing forever and lim^1 is nonzero and uncountable. When phi acts
//    on S / torsion as a scalar d (|d| > 1) the intersection is exactly the
//    torsion of S, phi being bijective on that finite group, and
//    lim^1 = (Z_d^ / Z)^r. Other non-Mittag-Leffler towers are flagged partial.
// The direct-system colimit of (M, phi) uses the same N and S: it equals the
// colimit over S, which is S itself when phi(S) = S and
// torsion(S) + Z[1/d]^r in the scalar case.

namespace oriented {

/// Z^generators / rowspan(relations).
struct FPModule {
  std::size_t generators = 0;
  IntMatrix relations;

  FPModule() = default;
  FPModule(std::size_t g, IntMatrix rel) : generators(g), relations(std::move(rel)) {
    if (relations.rows == 0) relations = IntMatrix(0, g);
    if (relations.cols != g) throw InputError("relation matrix width must equal the number of generators");
  }
  static FPModule free(std::size_t n) { return FPModule(n, IntMatrix(0, n)); }
  static FPModule cyclic(const mpz_class& n) {
    IntMatrix r(1, 1);
    r(0, 0) = n;
    return FPModule(1, r);
  }
  /// Z^rank + Z/t_1 + ... in the obvious presentation.
  static FPModule standard(std::size_t rank, const std::vector<mpz_class>& torsion) {
    FPModule m;
    m.generators = rank + torsion.size();
    m.relations = IntMatrix(torsion.size(), m.generators);
    for (std::size_t i = 0; i < torsion.size(); ++i) m.relations(i, rank + i) = torsion[i];
    return m;
  }

  CokernelInvariants invariants() const { return graded_rank_snf(relations); }
  bool finite() const { return invariants().free_rank == 0; }
};

inline std::string describe(const CokernelInvariants& inv) {
  std::string out;
  if (inv.free_rank > 0) out = inv.free_rank == 1 ? "Z" : "Z^" + std::to_string(inv.free_rank);
  for (const auto& t : inv.torsion) out += (out.empty() ? "" : " + ") + std::string("Z/") + t.get_str();
  return out.empty() ? "0" : out;
}

namespace detail {

inline IntMatrix stack(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out = a;
  out.append_rows(b);
  return out;
}

/// Coordinates of v in the row lattice of a Hermite basis, if it lies there.
inline std::optional<std::vector<mpz_class>> lattice_coordinates(const IntMatrix& h, std::vector<mpz_class> v) {
  std::vector<mpz_class> c(h.rows);
  std::size_t col = 0;
  for (std::size_t i = 0; i < h.rows; ++i) {
    while (h(i, col) == 0) {
      if (v[col] != 0) return std::nullopt;
      ++col;
    }
    if (!mpz_divisible_p(v[col].get_mpz_t(), h(i, col).get_mpz_t())) return std::nullopt;
    c[i] = v[col] / h(i, col);
    for (std::size_t j = col; j < h.cols; ++j) v[j] -= c[i] * h(i, j);
    ++col;
  }
  for (const auto& x : v)
    if (x != 0) return std::nullopt;
  return c;
}

inline bool in_lattice(const IntMatrix& h, const std::vector<mpz_class>& v) {
  return lattice_coordinates(h, v).has_value();
}

/// Every row of m lies in the lattice with Hermite basis h.
inline bool rows_in_lattice(const IntMatrix& m, const IntMatrix& h) {
  for (std::size_t i = 0; i < m.rows; ++i)
    if (!in_lattice(h, m.row(i))) return false;
  return true;
}

inline IntMatrix difference(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix d = a;
  for (std::size_t i = 0; i < d.data.size(); ++i) d.data[i] -= b.data[i];
  return d;
}

/// Equal as homomorphisms into `target`.
inline bool same_map(const IntMatrix& a, const IntMatrix& b, const FPModule& target) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  return rows_in_lattice(difference(a, b), hermite_rows(target.relations));
}

inline bool well_defined(const IntMatrix& a, const FPModule& source, const FPModule& target) {
  if (a.rows != source.generators || a.cols != target.generators) return false;
  return rows_in_lattice(source.relations * a, hermite_rows(target.relations));
}

inline bool surjective(const IntMatrix& a, const FPModule& target) {
  return hermite_rows(stack(a, target.relations)) ==
         hermite_rows(stack(IntMatrix::identity(target.generators), target.relations));
}

/// The subgroup (lattice L containing R) / R, as a presented group.
inline CokernelInvariants subgroup_invariants(const IntMatrix& lattice, const FPModule& m) {
  IntMatrix h = hermite_rows(lattice);
  IntMatrix coords(0, h.rows);
  for (std::size_t i = 0; i < m.relations.rows; ++i) {
    auto c = lattice_coordinates(h, m.relations.row(i));
    if (!c) throw AlgebraError("subgroup does not contain the relations");
    coords.append_row(*c);
  }
  return graded_rank_snf(coords);
}

/// Hermite basis of {x : x * a lies in rowspan(target.relations)} + source relations.
inline IntMatrix preimage_of_zero(const IntMatrix& a, const FPModule& source, const FPModule& target) {
  IntMatrix k = left_kernel(stack(a, target.relations));
  IntMatrix xs(0, source.generators);
  for (std::size_t i = 0; i < k.rows; ++i) {
    std::vector<mpz_class> x(k.data.begin() + static_cast<long>(i * k.cols),
                             k.data.begin() + static_cast<long>(i * k.cols + source.generators));
    xs.append_row(x);
  }
  return hermite_rows(stack(xs, source.relations));
}

/// The analysis of one endomorphism described in the header comment.
struct EndomorphismAnalysis {
  std::size_t kernel_stable = 0;      // N
  IntMatrix stable_image;             // Hermite basis of S = phi^N(M) (relations included)
  bool images_stabilize = false;      // phi(S) = S
  CokernelInvariants stable;          // S
  CokernelInvariants stable_torsion;  // torsion subgroup of S
  std::optional<mpz_class> scalar;    // phi = d on S / torsion
};

inline EndomorphismAnalysis analyze_endomorphism(const FPModule& m, const IntMatrix& phi) {
  EndomorphismAnalysis out;
  IntMatrix power = IntMatrix::identity(m.generators);
  IntMatrix kernel = preimage_of_zero(power, m, m);
  for (;;) {
    IntMatrix next = power * phi;
    IntMatrix next_kernel = preimage_of_zero(next, m, m);
    if (next_kernel == kernel) break;
    power = std::move(next);
    kernel = std::move(next_kernel);
    ++out.kernel_stable;
  }
  out.stable_image = hermite_rows(stack(power, m.relations));
  out.images_stabilize = hermite_rows(stack(power * phi, m.relations)) == out.stable_image;
  out.stable = subgroup_invariants(out.stable_image, m);
  out.stable_torsion = CokernelInvariants{0, out.stable.torsion};

  // phi on S / torsion, read through the functionals vanishing on the relations
  IntMatrix functionals = right_kernel(m.relations);
  const IntMatrix& s = out.stable_image;
  IntMatrix u = s * functionals.transpose();
  IntMatrix v = s * phi * functionals.transpose();
  std::optional<mpq_class> d;
  bool scalar = true;
  for (std::size_t i = 0; i < u.rows && scalar; ++i)
    for (std::size_t j = 0; j < u.cols && scalar; ++j) {
      if (u(i, j) == 0) {
        scalar = v(i, j) == 0;
        continue;
      }
      mpq_class ratio(v(i, j), u(i, j));
      ratio.canonicalize();
      if (!d) d = ratio;
      scalar = *d == ratio;
    }
  if (scalar && d && d->get_den() == 1) out.scalar = d->get_num();
  if (scalar && !d) out.scalar = mpz_class(1);  // no free part
  return out;
}

inline std::string localized_name(const mpz_class& d) {
  mpz_class a = abs(d);
  return "Z[1/" + a.get_str() + "]";
}

}  // namespace detail

struct Periodicity {
  std::size_t start = 0;   // k0
  std::size_t period = 1;  // rho
};

/// Inverse system M_0 <- M_1 <- ... with maps[k][w] : M_(k+1),w -> M_k,w.
struct ModuleTower {
  std::vector<std::vector<FPModule>> stages;  // stages[k][w]
  std::vector<std::vector<IntMatrix>> maps;   // maps[k][w]
  std::optional<Periodicity> periodicity;
  std::vector<std::optional<bool>> surjective_declared;  // per map, all weights

  std::size_t weight_count() const { return stages.empty() ? 0 : stages.front().size(); }

  /// Shape, well-definedness, and the declared periodicity on the stored window.
  void validate() const {
    if (stages.empty()) throw InputError("a tower needs at least one stage");
    if (maps.size() + 1 != stages.size()) throw InputError("a tower with K+1 stages needs K maps");
    const std::size_t wc = weight_count();
    for (const auto& s : stages)
      if (s.size() != wc) throw InputError("every stage needs the same weights");
    for (std::size_t k = 0; k < maps.size(); ++k) {
      if (maps[k].size() != wc) throw InputError("map " + std::to_string(k) + " has the wrong number of weights");
      for (std::size_t w = 0; w < wc; ++w)
        if (!detail::well_defined(maps[k][w], stages[k + 1][w], stages[k][w]))
          throw InputError("map " + std::to_string(k) + " is not well defined in weight " + std::to_string(w));
    }
    if (!surjective_declared.empty() && surjective_declared.size() != maps.size())
      throw InputError("one surjectivity flag per map");
    if (periodicity) {
      const auto [k0, rho] = *periodicity;
      if (rho == 0) throw InputError("period must be positive");
      if (stages.size() < k0 + rho + 1) throw InputError("the stored window must cover one full period");
      for (std::size_t k = k0; k + rho < stages.size(); ++k)
        for (std::size_t w = 0; w < wc; ++w) {
          const FPModule& a = stages[k][w];
          const FPModule& b = stages[k + rho][w];
          if (a.generators != b.generators || hermite_rows(a.relations) != hermite_rows(b.relations))
            throw InputError("declared periodicity fails at stage " + std::to_string(k + rho) + ", weight " +
                             std::to_string(w));
          if (k + rho < maps.size() && !detail::same_map(maps[k][w], maps[k + rho][w], stages[k][w]))
            throw InputError("declared periodicity fails at map " + std::to_string(k + rho) + ", weight " +
                             std::to_string(w));
        }
    }
  }

  bool map_surjective(std::size_t k, std::size_t w) const { return detail::surjective(maps[k][w], stages[k][w]); }
};

struct LimitResult {
  int weight = 0;
  CokernelInvariants lim;
  bool lim_exact = false;
  bool lim1_zero = false;
  bool lim1_exact = false;
  std::string lim1 = "0";
  bool mittag_leffler = false;
  std::size_t kernel_stable = 0;  // in periods
  bool partial = false;
  std::string note;
};

inline bool same_limits(const LimitResult& a, const LimitResult& b) {
  return a.lim == b.lim && a.lim_exact == b.lim_exact && a.lim1_zero == b.lim1_zero && a.lim1 == b.lim1;
}

/// The composite f_k0 o ... o f_(k0+rho-1) : M_k0 -> M_k0 (rows act on the right).
inline IntMatrix period_map(const ModuleTower& t, std::size_t w) {
  const auto [k0, rho] = *t.periodicity;
  IntMatrix phi = IntMatrix::identity(t.stages[k0 + rho][w].generators);
  for (std::size_t k = k0 + rho; k-- > k0;) phi = phi * t.maps[k][w];
  return phi;
}

inline LimitResult tower_limit_and_lim1(const ModuleTower& t, int weight) {
  t.validate();
  if (weight < 0 || static_cast<std::size_t>(weight) >= t.weight_count())
    throw InputError("weight " + std::to_string(weight) + " is not stored in the tower");
  const auto w = static_cast<std::size_t>(weight);
  LimitResult r;
  r.weight = weight;

  // declared flags are checked against the matrices; the declaration itself
  // stands for the unstored part of the tower
  bool declared_surjective = !t.surjective_declared.empty();
  for (std::size_t k = 0; k < t.surjective_declared.size(); ++k) {
    const bool flag = t.surjective_declared[k].value_or(false);
    if (flag && !t.map_surjective(k, w))
      throw AlgebraError("map " + std::to_string(k) + " is declared surjective but is not, in weight " +
                         std::to_string(weight));
    declared_surjective = declared_surjective && flag;
  }

  if (t.periodicity) {
    const FPModule& m = t.stages[t.periodicity->start][w];
    auto a = detail::analyze_endomorphism(m, period_map(t, w));
    r.kernel_stable = a.kernel_stable;
    r.mittag_leffler = a.images_stabilize;
    if (a.images_stabilize) {
      r.lim = a.stable;
      r.lim_exact = true;
      r.lim1_zero = true;
      r.lim1_exact = true;
    } else if (a.scalar) {
      r.lim = a.stable_torsion;
      r.lim_exact = true;
      r.lim1 = "(Z_" + mpz_class(abs(*a.scalar)).get_str() + "^/Z)^" + std::to_string(a.stable.free_rank) +
               ", not finitely generated";
      r.lim1_exact = true;
    } else {
      r.lim = a.stable_torsion;
      r.lim1 = "nonzero, not finitely generated";
      r.lim1_exact = true;
      r.partial = true;
      r.note = "images never stabilize and the period map is not scalar on the free part; lim contains the listed torsion";
    }
    if (declared_surjective && !r.lim1_zero)
      throw AlgebraError("surjective tower failed the Mittag-Leffler cross-check in weight " + std::to_string(weight));
    return r;
  }

  bool finite = true;
  for (const auto& s : t.stages) finite = finite && s[w].finite();
  if (!declared_surjective && !finite)
    throw UndecidableTower("weight " + std::to_string(weight) +
                           ": no periodicity, no surjectivity declaration, and infinite stages");
  // lim^1 vanishes (Mittag-Leffler holds for surjective maps and for finite
  // groups); lim is only known through its image in M_0 on the stored window
  r.lim1_zero = true;
  r.lim1_exact = true;
  r.mittag_leffler = true;
  r.partial = true;
  IntMatrix image = IntMatrix::identity(t.stages.back()[w].generators);
  for (std::size_t k = t.maps.size(); k-- > 0;) image = image * t.maps[k][w];
  r.lim = detail::subgroup_invariants(detail::stack(image, t.stages[0][w].relations), t.stages[0][w]);
  r.note = "no periodicity declared: lim reported as its image in stage 0 over the stored window";
  return r;
}

/// Direct system M_0 -> M_1 -> ... with maps[k][w] : M_k,w -> M_(k+1),w.
struct TelescopeDiagram {
  std::vector<std::vector<FPModule>> stages;
  std::vector<std::vector<IntMatrix>> maps;
  std::optional<Periodicity> periodicity;

  std::size_t weight_count() const { return stages.empty() ? 0 : stages.front().size(); }

  void validate() const {
    if (stages.empty()) throw InputError("a telescope needs at least one stage");
    if (maps.size() + 1 != stages.size()) throw InputError("a telescope with K+1 stages needs K maps");
    const std::size_t wc = weight_count();
    for (const auto& s : stages)
      if (s.size() != wc) throw InputError("every stage needs the same weights");
    for (std::size_t k = 0; k < maps.size(); ++k) {
      if (maps[k].size() != wc) throw InputError("map " + std::to_string(k) + " has the wrong number of weights");
      for (std::size_t w = 0; w < wc; ++w)
        if (!detail::well_defined(maps[k][w], stages[k][w], stages[k + 1][w]))
          throw InputError("map " + std::to_string(k) + " is not well defined in weight " + std::to_string(w));
    }
    if (periodicity) {
      const auto [k0, rho] = *periodicity;
      if (rho == 0) throw InputError("period must be positive");
      if (stages.size() < k0 + rho + 1) throw InputError("the stored window must cover one full period");
      for (std::size_t k = k0; k + rho < stages.size(); ++k)
        for (std::size_t w = 0; w < wc; ++w) {
          const FPModule& a = stages[k][w];
          const FPModule& b = stages[k + rho][w];
          if (a.generators != b.generators || hermite_rows(a.relations) != hermite_rows(b.relations))
            throw InputError("declared periodicity fails at stage " + std::to_string(k + rho));
          if (k + rho < maps.size() && !detail::same_map(maps[k][w], maps[k + rho][w], stages[k + 1][w]))
            throw InputError("declared periodicity fails at map " + std::to_string(k + rho));
        }
    }
  }
};

struct ColimitResult {
  int weight = 0;
  CokernelInvariants value;               // torsion plus the rational rank
  std::optional<mpz_class> localized_at;  // the free part is free over Z[1/d]
  bool finitely_generated = false;
  bool partial = false;
  std::string description;
};

inline ColimitResult telescope_colimit(const TelescopeDiagram& t, int weight) {
  t.validate();
  if (weight < 0 || static_cast<std::size_t>(weight) >= t.weight_count())
    throw InputError("weight " + std::to_string(weight) + " is not stored in the telescope");
  const auto w = static_cast<std::size_t>(weight);
  ColimitResult r;
  r.weight = weight;
  if (!t.periodicity) {
    r.value = t.stages.back()[w].invariants();
    r.finitely_generated = true;
    r.partial = true;
    r.description = describe(r.value) + " (last stored stage; no periodicity declared)";
    return r;
  }
  const auto [k0, rho] = *t.periodicity;
  IntMatrix phi = IntMatrix::identity(t.stages[k0][w].generators);
  for (std::size_t k = k0; k < k0 + rho; ++k) phi = phi * t.maps[k][w];
  auto a = detail::analyze_endomorphism(t.stages[k0][w], phi);
  r.value = a.stable;
  if (a.images_stabilize) {
    r.finitely_generated = true;
    r.description = describe(a.stable);
    return r;
  }
  const std::size_t rank = a.stable.free_rank;
  std::string torsion = describe(a.stable_torsion);
  if (a.scalar) {
    r.localized_at = mpz_class(abs(*a.scalar));
    r.description = "rank " + std::to_string(rank) + " over the localized base " + detail::localized_name(*a.scalar);
  } else {
    r.partial = true;
    r.description = "rational rank " + std::to_string(rank) + ", not finitely generated";
  }
  if (torsion != "0") r.description += ", torsion " + torsion;
  return r;
}

/// Per-stage, per-weight maps between two towers.
using StageMaps = std::vector<std::vector<IntMatrix>>;

struct SplitWeightReport {
  int weight = 0;
  LimitResult y;
  LimitResult z;
  std::vector<CokernelInvariants> complement;  // X_k = ker r_k
  bool complement_map_zero = true;
  bool agree = false;
};

struct SplitTowerReport {
  bool hypotheses_hold = true;
  std::optional<int> first_bad_weight;
  std::string failure;
  std::vector<SplitWeightReport> weights;
  bool pass() const {
    if (!hypotheses_hold) return false;
    for (const auto& w : weights)
      if (!w.agree || !w.complement_map_zero) return false;
    return true;
  }
};

/// Retract comparison: r_k : Y_k -> Z_k, s_k : Z_k -> Y_k with r s = 1 and
/// f_k = s_k o g_k o r_(k+1), where g is the connecting map of z. Then
/// Y = Z + X with X = ker r carrying the zero map, so lim and lim^1 agree.
inline SplitTowerReport split_tower_compare(const ModuleTower& y, const ModuleTower& z, const StageMaps& r,
                                            const StageMaps& s) {
  y.validate();
  z.validate();
  if (y.stages.size() != z.stages.size() || y.weight_count() != z.weight_count())
    throw InputError("towers Y and Z need the same stages and weights");
  if (r.size() != y.stages.size() || s.size() != y.stages.size())
    throw InputError("r and s need one matrix set per stage");
  SplitTowerReport out;
  const std::size_t wc = y.weight_count();
  for (std::size_t w = 0; w < wc && out.hypotheses_hold; ++w) {
    auto fail = [&](const std::string& why) {
      out.hypotheses_hold = false;
      out.first_bad_weight = static_cast<int>(w);
      out.failure = why;
    };
    for (std::size_t k = 0; k < y.stages.size() && out.hypotheses_hold; ++k) {
      const FPModule& yk = y.stages[k][w];
      const FPModule& zk = z.stages[k][w];
      if (r[k].size() != wc || s[k].size() != wc) throw InputError("r and s need one matrix per weight");
      if (!detail::well_defined(r[k][w], yk, zk) || !detail::well_defined(s[k][w], zk, yk)) {
        fail("r or s is not a well-defined map at stage " + std::to_string(k));
      } else if (!detail::same_map(s[k][w] * r[k][w], IntMatrix::identity(zk.generators), zk)) {
        fail("r o s is not the identity at stage " + std::to_string(k));
      } else if (k + 1 < y.stages.size() &&
                 !detail::same_map(y.maps[k][w], r[k + 1][w] * z.maps[k][w] * s[k][w], yk)) {
        fail("f is not s o g o r at map " + std::to_string(k));
      }
    }
  }
  if (!out.hypotheses_hold) return out;

  for (std::size_t w = 0; w < wc; ++w) {
    SplitWeightReport rep;
    rep.weight = static_cast<int>(w);
    rep.y = tower_limit_and_lim1(y, static_cast<int>(w));
    rep.z = tower_limit_and_lim1(z, static_cast<int>(w));
    std::vector<IntMatrix> kernels;
    for (std::size_t k = 0; k < y.stages.size(); ++k) {
      kernels.push_back(detail::preimage_of_zero(r[k][w], y.stages[k][w], z.stages[k][w]));
      rep.complement.push_back(detail::subgroup_invariants(kernels.back(), y.stages[k][w]));
    }
    for (std::size_t k = 0; k + 1 < y.stages.size(); ++k)
      if (!detail::rows_in_lattice(kernels[k + 1] * y.maps[k][w], hermite_rows(y.stages[k][w].relations)))
        rep.complement_map_zero = false;
    rep.agree = same_limits(rep.y, rep.z);
    out.weights.push_back(std::move(rep));
  }
  return out;
}

/// Bott-style telescope for projective spaces: stage k holds the homology of
/// P^k placed so that weight w sits in degree k - w; the connecting map
/// (multiplication by beta) sends each generator to the matching one of the
/// next stage. Weights 0..max_weight; periodic once every weight is present.
inline TelescopeDiagram projective_bott_system(const OrientedTheory& theory, int max_weight) {
  if (max_weight < 0) throw InputError("max weight must be non-negative");
  TelescopeDiagram t;
  const int last = max_weight + 1;
  std::vector<std::vector<std::size_t>> ranks;
  for (int k = 0; k <= last; ++k) {
    HomologyDual h = homology_dual(cohomology(theory, SpaceDescriptor::projective(k), k + 1));
    std::vector<std::size_t> row;
    std::vector<FPModule> stage;
    for (int w = 0; w <= max_weight; ++w) {
      const int degree = k - w;
      std::size_t rank = degree >= 0 ? h.pieces[degree].labels.size() : 0;
      row.push_back(rank);
      stage.push_back(FPModule::free(rank));
    }
    ranks.push_back(row);
    t.stages.push_back(std::move(stage));
  }
  for (int k = 0; k < last; ++k) {
    std::vector<IntMatrix> m;
    for (int w = 0; w <= max_weight; ++w) {
      IntMatrix a(ranks[k][w], ranks[k + 1][w]);
      for (std::size_t i = 0; i < std::min(a.rows, a.cols); ++i) a(i, i) = 1;
      m.push_back(a);
    }
    t.maps.push_back(std::move(m));
  }
  t.periodicity = Periodicity{static_cast<std::size_t>(max_weight), 1};
  return t;
}

}  // namespace oriented
