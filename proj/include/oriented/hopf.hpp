#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "oriented/cohomology.hpp"
#include "oriented/errors.hpp"
#include "oriented/integer_matrix.hpp"
#include "oriented/partitions.hpp"

namespace oriented {

/// Weight-w piece of A_n / A_(n-1).
struct FilteredPiece {
  int level = 0;
  int weight = 0;
  std::vector<Partition> basis;  // partitions with exactly `level` parts
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;
  bool split = false;            // A_(n-1) -> A_n is a split injection here
};

/// A_n = Sym^n(R b_0 + M) with M free on b_w (w >= 1), truncated at weight D.
/// A weight-w basis element of A_n is a partition of w with at most n parts;
/// the missing parts are copies of b_0.
struct SymFilteredAlgebra {
  BaseRing coefficients = BaseRing::integers();
  int truncation = 0;

  std::vector<Partition> basis(int n, int w) const { return n < 0 ? std::vector<Partition>{} : partitions_of(w, n); }

  /// Multiplication by b_0, rows = basis(n-1, w), columns = basis(n, w).
  IntMatrix inclusion(int n, int w) const {
    auto src = basis(n - 1, w);
    auto dst = basis(n, w);
    IntMatrix out(src.size(), dst.size());
    for (std::size_t i = 0; i < src.size(); ++i)
      for (std::size_t j = 0; j < dst.size(); ++j)
        if (src[i] == dst[j]) out(i, j) = 1;
    return out;
  }

  FilteredPiece quotient(int n, int w) const {
    FilteredPiece p;
    p.level = n;
    p.weight = w;
    IntMatrix inc = inclusion(n, w);
    SmithForm s = smith_normal_form(inc);
    p.free_rank = inc.cols - s.rank;
    for (std::size_t i = 0; i < s.rank; ++i)
      if (s.diagonal[i] != 1) p.torsion.push_back(s.diagonal[i]);
    p.split = s.rank == inc.rows && p.torsion.empty();
    auto prev = basis(n - 1, w);
    for (const auto& part : basis(n, w))
      if (std::find(prev.begin(), prev.end(), part) == prev.end()) p.basis.push_back(part);
    return p;
  }

  /// Product in the colimit, where b_0 = 1.
  static Partition multiply(const Partition& a, const Partition& b) { return merge(a, b); }
};

using TensorCoords = std::map<std::pair<Partition, Partition>, mpz_class>;

/// Hopf algebra R^0(BGL) at a truncation. Homology is the polynomial algebra
/// on b_1, b_2, ... with b_k -> sum b_i (x) b_(k-i); cohomology is its dual,
/// with sigma_k dual to b_1^k. Both sides use partitions of w as basis labels:
/// sigma^alpha and b^nu.
struct HopfData {
  BaseRing coefficients = BaseRing::integers();
  int truncation = 0;
  SymFilteredAlgebra algebra;
  std::shared_ptr<PresentedRing> cohomology;
  std::vector<std::vector<Partition>> basis;  // per weight
  std::vector<IntMatrix> pairing;             // <sigma^alpha, b^nu>
  std::vector<IntMatrix> dual_basis;          // row nu: delta_nu in sigma coordinates

  std::size_t index_of(const Partition& p) const {
    const auto& b = basis.at(size_of(p));
    return static_cast<std::size_t>(std::find(b.begin(), b.end(), p) - b.begin());
  }

  mpz_class counit(const Partition& alpha) const { return alpha.empty() ? 1 : 0; }

  /// Delta(sigma^alpha) in sigma (x) sigma coordinates, dual to multiplication
  /// of homology monomials: Delta(delta_nu) = sum over splits nu = mu + rho.
  TensorCoords coproduct(const Partition& alpha) const {
    const int w = size_of(alpha);
    const std::size_t a = index_of(alpha);
    TensorCoords out;
    for (std::size_t v = 0; v < basis[w].size(); ++v) {
      const mpz_class c = pairing[w](a, v);
      if (c == 0) continue;
      for (const auto& [mu, rho] : splits(basis[w][v])) {
        const int wm = size_of(mu), wr = size_of(rho);
        const std::size_t im = index_of(mu), ir = index_of(rho);
        for (std::size_t b = 0; b < basis[wm].size(); ++b) {
          if (dual_basis[wm](im, b) == 0) continue;
          for (std::size_t g = 0; g < basis[wr].size(); ++g) {
            if (dual_basis[wr](ir, g) == 0) continue;
            out[{basis[wm][b], basis[wr][g]}] += c * dual_basis[wm](im, b) * dual_basis[wr](ir, g);
          }
        }
      }
    }
    for (auto it = out.begin(); it != out.end();)
      it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
  }

  Polynomial sigma_monomial(const Partition& alpha) const {
    Monomial m(cohomology->ring()->size());
    for (int part : alpha) m[*cohomology->ring()->index_of("sigma" + std::to_string(part))] += 1;
    Polynomial p(cohomology->ring());
    p.add_term(m, Coeff(1));
    return p;
  }

  /// Element with the given integer coordinates in the sigma basis of weight w.
  Polynomial sigma_element(int w, const std::vector<mpz_class>& coords) const {
    Polynomial p(cohomology->ring());
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] != 0) p += sigma_monomial(basis[w][i]).scaled(Coeff(mpq_class(coords[i])));
    return p;
  }

  /// All ordered splits of a multiset into two sub-multisets.
  static std::vector<std::pair<Partition, Partition>> splits(const Partition& nu) {
    std::vector<std::pair<int, int>> groups;  // (part, multiplicity)
    for (int x : nu) {
      if (!groups.empty() && groups.back().first == x)
        ++groups.back().second;
      else
        groups.emplace_back(x, 1);
    }
    std::vector<std::pair<Partition, Partition>> out;
    Partition left, right;
    std::function<void(std::size_t)> rec = [&](std::size_t g) {
      if (g == groups.size()) {
        out.emplace_back(left, right);
        return;
      }
      const auto [part, mult] = groups[g];
      for (int k = mult; k >= 0; --k) {
        for (int i = 0; i < k; ++i) left.push_back(part);
        for (int i = 0; i < mult - k; ++i) right.push_back(part);
        rec(g + 1);
        left.resize(left.size() - k);
        right.resize(right.size() - (mult - k));
      }
    };
    rec(0);
    return out;
  }
};

namespace detail {

/// <sigma^alpha, b^nu> via <sigma_k f, x> = <sigma_k (x) f, Delta x> and
/// <sigma_k, y> = [y = b_1^k].
class PairingTable {
 public:
  mpz_class operator()(const Partition& alpha, const Partition& nu) {
    if (alpha.empty()) return nu.empty() ? 1 : 0;
    if (size_of(alpha) != size_of(nu)) return 0;
    auto key = std::make_pair(alpha, nu);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int k = alpha.front();
    const Partition rest(alpha.begin() + 1, alpha.end());
    mpz_class total = 0;
    // choose k parts of nu to give up one b_1 each
    std::vector<int> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
      if (static_cast<int>(pick.size()) == k) {
        Partition reduced;
        std::size_t p = 0;
        for (std::size_t j = 0; j < nu.size(); ++j) {
          int part = nu[j];
          if (p < pick.size() && pick[p] == static_cast<int>(j)) {
            --part;
            ++p;
          }
          if (part > 0) reduced.push_back(part);
        }
        std::sort(reduced.begin(), reduced.end(), std::greater<>());
        total += (*this)(rest, reduced);
        return;
      }
      for (std::size_t j = from; j < nu.size(); ++j) {
        pick.push_back(static_cast<int>(j));
        rec(j + 1);
        pick.pop_back();
      }
    };
    rec(0);
    memo_.emplace(std::move(key), total);
    return total;
  }

 private:
  std::map<std::pair<Partition, Partition>, mpz_class> memo_;
};

inline void require_free_coefficients(const BaseRing& base) {
  if (base.scalar_kind() == ScalarKind::IntegersModuloN)
    throw AlgebraError("Hopf computations need degreewise free coefficients; " + base.describe() + " has torsion");
}

}  // namespace detail

inline HopfData build_hopf(const OrientedTheory& theory, int d) {
  detail::require_free_coefficients(theory.coefficients());
  if (d < 0) throw InputError("truncation must be non-negative");
  HopfData h;
  h.coefficients = theory.coefficients();
  h.truncation = d;
  h.algebra = SymFilteredAlgebra{h.coefficients, d};
  h.cohomology = std::make_shared<PresentedRing>(cohomology(theory, SpaceDescriptor::bgl_infinite(), d));
  detail::PairingTable table;
  for (int w = 0; w <= d; ++w) {
    h.basis.push_back(partitions_of(w));
    const auto& b = h.basis.back();
    IntMatrix p(b.size(), b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) p(i, j) = table(b[i], b[j]);
    SmithForm s = smith_normal_form(p, true);
    for (std::size_t i = 0; i < b.size(); ++i)
      if (s.diagonal[i] != 1) throw AlgebraError("homology pairing is not perfect in weight " + std::to_string(w));
    h.pairing.push_back(p);
    h.dual_basis.push_back(*s.right * *s.left);
  }
  return h;
}

struct PrimitiveBasis {
  int weight = 0;
  IntMatrix vectors;  // rows in the sigma basis of this weight
  std::vector<std::string> elements;
  std::size_t rank() const { return vectors.rows; }
};

/// Solves Delta f = f (x) 1 + 1 (x) f in weight w over the integers.
inline PrimitiveBasis primitives(const HopfData& h, int w) {
  if (w < 0 || w > h.truncation) throw InputError("weight outside 0..D");
  const auto& cols = h.basis[w];
  std::map<std::pair<Partition, Partition>, std::size_t> row_of;
  std::vector<TensorCoords> deltas;
  for (const auto& alpha : cols) {
    deltas.push_back(h.coproduct(alpha));
    for (const auto& [key, c] : deltas.back())
      if (!key.first.empty() && !key.second.empty()) row_of.try_emplace(key, row_of.size());
  }
  IntMatrix system(row_of.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [key, c] : deltas[j])
      if (auto it = row_of.find(key); it != row_of.end()) system(it->second, j) = c;
  // weight 0: Delta 1 = 1 (x) 1, so only 0 is primitive there
  if (w == 0) system = IntMatrix::identity(1);
  PrimitiveBasis out;
  out.weight = w;
  out.vectors = right_kernel(system);
  for (std::size_t i = 0; i < out.vectors.rows; ++i)
    out.elements.push_back(h.sigma_element(w, out.vectors.row(i)).to_string());
  return out;
}

struct AdditiveWeight {
  int weight = 0;
  std::size_t primitive_rank = 0;
  std::size_t line_rank = 0;  // rank of R^0(BGL_1) in this weight
  Coeff determinant;          // restriction on primitives, sigma_1 -> lambda
  bool bijective = false;
  std::string note;
};

struct AdditiveReport {
  std::vector<AdditiveWeight> weights;
  bool isomorphism = true;
};

/// Restriction of primitives along BGL_1 -> BGL, weight by weight, plus the
/// weight-0 R^0 summand coming from the Z factor of BGL_Z.
inline AdditiveReport additive_maps_identification(const HopfData& h) {
  AdditiveReport report;
  OrientedTheory plain = additive_theory(std::max(h.truncation, 1), h.coefficients);
  auto line = cohomology(plain, SpaceDescriptor::bgl(1), h.truncation).graded_ranks();
  AdditiveWeight zero;
  zero.weight = 0;
  zero.primitive_rank = 1;
  zero.line_rank = line[0];
  zero.determinant = Coeff(1);
  zero.bijective = line[0] == 1;
  zero.note = "R^0 summand: additive maps on the Z factor";
  report.weights.push_back(zero);
  for (int w = 1; w <= h.truncation; ++w) {
    AdditiveWeight aw;
    aw.weight = w;
    PrimitiveBasis p = primitives(h, w);
    aw.primitive_rank = p.rank();
    aw.line_rank = line[w];
    // sigma_1^w -> lambda^w; every other sigma monomial involves some sigma_i, i >= 2
    const std::size_t ones = h.index_of(Partition(w, 1));
    if (aw.primitive_rank == aw.line_rank) {
      std::vector<std::vector<Coeff>> m;
      for (std::size_t i = 0; i < p.rank(); ++i) m.push_back({Coeff(mpq_class(p.vectors(i, ones)))});
      aw.determinant = m.empty() ? Coeff(1) : determinant(m, h.coefficients);
      aw.bijective = h.coefficients.is_unit(aw.determinant);
    }
    if (!aw.bijective) report.isomorphism = false;
    report.weights.push_back(aw);
  }
  if (!report.weights[0].bijective) report.isomorphism = false;
  return report;
}

struct IndecomposablesReport {
  int weight = 0;
  std::size_t square_rank = 0;   // rank of (I^2)_w inside I_w
  std::size_t rank = 0;          // free rank of (I/I^2)_w
  std::vector<mpz_class> torsion;
  std::vector<std::string> basis;  // coset representatives
  Coeff pairing_determinant;       // against primitives of the same weight
  bool unimodular = false;
};

/// (I/I^2)_w for the homology algebra, and its pairing with the primitives.
inline IndecomposablesReport indecomposables(const HopfData& h, int w) {
  if (w < 1 || w > h.truncation) throw InputError("indecomposables need 1 <= weight <= D");
  IndecomposablesReport r;
  r.weight = w;
  const auto& b = h.basis[w];
  IntMatrix squares(0, b.size());
  for (int a = 1; a < w; ++a)
    for (const auto& mu : h.basis[a])
      for (const auto& rho : h.basis[w - a]) {
        std::vector<mpz_class> row(b.size());
        row[h.index_of(SymFilteredAlgebra::multiply(mu, rho))] = 1;
        squares.append_row(row);
      }
  SmithForm s = smith_normal_form(squares);
  r.square_rank = s.rank;
  r.rank = b.size() - s.rank;
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.diagonal[i] != 1) r.torsion.push_back(s.diagonal[i]);
  std::vector<std::size_t> reps;
  for (std::size_t j = 0; j < b.size(); ++j) {
    bool hit = false;
    for (std::size_t i = 0; i < squares.rows && !hit; ++i) hit = squares(i, j) != 0;
    if (!hit) {
      reps.push_back(j);
      r.basis.push_back(partition_label(b[j], "b"));
    }
  }
  PrimitiveBasis p = primitives(h, w);
  if (p.rank() == reps.size()) {
    std::vector<std::vector<Coeff>> m(p.rank(), std::vector<Coeff>(reps.size()));
    for (std::size_t i = 0; i < p.rank(); ++i)
      for (std::size_t j = 0; j < reps.size(); ++j) {
        mpz_class v = 0;
        for (std::size_t a = 0; a < b.size(); ++a) v += p.vectors(i, a) * h.pairing[w](a, reps[j]);
        m[i][j] = Coeff(mpq_class(v));
      }
    r.pairing_determinant = m.empty() ? Coeff(1) : determinant(m, h.coefficients);
    r.unimodular = h.coefficients.is_unit(r.pairing_determinant);
  }
  return r;
}

}  // namespace oriented
