#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "oriented/cohomology.hpp"
#include "oriented/errors.hpp"
#include "oriented/hopf.hpp"
#include "oriented/integer_matrix.hpp"
#include "oriented/partitions.hpp"

namespace oriented {

/// Sym^n / Sym^(n-1) in every weight 0..D: the algebraic shadow of MGL_n.
struct ThomPiece {
  int level = 0;
  std::vector<FilteredPiece> weights;
};

struct ThomDecomposition {
  HopfData source;
  int truncation = 0;
  std::vector<ThomPiece> pieces;            // n = 0..D
  std::vector<Partition> thom_classes;      // theta_n = b_1^n, the weight-n class of piece n
  std::vector<std::size_t> piece_totals;    // sum over n of piece ranks, per weight
  std::vector<std::size_t> bgl_ranks;       // R^0(BGL) per weight
  bool consistent = true;                   // piece_totals == bgl_ranks and every inclusion splits
};

inline ThomDecomposition thom_decompose(const HopfData& h) {
  ThomDecomposition dec;
  dec.source = h;
  dec.truncation = h.truncation;
  const int d = h.truncation;
  dec.piece_totals.assign(d + 1, 0);
  for (int n = 0; n <= d; ++n) {
    ThomPiece piece;
    piece.level = n;
    for (int w = 0; w <= d; ++w) {
      FilteredPiece fp = h.algebra.quotient(n, w);
      if (!fp.split || !fp.torsion.empty()) dec.consistent = false;
      dec.piece_totals[w] += fp.free_rank;
      piece.weights.push_back(std::move(fp));
    }
    dec.pieces.push_back(std::move(piece));
    dec.thom_classes.push_back(Partition(n, 1));
  }
  dec.bgl_ranks = h.cohomology->graded_ranks();
  if (dec.piece_totals != dec.bgl_ranks) dec.consistent = false;
  return dec;
}

struct ThomProductReport {
  int p = 0;
  int q = 0;
  std::size_t products_checked = 0;
  bool filtration_compatible = true;  // A_p A_q in A_(p+q), A_(p-1) A_q in A_(p+q-1)
  bool thom_multiplicative = true;    // theta_p theta_q = theta_(p+q)
  bool commutative = true;            // (p,q) and (q,p) tables agree after the swap
  bool square_commutes = true;        // dualized coproduct = dual of the graded product
  std::string failure;
  bool pass() const { return filtration_compatible && thom_multiplicative && commutative && square_commutes; }
};

namespace detail {

/// Graded product table piece p (x) piece q -> piece p+q, all weights <= D.
/// Entry (a, b) -> index in the target piece, or nullopt when it leaves it.
inline std::map<std::pair<Partition, Partition>, std::optional<Partition>> graded_table(const ThomDecomposition& dec,
                                                                                       int p, int q) {
  std::map<std::pair<Partition, Partition>, std::optional<Partition>> out;
  const int d = dec.truncation;
  for (int w1 = 0; w1 <= d; ++w1)
    for (int w2 = 0; w1 + w2 <= d; ++w2) {
      if (p > d || q > d) continue;
      const auto& target = dec.pieces[std::min(p + q, d)].weights[w1 + w2].basis;
      for (const auto& a : dec.pieces[p].weights[w1].basis)
        for (const auto& b : dec.pieces[q].weights[w2].basis) {
          Partition prod = SymFilteredAlgebra::multiply(a, b);
          const bool inside = p + q <= d && std::find(target.begin(), target.end(), prod) != target.end();
          out[{a, b}] = inside ? std::optional<Partition>(prod) : std::nullopt;
        }
    }
  return out;
}

}  // namespace detail

/// Multiplicativity of the filtration quotients and of the Thom classes.
inline ThomProductReport thom_product_check(const ThomDecomposition& dec, int p, int q) {
  if (p < 0 || q < 0 || p + q > dec.truncation) throw InputError("thom_product_check needs p + q <= D");
  ThomProductReport r;
  r.p = p;
  r.q = q;
  const HopfData& h = dec.source;
  const int d = dec.truncation;

  // filtration: A_p A_q lands in A_(p+q); A_(p-1) A_q in A_(p+q-1)
  for (int w1 = 0; w1 <= d; ++w1)
    for (int w2 = 0; w1 + w2 <= d; ++w2)
      for (int shift : {0, 1}) {
        if (p - shift < 0) continue;
        for (const auto& a : h.algebra.basis(p - shift, w1))
          for (const auto& b : h.algebra.basis(q, w2)) {
            Partition prod = SymFilteredAlgebra::multiply(a, b);
            if (static_cast<int>(prod.size()) > p + q - shift) {
              r.filtration_compatible = false;
              r.failure = partition_label(a, "b") + " * " + partition_label(b, "b") + " leaves the filtration";
            }
          }
      }

  auto table = detail::graded_table(dec, p, q);
  auto swapped = detail::graded_table(dec, q, p);
  for (const auto& [key, prod] : table) {
    ++r.products_checked;
    if (!prod) {
      r.filtration_compatible = false;
      r.failure = "graded product of " + partition_label(key.first, "b") + " and " + partition_label(key.second, "b") +
                  " is not in piece " + std::to_string(p + q);
    }
    auto it = swapped.find({key.second, key.first});
    if (it == swapped.end() || it->second != prod) r.commutative = false;
  }

  const Partition theta = SymFilteredAlgebra::multiply(dec.thom_classes[p], dec.thom_classes[q]);
  if (theta != dec.thom_classes[p + q]) r.thom_multiplicative = false;

  // dual square: for nu with p+q parts, the coproduct of delta_nu (from the
  // Hopf data, converted out of sigma coordinates) restricted to
  // piece p (x) piece q equals the sum over splits mu + rho = nu.
  for (int w = 0; w <= d; ++w) {
    const auto& basis = h.basis[w];
    for (std::size_t v = 0; v < basis.size(); ++v) {
      const Partition& nu = basis[v];
      if (static_cast<int>(nu.size()) != p + q) continue;
      std::map<std::pair<Partition, Partition>, mpz_class> got;
      for (std::size_t a = 0; a < basis.size(); ++a) {
        const mpz_class qa = h.dual_basis[w](v, a);
        if (qa == 0) continue;
        for (const auto& [key, c] : h.coproduct(basis[a])) {
          const int wl = size_of(key.first), wr = size_of(key.second);
          const std::size_t il = h.index_of(key.first), ir = h.index_of(key.second);
          for (std::size_t x = 0; x < h.basis[wl].size(); ++x) {
            const auto& mu = h.basis[wl][x];
            if (static_cast<int>(mu.size()) != p || h.pairing[wl](il, x) == 0) continue;
            for (std::size_t y = 0; y < h.basis[wr].size(); ++y) {
              const auto& rho = h.basis[wr][y];
              if (static_cast<int>(rho.size()) != q || h.pairing[wr](ir, y) == 0) continue;
              got[{mu, rho}] += qa * c * h.pairing[wl](il, x) * h.pairing[wr](ir, y);
            }
          }
        }
      }
      std::map<std::pair<Partition, Partition>, mpz_class> expected;
      for (const auto& [mu, rho] : HopfData::splits(nu))
        if (static_cast<int>(mu.size()) == p && static_cast<int>(rho.size()) == q) expected[{mu, rho}] += 1;
      for (auto it = got.begin(); it != got.end();) it = it->second == 0 ? got.erase(it) : std::next(it);
      if (got != expected) {
        r.square_commutes = false;
        r.failure = "square fails at " + partition_label(nu, "b");
      }
    }
  }
  return r;
}

struct ThomIsoWeight {
  int weight = 0;
  std::size_t piece_rank = 0;
  std::size_t shifted_bgl_rank = 0;  // rank of R^0(BGL_n) in weight w - n
  bool bijective = false;
};

struct ThomIsoReport {
  int n = 0;
  std::vector<ThomIsoWeight> weights;
  bool isomorphism = true;
};

/// Thom isomorphism for the universal rank-n bundle: piece n in weight w
/// against R^0(BGL_n) in weight w - n, with the explicit shift map
/// b_(i1)..b_(in) -> b_(i1+1)..b_(in+1) (b_0 padding included).
inline ThomIsoReport thom_iso_check(const OrientedTheory& theory, int n, int d) {
  if (n < 0 || n > 3) throw InputError("thom_iso_check supports 0 <= n <= 3");
  detail::require_free_coefficients(theory.coefficients());
  ThomIsoReport r;
  r.n = n;
  auto bgl = cohomology(theory, SpaceDescriptor::bgl(n), d).graded_ranks();
  SymFilteredAlgebra a{theory.coefficients(), d};
  for (int w = 0; w <= d; ++w) {
    ThomIsoWeight tw;
    tw.weight = w;
    FilteredPiece piece = a.quotient(n, w);
    tw.piece_rank = piece.free_rank;
    tw.shifted_bgl_rank = w - n >= 0 ? bgl[w - n] : 0;
    std::vector<Partition> src = w - n >= 0 ? a.basis(n, w - n) : std::vector<Partition>{};
    IntMatrix shift(src.size(), piece.basis.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
      Partition up(n, 1);
      for (std::size_t k = 0; k < src[i].size(); ++k) up[k] += src[i][k];
      auto it = std::find(piece.basis.begin(), piece.basis.end(), up);
      if (it != piece.basis.end()) shift(i, static_cast<std::size_t>(it - piece.basis.begin())) = 1;
    }
    const bool square = shift.rows == shift.cols;
    const bool unimodular = square && (shift.rows == 0 || abs(determinant(shift)) == 1);
    tw.bijective = unimodular && tw.piece_rank == tw.shifted_bgl_rank;
    if (!tw.bijective) r.isomorphism = false;
    r.weights.push_back(tw);
  }
  return r;
}

}  // namespace oriented
