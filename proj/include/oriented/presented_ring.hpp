#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oriented/echelon.hpp"
#include "oriented/errors.hpp"
#include "oriented/integer_matrix.hpp"
#include "oriented/polynomial.hpp"

namespace oriented {

/// Weight-w piece of a presented ring over its coefficient subring.
struct GradedPiece {
  int weight = 0;
  std::vector<Monomial> monomials;              // every monomial of this weight, descending
  std::vector<Monomial> basis;                  // standard monomials
  std::vector<std::vector<Coeff>> relations;    // relation rows over `monomials`
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;
  std::string note;

  // Free coordinates: coefficients of `basis` (rewriting presentations) or
  // the normal-form vector times `projection` (linear presentations).
  bool standard_coordinates = true;
  IntMatrix projection;  // monomials x free_rank
  IntMatrix lift;        // free_rank x monomials, lift * projection = 1

  /// Element whose free coordinates are the i-th unit vector.
  Polynomial generator(std::size_t i, const RingPtr& ring) const {
    Polynomial p(ring);
    if (standard_coordinates) {
      p.add_term(basis.at(i), Coeff(1));
      return p;
    }
    for (std::size_t j = 0; j < monomials.size(); ++j)
      if (lift(i, j) != 0) p.add_term(monomials[j], Coeff(lift(i, j)));
    return p;
  }

  std::vector<Coeff> coordinates(const Polynomial& nf, const BaseRing& base) const {
    if (standard_coordinates) {
      std::vector<Coeff> out;
      out.reserve(basis.size());
      for (const auto& m : basis) out.push_back(nf.coefficient(m));
      return out;
    }
    std::vector<Coeff> v;
    v.reserve(monomials.size());
    for (const auto& m : monomials) v.push_back(nf.coefficient(m));
    std::vector<Coeff> out(projection.cols);
    for (std::size_t i = 0; i < projection.rows; ++i) {
      if (v[i].is_zero()) continue;
      for (std::size_t j = 0; j < projection.cols; ++j)
        if (projection(i, j) != 0) out[j] += v[i] * Coeff(projection(i, j));
    }
    for (auto& c : out) c = base.canonical(c);
    return out;
  }
};

namespace detail {

struct RewriteRule {
  Monomial lead;            // space monomial, parameter slots zero
  Polynomial replacement;   // lead == replacement in the quotient
};

enum class SpaceStrategy { Rewriting, LinearGraded, LinearUngraded };

/// Reduction machinery shared by copies of one PresentedRing. Echelon blocks
/// are built lazily and memoized under a mutex.
class ReductionEngine {
 public:
  ReductionEngine(RingPtr ring, const std::vector<Polynomial>& relations) : ring_(std::move(ring)) {
    for (std::size_t i = 0; i < ring_->size(); ++i) (ring_->variables()[i].parameter ? is_param_ : is_space_).push_back(i);
    std::vector<Polynomial> space;
    for (const auto& r : relations) {
      if (r.is_zero()) continue;
      if (touches_space(r))
        space.push_back(r);
      else
        param_relations_.push_back(r);
    }
    for (const auto& r : param_relations_) {
      if (!r.has_scalar_coefficients() && !coefficient_scalars_only(r))
        throw NonConfluentPresentation("coefficient relations may not involve the Laurent symbol");
      std::optional<int> k;
      for (const auto& [m, c] : r.terms()) {
        const int w = ring_->parameter_weight(m);
        if (k && *k != w) throw NonConfluentPresentation("coefficient relations must be weight-homogeneous");
        k = w;
      }
    }
    if (!try_rewriting(space)) setup_linear(space);
  }

  SpaceStrategy strategy() const { return strategy_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  const std::vector<Polynomial>& space_relations() const { return space_relations_; }
  bool has_parameter_relations() const { return !param_relations_.empty(); }

  Polynomial reduce(const Polynomial& p) const {
    if (strategy_ == SpaceStrategy::Rewriting) return reduce_parameters(rewrite(p));
    return reduce_linear(p);
  }

  /// Echelon of the space relations alone in one weight (or in the whole
  /// truncated ring, key -1, for ungraded presentations).
  std::shared_ptr<const Echelon> space_block(int w) const {
    std::lock_guard<std::mutex> lock(mutex_);
    return space_block_locked(w);
  }

  const std::vector<Monomial>& space_monomials(int w) const {
    std::lock_guard<std::mutex> lock(mutex_);
    return space_monomials_locked(w);
  }

 private:
  using Block = std::pair<int, int>;
  struct Indexed {
    std::vector<Monomial> monomials;
    std::unordered_map<Monomial, std::size_t, MonomialHash> index;
  };

  bool touches_space(const Polynomial& r) const {
    for (const auto& [m, c] : r.terms())
      for (auto i : is_space_)
        if (m[i]) return true;
    return false;
  }
  static bool coefficient_scalars_only(const Polynomial& r) {
    for (const auto& [m, c] : r.terms())
      if (!c.is_scalar()) return false;
    return true;
  }
  Monomial space_part(const Monomial& m) const {
    Monomial s = m;
    for (auto i : is_param_) s[i] = 0;
    return s;
  }
  Monomial param_part(const Monomial& m) const {
    Monomial s = m;
    for (auto i : is_space_) s[i] = 0;
    return s;
  }
  static bool coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && b[i]) return false;
    return true;
  }

  bool try_rewriting(std::vector<Polynomial> space) {
    strategy_ = SpaceStrategy::Rewriting;
    std::sort(space.begin(), space.end(), [&](const Polynomial& a, const Polynomial& b) {
      return ring_->compare(a.leading().first, b.leading().first) < 0;
    });
    for (const auto& r0 : space) {
      if (!r0.homogeneous_weight()) return fail_rewriting();
      Polynomial r = reduce_parameters(rewrite(r0));
      if (r.is_zero()) continue;
      const auto& [lm, lc] = r.leading();
      const Monomial lead = space_part(lm);
      if (!(lead == lm) || !ring_->base().is_unit(lc)) return fail_rewriting();
      for (const auto& [m, c] : r.terms())
        if (!(m == lm) && space_part(m) == lead) return fail_rewriting();
      Polynomial tail = r;
      tail.erase(lm);
      const Coeff scale = -ring_->base().inverse(lc);
      RewriteRule rule{lead, tail.scaled(scale)};
      for (const auto& other : rules_)
        if ((!rule.replacement.is_zero() || !other.replacement.is_zero()) && !coprime(other.lead, rule.lead))
          return fail_rewriting();
      rules_.push_back(std::move(rule));
    }
    space_relations_ = std::move(space);
    return true;
  }
  bool fail_rewriting() {
    rules_.clear();
    return false;
  }

  void setup_linear(const std::vector<Polynomial>& space) {
    space_relations_ = space;
    bool graded = true;
    for (const auto& r : space) {
      if (!r.has_scalar_coefficients())
        throw NonConfluentPresentation(
            "relation '" + r.to_string() +
            "' is outside the rewriting classes and carries non-scalar coefficients, so degreewise reduction over "
            "the base does not apply");
      if (!r.homogeneous_weight()) graded = false;
    }
    if (!graded && ring_->has_parameters())
      throw NonConfluentPresentation("ungraded relations over a parameter ring are not supported");
    strategy_ = graded ? SpaceStrategy::LinearGraded : SpaceStrategy::LinearUngraded;
  }

  Polynomial rewrite(const Polynomial& p) const {
    if (rules_.empty()) return p;
    Polynomial out = p;
    auto it = out.terms().begin();
    while (it != out.terms().end()) {
      const Monomial m = it->first;
      const RewriteRule* rule = nullptr;
      for (const auto& r : rules_)
        if (r.lead.divides(m)) {
          rule = &r;
          break;
        }
      if (!rule) {
        ++it;
        continue;
      }
      const Coeff c = it->second;
      out.erase(m);
      out += rule->replacement.times_monomial(m / rule->lead, c);
      it = out.terms().upper_bound(m);
    }
    return out;
  }

  const Indexed& param_monomials_locked(int k) const {
    auto it = param_monomials_.find(k);
    if (it != param_monomials_.end()) return it->second;
    Indexed ix;
    ix.monomials = monomials_of_weight(*ring_, is_param_, k);
    for (std::size_t i = 0; i < ix.monomials.size(); ++i) ix.index.emplace(ix.monomials[i], i);
    return param_monomials_.emplace(k, std::move(ix)).first->second;
  }

  const std::vector<Monomial>& space_monomials_locked(int w) const {
    return space_indexed_locked(w).monomials;
  }
  const Indexed& space_indexed_locked(int w) const {
    auto it = space_monomials_.find(w);
    if (it != space_monomials_.end()) return it->second;
    Indexed ix;
    if (w < 0) {
      for (int v = ring_->truncation(); v >= 0; --v) {
        auto part = monomials_of_weight(*ring_, is_space_, v);
        ix.monomials.insert(ix.monomials.end(), part.begin(), part.end());
      }
    } else {
      ix.monomials = monomials_of_weight(*ring_, is_space_, w);
    }
    for (std::size_t i = 0; i < ix.monomials.size(); ++i) ix.index.emplace(ix.monomials[i], i);
    return space_monomials_.emplace(w, std::move(ix)).first->second;
  }

  std::shared_ptr<const Echelon> param_block_locked(int k) const {
    auto it = param_blocks_.find(k);
    if (it != param_blocks_.end()) return it->second;
    const Indexed& cols = param_monomials_locked(k);
    auto e = std::make_shared<Echelon>(cols.monomials.size(), ring_->base());
    for (const auto& r : param_relations_) {
      const int kr = ring_->parameter_weight(r.leading().first);
      if (kr > k) continue;
      for (const auto& m : monomials_of_weight(*ring_, is_param_, k - kr)) {
        Echelon::Row row(cols.monomials.size());
        bool any = false;
        for (const auto& [t, c] : r.terms()) {
          auto pos = cols.index.find(t * m);
          if (pos == cols.index.end()) continue;
          row[pos->second] = c.scalar();
          any = true;
        }
        if (any) e->insert(std::move(row));
      }
    }
    param_blocks_.emplace(k, e);
    return e;
  }

  std::shared_ptr<const Echelon> space_block_locked(int w) const {
    auto it = space_blocks_.find(w);
    if (it != space_blocks_.end()) return it->second;
    const Indexed& cols = space_indexed_locked(w);
    auto e = std::make_shared<Echelon>(cols.monomials.size(), ring_->base());
    for (const auto& r : space_relations_) {
      std::vector<Monomial> multipliers;
      if (w < 0) {
        for (int v = ring_->truncation() - r.min_weight(); v >= 0; --v) {
          auto part = monomials_of_weight(*ring_, is_space_, v);
          multipliers.insert(multipliers.end(), part.begin(), part.end());
        }
      } else {
        const int wr = *r.homogeneous_weight();
        if (wr > w) continue;
        multipliers = monomials_of_weight(*ring_, is_space_, w - wr);
      }
      for (const auto& m : multipliers) {
        Echelon::Row row(cols.monomials.size());
        bool any = false;
        for (const auto& [t, c] : r.terms()) {
          auto pos = cols.index.find(t * m);
          if (pos == cols.index.end()) continue;
          row[pos->second] = c.scalar();
          any = true;
        }
        if (any) e->insert(std::move(row));
      }
    }
    space_blocks_.emplace(w, e);
    return e;
  }

  // columns are pairs (space monomial, parameter monomial), space-major
  std::shared_ptr<const Echelon> combined_block_locked(int w, int k) const {
    auto key = Block{w, k};
    auto it = combined_blocks_.find(key);
    if (it != combined_blocks_.end()) return it->second;
    const Indexed& sc = space_indexed_locked(w);
    const Indexed& pc = param_monomials_locked(k);
    const std::size_t np = pc.monomials.size();
    auto e = std::make_shared<Echelon>(sc.monomials.size() * np, ring_->base());
    auto space = space_block_locked(w);
    for (std::size_t c = 0; c < space->cols(); ++c) {
      const auto& row = space->pivot_row(c);
      if (!row) continue;
      for (std::size_t j = 0; j < np; ++j) {
        Echelon::Row big(e->cols());
        for (std::size_t i = 0; i < row->size(); ++i) big[i * np + j] = (*row)[i];
        e->insert(std::move(big));
      }
    }
    if (!param_relations_.empty()) {
      auto param = param_block_locked(k);
      for (std::size_t c = 0; c < param->cols(); ++c) {
        const auto& row = param->pivot_row(c);
        if (!row) continue;
        for (std::size_t i = 0; i < sc.monomials.size(); ++i) {
          Echelon::Row big(e->cols());
          for (std::size_t j = 0; j < np; ++j) big[i * np + j] = (*row)[j];
          e->insert(std::move(big));
        }
      }
    }
    combined_blocks_.emplace(key, e);
    return e;
  }

  Polynomial reduce_parameters(const Polynomial& p) const {
    if (param_relations_.empty()) return p;
    // slice by (space monomial, parameter weight, Laurent exponent)
    std::map<std::tuple<Monomial, int, int>, Echelon::Row, SliceLess> slices{SliceLess{ring_.get()}};
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& [m, c] : p.terms()) {
      const Monomial pm = param_part(m);
      const int k = ring_->parameter_weight(pm);
      const Indexed& cols = param_monomials_locked(k);
      for (const auto& [e, v] : c.terms()) {
        auto& row = slices[{space_part(m), k, e}];
        if (row.empty()) row.resize(cols.monomials.size());
        row[cols.index.at(pm)] += v;
      }
    }
    Polynomial out(ring_);
    for (auto& [key, row] : slices) {
      const auto& [s, k, e] = key;
      param_block_locked(k)->reduce(row);
      const Indexed& cols = param_monomials_locked(k);
      for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] != 0) out.add_term(s * cols.monomials[i], Coeff::monomial(e, row[i]));
    }
    return out;
  }

  Polynomial reduce_linear(const Polynomial& p) const {
    const bool graded = strategy_ == SpaceStrategy::LinearGraded;
    std::map<std::tuple<int, int, int>, Echelon::Row> slices;
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& [m, c] : p.terms()) {
      const Monomial sm = space_part(m);
      const Monomial pm = param_part(m);
      const int w = graded ? ring_->space_weight(sm) : -1;
      const int k = ring_->parameter_weight(pm);
      const Indexed& sc = space_indexed_locked(w);
      const Indexed& pc = param_monomials_locked(k);
      const std::size_t col = sc.index.at(sm) * pc.monomials.size() + pc.index.at(pm);
      for (const auto& [e, v] : c.terms()) {
        auto& row = slices[{w, k, e}];
        if (row.empty()) row.resize(sc.monomials.size() * pc.monomials.size());
        row[col] += v;
      }
    }
    Polynomial out(ring_);
    for (auto& [key, row] : slices) {
      const auto& [w, k, e] = key;
      combined_block_locked(w, k)->reduce(row);
      const Indexed& sc = space_indexed_locked(w);
      const Indexed& pc = param_monomials_locked(k);
      const std::size_t np = pc.monomials.size();
      for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] != 0) out.add_term(sc.monomials[i / np] * pc.monomials[i % np], Coeff::monomial(e, row[i]));
    }
    return out;
  }

  struct SliceLess {
    const PolyRing* ring;
    bool operator()(const std::tuple<Monomial, int, int>& a, const std::tuple<Monomial, int, int>& b) const {
      if (int c = ring->compare(std::get<0>(a), std::get<0>(b))) return c > 0;
      return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
    }
  };

  RingPtr ring_;
  std::vector<std::size_t> is_space_;
  std::vector<std::size_t> is_param_;
  std::vector<Polynomial> space_relations_;
  std::vector<Polynomial> param_relations_;
  std::vector<RewriteRule> rules_;
  SpaceStrategy strategy_ = SpaceStrategy::Rewriting;

  mutable std::mutex mutex_;
  mutable std::map<int, Indexed> param_monomials_;
  mutable std::map<int, Indexed> space_monomials_;
  mutable std::map<int, std::shared_ptr<const Echelon>> param_blocks_;
  mutable std::map<int, std::shared_ptr<const Echelon>> space_blocks_;
  mutable std::map<Block, std::shared_ptr<const Echelon>> combined_blocks_;
};

}  // namespace detail

/// Quotient of a truncated polynomial ring by finitely many relations.
class PresentedRing {
 public:
  PresentedRing(RingPtr ring, std::vector<Polynomial> relations) : ring_(std::move(ring)), relations_() {
    for (auto& r : relations) {
      if (!(*r.ring() == *ring_)) r = rebase(r, ring_);
      relations_.push_back(std::move(r));
    }
    engine_ = std::make_shared<const detail::ReductionEngine>(ring_, relations_);
  }

  const RingPtr& ring() const { return ring_; }
  const BaseRing& base() const { return ring_->base(); }
  int truncation() const { return ring_->truncation(); }
  const std::vector<Polynomial>& relations() const { return relations_; }
  const std::vector<Variable>& variables() const { return ring_->variables(); }
  detail::SpaceStrategy strategy() const { return engine_->strategy(); }
  bool graded() const { return engine_->strategy() != detail::SpaceStrategy::LinearUngraded; }

  Polynomial element(const std::string& text) const { return parse_polynomial(ring_, text); }
  Polynomial variable(const std::string& name) const { return Polynomial::variable(ring_, name); }
  Polynomial one() const { return Polynomial::constant(ring_, Coeff(1)); }
  Polynomial zero() const { return Polynomial(ring_); }

  Polynomial normal_form(const Polynomial& element) const {
    if (element.ring() != ring_ && !(*element.ring() == *ring_)) return engine_->reduce(rebase(element, ring_));
    return engine_->reduce(element);
  }

  bool equal(const Polynomial& a, const Polynomial& b) const { return normal_form(a - b).is_zero(); }

  GradedPiece graded_basis(int w) const {
    if (w < 0 || w > truncation())
      throw InputError("weight " + std::to_string(w) + " outside 0.." + std::to_string(truncation()));
    if (!graded()) throw AlgebraError("presentation has inhomogeneous relations; weight pieces are not defined");
    GradedPiece piece;
    piece.weight = w;
    piece.monomials = engine_->space_monomials(w);
    if (engine_->strategy() == detail::SpaceStrategy::Rewriting) {
      fill_rewriting_piece(piece);
    } else {
      fill_linear_piece(piece);
    }
    if (ring_->has_parameters()) {
      if (!piece.note.empty()) piece.note += "; ";
      piece.note += "ranks over the coefficient subring";
    }
    return piece;
  }

  std::vector<GradedPiece> graded_pieces() const {
    std::vector<GradedPiece> out;
    for (int w = 0; w <= truncation(); ++w) out.push_back(graded_basis(w));
    return out;
  }

  /// Free rank per weight, 0..D.
  std::vector<std::size_t> graded_ranks() const {
    std::vector<std::size_t> out;
    for (int w = 0; w <= truncation(); ++w) out.push_back(graded_basis(w).free_rank);
    return out;
  }

  bool degreewise_free() const {
    for (int w = 0; w <= truncation(); ++w)
      if (!graded_basis(w).torsion.empty()) return false;
    return true;
  }

  /// Largest weight carrying a nonzero piece.
  int top_weight() const {
    int top = -1;
    for (int w = 0; w <= truncation(); ++w) {
      auto p = graded_basis(w);
      if (p.free_rank || !p.torsion.empty()) top = w;
    }
    return top;
  }

 private:
  void fill_rewriting_piece(GradedPiece& piece) const {
    for (const auto& m : piece.monomials) {
      bool reducible = false;
      for (const auto& r : engine_->rules()) reducible = reducible || r.lead.divides(m);
      if (!reducible) piece.basis.push_back(m);
    }
    piece.free_rank = piece.basis.size();
    piece.standard_coordinates = true;
    std::unordered_map<Monomial, std::size_t, MonomialHash> index;
    for (std::size_t i = 0; i < piece.monomials.size(); ++i) index.emplace(piece.monomials[i], i);
    bool skipped = false;
    for (const auto& r : engine_->space_relations()) {
      auto wr = r.homogeneous_weight();
      if (!wr || *wr > piece.weight) continue;
      for (const auto& m : monomials_of_weight(*ring_, ring_->space_indices(), piece.weight - *wr)) {
        std::vector<Coeff> row(piece.monomials.size());
        bool ok = true;
        for (const auto& [t, c] : r.terms()) {
          auto pos = index.find(t * m);
          if (pos == index.end()) {
            ok = false;
            break;
          }
          row[pos->second] += c;
        }
        if (ok)
          piece.relations.push_back(std::move(row));
        else
          skipped = true;
      }
    }
    if (skipped) piece.note = "relations with coefficient parameters omitted from the matrix";
  }

  void fill_linear_piece(GradedPiece& piece) const {
    auto block = engine_->space_block(piece.weight);
    IntMatrix rows = block->rows();
    for (std::size_t i = 0; i < rows.rows; ++i) {
      std::vector<Coeff> row(rows.cols);
      for (std::size_t j = 0; j < rows.cols; ++j) row[j] = Coeff(rows(i, j));
      piece.relations.push_back(std::move(row));
    }
    for (std::size_t c = 0; c < piece.monomials.size(); ++c) {
      const auto& p = block->pivot_row(c);
      if (!p || (block->mode() == Echelon::Mode::Modular && (*p)[c] == mpq_class(base().modulus())))
        piece.basis.push_back(piece.monomials[c]);
    }
    SmithForm snf = smith_normal_form(rows, true);
    const std::size_t m = piece.monomials.size();
    std::vector<std::size_t> free_cols;
    const bool modular = base().scalar_kind() == ScalarKind::IntegersModuloN;
    for (std::size_t i = 0; i < m; ++i) {
      const mpz_class d = i < snf.diagonal.size() ? snf.diagonal[i] : mpz_class(0);
      if (modular) {
        if (d == base().modulus())
          free_cols.push_back(i);
        else if (d != 1 && d != 0)
          piece.torsion.push_back(d);
      } else if (d == 0) {
        free_cols.push_back(i);
      } else if (d != 1 && base().scalar_kind() == ScalarKind::Integers) {
        piece.torsion.push_back(d);
      }
    }
    if (modular && !base().modulus_is_prime())
      piece.note = "composite modulus: free rank counts Z/" + base().modulus().get_str() + " summands";
    piece.free_rank = free_cols.size();
    piece.standard_coordinates = false;
    piece.projection = IntMatrix(m, free_cols.size());
    piece.lift = IntMatrix(free_cols.size(), m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < free_cols.size(); ++j) {
        piece.projection(i, j) = (*snf.right)(i, free_cols[j]);
        piece.lift(j, i) = (*snf.right_inverse)(free_cols[j], i);
      }
  }

  RingPtr ring_;
  std::vector<Polynomial> relations_;
  std::shared_ptr<const detail::ReductionEngine> engine_;
};

}  // namespace oriented
