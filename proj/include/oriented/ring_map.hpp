#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oriented/errors.hpp"
#include "oriented/integer_matrix.hpp"
#include "oriented/presented_ring.hpp"

namespace oriented {

/// Homomorphism of presented rings given by generator images. The Laurent
/// symbol of the source goes to itself unless `symbol_image` says otherwise.
class RingMap {
 public:
  RingMap(PresentedRing source, PresentedRing target, std::vector<Polynomial> images,
          std::optional<Polynomial> symbol_image = std::nullopt)
      : source_(std::move(source)),
        target_(std::move(target)),
        images_(std::move(images)),
        symbol_image_(std::move(symbol_image)),
        state_(std::make_shared<State>()) {
    if (images_.size() != source_.ring()->size())
      throw InputError("ring map needs " + std::to_string(source_.ring()->size()) + " generator images, got " +
                       std::to_string(images_.size()));
    for (auto& im : images_)
      if (!(*im.ring() == *target_.ring())) im = rebase(im, target_.ring());
    if (symbol_image_ && !(*symbol_image_->ring() == *target_.ring()))
      symbol_image_ = rebase(*symbol_image_, target_.ring());
  }

  /// Map sending every source variable to the target variable of the same name.
  static RingMap by_name(const PresentedRing& source, const PresentedRing& target) {
    std::vector<Polynomial> images;
    for (const auto& v : source.variables()) images.push_back(target.variable(v.name));
    return RingMap(source, target, std::move(images));
  }

  const PresentedRing& source() const { return source_; }
  const PresentedRing& target() const { return target_; }
  const std::vector<Polynomial>& images() const { return images_; }
  const std::optional<Polynomial>& symbol_image() const { return symbol_image_; }
  bool checks_truncation() const { return check_truncation_; }

  /// Copy that only checks the listed relations. Used for coefficient maps
  /// such as a_ij -> (coefficient of F) that are not weight-compatible with
  /// the source truncation.
  RingMap relations_only() const {
    RingMap out(*this);
    out.state_ = std::make_shared<State>();
    out.check_truncation_ = false;
    return out;
  }

  /// Throws IllDefinedMap naming the first relation that does not vanish.
  /// The verdict is computed once and shared by copies of the map.
  void check() const {
    std::call_once(state_->once, [this] { state_->failure = find_violation(); });
    if (state_->failure) throw IllDefinedMap(state_->failure->first, state_->failure->second);
  }
  bool well_defined() const {
    try {
      check();
      return true;
    } catch (const IllDefinedMap&) {
      return false;
    }
  }

  Polynomial apply(const Polynomial& element) const {
    check();
    return target_.normal_form(push(element));
  }

  /// Substitution without the well-definedness check or reduction.
  Polynomial push(const Polynomial& element) const {
    Polynomial e = *element.ring() == *source_.ring() ? element : rebase(element, source_.ring());
    return evaluate(e, images_, target_.ring(), coeff_image());
  }

 private:
  struct State {
    std::once_flag once;
    std::optional<std::pair<std::size_t, std::string>> failure;
  };

  CoeffImage coeff_image() const {
    if (!symbol_image_) return default_coeff_image(source_.ring(), target_.ring());
    const Polynomial up = *symbol_image_;
    const BaseRing& tb = target_.base();
    if (!(up.size() == 1 && up.leading().first.is_one() && tb.is_unit(up.leading().second)))
      throw InputError("image of the Laurent symbol must be a unit of the target base");
    const Coeff u = up.leading().second;
    const Coeff uinv = tb.inverse(u);
    const RingPtr target = target_.ring();
    return [u, uinv, target, &tb](const Coeff& c) {
      Coeff out;
      for (const auto& [e, v] : c.terms()) {
        Coeff term(v);
        for (int i = 0; i < std::abs(e); ++i) term = term * (e > 0 ? u : uinv);
        out += term;
      }
      return Polynomial::constant(target, tb.canonical(out));
    };
  }

  std::optional<std::pair<std::size_t, std::string>> find_violation() const {
    const auto& rels = source_.relations();
    for (std::size_t i = 0; i < rels.size(); ++i) {
      Polynomial img = target_.normal_form(push(rels[i]));
      if (!img.is_zero())
        return std::make_pair(i, "relation " + std::to_string(i) + " (" + rels[i].to_string() + ") maps to " +
                                     img.to_string() + " instead of 0");
    }
    // monomials killed by the source truncation must die in the target as well
    const auto& space = source_.ring()->space_indices();
    int max_w = 0;
    for (auto v : space) max_w = std::max(max_w, source_.ring()->variables()[v].weight);
    const int ds = source_.truncation();
    if (check_truncation_ && (target_.truncation() > ds || !images_homogeneous())) {
      std::size_t idx = rels.size();
      const RingPtr big = PolyRing::make(source_.base(), source_.ring()->variables(), ds + max_w,
                                         source_.ring()->parameter_truncation());
      std::vector<Polynomial> big_images;
      for (const auto& im : images_) big_images.push_back(im);
      for (int w = ds + 1; w <= ds + max_w; ++w)
        for (const auto& m : monomials_of_weight(*big, space, w)) {
          Polynomial mono(big);
          mono.add_term(m, Coeff(1));
          Polynomial img = target_.normal_form(evaluate(mono, images_, target_.ring(), coeff_image()));
          if (!img.is_zero())
            return std::make_pair(idx, "monomial " + mono.to_string() + " vanishes by truncation but maps to " +
                                           img.to_string());
          ++idx;
        }
    }
    return std::nullopt;
  }

  bool images_homogeneous() const {
    for (std::size_t i = 0; i < images_.size(); ++i) {
      const auto& v = source_.variables()[i];
      if (v.parameter) continue;
      auto w = images_[i].homogeneous_weight();
      if (w && *w < v.weight) return false;
    }
    return true;
  }

  PresentedRing source_;
  PresentedRing target_;
  std::vector<Polynomial> images_;
  std::optional<Polynomial> symbol_image_;
  std::shared_ptr<State> state_;
  bool check_truncation_ = true;
};

struct WeightComparison {
  int weight = 0;
  std::size_t source_rank = 0;
  std::size_t target_rank = 0;
  std::vector<mpz_class> source_torsion;
  std::vector<mpz_class> target_torsion;
  bool bijective = false;
  std::string note;
};

struct IsomorphismReport {
  bool isomorphism = true;
  std::optional<int> first_failure;
  std::vector<WeightComparison> weights;
  std::string note;
};

namespace detail {

/// Weight-w component of the image of each source monomial, in normal form.
inline std::vector<Polynomial> piece_images(const RingMap& map, const std::vector<Monomial>& monomials, int w) {
  std::vector<Polynomial> out;
  for (const auto& m : monomials) {
    Polynomial mono(map.source().ring());
    mono.add_term(m, Coeff(1));
    out.push_back(map.apply(mono).weight_part(w));
  }
  return out;
}

}  // namespace detail

/// Checks that the map is bijective on every weight piece 0..D.
inline IsomorphismReport is_graded_isomorphism(const RingMap& map) {
  map.check();
  const PresentedRing& src = map.source();
  const PresentedRing& tgt = map.target();
  if (src.truncation() != tgt.truncation()) throw InputError("isomorphism check needs equal truncations");
  if (src.ring()->has_parameters() || tgt.ring()->has_parameters())
    throw InputError("isomorphism check needs rings without coefficient parameters");
  const BaseRing& base = tgt.base();
  IsomorphismReport report;
  if (base.scalar_kind() == ScalarKind::IntegersModuloN && !base.modulus_is_prime())
    report.note = "composite modulus: bijectivity decided by surjectivity plus equal invariant factors";
  for (int w = 0; w <= src.truncation(); ++w) {
    GradedPiece sp = src.graded_basis(w);
    GradedPiece tp = tgt.graded_basis(w);
    WeightComparison cmp;
    cmp.weight = w;
    cmp.source_rank = sp.free_rank;
    cmp.target_rank = tp.free_rank;
    cmp.source_torsion = sp.torsion;
    cmp.target_torsion = tp.torsion;
    const bool free_case = sp.torsion.empty() && tp.torsion.empty();
    if (sp.free_rank != tp.free_rank || sp.torsion != tp.torsion) {
      cmp.bijective = false;
      cmp.note = "rank or torsion mismatch";
    } else if (free_case && base.scalar_kind() != ScalarKind::IntegersModuloN) {
      // square coordinate matrix; bijective iff its determinant is a unit
      std::vector<std::vector<Coeff>> mat;
      for (std::size_t i = 0; i < sp.free_rank; ++i) {
        Polynomial img = map.apply(sp.generator(i, src.ring())).weight_part(w);
        mat.push_back(tp.coordinates(tgt.normal_form(img), base));
      }
      const Coeff det = determinant(mat, base);
      cmp.bijective = base.is_unit(det);
      if (!cmp.bijective) cmp.note = "determinant " + base.coeff_to_string(det) + " is not a unit";
    } else {
      if (base.has_laurent()) throw AlgebraError("torsion pieces over a Laurent base are not supported");
      // surjectivity: images plus target relations must span everything
      std::vector<Polynomial> imgs = detail::piece_images(map, sp.monomials, w);
      IntMatrix stacked(0, tp.monomials.size());
      for (const auto& img : imgs) {
        std::vector<mpz_class> row(tp.monomials.size());
        for (std::size_t j = 0; j < tp.monomials.size(); ++j) {
          Coeff c = img.coefficient(tp.monomials[j]);
          row[j] = c.scalar().get_num() * mpz_class(1);
          if (c.scalar().get_den() != 1) throw AlgebraError("non-integral image in torsion comparison");
        }
        stacked.append_row(row);
      }
      for (const auto& r : tp.relations) {
        std::vector<mpz_class> row(r.size());
        for (std::size_t j = 0; j < r.size(); ++j) row[j] = r[j].scalar().get_num();
        stacked.append_row(row);
      }
      if (base.scalar_kind() == ScalarKind::IntegersModuloN)
        for (std::size_t j = 0; j < tp.monomials.size(); ++j) {
          std::vector<mpz_class> row(tp.monomials.size());
          row[j] = base.modulus();
          stacked.append_row(row);
        }
      CokernelInvariants coker = graded_rank_snf(stacked);
      const bool surjective = coker.free_rank == 0 && coker.torsion.empty();
      cmp.bijective = surjective;
      cmp.note = surjective ? "surjective with equal invariants" : "not surjective";
    }
    if (!cmp.bijective && report.isomorphism) {
      report.isomorphism = false;
      report.first_failure = w;
    }
    report.weights.push_back(std::move(cmp));
  }
  return report;
}

}  // namespace oriented
