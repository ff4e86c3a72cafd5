#pragma once

#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oriented/errors.hpp"
#include "oriented/presented_ring.hpp"
#include "oriented/ring_map.hpp"

namespace oriented {

/// Truncated formal group law F(x, y). Coefficients live in the base ring,
/// optionally extended by parameter variables subject to parameter relations
/// (the generic law over the Lazard ring is the main example).
class FormalGroupLaw {
 public:
  FormalGroupLaw(BaseRing base, std::string series, int truncation, std::optional<std::string> beta_symbol = {},
                 std::vector<Variable> parameters = {}, std::vector<std::string> parameter_relations = {},
                 int parameter_truncation = 0)
      : base_(std::move(base)),
        truncation_(truncation),
        beta_(std::move(beta_symbol)),
        params_(std::move(parameters)),
        param_truncation_(parameter_truncation) {
    if (truncation_ < 1) throw InputError("formal group law needs truncation at least 1");
    if (beta_ && (!base_.has_laurent() || base_.symbol() != *beta_))
      throw InputError("designated beta must be the adjoined Laurent symbol of the base");
    for (auto& p : params_) p.parameter = true;
    auto pr = PolyRing::make(base_, params_, 0, param_truncation_);
    for (const auto& r : parameter_relations) param_relations_.push_back(parse_polynomial(pr, r));
    ring_ = std::make_shared<PresentedRing>(make_ring({"x", "y"}));
    series_ = std::make_shared<Polynomial>(parse_polynomial(ring_->ring(), series));
  }

  const BaseRing& base() const { return base_; }
  int truncation() const { return truncation_; }
  const std::optional<std::string>& beta_symbol() const { return beta_; }
  const std::vector<Variable>& parameters() const { return params_; }
  int parameter_truncation() const { return param_truncation_; }
  const std::vector<Polynomial>& parameter_relations() const { return param_relations_; }
  const PresentedRing& ring() const { return *ring_; }
  const Polynomial& series() const { return *series_; }

  /// Ring on the given weight-1 variables plus this law's parameters.
  PresentedRing make_ring(const std::vector<std::string>& names, int truncation = -1) const {
    std::vector<Variable> vars;
    for (const auto& n : names) vars.push_back({n, 1, false});
    return space_ring(std::move(vars), truncation);
  }

  /// Ring on arbitrary space variables plus this law's parameters, subject
  /// to the parameter relations.
  PresentedRing space_ring(std::vector<Variable> vars, int truncation = -1,
                          const std::vector<Polynomial>& extra_relations = {}) const {
    vars.insert(vars.end(), params_.begin(), params_.end());
    auto r = PolyRing::make(base_, vars, truncation < 0 ? truncation_ : truncation, param_truncation_);
    std::vector<Polynomial> rel;
    for (const auto& p : param_relations_) rel.push_back(rebase(p, r));
    for (const auto& p : extra_relations) rel.push_back(rebase(p, r));
    return PresentedRing(r, rel);
  }

  /// Ring holding the coefficients of the law: parameters only.
  PresentedRing coefficient_ring() const { return make_ring({}, truncation_); }

  /// F(a, b) evaluated inside `target`, which must contain the parameters.
  Polynomial apply(const Polynomial& a, const Polynomial& b, const PresentedRing& target) const {
    std::vector<Polynomial> images{a, b};
    for (const auto& p : params_) images.push_back(target.variable(p.name));
    return target.normal_form(evaluate(*series_, images, target.ring()));
  }

  /// Univariate series g(x) composed: g(h) inside `target`.
  Polynomial compose(const Polynomial& g, const Polynomial& h, const PresentedRing& target) const {
    std::vector<Polynomial> images{h};
    for (const auto& p : params_) images.push_back(target.variable(p.name));
    return target.normal_form(evaluate(g, images, target.ring()));
  }

  PresentedRing univariate_ring() const { return make_ring({"x"}); }

 private:
  BaseRing base_;
  int truncation_;
  std::optional<std::string> beta_;
  std::vector<Variable> params_;
  int param_truncation_;
  std::vector<Polynomial> param_relations_;
  std::shared_ptr<PresentedRing> ring_;
  std::shared_ptr<Polynomial> series_;
};

inline FormalGroupLaw make_additive(const BaseRing& base, int truncation) {
  return FormalGroupLaw(base, "x + y", truncation);
}

/// x + y - beta*x*y. beta = 0 degenerates to the additive law; otherwise
/// beta must be a unit, and it is designated when it is the Laurent symbol.
inline FormalGroupLaw make_multiplicative(const BaseRing& base, const Coeff& beta, int truncation) {
  if (beta.is_zero()) return make_additive(base, truncation);
  if (!base.is_unit(beta)) throw InputError("multiplicative law needs an invertible beta, got " + base.coeff_to_string(beta));
  std::optional<std::string> designated;
  if (base.has_laurent() && beta == Coeff::monomial(1, 1)) designated = base.symbol();
  const std::string b = "(" + base.coeff_to_string(beta) + ")";
  return FormalGroupLaw(base, "x + y - " + b + "*x*y", truncation, designated);
}

/// Multiplicative law over Z[beta, beta^-1] with beta designated.
inline FormalGroupLaw make_multiplicative(int truncation, const std::string& symbol = "beta") {
  return make_multiplicative(BaseRing::laurent(BaseRing::integers(), symbol, -1), Coeff::monomial(1, 1), truncation);
}

struct AxiomCheck {
  bool pass = true;
  std::string monomial;   // first offending monomial, lowest weight first
  std::string left;       // its coefficient on each side
  std::string right;
};

struct AxiomReport {
  AxiomCheck unit;
  AxiomCheck commutativity;
  AxiomCheck associativity;
  bool all_pass() const { return unit.pass && commutativity.pass && associativity.pass; }
};

namespace detail {

inline std::string monomial_string(const PolyRing& ring, const Monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!m[i]) continue;
    if (!s.empty()) s += "*";
    s += ring.variables()[i].name;
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

/// Compares two normal forms; reports the lowest-weight space monomial where
/// their coefficients (as parameter polynomials) differ.
inline AxiomCheck compare_sides(const Polynomial& lhs, const Polynomial& rhs) {
  AxiomCheck out;
  Polynomial diff = lhs - rhs;
  if (diff.is_zero()) return out;
  const PolyRing& ring = *lhs.ring();
  auto space_part = [&](const Monomial& m) {
    Monomial s = m;
    for (auto i : ring.parameter_indices()) s[i] = 0;
    return s;
  };
  std::optional<Monomial> worst;
  for (const auto& [m, c] : diff.terms()) {
    Monomial s = space_part(m);
    if (!worst || ring.space_weight(s) < ring.space_weight(*worst) ||
        (ring.space_weight(s) == ring.space_weight(*worst) && ring.compare(s, *worst) > 0))
      worst = s;
  }
  auto coefficient_of = [&](const Polynomial& p) {
    Polynomial c(p.ring());
    for (const auto& [m, v] : p.terms())
      if (space_part(m) == *worst) c.add_term(m / *worst, v);
    return c.to_string();
  };
  out.pass = false;
  out.monomial = monomial_string(ring, *worst);
  out.left = coefficient_of(lhs);
  out.right = coefficient_of(rhs);
  return out;
}

}  // namespace detail

inline AxiomReport check_axioms(const FormalGroupLaw& f) {
  AxiomReport report;
  const PresentedRing& xy = f.ring();
  const Polynomial x = xy.variable("x");
  const Polynomial y = xy.variable("y");
  // unit: F(x, 0) = x and F(0, y) = y
  report.unit = detail::compare_sides(f.apply(x, xy.zero(), xy), x);
  if (report.unit.pass) report.unit = detail::compare_sides(f.apply(xy.zero(), y, xy), y);
  report.commutativity = detail::compare_sides(f.apply(x, y, xy), f.apply(y, x, xy));
  PresentedRing xyz = f.make_ring({"x", "y", "z"});
  const Polynomial X = xyz.variable("x"), Y = xyz.variable("y"), Z = xyz.variable("z");
  const Polynomial left = f.apply(f.apply(X, Y, xyz), Z, xyz);
  const Polynomial right = f.apply(X, f.apply(Y, Z, xyz), xyz);
  report.associativity = detail::compare_sides(left, right);
  return report;
}

/// i(x) with F(x, i(x)) = 0, solved one weight at a time.
inline Polynomial formal_inverse(const FormalGroupLaw& f) {
  PresentedRing ux = f.univariate_ring();
  const Polynomial x = ux.variable("x");
  Polynomial inv = -x;
  for (int k = 2; k <= f.truncation(); ++k) {
    Polynomial err = f.apply(x, inv, ux).weight_part(k);
    inv -= err;
  }
  return ux.normal_form(inv);
}

/// [n](x); negative n applies the formal inverse.
inline Polynomial n_series(const FormalGroupLaw& f, long n) {
  PresentedRing ux = f.univariate_ring();
  const Polynomial x = ux.variable("x");
  Polynomial acc = ux.zero();
  for (long k = 0; k < std::labs(n); ++k) acc = f.apply(x, acc, ux);
  if (n < 0) acc = f.compose(formal_inverse(f), acc, ux);
  return acc;
}

/// l(x) = integral of dx / F_y(x, 0); divides coefficient k by k.
inline Polynomial logarithm(const FormalGroupLaw& f) {
  PresentedRing ux = f.univariate_ring();
  const RingPtr& r = ux.ring();
  const std::size_t xi = *r->index_of("x");
  // g(x) = dF/dy at y = 0
  const Polynomial& s = f.series();
  const std::size_t sx = *s.ring()->index_of("x"), sy = *s.ring()->index_of("y");
  Polynomial g(r);
  for (const auto& [m, c] : s.terms()) {
    if (m[sy] != 1) continue;
    Monomial t(r->size());
    t[xi] = m[sx];
    // parameters follow x (and y) in both rings
    for (std::size_t i = 0; i < f.parameters().size(); ++i) t[xi + 1 + i] = m[2 + i];
    g.add_term(t, c);
  }
  // 1/g by fixed-point iteration h = 1 - (g - 1) h, one weight per step
  const Polynomial one = ux.one();
  Polynomial h = one;
  for (int k = 1; k <= f.truncation(); ++k) h = ux.normal_form(one - (g - one) * h);
  Polynomial out(r);
  const BaseRing& base = f.base();
  // ascending, so a failure names the lowest weight
  for (auto it = h.terms().rbegin(); it != h.terms().rend(); ++it) {
    const auto& [m, c] = *it;
    const int k = static_cast<int>(m[xi]) + 1;
    if (k > f.truncation()) continue;
    auto q = base.divide(c, mpz_class(k));
    if (!q) throw NonDivisibleBase(k, "coefficient " + base.coeff_to_string(c) + " of the logarithm is not divisible by " + std::to_string(k));
    Monomial t = m;
    t[xi] += 1;
    out.add_term(t, *q);
  }
  return ux.normal_form(out);
}

}  // namespace oriented
