#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "oriented/errors.hpp"
#include "oriented/scalar.hpp"

namespace oriented {

/// A polynomial generator. Parameter variables generate the coefficient
/// subring (e.g. Lazard generators) and are graded separately from the
/// space variables that carry the cohomological weight.
struct Variable {
  std::string name;
  int weight = 1;
  bool parameter = false;

  friend bool operator==(const Variable&, const Variable&) = default;
};

/// Dense exponent vector, one slot per ring variable.
struct Monomial {
  std::vector<std::uint32_t> exponents;

  Monomial() = default;
  explicit Monomial(std::size_t n) : exponents(n, 0) {}
  explicit Monomial(std::vector<std::uint32_t> e) : exponents(std::move(e)) {}

  std::size_t size() const { return exponents.size(); }
  std::uint32_t operator[](std::size_t i) const { return exponents[i]; }
  std::uint32_t& operator[](std::size_t i) { return exponents[i]; }
  bool is_one() const {
    for (auto e : exponents)
      if (e) return false;
    return true;
  }
  bool divides(const Monomial& o) const {
    for (std::size_t i = 0; i < exponents.size(); ++i)
      if (exponents[i] > o.exponents[i]) return false;
    return true;
  }
  friend Monomial operator*(Monomial a, const Monomial& b) {
    for (std::size_t i = 0; i < a.exponents.size(); ++i) a.exponents[i] += b.exponents[i];
    return a;
  }
  /// a / b, assuming b divides a.
  friend Monomial operator/(Monomial a, const Monomial& b) {
    for (std::size_t i = 0; i < a.exponents.size(); ++i) a.exponents[i] -= b.exponents[i];
    return a;
  }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto e : m.exponents) h = (h ^ e) * 1099511628211ull;
    return h;
  }
};

/// Ambient truncated polynomial algebra: base ring, ordered variables, and
/// the weight bounds beyond which terms vanish.
class PolyRing {
 public:
  PolyRing(BaseRing base, std::vector<Variable> vars, int truncation, int parameter_truncation)
      : base_(std::move(base)),
        vars_(std::move(vars)),
        truncation_(truncation),
        parameter_truncation_(parameter_truncation) {
    if (truncation_ < 0) throw InputError("truncation must be non-negative");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].weight <= 0) throw InputError("variable '" + vars_[i].name + "' needs a positive weight");
      for (std::size_t j = 0; j < i; ++j)
        if (vars_[j].name == vars_[i].name) throw InputError("duplicate variable name '" + vars_[i].name + "'");
      if (base_.has_laurent() && vars_[i].name == base_.symbol())
        throw InputError("variable name clashes with the Laurent symbol");
      (vars_[i].parameter ? param_ : space_).push_back(i);
    }
  }

  static std::shared_ptr<const PolyRing> make(BaseRing base, std::vector<Variable> vars, int truncation,
                                              int parameter_truncation = 0) {
    return std::make_shared<const PolyRing>(std::move(base), std::move(vars), truncation, parameter_truncation);
  }

  const BaseRing& base() const { return base_; }
  const std::vector<Variable>& variables() const { return vars_; }
  std::size_t size() const { return vars_.size(); }
  int truncation() const { return truncation_; }
  int parameter_truncation() const { return parameter_truncation_; }
  const std::vector<std::size_t>& space_indices() const { return space_; }
  const std::vector<std::size_t>& parameter_indices() const { return param_; }
  bool has_parameters() const { return !param_.empty(); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) return i;
    return std::nullopt;
  }

  int space_weight(const Monomial& m) const { return weight_over(m, space_); }
  int parameter_weight(const Monomial& m) const { return weight_over(m, param_); }
  int total_weight(const Monomial& m) const {
    int w = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) w += static_cast<int>(m[i]) * vars_[i].weight;
    return w;
  }
  bool within_truncation(const Monomial& m) const {
    return space_weight(m) <= truncation_ && (param_.empty() || parameter_weight(m) <= parameter_truncation_);
  }

  /// Block order: graded-lex on the space variables first (higher weight,
  /// then larger exponent at the smaller index), then graded-lex on the
  /// parameters. Without parameters this is plain graded-lex.
  int compare(const Monomial& a, const Monomial& b) const {
    if (int c = compare_block(a, b, space_)) return c;
    return compare_block(a, b, param_);
  }
  int compare_block(const Monomial& a, const Monomial& b, const std::vector<std::size_t>& block) const {
    const int wa = weight_over(a, block);
    const int wb = weight_over(b, block);
    if (wa != wb) return wa < wb ? -1 : 1;
    for (auto i : block)
      if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
  }

  int weight_over(const Monomial& m, const std::vector<std::size_t>& block) const {
    int w = 0;
    for (auto i : block) w += static_cast<int>(m[i]) * vars_[i].weight;
    return w;
  }

  friend bool operator==(const PolyRing& a, const PolyRing& b) {
    return a.base_ == b.base_ && a.vars_ == b.vars_ && a.truncation_ == b.truncation_ &&
           a.parameter_truncation_ == b.parameter_truncation_;
  }

 private:
  BaseRing base_;
  std::vector<Variable> vars_;
  int truncation_;
  int parameter_truncation_;
  std::vector<std::size_t> space_;
  std::vector<std::size_t> param_;
};

using RingPtr = std::shared_ptr<const PolyRing>;

/// Enumerates the monomials of exact weight w in the given block of
/// variables (other slots zero), in descending ring order.
inline std::vector<Monomial> monomials_of_weight(const PolyRing& ring, const std::vector<std::size_t>& block, int w) {
  std::vector<Monomial> out;
  if (w < 0) return out;
  Monomial cur(ring.size());
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos == block.size()) {
      if (left == 0) out.push_back(cur);
      return;
    }
    const std::size_t v = block[pos];
    const int wt = ring.variables()[v].weight;
    for (int e = left / wt; e >= 0; --e) {
      cur[v] = static_cast<std::uint32_t>(e);
      rec(pos + 1, left - e * wt);
    }
    cur[v] = 0;
  };
  rec(0, w);
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) { return ring.compare(a, b) > 0; });
  return out;
}

class Polynomial {
 public:
  struct Order {
    const PolyRing* ring;
    bool operator()(const Monomial& a, const Monomial& b) const { return ring->compare(a, b) > 0; }
  };
  using TermMap = std::map<Monomial, Coeff, Order>;

  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)), terms_(Order{ring_.get()}) {}

  static Polynomial constant(const RingPtr& ring, const Coeff& c) {
    Polynomial p(ring);
    p.add_term(Monomial(ring->size()), c);
    return p;
  }
  static Polynomial variable(const RingPtr& ring, std::size_t i) {
    Polynomial p(ring);
    Monomial m(ring->size());
    m[i] = 1;
    p.add_term(m, Coeff(1));
    return p;
  }
  static Polynomial variable(const RingPtr& ring, const std::string& name) {
    auto i = ring->index_of(name);
    if (!i) throw InputError("unknown variable '" + name + "'");
    return variable(ring, *i);
  }

  Polynomial(const Polynomial& o) : ring_(o.ring_), terms_(o.terms_) {}
  Polynomial(Polynomial&& o) noexcept : ring_(std::move(o.ring_)), terms_(std::move(o.terms_)) {}
  Polynomial& operator=(const Polynomial& o) {
    if (this != &o) {
      ring_ = o.ring_;
      terms_ = TermMap(o.terms_.begin(), o.terms_.end(), Order{ring_.get()});
    }
    return *this;
  }
  Polynomial& operator=(Polynomial&& o) noexcept {
    ring_ = std::move(o.ring_);
    terms_ = std::move(o.terms_);
    return *this;
  }

  const RingPtr& ring() const { return ring_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c*m, canonicalizing the coefficient and dropping truncated terms.
  void add_term(const Monomial& m, const Coeff& c) {
    if (c.is_zero() || !ring_->within_truncation(m)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      Coeff v = ring_->base().canonical(c);
      if (!v.is_zero()) terms_.emplace(m, std::move(v));
      return;
    }
    it->second = ring_->base().canonical(it->second + c);
    if (it->second.is_zero()) terms_.erase(it);
  }
  void erase(const Monomial& m) { terms_.erase(m); }

  Coeff coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Coeff{} : it->second;
  }

  const std::pair<const Monomial, Coeff>& leading() const {
    if (terms_.empty()) throw AlgebraError("leading term of zero polynomial");
    return *terms_.begin();
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  Polynomial operator-() const { return scaled(Coeff(-1)); }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    Polynomial r(a.ring_);
    const PolyRing& ring = *a.ring_;
    // bucket the right factor by space weight so truncated pairs are skipped
    std::map<int, std::vector<const std::pair<const Monomial, Coeff>*>> by_weight;
    for (const auto& t : b.terms_) by_weight[ring.space_weight(t.first)].push_back(&t);
    for (const auto& [ma, ca] : a.terms_) {
      const int wa = ring.space_weight(ma);
      for (const auto& [wb, bucket] : by_weight) {
        if (wa + wb > ring.truncation()) break;
        for (const auto* tb : bucket) r.add_term(ma * tb->first, ca * tb->second);
      }
    }
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Coeff& c) const {
    Polynomial r(ring_);
    for (const auto& [m, v] : terms_) r.add_term(m, v * c);
    return r;
  }
  Polynomial times_monomial(const Monomial& m, const Coeff& c) const {
    Polynomial r(ring_);
    for (const auto& [mm, v] : terms_) r.add_term(mm * m, v * c);
    return r;
  }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(ring_, Coeff(1));
    Polynomial base = *this;
    while (k) {
      if (k & 1u) r *= base;
      k >>= 1u;
      if (k) base *= base;
    }
    return r;
  }

  /// Space-weight-w component.
  Polynomial weight_part(int w) const {
    Polynomial r(ring_);
    for (const auto& [m, c] : terms_)
      if (ring_->space_weight(m) == w) r.terms_.emplace(m, c);
    return r;
  }

  std::optional<int> homogeneous_weight() const {
    std::optional<int> w;
    for (const auto& [m, c] : terms_) {
      const int x = ring_->space_weight(m);
      if (w && *w != x) return std::nullopt;
      w = x;
    }
    return w;
  }
  int min_weight() const {
    int w = ring_->truncation() + 1;
    for (const auto& [m, c] : terms_) w = std::min(w, ring_->space_weight(m));
    return w;
  }
  int max_weight() const {
    int w = -1;
    for (const auto& [m, c] : terms_) w = std::max(w, ring_->space_weight(m));
    return w;
  }

  /// True when no term involves a parameter variable or the Laurent symbol.
  bool has_scalar_coefficients() const {
    for (const auto& [m, c] : terms_) {
      if (!c.is_scalar()) return false;
      for (auto i : ring_->parameter_indices())
        if (m[i]) return false;
    }
    return true;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    for (; ia != a.terms_.end(); ++ia, ++ib)
      if (!(ia->first == ib->first) || ia->second != ib->second) return false;
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    const BaseRing& base = ring_->base();
    std::string out;
    for (const auto& [m, c] : terms_) {
      std::string mono;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!mono.empty()) mono += "*";
        mono += ring_->variables()[i].name;
        if (m[i] > 1) mono += "^" + std::to_string(m[i]);
      }
      std::string coeff;
      bool negative = false;
      if (c.is_scalar()) {
        mpq_class v = c.scalar();
        negative = v < 0;
        if (negative) v = -v;
        if (v != 1 || mono.empty()) coeff = v.get_str();
      } else {
        coeff = "(" + base.coeff_to_string(c) + ")";
      }
      std::string term = coeff.empty() ? mono : (mono.empty() ? coeff : coeff + "*" + mono);
      if (out.empty())
        out = (negative ? "-" : "") + term;
      else
        out += (negative ? " - " : " + ") + term;
    }
    return out;
  }

 private:
  void check_same(const Polynomial& o) const {
    if (ring_ != o.ring_ && !(*ring_ == *o.ring_)) throw AlgebraError("polynomials live in different rings");
  }

  RingPtr ring_;
  TermMap terms_;
};

/// Converts a coefficient of one ring into a polynomial of the target ring.
using CoeffImage = std::function<Polynomial(const Coeff&)>;

/// Default coefficient transport: keeps the Laurent symbol when the target
/// has the same one, otherwise requires scalar coefficients.
inline CoeffImage default_coeff_image(const RingPtr& source, const RingPtr& target) {
  const bool keep_symbol = source->base().has_laurent() && target->base().has_laurent() &&
                           source->base().symbol() == target->base().symbol();
  return [target, keep_symbol](const Coeff& c) {
    if (!c.is_scalar() && !keep_symbol)
      throw InputError("cannot transport Laurent coefficient to " + target->base().describe());
    return Polynomial::constant(target, c);
  };
}

/// Substitutes images for the variables of p; coefficients go through
/// coeff_image. All arithmetic happens (and truncates) in the target ring.
inline Polynomial evaluate(const Polynomial& p, const std::vector<Polynomial>& images, const RingPtr& target,
                           const CoeffImage& coeff_image) {
  const std::size_t n = p.ring()->size();
  if (images.size() != n) throw InputError("substitution needs one image per variable");
  std::vector<std::vector<Polynomial>> powers(n);
  auto power = [&](std::size_t v, std::uint32_t e) -> const Polynomial& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, Coeff(1)));
    while (cache.size() <= e) cache.push_back(cache.back() * images[v]);
    return cache[e];
  };
  Polynomial out(target);
  for (const auto& [m, c] : p.terms()) {
    Polynomial term = coeff_image(c);
    for (std::size_t v = 0; v < n && !term.is_zero(); ++v)
      if (m[v]) term *= power(v, m[v]);
    out += term;
  }
  return out;
}

inline Polynomial evaluate(const Polynomial& p, const std::vector<Polynomial>& images, const RingPtr& target) {
  return evaluate(p, images, target, default_coeff_image(p.ring(), target));
}

/// Moves p into a ring that has every variable p uses, matched by name.
inline Polynomial rebase(const Polynomial& p, const RingPtr& target) {
  std::vector<Polynomial> images;
  images.reserve(p.ring()->size());
  for (const auto& v : p.ring()->variables()) {
    auto idx = target->index_of(v.name);
    if (idx)
      images.push_back(Polynomial::variable(target, *idx));
    else
      images.emplace_back(target);  // unused variables may vanish; used ones are checked below
  }
  for (const auto& [m, c] : p.terms())
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] && !target->index_of(p.ring()->variables()[i].name))
        throw InputError("variable '" + p.ring()->variables()[i].name + "' missing from target ring");
  return evaluate(p, images, target);
}

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(const RingPtr& ring, const std::string& text) : ring_(ring), text_(text) {}

  Polynomial parse() {
    Polynomial p = expression();
    skip();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InputError("cannot parse polynomial '" + text_ + "' at position " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Polynomial expression() {
    Polynomial acc(ring_);
    bool negative = eat('-');
    if (!negative) eat('+');
    for (;;) {
      Polynomial t = term();
      acc += negative ? -t : t;
      if (eat('+'))
        negative = false;
      else if (eat('-'))
        negative = true;
      else
        return acc;
    }
  }
  Polynomial term() {
    Polynomial acc = factor();
    while (eat('*')) acc *= factor();
    return acc;
  }
  long integer() {
    skip();
    bool neg = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    long v = std::stol(text_.substr(start, pos_ - start));
    return neg ? -v : v;
  }
  Polynomial factor() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    Polynomial base(ring_);
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      base = expression();
      if (!eat(')')) fail("missing ')'");
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/'))
        ++pos_;
      mpq_class v(text_.substr(start, pos_ - start), 10);
      v.canonicalize();
      base = Polynomial::constant(ring_, Coeff(v));
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                     text_[pos_] == '\''))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (ring_->base().has_laurent() && name == ring_->base().symbol()) {
        long e = eat('^') ? integer() : 1;
        return Polynomial::constant(ring_, Coeff::monomial(static_cast<int>(e), 1));
      }
      auto idx = ring_->index_of(name);
      if (!idx) fail("unknown variable '" + name + "'");
      base = Polynomial::variable(ring_, *idx);
    } else {
      fail("unexpected character");
    }
    if (eat('^')) {
      long e = integer();
      if (e < 0) fail("negative exponent");
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  RingPtr ring_;
  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses expressions such as "2*lambda^2 - beta*x*y + 1/2".
inline Polynomial parse_polynomial(const RingPtr& ring, const std::string& text) {
  return detail::ExpressionParser(ring, text).parse();
}

}  // namespace oriented
