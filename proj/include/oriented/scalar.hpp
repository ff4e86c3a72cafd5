#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oriented/errors.hpp"

namespace oriented {

/// Coefficient of a polynomial term: a Laurent polynomial in the base ring's
/// adjoined symbol with rational values. Scalar rings only use exponent 0.
/// Terms are kept sorted by exponent with no zero values.
class Coeff {
 public:
  using Term = std::pair<int, mpq_class>;

  Coeff() = default;
  Coeff(long value) { push(0, mpq_class(value)); }  // NOLINT: implicit on purpose
  explicit Coeff(const mpq_class& value) { push(0, value); }
  explicit Coeff(const mpz_class& value) { push(0, mpq_class(value)); }

  static Coeff monomial(int exponent, const mpq_class& value) {
    Coeff c;
    c.push(exponent, value);
    return c;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_scalar() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0); }
  bool is_one() const { return is_scalar() && !is_zero() && terms_[0].second == 1; }
  const std::vector<Term>& terms() const { return terms_; }

  mpq_class at(int exponent) const {
    for (const auto& [e, v] : terms_)
      if (e == exponent) return v;
    return 0;
  }
  mpq_class scalar() const { return at(0); }

  Coeff shifted(int k) const {
    Coeff c = *this;
    for (auto& t : c.terms_) t.first += k;
    return c;
  }

  Coeff operator-() const {
    Coeff c = *this;
    for (auto& t : c.terms_) t.second = -t.second;
    return c;
  }

  Coeff& operator+=(const Coeff& o) {
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
      if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        out.push_back(*a++);
      } else if (a == terms_.end() || b->first < a->first) {
        out.push_back(*b++);
      } else {
        mpq_class v = a->second + b->second;
        if (v != 0) out.emplace_back(a->first, v);
        ++a;
        ++b;
      }
    }
    terms_ = std::move(out);
    return *this;
  }
  Coeff& operator-=(const Coeff& o) { return *this += -o; }

  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(const Coeff& a, const Coeff& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.terms_.size() == 1 && b.terms_.size() == 1)
      return monomial(a.terms_[0].first + b.terms_[0].first, a.terms_[0].second * b.terms_[0].second);
    Coeff r;
    for (const auto& [ea, va] : a.terms_)
      for (const auto& [eb, vb] : b.terms_) r += monomial(ea + eb, va * vb);
    return r;
  }
  Coeff& operator*=(const Coeff& o) { return *this = *this * o; }

  friend bool operator==(const Coeff& a, const Coeff& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].first != b.terms_[i].first || a.terms_[i].second != b.terms_[i].second) return false;
    return true;
  }
  friend bool operator!=(const Coeff& a, const Coeff& b) { return !(a == b); }

  int min_exponent() const { return terms_.empty() ? 0 : terms_.front().first; }
  int max_exponent() const { return terms_.empty() ? 0 : terms_.back().first; }

  /// Applies f to every value and drops the ones that become zero.
  template <class F>
  Coeff map_values(F&& f) const {
    Coeff c;
    for (const auto& [e, v] : terms_) c.push(e, f(v));
    return c;
  }

 private:
  void push(int e, const mpq_class& v) {
    if (v == 0) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                               [](const Term& t, int x) { return t.first < x; });
    if (it != terms_.end() && it->first == e) {
      it->second += v;
      if (it->second == 0) terms_.erase(it);
    } else {
      terms_.insert(it, Term{e, v});
    }
  }

  std::vector<Term> terms_;
};

/// Exact division of Laurent polynomials over Q; nullopt when b does not divide a.
inline std::optional<Coeff> exact_divide(const Coeff& a, const Coeff& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return Coeff{};
  // shift both to ordinary polynomials and run long division from the top
  const int sa = a.min_exponent();
  const int sb = b.min_exponent();
  std::vector<mpq_class> num(static_cast<std::size_t>(a.max_exponent() - sa + 1));
  std::vector<mpq_class> den(static_cast<std::size_t>(b.max_exponent() - sb + 1));
  for (const auto& [e, v] : a.terms()) num[static_cast<std::size_t>(e - sa)] = v;
  for (const auto& [e, v] : b.terms()) den[static_cast<std::size_t>(e - sb)] = v;
  if (num.size() < den.size()) return std::nullopt;
  std::vector<mpq_class> quo(num.size() - den.size() + 1);
  for (std::size_t i = quo.size(); i-- > 0;) {
    mpq_class q = num[i + den.size() - 1] / den.back();
    quo[i] = q;
    if (q != 0)
      for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= q * den[j];
  }
  for (const auto& v : num)
    if (v != 0) return std::nullopt;
  Coeff out;
  for (std::size_t i = 0; i < quo.size(); ++i)
    if (quo[i] != 0) out += Coeff::monomial(static_cast<int>(i) + sa - sb, quo[i]);
  return out;
}

enum class ScalarKind { Integers, IntegersModuloN, Rationals };

/// Coefficient ring of a presentation: Z, Z/n, Q, optionally with one
/// adjoined invertible symbol (Z[beta, beta^-1] and friends).
class BaseRing {
 public:
  static BaseRing integers() { return BaseRing(ScalarKind::Integers, 0); }
  static BaseRing rationals() { return BaseRing(ScalarKind::Rationals, 0); }
  static BaseRing integers_mod(const mpz_class& n) {
    if (n < 2) throw InputError("IntegersModuloN requires n >= 2");
    return BaseRing(ScalarKind::IntegersModuloN, n);
  }
  static BaseRing laurent(const BaseRing& base, std::string symbol, int weight) {
    if (base.has_laurent()) throw InputError("only a single Laurent generator may be adjoined");
    if (symbol.empty()) throw InputError("Laurent symbol must be named");
    BaseRing r = base;
    r.symbol_ = std::move(symbol);
    r.symbol_weight_ = weight;
    return r;
  }

  ScalarKind scalar_kind() const { return kind_; }
  const mpz_class& modulus() const { return modulus_; }
  bool has_laurent() const { return symbol_.has_value(); }
  const std::string& symbol() const {
    static const std::string empty;
    return symbol_ ? *symbol_ : empty;
  }
  int symbol_weight() const { return symbol_weight_; }
  BaseRing scalar_ring() const { return BaseRing(kind_, modulus_); }

  bool modulus_is_prime() const {
    return kind_ == ScalarKind::IntegersModuloN && mpz_probab_prime_p(modulus_.get_mpz_t(), 30) > 0;
  }
  bool scalar_is_field() const { return kind_ == ScalarKind::Rationals || modulus_is_prime(); }

  mpq_class canonical_scalar(const mpq_class& v) const {
    switch (kind_) {
      case ScalarKind::Rationals:
        return v;
      case ScalarKind::Integers:
        if (v.get_den() != 1) throw InputError("non-integral coefficient " + v.get_str() + " over the integers");
        return v;
      case ScalarKind::IntegersModuloN: {
        mpz_class num = v.get_num();
        mpz_class den = v.get_den();
        if (den != 1) {
          mpz_class inv;
          if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus_.get_mpz_t()) == 0)
            throw InputError("denominator " + den.get_str() + " is not invertible modulo " + modulus_.get_str());
          num *= inv;
        }
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), modulus_.get_mpz_t());
        return mpq_class(r);
      }
    }
    return v;
  }

  Coeff canonical(const Coeff& c) const {
    if (!has_laurent() && !c.is_scalar())
      throw InputError("Laurent coefficient over a base without an adjoined symbol");
    return c.map_values([this](const mpq_class& v) { return canonical_scalar(v); });
  }

  bool scalar_is_unit(const mpq_class& v) const {
    switch (kind_) {
      case ScalarKind::Rationals:
        return v != 0;
      case ScalarKind::Integers:
        return v == 1 || v == -1;
      case ScalarKind::IntegersModuloN: {
        mpz_class g;
        mpz_class num = canonical_scalar(v).get_num();
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), modulus_.get_mpz_t());
        return g == 1;
      }
    }
    return false;
  }

  /// Units of a Laurent ring over a domain are the monomials u*beta^k.
  bool is_unit(const Coeff& c) const {
    if (c.terms().size() != 1) return false;
    if (!has_laurent() && c.terms()[0].first != 0) return false;
    return scalar_is_unit(c.terms()[0].second);
  }

  Coeff inverse(const Coeff& c) const {
    if (!is_unit(c)) throw InputError("element is not a unit of the base ring");
    const auto& [e, v] = c.terms()[0];
    mpq_class inv;
    if (kind_ == ScalarKind::IntegersModuloN) {
      mpz_class num = canonical_scalar(v).get_num();
      mpz_class r;
      mpz_invert(r.get_mpz_t(), num.get_mpz_t(), modulus_.get_mpz_t());
      inv = r;
    } else {
      inv = 1 / v;
    }
    return Coeff::monomial(-e, inv);
  }

  /// c / k inside the base ring, nullopt when the quotient does not exist.
  std::optional<Coeff> divide(const Coeff& c, const mpz_class& k) const {
    if (k == 0) return std::nullopt;
    Coeff out;
    for (const auto& [e, v] : c.terms()) {
      mpq_class q;
      if (kind_ == ScalarKind::Rationals) {
        q = v / k;
      } else if (kind_ == ScalarKind::Integers) {
        if (!mpz_divisible_p(v.get_num_mpz_t(), k.get_mpz_t())) return std::nullopt;
        q = mpq_class(mpz_class(v.get_num() / k));
      } else {
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), k.get_mpz_t(), modulus_.get_mpz_t()) == 0) {
          // k not invertible: accept only if an exact integer quotient exists
          if (!mpz_divisible_p(v.get_num_mpz_t(), k.get_mpz_t())) return std::nullopt;
          q = canonical_scalar(mpq_class(mpz_class(v.get_num() / k)));
        } else {
          q = canonical_scalar(mpq_class(v.get_num() * inv));
        }
      }
      out += Coeff::monomial(e, q);
    }
    return out;
  }

  std::string coeff_to_string(const Coeff& c) const {
    if (c.is_zero()) return "0";
    std::string out;
    for (const auto& [e, v] : c.terms()) {
      if (!out.empty()) out += " + ";
      out += v.get_str();
      if (e != 0) out += "*" + symbol() + "^" + std::to_string(e);
    }
    return out;
  }

  Coeff parse_coeff(const std::string& text) const {
    Coeff c;
    std::size_t pos = 0;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(' ');
      const auto e = s.find_last_not_of(' ');
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (pos <= text.size()) {
      std::size_t next = text.find(" + ", pos);
      std::string piece = trim(text.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
      if (piece.empty()) throw InputError("empty coefficient term in '" + text + "'");
      int exponent = 0;
      std::string value = piece;
      const auto star = piece.find('*');
      if (star != std::string::npos) {
        value = piece.substr(0, star);
        std::string power = piece.substr(star + 1);
        const auto caret = power.find('^');
        std::string sym = power.substr(0, caret);
        if (!has_laurent() || sym != symbol()) throw InputError("unknown symbol '" + sym + "' in coefficient");
        exponent = caret == std::string::npos ? 1 : std::stoi(power.substr(caret + 1));
      } else if (has_laurent() && piece.rfind(symbol(), 0) == 0) {
        value = "1";
        const auto caret = piece.find('^');
        exponent = caret == std::string::npos ? 1 : std::stoi(piece.substr(caret + 1));
      }
      mpq_class v;
      if (v.set_str(value, 10) != 0) throw InputError("bad coefficient '" + value + "'");
      v.canonicalize();
      c += Coeff::monomial(exponent, v);
      if (next == std::string::npos) break;
      pos = next + 3;
    }
    return canonical(c);
  }

  friend bool operator==(const BaseRing& a, const BaseRing& b) {
    return a.kind_ == b.kind_ && a.modulus_ == b.modulus_ && a.symbol_ == b.symbol_ &&
           a.symbol_weight_ == b.symbol_weight_;
  }
  friend bool operator!=(const BaseRing& a, const BaseRing& b) { return !(a == b); }

  std::string describe() const {
    std::string s;
    switch (kind_) {
      case ScalarKind::Integers: s = "Z"; break;
      case ScalarKind::Rationals: s = "Q"; break;
      case ScalarKind::IntegersModuloN: s = "Z/" + modulus_.get_str(); break;
    }
    if (has_laurent()) s += "[" + symbol() + "," + symbol() + "^-1]";
    return s;
  }

 private:
  BaseRing(ScalarKind k, mpz_class n) : kind_(k), modulus_(std::move(n)) {}

  ScalarKind kind_;
  mpz_class modulus_;
  std::optional<std::string> symbol_;
  int symbol_weight_ = 0;
};

}  // namespace oriented
