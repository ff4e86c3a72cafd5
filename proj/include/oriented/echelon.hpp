#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "oriented/integer_matrix.hpp"
#include "oriented/scalar.hpp"

namespace oriented {

/// Incremental row echelon basis of a submodule of R^cols, R one of Z, Z/n, Q.
/// Over Z/n the lattice implicitly contains n*e_c for every column, which
/// turns the quotient by it into the Z/n-module we want.
class Echelon {
 public:
  enum class Mode { Integer, Modular, Rational };
  using Row = std::vector<mpq_class>;

  Echelon(std::size_t cols, const BaseRing& base) : cols_(cols), pivots_(cols) {
    switch (base.scalar_kind()) {
      case ScalarKind::Integers: mode_ = Mode::Integer; break;
      case ScalarKind::Rationals: mode_ = Mode::Rational; break;
      case ScalarKind::IntegersModuloN:
        mode_ = Mode::Modular;
        modulus_ = base.modulus();
        for (std::size_t c = 0; c < cols_; ++c) {
          Row r(cols_);
          r[c] = mpq_class(modulus_);
          pivots_[c] = std::move(r);
        }
        break;
    }
  }

  std::size_t cols() const { return cols_; }
  Mode mode() const { return mode_; }

  void insert(Row v) {
    if (mode_ == Mode::Modular) reduce_entries(v);
    for (std::size_t c = 0; c < cols_; ++c) {
      if (v[c] == 0) continue;
      if (!pivots_[c]) {
        normalize(v, c);
        pivots_[c] = std::move(v);
        return;
      }
      Row& p = *pivots_[c];
      if (mode_ == Mode::Rational) {
        axpy(v, -(v[c] / p[c]), p);
        continue;
      }
      const mpz_class a = p[c].get_num();
      const mpz_class b = v[c].get_num();
      if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
        axpy(v, mpq_class(-(b / a)), p);
      } else {
        // replace the pivot row by the gcd combination; keep the remainder row
        mpz_class g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        Row combined(cols_);
        Row rest(cols_);
        const mpz_class pa = a / g;
        const mpz_class pb = b / g;
        for (std::size_t j = c; j < cols_; ++j) {
          combined[j] = mpq_class(s) * p[j] + mpq_class(t) * v[j];
          rest[j] = mpq_class(pa) * v[j] - mpq_class(pb) * p[j];
        }
        normalize(combined, c);
        p = std::move(combined);
        v = std::move(rest);
      }
      if (mode_ == Mode::Modular) reduce_entries(v);
    }
  }

  /// Canonical representative of v modulo the span.
  void reduce(Row& v) const {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (v[c] == 0 || !pivots_[c]) continue;
      const Row& p = *pivots_[c];
      if (mode_ == Mode::Rational) {
        axpy(v, -(v[c] / p[c]), p);
      } else {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v[c].get_num_mpz_t(), p[c].get_num_mpz_t());
        axpy(v, mpq_class(-q), p);
      }
    }
    if (mode_ == Mode::Modular) reduce_entries(v);
  }

  bool contains(Row v) const {
    reduce(v);
    for (const auto& x : v)
      if (x != 0) return false;
    return true;
  }

  bool has_pivot(std::size_t c) const { return pivots_[c].has_value(); }
  const std::optional<Row>& pivot_row(std::size_t c) const { return pivots_[c]; }

  /// Pivot rows as an integer matrix (rational rows are cleared of denominators).
  IntMatrix rows() const {
    IntMatrix m(0, cols_);
    for (const auto& p : pivots_) {
      if (!p) continue;
      mpz_class l = 1;
      for (const auto& x : *p) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
      std::vector<mpz_class> r(cols_);
      for (std::size_t j = 0; j < cols_; ++j) r[j] = mpq_class((*p)[j] * l).get_num();
      m.append_row(r);
    }
    return m;
  }

 private:
  static void axpy(Row& v, const mpq_class& k, const Row& p) {
    if (k == 0) return;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (p[j] != 0) v[j] += k * p[j];
  }
  void normalize(Row& v, std::size_t c) const {
    if (mode_ == Mode::Rational) {
      const mpq_class lead = v[c];
      for (auto& x : v) x /= lead;
      return;
    }
    if (v[c] < 0)
      for (auto& x : v) x = -x;
    if (mode_ == Mode::Modular) {
      // scale by a unit mod n so the pivot becomes gcd(pivot, n)
      mpz_class g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v[c].get_num_mpz_t(), modulus_.get_mpz_t());
      mpz_class unit = s;
      // s may share factors with n; shift by multiples of n/g until it is a unit
      const mpz_class step = modulus_ / g;
      mpz_class h;
      for (;;) {
        mpz_gcd(h.get_mpz_t(), unit.get_mpz_t(), modulus_.get_mpz_t());
        if (h == 1) break;
        unit += step;
      }
      for (auto& x : v) x *= mpq_class(unit);
      reduce_entries(v);
    }
  }
  void reduce_entries(Row& v) const {
    for (auto& x : v) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), x.get_num_mpz_t(), modulus_.get_mpz_t());
      x = r;
    }
  }

  std::size_t cols_;
  Mode mode_ = Mode::Integer;
  mpz_class modulus_;
  std::vector<std::optional<Row>> pivots_;
};

}  // namespace oriented
