#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oriented/errors.hpp"
#include "oriented/scalar.hpp"

namespace oriented {

/// Dense row-major matrix of arbitrary-precision integers.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<mpz_class> data;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  IntMatrix(std::size_t c, const std::vector<std::vector<mpz_class>>& rs) : rows(rs.size()), cols(c), data() {
    data.reserve(rows * cols);
    for (const auto& r : rs) {
      if (r.size() != cols) throw InputError("ragged integer matrix");
      data.insert(data.end(), r.begin(), r.end());
    }
  }
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rs, std::size_t cols_if_empty = 0) {
    IntMatrix m(rs.size(), rs.empty() ? cols_if_empty : rs[0].size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (rs[i].size() != m.cols) throw InputError("ragged integer matrix");
      for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rs[i][j];
    }
    return m;
  }
  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  mpz_class& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::vector<mpz_class> row(std::size_t i) const {
    return std::vector<mpz_class>(data.begin() + static_cast<long>(i * cols),
                                  data.begin() + static_cast<long>((i + 1) * cols));
  }
  void append_row(const std::vector<mpz_class>& r) {
    if (r.size() != cols) throw InputError("row length mismatch");
    data.insert(data.end(), r.begin(), r.end());
    ++rows;
  }
  void append_rows(const IntMatrix& o) {
    if (o.cols != cols) throw InputError("row length mismatch");
    data.insert(data.end(), o.data.begin(), o.data.end());
    rows += o.rows;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (const auto& v : data)
      if (v != 0) return false;
    return true;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols != b.rows) throw AlgebraError("matrix shape mismatch in product");
    IntMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
      for (std::size_t k = 0; k < a.cols; ++k) {
        const mpz_class& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += x * b(k, j);
      }
    return c;
  }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const mpz_class& k) {
    if (k == 0) return;
    for (std::size_t j = 0; j < cols; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  void add_col(std::size_t dst, std::size_t src, const mpz_class& k) {
    if (k == 0) return;
    for (std::size_t i = 0; i < rows; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols; ++j) (*this)(r, j) = -(*this)(r, j);
  }
  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows; ++i) (*this)(i, c) = -(*this)(i, c);
  }
};

struct SmithForm {
  std::vector<mpz_class> diagonal;  // length min(rows, cols), non-negative, each divides the next
  std::size_t rank = 0;
  std::optional<IntMatrix> left;    // U with U * A * V = diag
  std::optional<IntMatrix> right;   // V
  std::optional<IntMatrix> right_inverse;
};

/// Smith normal form by repeated smallest-pivot elimination.
inline SmithForm smith_normal_form(const IntMatrix& input, bool with_transforms = false) {
  IntMatrix a = input;
  const std::size_t m = a.rows;
  const std::size_t n = a.cols;
  IntMatrix u, v, vinv;
  if (with_transforms) {
    u = IntMatrix::identity(m);
    v = IntMatrix::identity(n);
    vinv = IntMatrix::identity(n);
  }
  auto row_swap = [&](std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    if (with_transforms) u.swap_rows(i, j);
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    a.swap_cols(i, j);
    if (with_transforms) {
      v.swap_cols(i, j);
      vinv.swap_rows(i, j);
    }
  };
  auto row_add = [&](std::size_t dst, std::size_t src, const mpz_class& k) {
    a.add_row(dst, src, k);
    if (with_transforms) u.add_row(dst, src, k);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const mpz_class& k) {
    a.add_col(dst, src, k);
    if (with_transforms) {
      v.add_col(dst, src, k);
      vinv.add_row(src, dst, -k);
    }
  };

  const std::size_t steps = std::min(m, n);
  std::size_t t = 0;
  for (; t < steps; ++t) {
    for (;;) {
      // smallest nonzero entry of the trailing block becomes the pivot
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j) {
          const mpz_class& x = a(i, j);
          if (x != 0 && (pi == m || mpz_cmpabs(x.get_mpz_t(), a(pi, pj).get_mpz_t()) < 0)) {
            pi = i;
            pj = j;
          }
        }
      if (pi == m) break;
      row_swap(t, pi);
      col_swap(t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        row_add(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        col_add(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // pivot must divide the rest of the block; otherwise pull in the offender
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == m) break;
      row_add(t, bad, 1);
    }
    if (a(t, t) == 0) break;
    if (a(t, t) < 0) {
      a.negate_row(t);
      if (with_transforms) u.negate_row(t);
    }
  }
  SmithForm out;
  out.diagonal.resize(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    out.diagonal[i] = a(i, i);
    if (a(i, i) != 0) ++out.rank;
  }
  if (with_transforms) {
    out.left = std::move(u);
    out.right = std::move(v);
    out.right_inverse = std::move(vinv);
  }
  return out;
}

/// Cokernel of a relation matrix (rows = relations, columns = generators).
struct CokernelInvariants {
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;  // elementary divisors > 1, increasing divisibility

  friend bool operator==(const CokernelInvariants&, const CokernelInvariants&) = default;
};

inline CokernelInvariants graded_rank_snf(const IntMatrix& relations) {
  SmithForm s = smith_normal_form(relations);
  CokernelInvariants out;
  out.free_rank = relations.cols - s.rank;
  for (std::size_t i = 0; i < s.rank; ++i)
    if (s.diagonal[i] != 1) out.torsion.push_back(s.diagonal[i]);
  return out;
}

/// Row-style Hermite normal form: nonzero rows only, positive pivots,
/// entries above each pivot reduced into [0, pivot).
inline IntMatrix hermite_rows(const IntMatrix& input) {
  IntMatrix a = input;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
    for (;;) {
      std::size_t best = a.rows;
      for (std::size_t i = r; i < a.rows; ++i)
        if (a(i, c) != 0 && (best == a.rows || mpz_cmpabs(a(i, c).get_mpz_t(), a(best, c).get_mpz_t()) < 0)) best = i;
      if (best == a.rows) break;
      a.swap_rows(r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < a.rows; ++i) {
        if (a(i, c) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
        a.add_row(i, r, -q);
        if (a(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (r < a.rows && a(r, c) != 0) {
      if (a(r, c) < 0) a.negate_row(r);
      for (std::size_t i = 0; i < r; ++i) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, c).get_mpz_t(), a(r, c).get_mpz_t());
        a.add_row(i, r, -q);
      }
      ++r;
    }
  }
  IntMatrix out(r, a.cols);
  std::copy(a.data.begin(), a.data.begin() + static_cast<long>(r * a.cols), out.data.begin());
  return out;
}

/// Basis (as rows) of the saturated lattice {y : y * A = 0}.
inline IntMatrix left_kernel(const IntMatrix& a) {
  // row-reduce [A | I]; rows whose A-part vanishes span the kernel
  IntMatrix aug(a.rows, a.cols + a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) aug(i, j) = a(i, j);
    aug(i, a.cols + i) = 1;
  }
  IntMatrix h = hermite_rows(aug);
  IntMatrix out(0, a.rows);
  for (std::size_t i = 0; i < h.rows; ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < a.cols && zero; ++j) zero = h(i, j) == 0;
    if (!zero) continue;
    std::vector<mpz_class> r(a.rows);
    for (std::size_t j = 0; j < a.rows; ++j) r[j] = h(i, a.cols + j);
    out.append_row(r);
  }
  return out;
}

/// Basis (as rows) of {x : A * x = 0}.
inline IntMatrix right_kernel(const IntMatrix& a) { return left_kernel(a.transpose()); }

/// Determinant by fraction-free elimination.
inline mpz_class determinant(const IntMatrix& input) {
  if (input.rows != input.cols) throw AlgebraError("determinant of a non-square matrix");
  const std::size_t n = input.rows;
  if (n == 0) return 1;
  IntMatrix a = input;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

/// Determinant over the coefficient ring of a base (Laurent entries allowed).
inline Coeff determinant(std::vector<std::vector<Coeff>> a, const BaseRing& base) {
  const std::size_t n = a.size();
  if (n == 0) return Coeff(1);
  Coeff prev(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && a[p][k].is_zero()) ++p;
      if (p == n) return Coeff{};
      std::swap(a[k], a[p]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Coeff num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        auto q = exact_divide(num, prev);
        if (!q) throw AlgebraError("inexact division in fraction-free determinant");
        a[i][j] = *q;
      }
    prev = a[k][k];
  }
  Coeff d = a[n - 1][n - 1];
  return base.canonical(negate ? -d : d);
}

inline std::size_t rank_over_rationals(const IntMatrix& a) { return smith_normal_form(a).rank; }

}  // namespace oriented
