#pragma once

#include <string>
#include <vector>

#include "oriented/errors.hpp"
#include "oriented/polynomial.hpp"

namespace oriented {

/// k-th elementary symmetric polynomial in the listed variables.
inline Polynomial elementary_symmetric(const RingPtr& ring, const std::vector<std::size_t>& vars, int k) {
  Polynomial out(ring);
  if (k < 0 || k > static_cast<int>(vars.size())) return out;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (static_cast<int>(pick.size()) == k) {
      Monomial m(ring->size());
      for (auto v : pick) m[v] = 1;
      out.add_term(m, Coeff(1));
      return;
    }
    for (std::size_t i = from; i < vars.size(); ++i) {
      pick.push_back(vars[i]);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

/// Complete homogeneous symmetric polynomial h_k.
inline Polynomial complete_symmetric(const RingPtr& ring, const std::vector<std::size_t>& vars, int k) {
  Polynomial out(ring);
  if (k < 0) return out;
  Monomial cur(ring->size());
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == vars.size()) {
      cur[vars[pos]] = static_cast<std::uint32_t>(left);
      out.add_term(cur, Coeff(1));
      cur[vars[pos]] = 0;
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[vars[pos]] = static_cast<std::uint32_t>(e);
      rec(pos + 1, left - e);
    }
    cur[vars[pos]] = 0;
  };
  if (vars.empty()) {
    if (k == 0) out.add_term(cur, Coeff(1));
    return out;
  }
  rec(0, k);
  return out;
}

/// Swaps two variables in every term.
inline Polynomial swap_variables(const Polynomial& p, std::size_t a, std::size_t b) {
  Polynomial out(p.ring());
  for (const auto& [m, c] : p.terms()) {
    Monomial s = m;
    std::swap(s[a], s[b]);
    out.add_term(s, c);
  }
  return out;
}

/// Target ring for elementary_symmetric_decompose: e_1..e_n with weights i*w.
inline RingPtr elementary_ring(const RingPtr& source, const std::vector<std::string>& names = {}) {
  std::vector<Variable> vars;
  const auto& sv = source->variables();
  for (std::size_t i = 0; i < sv.size(); ++i) {
    std::string name = i < names.size() ? names[i] : "e" + std::to_string(i + 1);
    vars.push_back({name, static_cast<int>(i + 1) * sv[0].weight, false});
  }
  return PolyRing::make(source->base(), vars, source->truncation());
}

/// Writes a symmetric polynomial in the elementary symmetric polynomials.
/// All variables of p's ring are permuted and must share one weight.
inline Polynomial elementary_symmetric_decompose(const Polynomial& p, const RingPtr& target) {
  const RingPtr& ring = p.ring();
  const std::size_t n = ring->size();
  if (target->size() != n) throw InputError("target ring needs one elementary generator per variable");
  for (const auto& v : ring->variables())
    if (v.weight != ring->variables()[0].weight || v.parameter)
      throw InputError("symmetric decomposition needs variables of a single weight");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (swap_variables(p, i, i + 1) != p)
      throw NotSymmetric("polynomial changes under swapping " + ring->variables()[i].name + " and " +
                         ring->variables()[i + 1].name);

  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<Polynomial> e;
  for (std::size_t k = 1; k <= n; ++k) e.push_back(elementary_symmetric(ring, all, static_cast<int>(k)));

  Polynomial rest = p;
  Polynomial out(target);
  while (!rest.is_zero()) {
    // leading exponents of a symmetric polynomial are non-increasing
    const auto [lm, lc] = rest.leading();
    Monomial em(n);
    Polynomial product = Polynomial::constant(ring, lc);
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint32_t next = k + 1 < n ? lm[k + 1] : 0;
      if (lm[k] < next) throw AlgebraError("leading monomial is not a partition");
      em[k] = lm[k] - next;
      if (em[k]) product *= e[k].pow(em[k]);
    }
    out.add_term(em, lc);
    rest -= product;
  }
  return out;
}

}  // namespace oriented
