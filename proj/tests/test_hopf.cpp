#include <gtest/gtest.h>

#include "oriented/hopf.hpp"

using namespace oriented;

namespace {

long partitions_count(int n, int largest) {
  if (n == 0) return 1;
  long t = 0;
  for (int k = 1; k <= std::min(n, largest); ++k) t += partitions_count(n - k, k);
  return t;
}

// exactly `parts` parts: p(n, k) = p(n-1, k-1) + p(n-k, k)
long exactly(int n, int parts) {
  if (n == 0 && parts == 0) return 1;
  if (n <= 0 || parts <= 0) return 0;
  return exactly(n - 1, parts - 1) + exactly(n - parts, parts);
}

// Whitney formula oracle: Delta sigma_k = sum sigma_i (x) sigma_(k-i),
// extended multiplicatively.
TensorCoords whitney(const Partition& alpha) {
  TensorCoords acc;
  acc[{Partition{}, Partition{}}] = 1;
  for (int k : alpha) {
    TensorCoords next;
    for (const auto& [key, c] : acc)
      for (int i = 0; i <= k; ++i) {
        Partition l = key.first, r = key.second;
        if (i > 0) l = merge(l, {i});
        if (k - i > 0) r = merge(r, {k - i});
        next[{l, r}] += c;
      }
    acc = std::move(next);
  }
  return acc;
}

HopfData integral(int d) { return build_hopf(additive_theory(d), d); }

}  // namespace

TEST(Hopf, CoproductOfLowGenerators) {
  HopfData h = integral(4);
  TensorCoords d1 = h.coproduct({1});
  TensorCoords e1{{{Partition{1}, Partition{}}, 1}, {{Partition{}, Partition{1}}, 1}};
  EXPECT_EQ(d1, e1);
  TensorCoords d2 = h.coproduct({2});
  TensorCoords e2{{{Partition{2}, Partition{}}, 1}, {{Partition{1}, Partition{1}}, 1}, {{Partition{}, Partition{2}}, 1}};
  EXPECT_EQ(d2, e2);
  EXPECT_EQ(h.counit({}), 1);
  EXPECT_EQ(h.counit({2}), 0);
}

TEST(Hopf, DualizedCoproductMatchesWhitneyFormula) {
  HopfData h = integral(6);
  for (int w = 0; w <= 6; ++w)
    for (const auto& alpha : h.basis[w]) EXPECT_EQ(h.coproduct(alpha), whitney(alpha)) << partition_label(alpha, "s");
}

TEST(Hopf, PairingMatchesHandComputationInWeightTwo) {
  HopfData h = integral(2);
  // basis (2), (1,1): <s2, b2> = 0, <s2, b1^2> = 1, <s1^2, b2> = 1, <s1^2, b1^2> = 2
  ASSERT_EQ(h.basis[2], (std::vector<Partition>{{2}, {1, 1}}));
  EXPECT_EQ(h.pairing[2](0, 0), 0);
  EXPECT_EQ(h.pairing[2](0, 1), 1);
  EXPECT_EQ(h.pairing[2](1, 0), 1);
  EXPECT_EQ(h.pairing[2](1, 1), 2);
  for (int w = 0; w <= 2; ++w) EXPECT_EQ(h.dual_basis[w] * h.pairing[w], IntMatrix::identity(h.basis[w].size()));
}

TEST(Hopf, Coassociative) {
  HopfData h = integral(5);
  for (int w = 0; w <= 5; ++w)
    for (const auto& alpha : h.basis[w]) {
      std::map<std::tuple<Partition, Partition, Partition>, mpz_class> left, right;
      for (const auto& [key, c] : h.coproduct(alpha)) {
        for (const auto& [k2, c2] : h.coproduct(key.first)) left[{k2.first, k2.second, key.second}] += c * c2;
        for (const auto& [k2, c2] : h.coproduct(key.second)) right[{key.first, k2.first, k2.second}] += c * c2;
      }
      EXPECT_EQ(left, right);
    }
}

TEST(Hopf, CoproductIsMultiplicative) {
  HopfData h = integral(6);
  auto tensor_product = [](const TensorCoords& a, const TensorCoords& b) {
    TensorCoords out;
    for (const auto& [x, c] : a)
      for (const auto& [y, d] : b) out[{merge(x.first, y.first), merge(x.second, y.second)}] += c * d;
    return out;
  };
  for (const auto& [a, b] : std::vector<std::pair<Partition, Partition>>{{{1}, {2}}, {{2, 1}, {3}}, {{1, 1}, {2, 2}}})
    EXPECT_EQ(h.coproduct(merge(a, b)), tensor_product(h.coproduct(a), h.coproduct(b)));
}

TEST(Hopf, PrimitivesHaveRankOne) {
  for (const auto& base : {BaseRing::integers(), BaseRing::rationals()}) {
    HopfData h = build_hopf(additive_theory(6, base), 6);
    EXPECT_EQ(primitives(h, 0).rank(), 0u);
    for (int w = 1; w <= 6; ++w) EXPECT_EQ(primitives(h, w).rank(), 1u) << "weight " << w;
  }
}

TEST(Hopf, PrimitivesArePowerSums) {
  HopfData h = integral(6);
  PresentedRing& coh = *h.cohomology;
  EXPECT_TRUE(primitives(h, 1).elements[0] == "sigma1" || primitives(h, 1).elements[0] == "-sigma1");
  for (int w = 2; w <= 5; ++w) {
    // oracle: Newton power sum in w variables written in elementary symmetric functions
    std::vector<Variable> vars;
    for (int i = 1; i <= w; ++i) vars.push_back({"l" + std::to_string(i), 1, false});
    RingPtr lr = PolyRing::make(BaseRing::integers(), vars, w);
    Polynomial pw(lr);
    for (int i = 0; i < w; ++i) {
      Monomial m(w);
      m[i] = w;
      pw.add_term(m, Coeff(1));
    }
    std::vector<std::string> names;
    for (int i = 1; i <= w; ++i) names.push_back("sigma" + std::to_string(i));
    Polynomial in_e = elementary_symmetric_decompose(pw, elementary_ring(lr, names));
    Polynomial expected = rebase(in_e, coh.ring());
    PrimitiveBasis p = primitives(h, w);
    Polynomial got = h.sigma_element(w, p.vectors.row(0));
    EXPECT_TRUE(got == expected || got == -expected) << got.to_string() << " vs " << expected.to_string();
  }
}

TEST(Hopf, AdditiveMapsIdentification) {
  for (const auto& base : {BaseRing::integers(), BaseRing::rationals()}) {
    HopfData h = build_hopf(additive_theory(6, base), 6);
    AdditiveReport r = additive_maps_identification(h);
    EXPECT_TRUE(r.isomorphism);
    ASSERT_EQ(r.weights.size(), 7u);
    for (const auto& w : r.weights) {
      EXPECT_EQ(w.primitive_rank, 1u);
      EXPECT_EQ(w.line_rank, 1u);
      EXPECT_TRUE(w.bijective);
    }
  }
}

TEST(Hopf, Indecomposables) {
  HopfData h = integral(6);
  auto one = indecomposables(h, 1);
  EXPECT_EQ(one.square_rank, 0u);
  EXPECT_EQ(one.rank, 1u);
  auto two = indecomposables(h, 2);
  EXPECT_EQ(two.square_rank, 1u);
  EXPECT_EQ(two.basis, (std::vector<std::string>{"b2"}));
  for (int w = 1; w <= 6; ++w) {
    auto r = indecomposables(h, w);
    EXPECT_EQ(r.rank, 1u);
    EXPECT_TRUE(r.torsion.empty());
    EXPECT_TRUE(r.unimodular) << "weight " << w;
    // snake-lemma bookkeeping: p(w) = primitives + (I^2)_w
    EXPECT_EQ(static_cast<long>(primitives(h, w).rank() + r.square_rank), partitions_count(w, w));
  }
}

TEST(Hopf, FiltrationQuotients) {
  SymFilteredAlgebra a{BaseRing::integers(), 8};
  for (int w = 0; w <= 8; ++w) {
    long sum = 0;
    for (int n = 0; n <= w; ++n) {
      FilteredPiece p = a.quotient(n, w);
      EXPECT_TRUE(p.split);
      EXPECT_EQ(static_cast<long>(p.free_rank), exactly(w, n)) << n << "," << w;
      EXPECT_EQ(p.basis.size(), p.free_rank);
      sum += static_cast<long>(p.free_rank);
    }
    EXPECT_EQ(sum, partitions_count(w, w));
  }
}

TEST(Hopf, TorsionCoefficientsRejected) {
  OrientedTheory z5{"additive", make_additive(BaseRing::integers_mod(5), 4), std::nullopt};
  EXPECT_THROW(build_hopf(z5, 4), AlgebraError);
}
