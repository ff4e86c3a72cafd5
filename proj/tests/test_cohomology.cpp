#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "oriented/cohomology.hpp"

using namespace oriented;

namespace {

// Gaussian binomial [n choose m]_q as a coefficient list, from the
// recurrence [n,m] = [n-1,m-1] + q^m [n-1,m].
std::vector<long> gaussian(int n, int m) {
  if (m < 0 || m > n) return {};
  if (m == 0 || m == n) return {1};
  auto a = gaussian(n - 1, m - 1);
  auto b = gaussian(n - 1, m);
  std::vector<long> out(std::max(a.size(), b.size() + m), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i + m] += b[i];
  return out;
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long total(const std::vector<std::size_t>& v) { return std::accumulate(v.begin(), v.end(), 0L); }

}  // namespace

TEST(Cohomology, ProjectiveSpacesAreFreeOfRankNPlusOne) {
  auto th = additive_theory(9);
  for (int n = 0; n <= 8; ++n) {
    PresentedRing r = cohomology(th, SpaceDescriptor::projective(n), n + 1);
    EXPECT_TRUE(r.degreewise_free());
    auto ranks = r.graded_ranks();
    EXPECT_EQ(total(ranks), n + 1);
    for (int w = 0; w <= n + 1; ++w) EXPECT_EQ(ranks[w], w <= n ? 1u : 0u);
  }
}

TEST(Cohomology, PointAndP0AreTheCoefficients) {
  auto th = additive_theory(4);
  EXPECT_EQ(cohomology(th, SpaceDescriptor::point(), 3).graded_ranks(), (std::vector<std::size_t>{1, 0, 0, 0}));
  EXPECT_EQ(cohomology(th, SpaceDescriptor::projective(0), 3).graded_ranks(),
            (std::vector<std::size_t>{1, 0, 0, 0}));
}

TEST(Cohomology, RelationAboveTruncationRejected) {
  auto th = additive_theory(8);
  EXPECT_THROW(cohomology(th, SpaceDescriptor::projective(8), 8), InputError);
  EXPECT_THROW(cohomology(th, SpaceDescriptor::grassmannian(3, 2), 8), InputError);
}

TEST(Cohomology, GrassmanniansHaveGaussianBinomialRanks) {
  auto th = additive_theory(9);
  for (int n = 1; n <= 6; ++n)
    for (int m = 0; m <= n; ++m) {
      const int d = std::max(n, m * (n - m));
      PresentedRing r = cohomology(th, SpaceDescriptor::grassmannian(m, n), d);
      auto ranks = r.graded_ranks();
      auto q = gaussian(n, m);
      EXPECT_EQ(total(ranks), binomial(n, m)) << m << "," << n;
      for (int w = 0; w <= d; ++w)
        EXPECT_EQ(static_cast<long>(ranks[w]), w < static_cast<int>(q.size()) ? q[w] : 0)
            << "Gr(" << m << "," << n << ") weight " << w;
    }
}

TEST(Cohomology, FlagsHaveRankNFactorial) {
  auto th = additive_theory(10);
  long fact = 1;
  for (int n = 1; n <= 5; ++n) {
    fact *= n;
    const int d = std::max(n, n * (n - 1) / 2);
    PresentedRing r = cohomology(th, SpaceDescriptor::flag(n), d);
    EXPECT_TRUE(r.degreewise_free());
    EXPECT_EQ(total(r.graded_ranks()), fact) << "n=" << n;
  }
}

TEST(Cohomology, ProjectiveBundles) {
  auto th = additive_theory(6);
  // rank-1 bundle with c1 = h: lambda' = lambda, so the base ring again
  auto line = SpaceDescriptor::projective_bundle(SpaceDescriptor::projective(2), {"lambda"});
  PresentedRing r = cohomology(th, line, 4);
  EXPECT_EQ(r.graded_ranks(), cohomology(th, SpaceDescriptor::projective(2), 4).graded_ranks());
  EXPECT_TRUE(r.equal(r.variable("lambda'"), r.variable("lambda")));
  // rank-2 bundle over P^1: free of rank 2 over a rank-2 base
  auto plane = SpaceDescriptor::projective_bundle(SpaceDescriptor::projective(1), {"lambda", "0"});
  EXPECT_EQ(total(cohomology(th, plane, 4).graded_ranks()), 4);
  // Chern classes of the wrong weight are rejected
  auto bad = SpaceDescriptor::projective_bundle(SpaceDescriptor::projective(2), {"lambda^2"});
  EXPECT_THROW(cohomology(th, bad, 4), InputError);
}

TEST(Cohomology, BGLAndInfiniteProjectiveSpace) {
  auto th = additive_theory(6);
  EXPECT_EQ(cohomology(th, SpaceDescriptor::infinite_projective(), 5).graded_ranks(),
            (std::vector<std::size_t>{1, 1, 1, 1, 1, 1}));
  // BGL_2: monomials sigma1^a sigma2^b, partitions into parts <= 2
  EXPECT_EQ(cohomology(th, SpaceDescriptor::bgl(2), 5).graded_ranks(),
            (std::vector<std::size_t>{1, 1, 2, 2, 3, 3}));
  EXPECT_EQ(cohomology(th, SpaceDescriptor::bgl_infinite(), 5).graded_ranks(),
            (std::vector<std::size_t>{1, 1, 2, 3, 5, 7}));
}

TEST(Cohomology, FiniteProjectiveSpaceIsTruncatedInfinite) {
  auto th = additive_theory(8);
  for (int n = 0; n <= 6; ++n) {
    auto inf = cohomology(th, SpaceDescriptor::infinite_projective(), n).graded_ranks();
    auto fin = cohomology(th, SpaceDescriptor::projective(n), n + 1).graded_ranks();
    for (int w = 0; w <= n; ++w) EXPECT_EQ(inf[w], fin[w]);
    auto res = restriction_map(th, SpaceDescriptor::infinite_projective(), SpaceDescriptor::projective(n), n + 1);
    EXPECT_TRUE(res.surjective_everywhere());
  }
}

TEST(Cohomology, ChernTensor) {
  auto add = additive_theory(6);
  auto mul = multiplicative_theory(6);
  auto three = SpaceDescriptor::product(
      SpaceDescriptor::product(SpaceDescriptor::infinite_projective(), SpaceDescriptor::infinite_projective()),
      SpaceDescriptor::infinite_projective());
  for (const auto* th : {&add, &mul}) {
    PresentedRing r = cohomology(*th, three, 6);
    auto a = r.variable("lambda"), b = r.variable("lambda'"), c = r.variable("lambda''");
    EXPECT_EQ(chern_tensor(*th, r, a, chern_tensor(*th, r, b, c)), chern_tensor(*th, r, chern_tensor(*th, r, a, b), c));
    EXPECT_EQ(chern_tensor(*th, r, a, b), chern_tensor(*th, r, b, a));
  }
  PresentedRing ra = cohomology(add, three, 6);
  EXPECT_EQ(chern_tensor(add, ra, ra.variable("lambda"), ra.variable("lambda'")), ra.element("lambda + lambda'"));
  EXPECT_EQ(chern_dual(add, ra, ra.variable("lambda")), ra.element("-lambda"));
  PresentedRing rm = cohomology(mul, three, 6);
  EXPECT_EQ(chern_tensor(mul, rm, rm.variable("lambda"), rm.variable("lambda'")),
            rm.element("lambda + lambda' - beta*lambda*lambda'"));
  // dual: -l/(1 - beta l); tensoring with the dual gives the trivial bundle
  auto l = rm.variable("lambda");
  EXPECT_TRUE(chern_tensor(mul, rm, l, chern_dual(mul, rm, l)).is_zero());
  EXPECT_THROW(chern_tensor(add, ra, ra.element("lambda^2"), ra.variable("lambda")), InputError);
}

TEST(Cohomology, ProductWithPointIsIsomorphic) {
  auto th = additive_theory(6);
  for (const auto& x : {SpaceDescriptor::projective(3), SpaceDescriptor::grassmannian(2, 4), SpaceDescriptor::flag(3)}) {
    PresentedRing px = cohomology(th, SpaceDescriptor::product(x, SpaceDescriptor::point()), 6);
    PresentedRing rx = cohomology(th, x, 6);
    EXPECT_TRUE(is_graded_isomorphism(RingMap::by_name(px, rx)).isomorphism) << x.describe();
  }
}

TEST(Cohomology, Restrictions) {
  auto th = additive_theory(6);
  auto p = restriction_map(th, SpaceDescriptor::projective(2), SpaceDescriptor::projective(1), 4);
  EXPECT_TRUE(p.surjective_everywhere());
  EXPECT_EQ(p.map.images()[0], p.map.target().variable("lambda"));

  auto b = restriction_map(th, SpaceDescriptor::bgl(2), SpaceDescriptor::bgl(1), 5);
  // oracle: e_k(lambda1, 0) in two variables
  RingPtr two = PolyRing::make(BaseRing::integers(), {{"lambda1", 1, false}, {"lambda2", 1, false}}, 5);
  std::vector<Polynomial> e{elementary_symmetric(two, {0, 1}, 1), elementary_symmetric(two, {0, 1}, 2)};
  RingPtr one = PolyRing::make(BaseRing::integers(), {{"lambda", 1, false}}, 5);
  std::vector<Polynomial> kill{Polynomial::variable(one, 0), Polynomial(one)};
  for (int k = 0; k < 2; ++k)
    EXPECT_EQ(rebase(b.map.images()[k], one), evaluate(e[k], kill, one)) << "sigma" << k + 1;
  EXPECT_TRUE(b.surjective_everywhere());

  auto id = restriction_map(th, SpaceDescriptor::projective(0), SpaceDescriptor::projective(0), 2);
  EXPECT_TRUE(is_graded_isomorphism(id.map).isomorphism);

  auto g = restriction_map(th, SpaceDescriptor::grassmannian(2, 5), SpaceDescriptor::grassmannian(2, 4), 6);
  EXPECT_TRUE(g.surjective_everywhere());

  EXPECT_THROW(restriction_map(th, SpaceDescriptor::projective(1), SpaceDescriptor::projective(2), 4), InputError);
  EXPECT_THROW(restriction_map(th, SpaceDescriptor::flag(3), SpaceDescriptor::projective(2), 4), InputError);
}

TEST(Cohomology, HomologyDual) {
  auto th = additive_theory(6);
  auto h = homology_dual(cohomology(th, SpaceDescriptor::projective(2), 3));
  ASSERT_EQ(h.pieces.size(), 4u);
  EXPECT_EQ(h.pieces[0].labels, (std::vector<std::string>{"b0"}));
  EXPECT_EQ(h.pieces[2].labels, (std::vector<std::string>{"b2"}));
  EXPECT_TRUE(h.pieces[3].labels.empty());
  EXPECT_TRUE(h.unimodular);
  auto inf = homology_dual(cohomology(th, SpaceDescriptor::infinite_projective(), 6));
  for (const auto& p : inf.pieces) EXPECT_EQ(p.labels.size(), 1u);
  auto pt = homology_dual(cohomology(th, SpaceDescriptor::point(), 0));
  EXPECT_EQ(pt.pieces[0].pairing[0][0], Coeff(1));
  auto gr = homology_dual(cohomology(th, SpaceDescriptor::grassmannian(2, 4), 4));
  EXPECT_EQ(gr.pieces[2].labels.size(), 2u);
  EXPECT_TRUE(gr.unimodular);
}

TEST(Cohomology, InvarianceCheck) {
  for (int n = 1; n <= 4; ++n) {
    auto r = invariance_check(BaseRing::integers(), n, 6);
    EXPECT_TRUE(r.pass) << r.failure;
    EXPECT_GT(r.monomials_checked, 0u);
  }
  EXPECT_THROW(invariance_check(BaseRing::integers(), 5, 3), InputError);
}

TEST(Cohomology, UniversalTheoryRanksOverLazardCoefficients) {
  auto th = universal_theory(4);
  PresentedRing r = cohomology(th, SpaceDescriptor::projective(2), 4);
  EXPECT_EQ(r.graded_ranks(), (std::vector<std::size_t>{1, 1, 1, 0, 0}));
  // c1 of a tensor product in the universal theory: x + y + a11 x y + ...
  PresentedRing two = cohomology(
      th, SpaceDescriptor::product(SpaceDescriptor::infinite_projective(), SpaceDescriptor::infinite_projective()), 3);
  auto t = chern_tensor(th, two, two.variable("lambda"), two.variable("lambda'"));
  EXPECT_EQ(t.weight_part(2), two.element("a11*lambda*lambda'").weight_part(2));
}
