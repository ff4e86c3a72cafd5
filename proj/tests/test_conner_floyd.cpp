#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "oriented/conner_floyd.hpp"

using namespace oriented;

namespace {

// Coefficients of the Gaussian binomial [n choose m]_q via q-Pascal.
std::vector<std::size_t> gaussian(int n, int m) {
  if (m < 0 || m > n) return {};
  if (m == 0 || m == n) return {1};
  auto a = gaussian(n - 1, m - 1);  // [n-1, m-1]
  auto b = gaussian(n - 1, m);      // q^m [n-1, m]
  std::vector<std::size_t> out(std::max(a.size(), b.size() + m), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i + m] += b[i];
  return out;
}

// Permutations of n letters by inversion count.
std::vector<std::size_t> inversions(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::size_t> out(n * (n - 1) / 2 + 1, 0);
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inv += p[i] > p[j];
    ++out[inv];
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<std::size_t> padded(std::vector<std::size_t> v, int d) {
  v.resize(d + 1, 0);
  return v;
}

}  // namespace

TEST(ConnerFloyd, PointIsTheCoefficientRing) {
  auto cob = cobordism_presentation(SpaceDescriptor::point(), 4);
  EXPECT_EQ(cob.graded_ranks(), padded({1}, 4));
  EXPECT_TRUE(cob.ring()->has_parameters());
  auto k = k_theory_presentation(SpaceDescriptor::point(), 4);
  EXPECT_EQ(k.graded_ranks(), padded({1}, 4));
  auto r = verify_conner_floyd(SpaceDescriptor::point(), 4);
  EXPECT_EQ(r.verdict, "isomorphism");
}

TEST(ConnerFloyd, ProjectivePlaneRelation) {
  auto cob = cobordism_presentation(SpaceDescriptor::projective(2), 6);
  auto l = cob.variable("lambda");
  EXPECT_TRUE(cob.normal_form(l * l * l).is_zero());
  EXPECT_FALSE(cob.normal_form(l * l).is_zero());
  auto k1 = k_theory_presentation(SpaceDescriptor::projective(1), 6);
  EXPECT_EQ(k1.graded_ranks(), padded({1, 1}, 6));
  auto k3 = k_theory_presentation(SpaceDescriptor::projective(3), 6);
  auto ranks = k3.graded_ranks();
  EXPECT_EQ(std::accumulate(ranks.begin(), ranks.end(), std::size_t{0}), 4u);
}

TEST(ConnerFloyd, ProjectiveSpacesAreIsomorphisms) {
  for (int n = 1; n <= 4; ++n) {
    auto r = verify_conner_floyd(SpaceDescriptor::projective(n), 8);
    EXPECT_EQ(r.verdict, "isomorphism") << n;
    EXPECT_TRUE(r.relations_match);
    EXPECT_EQ(r.base_changed_ranks, padded(std::vector<std::size_t>(n + 1, 1), 8));
    EXPECT_EQ(r.k_theory_ranks, r.base_changed_ranks);
    EXPECT_EQ(r.cobordism_ranks, r.base_changed_ranks);
  }
}

TEST(ConnerFloyd, GrassmannianAndFlags) {
  auto gr = verify_conner_floyd(SpaceDescriptor::grassmannian(2, 4), 8);
  EXPECT_EQ(gr.verdict, "isomorphism");
  EXPECT_EQ(gr.k_theory_ranks, padded(gaussian(4, 2), 8));
  EXPECT_EQ(std::accumulate(gr.base_changed_ranks.begin(), gr.base_changed_ranks.end(), std::size_t{0}), 6u);

  auto fl = verify_conner_floyd(SpaceDescriptor::flag(3), 8);
  EXPECT_EQ(fl.verdict, "isomorphism");
  EXPECT_EQ(fl.k_theory_ranks, padded(inversions(3), 8));
}

TEST(ConnerFloyd, MismatchIsReported) {
  // P^3 -> P^2 by name is a ring map but loses weight 3
  auto big = base_change(cobordism_presentation(SpaceDescriptor::projective(3), 6),
                         multiplicative_change(lazard_ring(6, 6)));
  auto small = k_theory_presentation(SpaceDescriptor::projective(2), 6);
  auto rep = is_graded_isomorphism(RingMap::by_name(big.ring, small));
  EXPECT_FALSE(rep.isomorphism);
  ASSERT_TRUE(rep.first_failure.has_value());
  EXPECT_EQ(*rep.first_failure, 3);
  EXPECT_FALSE(same_relations(big.ring, small));
}

TEST(ConnerFloyd, NonAssociativeValuesAreRejected) {
  auto cob = cobordism_presentation(SpaceDescriptor::point(), 4);
  auto l = lazard_ring(4, 4);
  CoefficientChange bogus{BaseRing::integers(), {}, std::nullopt};
  for (auto [i, j] : l.indices) bogus.parameters[lazard_generator_name(i, j)] = Coeff(0);
  bogus.parameters["a12"] = Coeff(1);
  EXPECT_THROW(base_change(cob, bogus), IllDefinedMap);
}

TEST(ConnerFloyd, BaseChangeIsFunctorial) {
  auto f = base_change_functoriality(SpaceDescriptor::projective(2), 6);
  EXPECT_TRUE(f.relations_match);
  EXPECT_TRUE(f.isomorphism);

  // the composite sends a11 to beta, undoing the sign of the first step
  auto l = lazard_ring(6, 6);
  auto first = multiplicative_change(l);
  auto both = compose(first, beta_sign_change(first.target));
  EXPECT_EQ(first.parameters.at("a11"), Coeff::monomial(1, -1));
  EXPECT_EQ(both.parameters.at("a11"), Coeff::monomial(1, 1));
}
