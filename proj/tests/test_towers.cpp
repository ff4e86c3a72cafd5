#include <gtest/gtest.h>

#include <random>

#include "oriented/towers.hpp"
#include "tower_oracle.hpp"

using namespace oriented;

namespace {

IntMatrix scalar(long d, std::size_t n = 1) {
  IntMatrix m = IntMatrix::identity(n);
  for (auto& x : m.data) x *= d;
  return m;
}

/// Constant tower (M, phi) with `count` stored stages, one weight.
ModuleTower constant_tower(const FPModule& m, const IntMatrix& phi, std::size_t count = 4) {
  ModuleTower t;
  for (std::size_t k = 0; k < count; ++k) t.stages.push_back({m});
  for (std::size_t k = 0; k + 1 < count; ++k) t.maps.push_back({phi});
  t.periodicity = Periodicity{0, 1};
  return t;
}

TelescopeDiagram constant_telescope(const FPModule& m, const IntMatrix& phi, std::size_t count = 3) {
  TelescopeDiagram t;
  for (std::size_t k = 0; k < count; ++k) t.stages.push_back({m});
  for (std::size_t k = 0; k + 1 < count; ++k) t.maps.push_back({phi});
  t.periodicity = Periodicity{0, 1};
  return t;
}

CokernelInvariants inv(std::size_t rank, std::vector<long> torsion = {}) {
  CokernelInvariants c;
  c.free_rank = rank;
  for (long t : torsion) c.torsion.push_back(t);
  return c;
}

}  // namespace

TEST(Tower, ConstantIntegers) {
  auto r = tower_limit_and_lim1(constant_tower(FPModule::free(1), scalar(1)), 0);
  EXPECT_EQ(r.lim, inv(1));
  EXPECT_TRUE(r.lim_exact);
  EXPECT_TRUE(r.lim1_zero);
  EXPECT_TRUE(r.mittag_leffler);
  EXPECT_FALSE(r.partial);
}

TEST(Tower, TruncatedPowerSeries) {
  // stage k is R^0(P^k) = Z[lambda]/(lambda^(k+1)); weight w is Z for w <= k
  const int top = 5;
  ModuleTower t;
  std::vector<std::vector<std::size_t>> ranks;
  for (int k = 0; k <= top + 1; ++k) {
    ranks.push_back(cohomology(additive_theory(top + 2), SpaceDescriptor::projective(k), top + 2).graded_ranks());
    ranks.back().resize(top + 1);
    std::vector<FPModule> stage;
    for (int w = 0; w <= top; ++w) stage.push_back(FPModule::free(ranks.back()[w]));
    t.stages.push_back(stage);
  }
  for (int k = 0; k <= top; ++k) {
    std::vector<IntMatrix> m;
    for (int w = 0; w <= top; ++w) {
      IntMatrix a(ranks[k + 1][w], ranks[k][w]);
      if (a.rows && a.cols) a(0, 0) = 1;
      m.push_back(a);
    }
    t.maps.push_back(m);
  }
  t.periodicity = Periodicity{static_cast<std::size_t>(top), 1};
  t.surjective_declared.assign(t.maps.size(), true);
  for (int w = 0; w <= top; ++w) {
    auto r = tower_limit_and_lim1(t, w);
    EXPECT_EQ(r.lim, inv(1)) << w;
    EXPECT_TRUE(r.lim1_zero);
    EXPECT_TRUE(r.lim_exact);
  }
}

TEST(Tower, EightByTwoMatchesBruteForce) {
  FPModule z8 = FPModule::cyclic(8);
  auto r = tower_limit_and_lim1(constant_tower(z8, scalar(2)), 0);
  EXPECT_EQ(r.lim, inv(0));
  EXPECT_TRUE(r.lim1_zero);
  EXPECT_EQ(r.kernel_stable, 3u);

  auto g = oracle::enumerate(z8, 8);
  auto phi = oracle::map_table(g, g, scalar(2));
  EXPECT_TRUE(oracle::stable_image(phi).size() == 1);
}

TEST(Tower, DoublingOnIntegersIsNotMittagLeffler) {
  auto r = tower_limit_and_lim1(constant_tower(FPModule::free(1), scalar(2)), 0);
  EXPECT_FALSE(r.mittag_leffler);
  EXPECT_EQ(r.lim, inv(0));
  EXPECT_TRUE(r.lim_exact);
  EXPECT_FALSE(r.lim1_zero);
  EXPECT_EQ(r.lim1, "(Z_2^/Z)^1, not finitely generated");

  // Z + Z/4 with phi = 3 on Z and 1 on Z/4: lim is the torsion
  FPModule m = FPModule::standard(1, {4});
  IntMatrix phi = IntMatrix::from_rows({{3, 0}, {0, 1}});
  auto r2 = tower_limit_and_lim1(constant_tower(m, phi), 0);
  EXPECT_EQ(r2.lim, inv(0, {4}));
  EXPECT_FALSE(r2.lim1_zero);

  IntMatrix mixed = IntMatrix::from_rows({{1, 0}, {0, 2}});
  auto r3 = tower_limit_and_lim1(constant_tower(FPModule::free(2), mixed), 0);
  EXPECT_TRUE(r3.partial);
  EXPECT_FALSE(r3.lim1_zero);
}

TEST(Tower, UndecidableAndDeclarations) {
  ModuleTower t = constant_tower(FPModule::free(1), scalar(2));
  t.periodicity.reset();
  EXPECT_THROW(tower_limit_and_lim1(t, 0), UndecidableTower);

  t.surjective_declared.assign(t.maps.size(), true);
  EXPECT_THROW(tower_limit_and_lim1(t, 0), AlgebraError);

  ModuleTower s = constant_tower(FPModule::free(1), scalar(-1));
  s.periodicity.reset();
  s.surjective_declared.assign(s.maps.size(), true);
  auto r = tower_limit_and_lim1(s, 0);
  EXPECT_TRUE(r.lim1_zero);
  EXPECT_TRUE(r.partial);

  ModuleTower f = constant_tower(FPModule::cyclic(9), scalar(3));
  f.periodicity.reset();
  auto rf = tower_limit_and_lim1(f, 0);
  EXPECT_TRUE(rf.lim1_zero);
  EXPECT_EQ(rf.lim, inv(0));  // 27 kills Z/9 after the three stored maps
}

TEST(Tower, ValidationCatchesBadInput) {
  ModuleTower t = constant_tower(FPModule::free(1), scalar(1));
  t.maps[2][0] = scalar(2);
  EXPECT_THROW(t.validate(), InputError);

  ModuleTower bad = constant_tower(FPModule::cyclic(2), scalar(1));
  bad.stages[0][0] = FPModule::free(1);  // Z/2 -> Z is not well defined
  bad.periodicity = Periodicity{1, 1};
  EXPECT_THROW(bad.validate(), InputError);

  ModuleTower shortw = constant_tower(FPModule::free(1), scalar(1), 2);
  shortw.periodicity = Periodicity{1, 1};
  EXPECT_THROW(shortw.validate(), InputError);
}

TEST(Tower, RandomFiniteTowersAgreeWithBruteForce) {
  std::mt19937 rng(7);
  int nonzero = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const long p = trial % 2 ? 2 : 3;
    auto rt = oracle::random_periodic_tower(rng, p, trial % 3 == 0, true);
    for (std::size_t w = 0; w < rt.tower.weight_count(); ++w) {
      auto r = tower_limit_and_lim1(rt.tower, static_cast<int>(w));
      EXPECT_TRUE(r.lim1_zero);
      EXPECT_TRUE(r.lim_exact);
      EXPECT_TRUE(oracle::finite_limit_agrees(rt, w, r.lim)) << "trial " << trial << " weight " << w;
      CokernelInvariants wrong = r.lim;
      wrong.torsion.push_back(2);
      EXPECT_FALSE(oracle::finite_limit_agrees(rt, w, wrong));
      if (!r.lim.torsion.empty()) ++nonzero;
    }
  }
  EXPECT_GT(nonzero, 20);
}

TEST(Tower, RandomSurjectiveTowersHaveNoLim1) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    auto rt = oracle::random_periodic_tower(rng, 2 + trial % 2, true, false);
    for (std::size_t w = 0; w < rt.tower.weight_count(); ++w) {
      auto r = tower_limit_and_lim1(rt.tower, static_cast<int>(w));
      EXPECT_TRUE(r.lim1_zero);
      EXPECT_TRUE(r.mittag_leffler);
      // an automorphic period leaves lim equal to the periodic group itself
      const auto& m = rt.periodic[w];
      EXPECT_EQ(r.lim.free_rank, m.rank);
      std::vector<mpz_class> orders(m.orders.begin(), m.orders.end());
      for (long k = 2; k <= 16; ++k)
        EXPECT_EQ(oracle::killed_by(r.lim.torsion, k), oracle::killed_by(orders, k)) << trial;
    }
  }
}

TEST(Telescope, ConstantAndDoubling) {
  auto c = telescope_colimit(constant_telescope(FPModule::free(1), scalar(1)), 0);
  EXPECT_TRUE(c.finitely_generated);
  EXPECT_EQ(c.value, inv(1));

  auto d = telescope_colimit(constant_telescope(FPModule::free(1), scalar(2)), 0);
  EXPECT_FALSE(d.finitely_generated);
  ASSERT_TRUE(d.localized_at.has_value());
  EXPECT_EQ(*d.localized_at, 2);
  EXPECT_EQ(d.description, "rank 1 over the localized base Z[1/2]");

  TelescopeDiagram partial = constant_telescope(FPModule::free(1), scalar(2));
  partial.periodicity.reset();
  EXPECT_TRUE(telescope_colimit(partial, 0).partial);
}

TEST(Telescope, EventuallyIsomorphicSystemIsTheStableStage) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto m = oracle::random_module(rng, trial % 3, 1 + trial % 2, 3, 2);
    TelescopeDiagram t;
    // two quotient-free prefix maps into M, then automorphisms
    for (int k = 0; k < 4; ++k) t.stages.push_back({m.module});
    t.maps.push_back({oracle::random_endomorphism(rng, m, 3, false)});
    for (int k = 1; k < 3; ++k) t.maps.push_back({oracle::random_endomorphism(rng, m, 3, true)});
    t.maps[2] = t.maps[1];
    t.periodicity = Periodicity{1, 1};
    auto c = telescope_colimit(t, 0);
    EXPECT_TRUE(c.finitely_generated);
    EXPECT_EQ(c.value, m.module.invariants());
  }
}

TEST(Telescope, ProjectiveBottSystemStabilizesAtRankOne) {
  auto t = projective_bott_system(multiplicative_theory(8), 5);
  for (int w = 0; w <= 5; ++w) {
    for (std::size_t k = 0; k < t.stages.size(); ++k)
      EXPECT_EQ(t.stages[k][w].generators, static_cast<std::size_t>(w) <= k ? 1u : 0u);
    auto c = telescope_colimit(t, w);
    EXPECT_EQ(c.value, inv(1));
    EXPECT_TRUE(c.finitely_generated);
  }
}

TEST(SplitTower, TrivialComplement) {
  ModuleTower z = constant_tower(FPModule::free(2), IntMatrix::from_rows({{1, 1}, {0, 1}}));
  StageMaps id(4, std::vector<IntMatrix>{IntMatrix::identity(2)});
  auto rep = split_tower_compare(z, z, id, id);
  EXPECT_TRUE(rep.pass());
  for (const auto& c : rep.weights[0].complement) EXPECT_EQ(c, inv(0));
}

TEST(SplitTower, RankOneComplementOverIntegers) {
  IntMatrix g = scalar(2);
  ModuleTower z = constant_tower(FPModule::free(1), g);
  // Y = Z + X, f = s g r is diag(2, 0)
  ModuleTower y = constant_tower(FPModule::free(2), IntMatrix::from_rows({{2, 0}, {0, 0}}));
  StageMaps r(4, std::vector<IntMatrix>{IntMatrix::from_rows({{1}, {0}})});
  StageMaps s(4, std::vector<IntMatrix>{IntMatrix::from_rows({{1, 0}})});
  auto rep = split_tower_compare(y, z, r, s);
  ASSERT_TRUE(rep.hypotheses_hold) << rep.failure;
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.weights[0].complement[0], inv(1));
  EXPECT_EQ(rep.weights[0].y.lim1, rep.weights[0].z.lim1);
}

TEST(SplitTower, HypothesisFailureNamesTheWeight) {
  ModuleTower z;
  ModuleTower y;
  for (int k = 0; k < 3; ++k) {
    z.stages.push_back({FPModule::free(1), FPModule::free(1)});
    y.stages.push_back({FPModule::free(2), FPModule::free(2)});
  }
  for (int k = 0; k < 2; ++k) {
    z.maps.push_back({scalar(1), scalar(1)});
    y.maps.push_back({IntMatrix::from_rows({{1, 0}, {0, 0}}), IntMatrix::from_rows({{1, 0}, {0, 1}})});
  }
  z.periodicity = y.periodicity = Periodicity{0, 1};
  IntMatrix r = IntMatrix::from_rows({{1}, {0}}), s = IntMatrix::from_rows({{1, 0}});
  StageMaps rs(3, std::vector<IntMatrix>{r, r}), ss(3, {s, s});
  auto rep = split_tower_compare(y, z, rs, ss);
  EXPECT_FALSE(rep.hypotheses_hold);
  ASSERT_TRUE(rep.first_bad_weight.has_value());
  EXPECT_EQ(*rep.first_bad_weight, 1);
}

TEST(SplitTower, RandomSplitTowersOverPrimeField) {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const long p = trial % 2 ? 3 : 5;
    std::uniform_int_distribution<std::size_t> dim(1, 2);
    std::uniform_int_distribution<long> coef(0, p - 1);
    const std::size_t a = dim(rng), b = dim(rng);
    auto field = [&](std::size_t n) { return FPModule(n, scalar(p, n)); };
    IntMatrix g(a, a);
    for (auto& x : g.data) x = coef(rng);
    IntMatrix f(a + b, a + b);
    for (std::size_t i = 0; i < a; ++i)
      for (std::size_t j = 0; j < a; ++j) f(i, j) = g(i, j);
    IntMatrix r0(a + b, a), s0(a, a + b);
    for (std::size_t i = 0; i < a; ++i) r0(i, i) = s0(i, i) = 1;
    // hide the splitting behind a change of basis of Y
    auto u = oracle::random_unimodular(rng, a + b);
    IntMatrix fy = u.inv * f * u.u, ry = u.inv * r0, sy = s0 * u.u;

    ModuleTower z = constant_tower(field(a), g);
    ModuleTower y = constant_tower(field(a + b), fy);
    auto rep = split_tower_compare(y, z, StageMaps(4, std::vector<IntMatrix>{ry}), StageMaps(4, std::vector<IntMatrix>{sy}));
    ASSERT_TRUE(rep.hypotheses_hold) << rep.failure;
    EXPECT_TRUE(rep.pass()) << trial;
    EXPECT_EQ(rep.weights[0].complement[0].torsion.size(), b);

    // brute force: lim by stable images, and (1 - f) against (1 - g)
    auto gy = oracle::enumerate(y.stages[0][0], p);
    auto gz = oracle::enumerate(z.stages[0][0], p);
    auto ly = oracle::stable_image(oracle::map_table(gy, gy, fy));
    auto lz = oracle::stable_image(oracle::map_table(gz, gz, g));
    EXPECT_EQ(ly.size(), lz.size());
    EXPECT_TRUE(oracle::same_finite_group(gy, ly, rep.weights[0].y.lim));
    EXPECT_EQ(oracle::one_minus(gy, fy), oracle::one_minus(gz, g));
  }
}
