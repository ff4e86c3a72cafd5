#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "oriented/integer_matrix.hpp"
#include "oriented/presented_ring.hpp"
#include "oriented/ring_map.hpp"
#include "oriented/symmetric.hpp"

using namespace oriented;

namespace {

RingPtr lambda_ring(int d, BaseRing base = BaseRing::integers()) {
  return PolyRing::make(base, {{"lambda", 1, false}}, d);
}

PresentedRing truncated_line(int n, int d) {
  auto r = lambda_ring(d);
  return PresentedRing(r, {parse_polynomial(r, "lambda^" + std::to_string(n + 1))});
}

// Gr_2 of a trivial rank-4 bundle: sum_{i+j=k} sigma_i tau_j = 0 for k = 1..4
PresentedRing grassmannian_2_4(int d) {
  auto r = PolyRing::make(BaseRing::integers(),
                          {{"sigma1", 1, false}, {"sigma2", 2, false}, {"tau1", 1, false}, {"tau2", 2, false}}, d);
  std::vector<Polynomial> rel;
  for (const char* s : {"sigma1 + tau1", "sigma2 + sigma1*tau1 + tau2", "sigma2*tau1 + sigma1*tau2", "sigma2*tau2"})
    rel.push_back(parse_polynomial(r, s));
  return PresentedRing(r, rel);
}

// Free rank over Q by fraction-free Gaussian elimination (independent of the SNF code).
std::size_t rational_rank(std::vector<std::vector<mpq_class>> a) {
  std::size_t rank = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t p = rank;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      mpq_class f = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Torsion order of coker A by brute force: the product of nonzero invariant
// factors equals the gcd of the maximal nonvanishing minors.
mpz_class minor_gcd(const IntMatrix& a, std::size_t k) {
  mpz_class g = 0;
  std::vector<std::size_t> rows, cols;
  std::function<void(std::size_t, std::size_t)> pick_cols;
  std::function<void(std::size_t)> pick_rows = [&](std::size_t from) {
    if (rows.size() == k) {
      cols.clear();
      pick_cols(0, 0);
      return;
    }
    for (std::size_t i = from; i < a.rows; ++i) {
      rows.push_back(i);
      pick_rows(i + 1);
      rows.pop_back();
    }
  };
  pick_cols = [&](std::size_t from, std::size_t) {
    if (cols.size() == k) {
      IntMatrix m(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = a(rows[i], cols[j]);
      mpz_class d = determinant(m);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      return;
    }
    for (std::size_t j = from; j < a.cols; ++j) {
      cols.push_back(j);
      pick_cols(j + 1, 0);
      cols.pop_back();
    }
  };
  pick_rows(0);
  return g;
}

}  // namespace

TEST(NormalForm, SquareOfOnePlusLambda) {
  auto r = lambda_ring(4);
  PresentedRing ring(r, {parse_polynomial(r, "lambda^3")});
  auto x = ring.element("1 + lambda");
  EXPECT_EQ(ring.normal_form(x * x), ring.element("1 + 2*lambda + lambda^2"));
}

TEST(NormalForm, HighPowerVanishes) {
  auto r = lambda_ring(8);
  PresentedRing ring(r, {parse_polynomial(r, "lambda^3")});
  EXPECT_TRUE(ring.normal_form(ring.element("lambda^5")).is_zero());
}

TEST(NormalForm, GrassmannianRelationCombination) {
  auto ring = grassmannian_2_4(4);
  // oracle: the element is sigma1*(sigma1+tau1) - sigma1^2 + ... ; check via the integer kernel of the
  // weight-2 relation matrix: coefficient vector of the element must lie in the row lattice
  auto x = ring.element("sigma1*tau1 + sigma2 + tau2");
  EXPECT_TRUE(ring.normal_form(x).is_zero());
  auto piece = ring.graded_basis(2);
  // rows = relations spanning weight 2; appending x must not change the rank over Q
  std::vector<std::vector<mpq_class>> rows;
  for (const auto& r : piece.relations) {
    std::vector<mpq_class> row;
    for (const auto& c : r) row.push_back(c.scalar());
    rows.push_back(row);
  }
  const std::size_t before = rational_rank(rows);
  std::vector<mpq_class> v;
  for (const auto& m : piece.monomials) v.push_back(x.coefficient(m).scalar());
  rows.push_back(v);
  EXPECT_EQ(rational_rank(rows), before);
}

TEST(NormalForm, NonzeroElementSurvives) {
  auto ring = grassmannian_2_4(4);
  EXPECT_FALSE(ring.normal_form(ring.element("sigma2")).is_zero());
  EXPECT_FALSE(ring.normal_form(ring.element("tau1^4")).is_zero());
  EXPECT_TRUE(ring.normal_form(ring.element("tau1^5")).is_zero());
}

TEST(GradedBasis, TruncatedLineHasRankThree) {
  auto ring = truncated_line(2, 2);
  std::size_t total = 0;
  for (int w = 0; w <= 2; ++w) {
    auto p = ring.graded_basis(w);
    ASSERT_EQ(p.basis.size(), 1u);
    EXPECT_EQ(p.basis[0][0], static_cast<unsigned>(w));
    total += p.free_rank;
  }
  EXPECT_EQ(total, 3u);
}

TEST(GradedBasis, FlagOfRankTwo) {
  auto r = PolyRing::make(BaseRing::integers(), {{"lambda1", 1, false}, {"lambda2", 1, false}}, 2);
  PresentedRing ring(r, {parse_polynomial(r, "lambda1 + lambda2"), parse_polynomial(r, "lambda1*lambda2")});
  std::size_t total = 0;
  for (auto n : ring.graded_ranks()) total += n;
  EXPECT_EQ(total, 2u);
}

TEST(GradedBasis, GrassmannianRanksFromBoxPartitions) {
  auto ring = grassmannian_2_4(4);
  // partitions in a 2x2 box by size: 1,1,2,1,1
  EXPECT_EQ(ring.graded_ranks(), (std::vector<std::size_t>{1, 1, 2, 1, 1}));
  EXPECT_TRUE(ring.degreewise_free());
}

TEST(GradedBasis, WeightOutOfRange) {
  auto ring = truncated_line(2, 3);
  EXPECT_THROW(ring.graded_basis(4), InputError);
  EXPECT_THROW(ring.graded_basis(-1), InputError);
}

TEST(GradedBasis, TorsionIsReported) {
  auto r = lambda_ring(3);
  PresentedRing ring(r, {parse_polynomial(r, "2*lambda^2")});
  auto p = ring.graded_basis(2);
  EXPECT_EQ(p.free_rank, 0u);
  ASSERT_EQ(p.torsion.size(), 1u);
  EXPECT_EQ(p.torsion[0], 2);
  EXPECT_FALSE(ring.degreewise_free());
}

TEST(GradedBasis, ModularAndRationalBases) {
  auto r5 = lambda_ring(3, BaseRing::integers_mod(5));
  PresentedRing m5(r5, {parse_polynomial(r5, "2*lambda^2")});
  EXPECT_EQ(m5.graded_basis(2).free_rank, 0u);  // 2 is a unit mod 5
  auto r4 = lambda_ring(3, BaseRing::integers_mod(4));
  PresentedRing m4(r4, {parse_polynomial(r4, "2*lambda^2")});
  auto p4 = m4.graded_basis(2);
  EXPECT_EQ(p4.free_rank, 0u);
  ASSERT_EQ(p4.torsion.size(), 1u);
  EXPECT_EQ(p4.torsion[0], 2);
  EXPECT_EQ(m4.normal_form(m4.element("3*lambda^2")), m4.element("lambda^2"));
  auto rq = lambda_ring(3, BaseRing::rationals());
  PresentedRing q(rq, {parse_polynomial(rq, "2*lambda^2 - lambda*lambda")});
  EXPECT_EQ(q.graded_basis(2).free_rank, 0u);
}

TEST(SmithForm, SpecExamples) {
  auto a = graded_rank_snf(IntMatrix::from_rows({{2}}));
  EXPECT_EQ(a.free_rank, 0u);
  EXPECT_EQ(a.torsion, std::vector<mpz_class>{2});
  auto b = graded_rank_snf(IntMatrix(0, 3));
  EXPECT_EQ(b.free_rank, 3u);
  EXPECT_TRUE(b.torsion.empty());
}

TEST(SmithForm, RandomMatricesAgreeWithBruteForce) {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> entry(-5, 5), dim(1, 6);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t r = dim(rng), c = dim(rng);
    IntMatrix a(r, c);
    std::vector<std::vector<mpq_class>> q(r, std::vector<mpq_class>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        a(i, j) = entry(rng);
        q[i][j] = a(i, j);
      }
    auto inv = graded_rank_snf(a);
    const std::size_t rank = rational_rank(q);
    EXPECT_EQ(inv.free_rank, c - rank);
    mpz_class torsion_order = 1;
    for (const auto& t : inv.torsion) torsion_order *= t;
    if (rank > 0) {
      EXPECT_EQ(torsion_order, minor_gcd(a, rank));
    }
    for (std::size_t i = 1; i < inv.torsion.size(); ++i)
      EXPECT_TRUE(mpz_divisible_p(inv.torsion[i].get_mpz_t(), inv.torsion[i - 1].get_mpz_t()));
  }
}

TEST(SmithForm, TransformsReproduceDiagonal) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> entry(-9, 9);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix a(4, 5);
    for (auto& x : a.data) x = entry(rng);
    auto s = smith_normal_form(a, true);
    IntMatrix d = (*s.left) * a * (*s.right);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(d(i, j), i == j ? s.diagonal[i] : mpz_class(0));
    EXPECT_EQ((*s.right) * (*s.right_inverse), IntMatrix::identity(5));
  }
}

TEST(IntegerKernel, LeftKernelAnnihilates) {
  auto a = IntMatrix::from_rows({{1, 2}, {2, 4}, {3, 1}});
  auto k = left_kernel(a);
  EXPECT_EQ(k.rows, 1u);
  EXPECT_TRUE((k * a).is_zero());
}

TEST(Properties, NormalFormIsIdempotentAndMultiplicative) {
  auto ring = grassmannian_2_4(6);
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coef(-3, 3), expo(0, 2);
  auto random_element = [&] {
    Polynomial p = ring.zero();
    for (int t = 0; t < 5; ++t) {
      Monomial m(4);
      for (std::size_t i = 0; i < 4; ++i) m[i] = static_cast<std::uint32_t>(expo(rng));
      p.add_term(m, Coeff(coef(rng)));
    }
    return p;
  };
  for (int trial = 0; trial < 30; ++trial) {
    auto x = random_element(), y = random_element();
    auto nx = ring.normal_form(x);
    EXPECT_EQ(ring.normal_form(nx), nx);
    EXPECT_EQ(ring.normal_form(x * y), ring.normal_form(nx * ring.normal_form(y)));
  }
}

TEST(Properties, TruncatedLineRanks) {
  for (int n = 0; n <= 8; ++n) {
    auto ring = truncated_line(n, 8);
    std::size_t total = 0;
    for (auto k : ring.graded_ranks()) total += k;
    EXPECT_EQ(total, static_cast<std::size_t>(n + 1));
  }
}

TEST(Symmetric, NewtonIdentity) {
  auto r = PolyRing::make(BaseRing::integers(), {{"l1", 1, false}, {"l2", 1, false}}, 6);
  auto e = elementary_ring(r);
  EXPECT_EQ(elementary_symmetric_decompose(parse_polynomial(r, "l1^2 + l2^2"), e),
            parse_polynomial(e, "e1^2 - 2*e2"));
}

TEST(Symmetric, ProductOfThree) {
  auto r = PolyRing::make(BaseRing::integers(), {{"l1", 1, false}, {"l2", 1, false}, {"l3", 1, false}}, 6);
  auto e = elementary_ring(r);
  EXPECT_EQ(elementary_symmetric_decompose(parse_polynomial(r, "l1*l2*l3"), e), parse_polynomial(e, "e3"));
}

TEST(Symmetric, RejectsAsymmetric) {
  auto r = PolyRing::make(BaseRing::integers(), {{"l1", 1, false}, {"l2", 1, false}}, 6);
  EXPECT_THROW(elementary_symmetric_decompose(parse_polynomial(r, "l1"), elementary_ring(r)), NotSymmetric);
}

TEST(Symmetric, RandomRoundTrip) {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < n; ++i) vars.push_back({"l" + std::to_string(i + 1), 1, false});
    auto r = PolyRing::make(BaseRing::integers(), vars, 6);
    auto e = elementary_ring(r);
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    for (int trial = 0; trial < 10; ++trial) {
      // symmetrize a random polynomial by summing over the orbit of its monomials
      Polynomial p(r);
      for (int t = 0; t < 3; ++t) {
        std::vector<std::uint32_t> ex(n);
        std::uniform_int_distribution<int> d(0, 6 / static_cast<int>(n));
        for (auto& x : ex) x = static_cast<std::uint32_t>(d(rng));
        std::sort(ex.begin(), ex.end());
        const Coeff c(coef(rng));
        std::set<std::vector<std::uint32_t>> seen;
        do {
          if (seen.insert(ex).second) p.add_term(Monomial(ex), c);
        } while (std::next_permutation(ex.begin(), ex.end()));
      }
      auto dec = elementary_symmetric_decompose(p, e);
      std::vector<Polynomial> images;
      for (std::size_t k = 1; k <= n; ++k) images.push_back(elementary_symmetric(r, all, static_cast<int>(k)));
      EXPECT_EQ(evaluate(dec, images, r), p);
    }
  }
}

TEST(RingMaps, IdentityAndIllDefined) {
  auto line3 = truncated_line(2, 2);
  auto id = RingMap::by_name(line3, line3);
  EXPECT_EQ(id.apply(line3.element("lambda^2")), line3.element("lambda^2"));
  EXPECT_TRUE(is_graded_isomorphism(id).isomorphism);

  auto line2 = truncated_line(1, 2);
  RingMap bad(line2, line3, {line3.element("lambda")});
  try {
    bad.check();
    FAIL() << "expected IllDefinedMap";
  } catch (const IllDefinedMap& e) {
    EXPECT_EQ(e.relation_index, 0u);
  }
}

TEST(RingMaps, SquareMapIsNotAnIsomorphism) {
  auto line2 = truncated_line(1, 2);
  auto line3 = truncated_line(2, 2);
  RingMap sq(line2, line3, {line3.element("lambda^2")});
  auto report = is_graded_isomorphism(sq);
  EXPECT_FALSE(report.isomorphism);
  ASSERT_TRUE(report.first_failure.has_value());
  EXPECT_EQ(*report.first_failure, 1);
}

TEST(RingMaps, LaurentBaseDeterminant) {
  auto base = BaseRing::laurent(BaseRing::integers(), "beta", -1);
  auto r = PolyRing::make(base, {{"lambda", 1, false}}, 3);
  PresentedRing ring(r, {parse_polynomial(r, "lambda^3")});
  RingMap scale(ring, ring, {parse_polynomial(r, "beta*lambda")});
  EXPECT_TRUE(is_graded_isomorphism(scale).isomorphism);
  RingMap twice(ring, ring, {parse_polynomial(r, "2*lambda")});
  EXPECT_FALSE(is_graded_isomorphism(twice).isomorphism);
}

TEST(Parser, RoundTripsThroughToString) {
  auto base = BaseRing::laurent(BaseRing::integers(), "beta", -1);
  auto r = PolyRing::make(base, {{"x", 1, false}, {"y", 1, false}}, 4);
  auto p = parse_polynomial(r, "x + y - beta*x*y + 3*beta^-2*x^2");
  EXPECT_EQ(parse_polynomial(r, p.to_string()), p);
  EXPECT_THROW(parse_polynomial(r, "x + z"), InputError);
  EXPECT_THROW(parse_polynomial(r, "x +"), InputError);
}
