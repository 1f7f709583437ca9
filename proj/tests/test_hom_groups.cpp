#include <gtest/gtest.h>

#include <set>

#include "adual/affine.hpp"
#include "adual/catalog.hpp"
#include "adual/congruence.hpp"
#include "adual/hom_groups.hpp"
#include "adual/homs.hpp"
#include "oracles.hpp"

using namespace adual;

namespace {

FiniteAlgebra klein() { return catalog::direct_product(catalog::cyclic_group(2), catalog::cyclic_group(2)); }

std::vector<FiniteAlgebra> abelian_zoo() {
  return {catalog::cyclic_group(2), catalog::cyclic_group(3), catalog::cyclic_group(4), klein(), catalog::cyclic_group(6)};
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST(PrimeSignature, Factorizations) {
  EXPECT_EQ(prime_signature(12).factors, (std::vector<std::pair<std::uint64_t, int>>{{2, 2}, {3, 1}}));
  EXPECT_EQ(prime_signature(1).factors.size(), 0u);
  EXPECT_EQ(prime_signature(64).max_exponent(), 6);
}

TEST(HomBound, Examples) {
  EXPECT_EQ(hom_count_bound(4, 4, HomCountMode::Group), 16u);
  EXPECT_EQ(hom_count_bound(2, 4, HomCountMode::Group), 4u);
  EXPECT_EQ(hom_count_bound(2, 3, HomCountMode::Group), 1u);
  EXPECT_EQ(hom_count_bound(4, 2, HomCountMode::Abelian), 8u);
}

TEST(HomBound, DivisibilityOnAllPairs) {
  for (const auto& A : abelian_zoo())
    for (const auto& B : abelian_zoo())
      for (auto mode : {HomCountMode::Group, HomCountMode::Abelian}) {
        const auto r = hom_divisibility_check(A, B, mode);
        EXPECT_TRUE(r.pass) << r.render();
        EXPECT_EQ(hom_count_bound(A.size(), B.size(), mode) % oracle::all_homs(A, B).size(), 0u);
      }
}

TEST(GeneratingFamily, Sizes) {
  const TernaryTermOperation t4(4, oracle::cyclic_affine_table(4));
  const auto F4 = generating_family(group_from_affine(t4, 0));
  ASSERT_EQ(F4.size(), 1u);
  EXPECT_EQ(F4.orders[0], 4u);
  const TernaryTermOperation tk(4, oracle::elementary_abelian_affine_table(4));
  EXPECT_EQ(generating_family(group_from_affine(tk, 0)).size(), 2u);
}

TEST(GeneratingFamily, ExpressionsEvaluateBack) {
  for (Element n : {4u, 6u}) {
    const TernaryTermOperation t(n, oracle::cyclic_affine_table(n));
    const auto G = group_from_affine(t, 0);
    const auto F = generating_family(G);
    for (Element x = 0; x < n; ++x) EXPECT_EQ(evaluate_expression(G, F, F.expressions[x]), x);
  }
}

TEST(Hk, Z2IdentityHasTwoProjections) {
  const auto Z2 = catalog::cyclic_group(2);
  const auto t = *find_affine_term(Z2);
  const auto id = Homomorphism::verified(Z2, Z2, {0, 1});
  const auto H = build_hk_group(Z2, Z2, t, t, id);
  ASSERT_EQ(H.elements.size(), 2u);
  // f(x,y) = x and f(x,y) = y over codes 2x + y.
  std::set<std::vector<Element>> maps;
  for (const auto& f : H.elements) maps.emplace(f.map().begin(), f.map().end());
  EXPECT_EQ(maps, (std::set<std::vector<Element>>{{0, 0, 1, 1}, {0, 1, 0, 1}}));
}

TEST(Hk, Z4IdentityMatchesLinearOracle) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto t = *find_affine_term(Z4);
  const auto H = build_hk_group(Z4, Z4, t, t, Homomorphism::verified(Z4, Z4, {0, 1, 2, 3}));
  std::set<std::vector<Element>> want;
  for (Element a = 0; a < 4; ++a) {
    const Element b = (5 - a) % 4;  // a + b = 1
    std::vector<Element> m;
    for (Element x = 0; x < 4; ++x)
      for (Element y = 0; y < 4; ++y) m.push_back((a * x + b * y) % 4);
    want.insert(m);
  }
  std::set<std::vector<Element>> got;
  for (const auto& f : H.elements) got.emplace(f.map().begin(), f.map().end());
  EXPECT_EQ(got, want);
}

TEST(Hk, Z2ToZ3IsTrivial) {
  const auto Z2 = catalog::cyclic_group(2), Z3 = catalog::cyclic_group(3);
  const auto ks = enumerate_homs(Z2, Z3);
  ASSERT_EQ(ks.size(), 1u);
  const auto H = build_hk_group(Z2, Z3, *find_affine_term(Z2), *find_affine_term(Z3), ks[0]);
  EXPECT_EQ(H.elements.size(), 1u);
}

TEST(Hk, BoundsPsiAndPhiOnAllPairs) {
  for (const auto& A : abelian_zoo())
    for (const auto& S : abelian_zoo()) {
      const auto tA = *find_affine_term(A), tS = *find_affine_term(S);
      std::vector<HkGroup> groups;
      for (const auto& k : enumerate_homs(A, S)) {
        auto H = build_hk_group(A, S, tA, tS, k);
        const auto F = generating_family(H.group);
        EXPECT_TRUE(check_hk_bounds(H, F).pass) << A.name() << " " << S.name();
        EXPECT_TRUE(check_psi_embedding(H).pass) << A.name() << " " << S.name();
        // |H| divides Π p^(αβ), by direct factorization of the sizes.
        std::uint64_t bound = 1;
        for (std::uint64_t p : {2, 3, 5}) {
          int a = 0, b = 0;
          for (auto x = A.size(); x % p == 0; x /= static_cast<Element>(p)) ++a;
          for (auto x = S.size(); x % p == 0; x /= static_cast<Element>(p)) ++b;
          bound *= ipow(p, static_cast<std::uint64_t>(a * b));
        }
        EXPECT_EQ(bound % H.elements.size(), 0u);
        groups.push_back(std::move(H));
      }
      for (std::size_t j = 1; j < groups.size(); ++j) EXPECT_TRUE(check_phi_isomorphism(groups[0], groups[j]).pass);
    }
}

TEST(CardinalSI, QuotientsOfSmallPowers) {
  for (const auto& A : abelian_zoo()) {
    const auto tA = *find_affine_term(A);
    for (int n = 1; n <= 2; ++n) {
      const auto P = power_algebra(A, n);
      for (const auto& theta : enumerate_congruences(P)) {
        const auto q = quotient_algebra(P, theta);
        if (q.algebra.size() == 1 || !is_subdirectly_irreducible(q.algebra)) continue;
        EXPECT_LE(q.algebra.size(), cardinal_si_bound(A.size())) << A.name();
        EXPECT_TRUE(kearnes_divisibility_check(A, tA, q.algebra.renamed("S")).pass) << A.name();
      }
    }
  }
}

TEST(CardinalSI, Examples) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto t = *find_affine_term(Z4);
  EXPECT_TRUE(kearnes_divisibility_check(Z4, t, catalog::cyclic_group(2)).pass);
  EXPECT_TRUE(kearnes_divisibility_check(Z4, t, Z4).pass);
  EXPECT_EQ(cardinal_si_bound(4), 16u);
  EXPECT_EQ(cardinal_si_bound(12), 48u);
}
