#include <gtest/gtest.h>

#include "adual/affine.hpp"
#include "adual/catalog.hpp"
#include "adual/errors.hpp"
#include "oracles.hpp"

using namespace adual;

namespace {
FiniteAlgebra klein() { return catalog::direct_product(catalog::cyclic_group(2), catalog::cyclic_group(2)); }
}  // namespace

TEST(AffineTerm, CyclicGroupsGiveXMinusYPlusZ) {
  for (Element n : {2u, 3u, 4u, 6u}) {
    const auto A = catalog::cyclic_group(n);
    const auto t = find_affine_term(A);
    ASSERT_TRUE(t) << n;
    EXPECT_EQ(t->table(), oracle::cyclic_affine_table(n)) << n;
    EXPECT_TRUE(t->provenance_matches(A));
  }
}

TEST(AffineTerm, Klein) {
  const auto t = find_affine_term(klein());
  ASSERT_TRUE(t);
  EXPECT_EQ(t->table(), oracle::elementary_abelian_affine_table(4));
}

TEST(AffineTerm, NoneForNonAbelian) {
  EXPECT_FALSE(find_affine_term(catalog::two_element_semilattice()));
  EXPECT_FALSE(find_affine_term(catalog::symmetric_group_s3()));
}

TEST(AffineTerm, FullScanAgreesWithEarlyExit) {
  for (const auto& A : {catalog::cyclic_group(3), catalog::cyclic_group(4), klein()}) {
    const auto all = scan_affine_terms(A);
    ASSERT_EQ(all.size(), 1u) << A.name();
    EXPECT_EQ(all.front(), *find_affine_term(A));
  }
  EXPECT_TRUE(scan_affine_terms(catalog::two_element_semilattice()).empty());
}

TEST(AffineTerm, WidthLimit) {
  EXPECT_THROW(find_affine_term(catalog::cyclic_group(11)), BudgetExceeded);
}

TEST(AffineTerm, MalcevAndCompatibility) {
  const TernaryTermOperation t(4, oracle::cyclic_affine_table(4));
  EXPECT_TRUE(is_mal_cev(t));
  EXPECT_TRUE(is_compatible_term(catalog::cyclic_group(4), t));
  auto first = oracle::cyclic_affine_table(4);
  for (Element x = 0; x < 4; ++x)
    for (Element y = 0; y < 4; ++y)
      for (Element z = 0; z < 4; ++z) first[(x * 4 + y) * 4 + z] = x;
  EXPECT_FALSE(is_mal_cev(TernaryTermOperation(4, first)));
}

TEST(AffineTerm, PowerActsCoordinatewise) {
  const TernaryTermOperation t(3, oracle::cyclic_affine_table(3));
  const auto t2 = t.power(2);
  ASSERT_EQ(t2.size(), 9u);
  oracle::tuples(9, 3, [&](const std::vector<Element>& v) {
    const auto x = decode_tuple(v[0], 3, 2), y = decode_tuple(v[1], 3, 2), z = decode_tuple(v[2], 3, 2);
    Tuple r(2);
    for (std::size_t i = 0; i < 2; ++i) r[i] = (x[i] + 3 - y[i] + z[i]) % 3;
    EXPECT_EQ(t2(v[0], v[1], v[2]), encode_tuple(r, 3));
  });
}

TEST(Group, FromAffineTermWithNeutralOne) {
  const TernaryTermOperation t(4, oracle::cyclic_affine_table(4));
  const auto G = group_from_affine(t, 1);
  EXPECT_EQ(G.neutral(), 1u);
  for (Element x = 0; x < 4; ++x)
    for (Element y = 0; y < 4; ++y) EXPECT_EQ(G.add(x, y), (x + y + 3) % 4);
  EXPECT_EQ(G.exponent(), 4u);
  EXPECT_EQ(G.order(3), 2u);  // 3 = 1 + 2
}

TEST(Group, KleinAnyNeutral) {
  const TernaryTermOperation t(4, oracle::elementary_abelian_affine_table(4));
  for (Element c = 0; c < 4; ++c) {
    const auto G = group_from_affine(t, c);
    EXPECT_EQ(G.neutral(), c);
    EXPECT_EQ(G.exponent(), 2u);
  }
}

TEST(Group, RejectsNonAbelianTables) {
  const auto S3 = catalog::symmetric_group_s3();
  const auto inv = S3.table(1);
  EXPECT_THROW(GroupStructure(0, S3.table(0), inv), InvariantError);
}

TEST(AffineCombination, Examples) {
  const TernaryTermOperation t(4, oracle::cyclic_affine_table(4));
  const Element xyz[] = {1, 2, 3};
  EXPECT_EQ(eval_affine_combination(AffineTerm({1, -1, 1}), t, 0, xyz), t(1, 2, 3));
  EXPECT_EQ(eval_affine_combination(AffineTerm({3, -1, -1}), t, 0, xyz), 2u);
  EXPECT_THROW(AffineTerm({1, 1}), InputError);
}

TEST(AffineCombination, IndependentOfNeutral) {
  const TernaryTermOperation t(4, oracle::cyclic_affine_table(4));
  const AffineTerm p({2, -3, 2});
  oracle::tuples(4, 3, [&](const std::vector<Element>& v) {
    const Element want = static_cast<Element>(((2 * v[0] - 3 * static_cast<int>(v[1]) + 2 * v[2]) % 4 + 4) % 4);
    for (Element c = 0; c < 4; ++c) EXPECT_EQ(eval_affine_combination(p, t, c, v), want);
  });
}
