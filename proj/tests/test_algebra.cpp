#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "adual/catalog.hpp"
#include "adual/congruence.hpp"
#include "adual/errors.hpp"
#include "adual/homs.hpp"
#include "adual/subuniverse.hpp"
#include "oracles.hpp"

using namespace adual;

namespace {

std::vector<FiniteAlgebra> zoo() {
  return {catalog::cyclic_group(2), catalog::cyclic_group(3), catalog::cyclic_group(4),
          catalog::direct_product(catalog::cyclic_group(2), catalog::cyclic_group(2)), catalog::cyclic_group(6),
          catalog::symmetric_group_s3(), catalog::two_element_semilattice()};
}

std::uint64_t mask_of(std::span<const Element> carrier) {
  std::uint64_t m = 0;
  for (Element e : carrier) m |= std::uint64_t{1} << e;
  return m;
}

Relation rel(int arity, Element n, std::vector<Element> flat) { return Relation::from_flat(arity, n, std::move(flat)); }

}  // namespace

TEST(Power, CoordinatewiseAdditionZ2) {
  const auto P = power_algebra(catalog::cyclic_group(2), 2);
  ASSERT_EQ(P.size(), 4u);
  EXPECT_EQ(P.apply(0, {1, 3}), 2u);
}

TEST(Power, CoordinatewiseAdditionZ3) {
  const auto P = power_algebra(catalog::cyclic_group(3), 2);
  ASSERT_EQ(P.size(), 9u);
  EXPECT_EQ(P.apply(0, {4, 4}), 8u);
}

TEST(Power, MatchesTupleOracle) {
  const auto A = catalog::cyclic_group(3);
  const auto P = power_algebra(A, 3);
  oracle::tuples(P.size(), 2, [&](const std::vector<Element>& xy) {
    const auto x = decode_tuple(xy[0], 3, 3), y = decode_tuple(xy[1], 3, 3);
    Tuple s(3);
    for (int i = 0; i < 3; ++i) s[static_cast<std::size_t>(i)] = (x[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i)]) % 3;
    EXPECT_EQ(P.apply(0, {xy[0], xy[1]}), encode_tuple(s, 3));
  });
}

TEST(Power, BudgetRefusesLargePowers) {
  try {
    power_algebra(catalog::cyclic_group(4), 11, 1'000'000);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.refused(), 4'194'304u);
  }
}

TEST(Subuniverse, Generated) {
  const auto Z4 = catalog::cyclic_group(4);
  const Element two[] = {2}, one[] = {1};
  EXPECT_EQ(generated_subuniverse(Z4, two), (std::vector<Element>{0, 2}));
  EXPECT_EQ(generated_subuniverse(Z4, one), (std::vector<Element>{0, 1, 2, 3}));
}

TEST(Subuniverse, LatticeMatchesSubsetFilter) {
  for (const auto& A : zoo()) {
    std::set<std::uint64_t> got;
    for (const auto& s : subuniverse_lattice(A)) got.insert(mask_of(s));
    const auto want = oracle::subuniverse_masks(A);
    EXPECT_EQ(got, std::set<std::uint64_t>(want.begin(), want.end())) << A.name();
  }
}

TEST(Subuniverse, Z2Itself) { EXPECT_EQ(enumerate_subuniverses(power_algebra(catalog::cyclic_group(2), 1)).size(), 2u); }

TEST(Subuniverse, Z2FourthPower) {
  const auto P = power_algebra(catalog::cyclic_group(2), 4);
  const auto rels = enumerate_subuniverses(P);
  EXPECT_EQ(rels.size(), oracle::subspace_count(2, 4));
  EXPECT_EQ(rels.size(), oracle::subuniverse_masks(P).size());
  EXPECT_EQ(rels.size(), 67u);
}

TEST(Subuniverse, Z3FourthPower) {
  const auto rels = enumerate_subuniverses(power_algebra(catalog::cyclic_group(3), 4));
  EXPECT_EQ(rels.size(), oracle::subspace_count(3, 4));
  EXPECT_EQ(rels.size(), 212u);
  EXPECT_TRUE(std::is_sorted(rels.begin(), rels.end()));
}

TEST(Relation, CanonicalAndNonempty) {
  const auto R = rel(2, 3, {2, 1, 0, 0, 2, 1});
  EXPECT_EQ(R.size(), 2u);
  EXPECT_EQ(R.flat(), (std::vector<Element>{0, 0, 2, 1}));
  EXPECT_THROW(Relation(2, 3, {}), InputError);
  EXPECT_THROW(rel(2, 3, {0, 3}), InputError);
}

TEST(Relation, CompatibilityMatchesClosureOracle) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto P = power_algebra(Z4, 2);
  // {(x, x+2)} misses (0,0) and so is not closed under the constant 0.
  const auto shifted = rel(2, 4, {0, 2, 1, 3, 2, 0, 3, 1});
  EXPECT_FALSE(is_compatible_relation(Z4, shifted));
  EXPECT_EQ(oracle::closed(P, mask_of(relation_to_carrier(P, shifted))), false);
  // In the reduct with only x - y + z it is a coset, hence compatible.
  const auto tZ4 = FiniteAlgebra("Z4t", 4, {Operation{"t", 3, oracle::cyclic_affine_table(4)}});
  EXPECT_TRUE(is_compatible_relation(tZ4, shifted));

  const auto Z2 = catalog::cyclic_group(2);
  const auto R = rel(2, 2, {0, 0, 0, 1});
  EXPECT_EQ(is_compatible_relation(Z2, R), oracle::closed(power_algebra(Z2, 2), 0b0011));
  EXPECT_TRUE(is_compatible_relation(Z2, R));
  const auto bad = rel(2, 2, {0, 0, 0, 1, 1, 0});
  EXPECT_FALSE(is_compatible_relation(Z2, bad));
  EXPECT_FALSE(incompatibility_witness(Z2, bad).empty());
}

TEST(Hom, MatchesBruteForceFilter) {
  const auto algs = zoo();
  for (const auto& A : algs)
    for (const auto& B : algs) {
      if (!A.same_signature(B)) continue;
      if (std::pow(static_cast<double>(B.size()), A.size()) > 1e6) continue;
      std::vector<std::vector<Element>> got;
      for (const auto& h : enumerate_homs(A, B)) got.emplace_back(h.map().begin(), h.map().end());
      EXPECT_EQ(got, oracle::all_homs(A, B)) << A.name() << " -> " << B.name();
    }
}

TEST(Hom, Examples) {
  const auto Z2 = catalog::cyclic_group(2), Z4 = catalog::cyclic_group(4);
  const auto h = enumerate_homs(Z2, Z4);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(std::vector<Element>(h[1].map().begin(), h[1].map().end()), (std::vector<Element>{0, 2}));
  EXPECT_EQ(enumerate_homs(Z4, Z4).size(), 4u);
  EXPECT_EQ(count_homs(Z4, Z4), 4u);
}

TEST(Hom, RejectsNonHomomorphism) {
  const auto Z2 = catalog::cyclic_group(2);
  EXPECT_THROW(Homomorphism::verified(Z2, Z2, {1, 0}), InvariantError);
}

TEST(Congruence, MatchesPartitionFilter) {
  for (const auto& A : zoo()) {
    std::set<std::vector<Element>> got;
    for (const auto& c : enumerate_congruences(A)) got.emplace(c.labels().begin(), c.labels().end());
    const auto want = oracle::congruences(A);
    EXPECT_EQ(got, std::set<std::vector<Element>>(want.begin(), want.end())) << A.name();
    EXPECT_EQ(is_subdirectly_irreducible(A), oracle::subdirectly_irreducible(A)) << A.name();
  }
}

TEST(Congruence, Z4QuotientModTwo) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto theta = principal_congruence(Z4, 0, 2);
  EXPECT_EQ(theta.num_classes(), 2u);
  const auto q = quotient_algebra(Z4, theta);
  EXPECT_EQ(q.algebra.table(0), catalog::cyclic_group(2).table(0));
  for (Element x = 0; x < 4; ++x) EXPECT_EQ(q.projection(x), x % 2);
  EXPECT_EQ(enumerate_congruences(Z4).size(), 3u);
  EXPECT_TRUE(is_subdirectly_irreducible(Z4));
  EXPECT_FALSE(is_subdirectly_irreducible(catalog::direct_product(catalog::cyclic_group(2), catalog::cyclic_group(2))));
}
