#include <gtest/gtest.h>

#include <set>

#include "adual/catalog.hpp"
#include "adual/errors.hpp"
#include "adual/duality.hpp"
#include "adual/subuniverse.hpp"
#include "oracles.hpp"

using namespace adual;

namespace {

// Maps φ: Hom(B,A) → A preserving every lifted relation, by filtering all |A|^|homs| candidates.
std::size_t double_dual_oracle(const DualStructure& D, const AlterEgo& ae) {
  const auto& homs = D.homs;
  const Element a = ae.base.size();
  const auto h = static_cast<int>(homs.size());
  std::size_t count = 0;
  oracle::tuples(a, h, [&](const std::vector<Element>& phi) {
    for (const auto& R : ae.relations) {
      const int r = R.arity();
      bool ok = true;
      oracle::tuples(static_cast<Element>(h), r, [&](const std::vector<Element>& fs) {
        if (!ok) return;
        Tuple img(static_cast<std::size_t>(r));
        for (Element b = 0; b < D.algebra.size(); ++b) {
          for (int i = 0; i < r; ++i) img[static_cast<std::size_t>(i)] = homs[fs[static_cast<std::size_t>(i)]](b);
          if (!R.contains(img)) return;
        }
        for (int i = 0; i < r; ++i) img[static_cast<std::size_t>(i)] = phi[fs[static_cast<std::size_t>(i)]];
        if (!R.contains(img)) ok = false;
      });
      if (!ok) return;
    }
    ++count;
  });
  return count;
}

}  // namespace

TEST(ArityBound, Formula) {
  EXPECT_EQ(arity_bound(2), 4);
  EXPECT_EQ(arity_bound(4), 9);
  EXPECT_EQ(arity_bound(12), 9);
  EXPECT_EQ(arity_bound(8), 28);
  EXPECT_EQ(arity_bound(6), 4);
  EXPECT_EQ(arity_bound(1), 4);
}

TEST(AlterEgo, RelationCounts) {
  EXPECT_EQ(build_alter_ego(catalog::cyclic_group(2), 4).relations.size(), 67u);
  EXPECT_EQ(build_alter_ego(catalog::cyclic_group(3), 4).relations.size(), 212u);
}

TEST(AlterEgo, PartialRejectsIncompatible) {
  const auto Z2 = catalog::cyclic_group(2);
  EXPECT_THROW(alter_ego_from(Z2, {Relation::from_flat(1, 2, {1})}), InputError);
  EXPECT_TRUE(alter_ego_from(Z2, {Relation::from_flat(1, 2, {0})}).partial);
}

TEST(Dual, Z2Examples) {
  const auto Z2 = catalog::cyclic_group(2);
  const auto ae = build_alter_ego(Z2, 4);
  const auto P1 = power_algebra(Z2, 1), P2 = power_algebra(Z2, 2);
  const auto zero = dual_of(SubalgebraWitness(P1, {0}), ae);
  const auto one = dual_of(SubalgebraWitness(P1, {0, 1}), ae);
  const auto two = dual_of(SubalgebraWitness(P2, {0, 1, 2, 3}), ae);
  EXPECT_EQ(one.homs.size(), 2u);
  EXPECT_EQ(two.homs.size(), 4u);
  EXPECT_EQ(double_dual(zero, ae).size(), 1u);
  EXPECT_EQ(double_dual(one, ae).size(), 2u);
  EXPECT_EQ(double_dual(two, ae).size(), 4u);
  EXPECT_EQ(double_dual_oracle(two, ae), 4u);
}

TEST(Dual, SearchMatchesCandidateFilter) {
  for (Element n : {2u, 3u}) {
    const auto A = catalog::cyclic_group(n);
    const auto ae = build_alter_ego(A, 2);
    for (int k = 1; k <= 2; ++k) {
      const auto P = power_algebra(A, k);
      for (const auto& carrier : subuniverse_lattice(P)) {
        const auto D = dual_of(SubalgebraWitness(P, carrier), ae);
        EXPECT_EQ(double_dual(D, ae).size(), double_dual_oracle(D, ae));
      }
    }
  }
}

TEST(Duality, Z2AndZ3UpToSquares) {
  for (Element n : {2u, 3u}) {
    const auto ae = build_alter_ego(catalog::cyclic_group(n), 4);
    const auto r = verify_duality(ae, 2);
    EXPECT_TRUE(r.pass()) << n;
    for (const auto& b : r.subalgebras) {
      EXPECT_TRUE(b.injective);
      EXPECT_EQ(b.double_dual, b.size_b);
      EXPECT_FALSE(b.missing);
    }
  }
}

TEST(Duality, DiagonalOnlyFails) {
  const auto Z2 = catalog::cyclic_group(2);
  const auto ae = alter_ego_from(Z2, {Relation::from_flat(2, 2, {0, 0, 1, 1})});
  const auto r = verify_duality(ae, 2);
  EXPECT_FALSE(r.pass());
  bool some_missing = false;
  for (const auto& b : r.subalgebras) {
    EXPECT_TRUE(b.injective);
    some_missing = some_missing || b.missing.has_value();
  }
  EXPECT_TRUE(some_missing);
}

TEST(Duality, MoreRelationsNeverEnlargeTheDual) {
  const auto Z3 = catalog::cyclic_group(3);
  const auto all = build_alter_ego(Z3, 2).relations;
  std::vector<Relation> some;
  std::vector<std::size_t> prev;
  for (const auto& R : all) {
    some.push_back(R);
    const auto ae = alter_ego_from(Z3, some);
    const auto r = verify_duality(ae, 2);
    std::vector<std::size_t> sizes;
    for (const auto& b : r.subalgebras) sizes.push_back(b.double_dual);
    if (!prev.empty())
      for (std::size_t i = 0; i < sizes.size(); ++i) EXPECT_LE(sizes[i], prev[i]);
    prev = sizes;
  }
}

TEST(Duality, SingletonHasOnePoint) {
  const auto Z3 = catalog::cyclic_group(3);
  const auto r = verify_duality(build_alter_ego(Z3, 4), 2);
  for (const auto& b : r.subalgebras)
    if (b.size_b == 1) EXPECT_EQ(b.double_dual, 1u);
}

#include "adual/affine.hpp"
#include "adual/entailment.hpp"

TEST(Duality, ConsistentWithEntailment) {
  const auto Z2 = catalog::cyclic_group(2);
  const auto t = *find_affine_term(Z2);
  const auto ae = build_alter_ego(Z2, 4);
  const auto elim = eliminate_t(t, 4);
  bool all_certified = true;
  for (int n = 1; n <= 2; ++n)
    for (const auto& R : enumerate_subuniverses(power_algebra(Z2, n))) {
      ReduceOptions o;
      o.premise_arity = 4;
      o.force_pipeline = true;
      const auto res = reduce_to_bounded_arity(Z2, t, R, 1, o);
      const auto cert = derive("R", 2, substitute_premise(res.certificate.root, term_operation(t), elim.root));
      bool from_alter_ego = cert.verify();
      for (const auto& p : cert.premises())
        from_alter_ego = from_alter_ego && std::find(ae.relations.begin(), ae.relations.end(), std::get<Relation>(p)) != ae.relations.end();
      all_certified = all_certified && from_alter_ego;
    }
  ASSERT_TRUE(all_certified);
  EXPECT_TRUE(verify_duality(ae, 2).pass());
}
