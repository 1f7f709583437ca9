#include <gtest/gtest.h>

#include <random>

#include "adual/affine.hpp"
#include "adual/catalog.hpp"
#include "adual/errors.hpp"
#include "adual/factorize.hpp"
#include "adual/hom_groups.hpp"
#include "adual/homs.hpp"
#include "oracles.hpp"

using namespace adual;

namespace {

// g(p_1(x), ..., p_{N+1}(x)) with p_j(x) = Σ c_i x_i mod n evaluated in plain integers.
Element compose_oracle(const Factorization& F, Element n, const Tuple& x) {
  Tuple y;
  for (const auto& p : F.terms) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += p.coeffs[i] * static_cast<std::int64_t>(x[i]);
    y.push_back(static_cast<Element>(((s % n) + n) % n));
  }
  return F.g(static_cast<Element>(encode_tuple(y, n)));
}

Factorization factor(const FiniteAlgebra& A, const FiniteAlgebra& S, const Homomorphism& f, int N = 0) {
  const auto tA = *find_affine_term(A), tS = *find_affine_term(S);
  const auto H = build_hk_group(A, S, tA, tS, diagonal_restriction(A, f));
  FactorOptions o;
  o.N = N;
  return factor_morphism(H, generating_family(H.group), f, o);
}

}  // namespace

TEST(Factorize, SumOfFiveOverZ2) {
  const auto Z2 = catalog::cyclic_group(2);
  const auto P = power_algebra(Z2, 5);
  std::vector<Element> m(P.size());
  for (Element c = 0; c < P.size(); ++c) m[c] = static_cast<Element>(__builtin_popcount(c) % 2);
  const auto f = Homomorphism::verified(P, Z2, m);
  const auto F = factor(Z2, Z2, f, 1);
  ASSERT_EQ(F.terms.size(), 2u);
  // Coefficients are only determined modulo 2.
  for (auto c : F.terms[0].coeffs) EXPECT_EQ(((c % 2) + 2) % 2, 1);
  EXPECT_EQ(F.terms[1], AffineTerm::projection(5, 0));
  EXPECT_EQ(std::vector<Element>(F.g.map().begin(), F.g.map().end()), (std::vector<Element>{0, 0, 1, 1}));
  EXPECT_FALSE(F.identity_sampled);
  EXPECT_EQ(F.identity_checked, 32u);
  for (Element c = 0; c < P.size(); ++c) EXPECT_EQ(compose_oracle(F, 2, decode_tuple(c, 2, 5)), m[c]);
}

TEST(Factorize, ProjectionOverZ4) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto P = power_algebra(Z4, 3);
  std::vector<Element> m(P.size());
  for (Element c = 0; c < P.size(); ++c) m[c] = c / 16;
  const auto f = Homomorphism::verified(P, Z4, m);
  for (int N : {1, 2, 3}) {
    const auto F = factor(Z4, Z4, f, N);
    EXPECT_EQ(static_cast<int>(F.terms.size()), N + 1);
    for (Element c = 0; c < P.size(); ++c) EXPECT_EQ(compose_oracle(F, 4, decode_tuple(c, 4, 3)), m[c]);
  }
}

TEST(Factorize, EveryHomZ2ToZ2UpToFourthPower) {
  const auto Z2 = catalog::cyclic_group(2);
  for (int n = 1; n <= 4; ++n) {
    const auto P = power_algebra(Z2, n);
    for (const auto& f : enumerate_homs(P, Z2)) {
      const auto F = factor(Z2, Z2, f);
      for (Element c = 0; c < P.size(); ++c) EXPECT_EQ(compose_oracle(F, 2, decode_tuple(c, 2, n)), f(c));
    }
  }
}

TEST(Factorize, SampledZ4Shapes) {
  const auto Z2 = catalog::cyclic_group(2), Z4 = catalog::cyclic_group(4);
  std::mt19937_64 rng(20240601);
  for (const auto& [A, S] : {std::pair{Z4, Z4}, std::pair{Z4, Z2}, std::pair{Z2, Z4}}) {
    for (int n = 1; n <= 4; ++n) {
      const auto P = power_algebra(A, n);
      const auto homs = enumerate_homs(P, S);
      for (int s = 0; s < 100; ++s) {
        const auto& f = homs[rng() % homs.size()];
        const auto F = factor(A, S, f);
        for (Element c = 0; c < P.size(); ++c) ASSERT_EQ(compose_oracle(F, A.size(), decode_tuple(c, A.size(), n)), f(c));
      }
    }
  }
}

TEST(Factorize, RejectsTooFewGenerators) {
  const auto K = catalog::direct_product(catalog::cyclic_group(2), catalog::cyclic_group(2));
  const auto P = power_algebra(K, 2);
  std::vector<Element> m(P.size());
  for (Element c = 0; c < P.size(); ++c) m[c] = c / 4;
  const auto f = Homomorphism::verified(P, K, m);
  // H is End(K), 16 elements of order 2.
  EXPECT_THROW(factor(K, K, f, 3), InputError);
  const auto F = factor(K, K, f);
  EXPECT_EQ(F.N, 4);
}

TEST(Decompose, TwiceTheGenerator) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto t = *find_affine_term(Z4);
  const auto H = build_hk_group(Z4, Z4, t, t, Homomorphism::verified(Z4, Z4, {0, 1, 2, 3}));
  const auto F = generating_family(H.group);
  ASSERT_EQ(F.size(), 1u);
  const auto h = static_cast<std::size_t>(F.generators[0]);
  const auto twice = H.group.add(static_cast<Element>(h), static_cast<Element>(h));
  EXPECT_EQ(decompose_in_group(H, F, twice), (std::vector<std::int64_t>{2}));
}

TEST(Diagonal, Restriction) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto P = power_algebra(Z4, 2);
  std::vector<Element> m(P.size());
  for (Element c = 0; c < P.size(); ++c) m[c] = (c / 4 + 2 * (c % 4)) % 4;
  const auto k = diagonal_restriction(Z4, Homomorphism::verified(P, Z4, m));
  EXPECT_EQ(std::vector<Element>(k.map().begin(), k.map().end()), (std::vector<Element>{0, 3, 2, 1}));
}
