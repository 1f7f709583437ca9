#pragma once

// Counting homomorphisms and the groups H_k(A^2, S) of binary morphisms
// agreeing with k on the diagonal.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "adual/affine.hpp"
#include "adual/algebra.hpp"
#include "adual/report.hpp"

namespace adual {

struct PrimeSignature {
  /// (p, alpha) with p increasing.
  std::vector<std::pair<std::uint64_t, int>> factors;

  std::uint64_t value() const;
  int exponent_of(std::uint64_t p) const;
  int max_exponent() const;
  friend bool operator==(const PrimeSignature&, const PrimeSignature&) = default;
};

/// Trial division. prime_signature(1) has no factors.
PrimeSignature prime_signature(std::uint64_t n);

enum class HomCountMode { Group, Abelian };

/// Product over primes of p^(alpha*beta) (group) or p^((alpha+1)*beta) (abelian),
/// alpha from |A| and beta from |B|. Throws InputError past 64 bits.
std::uint64_t hom_count_bound(std::uint64_t size_a, std::uint64_t size_b, HomCountMode mode);

/// |Hom(A,B)| divides hom_count_bound. In abelian mode the count is also taken
/// for the affine reducts ⟨A;t⟩ → ⟨B;t⟩ and must divide the same bound.
CheckReport hom_divisibility_check(const FiniteAlgebra& A, const FiniteAlgebra& B, HomCountMode mode,
                                   std::uint64_t budget = kDefaultBudget);

/// Generators h_1..h_N of a finite Abelian group with an expression for every element.
struct GeneratingFamily {
  std::vector<Element> generators;
  std::vector<std::uint64_t> orders;                  // order of each generator
  std::vector<std::vector<std::int64_t>> expressions;  // per element, coefficients mod orders

  std::size_t size() const { return generators.size(); }
};

/// Sylow-wise greedy choice (largest order outside the current span), merged
/// across primes so that N <= max alpha. Expressions by breadth-first search
/// over the Cayley graph. Throws InvariantError if the size bound fails.
GeneratingFamily generating_family(const GroupStructure& G);

/// Σ u_j h_j in G.
Element evaluate_expression(const GroupStructure& G, const GeneratingFamily& F,
                            std::span<const std::int64_t> coeffs);

/// H_k(A^2, S) with the group +^{k̄}. Element i is the morphism elements[i]: A^2 → S.
struct HkGroup {
  FiniteAlgebra A;
  FiniteAlgebra S;
  FiniteAlgebra square;  // A^2
  TernaryTermOperation tA;
  TernaryTermOperation tS;
  Homomorphism k;
  std::vector<Homomorphism> elements;  // sorted by map
  std::size_t neutral = 0;             // index of k̄
  GroupStructure group;                // on indices into `elements`

  std::size_t index_of(std::span<const Element> map) const;
};

/// Builds H_k(A^2, S). Throws InputError when k is not a morphism A → S.
HkGroup build_hk_group(const FiniteAlgebra& A, const FiniteAlgebra& S, const TernaryTermOperation& tA,
                       const TernaryTermOperation& tS, const Homomorphism& k,
                       std::uint64_t budget = kDefaultBudget);

/// f ↦ f_a is an injective group morphism into Hom(⟨A;+^a⟩, ⟨S;+^{k(a)}⟩) with group +^k.
CheckReport check_psi_embedding(const HkGroup& H, Element a = 0, std::uint64_t budget = kDefaultBudget);

/// f ↦ t(f, k̄, j̄) is a group isomorphism H_k → H_j with inverse f ↦ t(f, j̄, k̄).
CheckReport check_phi_isomorphism(const HkGroup& Hk, const HkGroup& Hj);

/// |H| divides Π p^(alpha*beta) and the generating family has at most max(alpha*beta) members.
CheckReport check_hk_bounds(const HkGroup& H, const GeneratingFamily& F);

/// Π p^(alpha^2).
std::uint64_t cardinal_si_bound(std::uint64_t size);

/// |S| divides |Hom(⟨A;+⟩, ⟨A;+⟩)| with + = group_from_affine(tA, 0).
CheckReport kearnes_divisibility_check(const FiniteAlgebra& A, const TernaryTermOperation& tA,
                                       const FiniteAlgebra& S, std::uint64_t budget = kDefaultBudget);

}  // namespace adual
