#pragma once

#include <optional>
#include <vector>

#include "adual/algebra.hpp"

namespace adual {

/// Cg(a, b): least congruence identifying a and b (union-find over translates).
Congruence principal_congruence(const FiniteAlgebra& A, Element a, Element b);

Congruence join(const FiniteAlgebra& A, const Congruence& x, const Congruence& y);
Congruence meet(const FiniteAlgebra& A, const Congruence& x, const Congruence& y);

/// Con A, closed under joins of principal congruences. Sorted finest first
/// (descending number of classes, then labels).
std::vector<Congruence> enumerate_congruences(const FiniteAlgebra& A,
                                              std::uint64_t budget = kDefaultBudget);

/// The least non-identity congruence when A is subdirectly irreducible.
std::optional<Congruence> monolith(const FiniteAlgebra& A);
bool is_subdirectly_irreducible(const FiniteAlgebra& A);

struct Quotient {
  FiniteAlgebra algebra;
  Homomorphism projection;
};

/// A/θ on class identifiers 0..m-1 with the canonical projection.
Quotient quotient_algebra(const FiniteAlgebra& A, const Congruence& theta);

/// The kernel partition of a map.
std::vector<Element> kernel_labels(std::span<const Element> map);

}  // namespace adual
