#pragma once

#include "adual/algebra.hpp"

namespace adual::catalog {

/// Z_n in the group signature {+ (2), - (1), 0 (0)}.
FiniteAlgebra cyclic_group(Element n);

/// Direct product A×B of algebras of equal signature; (a,b) is encoded a·|B| + b.
FiniteAlgebra direct_product(const FiniteAlgebra& A, const FiniteAlgebra& B);

/// The symmetric group on three points in the signature {* (2), inv (1), e (0)}.
/// Permutations are numbered in lexicographic order of their images; 0 is the identity.
FiniteAlgebra symmetric_group_s3();

/// ⟨{0,1}; ∧⟩.
FiniteAlgebra two_element_semilattice();

}  // namespace adual::catalog
