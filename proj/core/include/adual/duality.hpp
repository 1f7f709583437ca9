#pragma once

// Alter egos built from compatible relations, dual structures B*, and the
// evaluation maps e_B checked on subalgebras of small powers.

#include <cstdint>
#include <optional>
#include <vector>

#include "adual/algebra.hpp"
#include "adual/subcong.hpp"

namespace adual {

/// max(4, 1 + max alpha_i^3) for |A| = Π p_i^alpha_i. |A| = 1 gives 4.
int arity_bound(std::uint64_t size);

struct AlterEgo {
  FiniteAlgebra base;
  std::vector<Relation> relations;
  bool partial = false;  // relations supplied by the caller, not all N-ary ones
};

/// All N-ary compatible relations of A (the subuniverses of A^N).
AlterEgo build_alter_ego(const FiniteAlgebra& A, int N, std::uint64_t budget = kDefaultBudget);

/// A caller-chosen relation set; each relation is checked for compatibility.
AlterEgo alter_ego_from(const FiniteAlgebra& A, std::vector<Relation> relations);

struct DualStructure {
  SubalgebraWitness B;
  FiniteAlgebra algebra;               // B renumbered 0..|B|-1 in carrier order
  std::vector<Homomorphism> homs;      // Hom(B, A), sorted
  /// Per alter-ego relation R of arity r: r-tuples of hom indices (f_1..f_r)
  /// with (f_1(b),..,f_r(b)) ∈ R for every b ∈ B, flattened.
  std::vector<std::vector<std::uint32_t>> lifted;
};

DualStructure dual_of(const SubalgebraWitness& B, const AlterEgo& alter_ego, std::uint64_t budget = kDefaultBudget);

/// Maps φ: Hom(B,A) → A preserving every lifted relation, sorted. Continuity is
/// automatic for finite discrete structures. `budget` caps the search nodes visited.
std::vector<std::vector<Element>> double_dual(const DualStructure& D, const AlterEgo& alter_ego,
                                              std::uint64_t budget = kDefaultBudget);

struct EvaluationReport {
  int k = 1;
  std::vector<Element> carrier;  // B as codes of A^k
  std::size_t size_b = 0;
  std::size_t homs = 0;
  std::size_t double_dual = 0;
  bool injective = false;
  bool image_inside = false;     // e_B(x) preserves the lifted relations
  bool bijective = false;
  std::optional<std::vector<Element>> missing;  // a φ outside the image of e_B
};

struct DualityReport {
  std::vector<EvaluationReport> subalgebras;
  bool pass() const;
};

/// e_B for every subalgebra B of A^k, 1 <= k <= k_max.
DualityReport verify_duality(const AlterEgo& alter_ego, int k_max, std::uint64_t budget = kDefaultBudget);

}  // namespace adual
