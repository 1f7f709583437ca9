#pragma once

#include <cstdint>
#include <vector>

#include "adual/algebra.hpp"

namespace adual {

/// A generating set of an algebra together with a recipe that rebuilds every
/// other element from earlier ones by one basic operation.
struct GenerationPlan {
  struct Step {
    Element element = 0;
    std::size_t op = 0;
    std::vector<Element> args;
  };
  std::vector<Element> generators;
  std::vector<Step> steps;
};

/// Greedy plan: the least element not yet generated becomes the next generator.
GenerationPlan generation_plan(const FiniteAlgebra& A);

/// Plan for a caller-supplied generating set; throws InputError if it does not generate.
GenerationPlan generation_plan(const FiniteAlgebra& A, std::span<const Element> generators);

/// Hom(A, B), sorted by map table. Backtracks over generator images only, so
/// the candidate count is |B|^|generators|; throws BudgetExceeded past `budget`.
std::vector<Homomorphism> enumerate_homs(const FiniteAlgebra& A, const FiniteAlgebra& B,
                                         std::uint64_t budget = kDefaultBudget);
std::vector<Homomorphism> enumerate_homs(const FiniteAlgebra& A, const FiniteAlgebra& B,
                                         const GenerationPlan& plan,
                                         std::uint64_t budget = kDefaultBudget);

/// |Hom(A, B)| without keeping the maps.
std::uint64_t count_homs(const FiniteAlgebra& A, const FiniteAlgebra& B,
                         std::uint64_t budget = kDefaultBudget);

}  // namespace adual
