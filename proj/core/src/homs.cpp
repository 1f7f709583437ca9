#include "adual/homs.hpp"

#include <algorithm>
#include <functional>

#include "adual/errors.hpp"
#include "adual/subuniverse.hpp"

namespace adual {

namespace {

// Extends `plan` so that it covers the closure of the current elements plus `g`.
void extend_plan(const FiniteAlgebra& A, GenerationPlan& plan, std::vector<Element>& elems,
                 std::vector<char>& member, std::optional<Element> g) {
  const std::size_t processed = elems.size();
  if (g && !member[*g]) {
    member[*g] = 1;
    elems.push_back(*g);
    plan.generators.push_back(*g);
  }
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    if (A.arity(op) != 0) continue;
    const Element v = A.apply(op, std::span<const Element>{});
    if (!member[v]) {
      member[v] = 1;
      elems.push_back(v);
      plan.steps.push_back({v, op, {}});
    }
  }
  std::vector<Element> args;
  // Indices below `processed` are already closed among themselves.
  for (std::size_t p = processed; p < elems.size(); ++p) {
    for (std::size_t op = 0; op < A.num_operations(); ++op) {
      const int k = A.arity(op);
      if (k == 0) continue;
      for_each_tuple_touching(p, k, [&](std::span<const std::size_t> idx) {
        args.resize(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) args[i] = elems[idx[i]];
        const Element v = A.apply(op, args);
        if (!member[v]) {
          member[v] = 1;
          elems.push_back(v);
          plan.steps.push_back({v, op, args});
        }
        return true;
      });
    }
  }
}

}  // namespace

GenerationPlan generation_plan(const FiniteAlgebra& A) {
  GenerationPlan plan;
  std::vector<char> member(A.size(), 0);
  std::vector<Element> elems;
  extend_plan(A, plan, elems, member, std::nullopt);
  for (Element x = 0; x < A.size(); ++x)
    if (!member[x]) extend_plan(A, plan, elems, member, x);
  return plan;
}

GenerationPlan generation_plan(const FiniteAlgebra& A, std::span<const Element> generators) {
  GenerationPlan plan;
  std::vector<char> member(A.size(), 0);
  std::vector<Element> elems;
  extend_plan(A, plan, elems, member, std::nullopt);
  for (Element g : generators) {
    if (g >= A.size()) throw InputError("generator " + std::to_string(g) + " outside universe");
    extend_plan(A, plan, elems, member, g);
  }
  if (elems.size() != A.size())
    throw InputError("supplied generators span " + std::to_string(elems.size()) + " of " +
                     std::to_string(A.size()) + " elements");
  return plan;
}

namespace {

void for_each_hom(const FiniteAlgebra& A, const FiniteAlgebra& B, const GenerationPlan& plan,
                  std::uint64_t budget, const std::function<void(std::vector<Element>&)>& emit) {
  if (!A.same_signature(B))
    throw InputError("hom " + A.name() + " -> " + B.name() + ": signatures differ");
  const auto candidates = checked_pow(B.size(), plan.generators.size(), budget);
  if (!candidates)
    throw BudgetExceeded("Hom(" + A.name() + ", " + B.name() + "): " + std::to_string(B.size()) + "^" +
                             std::to_string(plan.generators.size()) +
                             " generator images exceed the budget; supply a smaller generating set",
                         saturating_pow(B.size(), plan.generators.size()));
  std::vector<Element> map(A.size(), 0);
  std::vector<Element> args;
  for_each_tuple(B.size(), static_cast<int>(plan.generators.size()), [&](std::span<const Element> images) {
    for (std::size_t i = 0; i < images.size(); ++i) map[plan.generators[i]] = images[i];
    for (const auto& s : plan.steps) {
      args.resize(s.args.size());
      for (std::size_t i = 0; i < s.args.size(); ++i) args[i] = map[s.args[i]];
      map[s.element] = B.apply(s.op, args);
    }
    if (is_homomorphism(A, B, map)) emit(map);
    return true;
  });
}

}  // namespace

std::vector<Homomorphism> enumerate_homs(const FiniteAlgebra& A, const FiniteAlgebra& B,
                                         const GenerationPlan& plan, std::uint64_t budget) {
  std::vector<std::vector<Element>> maps;
  for_each_hom(A, B, plan, budget, [&](std::vector<Element>& m) { maps.push_back(m); });
  std::sort(maps.begin(), maps.end());
  std::vector<Homomorphism> out;
  out.reserve(maps.size());
  for (auto& m : maps) out.push_back(Homomorphism::verified(A, B, std::move(m)));
  return out;
}

std::vector<Homomorphism> enumerate_homs(const FiniteAlgebra& A, const FiniteAlgebra& B,
                                         std::uint64_t budget) {
  return enumerate_homs(A, B, generation_plan(A), budget);
}

std::uint64_t count_homs(const FiniteAlgebra& A, const FiniteAlgebra& B, std::uint64_t budget) {
  std::uint64_t n = 0;
  for_each_hom(A, B, generation_plan(A), budget, [&](std::vector<Element>&) { ++n; });
  return n;
}

}  // namespace adual
