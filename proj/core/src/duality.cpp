#include "adual/duality.hpp"

#include <algorithm>
#include <functional>

#include "adual/errors.hpp"
#include "adual/hom_groups.hpp"
#include "adual/homs.hpp"
#include "adual/subuniverse.hpp"

namespace adual {

int arity_bound(std::uint64_t size) {
  int m = 0;
  for (auto [p, a] : prime_signature(size).factors) m = std::max(m, a * a * a);
  return std::max(4, 1 + m);
}

AlterEgo build_alter_ego(const FiniteAlgebra& A, int N, std::uint64_t budget) {
  try {
    return AlterEgo{A, enumerate_subuniverses(power_algebra(A, N, budget), budget), false};
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded(std::string(e.what()) + "; supply a relation subset (partial mode)", e.refused());
  }
}

AlterEgo alter_ego_from(const FiniteAlgebra& A, std::vector<Relation> relations) {
  for (const auto& R : relations)
    if (!is_compatible_relation(A, R)) throw InputError("alter-ego relation is not compatible: " + incompatibility_witness(A, R));
  return AlterEgo{A, std::move(relations), true};
}

DualStructure dual_of(const SubalgebraWitness& B, const AlterEgo& alter_ego, std::uint64_t budget) {
  const FiniteAlgebra& A = alter_ego.base;
  auto Balg = subalgebra(B.ambient(), B.carrier());
  auto homs = enumerate_homs(Balg, A, budget);
  DualStructure D{B, Balg, std::move(homs), {}};
  const auto h = static_cast<Element>(D.homs.size());
  std::vector<Element> image;
  for (const auto& R : alter_ego.relations) {
    RelationMembership member(R);
    const int r = R.arity();
    const auto count = checked_pow(h, static_cast<std::uint64_t>(r), budget * 16);
    if (!count) throw BudgetExceeded("lifting a relation of arity " + std::to_string(r) + " over " + std::to_string(h) + " homs",
                                     saturating_pow(h, static_cast<std::uint64_t>(r)));
    std::vector<std::uint32_t> lifted;
    image.resize(static_cast<std::size_t>(r));
    for_each_tuple(h, r, [&](std::span<const Element> fs) {
      for (Element b = 0; b < Balg.size(); ++b) {
        for (std::size_t i = 0; i < fs.size(); ++i) image[i] = D.homs[fs[i]](b);
        if (!member.contains(image)) return true;
      }
      lifted.insert(lifted.end(), fs.begin(), fs.end());
      return true;
    });
    D.lifted.push_back(std::move(lifted));
  }
  return D;
}

std::vector<std::vector<Element>> double_dual(const DualStructure& D, const AlterEgo& alter_ego, std::uint64_t budget) {
  const FiniteAlgebra& A = alter_ego.base;
  const auto h = D.homs.size();
  // Constraint (relation, offset of a lifted tuple), filed under its largest hom index.
  struct Constraint {
    std::size_t relation;
    std::size_t offset;
  };
  std::vector<std::vector<Constraint>> by_last(h);
  for (std::size_t ri = 0; ri < alter_ego.relations.size(); ++ri) {
    const auto r = static_cast<std::size_t>(alter_ego.relations[ri].arity());
    const auto& L = D.lifted[ri];
    for (std::size_t off = 0; off < L.size(); off += r) {
      const auto last = *std::max_element(L.begin() + static_cast<std::ptrdiff_t>(off), L.begin() + static_cast<std::ptrdiff_t>(off + r));
      by_last[last].push_back({ri, off});
    }
  }
  std::vector<RelationMembership> members;
  for (const auto& R : alter_ego.relations) members.emplace_back(R);

  std::vector<std::vector<Element>> out;
  std::vector<Element> phi(h, 0);
  std::vector<Element> image;
  auto consistent = [&](std::size_t pos) {
    for (const auto& c : by_last[pos]) {
      const auto r = static_cast<std::size_t>(alter_ego.relations[c.relation].arity());
      image.resize(r);
      for (std::size_t i = 0; i < r; ++i) image[i] = phi[D.lifted[c.relation][c.offset + i]];
      if (!members[c.relation].contains(image)) return false;
    }
    return true;
  };
  // Depth-first in lexicographic order, so the output is already sorted.
  std::uint64_t nodes = 0;
  std::function<void(std::size_t)> search = [&](std::size_t pos) {
    if (++nodes > budget)
      throw BudgetExceeded("double dual search over " + std::to_string(A.size()) + "^" + std::to_string(h) + " maps",
                           saturating_pow(A.size(), h));
    if (pos == h) {
      out.push_back(phi);
      return;
    }
    for (Element v = 0; v < A.size(); ++v) {
      phi[pos] = v;
      if (consistent(pos)) search(pos + 1);
    }
  };
  search(0);
  return out;
}

bool DualityReport::pass() const {
  return std::all_of(subalgebras.begin(), subalgebras.end(),
                     [](const EvaluationReport& r) { return r.injective && r.image_inside && r.bijective; });
}

DualityReport verify_duality(const AlterEgo& alter_ego, int k_max, std::uint64_t budget) {
  const FiniteAlgebra& A = alter_ego.base;
  DualityReport report;
  for (int k = 1; k <= k_max; ++k) {
    const auto Ak = power_algebra(A, k, budget);
    for (auto& carrier : subuniverse_lattice(Ak, budget)) {
      const SubalgebraWitness B(Ak, carrier);
      const auto D = dual_of(B, alter_ego, budget);
      const auto dd = double_dual(D, alter_ego, budget);
      EvaluationReport r;
      r.k = k;
      r.carrier = carrier;
      r.size_b = carrier.size();
      r.homs = D.homs.size();
      r.double_dual = dd.size();
      std::vector<std::vector<Element>> evals;
      for (Element b = 0; b < D.algebra.size(); ++b) {
        std::vector<Element> e(D.homs.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = D.homs[i](b);
        evals.push_back(std::move(e));
      }
      auto sorted = evals;
      std::sort(sorted.begin(), sorted.end());
      r.injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
      r.image_inside = std::all_of(sorted.begin(), sorted.end(),
                                   [&](const auto& e) { return std::binary_search(dd.begin(), dd.end(), e); });
      r.bijective = r.injective && r.image_inside && dd.size() == r.size_b;
      for (const auto& phi : dd)
        if (!std::binary_search(sorted.begin(), sorted.end(), phi)) {
          r.missing = phi;
          break;
        }
      report.subalgebras.push_back(std::move(r));
    }
  }
  return report;
}

}  // namespace adual
