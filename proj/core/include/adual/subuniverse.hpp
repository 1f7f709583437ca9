#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "adual/algebra.hpp"

namespace adual {

/// Least subuniverse containing `seed`, sorted. An empty seed is allowed only
/// when A has constants (then the constants generate).
std::vector<Element> generated_subuniverse(const FiniteAlgebra& A, std::span<const Element> seed);

/// Closure of closed ∪ extra, where `closed` is already a sorted subuniverse.
/// Only argument tuples touching new elements are evaluated.
std::vector<Element> extend_subuniverse(const FiniteAlgebra& A, std::span<const Element> closed,
                                        std::span<const Element> extra);

bool is_subuniverse(const FiniteAlgebra& A, std::span<const Element> carrier);

/// All nonempty subuniverses as sorted element sets, ordered by (cardinality, lexicographic).
std::vector<std::vector<Element>> subuniverse_lattice(const FiniteAlgebra& A,
                                                      std::uint64_t budget = kDefaultBudget);

/// Same as subuniverse_lattice() decoded to relations. When A is a power B^n the
/// relations are n-ary over B; otherwise unary over A.
std::vector<Relation> enumerate_subuniverses(const FiniteAlgebra& A, std::uint64_t budget = kDefaultBudget);

/// Converts between carriers of a power algebra and relations over its base.
Relation carrier_to_relation(const FiniteAlgebra& A, std::span<const Element> carrier);
std::vector<Element> relation_to_carrier(const FiniteAlgebra& A, const Relation& R);

/// Fast membership for a relation: a bitmap over codes when the code space is
/// small, binary search otherwise. Holds a reference to `R`.
class RelationMembership {
 public:
  explicit RelationMembership(const Relation& R);
  bool contains(std::span<const Element> t) const;

 private:
  const Relation* relation_;
  std::vector<bool> bitmap_;
};

/// Exhaustive test that R is closed under every operation of A acting
/// coordinatewise, i.e. R is a subuniverse of A^arity. Throws InputError on a
/// universe mismatch and BudgetExceeded when the |R|^k argument combinations
/// exceed `budget` (default 10^8).
bool is_compatible_relation(const FiniteAlgebra& A, const Relation& R,
                            std::uint64_t budget = 100'000'000);

/// Randomized variant for large relations; fixed seed.
bool is_compatible_relation_sampled(const FiniteAlgebra& A, const Relation& R, std::size_t samples,
                                    std::uint64_t seed);

/// Describes an operation and argument rows witnessing incompatibility, or "".
std::string incompatibility_witness(const FiniteAlgebra& A, const Relation& R);

/// Subuniverse of A^width generated by explicit tuples, closed coordinatewise.
/// Elements are stored flat; no universe is materialized, so the width may be
/// large (the ternary term clone lives in A^(|A|^3)).
class SubpowerClosure {
 public:
  /// How an element was produced: `op` < 0 marks a seed, otherwise the
  /// operation index applied to the elements listed in `args`.
  struct Step {
    std::int32_t op = -1;
    std::vector<std::uint32_t> args;
  };

  SubpowerClosure(FiniteAlgebra A, std::size_t width, std::uint64_t max_elements);

  /// Adds a seed; returns its index (existing index if already present).
  std::size_t add(std::span<const Element> v);

  /// Closes under all operations. `on_new(i)` is called for every element
  /// produced by an operation; returning false stops the closure early.
  /// Returns false iff stopped early. Throws BudgetExceeded past max_elements.
  bool run(const std::function<bool(std::size_t)>& on_new = {});

  std::size_t size() const { return steps_.size(); }
  std::size_t width() const { return width_; }
  std::span<const Element> element(std::size_t i) const { return {data_.data() + i * width_, width_}; }
  const Step& step(std::size_t i) const { return steps_[i]; }
  const FiniteAlgebra& algebra() const { return algebra_; }

 private:
  struct Hash {
    const SubpowerClosure* self;
    std::size_t operator()(std::uint32_t idx) const;
  };
  struct Eq {
    const SubpowerClosure* self;
    bool operator()(std::uint32_t a, std::uint32_t b) const;
  };
  static constexpr std::uint32_t kScratch = UINT32_MAX;

  std::span<const Element> view(std::uint32_t idx) const;
  /// Inserts the scratch vector; returns (index, inserted).
  std::pair<std::size_t, bool> insert_scratch(std::int32_t op, std::span<const std::size_t> args);

  FiniteAlgebra algebra_;
  std::size_t width_;
  std::uint64_t max_elements_;
  std::vector<Element> data_;
  std::vector<Element> scratch_;
  std::vector<Step> steps_;
  std::unordered_set<std::uint32_t, Hash, Eq> index_;
  std::size_t processed_ = 0;
  bool constants_added_ = false;
};

/// Visits every index tuple over [0, p] that contains p at least once, each
/// exactly once. These are the argument tuples "new" at step p of a semi-naive closure.
template <class Visit>
bool for_each_tuple_touching(std::size_t p, int arity, Visit&& visit) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(arity));
  for (int first = 0; first < arity; ++first) {
    // positions < first range over [0,p), position first is p, later ones over [0,p]
    const auto f = static_cast<std::size_t>(first);
    if (f > 0 && p == 0) continue;
    std::fill(idx.begin(), idx.end(), std::size_t{0});
    idx[f] = p;
    for (;;) {
      if (!visit(std::span<const std::size_t>(idx))) return false;
      int pos = arity - 1;
      for (; pos >= 0; --pos) {
        const auto u = static_cast<std::size_t>(pos);
        if (u == f) continue;
        const std::size_t limit = u < f ? p : p + 1;
        if (++idx[u] < limit) break;
        idx[u] = 0;
      }
      if (pos < 0) break;
    }
  }
  return true;
}

}  // namespace adual
