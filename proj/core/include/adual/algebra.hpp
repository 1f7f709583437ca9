#pragma once

// Finite algebras, powers, relations, congruences and homomorphisms.
//
// Universes are always {0, ..., n-1}. Elements of a power A^n are encoded as
// base-|A| integers with the first coordinate most significant, so the numeric
// order of codes coincides with the lexicographic order of tuples.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adual {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

inline constexpr std::uint64_t kDefaultBudget = 1'000'000;

/// base^exp, or nullopt when it exceeds `limit`.
std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp,
                                         std::uint64_t limit = UINT64_MAX);

/// base^exp saturating at UINT64_MAX, for error messages.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp);

std::uint64_t encode_tuple(std::span<const Element> coords, Element base);
Tuple decode_tuple(std::uint64_t code, Element base, int arity);

struct Operation {
  std::string name;
  int arity = 0;
  /// size^arity entries, arguments in lexicographic order (first most significant).
  std::vector<Element> table;
};

struct OperationSymbol {
  std::string name;
  int arity = 0;
  friend bool operator==(const OperationSymbol&, const OperationSymbol&) = default;
};

/// An immutable finite algebra. Copies share the underlying tables.
///
/// Power algebras built by power_algebra() keep a reference to their base and
/// evaluate operations coordinatewise; tables small enough are materialized.
class FiniteAlgebra {
 public:
  FiniteAlgebra(std::string name, Element size, std::vector<Operation> ops);

  const std::string& name() const;
  Element size() const;
  std::size_t num_operations() const;
  const OperationSymbol& symbol(std::size_t op) const;
  int arity(std::size_t op) const;
  int max_arity() const;
  std::optional<std::size_t> find_operation(std::string_view name) const;
  bool has_constants() const;

  Element apply(std::size_t op, std::span<const Element> args) const;
  Element apply(std::size_t op, std::initializer_list<Element> args) const {
    return apply(op, std::span<const Element>(args.begin(), args.size()));
  }

  /// Full table of an operation (computed on demand for lazy power operations).
  std::vector<Element> table(std::size_t op) const;

  bool same_signature(const FiniteAlgebra& other) const;
  FiniteAlgebra renamed(std::string name) const;

  bool is_power() const;
  /// Exponent n when this algebra is B^n built by power_algebra(), else 1.
  int power_exponent() const;
  /// Universe size of the base when this is a power, else size().
  Element power_base_size() const;
  /// The base algebra of a power; *this otherwise.
  FiniteAlgebra power_base() const;

 private:
  struct Impl;
  explicit FiniteAlgebra(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend FiniteAlgebra power_algebra(const FiniteAlgebra&, int, std::uint64_t);
  friend FiniteAlgebra subalgebra(const FiniteAlgebra&, std::span<const Element>);
};

/// A^n with coordinatewise operations; throws BudgetExceeded when |A|^n > budget.
FiniteAlgebra power_algebra(const FiniteAlgebra& A, int n, std::uint64_t budget = kDefaultBudget);

/// The subalgebra on a closed carrier, renumbered 0..|carrier|-1 in carrier order.
/// Throws InvariantError when the carrier is not closed.
FiniteAlgebra subalgebra(const FiniteAlgebra& A, std::span<const Element> carrier);

/// A finite set of k-tuples over {0..base_size-1}, kept sorted and duplicate free.
class Relation {
 public:
  Relation(int arity, Element base_size, std::vector<Tuple> tuples);
  /// From codes of A^arity (any order, duplicates allowed).
  static Relation from_codes(int arity, Element base_size, std::span<const std::uint64_t> codes);
  /// From a flat row-major buffer of tuples (any order).
  static Relation from_flat(int arity, Element base_size, std::vector<Element> flat);

  int arity() const { return arity_; }
  Element base_size() const { return base_size_; }
  std::size_t size() const { return data_.size() / static_cast<std::size_t>(arity_); }

  std::span<const Element> tuple(std::size_t i) const {
    return {data_.data() + i * static_cast<std::size_t>(arity_), static_cast<std::size_t>(arity_)};
  }
  std::vector<Tuple> tuples() const;
  /// Sorted codes in A^arity; requires base_size^arity to fit 64 bits.
  std::vector<std::uint64_t> codes() const;
  const std::vector<Element>& flat() const { return data_; }

  bool contains(std::span<const Element> t) const;
  bool is_subset_of(const Relation& other) const;

  friend bool operator==(const Relation&, const Relation&) = default;
  friend std::strong_ordering operator<=>(const Relation& a, const Relation& b);

 private:
  Relation() = default;
  void canonicalize();

  int arity_ = 1;
  Element base_size_ = 1;
  std::vector<Element> data_;
};

/// A partition of the universe preserved by every operation of its algebra.
class Congruence {
 public:
  /// Canonicalizes the labels (first-appearance numbering) and checks compatibility.
  static Congruence verified(const FiniteAlgebra& A, std::vector<Element> labels);
  static Congruence identity(const FiniteAlgebra& A);
  static Congruence full(const FiniteAlgebra& A);

  Element base_size() const { return static_cast<Element>(class_of_.size()); }
  Element num_classes() const { return num_classes_; }
  Element class_of(Element x) const { return class_of_[x]; }
  std::span<const Element> labels() const { return class_of_; }
  bool related(Element x, Element y) const { return class_of_[x] == class_of_[y]; }
  bool is_identity() const { return num_classes_ == base_size(); }
  bool is_full() const { return num_classes_ == 1; }
  /// Containment as sets of pairs: *this ⊆ other.
  bool is_below(const Congruence& other) const;
  std::vector<std::vector<Element>> blocks() const;

  friend bool operator==(const Congruence&, const Congruence&) = default;
  friend auto operator<=>(const Congruence& a, const Congruence& b) {
    return a.class_of_ <=> b.class_of_;
  }

 private:
  Congruence() = default;
  std::vector<Element> class_of_;
  Element num_classes_ = 0;
};

/// Canonical first-appearance relabelling of a partition given as labels.
std::vector<Element> canonical_labels(std::span<const Element> labels, Element* num_classes = nullptr);

/// True iff the partition given by `labels` is compatible with every operation.
bool is_compatible_partition(const FiniteAlgebra& A, std::span<const Element> labels);

/// A map between universes that commutes with every operation.
class Homomorphism {
 public:
  /// Checks the homomorphism property exhaustively; throws InvariantError otherwise.
  static Homomorphism verified(const FiniteAlgebra& domain, const FiniteAlgebra& codomain,
                               std::vector<Element> map);
  /// Checks `samples` random argument tuples per operation with a fixed seed.
  /// Used for maps out of powers too large for the exhaustive check.
  static Homomorphism sampled(const FiniteAlgebra& domain, const FiniteAlgebra& codomain,
                              std::vector<Element> map, std::size_t samples, std::uint64_t seed);

  const FiniteAlgebra& domain() const { return domain_; }
  const FiniteAlgebra& codomain() const { return codomain_; }
  Element operator()(Element x) const { return map_[x]; }
  std::span<const Element> map() const { return map_; }
  bool exhaustively_verified() const { return exhaustive_; }

  friend bool operator==(const Homomorphism& a, const Homomorphism& b) { return a.map_ == b.map_; }

 private:
  Homomorphism(FiniteAlgebra d, FiniteAlgebra c, std::vector<Element> m, bool exhaustive)
      : domain_(std::move(d)), codomain_(std::move(c)), map_(std::move(m)), exhaustive_(exhaustive) {}

  FiniteAlgebra domain_;
  FiniteAlgebra codomain_;
  std::vector<Element> map_;
  bool exhaustive_ = true;
};

/// Exhaustive homomorphism test. Signatures must agree.
bool is_homomorphism(const FiniteAlgebra& domain, const FiniteAlgebra& codomain,
                     std::span<const Element> map);

/// Calls visit(args) for every tuple in {0..base-1}^arity in lexicographic order.
/// Stops early when visit returns false; returns false in that case.
template <class Visit>
bool for_each_tuple(Element base, int arity, Visit&& visit) {
  std::vector<Element> args(static_cast<std::size_t>(arity), 0);
  if (arity > 0 && base == 0) return true;
  for (;;) {
    if (!visit(std::span<const Element>(args))) return false;
    int pos = arity - 1;
    while (pos >= 0 && ++args[static_cast<std::size_t>(pos)] == base) {
      args[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return true;
  }
}

}  // namespace adual
