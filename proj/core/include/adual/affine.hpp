#pragma once

// Affine terms: discovery of t(x,y,z) = x - y + z in the ternary term clone,
// the Abelian groups +^c it induces, and integer affine combinations.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adual/algebra.hpp"

namespace adual {

/// A term over the basic operations of an algebra, as a shared DAG.
class TermTree {
 public:
  static TermTree variable(int index);
  static TermTree apply(std::size_t op, std::vector<TermTree> children);

  bool is_variable() const { return node_->var >= 0; }
  int variable_index() const { return node_->var; }
  std::size_t op() const { return node_->op; }
  const std::vector<TermTree>& children() const { return node_->children; }

  Element eval(const FiniteAlgebra& A, std::span<const Element> vars) const;
  /// Highest variable index used plus one.
  int arity() const;
  /// Infix-free rendering such as "+(x1,-(x2))"; variables print as x1, x2, ...
  std::string to_string(const FiniteAlgebra& A) const;

 private:
  struct Node {
    int var = -1;
    std::size_t op = 0;
    std::vector<TermTree> children;
  };
  explicit TermTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// A ternary operation on a universe. When `exponent` > 1 it acts coordinatewise
/// on the power of the base universe (same encoding as power_algebra()).
class TernaryTermOperation {
 public:
  TernaryTermOperation(Element base_size, std::vector<Element> table,
                       std::optional<TermTree> provenance = std::nullopt);

  /// Universe the operation acts on: base_size^exponent.
  Element size() const { return size_; }
  Element base_size() const { return base_size_; }
  int exponent() const { return exponent_; }
  const std::vector<Element>& base_table() const { return table_; }
  const std::optional<TermTree>& provenance() const { return provenance_; }

  Element operator()(Element x, Element y, Element z) const;

  /// The same term acting coordinatewise on the k-th power of the base universe.
  TernaryTermOperation power(int k, std::uint64_t budget = kDefaultBudget) const;

  /// Full table over size()^3 triples.
  std::vector<Element> table() const;

  /// Checks that the provenance tree (if any) reproduces the table on A.
  bool provenance_matches(const FiniteAlgebra& A) const;

  friend bool operator==(const TernaryTermOperation& a, const TernaryTermOperation& b) {
    return a.base_size_ == b.base_size_ && a.exponent_ == b.exponent_ && a.table_ == b.table_;
  }

 private:
  Element base_size_;
  Element size_;
  int exponent_ = 1;
  std::vector<Element> table_;
  std::optional<TermTree> provenance_;
};

/// Mal'cev identities t(x,y,y) = x = t(y,y,x).
bool is_mal_cev(const TernaryTermOperation& t);

/// t commutes with every basic operation of A (A must live on t's universe).
bool is_compatible_term(const FiniteAlgebra& A, const TernaryTermOperation& t);

/// Default cap on |A|^3, the width of the clone closure.
inline constexpr std::uint64_t kCloneWidthLimit = 1000;

/// An affine term of A, or nullopt when A is not affine.
///
/// Closes the three projections of A^(|A|^3) and stops at the first Mal'cev
/// element. In an affine algebra every Mal'cev term operation equals x - y + z,
/// so a Mal'cev element that fails compatibility rules out an affine term.
std::optional<TernaryTermOperation> find_affine_term(const FiniteAlgebra& A,
                                                     std::uint64_t budget = kDefaultBudget,
                                                     std::uint64_t width_limit = kCloneWidthLimit);

/// Every element of the full ternary clone passing both affine checks, sorted.
std::vector<TernaryTermOperation> scan_affine_terms(const FiniteAlgebra& A,
                                                    std::uint64_t budget = kDefaultBudget,
                                                    std::uint64_t width_limit = kCloneWidthLimit);

/// The operation induced by t on the image of a surjective homomorphism.
/// Throws InvariantError when t is not compatible with the kernel.
TernaryTermOperation induced_term(const TernaryTermOperation& t, const Homomorphism& surjection);

/// An Abelian group on {0..n-1} given by tables.
class GroupStructure {
 public:
  /// Checks all Abelian group axioms exhaustively; throws InvariantError otherwise.
  GroupStructure(Element neutral, std::vector<Element> add, std::vector<Element> neg);

  Element size() const { return size_; }
  Element neutral() const { return neutral_; }
  Element add(Element x, Element y) const { return add_[x * size_ + y]; }
  Element neg(Element x) const { return neg_[x]; }
  Element sub(Element x, Element y) const { return add(x, neg(y)); }
  /// k·x for any integer k.
  Element times(std::int64_t k, Element x) const;
  std::uint64_t order(Element x) const;
  std::uint64_t exponent() const { return exponent_; }
  const std::vector<Element>& add_table() const { return add_; }
  const std::vector<Element>& neg_table() const { return neg_; }

 private:
  Element size_;
  Element neutral_;
  std::vector<Element> add_;
  std::vector<Element> neg_;
  std::uint64_t exponent_ = 1;
};

/// x +^c y = t(x,c,y), -x = t(c,x,c). Throws InvariantError if the axioms fail.
GroupStructure group_from_affine(const TernaryTermOperation& t, Element c);

/// Integer coefficients u_1..u_n with sum 1, standing for u_1 x_1 + ... + u_n x_n.
struct AffineTerm {
  std::vector<std::int64_t> coeffs;

  explicit AffineTerm(std::vector<std::int64_t> c);
  static AffineTerm projection(int arity, int index);
  int arity() const { return static_cast<int>(coeffs.size()); }
  friend bool operator==(const AffineTerm&, const AffineTerm&) = default;
};

/// Evaluates affine combinations in the group +^c of a fixed affine term.
class AffineEvaluator {
 public:
  AffineEvaluator(const TernaryTermOperation& t, Element c);
  Element eval(std::span<const std::int64_t> coeffs, std::span<const Element> args) const;
  Element eval(const AffineTerm& term, std::span<const Element> args) const {
    return eval(term.coeffs, args);
  }
  const GroupStructure& group() const { return group_; }

 private:
  GroupStructure group_;
};

/// One-shot form of AffineEvaluator; throws InputError if the coefficients do not sum to 1.
Element eval_affine_combination(const AffineTerm& term, const TernaryTermOperation& t, Element c,
                                std::span<const Element> args);

/// ⟨A; t⟩ as an algebra with the single ternary operation "t".
FiniteAlgebra affine_reduct(const TernaryTermOperation& t, std::string name);

/// ⟨A; +, -, 0⟩ in the group signature, with 0 naming the neutral element.
FiniteAlgebra group_reduct(const GroupStructure& G, std::string name);

}  // namespace adual
