#pragma once

// Entailment certificates over four rules: intersection, preimage under terms,
// stripping a duplicated last coordinate, and reading an operation off its graph.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adual/affine.hpp"
#include "adual/algebra.hpp"

namespace adual {

/// A relation or an operation on the base universe.
using Derived = std::variant<Relation, Operation>;

bool same_value(const Derived& a, const Derived& b);

/// A term used by a preimage step. Affine terms are evaluated in the group
/// +^0 of the first operation child (which must be an affine ternary term);
/// trees index the operation children by position.
using PreimageTerm = std::variant<AffineTerm, TermTree>;

struct CertNode {
  enum class Kind { Premise, Intersection, Preimage, Strip, GraphToOperation };

  Kind kind = Kind::Premise;
  std::optional<Derived> value;       // Premise
  int arity = 0;                      // Preimage: arity of the produced relation
  std::vector<PreimageTerm> terms;    // Preimage
  std::string name;                   // GraphToOperation: name of the operation
  /// Intersection: relations. Preimage: the relation, then operations. Strip,
  /// GraphToOperation: one relation.
  std::vector<CertNode> children;
};

CertNode premise(Derived value);
CertNode intersect(std::vector<CertNode> relations);
CertNode preimage(CertNode relation, std::vector<CertNode> operations, int arity, std::vector<PreimageTerm> terms);
CertNode strip(CertNode relation);
CertNode graph_to_operation(CertNode relation, std::string name);

/// Recomputes the value of a node from its premises. Throws InputError on a
/// malformed application (arity mismatch, non-duplicated coordinate, non-function
/// graph, empty result) and BudgetExceeded when a preimage ranges over more than
/// `budget` tuples.
Derived replay(const CertNode& node, Element base_size, std::uint64_t budget = std::uint64_t{1} << 24);

struct EntailmentCertificate {
  std::string name;
  Element base_size = 0;
  Derived conclusion;
  CertNode root;

  /// Distinct premises in first-use order.
  std::vector<Derived> premises() const;
  /// Replays the tree and compares with the conclusion.
  bool verify(std::uint64_t budget = std::uint64_t{1} << 24) const;
  std::size_t num_nodes() const;
};

/// Builds a certificate whose conclusion is the replay of `root`.
EntailmentCertificate derive(std::string name, Element base_size, CertNode root);

/// Replaces every operation premise equal to `op` by `replacement`.
CertNode substitute_premise(const CertNode& node, const Operation& op, const CertNode& replacement);

/// R with its last coordinate repeated until the arity reaches `arity`.
Relation pad_relation(const Relation& R, int arity);

/// {(x, f(x)) : x ∈ A^k} for an operation of arity k.
Relation graph_of(const Operation& op, Element base_size);

/// The ternary term as a named operation "t".
Operation term_operation(const TernaryTermOperation& t);

struct RefutationWitness {
  int arity = 0;
  std::vector<Element> table;  // the map A^arity → A
  std::string violation;
};

struct RefutationResult {
  std::optional<RefutationWitness> witness;
  int searched_arity = 0;
  std::uint64_t maps_checked = 0;
};

/// Searches maps A^m' → A, m' = 1..max_arity, in table order for one that
/// preserves every premise but not the target. Silence proves nothing.
/// Throws BudgetExceeded (with the refused count) when |A|^(|A|^m') > budget.
RefutationResult refute_entailment(Element base_size, const std::vector<Derived>& premises,
                                   const Relation& target, int max_arity,
                                   std::uint64_t budget = 100'000'000);

/// True iff the map `table` on A^arity preserves R (arity m of the map).
bool map_preserves(std::span<const Element> table, int arity, Element base_size, const Relation& R);
/// True iff the map commutes with the operation.
bool map_preserves(std::span<const Element> table, int arity, Element base_size, const Operation& op);

struct ReduceOptions {
  /// Arity of the relation premises; 0 means N + 1. Shorter premises are padded
  /// with a repeated last coordinate and stripped back.
  int premise_arity = 0;
  /// Run the factorization pipeline even when R already has arity <= N + 1.
  bool force_pipeline = false;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0x5eed;
};

struct ReductionResult {
  Relation input;
  std::vector<Relation> bounded_premises;
  EntailmentCertificate certificate;
  std::size_t components = 0;   // meet-irreducible components used
  bool sampled_checks = false;  // some g or B checked on samples only
};

/// Certificate deriving R from (N+1)-ary compatible relations and t: R is cut
/// into meet-irreducible subuniverses of A^n; each X gives S = A^n/Θ_X, the
/// projection f and c; f = g∘p with N generators; B = g⁻¹(c) and X is the preimage
/// of B under p. Throws InputError if R is not compatible or a family exceeds N.
ReductionResult reduce_to_bounded_arity(const FiniteAlgebra& A, const TernaryTermOperation& t, const Relation& R,
                                        int N, const ReduceOptions& options = {});

/// Derives t from gra t padded to arity N (N >= 4): N - 4 strips, then the graph rule.
EntailmentCertificate eliminate_t(const TernaryTermOperation& t, int N);

}  // namespace adual
