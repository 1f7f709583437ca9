#pragma once

// Subalgebras above B and congruences above Θ_B, and the quotients they give.

#include <optional>
#include <string>
#include <vector>

#include "adual/affine.hpp"
#include "adual/algebra.hpp"
#include "adual/errors.hpp"

namespace adual {

/// A nonempty closed carrier of an ambient algebra, sorted.
class SubalgebraWitness {
 public:
  /// Throws InputError when the carrier is empty or not closed.
  SubalgebraWitness(FiniteAlgebra ambient, std::vector<Element> carrier);

  const FiniteAlgebra& ambient() const { return ambient_; }
  const std::vector<Element>& carrier() const { return carrier_; }
  bool contains(Element x) const { return member_[x] != 0; }
  std::size_t size() const { return carrier_.size(); }
  /// The carrier as a relation over the base of a power ambient (unary otherwise).
  Relation as_relation() const;

  friend bool operator==(const SubalgebraWitness& a, const SubalgebraWitness& b) {
    return a.carrier_ == b.carrier_;
  }

 private:
  FiniteAlgebra ambient_;
  std::vector<Element> carrier_;
  std::vector<char> member_;
};

/// Θ_B = {(x,y) : t(x,y,b) ∈ B for all b ∈ B}. Cross-checked against the
/// existential form; throws InvariantError if they differ or the result is not a congruence.
Congruence theta_of_subalgebra(const TernaryTermOperation& t, const SubalgebraWitness& B);

/// The existential form {(x,y) : t(x,y,b) ∈ B for some b ∈ B} as raw labels.
std::vector<Element> theta_exists_labels(const TernaryTermOperation& t, const SubalgebraWitness& B);

/// Thrown by c_of_congruence when α does not contain Θ_B.
class NotAboveTheta : public InputError {
 public:
  NotAboveTheta(Element x, Element y)
      : InputError("congruence does not contain theta_B: pair (" + std::to_string(x) + ", " +
                   std::to_string(y) + ") is missing"),
        x_(x),
        y_(y) {}
  std::pair<Element, Element> witness() const { return {x_, y_}; }

 private:
  Element x_, y_;
};

/// C(α,B) = {x : (x,b) ∈ α for all b ∈ B}. Requires α ⊇ Θ_B.
SubalgebraWitness c_of_congruence(const TernaryTermOperation& t, const SubalgebraWitness& B,
                                  const Congruence& alpha);

struct GaloisReport {
  std::size_t subalgebras_above = 0;   // |{X ∈ Sub A : X ⊇ B}|
  std::size_t congruences_above = 0;   // |{α ∈ Con A : α ⊇ Θ_B}|
  bool theta_of_c_identity = true;     // Θ_{C(α,B)} = α for all α
  bool c_of_theta_identity = true;     // C(Θ_X,B) = X for all X
  bool isotone = true;
  std::vector<std::string> counterexamples;
  bool pass() const { return theta_of_c_identity && c_of_theta_identity && isotone; }
};

GaloisReport verify_galois(const TernaryTermOperation& t, const SubalgebraWitness& B,
                           std::uint64_t budget = kDefaultBudget);

/// Subuniverses X whose strict supersets intersect to something strictly larger than X.
std::vector<SubalgebraWitness> meet_irreducibles(const FiniteAlgebra& A, std::uint64_t budget = kDefaultBudget);

/// True iff the intersection of all subuniverses strictly above `carrier` strictly contains it.
bool is_meet_irreducible(const FiniteAlgebra& A, std::span<const Element> carrier);

struct KernelTriple {
  FiniteAlgebra S;
  Homomorphism f;
  Element c;
  Congruence theta;
};

/// S = A/Θ_B, f the projection, c the class of B. Asserts f⁻¹(c) = B, {c} closed
/// and S subdirectly irreducible; throws InputError if B is not meet-irreducible.
KernelTriple kernel_quotient(const TernaryTermOperation& t, const SubalgebraWitness& B);

}  // namespace adual
