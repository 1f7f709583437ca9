#include "adual/subcong.hpp"

#include <algorithm>
#include <functional>

#include "adual/congruence.hpp"
#include "adual/errors.hpp"
#include "adual/subuniverse.hpp"

namespace adual {

SubalgebraWitness::SubalgebraWitness(FiniteAlgebra ambient, std::vector<Element> carrier)
    : ambient_(std::move(ambient)), carrier_(std::move(carrier)), member_(ambient_.size(), 0) {
  std::sort(carrier_.begin(), carrier_.end());
  carrier_.erase(std::unique(carrier_.begin(), carrier_.end()), carrier_.end());
  if (carrier_.empty()) throw InputError("empty subalgebra");
  for (Element e : carrier_) {
    if (e >= ambient_.size()) throw InputError("carrier element outside universe");
    member_[e] = 1;
  }
  if (!is_subuniverse(ambient_, carrier_)) throw InputError("carrier is not closed in " + ambient_.name());
}

Relation SubalgebraWitness::as_relation() const { return carrier_to_relation(ambient_, carrier_); }

namespace {

void require_same_universe(const TernaryTermOperation& t, const SubalgebraWitness& B) {
  if (t.size() != B.ambient().size())
    throw InputError("term acts on " + std::to_string(t.size()) + " elements, ambient has " +
                     std::to_string(B.ambient().size()));
}

// Labels of the relation `related(x, y)` assumed to be an equivalence; verified.
std::vector<Element> labels_of(Element n, const std::function<bool(Element, Element)>& related) {
  constexpr Element kUnset = UINT32_MAX;
  std::vector<Element> labels(n, kUnset);
  Element next = 0;
  for (Element x = 0; x < n; ++x) {
    if (labels[x] != kUnset) continue;
    labels[x] = next;
    for (Element y = x + 1; y < n; ++y)
      if (related(x, y)) {
        if (labels[y] != kUnset) throw InvariantError("relation is not transitive");
        labels[y] = next;
      }
    ++next;
  }
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      if (related(x, y) != (labels[x] == labels[y])) throw InvariantError("relation is not an equivalence");
  return labels;
}

}  // namespace

std::vector<Element> theta_exists_labels(const TernaryTermOperation& t, const SubalgebraWitness& B) {
  require_same_universe(t, B);
  return labels_of(t.size(), [&](Element x, Element y) {
    return std::any_of(B.carrier().begin(), B.carrier().end(), [&](Element b) { return B.contains(t(x, y, b)); });
  });
}

Congruence theta_of_subalgebra(const TernaryTermOperation& t, const SubalgebraWitness& B) {
  require_same_universe(t, B);
  auto forall = labels_of(t.size(), [&](Element x, Element y) {
    return std::all_of(B.carrier().begin(), B.carrier().end(), [&](Element b) { return B.contains(t(x, y, b)); });
  });
  if (canonical_labels(forall) != canonical_labels(theta_exists_labels(t, B)))
    throw InvariantError("universal and existential forms of theta_B disagree");
  return Congruence::verified(B.ambient(), std::move(forall));
}

SubalgebraWitness c_of_congruence(const TernaryTermOperation& t, const SubalgebraWitness& B,
                                  const Congruence& alpha) {
  const auto theta = theta_of_subalgebra(t, B);
  const Element n = B.ambient().size();
  if (alpha.base_size() != n) throw InputError("congruence lives on a different universe");
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      if (theta.related(x, y) && !alpha.related(x, y)) throw NotAboveTheta(x, y);
  std::vector<Element> forall;
  std::vector<Element> exists;
  for (Element x = 0; x < n; ++x) {
    const auto rel = [&](Element b) { return alpha.related(x, b); };
    if (std::all_of(B.carrier().begin(), B.carrier().end(), rel)) forall.push_back(x);
    if (std::any_of(B.carrier().begin(), B.carrier().end(), rel)) exists.push_back(x);
  }
  if (forall != exists) throw InvariantError("universal and existential forms of C(alpha,B) disagree");
  SubalgebraWitness out(B.ambient(), std::move(forall));
  if (!std::includes(out.carrier().begin(), out.carrier().end(), B.carrier().begin(), B.carrier().end()))
    throw InvariantError("C(alpha,B) does not contain B");
  return out;
}

GaloisReport verify_galois(const TernaryTermOperation& t, const SubalgebraWitness& B, std::uint64_t budget) {
  const FiniteAlgebra& A = B.ambient();
  GaloisReport r;
  std::vector<SubalgebraWitness> subs;
  for (auto& s : subuniverse_lattice(A, budget))
    if (std::includes(s.begin(), s.end(), B.carrier().begin(), B.carrier().end()))
      subs.emplace_back(A, std::move(s));
  const auto theta_b = theta_of_subalgebra(t, B);
  std::vector<Congruence> cons;
  for (auto& c : enumerate_congruences(A, budget))
    if (theta_b.is_below(c)) cons.push_back(std::move(c));
  r.subalgebras_above = subs.size();
  r.congruences_above = cons.size();

  std::vector<Congruence> theta_of_x;
  for (const auto& X : subs) {
    auto th = theta_of_subalgebra(t, X);
    auto back = c_of_congruence(t, B, th);
    if (!(back == X)) {
      r.c_of_theta_identity = false;
      r.counterexamples.push_back("C(Theta_X,B) != X for |X| = " + std::to_string(X.size()));
    }
    theta_of_x.push_back(std::move(th));
  }
  std::vector<SubalgebraWitness> c_of_alpha;
  for (const auto& a : cons) {
    auto X = c_of_congruence(t, B, a);
    if (!(theta_of_subalgebra(t, X) == a)) {
      r.theta_of_c_identity = false;
      r.counterexamples.push_back("Theta_C(alpha,B) != alpha for alpha with " +
                                  std::to_string(a.num_classes()) + " classes");
    }
    c_of_alpha.push_back(std::move(X));
  }
  auto subset = [](const SubalgebraWitness& x, const SubalgebraWitness& y) {
    return std::includes(y.carrier().begin(), y.carrier().end(), x.carrier().begin(), x.carrier().end());
  };
  // Order isomorphism: X ⊆ Y iff Θ_X ⊆ Θ_Y, and α ⊆ β iff C(α,B) ⊆ C(β,B).
  for (std::size_t i = 0; i < subs.size(); ++i)
    for (std::size_t j = 0; j < subs.size(); ++j)
      if (subset(subs[i], subs[j]) != theta_of_x[i].is_below(theta_of_x[j])) {
        r.isotone = false;
        r.counterexamples.push_back("X -> Theta_X is not an order embedding");
      }
  for (std::size_t i = 0; i < cons.size(); ++i)
    for (std::size_t j = 0; j < cons.size(); ++j)
      if (cons[i].is_below(cons[j]) != subset(c_of_alpha[i], c_of_alpha[j])) {
        r.isotone = false;
        r.counterexamples.push_back("alpha -> C(alpha,B) is not an order embedding");
      }
  if (subs.size() != cons.size()) {
    r.c_of_theta_identity = false;
    r.counterexamples.push_back("lattices have different sizes");
  }
  return r;
}

bool is_meet_irreducible(const FiniteAlgebra& A, std::span<const Element> carrier) {
  std::vector<char> member(A.size(), 0);
  for (Element e : carrier) member[e] = 1;
  if (carrier.size() == A.size()) return false;
  // Every strict superset contains some one-element extension, so the
  // extensions have the same intersection as all strict supersets.
  std::vector<char> meet(A.size(), 1);
  for (Element x = 0; x < A.size(); ++x) {
    if (member[x]) continue;
    const Element extra[] = {x};
    std::vector<char> in(A.size(), 0);
    for (Element e : extend_subuniverse(A, carrier, extra)) in[e] = 1;
    for (Element e = 0; e < A.size(); ++e) meet[e] = meet[e] && in[e];
  }
  for (Element e = 0; e < A.size(); ++e)
    if (meet[e] && !member[e]) return true;
  return false;
}

std::vector<SubalgebraWitness> meet_irreducibles(const FiniteAlgebra& A, std::uint64_t budget) {
  std::vector<SubalgebraWitness> out;
  for (auto& s : subuniverse_lattice(A, budget))
    if (is_meet_irreducible(A, s)) out.emplace_back(A, std::move(s));
  return out;
}

KernelTriple kernel_quotient(const TernaryTermOperation& t, const SubalgebraWitness& B) {
  const FiniteAlgebra& A = B.ambient();
  if (!is_meet_irreducible(A, B.carrier())) throw InputError("subalgebra is not meet-irreducible");
  auto theta = theta_of_subalgebra(t, B);
  auto q = quotient_algebra(A, theta);
  const Element c = q.projection(B.carrier().front());
  for (Element x = 0; x < A.size(); ++x)
    if ((q.projection(x) == c) != B.contains(x)) throw InvariantError("projection fiber over c differs from B");
  const Element single[] = {c};
  if (!is_subuniverse(q.algebra, single)) throw InvariantError("{c} is not closed in the quotient");
  if (!is_subdirectly_irreducible(q.algebra)) throw InvariantError("quotient by theta_B is not subdirectly irreducible");
  return KernelTriple{std::move(q.algebra), std::move(q.projection), c, std::move(theta)};
}

}  // namespace adual
