#include "adual/congruence.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "adual/errors.hpp"

namespace adual {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), Element{0}); }

  Element find(Element x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(Element a, Element b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  std::vector<Element> labels() {
    std::vector<Element> out(parent_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = find(static_cast<Element>(i));
    return out;
  }

 private:
  std::vector<Element> parent_;
};

}  // namespace

Congruence principal_congruence(const FiniteAlgebra& A, Element a, Element b) {
  if (a >= A.size() || b >= A.size()) throw InputError("principal congruence of elements outside universe");
  UnionFind uf(A.size());
  std::deque<std::pair<Element, Element>> pending;
  if (uf.unite(a, b)) pending.emplace_back(a, b);
  std::vector<Element> args;
  while (!pending.empty()) {
    auto [u, v] = pending.front();
    pending.pop_front();
    for (std::size_t op = 0; op < A.num_operations(); ++op) {
      const int k = A.arity(op);
      for (int pos = 0; pos < k; ++pos) {
        for_each_tuple(A.size(), k - 1, [&](std::span<const Element> rest) {
          args.assign(rest.begin(), rest.end());
          args.insert(args.begin() + pos, u);
          const Element x = A.apply(op, args);
          args[static_cast<std::size_t>(pos)] = v;
          const Element y = A.apply(op, args);
          if (uf.unite(x, y)) pending.emplace_back(x, y);
          return true;
        });
      }
    }
  }
  return Congruence::verified(A, uf.labels());
}

Congruence join(const FiniteAlgebra& A, const Congruence& x, const Congruence& y) {
  UnionFind uf(A.size());
  for (const auto* c : {&x, &y}) {
    std::vector<Element> first(c->num_classes(), A.size());
    for (Element e = 0; e < A.size(); ++e) {
      auto& f = first[c->class_of(e)];
      if (f == A.size())
        f = e;
      else
        uf.unite(f, e);
    }
  }
  return Congruence::verified(A, uf.labels());
}

Congruence meet(const FiniteAlgebra& A, const Congruence& x, const Congruence& y) {
  std::vector<Element> labels(A.size());
  for (Element e = 0; e < A.size(); ++e) labels[e] = x.class_of(e) * y.num_classes() + y.class_of(e);
  return Congruence::verified(A, std::move(labels));
}

std::vector<Congruence> enumerate_congruences(const FiniteAlgebra& A, std::uint64_t budget) {
  std::set<Congruence> found;
  std::vector<Congruence> principals;
  for (Element a = 0; a < A.size(); ++a) {
    for (Element b = a + 1; b < A.size(); ++b) {
      auto c = principal_congruence(A, a, b);
      if (found.insert(c).second) principals.push_back(std::move(c));
    }
  }
  std::vector<Congruence> queue(principals.begin(), principals.end());
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (const auto& p : principals) {
      auto j = join(A, queue[q], p);
      if (found.insert(j).second) {
        if (found.size() > budget)
          throw BudgetExceeded("more than " + std::to_string(budget) + " congruences", found.size());
        queue.push_back(std::move(j));
      }
    }
  }
  found.insert(Congruence::identity(A));
  std::vector<Congruence> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const Congruence& a, const Congruence& b) {
    if (a.num_classes() != b.num_classes()) return a.num_classes() > b.num_classes();
    return a < b;
  });
  return out;
}

std::optional<Congruence> monolith(const FiniteAlgebra& A) {
  if (A.size() < 2) return std::nullopt;
  std::optional<Congruence> acc;
  for (Element a = 0; a < A.size(); ++a) {
    for (Element b = a + 1; b < A.size(); ++b) {
      auto c = principal_congruence(A, a, b);
      acc = acc ? meet(A, *acc, c) : c;
      if (acc->is_identity()) return std::nullopt;
    }
  }
  return acc;
}

bool is_subdirectly_irreducible(const FiniteAlgebra& A) { return monolith(A).has_value(); }

Quotient quotient_algebra(const FiniteAlgebra& A, const Congruence& theta) {
  if (theta.base_size() != A.size()) throw InputError("congruence does not match algebra size");
  if (!is_compatible_partition(A, theta.labels()))
    throw InvariantError("quotient by a partition that is not a congruence");
  const Element m = theta.num_classes();
  std::vector<Element> rep(m, A.size());
  for (Element x = 0; x < A.size(); ++x)
    if (rep[theta.class_of(x)] == A.size()) rep[theta.class_of(x)] = x;
  std::vector<Operation> ops;
  std::vector<Element> args;
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    Operation o{A.symbol(op).name, A.arity(op), {}};
    for_each_tuple(m, o.arity, [&](std::span<const Element> classes) {
      args.resize(classes.size());
      for (std::size_t i = 0; i < classes.size(); ++i) args[i] = rep[classes[i]];
      o.table.push_back(theta.class_of(A.apply(op, args)));
      return true;
    });
    ops.push_back(std::move(o));
  }
  FiniteAlgebra S(A.name() + "/theta", m, std::move(ops));
  std::vector<Element> map(theta.labels().begin(), theta.labels().end());
  auto projection = Homomorphism::verified(A, S, std::move(map));
  return Quotient{std::move(S), std::move(projection)};
}

std::vector<Element> kernel_labels(std::span<const Element> map) { return canonical_labels(map); }

}  // namespace adual
