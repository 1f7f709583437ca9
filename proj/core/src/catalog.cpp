#include "adual/catalog.hpp"

#include <algorithm>
#include <array>

#include "adual/errors.hpp"

namespace adual::catalog {

FiniteAlgebra cyclic_group(Element n) {
  if (n == 0) throw InputError("cyclic group of order 0");
  Operation add{"+", 2, {}};
  Operation neg{"-", 1, {}};
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) add.table.push_back((x + y) % n);
    neg.table.push_back((n - x) % n);
  }
  return FiniteAlgebra("Z" + std::to_string(n), n, {add, neg, Operation{"0", 0, {0}}});
}

FiniteAlgebra direct_product(const FiniteAlgebra& A, const FiniteAlgebra& B) {
  if (!A.same_signature(B)) throw InputError("direct product of algebras with different signatures");
  const Element n = A.size() * B.size();
  std::vector<Operation> ops;
  std::vector<Element> a_args;
  std::vector<Element> b_args;
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    Operation o{A.symbol(op).name, A.arity(op), {}};
    for_each_tuple(n, o.arity, [&](std::span<const Element> args) {
      a_args.resize(args.size());
      b_args.resize(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) {
        a_args[i] = args[i] / B.size();
        b_args[i] = args[i] % B.size();
      }
      o.table.push_back(A.apply(op, a_args) * B.size() + B.apply(op, b_args));
      return true;
    });
    ops.push_back(std::move(o));
  }
  return FiniteAlgebra(A.name() + "x" + B.name(), n, std::move(ops));
}

FiniteAlgebra symmetric_group_s3() {
  std::vector<std::array<Element, 3>> perms;
  std::array<Element, 3> p{0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  auto index_of = [&](const std::array<Element, 3>& q) {
    return static_cast<Element>(std::find(perms.begin(), perms.end(), q) - perms.begin());
  };
  Operation mul{"*", 2, {}};
  Operation inv{"inv", 1, {}};
  for (const auto& a : perms) {
    for (const auto& b : perms) {
      // (a*b)(i) = a(b(i))
      std::array<Element, 3> c{a[b[0]], a[b[1]], a[b[2]]};
      mul.table.push_back(index_of(c));
    }
    std::array<Element, 3> r{};
    for (Element i = 0; i < 3; ++i) r[a[i]] = i;
    inv.table.push_back(index_of(r));
  }
  return FiniteAlgebra("S3", 6, {mul, inv, Operation{"e", 0, {0}}});
}

FiniteAlgebra two_element_semilattice() {
  return FiniteAlgebra("SL2", 2, {Operation{"meet", 2, {0, 0, 0, 1}}});
}

}  // namespace adual::catalog
