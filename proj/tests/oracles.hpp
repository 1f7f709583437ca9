#pragma once

// Independent reference computations for the tests. Nothing here calls into the
// library beyond reading operation tables.

#include <cstdint>
#include <functional>
#include <vector>

#include "adual/algebra.hpp"

namespace oracle {

using adual::Element;
using adual::FiniteAlgebra;

/// x - y + z in Z_n, table order (x most significant).
inline std::vector<Element> cyclic_affine_table(Element n) {
  std::vector<Element> t;
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z) t.push_back((x + n - y + z) % n);
  return t;
}

/// x + y + z in (Z_2)^k with elements as bit vectors.
inline std::vector<Element> elementary_abelian_affine_table(Element n) {
  std::vector<Element> t;
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z) t.push_back(x ^ y ^ z);
  return t;
}

inline Element apply(const FiniteAlgebra& A, std::size_t op, const std::vector<Element>& args) {
  std::size_t idx = 0;
  for (Element a : args) idx = idx * A.size() + a;
  return A.table(op)[idx];
}

/// Calls f(args) for every tuple in {0..n-1}^k.
inline void tuples(Element n, int k, const std::function<void(const std::vector<Element>&)>& f) {
  std::vector<Element> v(static_cast<std::size_t>(k), 0);
  for (;;) {
    f(v);
    int i = k - 1;
    while (i >= 0 && ++v[static_cast<std::size_t>(i)] == n) v[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return;
  }
}

inline bool is_hom(const FiniteAlgebra& A, const FiniteAlgebra& B, const std::vector<Element>& m) {
  bool ok = true;
  for (std::size_t op = 0; op < A.num_operations() && ok; ++op)
    tuples(A.size(), A.arity(op), [&](const std::vector<Element>& args) {
      std::vector<Element> img;
      for (Element a : args) img.push_back(m[a]);
      if (m[apply(A, op, args)] != apply(B, op, img)) ok = false;
    });
  return ok;
}

/// Every map A → B filtered by the homomorphism property, in lexicographic order.
inline std::vector<std::vector<Element>> all_homs(const FiniteAlgebra& A, const FiniteAlgebra& B) {
  std::vector<std::vector<Element>> out;
  tuples(B.size(), static_cast<int>(A.size()), [&](const std::vector<Element>& m) {
    if (is_hom(A, B, m)) out.push_back(m);
  });
  return out;
}

inline bool closed(const FiniteAlgebra& A, std::uint64_t mask) {
  bool ok = true;
  for (std::size_t op = 0; op < A.num_operations() && ok; ++op)
    tuples(A.size(), A.arity(op), [&](const std::vector<Element>& args) {
      for (Element a : args)
        if (!(mask >> a & 1)) return;
      if (!(mask >> apply(A, op, args) & 1)) ok = false;
    });
  return ok;
}

/// Nonempty closed subsets by filtering all 2^|A| subsets (|A| <= 20).
inline std::vector<std::uint64_t> subuniverse_masks(const FiniteAlgebra& A) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << A.size()); ++mask)
    if (closed(A, mask)) out.push_back(mask);
  return out;
}

/// Number of subspaces of F_q^n: Σ_k [n choose k]_q.
inline std::uint64_t subspace_count(std::uint64_t q, int n) {
  std::uint64_t total = 0;
  for (int k = 0; k <= n; ++k) {
    std::uint64_t num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
      std::uint64_t a = 1, b = 1;
      for (int j = 0; j < n - i; ++j) a *= q;
      for (int j = 0; j < i + 1; ++j) b *= q;
      num *= a - 1;
      den *= b - 1;
    }
    total += num / den;
  }
  return total;
}

/// All set partitions of {0..n-1} as restricted growth strings.
inline std::vector<std::vector<Element>> partitions(Element n) {
  std::vector<std::vector<Element>> out;
  std::vector<Element> rgs(n, 0);
  std::function<void(Element, Element)> rec = [&](Element i, Element used) {
    if (i == n) {
      out.push_back(rgs);
      return;
    }
    for (Element c = 0; c <= used && c < n; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(used, c + 1));
    }
  };
  if (n) {
    rgs[0] = 0;
    rec(1, 1);
  }
  return out;
}

inline bool compatible_partition(const FiniteAlgebra& A, const std::vector<Element>& lab) {
  bool ok = true;
  for (std::size_t op = 0; op < A.num_operations() && ok; ++op) {
    const int k = A.arity(op);
    tuples(A.size(), 2 * k, [&](const std::vector<Element>& xy) {
      std::vector<Element> x(xy.begin(), xy.begin() + k), y(xy.begin() + k, xy.end());
      for (int i = 0; i < k; ++i)
        if (lab[x[static_cast<std::size_t>(i)]] != lab[y[static_cast<std::size_t>(i)]]) return;
      if (lab[apply(A, op, x)] != lab[apply(A, op, y)]) ok = false;
    });
  }
  return ok;
}

/// Congruences of A as restricted growth strings.
inline std::vector<std::vector<Element>> congruences(const FiniteAlgebra& A) {
  std::vector<std::vector<Element>> out;
  for (auto& p : partitions(A.size()))
    if (compatible_partition(A, p)) out.push_back(p);
  return out;
}

inline bool finer(const std::vector<Element>& a, const std::vector<Element>& b) {
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < a.size(); ++y)
      if (a[x] == a[y] && b[x] != b[y]) return false;
  return true;
}

/// SI iff the nonidentity congruences have a nonidentity common lower bound.
inline bool subdirectly_irreducible(const FiniteAlgebra& A) {
  const auto cons = congruences(A);
  std::size_t minimal_nonidentity = 0;
  for (const auto& c : cons) {
    bool identity = true;
    for (Element x = 0; x < A.size(); ++x)
      if (c[x] != x) identity = false;
    if (identity) continue;
    bool minimal = true;
    for (const auto& d : cons)
      if (d != c && finer(d, c)) {
        bool d_identity = true;
        for (Element x = 0; x < A.size(); ++x)
          if (d[x] != x) d_identity = false;
        if (!d_identity) minimal = false;
      }
    if (minimal) ++minimal_nonidentity;
  }
  return minimal_nonidentity == 1;
}

}  // namespace oracle
