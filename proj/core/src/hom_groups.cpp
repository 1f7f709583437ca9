#include "adual/hom_groups.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "adual/errors.hpp"
#include "adual/homs.hpp"

namespace adual {

// ------------------------------------------------------------ primes

std::uint64_t PrimeSignature::value() const {
  std::uint64_t v = 1;
  for (auto [p, a] : factors) v *= *checked_pow(p, static_cast<std::uint64_t>(a));
  return v;
}

int PrimeSignature::exponent_of(std::uint64_t p) const {
  for (auto [q, a] : factors)
    if (q == p) return a;
  return 0;
}

int PrimeSignature::max_exponent() const {
  int m = 0;
  for (auto [p, a] : factors) m = std::max(m, a);
  return m;
}

PrimeSignature prime_signature(std::uint64_t n) {
  if (n == 0) throw InputError("prime signature of 0");
  PrimeSignature s;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    int a = 0;
    while (n % p == 0) {
      n /= p;
      ++a;
    }
    if (a) s.factors.emplace_back(p, a);
  }
  if (n > 1) s.factors.emplace_back(n, 1);
  return s;
}

namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw InputError("divisibility bound exceeds 64 bits");
  return r;
}

std::uint64_t pow_checked(std::uint64_t p, std::uint64_t e) {
  auto v = checked_pow(p, e);
  if (!v) throw InputError("divisibility bound exceeds 64 bits");
  return *v;
}

}  // namespace

std::uint64_t hom_count_bound(std::uint64_t size_a, std::uint64_t size_b, HomCountMode mode) {
  const auto sa = prime_signature(size_a);
  const auto sb = prime_signature(size_b);
  std::uint64_t bound = 1;
  for (auto [p, beta] : sb.factors) {
    const auto alpha = static_cast<std::uint64_t>(sa.exponent_of(p));
    const std::uint64_t e = (mode == HomCountMode::Abelian ? alpha + 1 : alpha) * static_cast<std::uint64_t>(beta);
    bound = mul_checked(bound, pow_checked(p, e));
  }
  return bound;
}

std::uint64_t cardinal_si_bound(std::uint64_t size) {
  std::uint64_t bound = 1;
  for (auto [p, a] : prime_signature(size).factors)
    bound = mul_checked(bound, pow_checked(p, static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(a)));
  return bound;
}

namespace {
bool divides(std::uint64_t d, std::uint64_t n) { return d != 0 && n % d == 0; }
}  // namespace

CheckReport hom_divisibility_check(const FiniteAlgebra& A, const FiniteAlgebra& B, HomCountMode mode,
                                   std::uint64_t budget) {
  CheckReport r;
  const bool abelian = mode == HomCountMode::Abelian;
  r.claim = "|Hom(" + A.name() + "," + B.name() + ")| divides the " + (abelian ? "abelian" : "group") +
            "-mode bound";
  const auto bound = hom_count_bound(A.size(), B.size(), mode);
  const auto count = count_homs(A, B, budget);
  r.add("|A|", A.size()).add("|B|", B.size()).add("|Hom(A,B)|", count).add("bound", bound);
  r.pass = divides(count, bound);
  if (abelian) {
    const auto tA = find_affine_term(A, budget);
    const auto tB = find_affine_term(B, budget);
    if (!tA || !tB) throw InputError("abelian-mode count needs affine algebras");
    const auto reduct_count = count_homs(affine_reduct(*tA, A.name() + "_t"), affine_reduct(*tB, B.name() + "_t"), budget);
    r.add("|Hom(<A;t>,<B;t>)|", reduct_count);
    r.pass = r.pass && divides(reduct_count, bound);
  }
  return r;
}

// ------------------------------------------------------ generating families

GeneratingFamily generating_family(const GroupStructure& G) {
  const Element n = G.size();
  const auto sig = prime_signature(n);
  auto span_of = [&](const std::vector<Element>& gens) {
    std::vector<char> in(n, 0);
    std::vector<Element> elems{G.neutral()};
    in[G.neutral()] = 1;
    for (Element g : gens) {
      for (std::size_t i = 0; i < elems.size(); ++i) {
        const Element y = G.add(elems[i], g);
        if (!in[y]) {
          in[y] = 1;
          elems.push_back(y);
        }
      }
    }
    return in;
  };
  auto is_power_of = [](std::uint64_t v, std::uint64_t p) {
    while (v % p == 0) v /= p;
    return v == 1;
  };

  std::vector<std::vector<Element>> sylow_gens;
  for (auto [p, alpha] : sig.factors) {
    std::vector<Element> gens;
    for (;;) {
      const auto in = span_of(gens);
      std::optional<Element> best;
      for (Element x = 0; x < n; ++x) {
        if (in[x] || !is_power_of(G.order(x), p)) continue;
        if (!best || G.order(x) > G.order(*best)) best = x;
      }
      if (!best) break;
      gens.push_back(*best);
    }
    sylow_gens.push_back(std::move(gens));
  }
  std::size_t N = 0;
  for (const auto& g : sylow_gens) N = std::max(N, g.size());

  GeneratingFamily F;
  for (std::size_t j = 0; j < N; ++j) {
    Element h = G.neutral();
    for (const auto& g : sylow_gens)
      if (j < g.size()) h = G.add(h, g[j]);
    F.generators.push_back(h);
    F.orders.push_back(G.order(h));
  }
  if (F.size() > static_cast<std::size_t>(sig.max_exponent()))
    throw InvariantError("generating family of size " + std::to_string(F.size()) + " exceeds max alpha = " +
                         std::to_string(sig.max_exponent()));

  F.expressions.assign(n, {});
  std::vector<char> seen(n, 0);
  std::deque<Element> queue{G.neutral()};
  seen[G.neutral()] = 1;
  F.expressions[G.neutral()].assign(N, 0);
  while (!queue.empty()) {
    const Element x = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < N; ++j) {
      const Element y = G.add(x, F.generators[j]);
      if (seen[y]) continue;
      seen[y] = 1;
      F.expressions[y] = F.expressions[x];
      F.expressions[y][j] = (F.expressions[y][j] + 1) % static_cast<std::int64_t>(F.orders[j]);
      queue.push_back(y);
    }
  }
  for (Element x = 0; x < n; ++x) {
    if (!seen[x]) throw InvariantError("generating family does not span the group");
    if (evaluate_expression(G, F, F.expressions[x]) != x)
      throw InvariantError("expression does not re-evaluate to its element");
  }
  return F;
}

Element evaluate_expression(const GroupStructure& G, const GeneratingFamily& F,
                            std::span<const std::int64_t> coeffs) {
  if (coeffs.size() != F.size()) throw InputError("expression length differs from family size");
  Element acc = G.neutral();
  for (std::size_t j = 0; j < coeffs.size(); ++j) acc = G.add(acc, G.times(coeffs[j], F.generators[j]));
  return acc;
}

// ------------------------------------------------------------------- H_k

std::size_t HkGroup::index_of(std::span<const Element> map) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), map, [](const Homomorphism& h, std::span<const Element> m) {
    return std::lexicographical_compare(h.map().begin(), h.map().end(), m.begin(), m.end());
  });
  if (it == elements.end() || !std::equal(it->map().begin(), it->map().end(), map.begin(), map.end()))
    throw InvariantError("map is not an element of H_k");
  return static_cast<std::size_t>(it - elements.begin());
}

namespace {

std::vector<Element> pointwise_t(const TernaryTermOperation& t, std::span<const Element> f,
                                 std::span<const Element> g, std::span<const Element> h) {
  std::vector<Element> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = t(f[i], g[i], h[i]);
  return out;
}

std::vector<Element> bar(const Homomorphism& k) {
  const Element n = k.domain().size();
  std::vector<Element> m(static_cast<std::size_t>(n) * n);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y) m[static_cast<std::size_t>(x) * n + y] = k(y);
  return m;
}

}  // namespace

HkGroup build_hk_group(const FiniteAlgebra& A, const FiniteAlgebra& S, const TernaryTermOperation& tA,
                       const TernaryTermOperation& tS, const Homomorphism& k, std::uint64_t budget) {
  if (k.domain().size() != A.size() || k.codomain().size() != S.size() || !is_homomorphism(A, S, k.map()))
    throw InputError("k is not a morphism " + A.name() + " -> " + S.name());
  if (tA.size() != A.size() || tS.size() != S.size()) throw InputError("affine terms do not match the algebras");
  const Element n = A.size();
  auto square = power_algebra(A, 2, budget);
  std::vector<Homomorphism> elements;
  for (auto& f : enumerate_homs(square, S, budget)) {
    bool diag = true;
    for (Element x = 0; x < n && diag; ++x) diag = f(x * n + x) == k(x);
    if (diag) elements.push_back(std::move(f));
  }
  HkGroup H{A, S, square, tA, tS, k, std::move(elements), 0, GroupStructure(0, {0}, {0})};
  const auto kbar = bar(k);
  H.neutral = H.index_of(kbar);
  const auto m = static_cast<Element>(H.elements.size());
  std::vector<Element> add(static_cast<std::size_t>(m) * m);
  std::vector<Element> neg(m);
  for (Element i = 0; i < m; ++i) {
    const auto fi = H.elements[i].map();
    neg[i] = static_cast<Element>(H.index_of(pointwise_t(tS, kbar, fi, kbar)));
    for (Element j = 0; j < m; ++j)
      add[static_cast<std::size_t>(i) * m + j] =
          static_cast<Element>(H.index_of(pointwise_t(tS, fi, kbar, H.elements[j].map())));
  }
  H.group = GroupStructure(static_cast<Element>(H.neutral), std::move(add), std::move(neg));
  return H;
}

CheckReport check_psi_embedding(const HkGroup& H, Element a, std::uint64_t budget) {
  CheckReport r;
  r.claim = "f -> f_a embeds H_k(A^2,S) into Hom(<A;+^a>,<S;+^k(a)>)";
  const Element n = H.A.size();
  const auto Ga = group_from_affine(H.tA, a);
  const auto Gs = group_from_affine(H.tS, H.k(a));
  const auto K = enumerate_homs(group_reduct(Ga, "A+"), group_reduct(Gs, "S+"), budget);
  auto psi = [&](std::size_t i) {
    std::vector<Element> fa(n);
    for (Element x = 0; x < n; ++x) fa[x] = H.elements[i](a * n + x);
    return fa;
  };
  bool into = true, additive = true;
  std::vector<std::vector<Element>> images;
  for (std::size_t i = 0; i < H.elements.size(); ++i) {
    auto fa = psi(i);
    into = into && std::any_of(K.begin(), K.end(), [&](const Homomorphism& h) {
      return std::equal(fa.begin(), fa.end(), h.map().begin(), h.map().end());
    });
    images.push_back(std::move(fa));
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = 0; j < images.size(); ++j) {
      const auto sum = images[H.group.add(static_cast<Element>(i), static_cast<Element>(j))];
      for (Element x = 0; x < n; ++x)
        additive = additive && sum[x] == H.tS(images[i][x], H.k(x), images[j][x]);
    }
  auto sorted = images;
  std::sort(sorted.begin(), sorted.end());
  const bool injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  r.add("a", a).add("|H_k|", H.elements.size()).add("|Hom(<A;+>,<S;+>)|", K.size());
  r.add("into", into ? "yes" : "no").add("additive", additive ? "yes" : "no");
  r.add("injective", injective ? "yes" : "no");
  r.pass = into && additive && injective && divides(H.elements.size(), K.size());
  return r;
}

CheckReport check_phi_isomorphism(const HkGroup& Hk, const HkGroup& Hj) {
  CheckReport r;
  r.claim = "f -> t(f,kbar,jbar) is a group isomorphism H_k -> H_j";
  const auto kbar = bar(Hk.k);
  const auto jbar = bar(Hj.k);
  bool ok = Hk.elements.size() == Hj.elements.size();
  std::vector<std::size_t> phi(Hk.elements.size());
  try {
    for (std::size_t i = 0; i < Hk.elements.size() && ok; ++i) {
      auto img = pointwise_t(Hk.tS, Hk.elements[i].map(), kbar, jbar);
      phi[i] = Hj.index_of(img);
      ok = ok && Hk.index_of(pointwise_t(Hk.tS, img, jbar, kbar)) == i;
    }
    for (std::size_t i = 0; i < phi.size() && ok; ++i)
      for (std::size_t j = 0; j < phi.size() && ok; ++j)
        ok = phi[Hk.group.add(static_cast<Element>(i), static_cast<Element>(j))] ==
             Hj.group.add(static_cast<Element>(phi[i]), static_cast<Element>(phi[j]));
    ok = ok && phi[Hk.neutral] == Hj.neutral;
  } catch (const InvariantError&) {
    ok = false;
  }
  r.add("|H_k|", Hk.elements.size()).add("|H_j|", Hj.elements.size());
  r.pass = ok;
  return r;
}

CheckReport check_hk_bounds(const HkGroup& H, const GeneratingFamily& F) {
  CheckReport r;
  r.claim = "|H(A^2,S)| divides prod p^(alpha*beta), generating family size <= max alpha*beta";
  const auto sa = prime_signature(H.A.size());
  const auto ss = prime_signature(H.S.size());
  int max_ab = 0;
  for (auto [p, beta] : ss.factors) max_ab = std::max(max_ab, sa.exponent_of(p) * beta);
  const auto bound = hom_count_bound(H.A.size(), H.S.size(), HomCountMode::Group);
  r.add("|H|", H.elements.size()).add("bound", bound).add("family", F.size()).add("max_alpha_beta", max_ab);
  r.pass = divides(H.elements.size(), bound) && F.size() <= static_cast<std::size_t>(max_ab);
  return r;
}

CheckReport kearnes_divisibility_check(const FiniteAlgebra& A, const TernaryTermOperation& tA,
                                       const FiniteAlgebra& S, std::uint64_t budget) {
  CheckReport r;
  r.claim = "|S| divides |End(<A;+>)|";
  const auto G = group_reduct(group_from_affine(tA, 0), A.name() + "+");
  const auto count = count_homs(G, G, budget);
  r.add("|S|", S.size()).add("|End(<A;+>)|", count);
  r.pass = divides(S.size(), count);
  return r;
}

}  // namespace adual
