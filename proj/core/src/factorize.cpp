#include "adual/factorize.hpp"

#include <random>

#include "adual/errors.hpp"

namespace adual {

namespace {

int exponent_of(const FiniteAlgebra& A, const FiniteAlgebra& power) {
  if (power.is_power() && power.power_base_size() == A.size()) return power.power_exponent();
  if (power.size() == A.size()) return 1;
  throw InputError("domain of f is not a power of " + A.name());
}

}  // namespace

Homomorphism diagonal_restriction(const FiniteAlgebra& A, const Homomorphism& f) {
  const int n = exponent_of(A, f.domain());
  std::uint64_t ones = 0;
  for (int i = 0; i < n; ++i) ones = ones * A.size() + 1;
  std::vector<Element> k(A.size());
  for (Element x = 0; x < A.size(); ++x) k[x] = f(static_cast<Element>(x * ones));
  return Homomorphism::verified(A, f.codomain(), std::move(k));
}

std::vector<Element> affine_term_table(const AffineEvaluator& ev, const AffineTerm& p, Element base_size) {
  std::vector<Element> out;
  for_each_tuple(base_size, p.arity(), [&](std::span<const Element> x) {
    out.push_back(ev.eval(p, x));
    return true;
  });
  return out;
}

std::vector<std::int64_t> decompose_in_group(const HkGroup& H, const GeneratingFamily& F, std::size_t element) {
  if (element >= H.elements.size()) throw InputError("element is not in the group");
  return F.expressions[element];
}

Factorization factor_morphism(const HkGroup& H, const GeneratingFamily& F, const Homomorphism& f,
                              const FactorOptions& options) {
  const FiniteAlgebra& A = H.A;
  const FiniteAlgebra& S = H.S;
  const Element a = A.size();
  const int n = exponent_of(A, f.domain());
  if (f.codomain().size() != S.size()) throw InputError("f does not map into " + S.name());
  const auto k = diagonal_restriction(A, f);
  if (!(k == H.k)) throw InputError("H was built for a different diagonal k");

  if (options.N > 0 && static_cast<std::size_t>(options.N) < F.size())
    throw InputError("generating family has " + std::to_string(F.size()) + " members, more than N = " +
                     std::to_string(options.N));
  const int N = std::max({options.N, static_cast<int>(F.size()), 1});
  const auto Nu = static_cast<std::size_t>(N);
  const auto nu = static_cast<std::size_t>(n);
  const auto GS = group_from_affine(H.tS, 0);
  const AffineEvaluator evA(H.tA, 0);

  // Powers of |A| for coding tuples of A^n.
  std::vector<std::uint64_t> weight(nu);
  for (std::size_t i = nu; i-- > 0;) weight[i] = i + 1 == nu ? 1 : weight[i + 1] * a;

  // f_i(x,y) = f(y,..,y,x,y,..,y), as elements of H.
  std::vector<std::size_t> f_index(nu);
  std::vector<std::vector<Element>> f_maps(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    std::vector<Element> m(static_cast<std::size_t>(a) * a);
    for (Element x = 0; x < a; ++x)
      for (Element y = 0; y < a; ++y) {
        std::uint64_t code = 0;
        for (std::size_t c = 0; c < nu; ++c) code += (c == i ? x : y) * weight[c];
        m[static_cast<std::size_t>(x) * a + y] = f(static_cast<Element>(code));
      }
    f_index[i] = H.index_of(m);
    f_maps[i] = std::move(m);
  }

  // h_j, padded with the neutral k̄.
  std::vector<std::span<const Element>> h(Nu);
  for (std::size_t j = 0; j < Nu; ++j)
    h[j] = H.elements[j < F.size() ? F.generators[j] : H.neutral].map();
  auto hv = [&](std::size_t j, Element x, Element y) { return h[j][static_cast<std::size_t>(x) * a + y]; };

  Factorization out{n, N, f, f, {}, {}, false, 0, options.seed};
  out.coefficients.assign(Nu, std::vector<std::int64_t>(nu, 0));
  for (std::size_t i = 0; i < nu; ++i) {
    const auto& u = F.expressions[f_index[i]];
    for (std::size_t j = 0; j < u.size(); ++j) out.coefficients[j][i] = u[j];
  }
  for (std::size_t j = 0; j < Nu; ++j) {
    std::vector<std::int64_t> c(nu);
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < nu; ++i) sum += out.coefficients[j][i];
    for (std::size_t i = 0; i < nu; ++i) c[i] = out.coefficients[j][i];
    c[0] += 1 - sum;
    out.terms.emplace_back(std::move(c));
  }
  out.terms.push_back(AffineTerm::projection(n, 0));

  // g(y_1..y_N, z) = Σ_j (h_j(y_j,z) - h_j(z,z)) + k(z).
  auto g_dom = power_algebra(A, N + 1, options.budget);
  std::vector<Element> g_map;
  g_map.reserve(g_dom.size());
  for_each_tuple(a, N + 1, [&](std::span<const Element> y) {
    const Element z = y[Nu];
    Element acc = k(z);
    for (std::size_t j = 0; j < Nu; ++j) acc = GS.add(acc, GS.sub(hv(j, y[j], z), hv(j, z, z)));
    g_map.push_back(acc);
    return true;
  });
  // Exhaustive hom check costs |A^(N+1)|^arity per operation.
  const auto check_cost = checked_pow(g_dom.size(), static_cast<std::uint64_t>(std::max(A.max_arity(), 1)),
                                      options.exhaustive_limit * 16);
  out.g = check_cost ? Homomorphism::verified(g_dom, S, std::move(g_map))
                     : Homomorphism::sampled(g_dom, S, std::move(g_map), options.samples, options.seed);

  // Identities on all of A^n, or on seeded samples.
  const auto domain = checked_pow(a, nu, options.exhaustive_limit);
  const bool hjpj = checked_pow(a, nu, 4096).has_value();
  std::vector<Element> x(nu);
  std::vector<Element> p(Nu + 1);
  auto check_at = [&](std::uint64_t code) {
    for (std::size_t c = 0; c < nu; ++c) x[c] = static_cast<Element>((code / weight[c]) % a);
    for (std::size_t j = 0; j <= Nu; ++j) p[j] = evA.eval(out.terms[j], x);
    if (p[Nu] != x[0]) throw InvariantError("p_{N+1} is not the first projection");
    const Element fx = f(static_cast<Element>(code));
    if (out.g(static_cast<Element>(encode_tuple(p, a))) != fx)
      throw InvariantError("f != g o p at input " + std::to_string(code));
    Element tele = k(x[0]);
    for (std::size_t i = 0; i < nu; ++i) {
      const auto& fi = f_maps[i];
      tele = GS.add(tele, GS.sub(fi[static_cast<std::size_t>(x[i]) * a + x[0]], fi[static_cast<std::size_t>(x[0]) * a + x[0]]));
    }
    if (tele != fx) throw InvariantError("telescoping identity fails at input " + std::to_string(code));
    if (!hjpj) return;
    for (std::size_t j = 0; j < Nu; ++j)
      for (Element z = 0; z < a; ++z) {
        Element rhs = GS.neutral();
        for (std::size_t i = 0; i < nu; ++i) {
          const auto u = out.coefficients[j][i];
          rhs = GS.add(rhs, GS.sub(GS.times(u, hv(j, x[i], z)), GS.times(u, hv(j, x[0], z))));
        }
        if (GS.sub(hv(j, p[j], z), hv(j, x[0], z)) != rhs)
          throw InvariantError("h_j(p_j(x),z) identity fails at input " + std::to_string(code));
      }
  };
  if (domain) {
    for (std::uint64_t code = 0; code < *domain; ++code) check_at(code);
    out.identity_checked = static_cast<std::size_t>(*domain);
  } else {
    const std::uint64_t total = *checked_pow(a, nu);
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
    for (std::size_t s = 0; s < options.samples; ++s) check_at(pick(rng));
    out.identity_sampled = true;
    out.identity_checked = options.samples;
  }
  return out;
}

}  // namespace adual
