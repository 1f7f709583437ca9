#pragma once

// Factoring a morphism f: A^n → S as g ∘ (p_1, ..., p_{N+1}) with affine terms p_j.

#include <cstdint>
#include <vector>

#include "adual/affine.hpp"
#include "adual/hom_groups.hpp"

namespace adual {

struct Factorization {
  int n = 1;
  int N = 1;
  Homomorphism f;                                  // A^n → S
  Homomorphism g;                                  // A^(N+1) → S
  std::vector<AffineTerm> terms;                   // p_1..p_{N+1}, arity n; p_{N+1} = x_1
  std::vector<std::vector<std::int64_t>> coefficients;  // u[j][i], j < N, i < n
  bool identity_sampled = false;  // f = g∘p checked on samples only
  std::size_t identity_checked = 0;
  std::uint64_t seed = 0;
};

struct FactorOptions {
  /// Number of generators to use; the family is padded with the neutral element. 0 = family size
  /// (at least 1). InputError when smaller than the family.
  int N = 0;
  /// Largest |A|^(N+1) for which g is tabulated.
  std::uint64_t budget = std::uint64_t{1} << 22;
  /// Largest |A|^n checked exhaustively; beyond it 10^4 seeded samples.
  std::uint64_t exhaustive_limit = kDefaultBudget;
  std::uint64_t seed = 0x5eed;
  std::size_t samples = 10'000;
};

/// Builds g and the p_j from a generating family of H_k(A^2,S), k(x) = f(x,...,x),
/// and verifies f = g∘p together with the telescoping identity (and the h_j∘p_j
/// identity when |A|^n <= 4096). Throws InvariantError on any failure.
Factorization factor_morphism(const HkGroup& H, const GeneratingFamily& F, const Homomorphism& f,
                              const FactorOptions& options = {});

/// Coefficients u with Σ u_j h_j = element (an index into H.elements).
std::vector<std::int64_t> decompose_in_group(const HkGroup& H, const GeneratingFamily& F, std::size_t element);

/// The diagonal restriction k(x) = f(x,...,x) of a morphism out of A^n.
Homomorphism diagonal_restriction(const FiniteAlgebra& A, const Homomorphism& f);

/// Evaluates p(x_1..x_n) for every tuple of A^n as a map A^n → A.
std::vector<Element> affine_term_table(const AffineEvaluator& ev, const AffineTerm& p, Element base_size);

}  // namespace adual
