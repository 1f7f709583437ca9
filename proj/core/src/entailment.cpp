#include "adual/entailment.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "adual/errors.hpp"
#include "adual/factorize.hpp"
#include "adual/hom_groups.hpp"
#include "adual/subcong.hpp"
#include "adual/subuniverse.hpp"

namespace adual {

bool same_value(const Derived& a, const Derived& b) {
  if (a.index() != b.index()) return false;
  if (const auto* r = std::get_if<Relation>(&a)) return *r == std::get<Relation>(b);
  const auto& x = std::get<Operation>(a);
  const auto& y = std::get<Operation>(b);
  return x.name == y.name && x.arity == y.arity && x.table == y.table;
}

// ------------------------------------------------------------- node builders

CertNode premise(Derived value) {
  CertNode n;
  n.kind = CertNode::Kind::Premise;
  n.value = std::move(value);
  return n;
}

CertNode intersect(std::vector<CertNode> relations) {
  CertNode n;
  n.kind = CertNode::Kind::Intersection;
  n.children = std::move(relations);
  return n;
}

CertNode preimage(CertNode relation, std::vector<CertNode> operations, int arity, std::vector<PreimageTerm> terms) {
  CertNode n;
  n.kind = CertNode::Kind::Preimage;
  n.arity = arity;
  n.terms = std::move(terms);
  n.children.push_back(std::move(relation));
  for (auto& op : operations) n.children.push_back(std::move(op));
  return n;
}

CertNode strip(CertNode relation) {
  CertNode n;
  n.kind = CertNode::Kind::Strip;
  n.children.push_back(std::move(relation));
  return n;
}

CertNode graph_to_operation(CertNode relation, std::string name) {
  CertNode n;
  n.kind = CertNode::Kind::GraphToOperation;
  n.name = std::move(name);
  n.children.push_back(std::move(relation));
  return n;
}

// -------------------------------------------------------------------- replay

namespace {

const Relation& as_relation(const Derived& d, const char* rule) {
  if (const auto* r = std::get_if<Relation>(&d)) return *r;
  throw InputError(std::string(rule) + ": expected a relation, got an operation");
}

const Operation& as_operation(const Derived& d, const char* rule) {
  if (const auto* o = std::get_if<Operation>(&d)) return *o;
  throw InputError(std::string(rule) + ": expected an operation, got a relation");
}

void check_operation(const Operation& op, Element base) {
  const auto expected = checked_pow(base, static_cast<std::uint64_t>(op.arity), UINT32_MAX);
  if (!expected || op.table.size() != *expected) throw InputError("operation '" + op.name + "' has a malformed table");
  for (Element v : op.table)
    if (v >= base) throw InputError("operation '" + op.name + "' leaves the universe");
}

Element apply_table(const Operation& op, Element base, std::span<const Element> args) {
  return op.table[encode_tuple(args, base)];
}

Relation replay_preimage(const CertNode& node, Element base, std::uint64_t budget) {
  if (node.children.empty()) throw InputError("preimage: missing relation");
  const Derived rel_value = replay(node.children[0], base, budget);
  const Relation& R = as_relation(rel_value, "preimage");
  if (static_cast<int>(node.terms.size()) != R.arity())
    throw InputError("preimage: " + std::to_string(node.terms.size()) + " terms for a relation of arity " +
                     std::to_string(R.arity()));
  if (node.arity < 1) throw InputError("preimage: arity must be positive");
  std::vector<Operation> ops;
  for (std::size_t i = 1; i < node.children.size(); ++i) {
    ops.push_back(as_operation(replay(node.children[i], base, budget), "preimage"));
    check_operation(ops.back(), base);
  }
  // Signature of the operation children, so trees can be evaluated by FiniteAlgebra.
  std::vector<Operation> sig = ops;
  for (std::size_t i = 0; i < sig.size(); ++i) sig[i].name = "op" + std::to_string(i);
  const FiniteAlgebra F("terms", base, sig);
  std::optional<AffineEvaluator> affine;
  for (const auto& term : node.terms) {
    if (const auto* a = std::get_if<AffineTerm>(&term)) {
      if (a->arity() != node.arity) throw InputError("preimage: affine term of the wrong arity");
      if (!affine) {
        if (ops.empty() || ops[0].arity != 3) throw InputError("preimage: affine terms need a ternary operation child");
        affine.emplace(TernaryTermOperation(base, ops[0].table), 0);
      }
    } else if (std::get<TermTree>(term).arity() > node.arity) {
      throw InputError("preimage: term uses a variable beyond the arity");
    }
  }
  const auto space = checked_pow(base, static_cast<std::uint64_t>(node.arity), budget);
  if (!space) throw BudgetExceeded("preimage over " + std::to_string(base) + "^" + std::to_string(node.arity) + " tuples",
                                   saturating_pow(base, static_cast<std::uint64_t>(node.arity)));
  RelationMembership member(R);
  std::vector<Element> image(node.terms.size());
  std::vector<Element> flat;
  for_each_tuple(base, node.arity, [&](std::span<const Element> x) {
    for (std::size_t j = 0; j < node.terms.size(); ++j) {
      if (const auto* a = std::get_if<AffineTerm>(&node.terms[j]))
        image[j] = affine->eval(*a, x);
      else
        image[j] = std::get<TermTree>(node.terms[j]).eval(F, x);
    }
    if (member.contains(image)) flat.insert(flat.end(), x.begin(), x.end());
    return true;
  });
  if (flat.empty()) throw InputError("preimage: empty relation");
  return Relation::from_flat(node.arity, base, std::move(flat));
}

}  // namespace

Derived replay(const CertNode& node, Element base, std::uint64_t budget) {
  switch (node.kind) {
    case CertNode::Kind::Premise: {
      if (!node.value) throw InputError("premise without a value");
      if (const auto* r = std::get_if<Relation>(&*node.value)) {
        if (r->base_size() != base) throw InputError("premise relation over a different universe");
      } else {
        check_operation(std::get<Operation>(*node.value), base);
      }
      return *node.value;
    }
    case CertNode::Kind::Intersection: {
      if (node.children.empty()) throw InputError("intersection of nothing");
      Derived first = replay(node.children[0], base, budget);
      std::vector<std::uint64_t> acc = as_relation(first, "intersection").codes();
      const int arity = std::get<Relation>(first).arity();
      for (std::size_t i = 1; i < node.children.size(); ++i) {
        const Derived d = replay(node.children[i], base, budget);
        const Relation& R = as_relation(d, "intersection");
        if (R.arity() != arity) throw InputError("intersection of relations of different arities");
        const auto codes = R.codes();
        std::vector<std::uint64_t> next;
        std::set_intersection(acc.begin(), acc.end(), codes.begin(), codes.end(), std::back_inserter(next));
        acc = std::move(next);
      }
      if (acc.empty()) throw InputError("intersection is empty");
      return Relation::from_codes(arity, base, acc);
    }
    case CertNode::Kind::Preimage:
      return replay_preimage(node, base, budget);
    case CertNode::Kind::Strip: {
      if (node.children.size() != 1) throw InputError("strip takes one relation");
      const Derived d = replay(node.children[0], base, budget);
      const Relation& S = as_relation(d, "strip");
      const int k = S.arity();
      if (k < 2) throw InputError("strip needs arity at least 2");
      std::vector<Element> flat;
      for (std::size_t i = 0; i < S.size(); ++i) {
        auto t = S.tuple(i);
        if (t[static_cast<std::size_t>(k - 1)] != t[static_cast<std::size_t>(k - 2)])
          throw InputError("strip: last coordinate is not a duplicate");
        flat.insert(flat.end(), t.begin(), t.end() - 1);
      }
      return Relation::from_flat(k - 1, base, std::move(flat));
    }
    case CertNode::Kind::GraphToOperation: {
      if (node.children.size() != 1) throw InputError("graph rule takes one relation");
      const Derived d = replay(node.children[0], base, budget);
      const Relation& G = as_relation(d, "graph");
      const int k = G.arity() - 1;
      const auto expected = checked_pow(base, static_cast<std::uint64_t>(k), UINT32_MAX);
      if (k < 0 || !expected || G.size() != *expected) throw InputError("graph rule: relation is not a total function graph");
      Operation op{node.name.empty() ? "f" : node.name, k, {}};
      op.table.reserve(G.size());
      // Sorted tuples list the arguments in lexicographic order.
      std::uint64_t expect = 0;
      for (std::size_t i = 0; i < G.size(); ++i, ++expect) {
        auto t = G.tuple(i);
        if (encode_tuple(t.first(static_cast<std::size_t>(k)), base) != expect)
          throw InputError("graph rule: relation is not a function graph");
        op.table.push_back(t[static_cast<std::size_t>(k)]);
      }
      return op;
    }
  }
  throw InputError("unknown certificate node");
}

// ---------------------------------------------------------------- certificates

namespace {
void collect_premises(const CertNode& n, std::vector<Derived>& out) {
  if (n.kind == CertNode::Kind::Premise && n.value) {
    if (std::none_of(out.begin(), out.end(), [&](const Derived& d) { return same_value(d, *n.value); }))
      out.push_back(*n.value);
    return;
  }
  for (const auto& c : n.children) collect_premises(c, out);
}

std::size_t count_nodes(const CertNode& n) {
  std::size_t c = 1;
  for (const auto& ch : n.children) c += count_nodes(ch);
  return c;
}
}  // namespace

std::vector<Derived> EntailmentCertificate::premises() const {
  std::vector<Derived> out;
  collect_premises(root, out);
  return out;
}

bool EntailmentCertificate::verify(std::uint64_t budget) const {
  return same_value(replay(root, base_size, budget), conclusion);
}

std::size_t EntailmentCertificate::num_nodes() const { return count_nodes(root); }

EntailmentCertificate derive(std::string name, Element base_size, CertNode root) {
  Derived conclusion = replay(root, base_size);
  return EntailmentCertificate{std::move(name), base_size, std::move(conclusion), std::move(root)};
}

CertNode substitute_premise(const CertNode& node, const Operation& op, const CertNode& replacement) {
  if (node.kind == CertNode::Kind::Premise && node.value && same_value(*node.value, Derived(op))) return replacement;
  CertNode out = node;
  for (auto& c : out.children) c = substitute_premise(c, op, replacement);
  return out;
}

Relation pad_relation(const Relation& R, int arity) {
  if (arity < R.arity()) throw InputError("cannot pad to a smaller arity");
  const auto k = static_cast<std::size_t>(R.arity());
  std::vector<Element> flat;
  flat.reserve(R.size() * static_cast<std::size_t>(arity));
  for (std::size_t i = 0; i < R.size(); ++i) {
    auto t = R.tuple(i);
    flat.insert(flat.end(), t.begin(), t.end());
    for (int j = R.arity(); j < arity; ++j) flat.push_back(t[k - 1]);
  }
  return Relation::from_flat(arity, R.base_size(), std::move(flat));
}

Relation graph_of(const Operation& op, Element base) {
  std::vector<Element> flat;
  for_each_tuple(base, op.arity, [&](std::span<const Element> x) {
    flat.insert(flat.end(), x.begin(), x.end());
    flat.push_back(apply_table(op, base, x));
    return true;
  });
  return Relation::from_flat(op.arity + 1, base, std::move(flat));
}

Operation term_operation(const TernaryTermOperation& t) { return Operation{"t", 3, t.table()}; }

// ------------------------------------------------------------------ refuter

bool map_preserves(std::span<const Element> table, int arity, Element base, const Relation& R) {
  RelationMembership member(R);
  const auto k = static_cast<std::size_t>(R.arity());
  const auto m = static_cast<std::size_t>(arity);
  std::vector<Element> out(k);
  std::vector<Element> args(m);
  return for_each_tuple(static_cast<Element>(R.size()), arity, [&](std::span<const Element> rows) {
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t i = 0; i < m; ++i) args[i] = R.tuple(rows[i])[c];
      out[c] = table[encode_tuple(args, base)];
    }
    return member.contains(out);
  });
}

bool map_preserves(std::span<const Element> table, int arity, Element base, const Operation& op) {
  const auto m = static_cast<std::size_t>(arity);
  const auto l = static_cast<std::size_t>(op.arity);
  std::vector<Element> row(l), col(m), inner(l), outer(m);
  // v is an m×l matrix, row-major: row i holds the op arguments for coordinate i.
  return for_each_tuple(base, arity * op.arity, [&](std::span<const Element> v) {
    for (std::size_t i = 0; i < m; ++i) outer[i] = op.table[encode_tuple(v.subspan(i * l, l), base)];
    for (std::size_t j = 0; j < l; ++j) {
      for (std::size_t i = 0; i < m; ++i) col[i] = v[i * l + j];
      inner[j] = table[encode_tuple(col, base)];
    }
    return table[encode_tuple(outer, base)] == op.table[encode_tuple(inner, base)];
  });
}

RefutationResult refute_entailment(Element base, const std::vector<Derived>& premises, const Relation& target,
                                   int max_arity, std::uint64_t budget) {
  if (target.base_size() != base) throw InputError("target relation over a different universe");
  for (const auto& p : premises) {
    if (const auto* r = std::get_if<Relation>(&p)) {
      if (r->base_size() != base) throw InputError("premise relation over a different universe");
    } else {
      check_operation(std::get<Operation>(p), base);
    }
  }
  RefutationResult result;
  std::uint64_t total = 0;
  for (int m = 1; m <= max_arity; ++m) {
    const auto cells = checked_pow(base, static_cast<std::uint64_t>(m), UINT32_MAX);
    const auto maps = cells ? checked_pow(base, *cells, budget) : std::nullopt;
    if (!maps || total + *maps > budget)
      throw BudgetExceeded("refuter: " + std::to_string(base) + "^(" + std::to_string(base) + "^" + std::to_string(m) +
                               ") candidate maps exceed the budget",
                           cells ? saturating_pow(base, *cells) : UINT64_MAX);
    total += *maps;
  }
  for (int m = 1; m <= max_arity && !result.witness; ++m) {
    const auto cells = static_cast<int>(*checked_pow(base, static_cast<std::uint64_t>(m)));
    for_each_tuple(base, cells, [&](std::span<const Element> table) {
      ++result.maps_checked;
      for (const auto& p : premises) {
        const bool ok = std::visit([&](const auto& v) { return map_preserves(table, m, base, v); }, p);
        if (!ok) return true;
      }
      if (map_preserves(table, m, base, target)) return true;
      std::ostringstream os;
      os << "map of arity " << m << " with table";
      for (Element v : table) os << ' ' << v;
      os << " preserves every premise but not the target";
      result.witness = RefutationWitness{m, std::vector<Element>(table.begin(), table.end()), os.str()};
      return false;
    });
    result.searched_arity = m;
  }
  return result;
}

// --------------------------------------------------------------- reduction

namespace {

// Premise for an (N+1)-ary relation, padded to `arity` and stripped back.
CertNode padded_premise(const Relation& B, int arity, std::vector<Relation>& premises) {
  Relation P = pad_relation(B, arity);
  if (std::find(premises.begin(), premises.end(), P) == premises.end()) premises.push_back(P);
  CertNode node = premise(std::move(P));
  for (int a = arity; a > B.arity(); --a) node = strip(std::move(node));
  return node;
}

std::vector<PreimageTerm> as_terms(const std::vector<AffineTerm>& terms) {
  return std::vector<PreimageTerm>(terms.begin(), terms.end());
}

}  // namespace

ReductionResult reduce_to_bounded_arity(const FiniteAlgebra& A, const TernaryTermOperation& t, const Relation& R,
                                        int N, const ReduceOptions& options) {
  if (N < 1) throw InputError("N must be positive");
  if (R.base_size() != A.size()) throw InputError("relation over a different universe");
  const int n = R.arity();
  const int target = options.premise_arity == 0 ? N + 1 : options.premise_arity;
  if (target < N + 1) throw InputError("premise arity below N + 1");
  const Operation t_op = term_operation(t);
  const Element a = A.size();

  auto An = power_algebra(A, n, options.budget);
  const auto carrier = relation_to_carrier(An, R);
  if (!is_subuniverse(An, carrier)) throw InputError("relation is not compatible with " + A.name());

  ReductionResult out{R, {}, EntailmentCertificate{"", a, R, premise(R)}, 0, false};

  if (n <= N + 1 && !options.force_pipeline) {
    out.certificate = derive("reduce", a, padded_premise(R, target, out.bounded_premises));
    return out;
  }

  std::vector<CertNode> parts;
  if (carrier.size() == An.size()) {
    // The full relation: preimage of the full (N+1)-ary relation under projections.
    const auto full_size = checked_pow(a, static_cast<std::uint64_t>(N + 1), options.budget);
    if (!full_size) throw BudgetExceeded("full relation of arity N+1", saturating_pow(a, static_cast<std::uint64_t>(N + 1)));
    std::vector<std::uint64_t> codes(*full_size);
    for (std::uint64_t c = 0; c < *full_size; ++c) codes[c] = c;
    const auto full = Relation::from_codes(N + 1, a, codes);
    std::vector<AffineTerm> proj(static_cast<std::size_t>(N + 1), AffineTerm::projection(n, 0));
    parts.push_back(preimage(padded_premise(full, target, out.bounded_premises), {premise(t_op)}, n, as_terms(proj)));
  } else {
    // Meet-irreducible subuniverses above R, greedily pruned to a cover of the intersection.
    std::vector<std::vector<Element>> above;
    for (auto& s : subuniverse_lattice(An, options.budget))
      if (std::includes(s.begin(), s.end(), carrier.begin(), carrier.end()) && is_meet_irreducible(An, s))
        above.push_back(std::move(s));
    std::vector<std::vector<Element>> chosen;
    std::vector<Element> meet;
    for (Element x = 0; x < An.size(); ++x) meet.push_back(x);
    for (const auto& s : above) {
      std::vector<Element> next;
      std::set_intersection(meet.begin(), meet.end(), s.begin(), s.end(), std::back_inserter(next));
      if (next.size() < meet.size()) {
        meet = std::move(next);
        chosen.push_back(s);
      }
    }
    if (meet != carrier) throw InvariantError("meet-irreducible subuniverses above R do not intersect to R");

    const auto tn = t.power(n, options.budget);
    for (const auto& X : chosen) {
      const SubalgebraWitness W(An, X);
      auto kq = kernel_quotient(tn, W);
      const auto tS = induced_term(tn, kq.f);
      const auto k = diagonal_restriction(A, kq.f);
      const auto H = build_hk_group(A, kq.S, t, tS, k, options.budget);
      const auto F = generating_family(H.group);
      if (F.size() > static_cast<std::size_t>(N))
        throw InputError("H(A^2,S) needs " + std::to_string(F.size()) + " generators, more than N = " + std::to_string(N));
      FactorOptions fo;
      fo.N = N;
      fo.seed = options.seed;
      const auto fac = factor_morphism(H, F, kq.f, fo);
      out.sampled_checks = out.sampled_checks || fac.identity_sampled || !fac.g.exhaustively_verified();
      std::vector<std::uint64_t> codes;
      for (Element y = 0; y < fac.g.domain().size(); ++y)
        if (fac.g(y) == kq.c) codes.push_back(y);
      const auto B = Relation::from_codes(N + 1, a, codes);
      if (checked_pow(B.size(), static_cast<std::uint64_t>(std::max(A.max_arity(), 1)), 100'000'000)) {
        if (!is_compatible_relation(A, B)) throw InvariantError("g^-1(c) is not compatible");
      } else {
        out.sampled_checks = true;
        if (!is_compatible_relation_sampled(A, B, 10'000, options.seed)) throw InvariantError("g^-1(c) is not compatible");
      }
      parts.push_back(preimage(padded_premise(B, target, out.bounded_premises), {premise(t_op)}, n, as_terms(fac.terms)));
      ++out.components;
    }
  }
  CertNode root = parts.size() == 1 ? std::move(parts.front()) : intersect(std::move(parts));
  out.certificate = derive("reduce", a, std::move(root));
  if (!same_value(out.certificate.conclusion, Derived(R))) throw InvariantError("certificate does not replay to R");
  return out;
}

EntailmentCertificate eliminate_t(const TernaryTermOperation& t, int N) {
  if (N < 4) throw InputError("eliminate_t needs N >= 4");
  const Operation op = term_operation(t);
  const Relation graph = graph_of(op, t.size());
  CertNode node = premise(pad_relation(graph, N));
  for (int a = N; a > 4; --a) node = strip(std::move(node));
  auto cert = derive("eliminate_t", t.size(), graph_to_operation(std::move(node), "t"));
  if (!same_value(cert.conclusion, Derived(op))) throw InvariantError("graph rule does not reproduce t");
  return cert;
}

}  // namespace adual
