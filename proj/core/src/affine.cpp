#include "adual/affine.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "adual/errors.hpp"
#include "adual/subuniverse.hpp"

namespace adual {

// ------------------------------------------------------------------ TermTree

TermTree TermTree::variable(int index) {
  if (index < 0) throw InputError("negative variable index");
  return TermTree(std::make_shared<const Node>(Node{index, 0, {}}));
}

TermTree TermTree::apply(std::size_t op, std::vector<TermTree> children) {
  return TermTree(std::make_shared<const Node>(Node{-1, op, std::move(children)}));
}

Element TermTree::eval(const FiniteAlgebra& A, std::span<const Element> vars) const {
  if (is_variable()) {
    if (static_cast<std::size_t>(node_->var) >= vars.size()) throw InputError("term variable out of range");
    return vars[static_cast<std::size_t>(node_->var)];
  }
  if (node_->op >= A.num_operations() ||
      static_cast<std::size_t>(A.arity(node_->op)) != node_->children.size())
    throw InputError("term does not match the signature of " + A.name());
  std::vector<Element> args;
  args.reserve(node_->children.size());
  for (const auto& c : node_->children) args.push_back(c.eval(A, vars));
  return A.apply(node_->op, args);
}

int TermTree::arity() const {
  if (is_variable()) return node_->var + 1;
  int a = 0;
  for (const auto& c : node_->children) a = std::max(a, c.arity());
  return a;
}

std::string TermTree::to_string(const FiniteAlgebra& A) const {
  if (is_variable()) return "x" + std::to_string(node_->var + 1);
  std::string s = A.symbol(node_->op).name;
  if (node_->children.empty()) return s;
  s += '(';
  for (std::size_t i = 0; i < node_->children.size(); ++i) {
    if (i) s += ',';
    s += node_->children[i].to_string(A);
  }
  return s + ')';
}

// ------------------------------------------------------ TernaryTermOperation

TernaryTermOperation::TernaryTermOperation(Element base_size, std::vector<Element> table,
                                           std::optional<TermTree> provenance)
    : base_size_(base_size), size_(base_size), table_(std::move(table)), provenance_(std::move(provenance)) {
  if (base_size == 0) throw InputError("ternary operation on an empty universe");
  const std::uint64_t n = base_size;
  if (table_.size() != n * n * n)
    throw InputError("ternary table has " + std::to_string(table_.size()) + " entries, expected " +
                     std::to_string(n * n * n));
  for (Element v : table_)
    if (v >= base_size) throw InputError("ternary table entry outside universe");
}

Element TernaryTermOperation::operator()(Element x, Element y, Element z) const {
  const Element n = base_size_;
  if (exponent_ == 1) return table_[(static_cast<std::size_t>(x) * n + y) * n + z];
  Element out = 0;
  Element mult = 1;
  for (int i = 0; i < exponent_; ++i) {
    const Element v = table_[(static_cast<std::size_t>(x % n) * n + y % n) * n + z % n];
    out += v * mult;
    mult *= n;
    x /= n;
    y /= n;
    z /= n;
  }
  return out;
}

TernaryTermOperation TernaryTermOperation::power(int k, std::uint64_t budget) const {
  if (k < 1) throw InputError("power exponent must be positive");
  const int e = exponent_ * k;
  const auto size = checked_pow(base_size_, static_cast<std::uint64_t>(e), budget);
  if (!size)
    throw BudgetExceeded("term on " + std::to_string(base_size_) + "^" + std::to_string(e) + " elements",
                         saturating_pow(base_size_, static_cast<std::uint64_t>(e)));
  TernaryTermOperation out = *this;
  out.exponent_ = e;
  out.size_ = static_cast<Element>(*size);
  return out;
}

std::vector<Element> TernaryTermOperation::table() const {
  if (exponent_ == 1) return table_;
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(size_) * size_ * size_);
  for (Element x = 0; x < size_; ++x)
    for (Element y = 0; y < size_; ++y)
      for (Element z = 0; z < size_; ++z) out.push_back((*this)(x, y, z));
  return out;
}

bool TernaryTermOperation::provenance_matches(const FiniteAlgebra& A) const {
  if (!provenance_) return true;
  if (A.size() != base_size_) return false;
  return for_each_tuple(base_size_, 3, [&](std::span<const Element> v) {
    return provenance_->eval(A, v) == table_[(static_cast<std::size_t>(v[0]) * base_size_ + v[1]) * base_size_ + v[2]];
  });
}

bool is_mal_cev(const TernaryTermOperation& t) {
  for (Element x = 0; x < t.size(); ++x)
    for (Element y = 0; y < t.size(); ++y)
      if (t(x, y, y) != x || t(y, y, x) != x) return false;
  return true;
}

bool is_compatible_term(const FiniteAlgebra& A, const TernaryTermOperation& t) {
  if (A.size() != t.size()) throw InputError("term and algebra live on different universes");
  std::vector<Element> inner;
  std::vector<Element> xs, ys, zs;
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    const int m = A.arity(op);
    const auto mu = static_cast<std::size_t>(m);
    inner.resize(mu);
    xs.resize(mu);
    ys.resize(mu);
    zs.resize(mu);
    const bool ok = for_each_tuple(A.size(), 3 * m, [&](std::span<const Element> v) {
      for (std::size_t i = 0; i < mu; ++i) {
        xs[i] = v[i];
        ys[i] = v[mu + i];
        zs[i] = v[2 * mu + i];
        inner[i] = t(xs[i], ys[i], zs[i]);
      }
      return t(A.apply(op, xs), A.apply(op, ys), A.apply(op, zs)) == A.apply(op, inner);
    });
    if (!ok) return false;
  }
  return true;
}

// ------------------------------------------------------------ clone search

namespace {

SubpowerClosure ternary_clone(const FiniteAlgebra& A, std::uint64_t budget, std::uint64_t width_limit) {
  const auto width = checked_pow(A.size(), 3, width_limit);
  if (!width)
    throw BudgetExceeded("ternary clone of " + A.name() + " needs width " +
                             std::to_string(saturating_pow(A.size(), 3)) + " > " + std::to_string(width_limit),
                         saturating_pow(A.size(), 3));
  SubpowerClosure cl(A, static_cast<std::size_t>(*width), budget);
  const Element n = A.size();
  std::vector<Element> proj(static_cast<std::size_t>(*width));
  for (int var = 0; var < 3; ++var) {
    std::size_t c = 0;
    for (Element x = 0; x < n; ++x)
      for (Element y = 0; y < n; ++y)
        for (Element z = 0; z < n; ++z) proj[c++] = var == 0 ? x : (var == 1 ? y : z);
    cl.add(proj);
  }
  return cl;
}

bool table_is_mal_cev(std::span<const Element> tab, Element n) {
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      if (tab[(static_cast<std::size_t>(x) * n + y) * n + y] != x ||
          tab[(static_cast<std::size_t>(y) * n + y) * n + x] != x)
        return false;
  return true;
}

TermTree provenance_of(const SubpowerClosure& cl, std::size_t i, std::vector<std::optional<TermTree>>& memo) {
  if (memo[i]) return *memo[i];
  const auto& step = cl.step(i);
  TermTree tree = TermTree::variable(0);
  if (step.op < 0) {
    // The three seeds are x, y, z in insertion order.
    tree = TermTree::variable(static_cast<int>(i));
  } else {
    std::vector<TermTree> children;
    for (auto a : step.args) children.push_back(provenance_of(cl, a, memo));
    tree = TermTree::apply(static_cast<std::size_t>(step.op), std::move(children));
  }
  memo[i] = tree;
  return tree;
}

TernaryTermOperation term_from_clone(const SubpowerClosure& cl, std::size_t i) {
  std::vector<std::optional<TermTree>> memo(cl.size());
  auto e = cl.element(i);
  return TernaryTermOperation(cl.algebra().size(), std::vector<Element>(e.begin(), e.end()),
                              provenance_of(cl, i, memo));
}

}  // namespace

std::optional<TernaryTermOperation> find_affine_term(const FiniteAlgebra& A, std::uint64_t budget,
                                                     std::uint64_t width_limit) {
  if (A.size() == 1) return TernaryTermOperation(1, {0}, TermTree::variable(0));
  auto cl = ternary_clone(A, budget, width_limit);
  std::optional<std::size_t> found;
  cl.run([&](std::size_t i) {
    if (!table_is_mal_cev(cl.element(i), A.size())) return true;
    found = i;
    return false;
  });
  if (!found) return std::nullopt;
  auto t = term_from_clone(cl, *found);
  if (!is_compatible_term(A, t)) return std::nullopt;
  return t;
}

std::vector<TernaryTermOperation> scan_affine_terms(const FiniteAlgebra& A, std::uint64_t budget,
                                                    std::uint64_t width_limit) {
  if (A.size() == 1) return {TernaryTermOperation(1, {0}, TermTree::variable(0))};
  auto cl = ternary_clone(A, budget, width_limit);
  cl.run();
  std::vector<TernaryTermOperation> out;
  for (std::size_t i = 0; i < cl.size(); ++i) {
    if (!table_is_mal_cev(cl.element(i), A.size())) continue;
    auto t = term_from_clone(cl, i);
    if (is_compatible_term(A, t)) out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.base_table() < b.base_table(); });
  return out;
}

TernaryTermOperation induced_term(const TernaryTermOperation& t, const Homomorphism& surjection) {
  const Element n = t.size();
  const Element m = surjection.codomain().size();
  if (surjection.domain().size() != n) throw InputError("induced term: universe mismatch");
  constexpr Element kUnset = UINT32_MAX;
  std::vector<Element> table(static_cast<std::size_t>(m) * m * m, kUnset);
  for (Element x = 0; x < n; ++x)
    for (Element y = 0; y < n; ++y)
      for (Element z = 0; z < n; ++z) {
        const std::size_t slot = (static_cast<std::size_t>(surjection(x)) * m + surjection(y)) * m + surjection(z);
        const Element v = surjection(t(x, y, z));
        if (table[slot] == kUnset)
          table[slot] = v;
        else if (table[slot] != v)
          throw InvariantError("term is not compatible with the kernel of the map");
      }
  if (std::find(table.begin(), table.end(), kUnset) != table.end())
    throw InputError("induced term: map is not surjective");
  return TernaryTermOperation(m, std::move(table), t.provenance());
}

// ------------------------------------------------------------ GroupStructure

GroupStructure::GroupStructure(Element neutral, std::vector<Element> add, std::vector<Element> neg)
    : size_(static_cast<Element>(neg.size())), neutral_(neutral), add_(std::move(add)), neg_(std::move(neg)) {
  const Element n = size_;
  if (n == 0 || add_.size() != static_cast<std::size_t>(n) * n || neutral >= n)
    throw InvariantError("group tables have inconsistent sizes");
  for (Element v : add_)
    if (v >= n) throw InvariantError("group addition leaves the universe");
  for (Element x = 0; x < n; ++x) {
    if (neg_[x] >= n) throw InvariantError("group negation leaves the universe");
    if (this->add(x, neutral) != x) throw InvariantError("neutral element fails at " + std::to_string(x));
    if (this->add(x, neg_[x]) != neutral) throw InvariantError("inverse fails at " + std::to_string(x));
    for (Element y = 0; y < n; ++y) {
      if (this->add(x, y) != this->add(y, x)) throw InvariantError("addition is not commutative");
      for (Element z = 0; z < n; ++z)
        if (this->add(this->add(x, y), z) != this->add(x, this->add(y, z)))
          throw InvariantError("addition is not associative");
    }
  }
  for (Element x = 0; x < n; ++x) exponent_ = std::lcm(exponent_, order(x));
}

std::uint64_t GroupStructure::order(Element x) const {
  std::uint64_t k = 1;
  for (Element y = x; y != neutral_; y = add(y, x)) ++k;
  return k;
}

Element GroupStructure::times(std::int64_t k, Element x) const {
  const auto e = static_cast<std::int64_t>(exponent_);
  auto r = static_cast<std::uint64_t>(((k % e) + e) % e);
  Element acc = neutral_;
  Element base = x;
  while (r) {
    if (r & 1) acc = add(acc, base);
    base = add(base, base);
    r >>= 1;
  }
  return acc;
}

GroupStructure group_from_affine(const TernaryTermOperation& t, Element c) {
  const Element n = t.size();
  if (c >= n) throw InputError("neutral element outside universe");
  std::vector<Element> add(static_cast<std::size_t>(n) * n);
  std::vector<Element> neg(n);
  for (Element x = 0; x < n; ++x) {
    neg[x] = t(c, x, c);
    for (Element y = 0; y < n; ++y) add[static_cast<std::size_t>(x) * n + y] = t(x, c, y);
  }
  return GroupStructure(c, std::move(add), std::move(neg));
}

// --------------------------------------------------------------- AffineTerm

namespace {
void require_sum_one(std::span<const std::int64_t> c) {
  if (std::accumulate(c.begin(), c.end(), std::int64_t{0}) != 1) {
    std::ostringstream os;
    os << "affine coefficients (";
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
    os << ") do not sum to 1";
    throw InputError(os.str());
  }
}
}  // namespace

AffineTerm::AffineTerm(std::vector<std::int64_t> c) : coeffs(std::move(c)) { require_sum_one(coeffs); }

AffineTerm AffineTerm::projection(int arity, int index) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(arity), 0);
  c.at(static_cast<std::size_t>(index)) = 1;
  return AffineTerm(std::move(c));
}

AffineEvaluator::AffineEvaluator(const TernaryTermOperation& t, Element c) : group_(group_from_affine(t, c)) {}

Element AffineEvaluator::eval(std::span<const std::int64_t> coeffs, std::span<const Element> args) const {
  if (coeffs.size() != args.size()) throw InputError("affine term arity does not match argument count");
  require_sum_one(coeffs);
  Element acc = group_.neutral();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (args[i] >= group_.size()) throw InputError("argument outside universe");
    if (coeffs[i] != 0) acc = group_.add(acc, group_.times(coeffs[i], args[i]));
  }
  return acc;
}

Element eval_affine_combination(const AffineTerm& term, const TernaryTermOperation& t, Element c,
                                std::span<const Element> args) {
  return AffineEvaluator(t, c).eval(term, args);
}

FiniteAlgebra affine_reduct(const TernaryTermOperation& t, std::string name) {
  return FiniteAlgebra(std::move(name), t.size(), {Operation{"t", 3, t.table()}});
}

FiniteAlgebra group_reduct(const GroupStructure& G, std::string name) {
  return FiniteAlgebra(std::move(name), G.size(),
                       {Operation{"+", 2, G.add_table()}, Operation{"-", 1, G.neg_table()},
                        Operation{"0", 0, {G.neutral()}}});
}

}  // namespace adual
