#include "adual/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "adual/errors.hpp"

namespace adual {

namespace {

// Power tables with at most this many entries are materialized.
constexpr std::uint64_t kMaterializeLimit = std::uint64_t{1} << 22;
// Hard cap on hand-written operation tables.
constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 28;

}  // namespace

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t limit) {
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > limit / base) return std::nullopt;
    result *= base;
    if (result > limit) return std::nullopt;
  }
  return result;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
  return checked_pow(base, exp).value_or(UINT64_MAX);
}

std::uint64_t encode_tuple(std::span<const Element> coords, Element base) {
  std::uint64_t code = 0;
  for (Element c : coords) code = code * base + c;
  return code;
}

Tuple decode_tuple(std::uint64_t code, Element base, int arity) {
  Tuple t(static_cast<std::size_t>(arity));
  for (int i = arity - 1; i >= 0; --i) {
    t[static_cast<std::size_t>(i)] = static_cast<Element>(code % base);
    code /= base;
  }
  return t;
}

struct FiniteAlgebra::Impl {
  std::string name;
  Element size = 0;
  std::vector<OperationSymbol> symbols;
  // An empty table marks an operation evaluated coordinatewise through `base`.
  std::vector<std::vector<Element>> tables;
  std::shared_ptr<const Impl> base;
  int exponent = 1;

  Element apply(std::size_t op, std::span<const Element> args) const {
    const auto& table = tables[op];
    if (!table.empty() || symbols[op].arity == 0) {
      std::uint64_t idx = 0;
      for (Element a : args) idx = idx * size + a;
      return table[idx];
    }
    return apply_coordinatewise(op, args);
  }

  Element apply_coordinatewise(std::size_t op, std::span<const Element> args) const {
    const Impl& b = *base;
    const auto n = static_cast<std::size_t>(exponent);
    const std::size_t k = args.size();
    thread_local std::vector<Element> digits;
    digits.assign(k * n, 0);
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t code = args[i];
      for (std::size_t j = n; j-- > 0;) {
        digits[i * n + j] = static_cast<Element>(code % b.size);
        code /= b.size;
      }
    }
    std::uint64_t result = 0;
    const auto& base_table = b.tables[op];
    if (!base_table.empty()) {
      for (std::size_t j = 0; j < n; ++j) {
        std::uint64_t idx = 0;
        for (std::size_t i = 0; i < k; ++i) idx = idx * b.size + digits[i * n + j];
        result = result * b.size + base_table[idx];
      }
      return static_cast<Element>(result);
    }
    // Power of a lazy power: the thread-local buffers are reused by the nested call.
    const std::vector<Element> mine(digits.begin(), digits.end());
    std::vector<Element> local(k);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < k; ++i) local[i] = mine[i * n + j];
      result = result * b.size + b.apply(op, local);
    }
    return static_cast<Element>(result);
  }
};

FiniteAlgebra::FiniteAlgebra(std::string name, Element size, std::vector<Operation> ops) {
  if (size == 0) throw InputError("algebra '" + name + "': size must be positive");
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->size = size;
  std::set<std::string> seen;
  for (auto& op : ops) {
    if (op.arity < 0) throw InputError("operation '" + op.name + "': negative arity");
    if (!seen.insert(op.name).second)
      throw InputError("algebra '" + impl->name + "': duplicate operation name '" + op.name + "'");
    auto expected = checked_pow(size, static_cast<std::uint64_t>(op.arity), kTableLimit);
    if (!expected) throw BudgetExceeded("operation '" + op.name + "': table too large", saturating_pow(size, op.arity));
    if (op.table.size() != *expected)
      throw InputError("operation '" + op.name + "': table has " + std::to_string(op.table.size()) +
                       " entries, expected " + std::to_string(*expected));
    for (Element v : op.table)
      if (v >= size)
        throw InputError("operation '" + op.name + "': entry " + std::to_string(v) + " outside universe");
    impl->symbols.push_back({op.name, op.arity});
    impl->tables.push_back(std::move(op.table));
  }
  impl_ = std::move(impl);
}

const std::string& FiniteAlgebra::name() const { return impl_->name; }
Element FiniteAlgebra::size() const { return impl_->size; }
std::size_t FiniteAlgebra::num_operations() const { return impl_->symbols.size(); }
const OperationSymbol& FiniteAlgebra::symbol(std::size_t op) const { return impl_->symbols[op]; }
int FiniteAlgebra::arity(std::size_t op) const { return impl_->symbols[op].arity; }

int FiniteAlgebra::max_arity() const {
  int m = 0;
  for (const auto& s : impl_->symbols) m = std::max(m, s.arity);
  return m;
}

std::optional<std::size_t> FiniteAlgebra::find_operation(std::string_view name) const {
  for (std::size_t i = 0; i < impl_->symbols.size(); ++i)
    if (impl_->symbols[i].name == name) return i;
  return std::nullopt;
}

bool FiniteAlgebra::has_constants() const {
  return std::any_of(impl_->symbols.begin(), impl_->symbols.end(),
                     [](const OperationSymbol& s) { return s.arity == 0; });
}

Element FiniteAlgebra::apply(std::size_t op, std::span<const Element> args) const {
  return impl_->apply(op, args);
}

std::vector<Element> FiniteAlgebra::table(std::size_t op) const {
  if (!impl_->tables[op].empty()) return impl_->tables[op];
  std::vector<Element> out;
  for_each_tuple(size(), arity(op), [&](std::span<const Element> args) {
    out.push_back(apply(op, args));
    return true;
  });
  return out;
}

bool FiniteAlgebra::same_signature(const FiniteAlgebra& other) const {
  return impl_->symbols == other.impl_->symbols;
}

FiniteAlgebra FiniteAlgebra::renamed(std::string name) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->name = std::move(name);
  return FiniteAlgebra(std::shared_ptr<const Impl>(std::move(impl)));
}

bool FiniteAlgebra::is_power() const { return impl_->base != nullptr; }
int FiniteAlgebra::power_exponent() const { return impl_->exponent; }
Element FiniteAlgebra::power_base_size() const { return impl_->base ? impl_->base->size : impl_->size; }
FiniteAlgebra FiniteAlgebra::power_base() const {
  return impl_->base ? FiniteAlgebra(impl_->base) : *this;
}

FiniteAlgebra power_algebra(const FiniteAlgebra& A, int n, std::uint64_t budget) {
  if (n < 1) throw InputError("power exponent must be at least 1");
  auto size = checked_pow(A.size(), static_cast<std::uint64_t>(n), budget);
  if (!size)
    throw BudgetExceeded(A.name() + "^" + std::to_string(n) + " has " +
                             std::to_string(saturating_pow(A.size(), n)) + " elements, budget is " +
                             std::to_string(budget),
                         saturating_pow(A.size(), n));
  auto impl = std::make_shared<FiniteAlgebra::Impl>();
  impl->name = A.name() + "^" + std::to_string(n);
  impl->size = static_cast<Element>(*size);
  impl->symbols = A.impl_->symbols;
  impl->base = A.impl_;
  impl->exponent = n;
  impl->tables.resize(impl->symbols.size());
  for (std::size_t op = 0; op < impl->symbols.size(); ++op) {
    const int k = impl->symbols[op].arity;
    auto entries = checked_pow(*size, static_cast<std::uint64_t>(k), kMaterializeLimit);
    if (!entries) continue;
    std::vector<Element> table;
    table.reserve(*entries);
    for_each_tuple(impl->size, k, [&](std::span<const Element> args) {
      table.push_back(impl->apply_coordinatewise(op, args));
      return true;
    });
    impl->tables[op] = std::move(table);
  }
  return FiniteAlgebra(std::shared_ptr<const FiniteAlgebra::Impl>(std::move(impl)));
}

FiniteAlgebra subalgebra(const FiniteAlgebra& A, std::span<const Element> carrier) {
  if (carrier.empty()) throw InputError("subalgebra carrier must be nonempty");
  std::vector<Element> sorted(carrier.begin(), carrier.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::int64_t> index(A.size(), -1);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= A.size()) throw InputError("subalgebra carrier outside universe");
    index[sorted[i]] = static_cast<std::int64_t>(i);
  }
  std::vector<Operation> ops;
  const auto m = static_cast<Element>(sorted.size());
  std::vector<Element> lifted;
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    Operation o{A.symbol(op).name, A.arity(op), {}};
    for_each_tuple(m, o.arity, [&](std::span<const Element> args) {
      lifted.assign(args.size(), 0);
      for (std::size_t i = 0; i < args.size(); ++i) lifted[i] = sorted[args[i]];
      const Element v = A.apply(op, lifted);
      if (index[v] < 0)
        throw InvariantError("carrier is not closed under operation '" + o.name + "'");
      o.table.push_back(static_cast<Element>(index[v]));
      return true;
    });
    ops.push_back(std::move(o));
  }
  return FiniteAlgebra(A.name() + "|sub", m, std::move(ops));
}

// ---------------------------------------------------------------- Relation

Relation::Relation(int arity, Element base_size, std::vector<Tuple> tuples) {
  if (arity < 1) throw InputError("relation arity must be positive");
  arity_ = arity;
  base_size_ = base_size;
  data_.reserve(tuples.size() * static_cast<std::size_t>(arity));
  for (const auto& t : tuples) {
    if (t.size() != static_cast<std::size_t>(arity))
      throw InputError("tuple of length " + std::to_string(t.size()) + " in relation of arity " +
                       std::to_string(arity));
    data_.insert(data_.end(), t.begin(), t.end());
  }
  canonicalize();
}

Relation Relation::from_codes(int arity, Element base_size, std::span<const std::uint64_t> codes) {
  if (arity < 1) throw InputError("relation arity must be positive");
  if (!checked_pow(base_size, static_cast<std::uint64_t>(arity)))
    throw InputError("relation codes overflow 64 bits");
  Relation r;
  r.arity_ = arity;
  r.base_size_ = base_size;
  std::vector<std::uint64_t> sorted(codes.begin(), codes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  r.data_.reserve(sorted.size() * static_cast<std::size_t>(arity));
  for (auto c : sorted) {
    auto t = decode_tuple(c, base_size, arity);
    r.data_.insert(r.data_.end(), t.begin(), t.end());
  }
  r.canonicalize();
  return r;
}

Relation Relation::from_flat(int arity, Element base_size, std::vector<Element> flat) {
  if (arity < 1) throw InputError("relation arity must be positive");
  if (flat.size() % static_cast<std::size_t>(arity) != 0) throw InputError("flat tuple buffer is ragged");
  Relation r;
  r.arity_ = arity;
  r.base_size_ = base_size;
  r.data_ = std::move(flat);
  r.canonicalize();
  return r;
}

void Relation::canonicalize() {
  for (Element v : data_)
    if (v >= base_size_)
      throw InputError("relation entry " + std::to_string(v) + " outside universe of size " +
                       std::to_string(base_size_));
  const std::size_t k = static_cast<std::size_t>(arity_);
  const std::size_t n = data_.size() / k;
  if (n == 0) throw InputError("empty relations are not allowed");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row = [&](std::size_t i) { return data_.begin() + static_cast<std::ptrdiff_t>(i * k); };
  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(row(a), row(a) + static_cast<std::ptrdiff_t>(k), row(b),
                                        row(b) + static_cast<std::ptrdiff_t>(k));
  };
  if (std::is_sorted(order.begin(), order.end(), less)) {
    bool strictly = true;
    for (std::size_t i = 1; i < n && strictly; ++i) strictly = less(i - 1, i);
    if (strictly) return;
  }
  std::sort(order.begin(), order.end(), less);
  std::vector<Element> out;
  out.reserve(data_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && !less(order[i - 1], order[i])) continue;
    out.insert(out.end(), row(order[i]), row(order[i]) + static_cast<std::ptrdiff_t>(k));
  }
  data_ = std::move(out);
}

std::vector<Tuple> Relation::tuples() const {
  std::vector<Tuple> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto t = tuple(i);
    out.emplace_back(t.begin(), t.end());
  }
  return out;
}

std::vector<std::uint64_t> Relation::codes() const {
  if (!checked_pow(base_size_, static_cast<std::uint64_t>(arity_)))
    throw InputError("relation codes overflow 64 bits");
  std::vector<std::uint64_t> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(encode_tuple(tuple(i), base_size_));
  return out;
}

bool Relation::contains(std::span<const Element> t) const {
  if (t.size() != static_cast<std::size_t>(arity_)) return false;
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    auto m = tuple(mid);
    auto cmp = std::lexicographical_compare_three_way(m.begin(), m.end(), t.begin(), t.end());
    if (cmp == 0) return true;
    if (cmp < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return false;
}

bool Relation::is_subset_of(const Relation& other) const {
  if (arity_ != other.arity_) return false;
  std::size_t j = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    auto a = tuple(i);
    while (j < other.size()) {
      auto b = other.tuple(j);
      auto cmp = std::lexicographical_compare_three_way(b.begin(), b.end(), a.begin(), a.end());
      if (cmp < 0) {
        ++j;
        continue;
      }
      if (cmp > 0) return false;
      break;
    }
    if (j == other.size()) return false;
    ++j;
  }
  return true;
}

std::strong_ordering operator<=>(const Relation& a, const Relation& b) {
  if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
  if (auto c = a.base_size_ <=> b.base_size_; c != 0) return c;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return a.data_ <=> b.data_;
}

// -------------------------------------------------------------- Congruence

std::vector<Element> canonical_labels(std::span<const Element> labels, Element* num_classes) {
  std::vector<Element> out(labels.size());
  std::vector<std::int64_t> remap;
  Element next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Element l = labels[i];
    if (l >= remap.size()) remap.resize(static_cast<std::size_t>(l) + 1, -1);
    if (remap[l] < 0) remap[l] = next++;
    out[i] = static_cast<Element>(remap[l]);
  }
  if (num_classes) *num_classes = next;
  return out;
}

bool is_compatible_partition(const FiniteAlgebra& A, std::span<const Element> labels) {
  const Element n = A.size();
  std::vector<Element> rep(n, n);
  for (Element x = 0; x < n; ++x)
    if (rep[labels[x]] == n) rep[labels[x]] = x;
  std::vector<Element> args;
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    const int k = A.arity(op);
    for (int pos = 0; pos < k; ++pos) {
      for (Element u = 0; u < n; ++u) {
        const Element r = rep[labels[u]];
        if (r == u) continue;
        bool ok = for_each_tuple(n, k - 1, [&](std::span<const Element> rest) {
          args.assign(rest.begin(), rest.end());
          args.insert(args.begin() + pos, u);
          const Element a = A.apply(op, args);
          args[static_cast<std::size_t>(pos)] = r;
          const Element b = A.apply(op, args);
          return labels[a] == labels[b];
        });
        if (!ok) return false;
      }
    }
  }
  return true;
}

Congruence Congruence::verified(const FiniteAlgebra& A, std::vector<Element> labels) {
  if (labels.size() != A.size())
    throw InputError("congruence labels cover " + std::to_string(labels.size()) +
                     " elements, algebra has " + std::to_string(A.size()));
  Congruence c;
  c.class_of_ = canonical_labels(labels, &c.num_classes_);
  if (!is_compatible_partition(A, c.class_of_))
    throw InvariantError("partition is not compatible with the operations of " + A.name());
  return c;
}

Congruence Congruence::identity(const FiniteAlgebra& A) {
  Congruence c;
  c.class_of_.resize(A.size());
  std::iota(c.class_of_.begin(), c.class_of_.end(), Element{0});
  c.num_classes_ = A.size();
  return c;
}

Congruence Congruence::full(const FiniteAlgebra& A) {
  Congruence c;
  c.class_of_.assign(A.size(), 0);
  c.num_classes_ = 1;
  return c;
}

bool Congruence::is_below(const Congruence& other) const {
  if (other.base_size() != base_size()) return false;
  // every class of *this must map into one class of other
  std::vector<std::int64_t> image(num_classes_, -1);
  for (Element x = 0; x < base_size(); ++x) {
    auto& slot = image[class_of_[x]];
    if (slot < 0)
      slot = other.class_of_[x];
    else if (slot != static_cast<std::int64_t>(other.class_of_[x]))
      return false;
  }
  return true;
}

std::vector<std::vector<Element>> Congruence::blocks() const {
  std::vector<std::vector<Element>> out(num_classes_);
  for (Element x = 0; x < base_size(); ++x) out[class_of_[x]].push_back(x);
  return out;
}

// ------------------------------------------------------------ Homomorphism

bool is_homomorphism(const FiniteAlgebra& domain, const FiniteAlgebra& codomain,
                     std::span<const Element> map) {
  if (!domain.same_signature(codomain)) return false;
  if (map.size() != domain.size()) return false;
  for (Element v : map)
    if (v >= codomain.size()) return false;
  std::vector<Element> image;
  for (std::size_t op = 0; op < domain.num_operations(); ++op) {
    const bool ok = for_each_tuple(domain.size(), domain.arity(op), [&](std::span<const Element> args) {
      image.resize(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) image[i] = map[args[i]];
      return map[domain.apply(op, args)] == codomain.apply(op, image);
    });
    if (!ok) return false;
  }
  return true;
}

namespace {

void check_map_shape(const FiniteAlgebra& domain, const FiniteAlgebra& codomain,
                     std::span<const Element> map) {
  if (!domain.same_signature(codomain))
    throw InputError("homomorphism between algebras of different signatures: " + domain.name() +
                     " -> " + codomain.name());
  if (map.size() != domain.size())
    throw InputError("map has " + std::to_string(map.size()) + " entries, domain has " +
                     std::to_string(domain.size()));
  for (Element v : map)
    if (v >= codomain.size()) throw InputError("map value outside codomain");
}

}  // namespace

Homomorphism Homomorphism::verified(const FiniteAlgebra& domain, const FiniteAlgebra& codomain,
                                    std::vector<Element> map) {
  check_map_shape(domain, codomain, map);
  if (!is_homomorphism(domain, codomain, map))
    throw InvariantError("map " + domain.name() + " -> " + codomain.name() + " is not a homomorphism");
  return Homomorphism(domain, codomain, std::move(map), true);
}

Homomorphism Homomorphism::sampled(const FiniteAlgebra& domain, const FiniteAlgebra& codomain,
                                   std::vector<Element> map, std::size_t samples, std::uint64_t seed) {
  check_map_shape(domain, codomain, map);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Element> pick(0, domain.size() - 1);
  std::vector<Element> args;
  std::vector<Element> image;
  for (std::size_t op = 0; op < domain.num_operations(); ++op) {
    const auto k = static_cast<std::size_t>(domain.arity(op));
    for (std::size_t s = 0; s < samples; ++s) {
      args.resize(k);
      image.resize(k);
      for (std::size_t i = 0; i < k; ++i) {
        args[i] = pick(rng);
        image[i] = map[args[i]];
      }
      if (map[domain.apply(op, args)] != codomain.apply(op, image))
        throw InvariantError("map " + domain.name() + " -> " + codomain.name() +
                             " is not a homomorphism (sampled witness)");
      if (k == 0) break;
    }
  }
  return Homomorphism(domain, codomain, std::move(map), false);
}

}  // namespace adual
