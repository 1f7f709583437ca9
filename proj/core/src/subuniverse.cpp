#include "adual/subuniverse.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "adual/errors.hpp"

namespace adual {

namespace {

// Semi-naive closure: elems[0, processed) are closed among themselves.
void close_in_place(const FiniteAlgebra& A, std::vector<Element>& elems, std::vector<char>& member,
                    std::size_t processed) {
  std::vector<Element> args;
  for (std::size_t p = processed; p < elems.size(); ++p) {
    for (std::size_t op = 0; op < A.num_operations(); ++op) {
      const int k = A.arity(op);
      if (k == 0) continue;
      for_each_tuple_touching(p, k, [&](std::span<const std::size_t> idx) {
        args.resize(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) args[i] = elems[idx[i]];
        const Element v = A.apply(op, args);
        if (!member[v]) {
          member[v] = 1;
          elems.push_back(v);
        }
        return true;
      });
    }
  }
}

void add_constants(const FiniteAlgebra& A, std::vector<Element>& elems, std::vector<char>& member) {
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    if (A.arity(op) != 0) continue;
    const Element v = A.apply(op, std::span<const Element>{});
    if (!member[v]) {
      member[v] = 1;
      elems.push_back(v);
    }
  }
}

}  // namespace

std::vector<Element> generated_subuniverse(const FiniteAlgebra& A, std::span<const Element> seed) {
  if (seed.empty() && !A.has_constants())
    throw InputError("empty seed generates the empty set in " + A.name() + " (no constants)");
  std::vector<char> member(A.size(), 0);
  std::vector<Element> elems;
  for (Element s : seed) {
    if (s >= A.size()) throw InputError("seed element " + std::to_string(s) + " outside universe");
    if (!member[s]) {
      member[s] = 1;
      elems.push_back(s);
    }
  }
  add_constants(A, elems, member);
  close_in_place(A, elems, member, 0);
  std::sort(elems.begin(), elems.end());
  return elems;
}

std::vector<Element> extend_subuniverse(const FiniteAlgebra& A, std::span<const Element> closed,
                                        std::span<const Element> extra) {
  if (closed.empty()) return generated_subuniverse(A, extra);
  std::vector<char> member(A.size(), 0);
  std::vector<Element> elems(closed.begin(), closed.end());
  for (Element e : elems) member[e] = 1;
  const std::size_t processed = elems.size();
  for (Element e : extra) {
    if (e >= A.size()) throw InputError("element " + std::to_string(e) + " outside universe");
    if (!member[e]) {
      member[e] = 1;
      elems.push_back(e);
    }
  }
  close_in_place(A, elems, member, processed);
  std::sort(elems.begin(), elems.end());
  return elems;
}

bool is_subuniverse(const FiniteAlgebra& A, std::span<const Element> carrier) {
  if (carrier.empty()) return false;
  std::vector<char> member(A.size(), 0);
  for (Element e : carrier) {
    if (e >= A.size()) return false;
    member[e] = 1;
  }
  std::vector<Element> elems(carrier.begin(), carrier.end());
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  std::vector<Element> args;
  const auto m = static_cast<Element>(elems.size());
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    const bool ok = for_each_tuple(m, A.arity(op), [&](std::span<const Element> idx) {
      args.resize(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) args[i] = elems[idx[i]];
      return member[A.apply(op, args)] != 0;
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<std::vector<Element>> subuniverse_lattice(const FiniteAlgebra& A, std::uint64_t budget) {
  if (A.size() > budget)
    throw BudgetExceeded(A.name() + " has " + std::to_string(A.size()) + " elements, budget is " +
                             std::to_string(budget),
                         A.size());
  std::set<std::vector<Element>> found;
  std::vector<const std::vector<Element>*> queue;
  auto insert = [&](std::vector<Element> s) {
    auto [it, inserted] = found.insert(std::move(s));
    if (inserted) {
      if (found.size() > budget)
        throw BudgetExceeded("more than " + std::to_string(budget) + " subuniverses in " + A.name(),
                             found.size());
      queue.push_back(&*it);
    }
  };
  for (Element x = 0; x < A.size(); ++x) {
    const Element seed[] = {x};
    insert(generated_subuniverse(A, seed));
  }
  std::vector<char> member(A.size(), 0);
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::vector<Element>& S = *queue[q];
    std::fill(member.begin(), member.end(), 0);
    for (Element e : S) member[e] = 1;
    for (Element x = 0; x < A.size(); ++x) {
      if (member[x]) continue;
      const Element extra[] = {x};
      insert(extend_subuniverse(A, S, extra));
    }
  }
  std::vector<std::vector<Element>> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

Relation carrier_to_relation(const FiniteAlgebra& A, std::span<const Element> carrier) {
  std::vector<std::uint64_t> codes(carrier.begin(), carrier.end());
  if (A.is_power()) return Relation::from_codes(A.power_exponent(), A.power_base_size(), codes);
  return Relation::from_codes(1, A.size(), codes);
}

std::vector<Element> relation_to_carrier(const FiniteAlgebra& A, const Relation& R) {
  const int arity = A.is_power() ? A.power_exponent() : 1;
  if (R.arity() != arity || R.base_size() != A.power_base_size())
    throw InputError("relation of arity " + std::to_string(R.arity()) + " does not live in " + A.name());
  std::vector<Element> out;
  out.reserve(R.size());
  for (auto c : R.codes()) out.push_back(static_cast<Element>(c));
  return out;
}

std::vector<Relation> enumerate_subuniverses(const FiniteAlgebra& A, std::uint64_t budget) {
  std::vector<Relation> out;
  for (const auto& s : subuniverse_lattice(A, budget)) out.push_back(carrier_to_relation(A, s));
  return out;
}

// ------------------------------------------------------- RelationMembership

RelationMembership::RelationMembership(const Relation& R) : relation_(&R) {
  auto space = checked_pow(R.base_size(), static_cast<std::uint64_t>(R.arity()), std::uint64_t{1} << 26);
  if (!space) return;
  bitmap_.assign(*space, false);
  for (auto c : R.codes()) bitmap_[c] = true;
}

bool RelationMembership::contains(std::span<const Element> t) const {
  if (!bitmap_.empty()) {
    std::uint64_t code = 0;
    for (Element v : t) {
      if (v >= relation_->base_size()) return false;
      code = code * relation_->base_size() + v;
    }
    return t.size() == static_cast<std::size_t>(relation_->arity()) && bitmap_[code];
  }
  return relation_->contains(t);
}

// ------------------------------------------------------------ compatibility

namespace {

void check_universe(const FiniteAlgebra& A, const Relation& R) {
  if (R.base_size() != A.size())
    throw InputError("relation over a universe of size " + std::to_string(R.base_size()) +
                     " checked against " + A.name() + " of size " + std::to_string(A.size()));
}

// Applies op to rows (coordinatewise); writes into out.
void apply_rows(const FiniteAlgebra& A, std::size_t op, const Relation& R, std::span<const std::size_t> rows,
                std::vector<Element>& out, std::vector<Element>& args) {
  const auto k = static_cast<std::size_t>(R.arity());
  out.resize(k);
  args.resize(rows.size());
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < rows.size(); ++i) args[i] = R.tuple(rows[i])[c];
    out[c] = A.apply(op, args);
  }
}

}  // namespace

std::string incompatibility_witness_within(const FiniteAlgebra& A, const Relation& R, std::uint64_t budget);

bool is_compatible_relation(const FiniteAlgebra& A, const Relation& R, std::uint64_t budget) {
  return incompatibility_witness_within(A, R, budget).empty();
}

std::string incompatibility_witness(const FiniteAlgebra& A, const Relation& R) {
  return incompatibility_witness_within(A, R, 100'000'000);
}

std::string incompatibility_witness_within(const FiniteAlgebra& A, const Relation& R, std::uint64_t budget) {
  check_universe(A, R);
  RelationMembership member(R);
  std::vector<Element> out;
  std::vector<Element> args;
  std::vector<std::size_t> rows;
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    const int k = A.arity(op);
    const auto combos = checked_pow(R.size(), static_cast<std::uint64_t>(k), budget);
    if (!combos)
      throw BudgetExceeded("compatibility check of a relation with " + std::to_string(R.size()) +
                               " tuples needs " + std::to_string(saturating_pow(R.size(), k)) +
                               " evaluations",
                           saturating_pow(R.size(), k));
    std::string witness;
    for_each_tuple(static_cast<Element>(R.size()), k, [&](std::span<const Element> sel) {
      rows.assign(sel.begin(), sel.end());
      apply_rows(A, op, R, rows, out, args);
      if (member.contains(out)) return true;
      std::ostringstream os;
      os << "operation '" << A.symbol(op).name << "' maps rows";
      for (auto r : rows) {
        os << " (";
        auto t = R.tuple(r);
        for (std::size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << t[i];
        os << ")";
      }
      os << " to (";
      for (std::size_t i = 0; i < out.size(); ++i) os << (i ? " " : "") << out[i];
      os << ") outside the relation";
      witness = os.str();
      return false;
    });
    if (!witness.empty()) return witness;
  }
  return {};
}

bool is_compatible_relation_sampled(const FiniteAlgebra& A, const Relation& R, std::size_t samples,
                                    std::uint64_t seed) {
  check_universe(A, R);
  RelationMembership member(R);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, R.size() - 1);
  std::vector<Element> out;
  std::vector<Element> args;
  std::vector<std::size_t> rows;
  for (std::size_t op = 0; op < A.num_operations(); ++op) {
    const auto k = static_cast<std::size_t>(A.arity(op));
    const std::size_t n = k == 0 ? 1 : samples;
    for (std::size_t s = 0; s < n; ++s) {
      rows.resize(k);
      for (auto& r : rows) r = pick(rng);
      apply_rows(A, op, R, rows, out, args);
      if (!member.contains(out)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------- SubpowerClosure

SubpowerClosure::SubpowerClosure(FiniteAlgebra A, std::size_t width, std::uint64_t max_elements)
    : algebra_(std::move(A)),
      width_(width),
      max_elements_(max_elements),
      index_(64, Hash{this}, Eq{this}) {
  if (width == 0) throw InputError("subpower width must be positive");
}

std::span<const Element> SubpowerClosure::view(std::uint32_t idx) const {
  if (idx == kScratch) return scratch_;
  return element(idx);
}

std::size_t SubpowerClosure::Hash::operator()(std::uint32_t idx) const {
  std::uint64_t h = 1469598103934665603ull;
  for (Element v : self->view(idx)) {
    h ^= v;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

bool SubpowerClosure::Eq::operator()(std::uint32_t a, std::uint32_t b) const {
  auto x = self->view(a);
  auto y = self->view(b);
  return std::equal(x.begin(), x.end(), y.begin(), y.end());
}

std::pair<std::size_t, bool> SubpowerClosure::insert_scratch(std::int32_t op,
                                                             std::span<const std::size_t> args) {
  auto it = index_.find(kScratch);
  if (it != index_.end()) return {*it, false};
  if (steps_.size() >= max_elements_)
    throw BudgetExceeded("subpower closure exceeded " + std::to_string(max_elements_) + " elements",
                         steps_.size() + 1);
  const auto idx = static_cast<std::uint32_t>(steps_.size());
  data_.insert(data_.end(), scratch_.begin(), scratch_.end());
  Step step{op, {}};
  step.args.assign(args.begin(), args.end());
  steps_.push_back(std::move(step));
  index_.insert(idx);
  return {idx, true};
}

std::size_t SubpowerClosure::add(std::span<const Element> v) {
  if (v.size() != width_) throw InputError("seed tuple has the wrong width");
  for (Element e : v)
    if (e >= algebra_.size()) throw InputError("seed entry outside universe");
  scratch_.assign(v.begin(), v.end());
  return insert_scratch(-1, {}).first;
}

bool SubpowerClosure::run(const std::function<bool(std::size_t)>& on_new) {
  auto report = [&](std::pair<std::size_t, bool> r) {
    return !r.second || !on_new || on_new(r.first);
  };
  if (!constants_added_) {
    constants_added_ = true;
    for (std::size_t op = 0; op < algebra_.num_operations(); ++op) {
      if (algebra_.arity(op) != 0) continue;
      scratch_.assign(width_, algebra_.apply(op, std::span<const Element>{}));
      if (!report(insert_scratch(static_cast<std::int32_t>(op), {}))) return false;
    }
  }
  std::vector<Element> args;
  for (; processed_ < steps_.size(); ++processed_) {
    const std::size_t p = processed_;
    for (std::size_t op = 0; op < algebra_.num_operations(); ++op) {
      const int k = algebra_.arity(op);
      if (k == 0) continue;
      const bool go_on = for_each_tuple_touching(p, k, [&](std::span<const std::size_t> idx) {
        scratch_.resize(width_);
        args.resize(idx.size());
        for (std::size_t c = 0; c < width_; ++c) {
          for (std::size_t i = 0; i < idx.size(); ++i) args[i] = data_[idx[i] * width_ + c];
          scratch_[c] = algebra_.apply(op, args);
        }
        return report(insert_scratch(static_cast<std::int32_t>(op), idx));
      });
      if (!go_on) return false;
    }
  }
  return true;
}

}  // namespace adual
