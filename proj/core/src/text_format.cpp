#include "adual/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "adual/errors.hpp"

namespace adual {

namespace {

struct Line {
  std::size_t number = 0;
  int indent = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    Line line{number, 0, {}};
    while (line.indent < static_cast<int>(raw.size()) && raw[static_cast<std::size_t>(line.indent)] == ' ') ++line.indent;
    std::istringstream in{std::string(raw)};
    for (std::string tok; in >> tok;) line.tokens.push_back(std::move(tok));
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

class Parser {
 public:
  Parser(std::vector<Line> lines, std::string file, const std::vector<FiniteAlgebra>& context)
      : lines_(std::move(lines)), file_(std::move(file)), context_(context) {}

  Document run() {
    while (pos_ < lines_.size()) {
      const auto& kw = cur().tokens[0];
      if (kw == "algebra") doc_.algebras.push_back(algebra());
      else if (kw == "relation") doc_.relations.push_back(relation());
      else if (kw == "hom") doc_.homs.push_back(hom());
      else if (kw == "cong") doc_.congruences.push_back(congruence());
      else if (kw == "cert") doc_.certificates.push_back(certificate());
      else fail(cur(), kw, "expected a block keyword (algebra, relation, hom, cong, cert)");
    }
    return std::move(doc_);
  }

 private:
  [[noreturn]] void fail(const Line& l, const std::string& token, const std::string& msg) const {
    throw ParseError(file_, l.number, token, msg);
  }
  const Line& cur() const { return lines_[pos_]; }
  bool at(std::string_view kw) const { return pos_ < lines_.size() && cur().tokens[0] == kw; }

  void expect_count(const Line& l, std::size_t n, const char* shape) const {
    if (l.tokens.size() != n) fail(l, l.tokens.size() > n ? l.tokens[n] : l.tokens.back(), std::string("expected '") + shape + "'");
  }
  void expect_word(const Line& l, std::size_t i, std::string_view w) const {
    if (l.tokens[i] != w) fail(l, l.tokens[i], "expected '" + std::string(w) + "'");
  }

  template <class T>
  T number(const Line& l, const std::string& tok) const {
    T v{};
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size()) fail(l, tok, "expected an integer");
    return v;
  }
  Element element(const Line& l, const std::string& tok, Element size) const {
    const auto v = number<Element>(l, tok);
    if (v >= size) fail(l, tok, "element outside universe of size " + std::to_string(size));
    return v;
  }
  int arity(const Line& l, const std::string& tok) const {
    const auto a = number<int>(l, tok);
    if (a < 0) fail(l, tok, "negative arity");
    return a;
  }

  Element size_of(const Line& l, const std::string& name) const {
    for (const auto* list : {&doc_.algebras, &context_})
      for (const auto& A : *list)
        if (A.name() == name) return A.size();
    fail(l, name, "unknown algebra");
  }

  // `count` integers spread over lines whose first token is `tag` (or bare numbers when tag is empty).
  std::vector<Element> values(const Line& head, std::uint64_t count, Element size, std::string_view tag, int min_indent = 0) {
    std::vector<Element> out;
    out.reserve(count);
    while (out.size() < count) {
      if (pos_ >= lines_.size() || cur().indent < min_indent) fail(head, "", "table ends early: " + std::to_string(out.size()) + " of " + std::to_string(count) + " values");
      const Line& l = cur();
      std::size_t i = 0;
      if (!tag.empty()) {
        if (l.tokens[0] != tag) fail(l, l.tokens[0], "expected '" + std::string(tag) + "' line");
        i = 1;
      } else if (!std::isdigit(static_cast<unsigned char>(l.tokens[0][0]))) {
        fail(l, l.tokens[0], "table ends early: " + std::to_string(out.size()) + " of " + std::to_string(count) + " values");
      }
      for (; i < l.tokens.size(); ++i) {
        if (out.size() == count) fail(l, l.tokens[i], "too many table values");
        out.push_back(element(l, l.tokens[i], size));
      }
      ++pos_;
    }
    return out;
  }

  FiniteAlgebra algebra() {
    const Line& head = cur();
    expect_count(head, 2, "algebra NAME");
    const std::string name = head.tokens[1];
    ++pos_;
    if (!at("size")) fail(pos_ < lines_.size() ? cur() : head, pos_ < lines_.size() ? cur().tokens[0] : "", "expected 'size N'");
    const Line& sl = cur();
    expect_count(sl, 2, "size N");
    const auto size = number<Element>(sl, sl.tokens[1]);
    if (size == 0) fail(sl, sl.tokens[1], "empty universe");
    ++pos_;
    std::vector<Operation> ops;
    while (at("op")) {
      const Line& ol = cur();
      expect_count(ol, 3, "op NAME ARITY");
      Operation op{ol.tokens[1], arity(ol, ol.tokens[2]), {}};
      for (const auto& o : ops)
        if (o.name == op.name) fail(ol, op.name, "duplicate operation name");
      const auto count = checked_pow(size, static_cast<std::uint64_t>(op.arity), kDefaultBudget * 16);
      if (!count) fail(ol, ol.tokens[2], "operation table too large");
      ++pos_;
      op.table = values(ol, *count, size, "");
      ops.push_back(std::move(op));
    }
    try {
      return FiniteAlgebra(name, size, std::move(ops));
    } catch (const InputError& e) {
      fail(head, name, e.what());
    }
  }

  NamedRelation relation() {
    const Line& head = cur();
    expect_count(head, 5, "relation NAME ARITY over ALGEBRA");
    expect_word(head, 3, "over");
    const int k = arity(head, head.tokens[2]);
    if (k == 0) fail(head, head.tokens[2], "relations have positive arity");
    const Element size = size_of(head, head.tokens[4]);
    ++pos_;
    std::vector<Element> flat;
    while (at("t")) {
      const Line& l = cur();
      if (l.tokens.size() != static_cast<std::size_t>(k) + 1)
        fail(l, l.tokens.back(), "tuple has " + std::to_string(l.tokens.size() - 1) + " entries, expected " + std::to_string(k));
      for (std::size_t i = 1; i < l.tokens.size(); ++i) flat.push_back(element(l, l.tokens[i], size));
      ++pos_;
    }
    if (flat.empty()) fail(head, head.tokens[1], "empty relation");
    return NamedRelation{head.tokens[1], head.tokens[4], Relation::from_flat(k, size, std::move(flat))};
  }

  HomRecord hom() {
    const Line& head = cur();
    expect_count(head, 8, "hom NAME from ALGEBRA power N to ALGEBRA");
    expect_word(head, 2, "from");
    expect_word(head, 4, "power");
    expect_word(head, 6, "to");
    HomRecord r{head.tokens[1], head.tokens[3], arity(head, head.tokens[5]), head.tokens[7], {}};
    if (r.power < 1) fail(head, head.tokens[5], "power must be positive");
    const auto dom = checked_pow(size_of(head, r.from), static_cast<std::uint64_t>(r.power), kDefaultBudget * 64);
    if (!dom) fail(head, head.tokens[5], "domain too large");
    const Element to = size_of(head, r.to);
    ++pos_;
    r.map = values(head, *dom, to, "m");
    return r;
  }

  CongruenceRecord congruence() {
    const Line& head = cur();
    expect_count(head, 4, "cong NAME over ALGEBRA");
    expect_word(head, 2, "over");
    const Element size = size_of(head, head.tokens[3]);
    CongruenceRecord r{head.tokens[1], head.tokens[3], {}};
    ++pos_;
    std::vector<char> seen(size, 0);
    while (at("class")) {
      const Line& l = cur();
      if (l.tokens.size() < 2) fail(l, l.tokens[0], "empty class");
      std::vector<Element> block;
      for (std::size_t i = 1; i < l.tokens.size(); ++i) {
        const Element e = element(l, l.tokens[i], size);
        if (seen[e]) fail(l, l.tokens[i], "element listed twice");
        seen[e] = 1;
        block.push_back(e);
      }
      r.blocks.push_back(std::move(block));
      ++pos_;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) fail(head, head.tokens[1], "classes do not cover the universe");
    return r;
  }

  // Value block of a premise or conclusion: `relation ARITY` + t lines, or `op NAME ARITY` + v lines.
  Derived value(const Line& head, std::size_t at_tok, Element size, int child_indent) {
    const auto& kind = head.tokens[at_tok];
    if (kind == "relation") {
      if (head.tokens.size() != at_tok + 2) fail(head, kind, "expected 'relation ARITY'");
      const int k = arity(head, head.tokens[at_tok + 1]);
      if (k == 0) fail(head, head.tokens[at_tok + 1], "relations have positive arity");
      std::vector<Element> flat;
      while (pos_ < lines_.size() && cur().indent >= child_indent && at("t")) {
        const Line& l = cur();
        if (l.tokens.size() != static_cast<std::size_t>(k) + 1) fail(l, l.tokens.back(), "tuple has the wrong arity");
        for (std::size_t i = 1; i < l.tokens.size(); ++i) flat.push_back(element(l, l.tokens[i], size));
        ++pos_;
      }
      if (flat.empty()) fail(head, kind, "empty relation");
      return Relation::from_flat(k, size, std::move(flat));
    }
    if (kind == "op") {
      if (head.tokens.size() != at_tok + 3) fail(head, kind, "expected 'op NAME ARITY'");
      Operation op{head.tokens[at_tok + 1], arity(head, head.tokens[at_tok + 2]), {}};
      const auto count = checked_pow(size, static_cast<std::uint64_t>(op.arity), kDefaultBudget * 16);
      if (!count) fail(head, head.tokens[at_tok + 2], "operation table too large");
      op.table = values(head, *count, size, "v", child_indent);
      return op;
    }
    fail(head, kind, "expected 'relation' or 'op'");
  }

  CertNode node(int indent, Element size) {
    if (pos_ >= lines_.size()) fail(lines_.back(), "", "certificate ends early");
    const Line& head = cur();
    if (head.indent != indent) fail(head, head.tokens[0], "expected indentation " + std::to_string(indent));
    const auto& kw = head.tokens[0];
    const int inner = indent + 2;
    ++pos_;
    auto children = [&] {
      std::vector<CertNode> out;
      while (pos_ < lines_.size() && cur().indent >= inner && !at("end")) out.push_back(node(inner, size));
      return out;
    };
    if (kw == "premise") {
      if (head.tokens.size() < 2) fail(head, kw, "expected 'premise relation ARITY' or 'premise op NAME ARITY'");
      return premise(value(head, 1, size, inner));
    }
    if (kw == "intersect") {
      expect_count(head, 1, "intersect");
      return intersect(children());
    }
    if (kw == "preimage") {
      expect_count(head, 2, "preimage ARITY");
      const int k = arity(head, head.tokens[1]);
      std::vector<PreimageTerm> terms;
      while (pos_ < lines_.size() && cur().indent == inner && at("term")) {
        const Line& l = cur();
        if (l.tokens.size() < 3) fail(l, l.tokens[0], "expected 'term affine C..' or 'term tree EXPR'");
        if (l.tokens[1] == "affine") {
          std::vector<std::int64_t> c;
          for (std::size_t i = 2; i < l.tokens.size(); ++i) c.push_back(number<std::int64_t>(l, l.tokens[i]));
          try {
            terms.emplace_back(AffineTerm(std::move(c)));
          } catch (const InputError& e) {
            fail(l, l.tokens[2], e.what());
          }
        } else if (l.tokens[1] == "tree") {
          if (l.tokens.size() != 3) fail(l, l.tokens[3], "term trees contain no spaces");
          try {
            terms.emplace_back(parse_term_tree(l.tokens[2]));
          } catch (const InputError& e) {
            fail(l, l.tokens[2], e.what());
          }
        } else {
          fail(l, l.tokens[1], "expected 'affine' or 'tree'");
        }
        ++pos_;
      }
      auto kids = children();
      if (kids.empty()) fail(head, kw, "preimage needs a relation");
      CertNode rel = std::move(kids.front());
      kids.erase(kids.begin());
      return preimage(std::move(rel), std::move(kids), k, std::move(terms));
    }
    if (kw == "strip") {
      expect_count(head, 1, "strip");
      auto kids = children();
      if (kids.size() != 1) fail(head, kw, "strip takes one relation");
      return strip(std::move(kids.front()));
    }
    if (kw == "graph") {
      expect_count(head, 2, "graph NAME");
      auto kids = children();
      if (kids.size() != 1) fail(head, kw, "graph takes one relation");
      return graph_to_operation(std::move(kids.front()), head.tokens[1]);
    }
    fail(head, kw, "expected a rule (premise, intersect, preimage, strip, graph)");
  }

  CertificateRecord certificate() {
    const Line& head = cur();
    expect_count(head, 6, "cert NAME over ALGEBRA size N");
    expect_word(head, 2, "over");
    expect_word(head, 4, "size");
    const auto size = number<Element>(head, head.tokens[5]);
    if (size == 0) fail(head, head.tokens[5], "empty universe");
    ++pos_;
    if (!at("conclusion")) fail(pos_ < lines_.size() ? cur() : head, pos_ < lines_.size() ? cur().tokens[0] : "", "expected 'conclusion'");
    const Line& cl = cur();
    if (cl.tokens.size() < 2) fail(cl, cl.tokens[0], "expected a conclusion value");
    ++pos_;
    Derived conclusion = value(cl, 1, size, cl.indent + 2);
    if (!at("tree")) fail(pos_ < lines_.size() ? cur() : head, pos_ < lines_.size() ? cur().tokens[0] : "", "expected 'tree'");
    const int indent = cur().indent + 2;
    ++pos_;
    CertNode root = node(indent, size);
    if (!at("end")) fail(pos_ < lines_.size() ? cur() : head, pos_ < lines_.size() ? cur().tokens[0] : "", "expected 'end'");
    ++pos_;
    return CertificateRecord{head.tokens[3], EntailmentCertificate{head.tokens[1], size, std::move(conclusion), std::move(root)}};
  }

  std::vector<Line> lines_;
  std::string file_;
  const std::vector<FiniteAlgebra>& context_;
  std::size_t pos_ = 0;
  Document doc_;
};

void append_values(std::string& out, std::span<const Element> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
}

void append_value(std::string& out, const Derived& d, const std::string& pad) {
  if (const auto* R = std::get_if<Relation>(&d)) {
    out += "relation " + std::to_string(R->arity()) + "\n";
    for (std::size_t i = 0; i < R->size(); ++i) {
      out += pad + "t ";
      append_values(out, R->tuple(i));
      out += '\n';
    }
  } else {
    const auto& op = std::get<Operation>(d);
    out += "op " + op.name + " " + std::to_string(op.arity) + "\n" + pad + "v ";
    append_values(out, op.table);
    out += '\n';
  }
}

void append_node(std::string& out, const CertNode& n, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  const std::string inner(static_cast<std::size_t>(indent + 2), ' ');
  out += pad;
  switch (n.kind) {
    case CertNode::Kind::Premise:
      out += "premise ";
      append_value(out, *n.value, inner);
      return;
    case CertNode::Kind::Intersection:
      out += "intersect\n";
      break;
    case CertNode::Kind::Preimage:
      out += "preimage " + std::to_string(n.arity) + "\n";
      for (const auto& t : n.terms) {
        out += inner + "term ";
        if (const auto* a = std::get_if<AffineTerm>(&t)) {
          out += "affine";
          for (auto c : a->coeffs) out += " " + std::to_string(c);
        } else {
          out += "tree " + format_term_tree(std::get<TermTree>(t));
        }
        out += '\n';
      }
      break;
    case CertNode::Kind::Strip:
      out += "strip\n";
      break;
    case CertNode::Kind::GraphToOperation:
      out += "graph " + n.name + "\n";
      break;
  }
  for (const auto& c : n.children) append_node(out, c, indent + 2);
}

}  // namespace

Document parse_document(std::string_view text, const std::string& file, const std::vector<FiniteAlgebra>& context) {
  return Parser(split_lines(text), file, context).run();
}

Document read_document(const std::string& path, const std::vector<FiniteAlgebra>& context) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), path, context);
}

FiniteAlgebra single_algebra(const Document& doc, const std::string& file) {
  if (doc.algebras.size() != 1)
    throw ParseError(file, 1, "", "expected exactly one algebra, found " + std::to_string(doc.algebras.size()));
  return doc.algebras.front();
}

std::string format_algebra(const FiniteAlgebra& A) {
  std::string out = "algebra " + A.name() + "\nsize " + std::to_string(A.size()) + "\n";
  for (std::size_t i = 0; i < A.num_operations(); ++i) {
    out += "op " + A.symbol(i).name + " " + std::to_string(A.arity(i)) + "\n";
    append_values(out, A.table(i));
    out += '\n';
  }
  return out;
}

std::string format_relation(const std::string& name, const std::string& over, const Relation& R) {
  std::string out = "relation " + name + " " + std::to_string(R.arity()) + " over " + over + "\n";
  for (std::size_t i = 0; i < R.size(); ++i) {
    out += "t ";
    append_values(out, R.tuple(i));
    out += '\n';
  }
  return out;
}

std::string format_hom(const std::string& name, const Homomorphism& h, const std::string& from, const std::string& to) {
  std::string out = "hom " + name + " from " + from + " power " + std::to_string(h.domain().power_exponent()) + " to " + to +
                    "\nm ";
  append_values(out, h.map());
  return out + "\n";
}

std::string format_congruence(const std::string& name, const std::string& over, const Congruence& c) {
  std::string out = "cong " + name + " over " + over + "\n";
  for (const auto& b : c.blocks()) {
    out += "class ";
    append_values(out, b);
    out += '\n';
  }
  return out;
}

std::string format_certificate(const EntailmentCertificate& cert, const std::string& over) {
  std::string out = "cert " + cert.name + " over " + over + " size " + std::to_string(cert.base_size) + "\nconclusion ";
  append_value(out, cert.conclusion, "  ");
  out += "tree\n";
  append_node(out, cert.root, 2);
  return out + "end\n";
}

std::string format_factorization(const Factorization& F, const std::string& a_name, const std::string& s_name) {
  std::string out = "# f: " + a_name + "^" + std::to_string(F.n) + " -> " + s_name + " as g(p_1, .., p_" +
                    std::to_string(F.N + 1) + ")\n";
  out += format_hom("g", F.g, a_name, s_name);
  for (const auto& p : F.terms) {
    out += "term";
    for (auto c : p.coeffs) out += " " + std::to_string(c);
    out += '\n';
  }
  for (const auto& row : F.coefficients) {
    out += "coeff";
    for (auto c : row) out += " " + std::to_string(c);
    out += '\n';
  }
  return out;
}

std::string format_term(const TernaryTermOperation& t, const FiniteAlgebra& A) {
  std::string out = "algebra " + A.name() + "_term\nsize " + std::to_string(t.base_size()) + "\n";
  if (t.provenance()) out += "# t(x1,x2,x3) = " + t.provenance()->to_string(A) + "\n";
  out += "op t 3\n";
  append_values(out, t.base_table());
  return out + "\n";
}

Homomorphism resolve_hom(const HomRecord& rec, const FiniteAlgebra& from, const FiniteAlgebra& to) {
  auto dom = power_algebra(from, rec.power, kDefaultBudget * 64);
  if (rec.map.size() != dom.size()) throw InputError("hom " + rec.name + " lists the wrong number of images");
  if (dom.size() <= kDefaultBudget) return Homomorphism::verified(dom, to, rec.map);
  return Homomorphism::sampled(dom, to, rec.map, 10'000, 0x5eed);
}

Congruence resolve_congruence(const CongruenceRecord& rec, const FiniteAlgebra& A) {
  std::vector<Element> labels(A.size(), 0);
  for (std::size_t b = 0; b < rec.blocks.size(); ++b)
    for (Element e : rec.blocks[b]) {
      if (e >= A.size()) throw InputError("congruence " + rec.name + " mentions an element outside " + A.name());
      labels[e] = static_cast<Element>(b);
    }
  if (!is_compatible_partition(A, labels)) throw InputError("cong " + rec.name + " is not compatible with " + A.name());
  return Congruence::verified(A, std::move(labels));
}

std::string format_term_tree(const TermTree& t) {
  if (t.is_variable()) return "x" + std::to_string(t.variable_index() + 1);
  std::string s = "op" + std::to_string(t.op()) + "(";
  for (std::size_t i = 0; i < t.children().size(); ++i) {
    if (i) s += ',';
    s += format_term_tree(t.children()[i]);
  }
  return s + ")";
}

TermTree parse_term_tree(std::string_view text) {
  std::size_t pos = 0;
  auto index = [&](std::size_t offset) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(text.data() + pos + offset, text.data() + text.size(), v);
    if (ec != std::errc{}) throw InputError("expected an index in term '" + std::string(text) + "'");
    pos = static_cast<std::size_t>(p - text.data());
    return v;
  };
  std::function<TermTree()> parse = [&]() -> TermTree {
    if (text.substr(pos, 1) == "x") {
      const auto v = index(1);
      if (v == 0) throw InputError("variables start at x1");
      return TermTree::variable(static_cast<int>(v - 1));
    }
    if (text.substr(pos, 2) != "op") throw InputError("expected xK or opK( in term '" + std::string(text) + "'");
    const auto op = index(2);
    if (text.substr(pos, 1) != "(") throw InputError("expected '(' in term '" + std::string(text) + "'");
    ++pos;
    std::vector<TermTree> kids;
    if (text.substr(pos, 1) != ")") {
      for (;;) {
        kids.push_back(parse());
        if (text.substr(pos, 1) == ",") {
          ++pos;
          continue;
        }
        break;
      }
    }
    if (text.substr(pos, 1) != ")") throw InputError("expected ')' in term '" + std::string(text) + "'");
    ++pos;
    return TermTree::apply(op, std::move(kids));
  };
  TermTree t = parse();
  if (pos != text.size()) throw InputError("trailing characters in term '" + std::string(text) + "'");
  return t;
}

}  // namespace adual
