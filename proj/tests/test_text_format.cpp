#include <gtest/gtest.h>

#include "adual/affine.hpp"
#include "adual/catalog.hpp"
#include "adual/congruence.hpp"
#include "adual/entailment.hpp"
#include "adual/errors.hpp"
#include "adual/homs.hpp"
#include "adual/subuniverse.hpp"
#include "adual/text_format.hpp"

using namespace adual;

namespace {

void expect_same_algebra(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  EXPECT_EQ(a.name(), b.name());
  EXPECT_EQ(a.size(), b.size());
  ASSERT_TRUE(a.same_signature(b));
  for (std::size_t i = 0; i < a.num_operations(); ++i) EXPECT_EQ(a.table(i), b.table(i));
}

ParseError parse_error(const std::string& text) {
  try {
    parse_document(text, "in.alg");
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for:\n" << text;
  return ParseError("", 0, "", "");
}

}  // namespace

TEST(TextFormat, AlgebraRoundTrip) {
  for (const auto& A : {catalog::cyclic_group(4), catalog::symmetric_group_s3(), catalog::two_element_semilattice(),
                        catalog::direct_product(catalog::cyclic_group(2), catalog::cyclic_group(3))}) {
    const auto text = format_algebra(A);
    const auto back = single_algebra(parse_document(text), "x");
    expect_same_algebra(A, back);
    EXPECT_EQ(format_algebra(back), text);
  }
}

TEST(TextFormat, CommentsAndWrappedTables) {
  const auto doc = parse_document(
      "# Z3\nalgebra Z3   # trailing comment\nsize 3\nop + 2\n0 1 2\n1 2 0\n\n2 0 1\nop - 1\n0 2 1\nop 0 0\n0\n");
  ASSERT_EQ(doc.algebras.size(), 1u);
  expect_same_algebra(doc.algebras[0], catalog::cyclic_group(3).renamed("Z3"));
}

TEST(TextFormat, RelationHomCongruenceRoundTrip) {
  const auto Z4 = catalog::cyclic_group(4);
  const auto rels = enumerate_subuniverses(power_algebra(Z4, 2));
  std::string text;
  for (std::size_t i = 0; i < rels.size(); ++i) text += format_relation("R" + std::to_string(i), "Z4", rels[i]);
  const auto homs = enumerate_homs(power_algebra(Z4, 2), Z4);
  for (std::size_t i = 0; i < homs.size(); ++i) text += format_hom("h" + std::to_string(i), homs[i], "Z4", "Z4");
  const auto cons = enumerate_congruences(Z4);
  for (std::size_t i = 0; i < cons.size(); ++i) text += format_congruence("c" + std::to_string(i), "Z4", cons[i]);

  const auto doc = parse_document(text, "x", {Z4});
  ASSERT_EQ(doc.relations.size(), rels.size());
  for (std::size_t i = 0; i < rels.size(); ++i) EXPECT_EQ(doc.relations[i].relation, rels[i]);
  ASSERT_EQ(doc.homs.size(), homs.size());
  for (std::size_t i = 0; i < homs.size(); ++i) EXPECT_EQ(resolve_hom(doc.homs[i], Z4, Z4), homs[i]);
  ASSERT_EQ(doc.congruences.size(), cons.size());
  for (std::size_t i = 0; i < cons.size(); ++i) EXPECT_EQ(resolve_congruence(doc.congruences[i], Z4), cons[i]);
}

TEST(TextFormat, CertificateRoundTrip) {
  const auto Z2 = catalog::cyclic_group(2);
  const auto t = *find_affine_term(Z2);
  ReduceOptions o;
  o.premise_arity = 4;
  o.force_pipeline = true;
  const Relation R = Relation::from_flat(3, 2, {0, 0, 0, 1, 1, 1});
  const auto res = reduce_to_bounded_arity(Z2, t, R, 1, o);
  const auto cert = derive("diag3", 2, substitute_premise(res.certificate.root, term_operation(t), eliminate_t(t, 4).root));
  const auto text = format_certificate(cert, "Z2");
  const auto doc = parse_document(text);
  ASSERT_EQ(doc.certificates.size(), 1u);
  const auto& back = doc.certificates[0].certificate;
  EXPECT_EQ(back.name, "diag3");
  EXPECT_EQ(doc.certificates[0].over, "Z2");
  EXPECT_TRUE(same_value(back.conclusion, cert.conclusion));
  EXPECT_EQ(back.num_nodes(), cert.num_nodes());
  EXPECT_TRUE(back.verify());
  EXPECT_EQ(format_certificate(back, "Z2"), text);
}

TEST(TextFormat, TreeTermsAndOperationConclusions) {
  const auto tree = TermTree::apply(1, {TermTree::variable(2), TermTree::apply(0, {TermTree::variable(0)})});
  EXPECT_EQ(format_term_tree(tree), "op1(x3,op0(x1))");
  EXPECT_EQ(format_term_tree(parse_term_tree("op1(x3,op0(x1))")), "op1(x3,op0(x1))");
  EXPECT_THROW(parse_term_tree("op1(x3"), InputError);
  EXPECT_THROW(parse_term_tree("x0"), InputError);

  const auto cert = eliminate_t(*find_affine_term(catalog::cyclic_group(3)), 5);
  const auto text = format_certificate(cert, "Z3");
  const auto back = parse_document(text).certificates.at(0).certificate;
  EXPECT_TRUE(back.verify());
  EXPECT_EQ(format_certificate(back, "Z3"), text);
}

TEST(TextFormat, TamperedCertificateFailsReplay) {
  const auto cert = eliminate_t(*find_affine_term(catalog::cyclic_group(2)), 4);
  auto text = format_certificate(cert, "Z2");
  // Flip the last value of the stated conclusion table.
  const auto pos = text.find("  v ");
  const auto eol = text.find('\n', pos);
  text[eol - 1] = text[eol - 1] == '0' ? '1' : '0';
  EXPECT_FALSE(parse_document(text).certificates.at(0).certificate.verify());
}

TEST(TextFormat, ErrorsCiteLineAndToken) {
  auto e = parse_error("algebra A\nsize 2\nop f 1\n0 7\n");
  EXPECT_EQ(e.line(), 4u);
  EXPECT_EQ(e.token(), "7");
  EXPECT_EQ(e.file(), "in.alg");
  e = parse_error("algebra A\nsize two\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.token(), "two");
  e = parse_error("algebra A\nsize 2\nop f 1\n0\n");
  EXPECT_EQ(e.line(), 3u);
  e = parse_error("algebra A\nsize 2\nfoo\n");
  EXPECT_EQ(e.token(), "foo");
  e = parse_error("relation R 2 over B\nt 0 0\n");
  EXPECT_EQ(e.token(), "B");
  e = parse_error("algebra A\nsize 2\nrelation R 2 over A\nt 0 0 1\n");
  EXPECT_EQ(e.line(), 4u);
  e = parse_error("algebra A\nsize 2\nrelation R 2 over A\n");
  EXPECT_NE(std::string(e.what()).find("empty relation"), std::string::npos);
  e = parse_error("algebra A\nsize 2\ncong c over A\nclass 0\n");
  EXPECT_NE(std::string(e.what()).find("cover"), std::string::npos);
}

TEST(TextFormat, RejectsIncompatibleCongruence) {
  const auto Z3 = catalog::cyclic_group(3);
  const auto doc = parse_document("cong c over Z3\nclass 0 1\nclass 2\n", "x", {Z3});
  EXPECT_THROW(resolve_congruence(doc.congruences[0], Z3), InputError);
}

TEST(TextFormat, TermDump) {
  const auto Z2 = catalog::cyclic_group(2);
  const auto t = *find_affine_term(Z2);
  const auto A = single_algebra(parse_document(format_term(t, Z2)), "x");
  EXPECT_EQ(A.name(), "Z2_term");
  EXPECT_EQ(A.table(0), t.table());
}
