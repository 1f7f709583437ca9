#pragma once

// Line-oriented text formats. A file is a sequence of blocks:
//
//   algebra NAME / size N / op NAME ARITY / values...
//   relation NAME ARITY over ALGEBRA / t a_1 .. a_k ...
//   hom NAME from ALGEBRA power N to ALGEBRA / m v_0 v_1 ...
//   cong NAME over ALGEBRA / class e_1 e_2 ... ...
//   cert NAME over ALGEBRA size N / conclusion ... / tree ... / end
//
// '#' starts a comment that runs to the end of the line.

#include <string>
#include <string_view>
#include <vector>

#include "adual/algebra.hpp"
#include "adual/entailment.hpp"
#include "adual/factorize.hpp"

namespace adual {

struct NamedRelation {
  std::string name;
  std::string over;
  Relation relation;
};

struct HomRecord {
  std::string name;
  std::string from;
  int power = 1;
  std::string to;
  std::vector<Element> map;
};

struct CongruenceRecord {
  std::string name;
  std::string over;
  std::vector<std::vector<Element>> blocks;
};

struct CertificateRecord {
  std::string over;
  EntailmentCertificate certificate;
};

struct Document {
  std::vector<FiniteAlgebra> algebras;
  std::vector<NamedRelation> relations;
  std::vector<HomRecord> homs;
  std::vector<CongruenceRecord> congruences;
  std::vector<CertificateRecord> certificates;
};

/// Throws ParseError citing `file`, the line and the offending token. Relations
/// name the algebra they live over; it is looked up among the algebras of the
/// document and then `context`.
Document parse_document(std::string_view text, const std::string& file = "<input>",
                        const std::vector<FiniteAlgebra>& context = {});
Document read_document(const std::string& path, const std::vector<FiniteAlgebra>& context = {});

/// The single algebra of a document; ParseError if there is not exactly one.
FiniteAlgebra single_algebra(const Document& doc, const std::string& file);

std::string format_algebra(const FiniteAlgebra& A);
std::string format_relation(const std::string& name, const std::string& over, const Relation& R);
std::string format_hom(const std::string& name, const Homomorphism& h, const std::string& from, const std::string& to);
std::string format_congruence(const std::string& name, const std::string& over, const Congruence& c);
std::string format_certificate(const EntailmentCertificate& cert, const std::string& over);
/// The g block, one `term` line per p_j and the coefficient rows.
std::string format_factorization(const Factorization& F, const std::string& a_name, const std::string& s_name);
/// t as an algebra NAME_term with the single ternary operation "t".
std::string format_term(const TernaryTermOperation& t, const FiniteAlgebra& A);

/// Checks the record against the algebras; the domain is from^power.
Homomorphism resolve_hom(const HomRecord& rec, const FiniteAlgebra& from, const FiniteAlgebra& to);
Congruence resolve_congruence(const CongruenceRecord& rec, const FiniteAlgebra& A);

/// Operation-child indices print as op0, op1, ...; variables as x1, x2, ...
std::string format_term_tree(const TermTree& t);
TermTree parse_term_tree(std::string_view text);

}  // namespace adual
