#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "adual/affine.hpp"
#include "adual/congruence.hpp"
#include "adual/duality.hpp"
#include "adual/entailment.hpp"
#include "adual/errors.hpp"
#include "adual/factorize.hpp"
#include "adual/hom_groups.hpp"
#include "adual/homs.hpp"
#include "adual/subcong.hpp"
#include "adual/subuniverse.hpp"
#include "adual/text_format.hpp"

namespace adual::cli {

namespace {

struct Options {
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0x5eed;
  int max_power = 2;
  int arity = 0;
  bool force = false;
  std::string partial;
  std::vector<std::string> files;
};

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

int finish(std::ostream& out, bool pass) {
  out << "# verdict: " << verdict(pass) << "\n";
  return pass ? kPass : kFail;
}

int info(std::ostream& out) {
  out << "# verdict: INFO\n";
  return kPass;
}

FiniteAlgebra load_algebra(const std::string& path) { return single_algebra(read_document(path), path); }

TernaryTermOperation require_term(const FiniteAlgebra& A, const Options& o) {
  auto t = find_affine_term(A, o.budget);
  if (!t) throw InputError(A.name() + " has no affine term");
  return *t;
}

std::vector<Relation> load_relations(const std::string& path, const FiniteAlgebra& A) {
  auto doc = read_document(path, {A});
  if (doc.relations.empty()) throw ParseError(path, 1, "", "no relation blocks");
  std::vector<Relation> out;
  for (auto& r : doc.relations) {
    if (r.over != A.name()) throw InputError(path + ": relation " + r.name + " is over " + r.over + ", expected " + A.name());
    out.push_back(std::move(r.relation));
  }
  return out;
}

// Nested reports print as comments, so every output re-parses as a document.
void print_report(std::ostream& out, const CheckReport& r) {
  const auto text = r.render();
  std::size_t start = 0;
  for (auto nl = text.find('\n'); nl != std::string::npos; start = nl + 1, nl = text.find('\n', start))
    out << "  " << text.substr(start, nl + 1 - start);
}

// ---------------------------------------------------------------- verbs

int check_abelian(const Options& o, std::ostream& out) {
  const auto A = load_algebra(o.files[0]);
  auto t = find_affine_term(A, o.budget);
  if (!t) {
    out << "no affine term\n";
    return finish(out, false);
  }
  out << format_term(*t, A);
  return finish(out, true);
}

int bound(const Options& o, std::ostream& out) {
  const auto A = load_algebra(o.files[0]);
  const auto sig = prime_signature(A.size());
  out << "|A| = " << A.size();
  for (std::size_t i = 0; i < sig.factors.size(); ++i)
    out << (i ? " * " : " = ") << sig.factors[i].first << "^" << sig.factors[i].second;
  out << "\nN = " << arity_bound(A.size()) << "\n";
  return info(out);
}

int sub(const Options& o, std::ostream& out) {
  const auto A = load_algebra(o.files[0]);
  const int n = o.arity > 0 ? o.arity : 1;
  const auto rels = enumerate_subuniverses(power_algebra(A, n, o.budget), o.budget);
  for (std::size_t i = 0; i < rels.size(); ++i) out << format_relation("R" + std::to_string(i), A.name(), rels[i]);
  out << "# count = " << rels.size() << "\n";
  return info(out);
}

int galois(const Options& o, std::ostream& out) {
  const auto A = load_algebra(o.files[0]);
  const auto t = require_term(A, o);
  bool pass = true;
  for (auto& carrier : subuniverse_lattice(A, o.budget)) {
    const SubalgebraWitness B(A, carrier);
    const auto r = verify_galois(t, B, o.budget);
    out << "B = {";
    for (std::size_t i = 0; i < carrier.size(); ++i) out << (i ? " " : "") << carrier[i];
    out << "} subalgebras_above=" << r.subalgebras_above << " congruences_above=" << r.congruences_above << " "
        << verdict(r.pass()) << "\n";
    for (const auto& c : r.counterexamples) out << "  " << c << "\n";
    pass = pass && r.pass();
  }
  return finish(out, pass);
}

int hom(const Options& o, std::ostream& out) {
  const auto A = load_algebra(o.files[0]);
  const auto S = load_algebra(o.files[1]);
  const int n = o.arity > 0 ? o.arity : 1;
  const auto homs = enumerate_homs(power_algebra(A, n, o.budget), S, o.budget);
  for (std::size_t i = 0; i < homs.size(); ++i) out << format_hom("h" + std::to_string(i), homs[i], A.name(), S.name());
  out << "# count = " << homs.size() << "\n";
  if (n != 1) return info(out);
  bool pass = true;
  for (auto mode : {HomCountMode::Group, HomCountMode::Abelian}) {
    if (mode == HomCountMode::Abelian && (!find_affine_term(A, o.budget) || !find_affine_term(S, o.budget))) continue;
    const auto r = hom_divisibility_check(A, S, mode, o.budget);
    print_report(out, r);
    pass = pass && r.pass;
  }
  return finish(out, pass);
}

int hk(const Options& o, std::ostream& out) {
  const auto A = load_algebra(o.files[0]);
  const auto S = load_algebra(o.files[1]);
  const auto tA = require_term(A, o);
  const auto tS = require_term(S, o);
  bool pass = true;
  std::optional<HkGroup> first;
  for (const auto& k : enumerate_homs(A, S, o.budget)) {
    auto H = build_hk_group(A, S, tA, tS, k, o.budget);
    const auto F = generating_family(H.group);
    out << "k =";
    for (Element v : k.map()) out << " " << v;
    out << "\n|H_k| = " << H.elements.size() << " generators = " << F.size() << "\n";
    for (const auto& r : {check_hk_bounds(H, F), check_psi_embedding(H, 0, o.budget)}) {
      print_report(out, r);
      pass = pass && r.pass;
    }
    if (first) {
      const auto r = check_phi_isomorphism(*first, H);
      print_report(out, r);
      pass = pass && r.pass;
    } else {
      first = std::move(H);
    }
  }
  const auto r = kearnes_divisibility_check(A, tA, S, o.budget);
  print_report(out, r);
  pass = pass && r.pass;
  return finish(out, pass);
}

int factorize(const Options& o, std::ostream& out) {
  const auto A = load_algebra(o.files[0]);
  const auto S = load_algebra(o.files[1]);
  auto doc = read_document(o.files[2], {A, S});
  if (doc.homs.size() != 1) throw ParseError(o.files[2], 1, "", "expected exactly one hom block");
  const auto& rec = doc.homs.front();
  if (rec.from != A.name() || rec.to != S.name())
    throw InputError(o.files[2] + ": hom goes from " + rec.from + " to " + rec.to + ", expected " + A.name() + " to " + S.name());
  const auto f = resolve_hom(rec, A, S);
  const auto tA = require_term(A, o);
  const auto tS = require_term(S, o);
  const auto k = diagonal_restriction(A, f);
  const auto H = build_hk_group(A, S, tA, tS, k, o.budget);
  const auto F = generating_family(H.group);
  FactorOptions fo;
  fo.N = o.arity;
  fo.seed = o.seed;
  fo.exhaustive_limit = o.budget;
  const auto fac = factor_morphism(H, F, f, fo);
  out << format_factorization(fac, A.name(), S.name());
  out << "# checked = " << fac.identity_checked << (fac.identity_sampled ? " sampled" : " exhaustive") << "\n";
  return finish(out, true);
}

int entail(const Options& o, std::ostream& out) {
  const auto A = load_algebra(o.files[0]);
  const auto t = require_term(A, o);
  const int M = o.arity > 0 ? o.arity : arity_bound(A.size());
  if (M < 2) throw InputError("--arity must be at least 2");
  ReduceOptions ro;
  ro.premise_arity = M;
  ro.force_pipeline = o.force;
  ro.budget = o.budget;
  ro.seed = o.seed;
  const auto rels = load_relations(o.files[1], A);
  std::optional<EntailmentCertificate> elim;
  if (M >= 4) elim = eliminate_t(t, M);
  bool pass = true;
  std::size_t idx = 0;
  for (const auto& R : rels) {
    const auto res = reduce_to_bounded_arity(A, t, R, M - 1, ro);
    auto cert = res.certificate;
    if (elim) cert = derive("R" + std::to_string(idx), A.size(), substitute_premise(cert.root, term_operation(t), elim->root));
    const bool ok = cert.verify(o.budget * 16) && same_value(cert.conclusion, Derived(R));
    const auto premises = cert.premises();
    const bool bounded = std::all_of(premises.begin(), premises.end(), [&](const Derived& d) {
      const auto* P = std::get_if<Relation>(&d);
      return P ? P->arity() == M : !elim;
    });
    out << format_certificate(cert, A.name());
    out << "# components=" << res.components << " nodes=" << cert.num_nodes() << (res.sampled_checks ? " sampled" : "")
        << " replay=" << verdict(ok) << " premise_arity=" << verdict(bounded) << "\n";
    pass = pass && ok && bounded;
    ++idx;
  }
  return finish(out, pass);
}

int refute(const Options& o, std::ostream& out) {
  const auto A = load_algebra(o.files[0]);
  const auto prem = load_relations(o.files[1], A);
  const auto target = load_relations(o.files[2], A);
  if (target.size() != 1) throw InputError(o.files[2] + ": expected one target relation");
  std::vector<Derived> premises(prem.begin(), prem.end());
  for (std::size_t i = 0; i < A.num_operations(); ++i) premises.emplace_back(Operation{A.symbol(i).name, A.arity(i), A.table(i)});
  const int m = o.arity > 0 ? o.arity : 2;
  const auto r = refute_entailment(A.size(), premises, target.front(), m, o.budget * 100);
  out << "searched_arity = " << r.searched_arity << "\nmaps_checked = " << r.maps_checked << "\n";
  if (r.witness) {
    out << "witness arity " << r.witness->arity << ":";
    for (Element v : r.witness->table) out << " " << v;
    out << "\nviolation: " << r.witness->violation << "\n";
    return finish(out, false);
  }
  out << "no separating map up to arity " << m << "\n";
  return info(out);
}

int replay_verb(const Options& o, std::ostream& out) {
  const auto doc = read_document(o.files[0]);
  if (doc.certificates.empty()) throw ParseError(o.files[0], 1, "", "no cert blocks");
  bool pass = true;
  for (const auto& c : doc.certificates) {
    const bool ok = c.certificate.verify(o.budget * 16);
    out << c.certificate.name << " over " << c.over << ": nodes=" << c.certificate.num_nodes()
        << " premises=" << c.certificate.premises().size() << " " << verdict(ok) << "\n";
    pass = pass && ok;
  }
  return finish(out, pass);
}

int duality(const Options& o, std::ostream& out, std::ostream& err) {
  const auto A = load_algebra(o.files[0]);
  const int N = o.arity > 0 ? o.arity : arity_bound(A.size());
  const int k_max = o.max_power;
  if (k_max < 1) throw InputError("--max-power must be positive");
  if (k_max > 2) {
    err << "cost estimate: |A^" << k_max << "| = " << saturating_pow(A.size(), static_cast<std::uint64_t>(k_max))
        << " elements; each subalgebra B needs Hom(B,A) and a search over A^|Hom(B,A)|\n";
    if (!o.force) throw InputError("--max-power above 2 requires --force");
  }
  const auto start = std::chrono::steady_clock::now();
  const AlterEgo ae = o.partial.empty() ? build_alter_ego(A, N, o.budget) : alter_ego_from(A, load_relations(o.partial, A));
  const auto report = verify_duality(ae, k_max, o.budget);
  for (const auto& r : report.subalgebras) {
    out << "B k=" << r.k << " size=" << r.size_b << " homs=" << r.homs << " double_dual=" << r.double_dual
        << " injective=" << (r.injective ? "yes" : "no") << " bijective=" << (r.bijective ? "yes" : "no") << "\n  carrier";
    for (Element e : r.carrier) out << " " << e;
    out << "\n";
    if (r.missing) {
      out << "  missing";
      for (Element e : *r.missing) out << " " << e;
      out << "\n";
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char time[32];
  std::snprintf(time, sizeof time, "%.3fs", secs);
  out << "DUALITY " << verdict(report.pass()) << " k_max=" << k_max << " relations=" << ae.relations.size()
      << (ae.partial ? " (partial)" : "") << " time=" << time << "\n";
  return report.pass() ? kPass : kFail;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite affine algebras: terms, congruences, hom groups, entailment and duality checks", "adual"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> run;

  auto verb = [&](const std::string& name, const std::string& help, std::vector<std::string> inputs,
                  std::function<int()> body) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--budget", o.budget, "element/candidate budget")->capture_default_str();
    auto slots = std::make_shared<std::vector<std::string>>(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) sc->add_option(inputs[i], (*slots)[i], inputs[i] + " file")->required();
    sc->callback([&o, &run, slots, body] {
      o.files = *slots;
      run = body;
    });
    return sc;
  };

  verb("check-abelian", "find the affine term x-y+z", {"algebra"}, [&] { return check_abelian(o, out); });
  verb("bound", "print N = max(4, 1 + max alpha^3)", {"algebra"}, [&] { return bound(o, out); });
  auto* sub_cmd = verb("sub", "list the subuniverses of A^n", {"algebra"}, [&] { return sub(o, out); });
  sub_cmd->add_option("--arity", o.arity, "power n");
  verb("galois", "check the correspondence above every B <= A", {"algebra"}, [&] { return galois(o, out); });
  auto* hom_cmd = verb("hom", "enumerate Hom(A^n, S) and check the counting bounds", {"algebra", "target"},
                       [&] { return hom(o, out); });
  hom_cmd->add_option("--arity", o.arity, "power n");
  verb("hk", "check H_k(A^2,S) for every k in Hom(A,S)", {"algebra", "target"}, [&] { return hk(o, out); });
  auto* fac_cmd = verb("factorize", "factor f: A^n -> S through affine terms", {"algebra", "target", "hom"},
                       [&] { return factorize(o, out); });
  fac_cmd->add_option("--arity", o.arity, "number of generators N (default: family size)");
  fac_cmd->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
  auto* ent_cmd = verb("entail", "derive each relation from relations of a fixed arity and t", {"algebra", "relations"},
                       [&] { return entail(o, out); });
  ent_cmd->add_option("--arity", o.arity, "premise arity (default: the bound N)");
  ent_cmd->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
  ent_cmd->add_flag("--force", o.force, "run the factorization pipeline even for short relations");
  auto* ref_cmd = verb("refute", "search maps A^m -> A preserving the premises but not the target",
                       {"algebra", "premises", "target"}, [&] { return refute(o, out); });
  ref_cmd->add_option("--arity", o.arity, "largest m (default 2)");
  verb("replay", "replay certificates", {"certificates"}, [&] { return replay_verb(o, out); });
  auto* dual_cmd = verb("duality", "check e_B on subalgebras of A^k", {"algebra"}, [&] { return duality(o, out, err); });
  dual_cmd->add_option("--max-power", o.max_power, "largest k")->capture_default_str();
  dual_cmd->add_option("--arity", o.arity, "relation arity (default: the bound N)");
  dual_cmd->add_option("--partial-relations", o.partial, "relation file used instead of all N-ary relations");
  dual_cmd->add_flag("--force", o.force, "allow --max-power above 2");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "adual: " << e.what() << "\n";
    return kInputError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  out << "# adual " << name << " seed=" << o.seed << " budget=" << o.budget << "\n";
  try {
    return run();
  } catch (const BudgetExceeded& e) {
    err << "adual: budget exceeded: " << e.what() << " (refused " << e.refused() << ", budget " << o.budget << ")\n";
    return kBudget;
  } catch (const InputError& e) {
    err << "adual: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace adual::cli
