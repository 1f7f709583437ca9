#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = adual::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(ADUAL_DATA_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("adual_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::string last_line(const std::string& s) {
  auto end = s.find_last_not_of('\n');
  auto start = s.rfind('\n', end);
  return s.substr(start + 1, end - start);
}

}  // namespace

TEST(Cli, Bound) {
  const auto r = run({"bound", data("z4.alg")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("N = 9\n"), std::string::npos);
}

TEST(Cli, CheckAbelian) {
  auto r = run({"check-abelian", data("semilattice.alg")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("no affine term"), std::string::npos);
  EXPECT_EQ(last_line(r.out), "# verdict: FAIL");
  r = run({"check-abelian", data("z4.alg")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("op t 3\n0 1 2 3 3 0 1 2"), std::string::npos);
  EXPECT_EQ(run({"check-abelian", data("s3.alg")}).code, 1);
}

TEST(Cli, DualitySummary) {
  const auto r = run({"duality", data("z2.alg"), "--max-power", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(last_line(r.out).rfind("DUALITY PASS k_max=2 relations=67 time=", 0), 0u) << r.out;
}

TEST(Cli, DualityNegativeControl) {
  const auto rel = temp_file("diag.rel", "relation D 2 over Z2\nt 0 0\nt 1 1\n");
  const auto r = run({"duality", data("z2.alg"), "--partial-relations", rel});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("missing"), std::string::npos);
  EXPECT_EQ(last_line(r.out).rfind("DUALITY FAIL", 0), 0u);
}

TEST(Cli, HigherPowersNeedForce) {
  auto r = run({"duality", data("z2.alg"), "--max-power", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("cost estimate"), std::string::npos);
  r = run({"duality", data("z2.alg"), "--max-power", "3", "--force"});
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, RejectsUnknownVerbsAndFlags) {
  EXPECT_EQ(run({"frobnicate", data("z2.alg")}).code, 2);
  EXPECT_EQ(run({"bound", data("z2.alg"), "--max-power", "2"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, ParseErrorsCiteFileAndLine) {
  const auto bad = temp_file("bad.alg", "algebra B\nsize 2\nop f 1\n0 9\n");
  const auto r = run({"bound", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(bad + ":4:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("'9'"), std::string::npos);
  EXPECT_EQ(run({"bound", "/nonexistent/x.alg"}).code, 2);
}

TEST(Cli, BudgetExitCode) {
  const auto r = run({"sub", data("z4.alg"), "--arity", "12", "--budget", "1000"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("refused 16777216"), std::string::npos) << r.err;
}

TEST(Cli, DeterministicOutput) {
  for (const auto& args : std::vector<std::vector<std::string>>{{"hk", data("z4.alg"), data("z2.alg")},
                                                                {"galois", data("z6.alg")},
                                                                {"sub", data("z3.alg"), "--arity", "2"}}) {
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, 0) << a.out << a.err;
  }
}

TEST(Cli, EntailThenReplay) {
  const auto sub = run({"sub", data("z2.alg"), "--arity", "3"});
  ASSERT_EQ(sub.code, 0);
  const auto rels = temp_file("z2_3.rel", sub.out);
  const auto ent = run({"entail", data("z2.alg"), rels, "--arity", "4", "--force"});
  ASSERT_EQ(ent.code, 0) << ent.err;
  const auto certs = temp_file("z2_3.cert", ent.out);
  const auto rep = run({"replay", certs});
  EXPECT_EQ(rep.code, 0) << rep.err;
  EXPECT_EQ(last_line(rep.out), "# verdict: PASS");
}

TEST(Cli, HomFactorizeRoundTrip) {
  const auto homs = run({"hom", data("z4.alg"), data("z4.alg"), "--arity", "2"});
  ASSERT_EQ(homs.code, 0);
  const auto start = homs.out.find("hom h7 ");
  const auto end = homs.out.find('\n', homs.out.find('\n', start) + 1);
  const auto f = temp_file("h7.hom", homs.out.substr(start, end - start + 1));
  const auto r = run({"factorize", data("z4.alg"), data("z4.alg"), f});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("exhaustive"), std::string::npos);
}

TEST(Cli, Refute) {
  const auto diag = temp_file("diag2.rel", "relation D 2 over Z2\nt 0 0\nt 1 1\n");
  const auto plus = temp_file("plus.rel", "relation G 3 over Z2\nt 0 0 0\nt 0 1 1\nt 1 0 1\nt 1 1 0\n");
  // The operations of Z2 count as premises, so only the zero map separates {1}.
  const auto one = temp_file("one.rel", "relation O 1 over Z2\nt 1\n");
  auto r = run({"refute", data("z2.alg"), diag, one, "--arity", "1"});
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("witness"), std::string::npos);
  r = run({"refute", data("z2.alg"), diag, plus});
  EXPECT_EQ(r.code, 0);
}
