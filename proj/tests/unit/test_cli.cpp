#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cli_app.hpp"
#include "ncp/cli.hpp"
#include "ncp/period.hpp"

using namespace ncp;

namespace {

std::string data(const std::string& file) { return std::string(NCPERIOD_EXAMPLES_DIR) + "/" + file; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string dims_line(const GradedDims& g) {
  std::string s;
  for (const auto& [n, d] : g.dims) s += (s.empty() ? "" : " ") + std::to_string(d);
  return s;
}

}  // namespace

TEST(AlgebraFile, ShorthandTruncatedPolynomial) {
  DgAlgebra a = parse_algebra_file("trunc_poly 2\n");
  DgAlgebra b = build_truncated_polynomial_algebra(2);
  EXPECT_EQ(a.mult, b.mult);
  EXPECT_EQ(a.unit, b.unit);
  EXPECT_EQ(load_algebra(data("dual.alg")).mult, b.mult);
  EXPECT_EQ(load_algebra("trunc_poly 2").mult, b.mult);
}

TEST(AlgebraFile, ExplicitPathAlgebra) {
  DgAlgebra a = parse_algebra_file(slurp(data("path_a2.alg")));
  EXPECT_EQ(a.dim(), 3);
  EXPECT_EQ(a.name, "path_a2");
  EXPECT_TRUE(validate_dg_algebra(a).valid());
  EXPECT_EQ(a.labels, (std::vector<std::string>{"e0", "e1", "a"}));
  // e0·a = a and a·e0 = 0.
  EXPECT_EQ(a.mult[0][2], SparseVec::unit(2));
  EXPECT_TRUE(a.mult[2][0].empty());
}

TEST(AlgebraFile, MissingUnitIsValidationError) {
  try {
    parse_algebra_file(slurp(data("no_unit.alg")));
    FAIL() << "no error";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.axiom(), "unit");
  }
}

TEST(AlgebraFile, ParseErrorsCarryLines) {
  try {
    parse_algebra_file(slurp(data("bad_field.alg")));
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
  try {
    parse_algebra_file("# comment\nbasis u v\nproduct u u w 1\nunit u\n");
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_algebra_file("basis u\nfrobnicate\n"), ParseError);
  EXPECT_THROW(parse_algebra_file("trunc_poly 2\nbasis u\n"), ParseError);
  EXPECT_THROW(parse_algebra_file("basis u u\n"), ParseError);
  EXPECT_THROW(parse_algebra_file("basis u\nproduct u u u one\nunit u\n"), ParseError);
}

TEST(AlgebraFile, NonAssociativeTableIsRejected) {
  // u·u = v and v·u = 1 but u·v = 0, so (uu)u ≠ u(uu).
  const char* text =
      "basis 1 u v\nproduct 1 1 1 1\nproduct 1 u u 1\nproduct u 1 u 1\nproduct 1 v v 1\nproduct v 1 v 1\n"
      "product u u v 1\nproduct v u 1 1\nunit 1\n";
  EXPECT_THROW(parse_algebra_file(text), ValidationError);
}

TEST(Ring, Loading) {
  EXPECT_EQ(load_ring("dual").dim(), 2);
  EXPECT_EQ(load_ring("eps^3").dim(), 3);
  EXPECT_EQ(load_ring("eps2x2").dim(), 3);
  EXPECT_THROW(load_ring("not-a-ring"), ParseError);
}

TEST(RCochainText, RoundTrip) {
  HochschildContext ctx(build_truncated_polynomial_algebra(2), 4);
  ArtinLocalRing r = load_ring("eps^3");
  RCochain x = parse_rcochain(ctx, r, "e | x,x | 1 | 1; e^2 | x | x | -1/2\ne | | x | 3");
  EXPECT_EQ(x.comps[1].terms.size(), 2u);
  EXPECT_EQ(parse_rcochain(ctx, r, write_rcochain(ctx, r, x)), x);
  EXPECT_THROW(parse_rcochain(ctx, r, "e | y | 1 | 1"), ParseError);
  EXPECT_THROW(parse_rcochain(ctx, r, "f | x | 1 | 1"), ParseError);
  EXPECT_THROW(parse_rcochain(ctx, r, "e | x | 1"), ParseError);
}

TEST(Commands, HochschildHomologyExample) {
  CliResult r = cli({"hh", "compute", "--algebra", "trunc_poly:2", "--degree-range", "0..4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("2 1 1 1 1\n"), std::string::npos) << r.out;
}

TEST(Commands, CalcVerifyOnPath) {
  CliResult r = cli({"calc", "verify", "--algebra", "path:a2", "--arity", "3", "--bar", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    EXPECT_NE(line.find("holds exactly"), std::string::npos) << line;
    ++n;
  }
  EXPECT_GE(n, 3);
}

TEST(Commands, TorelliOnMatrixAlgebra) {
  CliResult r = cli({"period", "torelli", "--algebra", "matrix:2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("dim HH²=0, injective (vacuous)"), std::string::npos) << r.out;
}

TEST(Commands, ExitCodes) {
  EXPECT_EQ(cli({"hh", "--algebra", "nonsense:7"}).code, 2);
  EXPECT_EQ(cli({"hh", "--algebra", "trunc_poly:2", "--degree-range", "3..1"}).code, 2);
  EXPECT_EQ(cli({"hh", "--algebra", "trunc_poly:2", "--no-such-flag"}).code, 2);
  EXPECT_EQ(cli({"hh"}).code, 2);
  EXPECT_EQ(cli({"hh", "--algebra", data("bad_field.alg")}).code, 2);
  EXPECT_EQ(cli({"hh", "--algebra", data("no_unit.alg")}).code, 1);
  EXPECT_EQ(cli({"hh", "--algebra", data("graded.alg")}).code, 1);
  EXPECT_EQ(cli({"deform", "gauge-check", "--algebra", "trunc_poly:2"}).code, 2);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST(Commands, ThreadEnvironmentVariable) {
  ::setenv("NCPERIOD_THREADS", "two", 1);
  EXPECT_EQ(cli({"hh", "--algebra", "Q"}).code, 2);
  ::setenv("NCPERIOD_THREADS", "3", 1);
  EXPECT_EQ(cli({"hh", "--algebra", "Q"}).code, 0);
  ::unsetenv("NCPERIOD_THREADS");
}

TEST(Commands, CyclicAcceptsNegativeDegrees) {
  CliResult r = cli({"cyclic", "--algebra", "Q", "--degree-range=-4..0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("HN 1 0 1 0 1\n"), std::string::npos) << r.out;
  EXPECT_EQ(cli({"hh", "--algebra", "Q", "--degree-range=-1..2"}).code, 2);
}

TEST(Commands, GaugeCheck) {
  CliResult yes = cli({"deform", "gauge-check", "--algebra", "trunc_poly:2", "--x", "e | x,x | 1 | 1", "--y",
                 "e | x,x | 1 | 1; e | x,x | x | 2"});
  EXPECT_EQ(yes.code, 0) << yes.err;
  EXPECT_EQ(yes.out.rfind("gauge equivalent", 0), 0u) << yes.out;
  CliResult no = cli({"deform", "gauge-check", "--algebra", "trunc_poly:2", "--x", "e | x,x | 1 | 1", "--y",
                "e | x,x | 1 | 2"});
  EXPECT_NE(no.out.find("not"), std::string::npos) << no.out;
}

// Each command prints what the library computes.
TEST(ThinAdapter, HochschildDims) {
  for (const char* name : {"trunc_poly:3", "matrix:2", "path:a2"}) {
    CliResult r = cli({"hh", "--algebra", name, "--degree-range", "0..3"});
    DgAlgebra a = algebra_from_name(name);
    HochschildContext ctx = a.has_idempotents() ? HochschildContext::relative(a, 5) : HochschildContext(a, 5);
    EXPECT_NE(r.out.find(dims_line(hochschild_homology(ctx, 0, 3)) + "\n"), std::string::npos) << name << r.out;
  }
  CliResult c = cli({"hhc", "--algebra", "trunc_poly:3", "--degree-range", "0..2"});
  HochschildContext ctx(build_truncated_polynomial_algebra(3), 4);
  EXPECT_NE(c.out.find(dims_line(hochschild_cohomology(ctx, 0, 2, 3)) + "\n"), std::string::npos) << c.out;
}

TEST(ThinAdapter, CyclicAndSpectral) {
  CliResult r = cli({"cyclic", "--algebra", "matrix:2", "--degree-range", "0..3"});
  DgAlgebra m = build_matrix_algebra(2);
  EXPECT_NE(r.out.find("HC " + dims_line(cyclic_homology(m, 0, 3)) + "\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("HN " + dims_line(negative_cyclic_homology(m, 0, 3)) + "\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find(sbi_check(m, 0, 3).str()), std::string::npos);
  CliResult s = cli({"ss", "--algebra", "trunc_poly:2", "--t-window", "-2..2"});
  EXPECT_NE(s.out.find(hodge_spectral_sequence(build_truncated_polynomial_algebra(2), {-2, 2}, 0, 1).str()),
            std::string::npos);
}

TEST(ThinAdapter, CalculusDefect) {
  CliResult r = cli({"calc", "defect", "--algebra", "trunc_poly:2"});
  EXPECT_EQ(r.code, 0);
  for (const auto& rep : calculus_defect(build_truncated_polynomial_algebra(2), CalculusBounds{2, 4, 3}))
    EXPECT_NE(r.out.find(rep.id + ": "), std::string::npos) << rep.id;
}

TEST(ThinAdapter, PeriodCommands) {
  DgAlgebra d = build_truncated_polynomial_algebra(2);
  CliResult m = cli({"period", "matrix", "--algebra", "trunc_poly:2"});
  EXPECT_EQ(m.out.rfind(first_order_period_matrix(d, 0, 4).str(), 0), 0u) << m.out;
  CliResult t = cli({"period", "torelli", "--algebra", "trunc_poly:3"});
  EXPECT_NE(t.out.find(torelli_rank(build_truncated_polynomial_algebra(3), 0, 4).str()), std::string::npos);
  CliResult v = cli({"period", "vdb", "--algebra", "trunc_poly:2", "--dim", "1", "--pi", "1"});
  EXPECT_NE(v.out.find(vdb_duality_check(d, 1, {Rational(1)}, 0, 1).str()), std::string::npos) << v.out;
}

TEST(StructuredOutput, StableKeys) {
  CliResult r = cli({"hh", "--algebra", "trunc_poly:2", "--format", "structured"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("command"), "hh");
  EXPECT_EQ(j.at("dims"), nlohmann::json({2, 1, 1, 1, 1}));
  CliResult t = cli({"period", "torelli", "--algebra", "trunc_poly:3", "--format", "structured"});
  auto k = nlohmann::json::parse(t.out);
  EXPECT_EQ(k.dump().find("injective") != std::string::npos, true);
}

TEST(Determinism, RepeatedRunsAreIdentical) {
  const std::vector<std::vector<std::string>> cmds = {
      {"hh", "--algebra", "trunc_poly:3"},
      {"cyclic", "--algebra", "path:a2", "--format", "structured"},
      {"period", "ptd", "--algebra", "trunc_poly:2", "--x", "e | x,x | 1 | 1"},
      {"deform", "lift", "--algebra", "trunc_poly:2", "--ring", "eps^3"},
  };
  for (const auto& c : cmds) {
    CliResult a = cli(c), b = cli(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << c[0];
  }
}
