#include <gtest/gtest.h>

#include <sstream>

#include "pdarith/cli.hpp"

using namespace pdarith;

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out call(std::vector<std::string> args) {
  args.insert(args.begin(), "pdarith_cli");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int code = cli::run((int)argv.size(), argv.data(), o, e);
  return {code, o.str(), e.str()};
}

}  // namespace

TEST(Cli, ClosedFormTableCheckPasses) {
  auto r = call({"verify", "lem71", "--R", "1", "--Q", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["checks"][0]["residual"], 0.0);
  EXPECT_TRUE(j["pass"]);
}

TEST(Cli, ArithmeticSideCheckPasses) { EXPECT_EQ(call({"verify", "thm72", "--Q", "1", "--R", "1"}).code, 0); }

TEST(Cli, UnknownFlagIsUsageError) { EXPECT_EQ(call({"verify", "lem71", "--bogus"}).code, 2); }

TEST(Cli, UnknownTargetIsUsageError) { EXPECT_EQ(call({"verify", "nothing"}).code, 2); }

TEST(Cli, UnknownParamIsUsageError) { EXPECT_EQ(call({"verify", "lem71", "--params", "foo=1"}).code, 2); }

TEST(Cli, PreconditionIsUsageError) { EXPECT_EQ(call({"verify", "eq82", "--Q", "3", "--R", "5"}).code, 2); }

TEST(Cli, FailedToleranceExitsOne) { EXPECT_EQ(call({"verify", "thm61", "--tol", "0"}).code, 1); }

TEST(Cli, HelpExitsZero) { EXPECT_EQ(call({"--help"}).code, 0); }

TEST(Cli, VerifyIsDeterministic) {
  for (auto args : std::vector<std::vector<std::string>>{{"verify", "thm61"}, {"verify", "zeta"},
                                                         {"verify", "eq320", "--params", "nu=3+4i"}}) {
    auto a = call(args), b = call(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
}

TEST(Cli, JsonRoundTrip) {
  auto r = call({"compute", "pairing", "--params", "nu=2.5", "route=kernel320"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "compute pairing");
  EXPECT_EQ(j["parameters"]["nu"], "2.5");
  double re = j["values"][0]["value"][0];
  EXPECT_NEAR(re, 0.071972143362838433102, 1e-13);
  EXPECT_EQ(nlohmann::json::parse(j.dump()), j);
}

TEST(Cli, CsvColumnCountConstant) {
  auto r = call({"verify", "eq54", "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6) << line;
    ++rows;
  }
  EXPECT_GT(rows, 4);
}

TEST(Cli, EmptyReportIsValidDocument) {
  cli::RunReport rep;
  std::ostringstream os;
  cli::emit_report(rep, "json", os);
  auto j = nlohmann::json::parse(os.str());
  EXPECT_TRUE(j["checks"].empty());
  EXPECT_TRUE(j["pass"]);
}

TEST(Cli, TimingOnlyOnRequest) {
  auto a = call({"verify", "lem71"});
  EXPECT_EQ(a.out.find("wall_time"), std::string::npos);
  auto b = call({"verify", "lem71", "--timing"});
  EXPECT_NE(b.out.find("wall_time"), std::string::npos);
}

TEST(Cli, ParseComplex) {
  EXPECT_EQ(cli::parse_complex("3+4i"), cplx(3, 4));
  EXPECT_EQ(cli::parse_complex("1-3i"), cplx(1, -3));
  EXPECT_EQ(cli::parse_complex("-2i"), cplx(0, -2));
  EXPECT_EQ(cli::parse_complex("1e-3+2e+1i"), cplx(1e-3, 20));
  EXPECT_EQ(cli::parse_complex("2.5"), cplx(2.5));
  EXPECT_THROW(cli::parse_complex("abc"), std::invalid_argument);
}

TEST(Cli, TableCsv) {
  auto r = call({"table", "coeffs", "--R", "1", "--Q", "3", "--out", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("R,Q,N\n1,3,3\nm,n,value\n", 0), 0u);
}
