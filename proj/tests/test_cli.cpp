#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"

using cmt::json;

namespace {

struct Result {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cmtorsion");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cmt::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string demo(const std::string& name) { return std::string(CMTORSION_DEMO_DIR) + "/" + name; }

}  // namespace

TEST(Cli, BoundsReport) {
  Result r = run({"bounds", "--theorem", "tadimzero_hY0", "--N", "3", "--d", "1", "--eta", "1/10"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = r.report();
  EXPECT_EQ(j["theorem_id"], "tadimzero_hY0");
  ASSERT_EQ(j["exponents"].size(), 2u);
  EXPECT_EQ(j["exponents"][0]["total"], "21/10");
}

TEST(Cli, BoundsOutOfRange) {
  Result r = run({"bounds", "--theorem", "mlr", "--t", "2", "--N", "4", "--eta", "1/100"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("error: 2t < N violated"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(run({"bounds", "--theorem", "nosuch", "--N", "3"}).code, 2);
  EXPECT_EQ(run({"bounds", "--N", "3"}).code, 2);
  EXPECT_EQ(run({"bounds", "--theorem", "mlr", "--eta", "x"}).code, 2);
}

TEST(Cli, BoundsListAndSweep) {
  Result l = run({"bounds", "--list"});
  ASSERT_EQ(l.code, 0);
  EXPECT_GE(l.report().size(), 40u);
  Result s = run({"bounds", "--theorem", "mlr", "--t", "1", "--eta", "1/100", "--sweep", "N=2:5"});
  ASSERT_EQ(s.code, 0) << s.err;
  std::istringstream is(s.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "N,theorem_id,status,log10_value,value,exponents");
  std::getline(is, line);
  EXPECT_EQ(line.rfind("2,mlr,\"range: 2t < N violated", 0), 0u) << line;
  int ok = 0;
  while (std::getline(is, line)) ok += line.find(",ok,") != std::string::npos;
  EXPECT_EQ(ok, 3);
  EXPECT_EQ(run({"bounds", "--theorem", "mlr", "--sweep", "N=5:2"}).code, 2);
  EXPECT_EQ(run({"bounds", "--theorem", "mlr", "--sweep", "q=1:2"}).code, 2);
}

TEST(Cli, Identities) {
  Result r = run({"identities"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"bounds", "--identities"}).code, 0);
}

TEST(Cli, Classify) {
  Result t = run({"classify", "--module", demo("module.json"), "--point", demo("point_torsion.json"), "--V",
                  demo("curve_e2.json")});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(t.report()["verdict"], "torsion");
  Result e3 = run({"classify", "--module", demo("module.json"), "--point", demo("point_e3.json"), "--V",
                   demo("curve_e3.json")});
  ASSERT_EQ(e3.code, 0) << e3.err;
  EXPECT_TRUE(e3.report().contains("regime"));
  Result mismatch = run({"classify", "--module", demo("module.json"), "--point", demo("point_e3.json"), "--V",
                         demo("curve_e2.json")});
  EXPECT_EQ(mismatch.code, 2);
}

TEST(Cli, ReduceAndLift) {
  Result r = run({"reduce", "--module", demo("module.json"), "--point", demo("gamma_point.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["contains_input"], true);
  Result l = run({"lift", "--module", demo("module.json"), "--point", demo("point_e2.json")});
  ASSERT_EQ(l.code, 0) << l.err;
  EXPECT_EQ(l.report()["contains_lift"], true);
}

TEST(Cli, MatrixCommands) {
  Result o = run({"orthogonal", "--A", demo("a.mat"), "--B", demo("b.mat")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.report()["orthogonal"], true);
  Result self = run({"orthogonal", "--A", demo("a.mat"), "--B", demo("a.mat")});
  EXPECT_EQ(self.report()["orthogonal"], false);
  Result s = run({"siegel", "--system", demo("system.mat"), "--k", "2"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.report()["solutions"].size(), 2u);
  EXPECT_EQ(s.report()["certificate"]["holds"], true);
  Result c = run({"complement", "--matrix", demo("subgroup.mat"), "--square"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_TRUE(c.report().contains("complement"));
  EXPECT_TRUE(c.report().contains("completion"));
}

TEST(Cli, Enumerate) {
  unsetenv("CMTORSION_DISC");
  Result r = run({"enumerate", "--N", "2", "--dim", "1", "--max-X", "2", "--list"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = r.report();
  EXPECT_EQ(j["disc"], -4);
  EXPECT_EQ(j["count"], 6);
  EXPECT_EQ(j["subgroups"].size(), 6u);
  EXPECT_TRUE(j["count_bound"].contains("within"));
  Result k = run({"enumerate", "--N", "2", "--dim", "1", "--max-X", "8", "--check-kernels"});
  EXPECT_EQ(k.report()["kernels_distinct"], true);

  Result csv = run({"enumerate", "--N", "2", "--dim", "1", "--max-X", "2", "--csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "index,witness_row_product,minor_sum,row_product,matrix");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 7);

  Result capped = run({"enumerate", "--N", "4", "--dim", "2", "--max-X", "40", "--time-cap", "0.05"});
  EXPECT_EQ(capped.code, 3);
  EXPECT_EQ(capped.report()["partial"], true);

  setenv("CMTORSION_DISC", "-3", 1);
  EXPECT_EQ(run({"enumerate", "--N", "2", "--dim", "1", "--max-X", "2"}).report()["disc"], -3);
  EXPECT_EQ(run({"enumerate", "--N", "2", "--dim", "1", "--max-X", "2", "--disc", "-7"}).report()["disc"], -7);
  setenv("CMTORSION_DISC", "-5", 1);
  EXPECT_EQ(run({"enumerate", "--N", "2", "--dim", "1", "--max-X", "2"}).code, 2);
  unsetenv("CMTORSION_DISC");

  Result t = run({"enumerate", "--torsion", "--N", "1", "--max-order", "3"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(t.report()["torsion"]["total"], 1 + 3 + 8);
}

TEST(Cli, DeterministicOutput) {
  std::vector<std::string> args{"enumerate", "--N", "2", "--dim", "1", "--max-X", "8", "--list"};
  EXPECT_EQ(run(args).out, run(args).out);
  std::vector<std::string> b{"bounds", "--theorem", "curva_S", "--N", "4", "--d", "1", "--r", "3", "--eta", "1/1000"};
  EXPECT_EQ(run(b).out, run(b).out);
}

TEST(Cli, BadInput) {
  Result missing = run({"siegel", "--system", demo("nosuch.mat")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("cannot read"), std::string::npos);
  auto bad = std::filesystem::temp_directory_path() / "cmtorsion_bad.mat";
  std::ofstream(bad) << "-4 2 1\n1 2 3\n";
  Result r = run({"siegel", "--system", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  std::filesystem::remove(bad);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST(Cli, OutputFile) {
  auto path = std::filesystem::temp_directory_path() / "cmtorsion_out.json";
  Result r = run({"-o", path.string(), "identities"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  json j = json::parse(in);
  EXPECT_FALSE(j.empty());
  std::filesystem::remove(path);
}
