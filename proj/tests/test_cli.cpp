#include <aks/io.hpp>

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(AKS_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(AKS_DATA_DIR) + "/algebras/" + name; }

aks::Json run_json(const std::string& args, int want_code) {
  const auto r = run(args + " --format json");
  EXPECT_EQ(r.code, want_code) << r.out;
  return aks::Json::parse(r.out);
}

} // namespace

TEST(Cli, ValidateReportsStructure) {
  const auto j = run_json("validate " + data("n18_omega1.json"), 0);
  EXPECT_TRUE(j["valid"].get<bool>());
  EXPECT_EQ(j["nilpotency_step"].get<int>(), 2);
  EXPECT_EQ(j["dim"].get<int>(), 6);
}

TEST(Cli, ParamOverride) {
  const auto a = run_json("minimal " + data("n18_omega1.json") + " --param s=5", 0);
  EXPECT_NEAR(a["critical_norm"].get<double>(), 1.0, 1e-8);
  EXPECT_EQ(a["status"], "found");
  EXPECT_EQ(run("minimal " + data("n18_omega1.json") + " --param s").code, 2);
}

TEST(Cli, MinimalExitCodes) {
  EXPECT_EQ(run("minimal " + data("table3step_11_1_lambda0.json")).code, 0);
  EXPECT_EQ(run("minimal " + data("nonexistence_11_1.json")).code, 3);
  EXPECT_EQ(run("minimal " + data("n11_omega1.json")).code, 4);
  EXPECT_EQ(run("minimal " + data("einstein.json")).code, 4);
  const auto j = run_json("minimal " + data("n13_omega2.json"), 0);
  EXPECT_NEAR(j["beta_norm_sq"].get<double>(), 25.0 / 22, 1e-10);
}

TEST(Cli, CertifyVerdicts) {
  const auto d = run_json("certify " + data("dim8.json"), 0);
  EXPECT_EQ(d["verdict"], "soliton_via_cond2");
  EXPECT_NEAR(d["c"].get<double>(), -3.0 / 56, 1e-10);
  const auto e = run_json("certify " + data("einstein.json"), 0);
  EXPECT_EQ(e["verdict"], "refuted_on_nice_diagonal");
}

TEST(Cli, CurvatureOutput) {
  const auto j = run_json("curvature " + data("einstein.json"), 0);
  ASSERT_TRUE(j.contains("ricci"));
  EXPECT_NEAR(j["ricci"][0][0].get<double>(), -6.0, 1e-10);
}

TEST(Cli, InvalidInput) {
  EXPECT_EQ(run("validate /nonexistent.json").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("minimal " + data("dim8.json") + " --format yaml").code, 2);
}

TEST(Cli, CatalogListAndVerify) {
  const auto l = run("catalog list table2step");
  EXPECT_EQ(l.code, 0);
  EXPECT_NE(l.out.find("table2step.18.1"), std::string::npos);
  EXPECT_EQ(l.out.find("table3step"), std::string::npos);
  const auto v = run("catalog verify example");
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_NE(v.out.find("entries passed"), std::string::npos);
  EXPECT_EQ(run("catalog verify --entry table3step.13.1").code, 5);
  EXPECT_EQ(run("catalog verify --entry example.dim8 --tol 1e-30").code, 5);
  EXPECT_EQ(run("catalog verify --entry no.such.id").code, 2);
}
