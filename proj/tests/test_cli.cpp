#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>

using json = nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(CATENT_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const char* name) { return std::string(CATENT_SAMPLES) + "/" + name; }

json run_json(const std::string& args, int expect = 0) {
  CliRun r = run("--json " + args);
  EXPECT_EQ(r.code, expect) << args;
  if (r.code != 0 && r.out.empty()) return json();
  return json::parse(r.out);
}

}  // namespace

TEST(Cli, GrowthJordanBlock) {
  auto j = run_json("growth " + sample("jordan2.json"));
  EXPECT_EQ(j["command"], "growth");
  EXPECT_EQ(j["results"]["rho"], 1);
  EXPECT_EQ(j["results"]["s"], 1);
  EXPECT_EQ(j["results"]["char_poly"], "x^2 - 2*x + 1");
  EXPECT_EQ(j["inputs_digest"].get<std::string>().size(), 64u);
  EXPECT_FALSE(j["version"].get<std::string>().empty());
}

TEST(Cli, GrowthCatMap) {
  auto j = run_json("growth " + sample("cat_map.json"));
  EXPECT_EQ(j["results"]["rho"].dump(), "2.61803398875");
  EXPECT_EQ(j["results"]["log_rho"].dump(), "0.962423650119");
  EXPECT_EQ(j["results"]["s"], 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("growth " + sample("nilpotent.json")).code, 3);
  EXPECT_EQ(run("growth /nonexistent/matrix.json").code, 2);
  EXPECT_EQ(run("classify T1 T7").code, 2);
  EXPECT_EQ(run("classify --context k3 T1").code, 2);
  EXPECT_EQ(run("twist --kind spherical --d 2").code, 2);
  EXPECT_EQ(run("twist --kind banana --d 2 --t 0").code, 2);
  EXPECT_EQ(run("selftest --filter nosuchmodule").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--precision 4 growth " + sample("cat_map.json")).code, 2);
}

TEST(Cli, StdinInput) {
  CliRun r = run("--json growth - < " + sample("cat_map.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["results"]["s"], 0);
}

TEST(Cli, DigestDependsOnContentNotLayout) {
  auto a = run_json("growth " + sample("cat_map.json"));
  const std::string path = testing::TempDir() + "cat_map_layout.json";
  std::ofstream(path) << "[ [2,1],\n  [1,1] ]\n";
  CliRun b = run("--json growth " + path);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(a["inputs_digest"], json::parse(b.out)["inputs_digest"]);
  auto c = run_json("growth " + sample("jordan2.json"));
  EXPECT_NE(a["inputs_digest"], c["inputs_digest"]);
}

TEST(Cli, JsonOutputIsByteIdentical) {
  for (const std::string& args : std::vector<std::string>{"growth " + sample("cat_map.json"), "quiver " + sample("kronecker3.json"),
                                 "estimate " + sample("binomial_p2.txt"), "classify T1 T2^-1"}) {
    CliRun a = run("--json " + args), b = run("--json " + args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, Classify) {
  auto j = run_json("classify T1 T2^-1");
  EXPECT_EQ(j["results"]["classification"], "hyperbolic");
  EXPECT_EQ(j["results"]["h_cat"]["exact"], "log((3+sqrt(5))/2)");
  EXPECT_EQ(j["results"]["h_cat"]["float"].dump(), "0.962423650119");
  EXPECT_EQ(j["results"]["pseudo_anosov"], true);
  EXPECT_EQ(j["results"]["crosscheck"]["consistent"], true);

  EXPECT_EQ(run_json("classify T1")["results"]["classification"], "parabolic");
  EXPECT_EQ(run_json("classify T1 T2 T1 T2 T1 T2")["results"]["classification"], "elliptic");
  auto e = run_json("classify --context elliptic T [3]");
  EXPECT_EQ(e["results"]["h_pol"], 1);
  EXPECT_EQ(e["results"]["shift"], 3);
}

TEST(Cli, Endo) {
  auto j = run_json("endo --kuenneth " + sample("power_map_p2_deg2.json"));
  EXPECT_EQ(j["results"]["h_cat"].dump(), "1.38629436112");
  EXPECT_EQ(j["results"]["h_pol"], 0);
  EXPECT_EQ(j["results"]["plateau"], json::parse("[2, 2]"));
  EXPECT_EQ(j["results"]["self_product"]["checks_passed"], true);

  auto ab = run_json("endo " + sample("abelian_surface_parabolic.json"));
  EXPECT_EQ(ab["results"]["h_pol"], 2);
  EXPECT_EQ(ab["results"]["h_cat"], 0);

  auto bad = run_json("endo " + sample("bad_log_concavity.json"));
  ASSERT_FALSE(bad["warnings"].empty());
  EXPECT_NE(bad["warnings"][0].get<std::string>().find("p = 2"), std::string::npos);
}

TEST(Cli, LineBundle) {
  auto p2 = run_json("linebundle --serre " + sample("hyperplane_p2.json"));
  EXPECT_EQ(p2["results"]["nu"], 2);
  EXPECT_EQ(p2["results"]["h_pol_exact"], 2);
  EXPECT_EQ(p2["results"]["serre"]["h_t_slope"], 2);

  auto bl = run_json("linebundle " + sample("blowup_d_squared_zero.json"));
  EXPECT_EQ(bl["results"]["nu"], 1);
  EXPECT_EQ(bl["results"]["h_pol_bounds"], json::parse("[1, 2]"));
  EXPECT_TRUE(bl["results"]["h_pol_exact"].is_null());
  EXPECT_GT(bl["results"]["h_pol_empirical"].get<double>(), 1.5);
  EXPECT_EQ(bl["results"]["notes"].size(), 1u);
}

TEST(Cli, Twist) {
  auto j = run_json("twist --kind spherical --d 2 --t 0 --A 1 --B 1 --n 10");
  EXPECT_EQ(j["results"]["bound"], 11);
  EXPECT_EQ(j["results"]["recurrence"], 11);
  EXPECT_EQ(j["results"]["h_pol"]["kind"], "interval");

  auto g = run_json("twist --kind spherical --d 3 --t 0.5 --A 1 --B 0 --n 4");
  EXPECT_EQ(g["results"]["bound"].dump(), "2.60823864637");
  EXPECT_EQ(g["results"]["h_t"]["value"], 0);

  auto neg = run_json("twist --kind spherical --d 3 --t -1");
  EXPECT_EQ(neg["results"]["h_t"]["value"], 2);
  EXPECT_EQ(neg["results"]["h_pol"]["value"], 0);

  auto unk = run_json("twist --kind ptwist --d 1 --t 0.3");
  EXPECT_EQ(unk["results"]["h_pol"]["kind"], "unknown");
  auto orth = run_json("twist --kind ptwist --d 1 --t 0.3 --orth");
  EXPECT_EQ(orth["results"]["h_pol"]["value"], 0);

  auto snap = run_json("twist --kind spherical --d 3 --t 1e-15");
  EXPECT_EQ(snap["results"]["branch"], "t=0");
  EXPECT_EQ(snap["warnings"].size(), 1u);
}

TEST(Cli, Quiver) {
  auto k3 = run_json("quiver " + sample("kronecker3.json"));
  EXPECT_EQ(k3["results"]["h_cat"].dump(), "1.92484730024");
  EXPECT_EQ(k3["results"]["coxeter_matrix"], json::parse("[[-1, 3], [-3, 8]]"));
  EXPECT_EQ(k3["results"]["crosscheck"]["agrees"], true);

  auto k2 = run_json("quiver " + sample("kronecker2.json"));
  EXPECT_EQ(k2["results"]["h_pol"], 1);

  auto a2 = run_json("quiver " + sample("a2.json"));
  EXPECT_EQ(a2["results"]["h_pol"], 0);
  EXPECT_EQ(a2["results"]["crosscheck"]["fitted_total_of_all_pairs"], true);

  EXPECT_EQ(run("quiver " + sample("kronecker2.json") + " " + sample("cat_map.json")).code, 3);
}

TEST(Cli, Estimate) {
  auto b = run_json("estimate " + sample("binomial_p2.txt"));
  EXPECT_NEAR(b["results"]["s_hat"].get<double>(), 2.0, 0.15);
  EXPECT_NEAR(b["results"]["rho_hat"].get<double>(), 1.0, 1e-3);

  auto t = run_json("estimate " + sample("shift_tables.json"));
  ASSERT_EQ(t["results"]["grid"].size(), 5u);
  for (const auto& row : t["results"]["grid"])
    EXPECT_NEAR(row["h_hat"].get<double>(), 2 * row["t"].get<double>(), 1e-9);

  auto w = run_json("estimate --n-lo 10 --n-hi 40 " + sample("binomial_p2.txt"));
  EXPECT_EQ(w["results"]["window"], json::parse("[10, 40]"));
  EXPECT_EQ(run("estimate --n-lo 10 --n-hi 12 " + sample("binomial_p2.txt")).code, 3);
}

TEST(Cli, TextOutput) {
  CliRun r = run("growth " + sample("jordan2.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("command: growth"), std::string::npos);
  EXPECT_NE(r.out.find("  s: 1"), std::string::npos);
}

TEST(Cli, SelftestModuleFilter) {
  CliRun r = run("selftest --filter twist_zoo");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
