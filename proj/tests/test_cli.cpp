#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "cli.hpp"
#include "nl4s/field_io.hpp"
#include "nl4s/spectral.hpp"
#include "nlohmann/json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nl4s_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json summary(const fs::path& dir) { return json::parse(slurp(dir / "summary.json")); }

int run(std::vector<std::string> args) { return nl4s::cli::run(args); }

}  // namespace

TEST(Cli, Exponents) {
  const fs::path out = scratch("exp");
  ASSERT_EQ(run({"exponents", "-d", "1", "-a", "10", "--out", out.string()}), 0);
  const json s = summary(out);
  EXPECT_EQ(s["command"], "exponents");
  EXPECT_EQ(s["version"], NL4S_VERSION);
  EXPECT_EQ(s["config"]["d"], 1);
  EXPECT_DOUBLE_EQ(s["result"]["gamma_c"].get<double>(), 0.1);
  EXPECT_DOUBLE_EQ(s["result"]["rate_exp"].get<double>(), 0.475);
  EXPECT_FALSE(s["result"].contains("lwp"));

  const fs::path out5 = scratch("exp5");
  ASSERT_EQ(run({"exponents", "--out", out5.string()}), 0);
  EXPECT_TRUE(summary(out5)["result"].contains("lwp"));
}

TEST(Cli, ValidationErrors) {
  const fs::path out = scratch("bad");
  EXPECT_EQ(run({"exponents", "--set", "bogus=1", "--out", out.string()}), 2);
  EXPECT_EQ(run({"exponents", "-d", "0", "--out", out.string()}), 2);
  EXPECT_EQ(run({"exponents", "--set", "d=\"five\"", "--out", out.string()}), 2);
  EXPECT_EQ(run({"groundstate", "-N", "100", "--out", out.string()}), 2);
  EXPECT_EQ(run({"nosuchcommand"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"--version"}), 0);
}

TEST(Cli, ConfigFile) {
  const fs::path out = scratch("cfg");
  EXPECT_EQ(run({"exponents", "--config", "/nonexistent/nl4s.json", "--out", out.string()}), 4);
  fs::create_directories(out);
  std::ofstream(out / "c.json") << R"({"d": 8, "alpha": 1.5})";
  ASSERT_EQ(run({"exponents", "--config", (out / "c.json").string(), "--out", out.string()}), 0);
  EXPECT_EQ(summary(out)["config"]["d"], 8);
  // flags override the file
  ASSERT_EQ(run({"exponents", "--config", (out / "c.json").string(), "-d", "6", "--out", out.string()}), 0);
  EXPECT_EQ(summary(out)["config"]["d"], 6);
  std::ofstream(out / "broken.json") << "{d: ";
  EXPECT_EQ(run({"exponents", "--config", (out / "broken.json").string(), "--out", out.string()}), 2);
}

TEST(Cli, UnwritableOutput) {
  EXPECT_EQ(run({"exponents", "--out", "/proc/nl4s_cannot_write_here"}), 4);
}

TEST(Cli, GroundstateWritesProfile) {
  const fs::path out = scratch("gs");
  ASSERT_EQ(run({"groundstate", "-L", "40", "-N", "512", "--out", out.string()}), 0);
  const json r = summary(out)["result"];
  EXPECT_LT(r["residual_l2"].get<double>(), 1e-8);
  const nl4s::Snapshot q = nl4s::read_field((out / "Q.nl4s").string());
  EXPECT_EQ(q.field.grid.size(), 512);
}

TEST(Cli, SummaryIsByteIdentical) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::vector<std::string> base{"groundstate", "-L", "40", "-N", "256", "--trials", "20", "--gn-seed", "3"};
  auto with = [&](const fs::path& p) {
    auto v = base;
    v.push_back("--out");
    v.push_back(p.string());
    return v;
  };
  ASSERT_EQ(run(with(a)), 0);
  ASSERT_EQ(run(with(b)), 0);
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}

TEST(Cli, ThreadCountDoesNotChangeResults) {
  const fs::path a = scratch("thr_a"), b = scratch("thr_b");
  const std::vector<std::string> args{"profile-decomp", "--seed", "5"};
  setenv("NL4S_THREADS", "1", 1);
  auto v = args;
  v.insert(v.end(), {"--out", a.string()});
  ASSERT_EQ(run(v), 0);
  setenv("NL4S_THREADS", "4", 1);
  v = args;
  v.insert(v.end(), {"--out", b.string()});
  ASSERT_EQ(run(v), 0);
  unsetenv("NL4S_THREADS");
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  EXPECT_EQ(slurp(a / "profile_0.nl4s"), slurp(b / "profile_0.nl4s"));
}

TEST(Cli, ProfileDecompNeedsSeed) {
  const fs::path out = scratch("pd_seed");
  EXPECT_EQ(run({"profile-decomp", "--out", out.string()}), 2);
}

TEST(Cli, EvolveTrajectory) {
  const fs::path out = scratch("ev");
  ASSERT_EQ(run({"evolve", "-L", "40", "-N", "256", "--amplitude", "0.5", "--width", "2", "--t-end", "0.01",
                 "--set", "snapshot_every=5", "--out", out.string()}),
            0);
  std::ifstream in(out / "trajectory.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "t,dt,mass,energy,h_gamma_c,h_2,l_alpha2,l_alpha_c,max_amp");
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 8);
  const json r = summary(out)["result"];
  EXPECT_EQ(r["status"], "Completed");
  EXPECT_TRUE(r["T_est"].is_null());
  EXPECT_TRUE(fs::exists(out / "final.nl4s"));
  EXPECT_TRUE(fs::exists(out / "snap_00000.nl4s"));
}

TEST(Cli, SnapshotCommands) {
  const fs::path gs = scratch("snap_gs"), c = scratch("snap_conc"), lp = scratch("snap_lp");
  ASSERT_EQ(run({"groundstate", "-L", "40", "-N", "512", "--out", gs.string()}), 0);
  const std::string q = (gs / "Q.nl4s").string();
  ASSERT_EQ(run({"concentration", "--snapshot", q, "--window", "2", "--out", c.string()}), 0);
  EXPECT_GT(summary(c)["result"]["value"].get<double>(), 0);
  ASSERT_EQ(run({"limiting-profile", "--snapshot", q, "--profile", q, "--out", lp.string()}), 0);
  EXPECT_LT(summary(lp)["result"]["dist_2"].get<double>(), 1e-8);
  EXPECT_TRUE(fs::exists(lp / "aligned.nl4s"));
  EXPECT_EQ(run({"concentration", "--snapshot", "/nonexistent.nl4s", "--out", c.string()}), 4);
}

TEST(Cli, BinaryExitCodes) {
  const fs::path out = scratch("bin");
  auto code = [](const std::string& cmd) {
    const int st = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  };
  const std::string tool = NL4S_TOOL_PATH;
  EXPECT_EQ(code(tool + " exponents --out " + out.string()), 0);
  EXPECT_EQ(code(tool + " exponents -d 0 --out " + out.string()), 2);
  EXPECT_EQ(code(tool + " exponents --config /nonexistent.json --out " + out.string()), 4);
}
