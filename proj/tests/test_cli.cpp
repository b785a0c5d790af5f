#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <qzdswap/cli.hpp>

using namespace qzdswap;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qzdswap_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string read(const std::string& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  /// Numeric rows of a CSV (comment and header skipped).
  static std::vector<std::vector<double>> rows(const std::string& text) {
    std::vector<std::vector<double>> out;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<double> row;
      std::istringstream fields(line);
      for (std::string f; std::getline(fields, f, ',');) {
        try {
          row.push_back(std::stod(f));
        } catch (const std::exception&) {
          row.push_back(std::nan(""));
        }
      }
      out.push_back(row);
    }
    return out;
  }

  fs::path dir_;
};

double value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  if (pos == std::string::npos) return std::nan("");
  return std::stod(text.substr(pos + key.size()));
}

}  // namespace

TEST(ConfigFile, CommentsDefaultsAndComplexAmplitudes) {
  const ConfigFile f = parse_config(R"({
    // comment
    "t_f": 10, /* block */
    "input_amplitudes": [0, [0, 1], 0, 0],
    "branching": "total_split",
    "trajectory_csv": "out.csv"
  })");
  EXPECT_EQ(f.protocol.t_f, 10.0);
  EXPECT_DOUBLE_EQ(f.protocol.dt, 10.0 / 4000.0);
  EXPECT_EQ(f.protocol.input_amplitudes[1], Complex(0.0, 1.0));
  EXPECT_EQ(f.protocol.noise.branching, Branching::total_split);
  EXPECT_EQ(f.trajectory_csv, "out.csv");
}

TEST(ConfigFile, Rejections) {
  EXPECT_THROW(parse_config(R"({"epsilonn": 0.2})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"input_amplitudes": [1, 1, 0, 0]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"branching": "sideways"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"signs": [[1, 1]]})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"g": "ten"})"), ConfigError);
  EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/qzdswap.json"), ConfigError);
}

TEST(ConfigFile, SummaryRoundTrips) {
  ProtocolConfig c;
  c.noise = NoiseModel{2.0, 0.5, Branching::total_split};
  nlohmann::json j = nlohmann::json::parse(config_summary(c));
  j.erase("units");
  const ProtocolConfig back = parse_config(j.dump()).protocol;
  EXPECT_EQ(config_summary(back), config_summary(c));
}

TEST(Ranges, ParseRangeAndList) {
  EXPECT_EQ(cli::parse_range("0:1:5"), (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(cli::parse_range("2:9:1"), std::vector<double>{2.0});
  EXPECT_THROW(cli::parse_range("0:1"), ConfigError);
  EXPECT_THROW(cli::parse_range("0:1:0"), ConfigError);
  EXPECT_EQ(cli::parse_list("0,1,5,10"), (std::vector<double>{0.0, 1.0, 5.0, 10.0}));
  EXPECT_THROW(cli::parse_list("1,x"), ConfigError);
}

TEST_F(CliTest, MissingConfigNamesPath) {
  std::ostringstream out, err;
  const std::string missing = path("absent.json");
  EXPECT_EQ(cli::cmd_run(missing, {}, {out, err}), cli::kExitError);
  EXPECT_NE(err.str().find(missing), std::string::npos);
  EXPECT_EQ(cli::cmd_pulses(missing, "", {out, err}), cli::kExitError);
  EXPECT_EQ(cli::cmd_check(missing, "odes", {out, err}), cli::kExitError);
}

TEST_F(CliTest, RunZeroOneClosed) {
  const std::string cfg = write("c.json", "{}");
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.initial = "01";
  opts.evolution = Evolution::closed;
  opts.out = path("traj.csv");
  ASSERT_EQ(cli::cmd_run(cfg, opts, {out, err}), cli::kExitOk) << err.str();
  EXPECT_GE(value_after(out.str(), "final P(10_0): "), 0.98);
  EXPECT_GE(value_after(out.str(), "fidelity: "), 0.98);

  const std::string csv = read(opts.out);
  EXPECT_EQ(csv.rfind("# {", 0), 0u);
  EXPECT_NE(csv.find("\nt,P_00_0,P_01_0,P_10_0,P_11_0,P_1a_0,P_a1_0,P_aa_0,P_e1_0,P_1e_0,P_11_1,trace,purity\n"),
            std::string::npos);
  const auto table = rows(csv);
  ASSERT_EQ(table.size(), 301u);
  for (std::size_t i = 1; i < table.size(); ++i) EXPECT_GT(table[i][0], table[i - 1][0]);
  EXPECT_NEAR(table.back()[0], 60.0, 1e-9);
  EXPECT_NEAR(table.front()[2], 1.0, 1e-12);
}

TEST_F(CliTest, RunElevenStaysPut) {
  const std::string cfg = write("c.json", "{}");
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.initial = "11";
  opts.evolution = Evolution::closed;
  opts.out = path("traj.csv");
  ASSERT_EQ(cli::cmd_run(cfg, opts, {out, err}), cli::kExitOk) << err.str();
  for (const auto& row : rows(read(opts.out))) EXPECT_GE(row[4], 0.999);
}

TEST_F(CliTest, RunRejectsUnknownInitial) {
  const std::string cfg = write("c.json", "{}");
  std::ostringstream out, err;
  cli::RunOptions opts;
  opts.initial = "2";
  EXPECT_EQ(cli::cmd_run(cfg, opts, {out, err}), cli::kExitError);
}

TEST_F(CliTest, PulsesTable) {
  const std::string cfg = write("c.json", "{}");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_pulses(cfg, path("p.csv"), {out, err}), cli::kExitOk) << err.str();
  const std::string csv = read(path("p.csv"));
  EXPECT_NE(csv.find("\nt,omega_0A,omega_aB,omega_0B,omega_aA,omega_a_prime,omega_0_prime\n"),
            std::string::npos);
  const auto table = rows(csv);
  double peak = 0.0, peak_t = -1.0;
  for (const auto& r : table) {
    if (r[1] > peak) {
      peak = r[1];
      peak_t = r[0];
    }
    for (std::size_t k = 1; k < r.size(); ++k) EXPECT_LE(r[k], 0.44);
    if (r[0] < 20.0) {
      EXPECT_EQ(r[3], 0.0);
    }
    if (r[0] > 20.0) {
      EXPECT_EQ(r[1], 0.0);
    }
  }
  EXPECT_NEAR(peak, 0.435, 5e-4);
  EXPECT_NEAR(peak_t, 20.0, 1e-12);
  EXPECT_NEAR(table.back()[0], 60.0, 1e-12);

  std::ostringstream again;
  ASSERT_EQ(cli::cmd_pulses(cfg, path("q.csv"), {again, err}), cli::kExitOk);
  EXPECT_EQ(read(path("q.csv")), csv);
}

TEST_F(CliTest, SweepSortsRowsAndReportsWorst) {
  const std::string cfg = write("c.json", R"({"g": 2, "dt": 0.02})");
  std::ostringstream out, err;
  cli::SweepOptions opts;
  opts.gamma = "0:0.5:2";
  opts.kappa = "2,0";
  opts.branching = Branching::total_split;
  opts.out = path("s.csv");
  ASSERT_EQ(cli::cmd_sweep(cfg, opts, {out, err}), cli::kExitOk) << err.str();
  const std::string csv = read(opts.out);
  EXPECT_NE(csv.find("\nkappa,gamma,fidelity,branching\n"), std::string::npos);
  EXPECT_NE(csv.find("total_split"), std::string::npos);
  const auto table = rows(csv);
  ASSERT_EQ(table.size(), 4u);
  EXPECT_EQ(table[0][0], 0.0);
  EXPECT_EQ(table[1][1], 0.5);
  EXPECT_EQ(table[2][0], 2.0);
  double worst = 1.0;
  for (const auto& r : table) worst = std::min(worst, r[2]);
  EXPECT_NEAR(value_after(out.str(), "worst fidelity: "), worst, 1e-8);

  opts.kappa = "-1";
  EXPECT_EQ(cli::cmd_sweep(cfg, opts, {out, err}), cli::kExitError);
}

TEST_F(CliTest, CheckExitCodes) {
  const std::string cfg = write("c.json", "{}");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_check(cfg, "odes", {out, err}), cli::kExitOk) << out.str();
  EXPECT_NE(out.str().find("[PASS] max |nu residual|"), std::string::npos);
  EXPECT_EQ(cli::cmd_check(cfg, "zeno", {out, err}), cli::kExitOk) << out.str();
  EXPECT_EQ(cli::cmd_check(cfg, "bogus", {out, err}), cli::kExitError);
  std::ostringstream inv;
  EXPECT_EQ(cli::cmd_check(cfg, "invariant", {inv, err}), cli::kExitCheckFailed);
  EXPECT_NE(inv.str().find("[FAIL] |propagated - closed form| c_phi1"), std::string::npos);
  EXPECT_NE(inv.str().find("[PASS] |propagated - closed form| c_phi5"), std::string::npos);
}
