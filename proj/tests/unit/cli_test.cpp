// SPDX-License-Identifier: Apache-2.0
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#ifndef NRCSIM_PATH
#error "NRCSIM_PATH must point at the nrcsim executable"
#endif

namespace {

namespace fs = std::filesystem;

int Nrcsim(const std::string& args) {
  const std::string cmd = std::string(NRCSIM_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nrcsim_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string Read(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

constexpr const char* kSmall =
    R"({"N": 16, "array_rows": 4, "array_cols": 4, "K": 4, "tau_u": 4, "T": 100,
        "C_sc": 2, "trials": 2, "blocks_per_trial": 1, "alpha_mc": 50})";

TEST_F(Cli, SimulateWritesCsv) {
  const std::string cfg = Write("c.json", kSmall);
  const std::string out = (dir_ / "out.csv").string();
  ASSERT_EQ(Nrcsim("simulate --config " + cfg + " --out " + out), 0);
  const std::string csv = Read("out.csv");
  EXPECT_EQ(csv.rfind("scheme,precoder,param_name,param_value,spectral_efficiency,"
                      "mse_B,mse_A,mean_log_term,trials,ci_halfwidth\n",
                      0),
            0u);
  EXPECT_NE(csv.find("nrc-aware-proposed,ZF,"), std::string::npos);
}

TEST_F(Cli, SweepIsSeedReproducible) {
  const std::string cfg = Write("c.json", kSmall);
  const std::string base = "sweep --param rho_d --values 0,10 --seed 9 --config " + cfg;
  ASSERT_EQ(Nrcsim(base + " --out " + (dir_ / "a.csv").string()), 0);
  ASSERT_EQ(Nrcsim(base + " --workers 2 --out " + (dir_ / "b.csv").string()), 0);
  EXPECT_EQ(Read("a.csv"), Read("b.csv"));
}

TEST_F(Cli, ConfigErrorsExitWithTwo) {
  const std::string out = (dir_ / "out.csv").string();
  EXPECT_EQ(Nrcsim("sweep --param rho_d --values '' --out " + out), 2);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(Nrcsim("sweep --param T --values 1 --out " + out), 2);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(Nrcsim("sweep --preset fig4 --out " + out), 2);
  EXPECT_EQ(Nrcsim("simulate --config " + Write("bad.json", R"({"bogus": 1})")), 2);
  EXPECT_EQ(Nrcsim("simulate --config /nonexistent.json"), 2);
  EXPECT_EQ(Nrcsim("frobnicate"), 2);
  EXPECT_FALSE(fs::exists(out));
}

}  // namespace
