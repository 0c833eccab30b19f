// Copyright 2026 The QuEPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("quepp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }

  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + QUEPP_CLI_PATH + "\" " + args + " > " + (dir_ / "log.txt").string() +
                            " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

constexpr const char* kSmall = R"({"schema_version": 1, "seed": 3,
  "experiment": {"family": "mirror1d", "num_qubits": 5, "layers": 4, "p_rx": 0.25},
  "truncation": {"mode": "order", "max_order": 2},
  "plan": {"num_twirls": 10, "shots_per_twirl": 50}})";

TEST_F(CliTest, RerunFromEmbeddedConfigIsByteIdentical) {
  const auto cfg = write("cfg.json", kSmall);
  ASSERT_EQ(run("quepp --config " + cfg.string() + " --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(run("quepp --config " + (dir_ / "a" / "quepp.json").string() + " --workers 1 --out " +
                (dir_ / "b").string()),
            0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "b" / e.path().filename())) << e.path().filename();
  }
  EXPECT_GE(files, 3);
}

TEST_F(CliTest, SeedOverrideChangesTheRun) {
  const auto cfg = write("cfg.json", kSmall);
  ASSERT_EQ(run("quepp --config " + cfg.string() + " --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(run("quepp --config " + cfg.string() + " --seed 99 --out " + (dir_ / "b").string()), 0);
  const auto b = nlohmann::json::parse(slurp(dir_ / "b" / "quepp.json"));
  EXPECT_EQ(b.at("config").at("seed"), 99);
  EXPECT_NE(slurp(dir_ / "a" / "quepp.json"), slurp(dir_ / "b" / "quepp.json"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("quepp --config " + (dir_ / "missing.json").string()), 2);
  EXPECT_EQ(run("quepp --config " + write("bad.json", "{not json").string()), 2);
  EXPECT_EQ(run("quepp --config " + write("unknown.json", R"({"schema_version": 1, "sed": 3})").string()), 2);
  EXPECT_EQ(run("quepp --config " + write("v2.json", R"({"schema_version": 2})").string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);
  const auto big = write("big.json", R"({"schema_version": 1, "seed": 1,
    "experiment": {"family": "trotter", "num_qubits": 16, "layers": 2, "theta": 0.4},
    "truncation": {"mode": "order", "max_order": 1}})");
  EXPECT_EQ(run("quepp --config " + big.string() + " --out " + (dir_ / "big").string()), 3);
}

TEST_F(CliTest, ReportChecksSchemaAndSeeds) {
  const auto cfg = write("cfg.json", kSmall);
  ASSERT_EQ(run("quepp --config " + cfg.string() + " --out " + (dir_ / "a").string()), 0);
  ASSERT_EQ(run("quepp --config " + cfg.string() + " --seed 8 --out " + (dir_ / "b").string()), 0);
  const auto a = (dir_ / "a" / "quepp.json").string(), b = (dir_ / "b" / "quepp.json").string();
  EXPECT_EQ(run("report " + a + " " + b + " --out " + (dir_ / "r1").string()), 2);
  EXPECT_EQ(run("report " + a + " " + b + " --force --out " + (dir_ / "r2").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "r2" / "report.csv"));

  auto doc = nlohmann::json::parse(slurp(dir_ / "a" / "quepp.json"));
  doc["schema_version"] = 7;
  const auto stale = write("stale.json", doc.dump());
  EXPECT_EQ(run("report " + stale.string() + " --out " + (dir_ / "r3").string()), 2);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const auto cfg = write("cfg.json", kSmall);
  const std::string env = "QUEPP_OUTPUT_DIR=" + (dir_ / "env").string() + " ";
  const std::string cmd = env + "\"" + QUEPP_CLI_PATH + "\" generate --config " + cfg.string() + " > /dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "env" / "manifest.json"));
}

}  // namespace
