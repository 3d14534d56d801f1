// Copyright 2026 The reachavoid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "reachavoid/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "reachavoid/random.hpp"

namespace reachavoid {
namespace {

namespace fs = std::filesystem;

const fs::path kData = REACHAVOID_DATA_DIR;
const fs::path kGolden = REACHAVOID_GOLDEN_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("reachavoid_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                 ->current_test_info()
                                                 ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::vector<std::string> model() const {
    const fs::path r = kData / "rendezvous";
    return {"--system", (r / "system.json").string(), "--spec",
            (r / "spec.json").string(), "--noise", (r / "noise.json").string()};
  }

  std::vector<std::string> with(std::vector<std::string> head,
                                const std::vector<std::string>& tail) const {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
  }

  fs::path dir_;
};

TEST_F(CliTest, SampleSize) {
  EXPECT_EQ(run({"sample-size", "--delta", "0.05", "--beta", "0.01"}).out, "922\n");
  EXPECT_EQ(run({"sample-size", "--delta", "1", "--beta", "1"}).out, "1\n");
  EXPECT_EQ(run({"sample-size", "--delta", "0.01", "--beta", "0.01"}).out, "23026\n");
  EXPECT_EQ(run({"sample-size", "--delta", "0", "--beta", "0.5"}).code, cli::kExitConfig);
  EXPECT_EQ(run({"sample-size", "--delta", "0.1"}).code, cli::kExitConfig);
  EXPECT_EQ(run({"no-such-command"}).code, cli::kExitConfig);
}

TEST_F(CliTest, ShippedRendezvousFilesMatchGenerator) {
  const auto r = run({"rendezvous", "--config", (kData / "rendezvous.json").string(),
                      "--out", path("rv")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"system.json", "spec.json", "noise.json"}) {
    EXPECT_EQ(slurp(dir_ / "rv" / f), slurp(kData / "rendezvous" / f)) << f;
  }
}

TEST_F(CliTest, PrepareConfigErrors) {
  EXPECT_EQ(run(with({"prepare"}, {"--out", path("x")})).code, cli::kExitConfig);
  auto bad = model();
  bad[1] = path("missing.json");
  EXPECT_EQ(run(with(with({"prepare"}, bad), {"--K", "10", "--khat", "2", "--out", path("x")})).code,
            cli::kExitConfig);
  EXPECT_EQ(run(with(with({"prepare"}, model()),
                     {"--K", "10", "--delta", "0.1", "--beta", "0.1", "--khat", "2", "--out", path("x")}))
                .code,
            cli::kExitConfig);
  EXPECT_EQ(run(with(with({"prepare"}, model()), {"--K", "10", "--out", path("x")})).code,
            cli::kExitConfig);
  EXPECT_EQ(run(with(with({"prepare"}, model()), {"--K", "10", "--khat", "11", "--out", path("x")})).code,
            cli::kExitConfig);
  std::ofstream(path("broken.json")) << "{\"A\": [[1, 2]], \"B\": [[1]]}";
  auto broken = model();
  broken[1] = path("broken.json");
  EXPECT_EQ(run(with(with({"prepare"}, broken), {"--K", "10", "--khat", "2", "--out", path("x")})).code,
            cli::kExitConfig);
}

TEST_F(CliTest, SingletonGridGivesZeroWss) {
  const auto r = run(with(with({"prepare"}, model()),
                          {"--K", "10", "--khat", "10", "--grid", "10", "--out", path("p")}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "p" / "wss_curve.csv"), "khat,wss,seconds\n10,0,0\n");
}

TEST_F(CliTest, ScenarioCountFromConfidence) {
  const auto r = run(with(with({"prepare"}, model()),
                          {"--delta", "0.1", "--beta", "0.1", "--khat", "5", "--out", path("p")}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("K = 116"), std::string::npos) << r.out;
}

TEST_F(CliTest, EveryCommandIsReproducible) {
  for (const char* tag : {"a", "b"}) {
    const std::string d = path(tag);
    ASSERT_EQ(run(with(with({"prepare"}, model()),
                       {"--K", "300", "--knee", "--grid", "1:12", "--seed", "11", "--out", d + "/prep"}))
                  .code,
              0);
    ASSERT_EQ(run({"verify", "--artifact", d + "/prep/artifact.json", "--x0=-0.75,-0.75,0,0",
                   "--out", d + "/verify"})
                  .code,
              0);
    ASSERT_EQ(run({"verify", "--artifact", d + "/prep/artifact.json", "--x0=-0.75,-0.75,0,0",
                   "--mode", "evaluate", "--u", "0.1,0.1,0,0,0,0,0,0,0,0", "--out", d + "/eval"})
                  .code,
              0);
    ASSERT_EQ(run(with(with({"sweep"}, model()),
                       {"--K", "200", "--khat", "5,10", "--trials", "2", "--seed", "3",
                        "--restarts", "2", "--x0=-0.75,-0.75,0,0", "--out", d + "/sweep"}))
                  .code,
              0);
    ASSERT_EQ(run({"rendezvous", "--out", d + "/rv"}).code, 0);
  }
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir_ / "a")) {
    if (!e.is_regular_file()) continue;
    const fs::path twin = dir_ / "b" / fs::relative(e.path(), dir_ / "a");
    EXPECT_EQ(slurp(e.path()), slurp(twin)) << e.path();
    ++files;
  }
  EXPECT_GE(files, 12u);
}

TEST_F(CliTest, UnsafeStartGivesZero) {
  ASSERT_EQ(run(with(with({"prepare"}, model()), {"--K", "50", "--khat", "5", "--out", path("p")})).code, 0);
  const auto r = run({"verify", "--artifact", path("p/artifact.json"), "--x0=0.5,-0.2,0,0",
                      "--out", path("v")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir_ / "v" / "report.json").find("\"p_hat\": 0.0"), std::string::npos);
  EXPECT_NE(slurp(dir_ / "v" / "report.json").find("\"initial_state_safe\": false"),
            std::string::npos);
}

TEST_F(CliTest, GoldenEvaluateAtZeroInput) {
  ASSERT_EQ(run(with(with({"prepare"}, model()), {"--K", "2000", "--khat", "20", "--seed", "1", "--out", path("p")})).code, 0);
  const auto r = run({"verify", "--artifact", path("p/artifact.json"), "--x0=-0.75,-0.75,0,0",
                      "--mode", "evaluate", "--u", "0,0,0,0,0,0,0,0,0,0", "--out", path("v")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "v" / "report.csv"), slurp(kGolden / "evaluate_zero_input.csv"));
  const auto s = run({"verify", "--artifact", path("p/artifact.json"), "--x0=-0.75,-0.75,0,0",
                      "--out", path("s")});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(slurp(dir_ / "s" / "report.csv"), slurp(kGolden / "partitioned_khat20.csv"));
}

TEST_F(CliTest, SweepWithAllCellsMatchesFullSolve) {
  const std::uint64_t master = 5;
  ASSERT_EQ(run(with(with({"sweep"}, model()),
                     {"--K", "12", "--khat", "12", "--trials", "1", "--seed", std::to_string(master),
                      "--x0=-0.75,-0.75,0,0", "--out", path("sw")}))
                .code,
            0);
  ASSERT_EQ(run(with(with({"prepare"}, model()),
                     {"--K", "12", "--khat", "12", "--seed", std::to_string(derive_seed(master, 0)),
                      "--out", path("p")}))
                .code,
            0);
  ASSERT_EQ(run({"verify", "--artifact", path("p/artifact.json"), "--x0=-0.75,-0.75,0,0",
                 "--mode", "full", "--out", path("f")})
                .code,
            0);
  std::istringstream sweep(slurp(dir_ / "sw" / "sweep_trials.csv"));
  std::string header, row;
  std::getline(sweep, header);
  std::getline(sweep, row);
  std::istringstream report(slurp(dir_ / "f" / "report.csv"));
  std::string rh, rr;
  std::getline(report, rh);
  std::getline(report, rr);
  auto nth = [](const std::string& line, int n) {
    std::istringstream s(line);
    std::string cell;
    for (int i = 0; i <= n; ++i) std::getline(s, cell, ',');
    return std::stod(cell);
  };
  EXPECT_DOUBLE_EQ(nth(row, 3), nth(rr, 3));
}

TEST_F(CliTest, NodeBudgetHasItsOwnExitCode) {
  ASSERT_EQ(run(with(with({"prepare"}, model()), {"--K", "2000", "--khat", "40", "--seed", "7", "--out", path("p")})).code, 0);
  const auto r = run({"verify", "--artifact", path("p/artifact.json"), "--x0=-0.75,-0.75,0,0",
                      "--node-limit", "2", "--out", path("v")});
  EXPECT_EQ(r.code, cli::kExitNodeBudget);
  EXPECT_NE(slurp(dir_ / "v" / "report.json").find("\"optimal\": false"), std::string::npos);
}

TEST_F(CliTest, VerifyRejectsBadInputs) {
  ASSERT_EQ(run(with(with({"prepare"}, model()), {"--K", "30", "--khat", "3", "--out", path("p")})).code, 0);
  const std::string art = path("p/artifact.json");
  EXPECT_EQ(run({"verify", "--artifact", art, "--x0=1,2", "--out", path("v")}).code, cli::kExitConfig);
  EXPECT_EQ(run({"verify", "--artifact", art, "--x0=-0.75,-0.75,0,0", "--mode", "evaluate",
                 "--out", path("v")}).code,
            cli::kExitConfig);
  EXPECT_EQ(run({"verify", "--artifact", art, "--x0=-0.75,-0.75,0,0", "--mode", "evaluate",
                 "--u", "1,0,0,0,0,0,0,0,0,0", "--out", path("v")}).code,
            cli::kExitConfig);
  EXPECT_EQ(run({"verify", "--artifact", art, "--x0=-0.75,-0.75,0,0", "--mode", "other",
                 "--out", path("v")}).code,
            cli::kExitConfig);
  // A tampered artifact is refused.
  std::string text = slurp(art);
  text.replace(text.find("\"wss\""), 5, "\"wsx\"");
  std::ofstream(path("tampered.json")) << text;
  EXPECT_EQ(run({"verify", "--artifact", path("tampered.json"), "--x0=-0.75,-0.75,0,0",
                 "--out", path("v")}).code,
            cli::kExitConfig);
}

}  // namespace
}  // namespace reachavoid
