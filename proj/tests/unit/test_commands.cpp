// Copyright 2026 The Apiary Desk Authors
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

#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "apiary/commands.hpp"
#include "apiary/error.hpp"
#include "apiary/trajectory_log.hpp"

namespace apiary::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

// Small enough to train in a few seconds.
constexpr const char* kSmokeConfig =
    "[env]\nepisode_len = 150\n"
    "[ppo]\nn_envs = 4\nhorizon = 64\ntotal_env_steps = 20000\nminibatch_size = 64\n"
    "hidden = 16 16\neval_interval = 20\neval_episodes = 4\n"
    "[logging]\nprogress = false\n";

class Commands : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / ("apiary_cmd_" + std::to_string(::getpid()));
    fs::create_directories(root_);
    write(root_ / "smoke.ini", kSmokeConfig);
    write(root_ / "seq.txt",
          "translate +x 0.3 6\nrotate z -20 6\ndock_approach +x 0.2 6\ndock +x 0 6 resume los\n");
    write(root_ / "faults.txt", "2 30 0 0.5 0\n");
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static fs::path train_once(const std::string& name, std::uint64_t seed = 3) {
    TrainArgs a;
    a.config_path = (root_ / "smoke.ini").string();
    a.out_dir = (root_ / name).string();
    a.seed = seed;
    a.workers = 1;
    std::ostringstream out, err;
    cmd_train(a, out, err);
    return root_ / name;
  }

  static const fs::path& smoke_dir() {
    static const fs::path dir = train_once("smoke");
    return dir;
  }

  static inline fs::path root_;
};

TEST_F(Commands, InsufficientStepsIsUsageError) {
  write(root_ / "tiny.ini", "[ppo]\nn_envs = 4\nhorizon = 64\ntotal_env_steps = 100\n");
  TrainArgs a;
  a.config_path = (root_ / "tiny.ini").string();
  a.out_dir = (root_ / "tiny").string();
  std::ostringstream out, err;
  const int code = run_guarded([&] { cmd_train(a, out, err); }, err);
  EXPECT_EQ(code, kExitUsage);
  EXPECT_NE(err.str().find("insufficient steps"), std::string::npos) << err.str();
  EXPECT_FALSE(fs::exists(root_ / "tiny" / "policy.ckpt"));
}

TEST_F(Commands, RunGuardedMapsExceptions) {
  std::ostringstream err;
  EXPECT_EQ(run_guarded([] {}, err), kExitOk);
  EXPECT_EQ(run_guarded([] { throw NumericalError("nan"); }, err), kExitNumerical);
  EXPECT_EQ(run_guarded([] { throw ConfigError("bad"); }, err), kExitUsage);
  EXPECT_EQ(run_guarded([] { throw std::runtime_error("io"); }, err), kExitUsage);
}

TEST_F(Commands, SmokeTrainIsFastAndBitIdentical) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path a = smoke_dir();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 60.0);
  const fs::path b = train_once("smoke_again");
  for (const char* f : {"policy.ckpt", "final.ckpt", "curve.csv", "config.ini", "heldout_summary.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const fs::path c = train_once("smoke_seed", 4);
  EXPECT_NE(slurp(a / "curve.csv"), slurp(c / "curve.csv"));
}

TEST_F(Commands, EvalIsIdenticalAcrossWorkerCounts) {
  std::string first;
  for (int workers : {1, 8, 1}) {
    EvalArgs e;
    e.ckpt_path = (smoke_dir() / "policy.ckpt").string();
    e.episodes = 12;
    e.seed = 5;
    e.workers = workers;
    e.out_dir = (root_ / ("eval_w" + std::to_string(workers))).string();
    std::ostringstream out, err;
    cmd_eval(e, out, err);
    if (first.empty()) first = out.str() + slurp(fs::path(e.out_dir) / "episodes.csv");
    EXPECT_EQ(out.str() + slurp(fs::path(e.out_dir) / "episodes.csv"), first) << workers;
  }
  EXPECT_NE(first.find("iss6dof,12,"), std::string::npos);
}

TEST_F(Commands, EvalRejectsBadArguments) {
  EvalArgs e;
  e.ckpt_path = (smoke_dir() / "policy.ckpt").string();
  e.scenario = "moon";
  std::ostringstream out, err;
  EXPECT_THROW(cmd_eval(e, out, err), ConfigError);
  e.scenario = "iss6dof";
  e.episodes = 0;
  EXPECT_THROW(cmd_eval(e, out, err), ConfigError);
  e.episodes = 1;
  e.ckpt_path = (root_ / "missing.ckpt").string();
  EXPECT_THROW(cmd_eval(e, out, err), ConfigError);
}

TEST_F(Commands, GraniteEvalKeepsConstrainedColumnsZero) {
  EvalArgs e;
  e.ckpt_path = (smoke_dir() / "policy.ckpt").string();
  e.scenario = "granite3dof";
  e.episodes = 3;
  e.workers = 1;
  e.logs_dir = (root_ / "granite_logs").string();
  std::ostringstream out, err;
  cmd_eval(e, out, err);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
  int rows = 0;
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "episode_%04d.csv", i);
    std::ifstream in(fs::path(e.logs_dir) / name);
    const TrajectoryLog log = read_trajectory_csv(in);
    for (const LogRow& r : log.rows) {
      ++rows;
      ASSERT_EQ(r.state.position.z, 0.0);
      ASSERT_EQ(r.state.attitude.x(), 0.0);
      ASSERT_EQ(r.state.attitude.y(), 0.0);
      ASSERT_EQ(r.state.lin_vel.z, 0.0);
      ASSERT_EQ(r.state.ang_vel.x, 0.0);
      ASSERT_EQ(r.state.ang_vel.y, 0.0);
    }
  }
  EXPECT_GT(rows, 0);
}

TEST_F(Commands, MassScaleSweepRuns) {
  EvalArgs e;
  e.ckpt_path = (smoke_dir() / "policy.ckpt").string();
  e.episodes = 2;
  e.mass_scale = 1.25;
  e.out_dir = (root_ / "mass").string();
  std::ostringstream out, err;
  cmd_eval(e, out, err);
  EXPECT_NE(slurp(fs::path(e.out_dir) / "config.ini").find("mass_min = 1.25"), std::string::npos);
  e.mass_scale = -1.0;
  EXPECT_THROW(cmd_eval(e, out, err), ConfigError);
}

TEST_F(Commands, ReplayIsDeterministic) {
  for (const char* controller : {"rl", "baseline"}) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      ReplayArgs r;
      r.sequence_path = (root_ / "seq.txt").string();
      r.ckpt_path = (smoke_dir() / "policy.ckpt").string();
      r.faults_path = (root_ / "faults.txt").string();
      r.controller = controller;
      r.out_dir = (root_ / ("replay_" + std::string(controller) + std::to_string(rep))).string();
      std::ostringstream out, err;
      cmd_replay(r, out, err);
      const std::string all = out.str() + slurp(fs::path(r.out_dir) / "outcomes.csv") +
                              slurp(fs::path(r.out_dir) / "trajectory.csv");
      if (rep == 0) first = all;
      EXPECT_EQ(all, first) << controller;
      EXPECT_NE(out.str().find("4. "), std::string::npos);
    }
  }
}

TEST_F(Commands, ReplayNeedsCheckpointForRl) {
  ReplayArgs r;
  r.sequence_path = (root_ / "seq.txt").string();
  r.out_dir = (root_ / "replay_none").string();
  std::ostringstream out, err;
  EXPECT_THROW(cmd_replay(r, out, err), ConfigError);
  r.controller = "baseline";
  EXPECT_NO_THROW(cmd_replay(r, out, err));
  r.controller = "pid";
  EXPECT_THROW(cmd_replay(r, out, err), ConfigError);
}

TEST_F(Commands, CompareWritesArtifacts) {
  CompareArgs c;
  c.ckpt_path = (smoke_dir() / "policy.ckpt").string();
  c.maneuver = "translate +x 0.2 5";
  c.out_dir = (root_ / "compare").string();
  std::ostringstream out, err;
  cmd_compare(c, out, err);
  for (const char* f : {"baseline.csv", "rl.csv", "report.csv", "errors.dat", "config.ini"}) {
    EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / f)) << f;
  }
  EXPECT_NE(out.str().find("baseline:"), std::string::npos);
  c.maneuver = "wiggle";
  EXPECT_THROW(cmd_compare(c, out, err), ConfigError);
}

}  // namespace
}  // namespace apiary::cli
