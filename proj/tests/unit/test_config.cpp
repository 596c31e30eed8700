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

#include <cmath>
#include <random>
#include <sstream>

#include "apiary/config.hpp"
#include "apiary/error.hpp"

namespace apiary {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_run_config_text(text, "run.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, EmptyTextGivesDefaults) {
  EXPECT_EQ(parse_run_config_text(""), RunConfig{});
  EXPECT_EQ(parse_run_config_text("# only a comment\n\n; another\n"), RunConfig{});
}

TEST(Config, DefaultsRoundTrip) {
  const RunConfig d;
  const std::string text = format_run_config(d);
  EXPECT_EQ(parse_run_config_text(text), d);
  EXPECT_EQ(format_run_config(parse_run_config_text(text)), text);
  EXPECT_NE(text.find("[ppo]"), std::string::npos);
  EXPECT_NE(text.find("gamma = 0.99\n"), std::string::npos);
  EXPECT_NE(text.find("success_ori_tol_deg = 5\n"), std::string::npos);
}

// Angles enter as degree text, so every angle reachable by parsing must
// survive format -> parse unchanged.
TEST(Config, ParsedDegreeValuesRoundTripExactly) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.001, 179.0);
  for (int i = 0; i < 2000; ++i) {
    std::ostringstream text;
    text.precision(17);
    text << "[env]\nsuccess_ori_tol_deg = " << u(rng) << "\ngoal_ang_range_deg = " << u(rng) << ' ' << u(rng) << ' '
         << u(rng) << "\nsuccess_pos_tol = " << u(rng) / 1000 << "\n[safety]\nmax_ori_err_deg = " << u(rng) << "\n";
    const RunConfig c = parse_run_config_text(text.str());
    ASSERT_EQ(parse_run_config_text(format_run_config(c)), c) << text.str();
  }
}

// An arbitrary radian value may have no decimal degree text that maps back
// onto it exactly; it must still come back within one ulp.
TEST(Config, ArbitraryRadiansRoundTripWithinOneUlp) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(1e-3, 3.0);
  for (int i = 0; i < 2000; ++i) {
    RunConfig c;
    c.env.success_ori_tol = u(rng);
    const double back = parse_run_config_text(format_run_config(c)).env.success_ori_tol;
    ASSERT_LE(std::abs(back - c.env.success_ori_tol), std::nextafter(c.env.success_ori_tol, 4.0) - c.env.success_ori_tol);
  }
}

TEST(Config, ParsesEverySectionAndUnit) {
  const RunConfig c = parse_run_config_text(
      "[body]\nmass = 10\ninertia = 0.1 0.2 0.3\n"
      "[actuation]\nf_max = 0.5\nforce_rate = 2\ntorque_rate = none\n"
      "[env]\nmode = granite3dof\nobs_frame = body\nsuccess_ori_tol_deg = 2\ngoal_ang_range_deg = 10\n"
      "[reward]\nw_pos = 3\n"
      "[ppo]\ntotal_env_steps = 3e6\nhidden = 32 16 8\nlr_anneal = no\n"
      "[baseline_gains]\nkp_pos = 1.5\nhold_kd_att = 0.9\n"
      "[safety]\nmax_ori_err_deg = 45\ntrip_consecutive = 5\ndock_pos_tol = 0.01\n"
      "[logging]\nprogress = off\n"
      "[seed]\nseed = 18446744073709551615\n");
  EXPECT_EQ(c.env.body.mass, 10.0);
  EXPECT_EQ(c.env.body.inertia_diag, (Vec3{0.1, 0.2, 0.3}));
  EXPECT_EQ(c.env.limits.f_max, 0.5);
  EXPECT_EQ(c.env.limits.force_rate, 2.0);
  EXPECT_FALSE(c.env.limits.torque_rate);
  EXPECT_EQ(c.env.mask, DofMask::granite_3dof());
  EXPECT_EQ(c.env.obs_frame, ObsFrame::kBody);
  EXPECT_NEAR(c.env.success_ori_tol, 2 * std::numbers::pi / 180, 1e-15);
  EXPECT_NEAR(c.env.goal_ang_range.y, 10 * std::numbers::pi / 180, 1e-15);
  EXPECT_EQ(c.reward.w_pos, 3.0);
  EXPECT_EQ(c.ppo.total_env_steps, 3'000'000);
  EXPECT_EQ(c.ppo.hidden, (std::vector<int>{32, 16, 8}));
  EXPECT_FALSE(c.ppo.lr_anneal);
  EXPECT_EQ(c.gains.kp_pos, 1.5);
  EXPECT_EQ(c.hold_gains.kd_att, 0.9);
  EXPECT_NEAR(c.safety.max_ori_err, std::numbers::pi / 4, 1e-15);
  EXPECT_EQ(c.safety.trip_consecutive, 5);
  EXPECT_EQ(c.dock_pos_tol, 0.01);
  EXPECT_FALSE(c.logging.progress);
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
  EXPECT_EQ(parse_run_config_text(format_run_config(c)), c);
}

TEST(Config, UnknownKeyReportsLine) {
  const std::string e = error_of("[ppo]\ngamma = 0.9\n\nlearning_rate = 1\n");
  EXPECT_NE(e.find("run.ini:4:"), std::string::npos) << e;
  EXPECT_NE(e.find("learning_rate"), std::string::npos) << e;
}

TEST(Config, StructuralErrors) {
  EXPECT_NE(error_of("[nope]\n").find("run.ini:1:"), std::string::npos);
  EXPECT_NE(error_of("gamma = 0.9\n").find("run.ini:1:"), std::string::npos);
  EXPECT_NE(error_of("[ppo]\ngamma 0.9\n").find("run.ini:2:"), std::string::npos);
  EXPECT_NE(error_of("[ppo\n").find("run.ini:1:"), std::string::npos);
  EXPECT_NE(error_of("[ppo]\ngamma =\n").find("run.ini:2:"), std::string::npos);
  const std::string dup = error_of("[ppo]\ngamma = 0.9\n[env]\n[ppo]\ngamma = 0.8\n");
  EXPECT_NE(dup.find("run.ini:5:"), std::string::npos) << dup;
  EXPECT_NE(dup.find("duplicate"), std::string::npos) << dup;
}

TEST(Config, BadValues) {
  EXPECT_NE(error_of("[ppo]\ngamma = fast\n").find("run.ini:2:"), std::string::npos);
  EXPECT_NE(error_of("[ppo]\nn_envs = 2.5\n").find("run.ini:2:"), std::string::npos);
  EXPECT_NE(error_of("[ppo]\nlr_anneal = maybe\n").find("run.ini:2:"), std::string::npos);
  EXPECT_NE(error_of("[env]\nmode = lunar\n").find("run.ini:2:"), std::string::npos);
  EXPECT_NE(error_of("[body]\ninertia = 1 2\n").find("run.ini:2:"), std::string::npos);
  EXPECT_NE(error_of("[seed]\nseed = -1\n").find("run.ini:2:"), std::string::npos);
  EXPECT_NE(error_of("[ppo]\ngamma = nan\n").find("run.ini:2:"), std::string::npos);
  // Range checks run after parsing and name the source.
  EXPECT_NE(error_of("[ppo]\ngamma = 1.5\n").find("run.ini"), std::string::npos);
  EXPECT_FALSE(error_of("[body]\nmass = -1\n").empty());
  EXPECT_FALSE(error_of("[env]\nmass_min = 1.5\nmass_max = 1.2\n").empty());
  EXPECT_FALSE(error_of("[baseline_gains]\nkp_pos = 1\nkd_pos = 0\n").empty());
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(load_run_config("/nonexistent/run.ini"), ConfigError);
}

TEST(Config, MissionViewCarriesFields) {
  RunConfig c;
  c.dock_pos_tol = 0.03;
  c.safety.trip_consecutive = 7;
  c.hold_gains.kp_pos = 5.0;
  const MissionConfig m = c.mission();
  EXPECT_EQ(m.dock_pos_tol, 0.03);
  EXPECT_EQ(m.safety.trip_consecutive, 7);
  EXPECT_EQ(m.hold_gains.kp_pos, 5.0);
  EXPECT_EQ(m.env, c.env);
}

}  // namespace
}  // namespace apiary
