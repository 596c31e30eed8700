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

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "apiary/actuation.hpp"

namespace apiary {
namespace {

TEST(Actuation, DenormalizeScalesAndClamps) {
  const ActuationLimits lim;
  const std::array<double, kActionDim> a{0.5, -2.0, 1.0, 0.25, 3.0, -1.0};
  const Wrench w = denormalize_action(a, lim);
  EXPECT_DOUBLE_EQ(w.force.x, 0.2);
  EXPECT_DOUBLE_EQ(w.force.y, -0.4);
  EXPECT_DOUBLE_EQ(w.force.z, 0.4);
  EXPECT_DOUBLE_EQ(w.torque.x, 0.025);
  EXPECT_DOUBLE_EQ(w.torque.y, 0.1);
  EXPECT_DOUBLE_EQ(w.torque.z, -0.1);
}

TEST(Actuation, NanActionMapsToZero) {
  const std::array<double, kActionDim> a{std::numeric_limits<double>::quiet_NaN(), 0, 0, 0, 0, 0};
  EXPECT_EQ(denormalize_action(a, ActuationLimits{}).force.x, 0.0);
}

TEST(Actuation, ClampIsPerAxis) {
  const Wrench w = clamp_wrench({{1, -0.1, -5}, {0.5, 0, -0.05}}, ActuationLimits{});
  EXPECT_EQ(w.force, (Vec3{0.4, -0.1, -0.4}));
  EXPECT_EQ(w.torque, (Vec3{0.1, 0, -0.05}));
}

TEST(Actuation, SlewLimitBoundsChangePerTick) {
  ActuationLimits lim;
  lim.force_rate = 1.0;  // N/s
  const Wrench out = apply_limits({}, {{0.4, -0.4, 0.0}, {}}, lim, 0.016);
  EXPECT_NEAR(out.force.x, 0.016, 1e-15);
  EXPECT_NEAR(out.force.y, -0.016, 1e-15);
  // Torque has no rate limit here.
  const Wrench t = apply_limits({}, {{}, {0.1, 0, 0}}, lim, 0.016);
  EXPECT_EQ(t.torque.x, 0.1);
}

TEST(Actuation, SlewStartsFromClampedPrevious) {
  ActuationLimits lim;
  lim.force_rate = 1.0;
  const Wrench out = apply_limits({{10, 0, 0}, {}}, {{0.4, 0, 0}, {}}, lim, 0.016);
  EXPECT_EQ(out.force.x, 0.4);
}

TEST(Actuation, Validation) {
  ActuationLimits lim;
  EXPECT_NO_THROW(lim.validate());
  lim.f_max = 0.0;
  EXPECT_THROW(lim.validate(), std::invalid_argument);
  lim = ActuationLimits{};
  lim.torque_rate = -1.0;
  EXPECT_THROW(lim.validate(), std::invalid_argument);
  EXPECT_THROW(apply_limits({}, {}, ActuationLimits{}, 0.0), std::invalid_argument);
}

}  // namespace
}  // namespace apiary
