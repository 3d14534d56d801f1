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

#pragma once

#include "reachavoid/scenarios.hpp"
#include "reachavoid/sets.hpp"
#include "reachavoid/system.hpp"

namespace reachavoid {

/// Planar relative motion of a deputy about a chief in circular orbit.
/// Units are km, km/s, s and kg.
struct CwhConfig {
  double mass = 300.0;
  double altitude = 850.0;
  double sampling_period = 20.0;
  int horizon = 5;
  double gravitational_parameter = 398600.4418;  // km^3/s^2
  double earth_radius = 6378.137;
  Vector noise_variance = (Vector(4) << 1e-4, 1e-4, 5e-8, 5e-8).finished();
  Vector x0 = (Vector(4) << -0.75, -0.75, 0.0, 0.0).finished();
  Vector input_lower = Vector::Constant(2, -0.1);
  Vector input_upper = Vector::Constant(2, 0.1);

  /// Mean motion of the chief orbit, rad/s.
  double mean_motion() const;
  void validate() const;
};

/// Continuous-time state and input matrices of the planar CWH equations.
LtiSystem cwh_continuous(const CwhConfig& cfg);

/// Exact zero-order-hold discretization over one sampling period.
LtiSystem build_cwh_system(const CwhConfig& cfg);

/// Line-of-sight cone |x| <= -y, y >= -1 with speed limits as the safe set;
/// a small box just below the chief as the target.
ReachAvoidSpec build_rendezvous_spec(int horizon = 5);

NoiseModel rendezvous_noise(const CwhConfig& cfg);

InputBox rendezvous_input_box(const CwhConfig& cfg);

}  // namespace reachavoid
