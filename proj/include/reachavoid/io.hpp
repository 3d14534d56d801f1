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

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "reachavoid/engine.hpp"
#include "reachavoid/rendezvous.hpp"

namespace reachavoid::io {

using Json = nlohmann::json;

inline constexpr int kArtifactVersion = 1;
inline constexpr int kReportVersion = 1;

/// Raised for malformed or inconsistent input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const Matrix& m);  // array of rows
Json to_json(const Vector& v);
Matrix matrix_from_json(const Json& j, const std::string& what);
Vector vector_from_json(const Json& j, const std::string& what);

Json read_json(const std::filesystem::path& path);
/// Writes pretty-printed JSON followed by a newline.
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

/// {"A": [[..]], "B": [[..]]}
LtiSystem system_from_json(const Json& j);
Json system_to_json(const LtiSystem& system);

/// Sets, horizon and input bounds. The bounds are per step (length nu) or
/// already stacked (length N nu).
struct SpecFile {
  ReachAvoidSpec spec;
  Vector input_lower;
  Vector input_upper;

  InputBox box(Eigen::Index input_dim) const;
};

/// {"safe": {"f", "h"}, "target": {"f", "h"}, "N": n,
///  "input_box": {"lower": [..], "upper": [..]}}
SpecFile spec_from_json(const Json& j);
Json spec_to_json(const ReachAvoidSpec& spec, const Vector& lower,
                  const Vector& upper);

/// {"kind": "gaussian_diag", "mean", "variance"} |
/// {"kind": "gaussian", "mean", "covariance"} | {"kind": "table", "samples"}
NoiseModel noise_from_json(const Json& j);
Json noise_to_json(const NoiseModel& noise);

CwhConfig cwh_config_from_json(const Json& j);
Json cwh_config_to_json(const CwhConfig& cfg);

/// Header w_<t>_<j> (step t, component j, both from 0), one scenario per row.
std::string scenarios_to_csv(const ScenarioSet& scenarios);
Matrix scenarios_from_csv(const std::string& text);

/// Offline artifact with everything needed to reproduce the predictions.
/// Timings are stored only when `timings` is set, so artifacts built from
/// the same inputs are byte-identical.
Json artifact_to_json(const OfflineArtifact& artifact, bool timings);
/// Rebuilds the artifact and rejects it if its fingerprint does not match.
OfflineArtifact artifact_from_json(const Json& j);

Json report_to_json(const VerificationReport& report, const std::string& mode,
                    const std::string& fingerprint, bool timings);
std::string report_to_csv(const VerificationReport& report,
                          const std::string& mode, bool timings);

/// Columns khat, wss, seconds.
std::string curve_to_csv(const WssCurve& curve, bool timings);

}  // namespace reachavoid::io
