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

#include "reachavoid/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace reachavoid::io {

namespace {

const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(what + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw FormatError(what + ": expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw FormatError(what + ": expected an integer");
  return j.get<int>();
}

Polytope polytope_from_json(const Json& j, const std::string& what) {
  Polytope p{matrix_from_json(field(j, "f", what), what + ".f"),
             vector_from_json(field(j, "h", what), what + ".h")};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(what + ": " + e.what());
  }
  return p;
}

Json polytope_to_json(const Polytope& p) {
  return {{"f", to_json(p.f)}, {"h", to_json(p.h)}};
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  double back = 0.0;
  for (int digits = 1; digits <= 17; ++digits) {
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    std::istringstream(s.str()) >> back;
    if (back == v) return s.str();
  }
  return out.str();
}

std::vector<int> ints_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected an array");
  std::vector<int> out;
  for (const auto& v : j) out.push_back(integer(v, what));
  return out;
}

}  // namespace

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) throw FormatError(what + ": expected an array of rows");
    std::vector<double> r;
    for (const auto& v : row) r.push_back(number(v, what));
    rows.push_back(std::move(r));
  }
  try {
    Matrix m = matrix_from_rows(rows);
    require_finite(m, what);
    return m;
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

Vector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected an array");
  std::vector<double> values;
  for (const auto& v : j) values.push_back(number(v, what));
  return vector_from(values);
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

LtiSystem system_from_json(const Json& j) {
  LtiSystem s{matrix_from_json(field(j, "A", "system"), "system.A"),
              matrix_from_json(field(j, "B", "system"), "system.B")};
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return s;
}

Json system_to_json(const LtiSystem& system) {
  return {{"A", to_json(system.a)}, {"B", to_json(system.b)}};
}

InputBox SpecFile::box(Eigen::Index input_dim) const {
  const Eigen::Index n = spec.horizon;
  if (input_lower.size() != input_upper.size()) {
    throw FormatError("input_box: lower and upper lengths differ");
  }
  InputBox b;
  if (input_lower.size() == input_dim) {
    b = InputBox::repeat(input_lower, input_upper, spec.horizon);
  } else if (input_lower.size() == input_dim * n) {
    b = InputBox{input_lower, input_upper};
  } else {
    throw FormatError("input_box: length must be nu or N*nu");
  }
  try {
    b.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("input_box: ") + e.what());
  }
  if (!b.bounded()) throw FormatError("input_box: bounds must be finite");
  return b;
}

SpecFile spec_from_json(const Json& j) {
  SpecFile out;
  out.spec.safe = polytope_from_json(field(j, "safe", "spec"), "spec.safe");
  out.spec.target = polytope_from_json(field(j, "target", "spec"), "spec.target");
  out.spec.horizon = integer(field(j, "N", "spec"), "spec.N");
  try {
    out.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  const Json& box = field(j, "input_box", "spec");
  out.input_lower = vector_from_json(field(box, "lower", "input_box"), "input_box.lower");
  out.input_upper = vector_from_json(field(box, "upper", "input_box"), "input_box.upper");
  return out;
}

Json spec_to_json(const ReachAvoidSpec& spec, const Vector& lower,
                  const Vector& upper) {
  return {{"safe", polytope_to_json(spec.safe)},
          {"target", polytope_to_json(spec.target)},
          {"N", spec.horizon},
          {"input_box", {{"lower", to_json(lower)}, {"upper", to_json(upper)}}}};
}

NoiseModel noise_from_json(const Json& j) {
  const Json& kind_j = field(j, "kind", "noise");
  if (!kind_j.is_string()) throw FormatError("noise.kind: expected a string");
  const std::string kind = kind_j.get<std::string>();
  NoiseModel n;
  try {
    if (kind == "gaussian_diag") {
      n = NoiseModel::gaussian_diag(
          vector_from_json(field(j, "mean", "noise"), "noise.mean"),
          vector_from_json(field(j, "variance", "noise"), "noise.variance"));
    } else if (kind == "gaussian") {
      n = NoiseModel::gaussian(
          vector_from_json(field(j, "mean", "noise"), "noise.mean"),
          matrix_from_json(field(j, "covariance", "noise"), "noise.covariance"));
    } else if (kind == "table") {
      n = NoiseModel::empirical(
          matrix_from_json(field(j, "samples", "noise"), "noise.samples"));
    } else {
      throw FormatError("noise.kind: unknown kind '" + kind + "'");
    }
    n.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("noise: ") + e.what());
  }
  return n;
}

Json noise_to_json(const NoiseModel& noise) {
  switch (noise.kind) {
    case NoiseKind::kGaussianDiag:
      return {{"kind", "gaussian_diag"},
              {"mean", to_json(noise.mean)},
              {"variance", to_json(Vector(noise.covariance.diagonal()))}};
    case NoiseKind::kGaussianFull:
      return {{"kind", "gaussian"},
              {"mean", to_json(noise.mean)},
              {"covariance", to_json(noise.covariance)}};
    case NoiseKind::kTable:
      return {{"kind", "table"}, {"samples", to_json(noise.table)}};
  }
  throw FormatError("noise: unknown kind");
}

CwhConfig cwh_config_from_json(const Json& j) {
  CwhConfig c;
  auto num = [&](const char* key, double& out) {
    if (j.contains(key)) out = number(j.at(key), std::string("rendezvous.") + key);
  };
  auto vec = [&](const char* key, Vector& out) {
    if (j.contains(key)) out = vector_from_json(j.at(key), std::string("rendezvous.") + key);
  };
  if (!j.is_object()) throw FormatError("rendezvous: expected an object");
  num("mass", c.mass);
  num("altitude", c.altitude);
  num("sampling_period", c.sampling_period);
  if (j.contains("horizon")) c.horizon = integer(j.at("horizon"), "rendezvous.horizon");
  num("gravitational_parameter", c.gravitational_parameter);
  num("earth_radius", c.earth_radius);
  vec("noise_variance", c.noise_variance);
  vec("x0", c.x0);
  vec("input_lower", c.input_lower);
  vec("input_upper", c.input_upper);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return c;
}

Json cwh_config_to_json(const CwhConfig& c) {
  return {{"mass", c.mass},
          {"altitude", c.altitude},
          {"sampling_period", c.sampling_period},
          {"horizon", c.horizon},
          {"gravitational_parameter", c.gravitational_parameter},
          {"earth_radius", c.earth_radius},
          {"noise_variance", to_json(c.noise_variance)},
          {"x0", to_json(c.x0)},
          {"input_lower", to_json(c.input_lower)},
          {"input_upper", to_json(c.input_upper)}};
}

std::string scenarios_to_csv(const ScenarioSet& scenarios) {
  const Eigen::Index cols = scenarios.w.cols();
  const Eigen::Index nx = scenarios.horizon > 0 ? cols / scenarios.horizon : cols;
  std::ostringstream out;
  for (Eigen::Index c = 0; c < cols; ++c) {
    out << (c ? "," : "") << "w_" << c / nx << "_" << c % nx;
  }
  out << "\n";
  for (Eigen::Index i = 0; i < scenarios.w.rows(); ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      out << (c ? "," : "") << fmt(scenarios.w(i, c));
    }
    out << "\n";
  }
  return out.str();
}

Matrix scenarios_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("scenario csv: empty");
  const auto cols = std::count(line.begin(), line.end(), ',') + 1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw FormatError("scenario csv: bad number '" + cell + "'");
      }
    }
    if (static_cast<long>(row.size()) != cols) {
      throw FormatError("scenario csv: row " + std::to_string(rows.size()) +
                        " has the wrong number of cells");
    }
    rows.push_back(std::move(row));
  }
  Matrix m = matrix_from_rows(rows);
  if (rows.empty()) m.resize(0, cols);
  return m;
}

Json artifact_to_json(const OfflineArtifact& a, bool timings) {
  const auto& p = a.partition;
  Json curve = {{"khat", a.curve.khat}, {"wss", a.curve.wss}};
  std::vector<double> secs(a.curve.seconds.size(), 0.0);
  if (timings) secs = a.curve.seconds;
  curve["seconds"] = secs;
  return {
      {"format", "reachavoid-artifact"},
      {"version", kArtifactVersion},
      {"system", system_to_json(a.system)},
      {"spec", spec_to_json(a.spec, a.box.lower, a.box.upper)},
      {"noise", noise_to_json(a.noise)},
      {"scenarios",
       {{"count", a.scenarios.count()},
        {"seed", a.scenarios.seed},
        {"horizon", a.scenarios.horizon},
        {"w", to_json(a.scenarios.w)},
        {"initial_offsets", to_json(a.initial_offsets)}}},
      {"policy", to_string(a.policy)},
      {"khat", a.khat()},
      {"big_m_margin", a.big_m_margin},
      {"partition",
       {{"seeds", to_json(p.seeds)},
        {"assignment", p.assignment},
        {"alpha", p.alpha},
        {"buffers", to_json(p.buffers)},
        {"wss", p.wss},
        {"iterations", p.iterations},
        {"converged", p.converged}}},
      {"curve", curve},
      {"prepare_seconds", timings ? a.prepare_seconds : 0.0},
      {"fingerprint", a.fingerprint()},
  };
}

OfflineArtifact artifact_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != "reachavoid-artifact") {
    throw FormatError("artifact: not a reachavoid artifact");
  }
  if (integer(field(j, "version", "artifact"), "artifact.version") !=
      kArtifactVersion) {
    throw FormatError("artifact: unsupported version");
  }
  OfflineArtifact a;
  a.system = system_from_json(field(j, "system", "artifact"));
  const SpecFile spec = spec_from_json(field(j, "spec", "artifact"));
  a.spec = spec.spec;
  a.box = spec.box(a.system.input_dim());
  a.noise = noise_from_json(field(j, "noise", "artifact"));
  const Json& sc = field(j, "scenarios", "artifact");
  a.scenarios.w = matrix_from_json(field(sc, "w", "scenarios"), "scenarios.w");
  a.scenarios.seed = field(sc, "seed", "scenarios").get<std::uint64_t>();
  a.scenarios.horizon = integer(field(sc, "horizon", "scenarios"), "scenarios.horizon");
  a.initial_offsets = matrix_from_json(field(sc, "initial_offsets", "scenarios"),
                                       "scenarios.initial_offsets");
  a.stacked = stack(a.system, a.spec.horizon);
  a.constraint = build_trajectory_constraint(a.spec);
  if (a.scenarios.w.cols() != a.stacked.gw.cols() || a.scenarios.w.rows() < 1) {
    throw FormatError("artifact: scenario matrix has the wrong shape");
  }
  a.predictions = predict(a.scenarios, a.stacked.gw);
  if (a.initial_offsets.size() > 0) {
    if (a.initial_offsets.rows() != a.scenarios.w.rows() ||
        a.initial_offsets.cols() != a.stacked.state_dim()) {
      throw FormatError("artifact: initial offsets have the wrong shape");
    }
    a.predictions.phi += a.initial_offsets * a.stacked.gx.transpose();
  }
  const std::string policy = j.value("policy", "fixed");
  a.policy = policy == "knee"     ? KhatPolicyKind::kKnee
             : policy == "budget" ? KhatPolicyKind::kBudget
                                  : KhatPolicyKind::kFixed;
  a.big_m_margin = number(field(j, "big_m_margin", "artifact"), "big_m_margin");
  const Json& pj = field(j, "partition", "artifact");
  auto& p = a.partition;
  p.seeds = matrix_from_json(field(pj, "seeds", "partition"), "partition.seeds");
  p.assignment = ints_from_json(field(pj, "assignment", "partition"), "partition.assignment");
  p.alpha = ints_from_json(field(pj, "alpha", "partition"), "partition.alpha");
  p.buffers = matrix_from_json(field(pj, "buffers", "partition"), "partition.buffers");
  p.wss = number(field(pj, "wss", "partition"), "partition.wss");
  p.iterations = integer(field(pj, "iterations", "partition"), "partition.iterations");
  p.converged = field(pj, "converged", "partition").get<bool>();
  try {
    p.validate(a.scenarios.w.rows());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("artifact: ") + e.what());
  }
  if (j.contains("curve")) {
    const Json& c = j.at("curve");
    a.curve.khat = ints_from_json(field(c, "khat", "curve"), "curve.khat");
    a.curve.wss = field(c, "wss", "curve").get<std::vector<double>>();
    a.curve.seconds = field(c, "seconds", "curve").get<std::vector<double>>();
  }
  a.prepare_seconds = j.value("prepare_seconds", 0.0);
  if (a.fingerprint() != field(j, "fingerprint", "artifact").get<std::string>()) {
    throw FormatError("artifact: fingerprint mismatch (file edited or corrupt)");
  }
  return a;
}

Json report_to_json(const VerificationReport& r, const std::string& mode,
                    const std::string& fingerprint, bool timings) {
  int successes = 0;
  for (int s : r.success) successes += s;
  return {{"format", "reachavoid-report"},
          {"version", kReportVersion},
          {"mode", mode},
          {"artifact_fingerprint", fingerprint},
          {"x0", to_json(r.x0)},
          {"initial_state_safe", r.initial_state_safe},
          {"khat", r.khat},
          {"scenarios", r.scenarios},
          {"p_hat", r.p_hat},
          {"p_khat_star", r.p_khat_star},
          {"bound", r.bound},
          {"optimal", r.optimal},
          {"nodes", r.nodes},
          {"lp_calls", r.lp_calls},
          {"online_seconds", timings ? r.online_seconds : 0.0},
          {"inputs", to_json(r.inputs)},
          {"successes", successes},
          {"success", r.success}};
}

std::string report_to_csv(const VerificationReport& r, const std::string& mode,
                          bool timings) {
  std::ostringstream out;
  out << "mode,khat,scenarios,p_hat,p_khat_star,bound,optimal,nodes,lp_calls,"
         "online_seconds\n"
      << mode << "," << r.khat << "," << r.scenarios << "," << fmt(r.p_hat)
      << "," << fmt(r.p_khat_star) << "," << fmt(r.bound) << ","
      << (r.optimal ? 1 : 0) << "," << r.nodes << "," << r.lp_calls << ","
      << fmt(timings ? r.online_seconds : 0.0) << "\n";
  return out.str();
}

std::string curve_to_csv(const WssCurve& curve, bool timings) {
  std::ostringstream out;
  out << "khat,wss,seconds\n";
  for (std::size_t i = 0; i < curve.khat.size(); ++i) {
    out << curve.khat[i] << "," << fmt(curve.wss[i]) << ","
        << fmt(timings ? curve.seconds[i] : 0.0) << "\n";
  }
  return out.str();
}

}  // namespace reachavoid::io
