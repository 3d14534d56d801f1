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

#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace reachavoid {
namespace {

using io::Json;

TEST(Io, MatrixRoundTripIsExact) {
  std::mt19937_64 rng(51);
  const Matrix m = oracle::random_matrix(rng, 4, 3, -1e3, 1e3);
  const Json j = Json::parse(io::to_json(m).dump());
  EXPECT_EQ(io::matrix_from_json(j, "m"), m);
  EXPECT_THROW(io::matrix_from_json(Json::parse("[[1, 2], [3]]"), "m"), io::FormatError);
  EXPECT_THROW(io::matrix_from_json(Json::parse("[[1, \"x\"]]"), "m"), io::FormatError);
  EXPECT_THROW(io::matrix_from_json(Json::parse("{}"), "m"), io::FormatError);
}

TEST(Io, SystemAndSpecRoundTrip) {
  std::mt19937_64 rng(52);
  const auto in = oracle::random_instance(rng);
  const LtiSystem s = io::system_from_json(io::system_to_json(in.system));
  EXPECT_EQ(s.a, in.system.a);
  EXPECT_EQ(s.b, in.system.b);
  const Vector lo = in.box.lower.head(in.system.input_dim());
  const Vector hi = in.box.upper.head(in.system.input_dim());
  const auto spec = io::spec_from_json(io::spec_to_json(in.spec, lo, hi));
  EXPECT_EQ(spec.spec.safe.f, in.spec.safe.f);
  EXPECT_EQ(spec.spec.target.h, in.spec.target.h);
  EXPECT_EQ(spec.spec.horizon, in.spec.horizon);
  EXPECT_EQ(spec.box(in.system.input_dim()).lower, in.box.lower);
  const auto stacked = io::spec_from_json(io::spec_to_json(in.spec, in.box.lower, in.box.upper));
  EXPECT_EQ(stacked.box(in.system.input_dim()).upper, in.box.upper);
  const auto odd = io::spec_from_json(
      io::spec_to_json(in.spec, Vector::Zero(in.box.size() + 1), Vector::Ones(in.box.size() + 1)));
  EXPECT_THROW(odd.box(in.system.input_dim()), io::FormatError);
}

TEST(Io, SpecRejectsMissingFields) {
  EXPECT_THROW(io::spec_from_json(Json::parse(R"({"safe": {"f": [[1]], "h": [1]}})")),
               io::FormatError);
  EXPECT_THROW(io::system_from_json(Json::parse(R"({"A": [[1, 0]], "B": [[1]]})")),
               io::FormatError);
}

TEST(Io, NoiseKinds) {
  const auto diag = NoiseModel::gaussian_diag(Vector::Zero(2), Vector::Ones(2));
  EXPECT_EQ(io::noise_from_json(io::noise_to_json(diag)).covariance, diag.covariance);
  Matrix cov(2, 2);
  cov << 2, 0.5, 0.5, 1;
  const auto full = NoiseModel::gaussian(Vector::Ones(2), cov);
  EXPECT_EQ(io::noise_from_json(io::noise_to_json(full)).covariance, cov);
  const auto table = NoiseModel::empirical(Matrix::Identity(3, 2));
  EXPECT_EQ(io::noise_from_json(io::noise_to_json(table)).table, table.table);
  EXPECT_THROW(io::noise_from_json(Json::parse(R"({"kind": "laplace"})")), io::FormatError);
  EXPECT_THROW(io::noise_from_json(Json::parse(
                   R"({"kind": "gaussian", "mean": [0, 0], "covariance": [[1, 2], [2, 1]]})")),
               io::FormatError);
}

TEST(Io, ScenarioCsv) {
  std::mt19937_64 rng(53);
  const auto in = oracle::random_instance(rng, 2, 1, 3);
  const auto sc = sample(in.noise, in.spec.horizon, 7, 9);
  const std::string csv = io::scenarios_to_csv(sc);
  EXPECT_EQ(csv.rfind("w_0_0", 0), 0u);
  EXPECT_EQ(io::scenarios_from_csv(csv), sc.w);
  EXPECT_THROW(io::scenarios_from_csv("w_0_0,w_0_1\n1,2\n3\n"), io::FormatError);
  EXPECT_THROW(io::scenarios_from_csv("w_0_0\nabc\n"), io::FormatError);
}

TEST(Io, ArtifactRoundTrip) {
  std::mt19937_64 rng(54);
  const auto in = oracle::random_instance(rng);
  PrepareOptions opt;
  opt.scenarios = 40;
  opt.seed = 8;
  opt.policy = KhatPolicy::knee({1, 3, 6, 12});
  opt.kmeans.restarts = 2;
  opt.initial_noise = in.noise;
  const auto art = offline_prepare(in.system, in.spec, in.box, in.noise, opt);
  const Json j = Json::parse(io::artifact_to_json(art, false).dump(2));
  const auto back = io::artifact_from_json(j);
  EXPECT_EQ(back.fingerprint(), art.fingerprint());
  EXPECT_EQ(back.predictions.phi, art.predictions.phi);
  EXPECT_EQ(back.partition.buffers, art.partition.buffers);
  EXPECT_EQ(back.curve.wss, art.curve.wss);
  EXPECT_EQ(back.policy, KhatPolicyKind::kKnee);
  EXPECT_EQ(j.at("prepare_seconds").get<double>(), 0.0);
  for (double s : j.at("curve").at("seconds")) EXPECT_EQ(s, 0.0);
  EXPECT_EQ(verify(back, in.x0).p_hat, verify(art, in.x0).p_hat);

  Json edited = j;
  edited["partition"]["buffers"][0][0] = 123.0;
  EXPECT_THROW(io::artifact_from_json(edited), io::FormatError);
  Json future = j;
  future["version"] = 99;
  EXPECT_THROW(io::artifact_from_json(future), io::FormatError);
}

TEST(Io, ReportFormats) {
  VerificationReport r;
  r.x0 = Vector::Zero(2);
  r.inputs = Vector::Ones(3);
  r.p_hat = 0.75;
  r.p_khat_star = 0.5;
  r.success = {1, 1, 0, 1};
  r.online_seconds = 1.5;
  const Json j = io::report_to_json(r, "partitioned", "abc", false);
  EXPECT_EQ(j.at("successes"), 3);
  EXPECT_EQ(j.at("online_seconds"), 0.0);
  EXPECT_EQ(io::report_to_json(r, "partitioned", "abc", true).at("online_seconds"), 1.5);
  EXPECT_EQ(io::report_to_csv(r, "full", false),
            "mode,khat,scenarios,p_hat,p_khat_star,bound,optimal,nodes,lp_calls,"
            "online_seconds\nfull,0,0,0.75,0.5,0,1,0,0,0\n");
  const WssCurve c{{1, 2}, {3.5, 0.1}, {0.2, 0.3}};
  EXPECT_EQ(io::curve_to_csv(c, false), "khat,wss,seconds\n1,3.5,0\n2,0.1,0\n");
}

}  // namespace
}  // namespace reachavoid
