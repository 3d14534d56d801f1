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

#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "reachavoid/cli.hpp"
#include "reachavoid/engine.hpp"
#include "reachavoid/io.hpp"
#include "reachavoid/rendezvous.hpp"

namespace py = pybind11;
using namespace reachavoid;

namespace {

py::dict report_dict(const VerificationReport& r) {
  py::dict d;
  d["x0"] = r.x0;
  d["p_hat"] = r.p_hat;
  d["p_khat_star"] = r.p_khat_star;
  d["inputs"] = r.inputs;
  d["success"] = r.success;
  d["initial_state_safe"] = r.initial_state_safe;
  d["optimal"] = r.optimal;
  d["bound"] = r.bound;
  d["nodes"] = r.nodes;
  d["lp_calls"] = r.lp_calls;
  d["online_seconds"] = r.online_seconds;
  d["khat"] = r.khat;
  d["scenarios"] = r.scenarios;
  return d;
}

MilpOptions milp_options(double node_limit) {
  MilpOptions o;
  o.node_limit = static_cast<std::int64_t>(node_limit);
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scenario-based reach-avoid verification with Voronoi partitions";

  py::class_<LtiSystem>(m, "LtiSystem")
      .def(py::init([](Matrix a, Matrix b) {
             LtiSystem s{std::move(a), std::move(b)};
             s.validate();
             return s;
           }),
           py::arg("a"), py::arg("b"))
      .def_readonly("a", &LtiSystem::a)
      .def_readonly("b", &LtiSystem::b);

  py::class_<Polytope>(m, "Polytope")
      .def(py::init([](Matrix f, Vector h) {
             Polytope p{std::move(f), std::move(h)};
             p.validate();
             return p;
           }),
           py::arg("f"), py::arg("h"))
      .def_static("box", &Polytope::box, py::arg("lower"), py::arg("upper"))
      .def("contains", [](const Polytope& p, const Vector& x) { return contains(p, x); })
      .def_readonly("f", &Polytope::f)
      .def_readonly("h", &Polytope::h);

  py::class_<ReachAvoidSpec>(m, "ReachAvoidSpec")
      .def(py::init([](Polytope safe, Polytope target, int horizon) {
             ReachAvoidSpec s{std::move(safe), std::move(target), horizon};
             s.validate();
             return s;
           }),
           py::arg("safe"), py::arg("target"), py::arg("horizon"))
      .def_readonly("safe", &ReachAvoidSpec::safe)
      .def_readonly("target", &ReachAvoidSpec::target)
      .def_readonly("horizon", &ReachAvoidSpec::horizon);

  py::class_<InputBox>(m, "InputBox")
      .def(py::init([](Vector lower, Vector upper) {
             InputBox b{std::move(lower), std::move(upper)};
             b.validate();
             return b;
           }),
           py::arg("lower"), py::arg("upper"))
      .def_static("repeat", &InputBox::repeat, py::arg("lower"), py::arg("upper"),
                  py::arg("horizon"))
      .def_readonly("lower", &InputBox::lower)
      .def_readonly("upper", &InputBox::upper);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def_static("gaussian_diag", &NoiseModel::gaussian_diag, py::arg("mean"),
                  py::arg("variance"))
      .def_static("gaussian", &NoiseModel::gaussian, py::arg("mean"), py::arg("covariance"))
      .def_static("empirical", &NoiseModel::empirical, py::arg("samples"))
      .def_property_readonly("dim", &NoiseModel::dim);

  py::class_<OfflineArtifact>(m, "Artifact")
      .def_property_readonly("khat", &OfflineArtifact::khat)
      .def_property_readonly("scenario_count", &OfflineArtifact::scenario_count)
      .def_property_readonly("fingerprint", &OfflineArtifact::fingerprint)
      .def_property_readonly("predictions",
                             [](const OfflineArtifact& a) { return a.predictions.phi; })
      .def_property_readonly("seeds", [](const OfflineArtifact& a) { return a.partition.seeds; })
      .def_property_readonly("assignment",
                             [](const OfflineArtifact& a) { return a.partition.assignment; })
      .def_property_readonly("alpha", [](const OfflineArtifact& a) { return a.partition.alpha; })
      .def_property_readonly("buffers",
                             [](const OfflineArtifact& a) { return a.partition.buffers; })
      .def_property_readonly("wss_curve", [](const OfflineArtifact& a) {
        return py::make_tuple(a.curve.khat, a.curve.wss);
      })
      .def("save",
           [](const OfflineArtifact& a, const std::filesystem::path& path) {
             io::write_json(path, io::artifact_to_json(a, false));
           },
           py::arg("path"))
      .def_static("load",
                  [](const std::filesystem::path& path) {
                    return io::artifact_from_json(io::read_json(path));
                  },
                  py::arg("path"));

  m.def("required_scenarios",
        [](double delta, double beta) { return required_scenarios({delta, beta}); },
        py::arg("delta"), py::arg("beta"),
        "Smallest K with K >= -ln(beta) / (2 delta^2).");

  m.def(
      "prepare",
      [](const LtiSystem& system, const ReachAvoidSpec& spec, const InputBox& box,
         const NoiseModel& noise, int scenarios, std::uint64_t seed, std::optional<int> khat,
         std::vector<int> grid, int restarts, int max_iter, double big_m_margin) {
        PrepareOptions o;
        o.scenarios = scenarios;
        o.seed = seed;
        o.policy = khat ? KhatPolicy::fixed(*khat) : KhatPolicy::knee(std::move(grid));
        o.kmeans.restarts = restarts;
        o.kmeans.max_iter = max_iter;
        o.big_m_margin = big_m_margin;
        py::gil_scoped_release release;
        return offline_prepare(system, spec, box, noise, o);
      },
      py::arg("system"), py::arg("spec"), py::arg("box"), py::arg("noise"),
      py::arg("scenarios"), py::arg("seed") = 0, py::arg("khat") = py::none(),
      py::arg("grid") = std::vector<int>{}, py::arg("restarts") = 10,
      py::arg("max_iter") = 100, py::arg("big_m_margin") = 1.0,
      "Offline phase. Without khat the cell count is the knee of the WSS curve.");

  m.def(
      "repartition",
      [](const OfflineArtifact& a, int khat, std::uint64_t seed, int restarts) {
        py::gil_scoped_release release;
        return repartition(a, khat, {restarts, 100, seed});
      },
      py::arg("artifact"), py::arg("khat"), py::arg("seed") = 1, py::arg("restarts") = 10);

  m.def(
      "verify",
      [](const OfflineArtifact& a, const Vector& x0, double node_limit) {
        VerificationReport r;
        {
          py::gil_scoped_release release;
          r = verify(a, x0, milp_options(node_limit));
        }
        return report_dict(r);
      },
      py::arg("artifact"), py::arg("x0"), py::arg("node_limit") = 1e6);

  m.def(
      "evaluate",
      [](const OfflineArtifact& a, const Vector& x0, const Vector& inputs) {
        return report_dict(evaluate_report(a, x0, inputs));
      },
      py::arg("artifact"), py::arg("x0"), py::arg("inputs"));

  m.def(
      "solve_full",
      [](const OfflineArtifact& a, const Vector& x0, double node_limit) {
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve_full(a, x0, milp_options(node_limit));
        }
        py::dict d;
        d["p_value"] = r.p_value;
        d["inputs"] = r.inputs;
        d["z"] = r.z;
        d["optimal"] = r.optimal;
        d["bound"] = r.bound;
        d["nodes"] = r.nodes;
        return d;
      },
      py::arg("artifact"), py::arg("x0"), py::arg("node_limit") = 1e6);

  m.def(
      "kmeans",
      [](const Matrix& points, int khat, int restarts, int max_iter, std::uint64_t seed) {
        PartitionModel pm;
        {
          py::gil_scoped_release release;
          pm = kmeans(points, khat, {restarts, max_iter, seed});
        }
        py::dict d;
        d["seeds"] = pm.seeds;
        d["assignment"] = pm.assignment;
        d["alpha"] = pm.alpha;
        d["wss"] = pm.wss;
        d["iterations"] = pm.iterations;
        d["converged"] = pm.converged;
        return d;
      },
      py::arg("points"), py::arg("khat"), py::arg("restarts") = 10, py::arg("max_iter") = 100,
      py::arg("seed") = 0);

  m.def(
      "wss_curve",
      [](const Matrix& points, std::vector<int> grid, int restarts, std::uint64_t seed) {
        WssCurve c;
        {
          py::gil_scoped_release release;
          c = wss_curve(points, grid, {restarts, 100, seed});
        }
        return py::make_tuple(c.khat, c.wss, knee(c));
      },
      py::arg("points"), py::arg("grid"), py::arg("restarts") = 10, py::arg("seed") = 0,
      "Returns (grid, wss, knee).");

  m.def(
      "rendezvous_model",
      []() {
        const CwhConfig cfg;
        return py::make_tuple(build_cwh_system(cfg), build_rendezvous_spec(cfg.horizon),
                              rendezvous_input_box(cfg), rendezvous_noise(cfg), cfg.x0);
      },
      "Spacecraft rendezvous model: (system, spec, box, noise, x0).");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a command-line invocation in-process: (exit code, stdout, stderr).");
}
