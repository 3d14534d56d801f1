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

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "reachavoid/engine.hpp"
#include "reachavoid/io.hpp"
#include "reachavoid/random.hpp"
#include "reachavoid/rendezvous.hpp"

namespace reachavoid::cli {

namespace {

namespace fs = std::filesystem;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": bad number '" + cell + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
  return out;
}

// "a,b,c" or "lo:hi" (inclusive).
std::vector<int> parse_grid(const std::string& text) {
  std::vector<int> grid;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    const int lo = std::stoi(text.substr(0, colon));
    const int hi = std::stoi(text.substr(colon + 1));
    for (int g = lo; g <= hi; ++g) grid.push_back(g);
  } else {
    for (double v : parse_list(text, "grid")) grid.push_back(static_cast<int>(v));
  }
  if (grid.empty()) throw ConfigError("grid: empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1 || (i > 0 && grid[i] <= grid[i - 1])) {
      throw ConfigError("grid: values must be positive and increasing");
    }
  }
  return grid;
}

Vector parse_vector(const std::string& text, const char* what) {
  return vector_from(parse_list(text, what));
}

struct ModelFiles {
  std::string system, spec, noise;
};

struct Model {
  LtiSystem system;
  io::SpecFile spec;
  InputBox box;
  NoiseModel noise;
};

Model load_model(const ModelFiles& files) {
  Model m;
  m.system = io::system_from_json(io::read_json(files.system));
  m.spec = io::spec_from_json(io::read_json(files.spec));
  m.noise = io::noise_from_json(io::read_json(files.noise));
  if (m.spec.spec.safe.dim() != m.system.state_dim() ||
      m.noise.dim() != m.system.state_dim()) {
    throw ConfigError("spec or noise dimension differs from the system state");
  }
  m.box = m.spec.box(m.system.input_dim());
  return m;
}

struct SampleCount {
  int k = 0;
  double delta = 0.0, beta = 0.0;

  int resolve() const {
    const bool has_k = k > 0;
    const bool has_db = delta > 0.0 || beta > 0.0;
    if (has_k == has_db) {
      throw ConfigError("give exactly one of --K or (--delta, --beta)");
    }
    if (has_k) return k;
    const auto needed = required_scenarios({delta, beta});
    if (needed > 10'000'000) throw ConfigError("required K is too large");
    return static_cast<int>(needed);
  }
};

void add_model_options(CLI::App* cmd, ModelFiles& files) {
  cmd->add_option("--system", files.system, "system JSON {A, B}")->required();
  cmd->add_option("--spec", files.spec, "sets, horizon and input box JSON")->required();
  cmd->add_option("--noise", files.noise, "noise JSON")->required();
}

void add_count_options(CLI::App* cmd, SampleCount& count) {
  cmd->add_option("--K", count.k, "number of scenarios");
  cmd->add_option("--delta", count.delta, "allowed estimation error");
  cmd->add_option("--beta", count.beta, "allowed failure probability");
}

fs::path prepare_dir(const std::string& out) {
  const fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + out);
  return dir;
}

int sample_size(double delta, double beta, std::ostream& out) {
  out << required_scenarios({delta, beta}) << "\n";
  return kExitOk;
}

int write_rendezvous(const std::string& config, const std::string& out_dir,
                     std::ostream& out) {
  const CwhConfig cfg = config.empty()
                            ? CwhConfig{}
                            : io::cwh_config_from_json(io::read_json(config));
  const fs::path dir = prepare_dir(out_dir);
  const LtiSystem sys = build_cwh_system(cfg);
  const ReachAvoidSpec spec = build_rendezvous_spec(cfg.horizon);
  io::write_json(dir / "system.json", io::system_to_json(sys));
  io::write_json(dir / "spec.json",
                 io::spec_to_json(spec, cfg.input_lower, cfg.input_upper));
  io::write_json(dir / "noise.json", io::noise_to_json(rendezvous_noise(cfg)));
  std::ostringstream x0;
  for (Eigen::Index i = 0; i < cfg.x0.size(); ++i) {
    x0 << (i ? "," : "") << cfg.x0(i);
  }
  out << "wrote system.json spec.json noise.json to " << dir.string()
      << "; x0 = " << x0.str() << "\n";
  return kExitOk;
}

struct PrepareArgs {
  ModelFiles files;
  SampleCount count;
  int khat = 0;
  bool knee = false;
  double budget = 0.0;
  std::string grid;
  std::string x0;
  std::string initial_noise;
  std::uint64_t seed = 0;
  int restarts = 10;
  int max_iter = 100;
  double margin = 1.0;
  std::int64_t node_limit = 1'000'000;
  std::string out;
  bool timings = false;
};

int prepare(const PrepareArgs& a, std::ostream& out) {
  const Model m = load_model(a.files);
  const int k = a.count.resolve();
  const int chosen = (a.khat > 0) + a.knee + (a.budget > 0.0);
  if (chosen != 1) {
    throw ConfigError("give exactly one of --khat, --knee or --budget-s");
  }
  PrepareOptions opt;
  opt.scenarios = k;
  opt.seed = a.seed;
  opt.kmeans.restarts = a.restarts;
  opt.kmeans.max_iter = a.max_iter;
  opt.big_m_margin = a.margin;
  opt.calibration_milp.node_limit = a.node_limit;
  std::vector<int> grid;
  if (!a.grid.empty()) grid = parse_grid(a.grid);
  if (!grid.empty() && grid.back() > k) throw ConfigError("grid exceeds K");
  if (a.khat > 0) {
    if (a.khat > k) throw ConfigError("--khat exceeds K");
    opt.policy = KhatPolicy::fixed(a.khat);
  } else if (a.knee) {
    opt.policy = KhatPolicy::knee(grid);
    if (!grid.empty() && grid.size() < 3) {
      throw ConfigError("--knee needs at least three grid values");
    }
  } else {
    if (a.x0.empty()) throw ConfigError("--budget-s needs --x0 for calibration");
    opt.policy = KhatPolicy::budget(a.budget, grid);
  }
  if (!a.x0.empty()) {
    opt.calibration_x0 = parse_vector(a.x0, "--x0");
    if (opt.calibration_x0->size() != m.system.state_dim()) {
      throw ConfigError("--x0 has the wrong length");
    }
  }
  if (!a.initial_noise.empty()) {
    opt.initial_noise = io::noise_from_json(io::read_json(a.initial_noise));
  }
  OfflineArtifact art =
      offline_prepare(m.system, m.spec.spec, m.box, m.noise, opt);
  KMeansOptions km = opt.kmeans;
  km.seed = derive_seed(a.seed, 2);
  if (a.khat > 0) {
    // The fixed policy only knows its own point unless a grid was requested.
    art.curve = grid.empty()
                    ? WssCurve{{a.khat}, {art.partition.wss}, {art.prepare_seconds}}
                    : wss_curve(art.predictions.phi, grid, km);
  }
  const fs::path dir = prepare_dir(a.out);
  io::write_json(dir / "artifact.json", io::artifact_to_json(art, a.timings));
  io::write_text(dir / "wss_curve.csv", io::curve_to_csv(art.curve, a.timings));
  io::write_text(dir / "scenarios.csv", io::scenarios_to_csv(art.scenarios));
  io::write_json(dir / "scenarios.meta.json",
                 {{"count", art.scenarios.count()},
                  {"seed", art.scenarios.seed},
                  {"horizon", art.scenarios.horizon},
                  {"state_dim", art.stacked.state_dim()},
                  {"noise", to_string(m.noise.kind)},
                  {"columns", "w_<step>_<component>, both from 0"}});
  out << "K = " << k << ", khat = " << art.khat() << " (" << to_string(art.policy)
      << "), wss = " << art.partition.wss << ", fingerprint "
      << art.fingerprint() << "\n";
  return kExitOk;
}

struct VerifyArgs {
  std::string artifact;
  std::string x0;
  std::string mode = "partitioned";
  std::string inputs;
  std::int64_t node_limit = 1'000'000;
  std::string out;
  bool timings = false;
};

int verify_cmd(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const OfflineArtifact art = io::artifact_from_json(io::read_json(a.artifact));
  Vector x0 = parse_vector(a.x0, "--x0");
  if (x0.size() != art.stacked.state_dim()) throw ConfigError("--x0 has the wrong length");
  MilpOptions milp;
  milp.node_limit = a.node_limit;
  VerificationReport rep;
  if (a.mode == "partitioned") {
    rep = verify(art, x0, milp);
  } else if (a.mode == "full") {
    if (art.scenario_count() > 200) {
      err << "warning: full mode with K = " << art.scenario_count()
          << " may take exponentially long\n";
    }
    const SolveResult r = solve_full(art, x0, milp);
    rep = evaluate_report(art, x0, r.inputs);
    rep.p_khat_star = r.p_value;
    rep.khat = art.scenario_count();
    rep.optimal = r.optimal;
    rep.bound = r.bound;
    rep.nodes = r.nodes;
    rep.lp_calls = r.lp_calls;
    rep.online_seconds = r.wall_time;
  } else if (a.mode == "evaluate") {
    if (a.inputs.empty()) throw ConfigError("evaluate mode needs --u");
    const Vector u = parse_vector(a.inputs, "--u");
    if (u.size() != art.box.size()) throw ConfigError("--u must have N*nu values");
    if (!art.box.contains(u)) throw ConfigError("--u lies outside the input box");
    rep = evaluate_report(art, x0, u);
  } else {
    throw ConfigError("--mode must be partitioned, full or evaluate");
  }
  const fs::path dir = prepare_dir(a.out);
  io::write_json(dir / "report.json",
                 io::report_to_json(rep, a.mode, art.fingerprint(), a.timings));
  io::write_text(dir / "report.csv", io::report_to_csv(rep, a.mode, a.timings));
  out << "p_hat = " << rep.p_hat << ", p_khat_star = " << rep.p_khat_star
      << (rep.optimal ? "" : " (node budget reached)") << "\n";
  return rep.optimal ? kExitOk : kExitNodeBudget;
}

struct SweepArgs {
  ModelFiles files;
  SampleCount count;
  std::string khats;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string x0;
  int restarts = 10;
  double margin = 1.0;
  std::int64_t node_limit = 1'000'000;
  std::string out;
  bool timings = false;
};

struct Stats {
  double mean = 0.0, stdev = 0.0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    for (double x : v) s.stdev += (x - s.mean) * (x - s.mean);
    s.stdev = std::sqrt(s.stdev / static_cast<double>(v.size() - 1));
  }
  return s;
}

int sweep(const SweepArgs& a, std::ostream& out) {
  const Model m = load_model(a.files);
  const int k = a.count.resolve();
  if (a.trials < 1) throw ConfigError("--trials must be >= 1");
  const std::vector<int> khats = parse_grid(a.khats);
  if (khats.back() > k) throw ConfigError("--khat value exceeds K");
  const Vector x0 = parse_vector(a.x0, "--x0");
  if (x0.size() != m.system.state_dim()) throw ConfigError("--x0 has the wrong length");
  MilpOptions milp;
  milp.node_limit = a.node_limit;

  const std::size_t nk = khats.size();
  std::vector<std::vector<double>> p_hat(nk), p_star(nk), secs(nk), nodes(nk);
  std::vector<int> capped(nk, 0);
  std::ostringstream trials_csv;
  trials_csv << "trial,seed,khat,p_hat,p_khat_star,optimal,nodes,online_seconds\n";
  for (int t = 0; t < a.trials; ++t) {
    PrepareOptions opt;
    opt.scenarios = k;
    opt.seed = derive_seed(a.seed, static_cast<std::uint64_t>(t));
    opt.policy = KhatPolicy::fixed(khats.front());
    opt.kmeans.restarts = a.restarts;
    opt.big_m_margin = a.margin;
    const OfflineArtifact base =
        offline_prepare(m.system, m.spec.spec, m.box, m.noise, opt);
    KMeansOptions km = opt.kmeans;
    km.seed = derive_seed(opt.seed, 2);
    for (std::size_t c = 0; c < nk; ++c) {
      const OfflineArtifact art =
          c == 0 ? base : repartition(base, khats[c], km);
      const VerificationReport rep = verify(art, x0, milp);
      p_hat[c].push_back(rep.p_hat);
      p_star[c].push_back(rep.p_khat_star);
      secs[c].push_back(a.timings ? rep.online_seconds : 0.0);
      nodes[c].push_back(static_cast<double>(rep.nodes));
      capped[c] += !rep.optimal;
      trials_csv << t << "," << opt.seed << "," << khats[c] << ","
                 << rep.p_hat << "," << rep.p_khat_star << ","
                 << (rep.optimal ? 1 : 0) << "," << rep.nodes << ","
                 << secs[c].back() << "\n";
    }
  }
  std::ostringstream csv;
  csv.precision(10);
  csv << "khat,trials,p_hat_mean,p_hat_std,p_khat_star_mean,p_khat_star_std,"
         "seconds_mean,seconds_std,nodes_mean,node_budget_hits\n";
  for (std::size_t c = 0; c < nk; ++c) {
    const Stats ph = stats(p_hat[c]), ps = stats(p_star[c]),
                sc = stats(secs[c]), nd = stats(nodes[c]);
    csv << khats[c] << "," << a.trials << "," << ph.mean << "," << ph.stdev
        << "," << ps.mean << "," << ps.stdev << "," << sc.mean << ","
        << sc.stdev << "," << nd.mean << "," << capped[c] << "\n";
    out << "khat " << khats[c] << ": mean p_hat " << ph.mean << " (std "
        << ph.stdev << ")\n";
  }
  const fs::path dir = prepare_dir(a.out);
  io::write_text(dir / "sweep.csv", csv.str());
  io::write_text(dir / "sweep_trials.csv", trials_csv.str());
  for (int c : capped) {
    if (c > 0) return kExitNodeBudget;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Sampled reach-avoid verification with scenario reduction",
               "reachavoid"};
  app.require_subcommand(1);

  double delta = 0.0, beta = 0.0;
  auto* size_cmd = app.add_subcommand("sample-size", "scenario count for a confidence level");
  size_cmd->add_option("--delta", delta, "allowed estimation error")->required();
  size_cmd->add_option("--beta", beta, "allowed failure probability")->required();

  std::string rv_config, rv_out;
  auto* rv_cmd = app.add_subcommand("rendezvous", "write the spacecraft rendezvous model files");
  rv_cmd->add_option("--config", rv_config, "rendezvous config JSON (defaults built in)");
  rv_cmd->add_option("--out", rv_out, "output directory")->required();

  PrepareArgs pa;
  auto* prep_cmd = app.add_subcommand("prepare", "sample, partition and buffer (offline)");
  add_model_options(prep_cmd, pa.files);
  add_count_options(prep_cmd, pa.count);
  prep_cmd->add_option("--khat", pa.khat, "fixed number of cells");
  prep_cmd->add_flag("--knee", pa.knee, "pick the cell count at the knee of the WSS curve");
  prep_cmd->add_option("--budget-s", pa.budget, "largest grid cell count solving within this many seconds");
  prep_cmd->add_option("--grid", pa.grid, "cell counts for the WSS curve: a,b,c or lo:hi");
  prep_cmd->add_option("--x0", pa.x0, "calibration initial state for --budget-s");
  prep_cmd->add_option("--initial-noise", pa.initial_noise, "noise JSON for an uncertain initial state");
  prep_cmd->add_option("--seed", pa.seed, "master seed");
  prep_cmd->add_option("--restarts", pa.restarts, "k-means restarts");
  prep_cmd->add_option("--max-iter", pa.max_iter, "Lloyd iterations per restart");
  prep_cmd->add_option("--big-m-margin", pa.margin, "margin added to every big-M");
  prep_cmd->add_option("--node-limit", pa.node_limit, "branch-and-bound node budget for calibration");
  prep_cmd->add_option("--out", pa.out, "output directory")->required();
  prep_cmd->add_flag("--timings", pa.timings, "record wall-clock times (output no longer reproducible)");

  VerifyArgs va;
  auto* ver_cmd = app.add_subcommand("verify", "solve online for one initial state");
  ver_cmd->add_option("--artifact", va.artifact, "artifact.json from prepare")->required();
  ver_cmd->add_option("--x0", va.x0, "initial state, comma separated")->required();
  ver_cmd->add_option("--mode", va.mode, "partitioned, full or evaluate");
  ver_cmd->add_option("--u", va.inputs, "input sequence for evaluate mode");
  ver_cmd->add_option("--node-limit", va.node_limit, "branch-and-bound node budget");
  ver_cmd->add_option("--out", va.out, "output directory")->required();
  ver_cmd->add_flag("--timings", va.timings, "record wall-clock times");

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "repeat prepare and verify over trials and cell counts");
  add_model_options(sweep_cmd, sa.files);
  add_count_options(sweep_cmd, sa.count);
  sweep_cmd->add_option("--khat", sa.khats, "cell counts, a,b,c or lo:hi")->required();
  sweep_cmd->add_option("--trials", sa.trials, "independent scenario sets");
  sweep_cmd->add_option("--seed", sa.seed, "master seed");
  sweep_cmd->add_option("--x0", sa.x0, "initial state, comma separated")->required();
  sweep_cmd->add_option("--restarts", sa.restarts, "k-means restarts");
  sweep_cmd->add_option("--big-m-margin", sa.margin, "margin added to every big-M");
  sweep_cmd->add_option("--node-limit", sa.node_limit, "branch-and-bound node budget");
  sweep_cmd->add_option("--out", sa.out, "output directory")->required();
  sweep_cmd->add_flag("--timings", sa.timings, "record wall-clock times");

  std::vector<std::string> storage{"reachavoid"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*size_cmd) return sample_size(delta, beta, out);
    if (*rv_cmd) return write_rendezvous(rv_config, rv_out, out);
    if (*prep_cmd) return prepare(pa, out);
    if (*ver_cmd) return verify_cmd(va, out, err);
    if (*sweep_cmd) return sweep(sa, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace reachavoid::cli
