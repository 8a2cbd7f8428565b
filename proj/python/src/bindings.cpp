// Copyright 2026 The rwrl-suite Authors
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

// Python bindings. Configs cross the boundary as JSON text; the package's
// __init__ turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rwrl/config.hpp"
#include "rwrl/dataset.hpp"
#include "rwrl/envs.hpp"
#include "rwrl/errors.hpp"
#include "rwrl/experiment.hpp"
#include "rwrl/metrics.hpp"

namespace py = pybind11;
using namespace rwrl;

namespace {

// Owns a wrapped environment built from a config.
class PyEnv {
 public:
  PyEnv(const std::string& config_json, std::uint64_t seed)
      : env_(build_env(config_from_json(nlohmann::json::parse(config_json)), seed)) {}

  TimeStep reset(std::uint64_t seed) { return env_->reset(seed); }
  TimeStep step(const std::vector<double>& action) { return env_->step(action); }
  Environment& env() { return *env_; }

 private:
  EnvPtr env_;
};

ChallengeConfig parse(const std::string& j) { return config_from_json(nlohmann::json::parse(j)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Challenge wrappers, presets, metrics and offline datasets for cartpole swing-up";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DatasetError>(m, "DatasetError", PyExc_RuntimeError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);

  py::enum_<StepKind>(m, "StepKind")
      .value("FIRST", StepKind::kFirst)
      .value("MID", StepKind::kMid)
      .value("LAST", StepKind::kLast);

  py::class_<TimeStep>(m, "TimeStep")
      .def_readonly("kind", &TimeStep::kind)
      .def_readonly("reward", &TimeStep::reward)
      .def_readonly("base_reward", &TimeStep::base_reward)
      .def_readonly("discount", &TimeStep::discount)
      .def_readonly("observation", &TimeStep::observation)
      .def_readonly("constraints", &TimeStep::constraints)
      .def("first", &TimeStep::first)
      .def("last", &TimeStep::last)
      .def("__repr__", [](const TimeStep& t) {
        return "<TimeStep reward=" + std::to_string(t.reward) + " dim=" + std::to_string(t.observation.size()) + ">";
      });

  py::class_<PyEnv>(m, "Environment")
      .def(py::init<const std::string&, std::uint64_t>(), py::arg("config_json"), py::arg("seed") = 0)
      .def("reset", &PyEnv::reset, py::arg("seed"))
      .def("step", &PyEnv::step, py::arg("action"))
      .def_property_readonly("observation_names", [](PyEnv& e) { return e.env().observation_spec().names; })
      .def_property_readonly("action_names", [](PyEnv& e) { return e.env().action_spec().names; })
      .def_property_readonly("constraint_names", [](PyEnv& e) { return e.env().constraint_names(); })
      .def("episode_violations", [](PyEnv& e) { return e.env().episode_violations(); });

  m.def("default_config", [] { return to_json(ChallengeConfig{}).dump(); });
  m.def("combined_preset", [](const std::string& tier) { return to_json(combined_preset(tier)).dump(); },
        py::arg("tier"));
  m.def("normalize_config", [](const std::string& j) { return to_json(parse(j)).dump(); }, py::arg("config_json"),
        "Validate a (partial) config and return the full tree.");
  m.def("config_hash", [](const std::string& j) { return config_hash(parse(j)); }, py::arg("config_json"));

  py::class_<ReferenceStats>(m, "ReferenceStats")
      .def_readonly("mean", &ReferenceStats::mean)
      .def_readonly("lower", &ReferenceStats::lower)
      .def_readonly("upper", &ReferenceStats::upper);
  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("reference", &MetricsReport::reference)
      .def_readonly("convergence_episode", &MetricsReport::convergence_episode)
      .def_readonly("regret", &MetricsReport::regret)
      .def_readonly("instability_pct", &MetricsReport::instability_pct);
  m.def(
      "compute_metrics",
      [](std::vector<double> returns, int window, std::optional<std::vector<double>> reference) {
        const ReturnSeries s{std::move(returns), window};
        if (!reference) return compute_metrics(s);
        const ReturnSeries ref{std::move(*reference), window};
        return compute_metrics(s, &ref);
      },
      py::arg("returns"), py::arg("window_size") = kDefaultWindowSize, py::arg("reference") = py::none());

  py::class_<SchedulerState>(m, "_SchedulerState");
  m.def(
      "scheduler_trajectory",
      [](const std::string& config_json, int n, std::uint64_t seed) {
        const PerturbSpec spec = parse(config_json).perturb.spec;
        SchedulerState s = initial_scheduler_state(spec, seed);
        std::vector<double> out{s.current_value};
        for (int i = 0; i < n; ++i) {
          s = advance(std::move(s), spec);
          out.push_back(s.current_value);
        }
        return out;
      },
      py::arg("config_json"), py::arg("n"), py::arg("seed") = 0,
      "Values of the configured perturbation scheduler over n updates, starting value first.");

  py::class_<LinearPolicy>(m, "LinearPolicy")
      .def(py::init<std::size_t, std::size_t, std::vector<double>>(), py::arg("obs_dim"), py::arg("action_dim"),
           py::arg("params"))
      .def("act", [](LinearPolicy& p, const std::vector<double>& o) { return p.act(o); })
      .def_property_readonly("params", &LinearPolicy::params)
      .def_property_readonly("id", &LinearPolicy::id)
      .def("to_json", [](const LinearPolicy& p) { return p.to_json().dump(); })
      .def_static("from_json", [](const std::string& j) { return LinearPolicy::from_json(nlohmann::json::parse(j)); });

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::string& agent, int iterations, int eval_episodes,
         std::optional<std::string> out_dir) {
        AgentConfig a;
        a.kind = parse_agent_kind(agent);
        a.iterations = iterations;
        RunOptions o;
        o.final_eval_episodes = eval_episodes;
        if (out_dir) o.out_dir = *out_dir;
        ExperimentResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(parse(config_json), a, o);
        }
        py::list seeds;
        for (const auto& s : r.seeds) {
          py::dict d;
          d["seed"] = s.seed;
          d["failed"] = s.failed;
          d["failure"] = s.failure;
          d["training_returns"] = s.training.returns;
          d["final_returns"] = s.final_returns;
          d["final_mean"] = s.final_mean;
          d["convergence_episode"] = s.metrics.convergence_episode;
          d["regret"] = s.metrics.regret;
          d["instability_pct"] = s.metrics.instability_pct;
          d["violations"] = s.metrics.per_constraint_violations;
          seeds.append(d);
        }
        py::dict out;
        out["config_hash"] = r.config_hash;
        out["mean_final"] = r.mean_final;
        out["sd_final"] = r.sd_final;
        out["seeds"] = seeds;
        return out;
      },
      py::arg("config_json"), py::arg("agent") = "cem", py::arg("iterations") = AgentConfig{}.iterations,
      py::arg("eval_episodes") = RunOptions{}.final_eval_episodes, py::arg("out_dir") = py::none());

  m.def(
      "record_dataset",
      [](const std::string& config_json, LinearPolicy policy, int n, const std::filesystem::path& dir,
         std::uint64_t seed, std::uint64_t noise_seed) {
        const DatasetManifest mf = record(parse(config_json), policy, n, dir, {seed, noise_seed, std::nullopt});
        return to_json(mf).dump();
      },
      py::arg("config_json"), py::arg("policy"), py::arg("n_episodes"), py::arg("dir"), py::arg("seed") = 0,
      py::arg("noise_seed") = 0, "Roll out `policy` and write a dataset; returns the manifest as JSON.");
  m.def(
      "verify_dataset",
      [](const std::filesystem::path& dir) {
        std::string detail;
        const bool ok = verify(dir, &detail);
        return py::make_tuple(ok, detail);
      },
      py::arg("dir"));
  m.def(
      "load_dataset",
      [](const std::filesystem::path& dir) {
        const Dataset d = load(dir);
        py::list episodes;
        for (const auto& e : d.episodes()) episodes.append(to_json(e).dump());
        py::dict out;
        out["manifest"] = to_json(d.manifest()).dump();
        out["episodes"] = episodes;
        out["num_transitions"] = d.num_transitions();
        return out;
      },
      py::arg("dir"), "Checksum-verified load; episodes come back as JSON lines.");
  m.def(
      "bc_train",
      [](const std::filesystem::path& dir) {
        std::string warning;
        LinearPolicy p = bc_train(load(dir), &warning);
        return py::make_tuple(p, warning);
      },
      py::arg("dir"));
}
