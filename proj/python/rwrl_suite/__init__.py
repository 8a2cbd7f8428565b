# Copyright 2026 The rwrl-suite Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python front end for the rwrl challenge suite.

Configs are plain dicts using the same schema as the CLI's JSON files.
Missing keys take their defaults; unknown keys raise ConfigError.
"""

import json

from . import _core
from ._core import (
    ConfigError,
    ContractError,
    DatasetError,
    LinearPolicy,
    StepKind,
    TimeStep,
    compute_metrics,
    verify_dataset,
)

__all__ = [
    "ConfigError",
    "ContractError",
    "DatasetError",
    "LinearPolicy",
    "StepKind",
    "TimeStep",
    "bc_train",
    "combined_preset",
    "compute_metrics",
    "config_hash",
    "default_config",
    "load_dataset",
    "make_env",
    "normalize_config",
    "record_dataset",
    "run_experiment",
    "scheduler_trajectory",
    "verify_dataset",
]


def _dump(config):
    return json.dumps(config or {})


def default_config():
    return json.loads(_core.default_config())


def combined_preset(tier):
    return json.loads(_core.combined_preset(tier))


def normalize_config(config):
    """Validates `config` and returns the complete tree."""
    return json.loads(_core.normalize_config(_dump(config)))


def config_hash(config):
    return _core.config_hash(_dump(config))


def make_env(config=None, seed=0):
    """Builds the wrapped environment for `config` (canonical wrapper order)."""
    return _core.Environment(_dump(config), seed)


def scheduler_trajectory(config, n, seed=0):
    return _core.scheduler_trajectory(_dump(config), n, seed)


def run_experiment(config, agent="cem", iterations=300, eval_episodes=100, out_dir=None):
    return _core.run_experiment(_dump(config), agent, iterations, eval_episodes, out_dir)


def record_dataset(config, policy, n_episodes, directory, seed=0, noise_seed=0):
    return json.loads(_core.record_dataset(_dump(config), policy, n_episodes, directory, seed, noise_seed))


def load_dataset(directory):
    raw = _core.load_dataset(directory)
    return {
        "manifest": json.loads(raw["manifest"]),
        "episodes": [json.loads(line) for line in raw["episodes"]],
        "num_transitions": raw["num_transitions"],
    }


def bc_train(directory):
    """Behaviour cloning on a recorded dataset; returns (policy, warning)."""
    return _core.bc_train(directory)
