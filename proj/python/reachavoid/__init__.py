# Copyright 2026 The reachavoid Authors
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
"""Scenario-based reach-avoid verification for stochastic linear systems."""

from ._core import (
    Artifact,
    InputBox,
    LtiSystem,
    NoiseModel,
    Polytope,
    ReachAvoidSpec,
    evaluate,
    kmeans,
    prepare,
    rendezvous_model,
    repartition,
    required_scenarios,
    run_cli,
    solve_full,
    verify,
    wss_curve,
)

__all__ = [
    "Artifact",
    "InputBox",
    "LtiSystem",
    "NoiseModel",
    "Polytope",
    "ReachAvoidSpec",
    "evaluate",
    "kmeans",
    "prepare",
    "rendezvous_model",
    "repartition",
    "required_scenarios",
    "run_cli",
    "solve_full",
    "verify",
    "wss_curve",
]
