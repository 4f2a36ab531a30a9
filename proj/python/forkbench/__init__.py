# Copyright 2026 The forkbench Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python access to the forkbench simulator core."""

import json

from . import _core
from ._core import (
    AssemblyError,
    ConfigParseError,
    DecodeError,
    EmptyLeaves,
    ScenarioError,
    UnknownScenario,
    assemble,
    bigdiv,
    disassemble,
    hash256,
    list_scenarios,
    memcmp,
    merkle_root,
    vrf,
    write_set_hash,
)

__all__ = [
    "AssemblyError",
    "ConfigParseError",
    "DecodeError",
    "EmptyLeaves",
    "ScenarioError",
    "UnknownScenario",
    "assemble",
    "bigdiv",
    "disassemble",
    "hash256",
    "list_scenarios",
    "memcmp",
    "merkle_root",
    "run_scenario",
    "run_scenario_json",
    "scenario_spec",
    "vrf",
    "write_set_hash",
]


def run_scenario_json(name, seed=7, overrides=(), hardened=False):
    """Report text exactly as `forkbench run --out` writes it."""
    return _core.run_scenario(name, seed, list(overrides), hardened)


def run_scenario(name, seed=7, overrides=(), hardened=False):
    """Report as a dict."""
    return json.loads(run_scenario_json(name, seed, overrides, hardened))


def scenario_spec(name):
    return json.loads(_core.scenario_spec(name))
