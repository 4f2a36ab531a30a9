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

import hashlib
import json
import os
import struct
import subprocess

import pytest

import forkbench


def test_hash256_matches_hashlib():
    for data in (b"", b"abc", bytes(range(256))):
        assert forkbench.hash256(data) == hashlib.sha256(data).digest()


def test_merkle_duplicate_last():
    leaves = [hashlib.sha256(struct.pack("<Q", i)).digest() for i in range(3)]
    padded = leaves + [leaves[-1]]
    assert forkbench.merkle_root(leaves, "VulnerableDuplicateLast") == forkbench.merkle_root(
        padded, "VulnerableDuplicateLast"
    )
    assert forkbench.merkle_root(leaves) != forkbench.merkle_root(padded)
    with pytest.raises(forkbench.EmptyLeaves):
        forkbench.merkle_root([])


def test_assembler_round_trip():
    code = forkbench.assemble('PUSH_BYTES "A"\nPUSH_INT 5\nTRANSFER TKN\nHALT')
    assert forkbench.assemble(forkbench.disassemble(code)) == code
    with pytest.raises(forkbench.AssemblyError):
        forkbench.assemble("NOT_AN_OP")


def test_vm_modes():
    assert forkbench.memcmp(b"a\x01", b"a\x10", "Raw") == -15
    assert forkbench.memcmp(b"a\x01", b"a\x10", "Normalized") == -1
    assert forkbench.bigdiv(-7, 2, "TruncTowardZero") == -3
    assert forkbench.bigdiv(-7, 2, "Floor") == -4
    assert forkbench.bigdiv(1, 0) is None


def test_write_set_hash_detects_reorder():
    a = [("put", "TKN", b"A", struct.pack("<Q", 5)), ("put", "TKN", b"B", struct.pack("<Q", 5))]
    assert forkbench.write_set_hash(a) != forkbench.write_set_hash(a[::-1])


def test_vrf_zero_key():
    vrf = forkbench.vrf
    beta, proof = vrf.prove(0, b"round-1")
    assert proof[0] == 1
    assert beta == vrf.degenerate_beta()
    assert vrf.prove(0, b"round-2")[0] == beta
    assert vrf.verify(vrf.public_key(0), b"round-1", proof) == beta
    assert vrf.key_accepted(0, "Lax")
    assert not vrf.key_accepted(0, "Strict")
    beta7, proof7 = vrf.prove(7, b"x")
    assert vrf.verify(vrf.public_key(7), b"x", proof7) == beta7
    assert vrf.verify(vrf.public_key(7), b"y", proof7) is None


def test_catalog_and_reports():
    entries = forkbench.list_scenarios()
    assert len(entries) == 16
    names = [e[0] for e in entries]
    assert "S2-merkle-dup" in names
    report = forkbench.run_scenario("S2-merkle-dup", seed=7)
    assert report["verdict"]["status"] == "Pass"
    assert report["summary"]["double_spends"] == 1
    hardened = forkbench.run_scenario("S2-merkle-dup", seed=7, hardened=True)
    assert hardened["summary"]["double_spends"] == 0
    text = forkbench.run_scenario_json("S5-memcmp", 3)
    assert text == forkbench.run_scenario_json("S5-memcmp", 3)
    assert json.loads(text)["seed"] == 3
    with pytest.raises(forkbench.UnknownScenario):
        forkbench.run_scenario("nope")
    with pytest.raises(forkbench.ConfigParseError):
        forkbench.run_scenario("S5-memcmp", overrides=["nodes.ghost.cfg.write_set_check=true"])


def test_spec_file_round_trip(tmp_path):
    spec = forkbench.scenario_spec("S6-bigdiv")
    path = tmp_path / "s6.json"
    path.write_text(json.dumps(spec))
    assert forkbench.run_scenario_json(str(path), 7) == forkbench.run_scenario_json("S6-bigdiv", 7)


@pytest.mark.skipif("FORKBENCH_BIN" not in os.environ, reason="CLI path not provided")
def test_cli_report_matches_binding(tmp_path):
    out = tmp_path / "r.json"
    rc = subprocess.run([os.environ["FORKBENCH_BIN"], "run", "S1-witness-bypass", "--out", str(out)]).returncode
    assert rc == 0
    assert out.read_text() == forkbench.run_scenario_json("S1-witness-bypass", 7)
