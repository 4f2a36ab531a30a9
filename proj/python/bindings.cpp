/*
 * Copyright 2026 The forkbench Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "forkbench/assembler.hpp"
#include "forkbench/hashcore.hpp"
#include "forkbench/mitigation.hpp"
#include "forkbench/scenario.hpp"
#include "forkbench/scriptvm.hpp"
#include "forkbench/vrfsel.hpp"

namespace py = pybind11;
using namespace forkbench;

namespace {

py::bytes to_py(ByteView b) { return py::bytes(reinterpret_cast<const char*>(b.data()), b.size()); }
py::bytes to_py(const Digest& d) { return to_py(d.view()); }

Bytes from_py(const py::bytes& b) { return to_bytes(std::string(b)); }

Digest digest_from_py(const py::bytes& b) {
  const std::string s(b);
  if (s.size() != 32) throw py::value_error("digest must be 32 bytes");
  Digest d;
  std::copy(s.begin(), s.end(), d.bytes.begin());
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "forkbench native core";

  py::register_exception<UnknownScenario>(m, "UnknownScenario", PyExc_KeyError);
  py::register_exception<ConfigParseError>(m, "ConfigParseError", PyExc_ValueError);
  py::register_exception<ScenarioError>(m, "ScenarioError", PyExc_ValueError);
  py::register_exception<AssemblyError>(m, "AssemblyError", PyExc_ValueError);
  py::register_exception<DecodeError>(m, "DecodeError", PyExc_ValueError);
  py::register_exception<EmptyLeaves>(m, "EmptyLeaves", PyExc_ValueError);

  m.def("hash256", [](const py::bytes& data) { return to_py(hash256(from_py(data))); }, py::arg("data"),
        "SHA-256 of `data`.");

  m.def(
      "merkle_root",
      [](const std::vector<py::bytes>& leaves, const std::string& mode) {
        std::vector<Digest> ds;
        for (const py::bytes& l : leaves) ds.push_back(digest_from_py(l));
        return to_py(merkle_root(ds, merkle_mode_from_string(mode)));
      },
      py::arg("leaves"), py::arg("mode") = "HardenedCountCommitted");

  m.def("assemble", [](const std::string& src) { return to_py(assemble(src)); }, py::arg("source"));
  m.def("disassemble", [](const py::bytes& script) { return disassemble(from_py(script)); }, py::arg("script"));

  m.def(
      "memcmp",
      [](const py::bytes& a, const py::bytes& b, const std::string& mode) {
        return op_memcmp(from_py(a), from_py(b), memcmp_mode_from_string(mode));
      },
      py::arg("a"), py::arg("b"), py::arg("mode") = "Normalized");
  m.def(
      "bigdiv",
      [](int64_t a, int64_t b, const std::string& mode) { return op_bigdiv(a, b, bigdiv_mode_from_string(mode)); },
      py::arg("a"), py::arg("b"), py::arg("mode") = "TruncTowardZero",
      "Quotient, or None for division by zero and INT64_MIN / -1.");

  m.def(
      "write_set_hash",
      [](const std::vector<std::tuple<std::string, std::string, py::bytes, py::bytes>>& ops) {
        WriteLog log;
        for (const auto& [kind, space, key, value] : ops) {
          if (kind == "put") {
            log.append(WriteOp::put(space, from_py(key), from_py(value)));
          } else if (kind == "delete") {
            log.append(WriteOp::erase(space, from_py(key)));
          } else {
            throw py::value_error("write kind must be 'put' or 'delete'");
          }
        }
        return to_py(write_set_hash(log));
      },
      py::arg("ops"), "Hash of a write log given as (kind, space, key, value) tuples.");

  auto v = m.def_submodule("vrf", "Toy-group VRF (p=2039, q=1019, g=4)");
  v.attr("P") = vrf::kToyGroup.p;
  v.attr("Q") = vrf::kToyGroup.q;
  v.attr("G") = vrf::kToyGroup.g;
  v.def(
      "prove",
      [](uint64_t x, const py::bytes& alpha) {
        if (x >= vrf::kToyGroup.q) throw py::value_error("secret key must be below q");
        const vrf::ProveOutput out = vrf::vrf_prove(x, from_py(alpha));
        return py::make_tuple(to_py(out.beta), py::make_tuple(out.proof.gamma, out.proof.c, out.proof.s));
      },
      py::arg("x"), py::arg("alpha"), "Returns (beta, (gamma, c, s)).");
  v.def(
      "verify",
      [](uint64_t y, const py::bytes& alpha, std::tuple<uint64_t, uint64_t, uint64_t> proof) -> py::object {
        auto beta = vrf::vrf_verify(y, from_py(alpha),
                                    vrf::Proof{std::get<0>(proof), std::get<1>(proof), std::get<2>(proof)});
        if (!beta) return py::none();
        return to_py(*beta);
      },
      py::arg("y"), py::arg("alpha"), py::arg("proof"));
  v.def("public_key", [](uint64_t x) { return vrf::Keypair::from_secret(x).y; }, py::arg("x"));
  v.def("degenerate_beta", [] { return to_py(vrf::degenerate_beta()); });
  v.def(
      "key_accepted",
      [](uint64_t x, const std::string& policy) {
        return vrf::validate_key(vrf::Keypair::from_secret(x), vrf::key_policy_from_string(policy)) ==
               vrf::KeyCheck::Ok;
      },
      py::arg("x"), py::arg("policy") = "Strict");

  m.def("list_scenarios", [] {
    py::list out;
    for (const CatalogEntry& e : list_scenarios()) {
      out.append(py::make_tuple(e.name, e.reference, std::string(to_string(e.expectation))));
    }
    return out;
  });
  m.def(
      "run_scenario",
      [](const std::string& name, uint64_t seed, const std::vector<std::string>& overrides, bool hardened) {
        ScenarioSpec spec = resolve_scenario(name);
        if (hardened) spec = harden(spec);
        py::gil_scoped_release release;
        return serialize_report(run_scenario(spec, seed, overrides));
      },
      py::arg("name"), py::arg("seed") = 7, py::arg("overrides") = std::vector<std::string>{},
      py::arg("hardened") = false, "Runs a scenario and returns the JSON report text.");
  m.def(
      "scenario_spec", [](const std::string& name) { return to_json(find_scenario(name)).dump(2); },
      py::arg("name"), "JSON spec of a built-in scenario.");
}
