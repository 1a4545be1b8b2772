# Copyright 2026 The RealityLab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import pytest

import realitylab as rl


def test_certificates_all_pass():
    certs = rl.verify_certificates()
    assert len(certs) >= 10
    assert all(c["passed"] for c in certs)


def test_born_and_conditional_probabilities():
    setup = rl.build_ideal()
    assert rl.born_probability(setup.E, 1, setup.psi) == pytest.approx(0.5, abs=1e-12)
    assert rl.conditional_probability(setup.E, setup.T, setup.psi) == pytest.approx(
        1.0, abs=1e-12
    )
    assert rl.perfectly_correlated(setup.E, setup.T, setup.psi)
    assert not rl.perfectly_correlated(setup.E, setup.Y, setup.psi)
    assert rl.commutator_norm(setup.E.op, setup.G.op) == pytest.approx(
        math.sqrt(2.0), abs=1e-12
    )


def test_inference_table_is_identity():
    setup = rl.build_ideal()
    assert rl.inference_table(setup) == [(1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, 1), (0, 0, 0, 0)]


def test_ensemble_measure_and_strict_extension():
    setup = rl.build_ideal()
    support = rl.create_support(setup.psi, 500, seed=42)
    rl.measure_all(support, [setup.T, setup.Y])
    rl.apply_strict_extension(support, setup.rule_et)
    rl.apply_strict_extension(support, setup.rule_gy)
    assert len(rl.simultaneous_reality_set(support, setup.E, setup.G)) == 500
    record = support.specimen(0)
    assert record["objective"]["E"]["value"] == record["measured"]["T"]
    assert record["objective"]["E"]["via"] == "T"

    dump_lines = rl.dump_support(support).strip().split("\n")
    assert len(dump_lines) == 500
    parsed = json.loads(dump_lines[0])
    assert set(parsed) == {"id", "measured", "objective"}


def test_epr_strict_versus_wide():
    strict = rl.run_epr_analysis(n=800, seed=7, extension="strict")
    assert strict.report["verdict"] == "simultaneous_PQ_reality: none"
    assert strict.report["simultaneous_set_size"] == 0
    wide = rl.run_epr_analysis(n=800, seed=7, extension="wide")
    assert wide.report["simultaneous_set_size"] == 800
    assert wide.report["table_conformance"] is True


def test_exclusion_rule_raises():
    setup = rl.build_singlet_xz()
    support = rl.create_support(setup.psi, 4, seed=1)
    rl.measure(support, [0], [setup.A])
    with pytest.raises(ValueError):
        rl.measure(support, [0], [setup.B])


def test_histories_contradiction():
    result = rl.contradiction_demo(2000, seed=42)
    report = result.report
    assert report["incompatible_families"] is True
    assert report["intersection_nonempty"] is True
    assert report["exclusivity_violated"] is True
    assert report["witness_fraction"] == pytest.approx(0.125, abs=0.05)


def test_history_family_algebra():
    setup = rl.build_ideal()
    rho = rl.DensityOperator.pure(setup.psi)
    h_e = rl.History([(1, setup.E.op), (2, setup.T.op)])
    h_g = rl.History([(1, setup.G.op), (2, setup.Y.op)])
    fam_e = rl.minimal_family(h_e)
    fam_g = rl.minimal_family(h_g)
    assert fam_e.elementary_count == 4
    assert rl.is_consistent(fam_e, rho)
    assert rl.is_consistent(fam_g, rho)
    assert not rl.are_compatible(fam_e, fam_g, rho)
    assert rl.history_probability(h_e, rho) == pytest.approx(0.5, abs=1e-12)

    identity = rl.CMatrix.identity(24)
    h_t = rl.History([(1, identity), (2, setup.T.op)])
    assert rl.is_refinement(rl.minimal_family(h_t), fam_e)


def test_matrix_roundtrip_and_eigenvalues():
    m = rl.CMatrix([[1.0, 0.0], [0.0, 0.0]])
    assert rl.is_projector(m)
    assert rl.hermitian_eigenvalues(m) == pytest.approx([0.0, 1.0])
    assert m.to_rows() == [[1.0, 0.0], [0.0, 0.0]]
    big = rl.tensor(m, rl.CMatrix.identity(2))
    assert big.rows == 4
