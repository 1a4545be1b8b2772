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

"""Correlation-extension experiments on entangled spin systems.

The compiled core exposes dense state/observable algebra, Born-rule
ensemble sampling with strict and wide correlation-extension passes, the
singlet and spin-5/2 x spin-3/2 experiment builders, and the
consistent-histories layer (chain operators, weak decoherence, family
compatibility).
"""

from ._core import (
    BohmEprSetup,
    CMatrix,
    ContradictionResult,
    CorrelationRule,
    DensityOperator,
    Direction,
    EprResult,
    FamilySupport,
    History,
    HistoryFamily,
    IdealResult,
    IdealSetup,
    Observable,
    Sign,
    Site,
    SpectrumKind,
    StateVector,
    Support,
    apply_strict_extension,
    apply_wide_extension,
    are_compatible,
    are_separated,
    bind_support,
    born_probability,
    build_ideal,
    build_singlet_xz,
    chain_operator,
    commutator_norm,
    conditional_probability,
    contradiction_demo,
    create_support,
    decoherence_functional,
    dump_support,
    epr_intersection,
    family_to_json,
    hermitian_eigenvalues,
    history_probability,
    inference_table,
    is_consistent,
    is_projector,
    is_refinement,
    measure,
    measure_all,
    minimal_family,
    negate,
    perfectly_correlated,
    quantum_implies,
    run_epr_analysis,
    run_ideal_analysis,
    simultaneous_reality_set,
    tensor,
    verify_certificates,
)

__all__ = [
    "BohmEprSetup",
    "CMatrix",
    "ContradictionResult",
    "CorrelationRule",
    "DensityOperator",
    "Direction",
    "EprResult",
    "FamilySupport",
    "History",
    "HistoryFamily",
    "IdealResult",
    "IdealSetup",
    "Observable",
    "Sign",
    "Site",
    "SpectrumKind",
    "StateVector",
    "Support",
    "apply_strict_extension",
    "apply_wide_extension",
    "are_compatible",
    "are_separated",
    "bind_support",
    "born_probability",
    "build_ideal",
    "build_singlet_xz",
    "chain_operator",
    "commutator_norm",
    "conditional_probability",
    "contradiction_demo",
    "create_support",
    "decoherence_functional",
    "dump_support",
    "epr_intersection",
    "family_to_json",
    "hermitian_eigenvalues",
    "history_probability",
    "inference_table",
    "is_consistent",
    "is_projector",
    "is_refinement",
    "measure",
    "measure_all",
    "minimal_family",
    "negate",
    "perfectly_correlated",
    "quantum_implies",
    "run_epr_analysis",
    "run_ideal_analysis",
    "simultaneous_reality_set",
    "tensor",
    "verify_certificates",
]

__version__ = "0.1.0"
