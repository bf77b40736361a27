# Copyright 2026 The eprb Authors
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

"""Two-party quantum protocol simulator and cryptanalysis toolkit.

The heavy lifting lives in the C++ extension ``eprb._core``: dense complex
linear algebra, labeled multi-subsystem states, the three fidelity routes
with constructive witnesses, commitment protocols with the
commitment-flipping attack, coin-toss backward induction, and the
round-count bound on two-party secure computation.
"""

from ._core import (  # noqa: F401
    DEFAULT_MAX_DIM,
    InputError,
    NumericalFailure,
    __version__,
    backward_induction,
    builtin_document,
    builtin_names,
    check_ideal,
    commitment_marginals,
    compare_fidelities,
    eig_hermitian,
    fidelity_closed,
    fidelity_povm,
    fidelity_purification,
    hiding_report,
    ledger_simulate,
    min_rounds,
    polar,
    psd_sqrt,
    run_honest,
    simulate_attack,
    svd,
    trace_distance,
    validate_document,
)

__all__ = [
    "DEFAULT_MAX_DIM",
    "InputError",
    "NumericalFailure",
    "__version__",
    "backward_induction",
    "builtin_document",
    "builtin_names",
    "check_ideal",
    "commitment_marginals",
    "compare_fidelities",
    "eig_hermitian",
    "fidelity_closed",
    "fidelity_povm",
    "fidelity_purification",
    "hiding_report",
    "ledger_simulate",
    "min_rounds",
    "polar",
    "psd_sqrt",
    "run_honest",
    "simulate_attack",
    "svd",
    "trace_distance",
    "validate_document",
]
