// Copyright 2026 The eprb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eprb/attack.hpp"

#include <cmath>
#include <sstream>

namespace eprb {

namespace {

// Amplitudes reshaped into a matrix with the cut labels as the row index
// (in the order given) and the remaining labels as the column index.
CMat reshape_by_cut(const StateVector& s, const std::vector<std::string>& cut) {
    const auto rows = s.layout.offsets(cut);
    const auto cols = s.layout.offsets(s.layout.complement(cut));
    CMat m(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols.size(); ++j) {
            m(i, j) = s.amplitudes[rows[i] + cols[j]];
        }
    }
    return m;
}

Complex overlap_with(const StateVector& a, const StateVector& b) {
    return (a.amplitudes.adjoint() * b.amplitudes)(0, 0);
}

}  // namespace

HidingDiagnostics hiding_report(const CommitmentProtocol& p,
                                const Tolerances& tol) {
    const auto [com0, com1] = commitment_states(p, tol);
    const DensityMatrix rho0 = partial_trace(com0, {"B", "C"}, tol);
    const DensityMatrix rho1 = partial_trace(com1, {"B", "C"}, tol);

    HidingDiagnostics out;
    out.fidelity = fidelity_closed(rho0, rho1, tol);
    out.delta = 1.0 - out.fidelity;
    out.trace_distance = trace_distance(rho0, rho1, tol);
    out.bob_guess_probability = 0.5 + 0.5 * out.trace_distance;
    out.channel = channel_idleness(p, tol);
    return out;
}

CMat ideal_cheat_unitary(const StateVector& s0, const StateVector& s1,
                         const std::vector<std::string>& cut,
                         const Tolerances& tol) {
    if (!(s0.layout == s1.layout)) {
        throw DimensionMismatch("ideal_cheat_unitary: layouts differ");
    }
    const auto rest = s0.layout.complement(cut);
    if (rest.empty() || cut.empty()) {
        throw InputError("ideal_cheat_unitary: cut must be a proper "
                         "bipartition");
    }

    const DensityMatrix m0 = partial_trace(s0, rest, tol);
    const DensityMatrix m1 = partial_trace(s1, rest, tol);
    const double marginal_gap = (m0.matrix - m1.matrix).norm();
    if (marginal_gap > tol.equivalence) {
        std::ostringstream os;
        os << "ideal_cheat_unitary: remote marginals differ by "
           << marginal_gap << "; the exact rotation only exists in the "
           << "ideal-hiding case (use optimal_cheat instead)";
        throw NotIdealHiding(os.str());
    }

    const CMat a0 = reshape_by_cut(s0, cut);
    const CMat a1 = reshape_by_cut(s1, cut);
    return polar(a1 * a0.adjoint(), /*complete_unitary=*/true, tol).w;
}

namespace {

AttackReport run_attack(const CommitmentProtocol& p, const Tolerances& tol) {
    AttackReport report;
    report.hiding = hiding_report(p, tol);
    report.cheat_labels = {"A", "C"};

    const auto [com0, com1] = commitment_states(p, tol);

    // Everything outside Bob's machine is rotated at once; the polar
    // construction aligns the commit-to-0 state with the best purification
    // of its own Bob marginal relative to the honest commit-to-1 state.
    const CMat a0 = reshape_by_cut(com0, report.cheat_labels);
    const CMat a1 = reshape_by_cut(com1, report.cheat_labels);
    report.cheat_unitary =
        polar(a1 * a0.adjoint(), /*complete_unitary=*/true, tol).w;

    StateVector cheated =
        apply_on(com0, report.cheat_labels, report.cheat_unitary, tol);
    report.achieved_overlap =
        std::clamp(std::abs(overlap_with(com1, cheated)), 0.0, 1.0);

    // Continue through the opening honestly, claiming the flipped bit.
    StateVector state = cheated;
    for (const Round& r : p.open_rounds) {
        state = apply_on(state, {machine_label(r.actor), "C"}, r.unitary, tol);
    }
    report.bob_acceptance = verify_opening(p, state, 1, tol);
    return report;
}

}  // namespace

AttackReport optimal_cheat(const CommitmentProtocol& p, const Tolerances& tol) {
    return run_attack(p, tol);
}

AttackReport simulate_attack(const CommitmentProtocol& p,
                             const Tolerances& tol) {
    return run_attack(p, tol);
}

}  // namespace eprb
