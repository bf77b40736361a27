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

#ifndef EPRB_ATTACK_HPP
#define EPRB_ATTACK_HPP

#include "eprb/protocol.hpp"

namespace eprb {

/// Construction and simulation of the sender-side cheating rotation: after
/// an honest commit to 0, a unitary on everything outside Bob's machine
/// turns the joint state into the best available impostor for the honest
/// commitment to 1. In the perfectly hiding case the impostor is exact;
/// in general its overlap with the honest state equals the fidelity of
/// Bob's two commitment marginals.

struct HidingDiagnostics {
    double fidelity = 0.0;        // F of Bob-side commitment marginals
    double delta = 0.0;           // 1 - F
    double trace_distance = 0.0;  // D of the same marginals
    double bob_guess_probability = 0.5;  // 1/2 + D/2
    ChannelIdleness channel;
};

struct AttackReport {
    CMat cheat_unitary;  // on cheat_labels, first label most significant
    std::vector<std::string> cheat_labels;
    /// |<honest commit-to-1 | cheated commit-to-0>|. An amplitude, not a
    /// probability; never conflated with the acceptance below.
    double achieved_overlap = 0.0;
    /// Probability that Bob's verification accepts the flipped opening.
    /// Under the default rank-1 verification this equals overlap squared.
    double bob_acceptance = 0.0;
    HidingDiagnostics hiding;
};

/// Bob-side marginals of the two commitments plus how well Bob could guess
/// the bit right now. Marginals are taken over everything Alice holds
/// (machine only), i.e. Bob's machine and the channel remain.
HidingDiagnostics hiding_report(const CommitmentProtocol& p,
                                const Tolerances& tol = Tolerances{});

/// Unitary on `cut` (Alice's side of the bipartition) mapping s0 onto s1
/// exactly, for states whose complementary marginals agree. Built from the
/// polar decomposition of the cross operator between the two reshaped
/// amplitude matrices, which stays deterministic and optimal even when the
/// shared Schmidt spectrum is degenerate. Throws NotIdealHiding when the
/// complementary marginals differ beyond the equivalence tolerance.
CMat ideal_cheat_unitary(const StateVector& s0, const StateVector& s1,
                         const std::vector<std::string>& cut,
                         const Tolerances& tol = Tolerances{});

/// The optimal cheat against a (possibly non-ideal) commitment: commit to
/// 0 honestly, then rotate A and C so the result is the maximally parallel
/// purification of Bob's commit-to-0 marginal relative to the honest
/// commit-to-1 state. Includes the end-to-end acceptance probability.
AttackReport optimal_cheat(const CommitmentProtocol& p,
                           const Tolerances& tol = Tolerances{});

/// Full end-to-end run: honest commit with b = 0, cheat rotation at the
/// start of the open phase, honest opening claiming b = 1, Bob's
/// verification evaluated on the final state.
AttackReport simulate_attack(const CommitmentProtocol& p,
                             const Tolerances& tol = Tolerances{});

}  // namespace eprb

#endif
