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

#ifndef EPRB_COINTOSS_HPP
#define EPRB_COINTOSS_HPP

#include <array>
#include <map>
#include <optional>
#include <tuple>

#include "eprb/protocol.hpp"

namespace eprb {

/// Ideal-coin-toss analysis: honest-run condition checking, conditioning
/// of the receiver's state on the sender's pre-transmission outcome, last-
/// round truncation, and the backward induction that drives any protocol
/// passing every truncation into the no-communication contradiction.

enum class Outcome { Zero = 0, One = 1, Invalid = 2 };

std::string to_string(Outcome o);

struct ConditionedState {
    double probability = 0.0;
    DensityMatrix state;  // receiver-side marginal given this outcome
};

/// The sender of the last round measures their end-of-protocol outcome
/// before transmitting: their projectors are pulled back through the final
/// unitary (which acts only on subsystems in their hands) and applied to
/// the pre-transmission state. Returns the receiving party's machine
/// marginals conditioned on each outcome; outcomes with probability
/// <= 1e-12 are omitted. `round` is 1-based and must name the last round.
std::map<Outcome, ConditionedState> conditioned_bob_states(
    const CoinTossProtocol& p, std::size_t round,
    const Tolerances& tol = Tolerances{});

/// Rewrites the protocol without its last round: the conditioning party's
/// outcome measurement becomes the pulled-back projectors (now acting on
/// machine and channel), the receiver's becomes the projectors onto the
/// supports of the conditioned marginals with the kernel assigned to
/// `invalid`. Requires all pairwise conditioned fidelities at or below the
/// truncation tolerance (throws TruncationUnsound otherwise) and checks by
/// direct execution that the outcome distribution is preserved.
///
/// Truncating a 1-round protocol asks whether the one remaining message
/// carries the outcome: the conditioned marginals are taken after that
/// message with the in-flight channel counted on the receiver's side, and
/// only the sender's distribution can survive into the (terminal) 0-round
/// residue.
CoinTossProtocol truncate_last_round(const CoinTossProtocol& p,
                                     const Tolerances& tol = Tolerances{});

enum class InductionVerdict {
    /// All rounds proved redundant; the 0-round residue still prescribes a
    /// shared random outcome, contradicting the zero mutual information of
    /// the product initial state.
    LemmaContradiction,
    /// A conditioning step produced receiver states that are not
    /// orthogonal: the sender could still steer the outcome there.
    NotIdealAtRound,
    /// The protocol's structure prevented the analysis (non-local
    /// measurement pull-back, malformed measurements).
    StructuralFailure,
};

std::string to_string(InductionVerdict v);

struct InductionRound {
    std::size_t round = 0;  // 1-based index of the conditioned round
    Actor conditioning_actor = Actor::Alice;
    std::array<double, 3> probabilities = {0, 0, 0};  // 0, 1, invalid
    /// Pairwise fidelities between present conditioned states.
    std::vector<std::tuple<Outcome, Outcome, double>> fidelities;
    double max_fidelity = 0.0;
    /// Conditioned receiver marginals, kept when their dimension is at
    /// most 256.
    std::map<Outcome, DensityMatrix> states;
    /// True for the final (1-round) step, where the in-flight message
    /// counts toward the receiver.
    bool last_message_rule = false;
};

struct InductionReport {
    std::vector<InductionRound> rounds;
    InductionVerdict verdict = InductionVerdict::StructuralFailure;
    std::size_t failed_round = 0;       // for NotIdealAtRound
    double offending_fidelity = 0.0;    // for NotIdealAtRound
    /// Bits of shared outcome information the prescribed distribution
    /// demands at the end (the entropy of the prescribed outcome).
    double required_information = 0.0;
    /// Mutual information across the Alice | Bob+channel cut of the
    /// product initial state (zero: the Lemma's premise).
    double initial_mutual_information = 0.0;
    std::string detail;
};

/// Repeatedly conditions and truncates. Terminates with NotIdealAtRound
/// when a truncation is unsound, or with LemmaContradiction when zero
/// rounds remain while the prescribed outcome still carries information.
InductionReport backward_induction(const CoinTossProtocol& p,
                                   const Tolerances& tol = Tolerances{});

struct HonestStatistics {
    std::array<double, 3> probabilities_a = {0, 0, 0};
    std::array<double, 3> probabilities_b = {0, 0, 0};
    double disagreement = 0.0;  // joint probability the two outcomes differ
    bool agreement_ok = false;
    bool probabilities_ok = false;
    bool no_invalid_ok = false;
    bool ok = false;
};

/// Honest-run statistics alone: both parties' outcome distributions, the
/// joint disagreement probability, and the per-condition flags.
HonestStatistics honest_statistics(const CoinTossProtocol& p,
                                   const Tolerances& tol = Tolerances{});

struct IdealCheckReport {
    HonestStatistics statistics;
    InductionReport induction;
    /// Honest statistics hold and no conditioning step exposed a
    /// steerable round.
    bool ideal = false;
};

/// Honest-run statistics (agreement, prescribed probabilities, absence of
/// `invalid`) plus the full induction verdict.
IdealCheckReport check_ideal(const CoinTossProtocol& p,
                             const Tolerances& tol = Tolerances{});

/// One strictly local operation in a lemma check.
struct LocalOp {
    std::vector<std::string> labels;
    CMat unitary;
};

/// Mutual information across the initA | initB cut after every local
/// operation, alternating Alice's and Bob's lists. All values stay at
/// zero: locality preserves the product form. Throws NonLocalOperation if
/// an op touches labels outside its own side.
std::vector<double> lemma_check(const StateVector& init_a,
                                const StateVector& init_b,
                                const std::vector<LocalOp>& ops_a,
                                const std::vector<LocalOp>& ops_b,
                                const Tolerances& tol = Tolerances{});

}  // namespace eprb

#endif
