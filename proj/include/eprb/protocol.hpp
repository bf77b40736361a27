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

#ifndef EPRB_PROTOCOL_HPP
#define EPRB_PROTOCOL_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eprb/fidelity.hpp"
#include "eprb/hilbert.hpp"

namespace eprb {

/// Two-party protocols over the three registers A (Alice's machine),
/// B (Bob's machine) and C (the channel). A machine register may be
/// internally composite (message qubits, dice purifying the party's
/// randomness, receive slots); the protocol layout only sees its total
/// dimension. Honest parties never measure mid-protocol: every round is a
/// unitary on the acting party's machine tensored with the channel, and all
/// randomness enters through dice factors of the initial states.

enum class Actor { Alice, Bob };

std::string to_string(Actor a);
Actor actor_from_string(const std::string& s);

/// The acting party's machine label ("A" or "B").
std::string machine_label(Actor a);

struct Round {
    Actor actor = Actor::Alice;
    CMat unitary;  // on H_machine (x) H_C, machine index most significant
};

/// Outcome measurement of one party in a coin-toss protocol: three
/// orthogonal projectors (outcomes 0, 1, invalid) completing to the
/// identity on `labels`. Freshly loaded protocols measure the party's
/// machine alone; backward-induction rewrites may extend the domain to
/// machine (x) channel.
struct OutcomeMeasurement {
    Actor party = Actor::Alice;
    std::vector<std::string> labels;
    std::array<CMat, 3> projectors;
};

class CommitmentProtocol {
  public:
    SubsystemLayout layout;        // labels A, B, C in this order
    CVec alice0, alice1;           // orthogonal encodings on H_A
    CVec bob_init;                 // on H_B (x) H_C
    std::vector<Round> commit_rounds;
    std::vector<Round> open_rounds;
    /// Optional override of Bob's per-bit acceptance projector on the final
    /// joint state. When absent, verification uses the rank-1 projector
    /// onto the honest final state for the claimed bit, which is the most
    /// detection-favorable choice and keeps attack-success numbers
    /// conservative.
    std::optional<std::array<CMat, 2>> verification;

    std::string name = "commitment";
    std::map<std::string, double> params;

    /// Validates every invariant (dimensions, normalization, orthogonality
    /// of the encodings, unitarity, actor alternation within each phase).
    void validate(const Tolerances& tol = Tolerances{}) const;

    std::size_t dim(const std::string& label) const {
        return layout.dim_of(label);
    }
};

class CoinTossProtocol {
  public:
    SubsystemLayout layout;  // labels A, B, C in this order
    CVec init_a;             // on H_A
    CVec init_bc;            // on H_B (x) H_C
    std::vector<Round> rounds;
    OutcomeMeasurement outcome_a;
    OutcomeMeasurement outcome_b;
    /// Honest outcome distribution prescribed by the protocol; the ideal
    /// coin is the fair one.
    std::array<double, 2> prescribed = {0.5, 0.5};

    std::string name = "cointoss";
    std::map<std::string, double> params;

    void validate(const Tolerances& tol = Tolerances{}) const;
};

using Protocol = std::variant<CommitmentProtocol, CoinTossProtocol>;

struct ExecutionTrace {
    StateVector initial;
    StateVector after_commit;  // end of the commit phase
    StateVector after_open;    // end of the open phase
    std::vector<StateVector> snapshots;  // per round, when requested
};

/// Whether the channel returns to a fixed product state once the
/// commitment is made. A commitment phase that parks state in a channel
/// that then sits idle is physically suspect, so violations are surfaced
/// as warnings rather than errors.
struct ChannelIdleness {
    double purity0 = 1.0;  // largest eigenvalue of the channel marginal, b=0
    double purity1 = 1.0;
    double cross_fidelity = 1.0;  // F(channel marginal b=0, b=1)
    bool ok = true;
};

/// Parses and fully validates a protocol document (see serialize_protocol
/// for the format). Validation failures carry the offending field path.
Protocol load_protocol(const std::string& document,
                       std::size_t max_dim = SubsystemLayout::kDefaultMaxDim,
                       const Tolerances& tol = Tolerances{});

/// Serializes a protocol to its document form: a JSON object with
/// format_version 1, the subsystem list, named states and per-round
/// matrices as row-major arrays of [re, im] pairs. Numbers are emitted in
/// scientific notation with 17 significant digits, so loading a serialized
/// document reproduces every amplitude bit-exactly.
std::string serialize_protocol(const Protocol& protocol);

/// Runs the honest protocol for committed bit b: starts from
/// alice_b (x) bob_init, applies commit rounds then open rounds.
ExecutionTrace run_honest(const CommitmentProtocol& p, int b,
                          bool snapshots = false,
                          const Tolerances& tol = Tolerances{});

/// Runs the honest coin-toss rounds from init_a (x) init_bc.
StateVector run_cointoss(const CoinTossProtocol& p,
                         std::size_t upto_round,  // apply rounds [0, upto)
                         const Tolerances& tol = Tolerances{});

/// The two end-of-commit joint states for b = 0, 1.
std::pair<StateVector, StateVector> commitment_states(
    const CommitmentProtocol& p, const Tolerances& tol = Tolerances{});

/// Probability that Bob's verification accepts `final_state` as an honest
/// opening of `claimed`.
double verify_opening(const CommitmentProtocol& p,
                      const StateVector& final_state, int claimed,
                      const Tolerances& tol = Tolerances{});

ChannelIdleness channel_idleness(const CommitmentProtocol& p,
                                 const Tolerances& tol = Tolerances{});

/// Builtin protocol generators.
///   bb84-commit(n)    basis-encoded commitment with dice purification;
///                     perfectly hiding, hence (per the attack module)
///                     perfectly breakable.
///   direct-send       Alice transmits |b> directly; binding, not hiding.
///   theta-commit(theta)
///                     Bob's two conditional states overlap cos(theta);
///                     interpolates hiding-ideal (0) to direct-send (pi/2).
///   coin-from-commit  coin toss built on a commitment: Alice commits a
///                     random bit, Bob announces a random guess, Alice
///                     opens; outcome = bit XOR guess.
///   orthogonal-toy(rounds)
///                     coin toss whose every message merely relays Alice's
///                     dice; each round is redundant in the backward-
///                     induction sense.
Protocol builtin(const std::string& name,
                 const std::map<std::string, double>& params = {},
                 std::size_t max_dim = SubsystemLayout::kDefaultMaxDim);

std::vector<std::string> builtin_names();

}  // namespace eprb

#endif
