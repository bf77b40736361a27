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

#ifndef EPRB_BOUNDS_HPP
#define EPRB_BOUNDS_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "eprb/errors.hpp"
#include "eprb/protocol.hpp"

namespace eprb {

/// The round-count constraint on two-party secure computation: with a
/// per-round information-imbalance tolerance of epsilon bits and `target`
/// bits to be learned by both parties, any schedule needs at least
/// ceil(target / epsilon) rounds. Information is tracked as abstract bits
/// supplied by the schedule, not derived from quantum states: the argument
/// is model-independent.

/// Smallest N with N * epsilon >= target. Throws NonPositiveEpsilon.
std::size_t min_rounds(double epsilon, double target = 1.0);

struct LedgerEntry {
    Actor actor = Actor::Alice;  // who gains information this round
    double gain = 0.0;           // bits
    double info_a = 0.0;         // accumulated after the round
    double info_b = 0.0;
    bool violation = false;      // |info_a - info_b| > epsilon here
};

struct LedgerTrace {
    std::vector<LedgerEntry> per_round;
    double epsilon = 0.0;
    double target = 1.0;
    bool valid = true;  // no violation anywhere
    std::optional<std::size_t> first_violation;  // 1-based round index
    bool reached_target_both = false;
    /// A violation-free schedule that reaches (target, target) can never
    /// be shorter than min_rounds; recorded for the report.
    std::size_t min_rounds_bound = 0;
};

/// Accumulates per-party information over a schedule of (actor, bits)
/// gains, flagging the first round where the parties' totals separate by
/// more than epsilon. Gains must be non-negative; totals cap at `target`.
LedgerTrace ledger_simulate(
    const std::vector<std::pair<Actor, double>>& gains, double epsilon,
    double target = 1.0);

}  // namespace eprb

#endif
