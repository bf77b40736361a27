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

#include "eprb/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace eprb {

namespace {

// Comparisons between accumulated gains need a little slack: ten steps of
// 0.1 do not sum to exactly 1.0 in binary.
constexpr double kSlack = 1e-9;

}  // namespace

std::size_t min_rounds(double epsilon, double target) {
    if (!(epsilon > 0.0)) {
        throw NonPositiveEpsilon("min_rounds: epsilon must be positive");
    }
    if (!(target > 0.0)) {
        throw InputError("min_rounds: target must be positive");
    }
    auto n = static_cast<std::size_t>(std::ceil(target / epsilon - kSlack));
    if (n == 0) n = 1;
    while (double(n) * epsilon < target - kSlack) ++n;
    while (n > 1 && double(n - 1) * epsilon >= target - kSlack) --n;
    return n;
}

LedgerTrace ledger_simulate(
    const std::vector<std::pair<Actor, double>>& gains, double epsilon,
    double target) {
    if (!(epsilon > 0.0)) {
        throw NonPositiveEpsilon("ledger_simulate: epsilon must be positive");
    }

    LedgerTrace trace;
    trace.epsilon = epsilon;
    trace.target = target;
    trace.min_rounds_bound = min_rounds(epsilon, target);

    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        const auto& [actor, gain] = gains[i];
        if (gain < 0.0) {
            throw InputError("ledger_simulate: gains must be non-negative");
        }
        if (actor == Actor::Alice) {
            a = std::min(target, a + gain);
        } else {
            b = std::min(target, b + gain);
        }
        LedgerEntry entry;
        entry.actor = actor;
        entry.gain = gain;
        entry.info_a = a;
        entry.info_b = b;
        entry.violation = std::abs(a - b) > epsilon + kSlack;
        if (entry.violation && !trace.first_violation) {
            trace.first_violation = i + 1;
            trace.valid = false;
        }
        trace.per_round.push_back(entry);
    }
    trace.reached_target_both =
        a >= target - kSlack && b >= target - kSlack;
    // The walk argument: a violation-free schedule that brings both
    // parties to the target can never be shorter than the bound.
    if (trace.valid && trace.reached_target_both &&
        trace.per_round.size() < trace.min_rounds_bound) {
        throw NumericalFailure(
            "ledger_simulate: schedule contradicts the round bound");
    }
    return trace;
}

}  // namespace eprb
