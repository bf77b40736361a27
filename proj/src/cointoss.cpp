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

#include "eprb/cointoss.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace eprb {

std::string to_string(Outcome o) {
    switch (o) {
        case Outcome::Zero: return "0";
        case Outcome::One: return "1";
        case Outcome::Invalid: return "invalid";
    }
    return "?";
}

std::string to_string(InductionVerdict v) {
    switch (v) {
        case InductionVerdict::LemmaContradiction:
            return "TruncatedToZero+LemmaContradiction";
        case InductionVerdict::NotIdealAtRound: return "NotIdealAtRound";
        case InductionVerdict::StructuralFailure: return "StructuralFailure";
    }
    return "?";
}

namespace {

constexpr double kOmitThreshold = 1e-12;
constexpr std::size_t kMaxStoredStateDim = 256;

const OutcomeMeasurement& measurement_of(const CoinTossProtocol& p, Actor a) {
    return a == Actor::Alice ? p.outcome_a : p.outcome_b;
}

Actor other(Actor a) { return a == Actor::Alice ? Actor::Bob : Actor::Alice; }

struct ConditioningData {
    Actor sender = Actor::Alice;
    Actor receiver = Actor::Bob;
    std::array<CMat, 3> pulled;  // on (sender machine, C)
    std::array<double, 3> probabilities = {0, 0, 0};
    std::map<Outcome, DensityMatrix> states;
    std::vector<std::tuple<Outcome, Outcome, double>> fidelities;
    double max_fidelity = 0.0;
    bool last_message_rule = false;
};

/// Shared engine behind conditioned_bob_states, truncate_last_round and
/// the induction. With last_message_rule the conditioning happens after
/// the final unitary and the in-flight channel counts toward the receiver;
/// otherwise the state is conditioned before transmission and only the
/// receiver's machine counts.
ConditioningData condition_last_round(const CoinTossProtocol& p,
                                      bool last_message_rule,
                                      const Tolerances& tol) {
    if (p.rounds.empty()) {
        throw LastRoundActorMismatch("conditioning requires at least one "
                                     "round");
    }
    const std::size_t n = p.rounds.size();

    ConditioningData out;
    out.sender = p.rounds[n - 1].actor;
    out.receiver = other(out.sender);
    out.last_message_rule = last_message_rule;

    const OutcomeMeasurement& m = measurement_of(p, out.sender);
    const std::string machine = machine_label(out.sender);
    for (const auto& l : m.labels) {
        if (l != machine && l != "C") {
            throw NonLocalOperation(
                "conditioning: the sender's outcome measurement involves "
                "subsystems outside their hands ('" + l + "')");
        }
    }

    // The sender's projectors, expressed on (machine, C) and pulled back
    // through the final round. The round unitary acts entirely on the
    // sender's pre-transmission holdings, so the pull-back is local.
    SubsystemLayout ac({{machine, p.layout.dim_of(machine)},
                        {"C", p.layout.dim_of("C")}},
                       p.layout.dim_of(machine) * p.layout.dim_of("C"));
    const CMat& u = p.rounds[n - 1].unitary;
    for (std::size_t x = 0; x < 3; ++x) {
        const CMat embedded = embedded_operator(ac, m.labels, m.projectors[x]);
        out.pulled[x] = u.adjoint() * embedded * u;
    }

    const StateVector before = run_cointoss(p, n - 1, tol);
    StateVector after;
    if (last_message_rule) {
        after = apply_on(before, {machine, "C"}, u, tol);
    }

    std::vector<std::string> keep = {machine_label(out.receiver)};
    if (last_message_rule) keep.push_back("C");
    // Keep labels in layout order.
    std::sort(keep.begin(), keep.end(), [&](const auto& a, const auto& b) {
        return p.layout.position(a) < p.layout.position(b);
    });

    for (std::size_t x = 0; x < 3; ++x) {
        CVec conditioned;
        if (last_message_rule) {
            const CMat embedded =
                embedded_operator(ac, m.labels, m.projectors[x]);
            conditioned = apply_operator_amps(p.layout, after.amplitudes,
                                              {machine, "C"}, embedded);
        } else {
            conditioned = apply_operator_amps(p.layout, before.amplitudes,
                                              {machine, "C"}, out.pulled[x]);
        }
        const double prob = conditioned.squaredNorm();
        out.probabilities[x] = prob;
        if (prob <= kOmitThreshold) continue;

        StateVector normalized;
        normalized.layout = p.layout;
        normalized.amplitudes = conditioned / std::sqrt(prob);
        out.states.emplace(static_cast<Outcome>(x),
                           partial_trace(normalized, keep, tol));
    }

    for (auto it0 = out.states.begin(); it0 != out.states.end(); ++it0) {
        for (auto it1 = std::next(it0); it1 != out.states.end(); ++it1) {
            const double f =
                fidelity_closed(it0->second, it1->second, tol);
            out.fidelities.emplace_back(it0->first, it1->first, f);
            out.max_fidelity = std::max(out.max_fidelity, f);
        }
    }
    return out;
}

CoinTossProtocol apply_truncation(const CoinTossProtocol& p,
                                  const ConditioningData& cond,
                                  const Tolerances& tol) {
    if (cond.max_fidelity > tol.truncation) {
        throw TruncationUnsound(cond.max_fidelity);
    }

    CoinTossProtocol out = p;
    out.rounds.pop_back();
    if (p.name.find("-truncated") == std::string::npos) {
        out.name = p.name + "-truncated";
    }

    // The conditioning party keeps measuring the same thing, re-expressed
    // before their (now removed) final unitary; the domain grows to
    // machine (x) channel.
    OutcomeMeasurement sender_m;
    sender_m.party = cond.sender;
    sender_m.labels = {machine_label(cond.sender), "C"};
    sender_m.projectors = cond.pulled;

    // The receiver identifies the outcome from the supports of their
    // conditioned marginals; the kernel goes to `invalid`.
    std::vector<std::string> recv_labels = {machine_label(cond.receiver)};
    if (cond.last_message_rule) recv_labels.push_back("C");
    std::sort(recv_labels.begin(), recv_labels.end(),
              [&](const auto& a, const auto& b) {
                  return p.layout.position(a) < p.layout.position(b);
              });
    std::size_t recv_dim = 1;
    for (const auto& l : recv_labels) recv_dim *= p.layout.dim_of(l);

    std::vector<CMat> present_ops;
    std::vector<Outcome> present_outcomes;
    for (const auto& [outcome, dm] : cond.states) {
        present_ops.push_back(dm.matrix);
        present_outcomes.push_back(outcome);
    }
    std::vector<CMat> supports;
    try {
        supports =
            orthogonal_support_projectors(present_ops, tol.support_cutoff, tol);
    } catch (const InputError&) {
        throw TruncationUnsound(cond.max_fidelity);
    }

    OutcomeMeasurement recv_m;
    recv_m.party = cond.receiver;
    recv_m.labels = recv_labels;
    for (auto& proj : recv_m.projectors) {
        proj = CMat::Zero(recv_dim, recv_dim);
    }
    for (std::size_t k = 0; k < present_outcomes.size(); ++k) {
        recv_m.projectors[static_cast<int>(present_outcomes[k])] = supports[k];
    }
    recv_m.projectors[2] = CMat::Identity(recv_dim, recv_dim) -
                           recv_m.projectors[0] - recv_m.projectors[1];

    (cond.sender == Actor::Alice ? out.outcome_a : out.outcome_b) = sender_m;
    (cond.receiver == Actor::Alice ? out.outcome_a : out.outcome_b) = recv_m;
    out.validate(tol);

    // Soundness by direct execution: the truncated protocol must reproduce
    // the original outcome distribution. The receiver's side of this check
    // only makes sense while rounds remain; at the terminal step their
    // loss is exactly the Lemma contradiction.
    const StateVector fin = run_cointoss(out, out.rounds.size(), tol);
    for (std::size_t x = 0; x < 3; ++x) {
        const CVec projected = apply_operator_amps(
            p.layout, fin.amplitudes, sender_m.labels, sender_m.projectors[x]);
        if (std::abs(projected.squaredNorm() - cond.probabilities[x]) > 1e-9) {
            throw NumericalFailure(
                "truncation soundness: sender distribution drifted");
        }
    }
    if (!out.rounds.empty()) {
        for (const auto& [outcome, dm] : cond.states) {
            (void)dm;
            const CVec projected = apply_operator_amps(
                p.layout, fin.amplitudes, recv_m.labels,
                recv_m.projectors[static_cast<int>(outcome)]);
            const double want =
                cond.probabilities[static_cast<int>(outcome)];
            if (std::abs(projected.squaredNorm() - want) > 1e-9) {
                throw NumericalFailure(
                    "truncation soundness: receiver distribution drifted");
            }
        }
    }
    return out;
}

InductionRound record_of(const ConditioningData& cond, std::size_t round) {
    InductionRound rec;
    rec.round = round;
    rec.conditioning_actor = cond.sender;
    rec.probabilities = cond.probabilities;
    rec.fidelities = cond.fidelities;
    rec.max_fidelity = cond.max_fidelity;
    rec.last_message_rule = cond.last_message_rule;
    for (const auto& [outcome, dm] : cond.states) {
        if (dm.layout.total_dim() <= kMaxStoredStateDim) {
            rec.states.emplace(outcome, dm);
        }
    }
    return rec;
}

}  // namespace

std::map<Outcome, ConditionedState> conditioned_bob_states(
    const CoinTossProtocol& p, std::size_t round, const Tolerances& tol) {
    if (round != p.rounds.size() || round == 0) {
        std::ostringstream os;
        os << "conditioned_bob_states: round " << round
           << " is not the last round (protocol has " << p.rounds.size()
           << ")";
        throw LastRoundActorMismatch(os.str());
    }
    const ConditioningData cond =
        condition_last_round(p, /*last_message_rule=*/false, tol);

    std::map<Outcome, ConditionedState> out;
    for (const auto& [outcome, dm] : cond.states) {
        out.emplace(outcome,
                    ConditionedState{
                        cond.probabilities[static_cast<int>(outcome)], dm});
    }
    return out;
}

CoinTossProtocol truncate_last_round(const CoinTossProtocol& p,
                                     const Tolerances& tol) {
    if (p.rounds.empty()) {
        throw LastRoundActorMismatch("truncate_last_round: no rounds left");
    }
    const bool last = p.rounds.size() == 1;
    return apply_truncation(p, condition_last_round(p, last, tol), tol);
}

InductionReport backward_induction(const CoinTossProtocol& p,
                                   const Tolerances& tol) {
    InductionReport report;

    for (int x = 0; x < 2; ++x) {
        if (p.prescribed[x] > 0.0) {
            report.required_information -=
                p.prescribed[x] * std::log2(p.prescribed[x]);
        }
    }
    report.initial_mutual_information =
        mutual_information(run_cointoss(p, 0, tol), {"A"}, tol);

    CoinTossProtocol current = p;
    while (!current.rounds.empty()) {
        const std::size_t k = current.rounds.size();
        const bool last = (k == 1);

        ConditioningData cond;
        try {
            cond = condition_last_round(current, last, tol);
        } catch (const NonLocalOperation& e) {
            report.verdict = InductionVerdict::StructuralFailure;
            report.detail = e.what();
            return report;
        }
        report.rounds.push_back(record_of(cond, k));

        // Condition (3): the conditioning statistics are the protocol's
        // outcome statistics; they must match the prescription.
        const bool probs_ok =
            std::abs(cond.probabilities[0] - p.prescribed[0]) <= 1e-9 &&
            std::abs(cond.probabilities[1] - p.prescribed[1]) <= 1e-9 &&
            cond.probabilities[2] <= 1e-9;
        if (!probs_ok) {
            report.verdict = InductionVerdict::NotIdealAtRound;
            report.failed_round = k;
            report.offending_fidelity = cond.max_fidelity;
            report.detail =
                "outcome distribution deviates from the prescription at "
                "round " + std::to_string(k);
            return report;
        }

        if (cond.max_fidelity > tol.truncation) {
            report.verdict = InductionVerdict::NotIdealAtRound;
            report.failed_round = k;
            report.offending_fidelity = cond.max_fidelity;
            std::ostringstream os;
            os << "conditioned receiver states at round " << k
               << " have pairwise fidelity " << cond.max_fidelity
               << "; the sender can still steer the outcome";
            report.detail = os.str();
            return report;
        }

        current = apply_truncation(current, cond, tol);
    }

    report.verdict = InductionVerdict::LemmaContradiction;
    std::ostringstream os;
    os << "all rounds truncated; the residual protocol must hand both "
       << "parties " << report.required_information
       << " bits of shared outcome information, but the product initial "
       << "state carries mutual information "
       << report.initial_mutual_information
       << " — no such protocol exists";
    report.detail = os.str();
    return report;
}

HonestStatistics honest_statistics(const CoinTossProtocol& p,
                                   const Tolerances& tol) {
    for (const auto* m : {&p.outcome_a, &p.outcome_b}) {
        if (m->labels != std::vector<std::string>{machine_label(m->party)}) {
            throw InputError(
                "honest_statistics: outcome measurements must act on the "
                "party machines");
        }
    }

    HonestStatistics out;
    const StateVector fin = run_cointoss(p, p.rounds.size(), tol);

    std::array<std::array<double, 3>, 3> joint{};
    for (std::size_t x = 0; x < 3; ++x) {
        const CVec ax = apply_operator_amps(p.layout, fin.amplitudes, {"A"},
                                            p.outcome_a.projectors[x]);
        out.probabilities_a[x] = ax.squaredNorm();
        for (std::size_t y = 0; y < 3; ++y) {
            const CVec bxy = apply_operator_amps(p.layout, ax, {"B"},
                                                 p.outcome_b.projectors[y]);
            joint[x][y] = bxy.squaredNorm();
        }
    }
    for (std::size_t y = 0; y < 3; ++y) {
        const CVec by = apply_operator_amps(p.layout, fin.amplitudes, {"B"},
                                            p.outcome_b.projectors[y]);
        out.probabilities_b[y] = by.squaredNorm();
    }

    out.disagreement = 0.0;
    for (std::size_t x = 0; x < 3; ++x) {
        for (std::size_t y = 0; y < 3; ++y) {
            if (x != y) out.disagreement += joint[x][y];
        }
    }

    out.agreement_ok = out.disagreement <= 1e-9;
    out.probabilities_ok =
        std::abs(out.probabilities_a[0] - p.prescribed[0]) <= 1e-9 &&
        std::abs(out.probabilities_a[1] - p.prescribed[1]) <= 1e-9 &&
        std::abs(out.probabilities_b[0] - p.prescribed[0]) <= 1e-9 &&
        std::abs(out.probabilities_b[1] - p.prescribed[1]) <= 1e-9;
    out.no_invalid_ok = out.probabilities_a[2] <= 1e-9 &&
                        out.probabilities_b[2] <= 1e-9;
    out.ok = out.agreement_ok && out.probabilities_ok && out.no_invalid_ok;
    return out;
}

IdealCheckReport check_ideal(const CoinTossProtocol& p, const Tolerances& tol) {
    IdealCheckReport out;
    out.statistics = honest_statistics(p, tol);
    out.induction = backward_induction(p, tol);
    out.ideal = out.statistics.ok &&
                out.induction.verdict != InductionVerdict::NotIdealAtRound &&
                out.induction.verdict != InductionVerdict::StructuralFailure;
    return out;
}

std::vector<double> lemma_check(const StateVector& init_a,
                                const StateVector& init_b,
                                const std::vector<LocalOp>& ops_a,
                                const std::vector<LocalOp>& ops_b,
                                const Tolerances& tol) {
    for (const auto& [ops, side] :
         {std::pair{&ops_a, &init_a}, std::pair{&ops_b, &init_b}}) {
        for (const LocalOp& op : *ops) {
            for (const auto& l : op.labels) {
                if (!side->layout.has(l)) {
                    throw NonLocalOperation(
                        "lemma_check: operation touches '" + l +
                        "', which is not on its own side");
                }
            }
        }
    }

    StateVector joint = tensor(init_a, init_b);
    const auto cut = init_a.layout.labels();

    std::vector<double> trace;
    trace.push_back(mutual_information(joint, cut, tol));
    const std::size_t steps = std::max(ops_a.size(), ops_b.size());
    for (std::size_t i = 0; i < steps; ++i) {
        if (i < ops_a.size()) {
            joint = apply_on(joint, ops_a[i].labels, ops_a[i].unitary, tol);
            trace.push_back(mutual_information(joint, cut, tol));
        }
        if (i < ops_b.size()) {
            joint = apply_on(joint, ops_b[i].labels, ops_b[i].unitary, tol);
            trace.push_back(mutual_information(joint, cut, tol));
        }
    }
    return trace;
}

}  // namespace eprb
