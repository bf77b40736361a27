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

#include "eprb/report.hpp"

#include <algorithm>
#include <cstdint>

namespace eprb {

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return std::string(buf);
}

Json to_json(const Tolerances& tol) {
    return Json{{"validation", tol.validation},
                {"reconstruction", tol.reconstruction},
                {"equivalence", tol.equivalence},
                {"psd_clamp", tol.psd_clamp},
                {"support_cutoff", tol.support_cutoff},
                {"truncation", tol.truncation}};
}

Json to_json(const CMat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rows.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

Json to_json(const ChannelIdleness& c) {
    return Json{{"purity_b0", c.purity0},
                {"purity_b1", c.purity1},
                {"cross_fidelity", c.cross_fidelity},
                {"idle", c.ok}};
}

Json to_json(const HidingDiagnostics& h) {
    return Json{{"fidelity", h.fidelity},
                {"delta", h.delta},
                {"trace_distance", h.trace_distance},
                {"bob_guess_probability", h.bob_guess_probability},
                {"channel", to_json(h.channel)}};
}

Json to_json(const AttackReport& r, bool include_unitary) {
    Json out{{"achieved_overlap", r.achieved_overlap},
             {"achieved_overlap_squared",
              r.achieved_overlap * r.achieved_overlap},
             {"bob_acceptance", r.bob_acceptance},
             {"delta", r.hiding.delta},
             {"cheat_labels", r.cheat_labels},
             {"hiding", to_json(r.hiding)}};
    if (include_unitary) out["cheat_unitary"] = to_json(r.cheat_unitary);
    return out;
}

Json to_json(const InductionReport& r, bool include_states) {
    Json rounds = Json::array();
    for (const InductionRound& rec : r.rounds) {
        Json entry{{"round", rec.round},
                   {"conditioning_actor", to_string(rec.conditioning_actor)},
                   {"probabilities",
                    Json{{"0", rec.probabilities[0]},
                         {"1", rec.probabilities[1]},
                         {"invalid", rec.probabilities[2]}}},
                   {"max_pairwise_fidelity", rec.max_fidelity},
                   {"last_message_rule", rec.last_message_rule}};
        Json fids = Json::array();
        for (const auto& [x, y, f] : rec.fidelities) {
            fids.push_back(Json{{"between",
                                 Json::array({to_string(x), to_string(y)})},
                                {"fidelity", f}});
        }
        entry["pairwise_fidelities"] = fids;
        if (include_states) {
            Json states;
            for (const auto& [outcome, dm] : rec.states) {
                states[to_string(outcome)] = to_json(dm.matrix);
            }
            entry["conditioned_states"] = states;
        }
        rounds.push_back(entry);
    }
    Json out{{"verdict", to_string(r.verdict)},
             {"rounds", rounds},
             {"required_information_bits", r.required_information},
             {"initial_mutual_information_bits",
              r.initial_mutual_information},
             {"detail", r.detail}};
    if (r.verdict == InductionVerdict::NotIdealAtRound) {
        out["failed_round"] = r.failed_round;
        out["offending_fidelity"] = r.offending_fidelity;
    }
    return out;
}

Json to_json(const IdealCheckReport& r, bool include_states) {
    const HonestStatistics& s = r.statistics;
    return Json{
        {"probabilities_alice",
         Json{{"0", s.probabilities_a[0]},
              {"1", s.probabilities_a[1]},
              {"invalid", s.probabilities_a[2]}}},
        {"probabilities_bob",
         Json{{"0", s.probabilities_b[0]},
              {"1", s.probabilities_b[1]},
              {"invalid", s.probabilities_b[2]}}},
        {"disagreement", s.disagreement},
        {"agreement_ok", s.agreement_ok},
        {"probabilities_ok", s.probabilities_ok},
        {"no_invalid_ok", s.no_invalid_ok},
        {"honest_conditions_ok", s.ok},
        {"ideal", r.ideal},
        {"induction", to_json(r.induction, include_states)}};
}

Json to_json(const LedgerTrace& t) {
    Json rounds = Json::array();
    for (std::size_t i = 0; i < t.per_round.size(); ++i) {
        const LedgerEntry& e = t.per_round[i];
        rounds.push_back(Json{{"round", i + 1},
                              {"actor", to_string(e.actor)},
                              {"gain_bits", e.gain},
                              {"info_alice", e.info_a},
                              {"info_bob", e.info_b},
                              {"violation", e.violation}});
    }
    Json out{{"epsilon_bits", t.epsilon},
             {"target_bits", t.target},
             {"valid", t.valid},
             {"reached_target_both", t.reached_target_both},
             {"min_rounds_bound", t.min_rounds_bound},
             {"per_round", rounds}};
    if (t.first_violation) out["first_violation"] = *t.first_violation;
    return out;
}

FidelityComparison compare_fidelities(const DensityMatrix& rho0,
                                      const DensityMatrix& rho1,
                                      const Tolerances& tol) {
    FidelityComparison out;
    out.closed = fidelity_closed(rho0, rho1, tol);
    out.purification_overlap = fidelity_purification(rho0, rho1, tol).overlap;
    out.povm_value = fidelity_povm(rho0, rho1, tol).value;
    out.max_discrepancy = std::max(
        {std::abs(out.closed - out.purification_overlap),
         std::abs(out.closed - out.povm_value),
         std::abs(out.purification_overlap - out.povm_value)});
    out.trace_dist = trace_distance(rho0, rho1, tol);
    return out;
}

Json to_json(const FidelityComparison& f) {
    return Json{{"closed_form", f.closed},
                {"purification_overlap", f.purification_overlap},
                {"povm_value", f.povm_value},
                {"max_discrepancy", f.max_discrepancy},
                {"trace_distance", f.trace_dist}};
}

Json report_envelope(const std::string& command, const std::string& input,
                     const Tolerances& tol, unsigned long long seed,
                     Json results) {
    return Json{{"tool", Json{{"name", "eprb"}, {"version", EPRB_VERSION}}},
                {"command", command},
                {"input_digest", "fnv1a64:" + fnv1a64_hex(input)},
                {"seed", seed},
                {"tolerances", to_json(tol)},
                {"results", std::move(results)}};
}

}  // namespace eprb
