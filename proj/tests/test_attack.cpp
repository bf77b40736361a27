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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eprb/attack.hpp"
#include "eprb/sampling.hpp"

using namespace eprb;

namespace {

CommitmentProtocol get_commitment(const std::string& name,
                                  std::map<std::string, double> params = {}) {
    return std::get<CommitmentProtocol>(builtin(name, params));
}

StateVector make_state(std::vector<Subsystem> parts, CVec amps) {
    return StateVector(SubsystemLayout(std::move(parts)), std::move(amps));
}

}  // namespace

TEST_CASE("hiding report for the three builtin commitments") {
    const HidingDiagnostics bb84 =
        hiding_report(get_commitment("bb84-commit"));
    CHECK(bb84.fidelity >= 1.0 - 1e-9);
    CHECK(bb84.bob_guess_probability == doctest::Approx(0.5));

    const HidingDiagnostics direct =
        hiding_report(get_commitment("direct-send"));
    CHECK(direct.fidelity <= 1e-9);
    CHECK(direct.bob_guess_probability == doctest::Approx(1.0));

    const HidingDiagnostics theta = hiding_report(
        get_commitment("theta-commit", {{"theta", M_PI / 4}}));
    CHECK(theta.fidelity ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("ideal cheat unitary for a product difference") {
    std::mt19937_64 rng(3);
    const CVec phi = random_state_amplitudes(3, rng);
    CVec a0 = CVec::Zero(2), a1 = CVec::Zero(2);
    a0[0] = 1.0;
    a1[1] = 1.0;

    CVec s0_amps(6), s1_amps(6);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 3; ++b) {
            s0_amps[a * 3 + b] = a0[a] * phi[b];
            s1_amps[a * 3 + b] = a1[a] * phi[b];
        }
    }
    const StateVector s0 = make_state({{"A", 2}, {"B", 3}}, s0_amps);
    const StateVector s1 = make_state({{"A", 2}, {"B", 3}}, s1_amps);

    const CMat u = ideal_cheat_unitary(s0, s1, {"A"});
    const StateVector rotated = apply_on(s0, {"A"}, u);
    const Complex ip = (s1.amplitudes.adjoint() * rotated.amplitudes)(0, 0);
    CHECK(std::abs(ip) >= 1.0 - 1e-8);
}

TEST_CASE("ideal cheat unitary flips the bb84 commitment exactly") {
    const CommitmentProtocol p = get_commitment("bb84-commit", {{"n", 1}});
    const auto [c0, c1] = commitment_states(p);
    const CMat u = ideal_cheat_unitary(c0, c1, {"A"});
    const StateVector rotated = apply_on(c0, {"A"}, u);
    const Complex ip = (c1.amplitudes.adjoint() * rotated.amplitudes)(0, 0);
    CHECK(std::abs(ip) >= 1.0 - 1e-9);
}

TEST_CASE("ideal cheat unitary survives degenerate schmidt spectra") {
    // Two locally rotated maximally entangled states: every Schmidt
    // coefficient is 1/2, so naive basis pairing is ambiguous.
    std::mt19937_64 rng(5);
    CVec bell = CVec::Zero(16);
    for (int k = 0; k < 4; ++k) bell[k * 4 + k] = 0.5;
    const StateVector s0 = make_state({{"A", 4}, {"B", 4}}, bell);
    const CMat v = random_unitary(4, rng);
    const StateVector s1 = apply_on(s0, {"A"}, v);

    const CMat u = ideal_cheat_unitary(s0, s1, {"A"});
    const StateVector rotated = apply_on(s0, {"A"}, u);
    const Complex ip = (s1.amplitudes.adjoint() * rotated.amplitudes)(0, 0);
    CHECK(std::abs(ip) >= 1.0 - 1e-9);
}

TEST_CASE("ideal cheat unitary refuses unequal marginals") {
    const CommitmentProtocol p = get_commitment("direct-send");
    const auto [c0, c1] = commitment_states(p);
    CHECK_THROWS_AS(ideal_cheat_unitary(c0, c1, {"A"}), NotIdealHiding);
}

TEST_CASE("optimal cheat on the ideal and binding extremes") {
    const AttackReport ideal =
        simulate_attack(get_commitment("bb84-commit", {{"n", 1}}));
    CHECK(ideal.achieved_overlap >= 1.0 - 1e-9);
    CHECK(ideal.bob_acceptance >= 1.0 - 1e-9);

    const AttackReport binding =
        simulate_attack(get_commitment("direct-send"));
    CHECK(binding.achieved_overlap <= 1e-9);
    CHECK(binding.bob_acceptance <= 1e-9);
}

TEST_CASE("theta sweep reproduces the cosine tradeoff") {
    for (const double theta : {M_PI / 8, M_PI / 4, 3 * M_PI / 8}) {
        const AttackReport r = simulate_attack(
            get_commitment("theta-commit", {{"theta", theta}}));
        CHECK(std::abs(r.achieved_overlap - std::cos(theta)) <= 1e-6);
        CHECK(std::abs(r.bob_acceptance -
                       std::cos(theta) * std::cos(theta)) <= 1e-6);
        CHECK(std::abs(r.achieved_overlap - r.hiding.fidelity) <= 1e-6);
        // Pure-state family: overlap^2 + trace_distance^2 = 1.
        CHECK(std::abs(r.achieved_overlap * r.achieved_overlap +
                       r.hiding.trace_distance * r.hiding.trace_distance -
                       1.0) <= 1e-6);
    }
}

TEST_CASE("the cheat never touches bob's marginal") {
    for (const auto& [name, params] :
         std::vector<std::pair<std::string, std::map<std::string, double>>>{
             {"bb84-commit", {{"n", 1}}},
             {"theta-commit", {{"theta", 0.9}}},
             {"direct-send", {}}}) {
        const CommitmentProtocol p = get_commitment(name, params);
        const AttackReport r = optimal_cheat(p);
        const auto [c0, c1] = commitment_states(p);
        const StateVector cheated =
            apply_on(c0, r.cheat_labels, r.cheat_unitary);
        const DensityMatrix before = partial_trace(c0, {"B"});
        const DensityMatrix after = partial_trace(cheated, {"B"});
        CHECK((before.matrix - after.matrix).norm() <= 1e-9);
    }
}

TEST_CASE("no random unitary beats the constructed cheat") {
    std::mt19937_64 rng(7);
    const CommitmentProtocol p =
        get_commitment("theta-commit", {{"theta", 0.6}});
    const AttackReport r = optimal_cheat(p);
    const auto [c0, c1] = commitment_states(p);
    const std::size_t dim =
        p.layout.dim_of("A") * p.layout.dim_of("C");
    for (int i = 0; i < 1000; ++i) {
        const StateVector rotated =
            apply_on(c0, {"A", "C"}, random_unitary(dim, rng));
        const double overlap = std::abs(
            (c1.amplitudes.adjoint() * rotated.amplitudes)(0, 0));
        REQUIRE(overlap <= r.achieved_overlap + 1e-9);
    }
}

TEST_CASE("perfect hiding implies perfect cheating") {
    for (std::size_t n = 1; n <= 2; ++n) {
        const CommitmentProtocol p =
            get_commitment("bb84-commit", {{"n", double(n)}});
        const AttackReport r = simulate_attack(p);
        if (r.hiding.fidelity >= 1.0 - 1e-9) {
            CHECK(r.bob_acceptance >= 1.0 - 1e-8);
        }
    }
}

TEST_CASE("acceptance equals overlap squared under default verification") {
    for (const double theta : {0.2, 0.9, 1.4}) {
        const AttackReport r = simulate_attack(
            get_commitment("theta-commit", {{"theta", theta}}));
        CHECK(std::abs(r.bob_acceptance -
                       r.achieved_overlap * r.achieved_overlap) <= 1e-6);
    }
}

TEST_CASE("all builtins hold up under the strict tolerance profile") {
    const Tolerances strict = Tolerances::strict_profile();
    for (const auto& [name, params] :
         std::vector<std::pair<std::string, std::map<std::string, double>>>{
             {"bb84-commit", {{"n", 2}}},
             {"direct-send", {}},
             {"theta-commit", {{"theta", 1.1}}}}) {
        const CommitmentProtocol p = get_commitment(name, params);
        CHECK_NOTHROW(p.validate(strict));
        const AttackReport r = simulate_attack(p, strict);
        CHECK(std::abs(r.achieved_overlap - r.hiding.fidelity) <= 1e-6);
    }
}

TEST_CASE("cheat unitary is reproducible run to run") {
    const CommitmentProtocol p = get_commitment("bb84-commit", {{"n", 1}});
    const AttackReport a = optimal_cheat(p);
    const AttackReport b = optimal_cheat(p);
    CHECK(a.cheat_unitary == b.cheat_unitary);
}
