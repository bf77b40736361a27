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

#include "eprb/fidelity.hpp"
#include "eprb/protocol.hpp"
#include "eprb/sampling.hpp"

using namespace eprb;

namespace {

CommitmentProtocol get_commitment(const std::string& name,
                                  std::map<std::string, double> params = {}) {
    return std::get<CommitmentProtocol>(builtin(name, params));
}

bool states_equal_bitexact(const CVec& a, const CVec& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real() || a[i].imag() != b[i].imag()) {
            return false;
        }
    }
    return true;
}

bool matrices_equal_bitexact(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            if (a(r, c).real() != b(r, c).real() ||
                a(r, c).imag() != b(r, c).imag()) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("builtins validate and serialize-load round trips bit-exactly") {
    for (const std::string name :
         {"bb84-commit", "direct-send", "theta-commit"}) {
        std::map<std::string, double> params;
        if (name == "theta-commit") params["theta"] = 0.7;
        const Protocol original = builtin(name, params);
        const std::string doc = serialize_protocol(original);
        const Protocol loaded = load_protocol(doc);

        const auto& a = std::get<CommitmentProtocol>(original);
        const auto& b = std::get<CommitmentProtocol>(loaded);
        REQUIRE(states_equal_bitexact(a.alice0, b.alice0));
        REQUIRE(states_equal_bitexact(a.alice1, b.alice1));
        REQUIRE(states_equal_bitexact(a.bob_init, b.bob_init));
        REQUIRE(a.commit_rounds.size() == b.commit_rounds.size());
        for (std::size_t i = 0; i < a.commit_rounds.size(); ++i) {
            REQUIRE(a.commit_rounds[i].actor == b.commit_rounds[i].actor);
            REQUIRE(matrices_equal_bitexact(a.commit_rounds[i].unitary,
                                            b.commit_rounds[i].unitary));
        }
        for (std::size_t i = 0; i < a.open_rounds.size(); ++i) {
            REQUIRE(matrices_equal_bitexact(a.open_rounds[i].unitary,
                                            b.open_rounds[i].unitary));
        }
        // Serializing the reloaded protocol reproduces the document bytes.
        REQUIRE(serialize_protocol(loaded) == doc);
    }
}

TEST_CASE("cointoss builtins round trip through documents") {
    for (const auto& [name, params] :
         std::vector<std::pair<std::string, std::map<std::string, double>>>{
             {"orthogonal-toy", {}},
             {"coin-from-commit", {{"n", 1}}}}) {
        const Protocol original = builtin(name, params);
        const std::string doc = serialize_protocol(original);
        const Protocol loaded = load_protocol(doc);
        const auto& a = std::get<CoinTossProtocol>(original);
        const auto& b = std::get<CoinTossProtocol>(loaded);
        REQUIRE(states_equal_bitexact(a.init_a, b.init_a));
        REQUIRE(states_equal_bitexact(a.init_bc, b.init_bc));
        REQUIRE(a.rounds.size() == b.rounds.size());
        for (std::size_t i = 0; i < a.rounds.size(); ++i) {
            REQUIRE(matrices_equal_bitexact(a.rounds[i].unitary,
                                            b.rounds[i].unitary));
        }
        for (int k = 0; k < 3; ++k) {
            REQUIRE(matrices_equal_bitexact(a.outcome_a.projectors[k],
                                            b.outcome_a.projectors[k]));
            REQUIRE(matrices_equal_bitexact(a.outcome_b.projectors[k],
                                            b.outcome_b.projectors[k]));
        }
        REQUIRE(serialize_protocol(loaded) == doc);
    }
}

TEST_CASE("load rejects a corrupted round matrix with a field path") {
    // The serializer does not validate, so a corrupted protocol value
    // round-trips into a corrupted document.
    CommitmentProtocol p = get_commitment("direct-send");
    p.commit_rounds[1].unitary(0, 0) = 2.0;
    const std::string doc = serialize_protocol(Protocol(p));

    try {
        load_protocol(doc);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.field.find("commit_rounds[1].matrix") != std::string::npos);
        CHECK(e.reason.find("unitary") != std::string::npos);
    }
}

TEST_CASE("load rejects non-orthogonal encodings") {
    CommitmentProtocol p = get_commitment("direct-send");
    p.alice1 = p.alice0;
    const std::string doc = serialize_protocol(Protocol(p));

    try {
        load_protocol(doc);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.reason.find("orthogonal") != std::string::npos);
    }
}

TEST_CASE("load rejects malformed JSON and wrong versions") {
    CHECK_THROWS_AS(load_protocol("{not json"), ParseError);
    CHECK_THROWS_AS(load_protocol("{\"format_version\": 2}"),
                    ValidationError);
}

TEST_CASE("zero-round and identity-round protocols do nothing") {
    CommitmentProtocol p;
    p.layout = SubsystemLayout({{"A", 2}, {"B", 2}, {"C", 2}});
    CVec a0 = CVec::Zero(2), a1 = CVec::Zero(2);
    a0[0] = 1.0;
    a1[1] = 1.0;
    p.alice0 = a0;
    p.alice1 = a1;
    p.bob_init = CVec::Zero(4);
    p.bob_init[0] = 1.0;
    p.validate();

    const ExecutionTrace empty = run_honest(p, 0);
    CHECK((empty.after_commit.amplitudes - empty.initial.amplitudes).norm() ==
          0.0);
    CHECK((empty.after_open.amplitudes - empty.initial.amplitudes).norm() ==
          0.0);

    p.commit_rounds = {{Actor::Alice, CMat::Identity(4, 4)},
                       {Actor::Bob, CMat::Identity(4, 4)}};
    p.validate();
    const ExecutionTrace idle = run_honest(p, 1);
    CHECK((idle.after_open.amplitudes - idle.initial.amplitudes).norm() ==
          0.0);
}

TEST_CASE("round alternation is enforced") {
    CommitmentProtocol p;
    p.layout = SubsystemLayout({{"A", 2}, {"B", 2}, {"C", 2}});
    CVec a0 = CVec::Zero(2), a1 = CVec::Zero(2);
    a0[0] = 1.0;
    a1[1] = 1.0;
    p.alice0 = a0;
    p.alice1 = a1;
    p.bob_init = CVec::Zero(4);
    p.bob_init[0] = 1.0;
    p.commit_rounds = {{Actor::Alice, CMat::Identity(4, 4)},
                       {Actor::Alice, CMat::Identity(4, 4)}};
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("honest bb84 leaves bob maximally mixed per message qubit") {
    for (std::size_t n = 1; n <= 2; ++n) {
        const CommitmentProtocol p =
            get_commitment("bb84-commit", {{"n", double(n)}});
        for (int b = 0; b < 2; ++b) {
            const ExecutionTrace trace = run_honest(p, b);
            const DensityMatrix bob =
                partial_trace(trace.after_commit, {"B"});
            const double dim = std::pow(2.0, double(n));
            CHECK((bob.matrix - CMat::Identity(bob.matrix.rows(),
                                               bob.matrix.cols()) /
                                    dim)
                      .norm() <= 1e-9);
        }
    }
}

TEST_CASE("honest runs stay normalized at every round") {
    const CommitmentProtocol p = get_commitment("bb84-commit", {{"n", 2}});
    for (int b = 0; b < 2; ++b) {
        const ExecutionTrace trace = run_honest(p, b, /*snapshots=*/true);
        CHECK(trace.snapshots.size() ==
              p.commit_rounds.size() + p.open_rounds.size());
        for (const StateVector& s : trace.snapshots) {
            CHECK(std::abs(s.norm() - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("commitment states of direct-send are orthogonal") {
    const CommitmentProtocol p = get_commitment("direct-send");
    const auto [c0, c1] = commitment_states(p);
    const Complex ip = (c0.amplitudes.adjoint() * c1.amplitudes)(0, 0);
    CHECK(std::abs(ip) <= 1e-12);
}

TEST_CASE("bb84 commitment marginals have fidelity 1") {
    const CommitmentProtocol p = get_commitment("bb84-commit", {{"n", 1}});
    const auto [c0, c1] = commitment_states(p);
    const DensityMatrix r0 = partial_trace(c0, {"B", "C"});
    const DensityMatrix r1 = partial_trace(c1, {"B", "C"});
    CHECK(fidelity_closed(r0, r1) >= 1.0 - 1e-9);
}

TEST_CASE("theta commitment marginals have fidelity cos(theta)") {
    for (const double theta : {0.3, M_PI / 4, 1.2}) {
        const CommitmentProtocol p =
            get_commitment("theta-commit", {{"theta", theta}});
        const auto [c0, c1] = commitment_states(p);
        const DensityMatrix r0 = partial_trace(c0, {"B", "C"});
        const DensityMatrix r1 = partial_trace(c1, {"B", "C"});
        CHECK(std::abs(fidelity_closed(r0, r1) - std::cos(theta)) <= 1e-8);
    }
}

TEST_CASE("theta-commit family endpoints") {
    const CommitmentProtocol ideal =
        get_commitment("theta-commit", {{"theta", 0.0}});
    const auto [i0, i1] = commitment_states(ideal);
    CHECK(fidelity_closed(partial_trace(i0, {"B", "C"}),
                          partial_trace(i1, {"B", "C"})) >= 1.0 - 1e-9);

    const CommitmentProtocol binding =
        get_commitment("theta-commit", {{"theta", M_PI / 2}});
    const auto [b0, b1] = commitment_states(binding);
    CHECK(fidelity_closed(partial_trace(b0, {"B", "C"}),
                          partial_trace(b1, {"B", "C"})) <= 1e-8);
}

TEST_CASE("verification accepts honest openings") {
    for (const std::string name :
         {"bb84-commit", "direct-send", "theta-commit"}) {
        const CommitmentProtocol p = get_commitment(name);
        for (int b = 0; b < 2; ++b) {
            const ExecutionTrace trace = run_honest(p, b);
            CHECK(verify_opening(p, trace.after_open, b) >= 1.0 - 1e-9);
        }
    }
}

TEST_CASE("verification rejects flipped honest claims") {
    // The two honest final states are orthogonal (unitarity preserves the
    // orthogonality of the encodings), so a flipped claim scores zero
    // under the rank-1 verification.
    for (const std::string name : {"direct-send", "theta-commit"}) {
        const CommitmentProtocol p =
            get_commitment(name, name == "theta-commit"
                                     ? std::map<std::string, double>{
                                           {"theta", M_PI / 4}}
                                     : std::map<std::string, double>{});
        const ExecutionTrace trace = run_honest(p, 0);
        CHECK(verify_opening(p, trace.after_open, 1) <= 1e-9);
    }
}

TEST_CASE("verification override is honored") {
    CommitmentProtocol p = get_commitment("direct-send");
    const auto n = static_cast<Eigen::Index>(p.layout.total_dim());
    // Accept anything: both projectors are the identity.
    p.verification = {CMat::Identity(n, n), CMat::Identity(n, n)};
    p.validate();
    const ExecutionTrace trace = run_honest(p, 0);
    CHECK(verify_opening(p, trace.after_open, 1) == doctest::Approx(1.0));
}

TEST_CASE("channel is idle after commit for all builtins") {
    for (const std::string name :
         {"bb84-commit", "direct-send", "theta-commit"}) {
        const ChannelIdleness idle =
            channel_idleness(get_commitment(name));
        CHECK(idle.ok);
        CHECK(idle.purity0 >= 1.0 - 1e-9);
        CHECK(idle.cross_fidelity >= 1.0 - 1e-9);
    }
}

TEST_CASE("a protocol that parks state in the channel is flagged") {
    // Alice swaps her qubit into the channel and nobody picks it up: the
    // channel marginal depends on b.
    CommitmentProtocol p;
    p.layout = SubsystemLayout({{"A", 2}, {"B", 2}, {"C", 2}});
    CVec a0 = CVec::Zero(2), a1 = CVec::Zero(2);
    a0[0] = 1.0;
    a1[1] = 1.0;
    p.alice0 = a0;
    p.alice1 = a1;
    p.bob_init = CVec::Zero(4);
    p.bob_init[0] = 1.0;
    CMat swap = CMat::Zero(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    p.commit_rounds = {{Actor::Alice, swap}};
    p.validate();

    const ChannelIdleness idle = channel_idleness(p);
    CHECK_FALSE(idle.ok);
    CHECK(idle.cross_fidelity <= 1e-6);
}

TEST_CASE("unknown builtins and bad parameters are rejected") {
    CHECK_THROWS_AS(builtin("nope"), UnknownBuiltin);
    CHECK_THROWS_AS(builtin("bb84-commit", {{"qubits", 2}}), BadParams);
    CHECK_THROWS_AS(builtin("bb84-commit", {{"n", 1.5}}), BadParams);
    CHECK_THROWS_AS(builtin("orthogonal-toy", {{"rounds", 3}}), BadParams);
}

TEST_CASE("documents with unknown kind or missing fields fail cleanly") {
    const std::string doc = serialize_protocol(builtin("direct-send"));
    std::string bad_kind = doc;
    bad_kind.replace(bad_kind.find("commitment"), 10, "teleporter");
    CHECK_THROWS_AS(load_protocol(bad_kind), ValidationError);

    std::string no_states = doc;
    no_states.replace(no_states.find("\"states\""), 8, "\"values\"");
    CHECK_THROWS_AS(load_protocol(no_states), ValidationError);
}

TEST_CASE("the dimension cap is enforced at load time") {
    const std::string doc = serialize_protocol(builtin("bb84-commit", {{"n", 2}}));
    CHECK_THROWS_AS(load_protocol(doc, /*max_dim=*/64), ValidationError);
    CHECK_NOTHROW(load_protocol(doc, /*max_dim=*/256));
}
