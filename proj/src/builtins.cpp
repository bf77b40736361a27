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

#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "eprb/protocol.hpp"

namespace eprb {

namespace {

CMat kron(const CMat& a, const CMat& b) {
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

CVec basis_vec(std::size_t dim, std::size_t k) {
    CVec v = CVec::Zero(dim);
    v[k] = 1.0;
    return v;
}

CMat basis_proj(std::size_t dim, std::size_t k) {
    CMat p = CMat::Zero(dim, dim);
    p(k, k) = 1.0;
    return p;
}

std::vector<std::size_t> digits_of(const SubsystemLayout& lay,
                                   std::size_t index) {
    std::vector<std::size_t> out(lay.size());
    for (std::size_t i = 0; i < lay.size(); ++i) {
        out[i] = (index / lay.stride(i)) % lay.parts()[i].dim;
    }
    return out;
}

std::size_t index_of_digits(const SubsystemLayout& lay,
                            const std::vector<std::size_t>& digits) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < lay.size(); ++i) {
        idx += digits[i] * lay.stride(i);
    }
    return idx;
}

/// Permutation unitary from a classical digit transform.
CMat permutation_unitary(
    const SubsystemLayout& lay,
    const std::function<void(std::vector<std::size_t>&)>& transform) {
    const std::size_t dim = lay.total_dim();
    CMat u = CMat::Zero(dim, dim);
    for (std::size_t src = 0; src < dim; ++src) {
        auto digits = digits_of(lay, src);
        transform(digits);
        u(index_of_digits(lay, digits), src) = 1.0;
    }
    return u;
}

CMat swap_gate(std::size_t dim) {
    // Two registers of equal dimension: |x,y> -> |y,x>.
    CMat u = CMat::Zero(dim * dim, dim * dim);
    for (std::size_t x = 0; x < dim; ++x) {
        for (std::size_t y = 0; y < dim; ++y) {
            u(y * dim + x, x * dim + y) = 1.0;
        }
    }
    return u;
}

CMat cnot_gate() {
    // |control, target> -> |control, target^control>.
    CMat u = CMat::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    u(3, 2) = 1.0;
    u(2, 3) = 1.0;
    return u;
}

CMat rotation_y(double angle) {
    CMat u(2, 2);
    u << std::cos(angle / 2), -std::sin(angle / 2), std::sin(angle / 2),
        std::cos(angle / 2);
    return u;
}

void check_params(const std::map<std::string, double>& params,
                  const std::set<std::string>& allowed,
                  const std::string& builtin_name) {
    for (const auto& [key, value] : params) {
        if (!allowed.count(key)) {
            throw BadParams(builtin_name + ": unknown parameter '" + key +
                            "'");
        }
        (void)value;
    }
}

std::size_t int_param(const std::map<std::string, double>& params,
                      const std::string& key, std::size_t fallback,
                      const std::string& builtin_name) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const double v = it->second;
    if (v < 0 || v != std::floor(v)) {
        throw BadParams(builtin_name + ": parameter '" + key +
                        "' must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

// ---- bb84-commit --------------------------------------------------------

/// Basis-encoded commitment. Alice's machine holds n message qubits plus n
/// dice qubits (interleaved M1 D1 M2 D2 ...); the committed bit selects
/// whether each message qubit encodes its dice bit in the computational or
/// the Hadamard basis. Bob's marginal is maximally mixed either way, so the
/// scheme hides perfectly.
CommitmentProtocol make_bb84(const std::map<std::string, double>& params,
                             std::size_t max_dim) {
    check_params(params, {"n"}, "bb84-commit");
    const std::size_t n = int_param(params, "n", 1, "bb84-commit");
    if (n < 1) throw BadParams("bb84-commit: n must be at least 1");

    const std::size_t dim_a = std::size_t(1) << (2 * n);
    const std::size_t dim_b = std::size_t(1) << n;
    const std::size_t dim_c = std::size_t(1) << n;

    CommitmentProtocol p;
    p.name = "bb84-commit";
    p.params = {{"n", double(n)}};
    p.layout = SubsystemLayout(
        {{"A", dim_a}, {"B", dim_b}, {"C", dim_c}}, max_dim);

    // Per message/dice pair (M before D): b=0 pairs the dice with a
    // computational-basis copy, b=1 with a Hadamard-basis copy.
    CVec pair0(4), pair1(4);
    const double r = 1.0 / std::sqrt(2.0);
    pair0 << r, 0, 0, r;            // (|00> + |11>)/sqrt(2)
    pair1 << 0.5, 0.5, 0.5, -0.5;   // (|+0> + |-1>)/sqrt(2)
    CVec a0 = pair0, a1 = pair1;
    for (std::size_t i = 1; i < n; ++i) {
        CMat t0 = kron(a0, pair0);
        CMat t1 = kron(a1, pair1);
        a0 = t0.col(0);
        a1 = t1.col(0);
    }
    p.alice0 = a0;
    p.alice1 = a1;
    p.bob_init = basis_vec(dim_b * dim_c, 0);

    // Mini layout of Alice's side with the channel: M1 D1 ... Mn Dn C1..Cn.
    std::vector<Subsystem> ac_parts;
    for (std::size_t i = 0; i < n; ++i) {
        ac_parts.push_back({"M" + std::to_string(i), 2});
        ac_parts.push_back({"D" + std::to_string(i), 2});
    }
    for (std::size_t i = 0; i < n; ++i) {
        ac_parts.push_back({"C" + std::to_string(i), 2});
    }
    SubsystemLayout ac(ac_parts, dim_a * dim_c);

    std::vector<Subsystem> bc_parts;
    for (std::size_t i = 0; i < n; ++i) {
        bc_parts.push_back({"R" + std::to_string(i), 2});
    }
    for (std::size_t i = 0; i < n; ++i) {
        bc_parts.push_back({"C" + std::to_string(i), 2});
    }
    SubsystemLayout bc(bc_parts, dim_b * dim_c);

    const CMat send_message =
        permutation_unitary(ac, [n](std::vector<std::size_t>& d) {
            for (std::size_t i = 0; i < n; ++i) {
                std::swap(d[2 * i], d[2 * n + i]);  // M_i <-> C_i
            }
        });
    const CMat receive =
        permutation_unitary(bc, [n](std::vector<std::size_t>& d) {
            for (std::size_t i = 0; i < n; ++i) {
                std::swap(d[i], d[n + i]);  // R_i <-> C_i
            }
        });
    const CMat send_dice =
        permutation_unitary(ac, [n](std::vector<std::size_t>& d) {
            for (std::size_t i = 0; i < n; ++i) {
                std::swap(d[2 * i + 1], d[2 * n + i]);  // D_i <-> C_i
            }
        });

    p.commit_rounds = {{Actor::Alice, send_message}, {Actor::Bob, receive}};
    p.open_rounds = {{Actor::Alice, send_dice}};
    return p;
}

// ---- direct-send --------------------------------------------------------

CommitmentProtocol make_direct_send(const std::map<std::string, double>& params,
                                    std::size_t max_dim) {
    check_params(params, {}, "direct-send");
    CommitmentProtocol p;
    p.name = "direct-send";
    p.layout = SubsystemLayout({{"A", 2}, {"B", 2}, {"C", 2}}, max_dim);
    p.alice0 = basis_vec(2, 0);
    p.alice1 = basis_vec(2, 1);
    p.bob_init = basis_vec(4, 0);
    p.commit_rounds = {{Actor::Alice, swap_gate(2)},
                       {Actor::Bob, swap_gate(2)}};
    return p;
}

// ---- theta-commit -------------------------------------------------------

/// Alice keeps |b> and hands Bob one of two states with overlap cos(theta).
/// theta = 0 is hiding-ideal, theta = pi/2 is direct-send.
CommitmentProtocol make_theta(const std::map<std::string, double>& params,
                              std::size_t max_dim) {
    check_params(params, {"theta"}, "theta-commit");
    auto it = params.find("theta");
    const double theta = it == params.end() ? 0.0 : it->second;

    CommitmentProtocol p;
    p.name = "theta-commit";
    p.params = {{"theta", theta}};
    p.layout = SubsystemLayout({{"A", 2}, {"B", 2}, {"C", 2}}, max_dim);
    p.alice0 = basis_vec(2, 0);
    p.alice1 = basis_vec(2, 1);
    p.bob_init = basis_vec(4, 0);

    CMat encode = CMat::Zero(4, 4);
    encode.block(0, 0, 2, 2) = rotation_y(theta);
    encode.block(2, 2, 2, 2) = rotation_y(-theta);
    p.commit_rounds = {{Actor::Alice, encode}, {Actor::Bob, swap_gate(2)}};
    return p;
}

// ---- orthogonal-toy coin toss ------------------------------------------

/// Alice's dice decides the coin; every round merely relays it. Round
/// 2k-1 copies the dice onto the channel, round 2k parks the copy in one
/// of Bob's receive slots. Bob's measurement reads his first slot and
/// ignores the rest, so every round is redundant in the backward-induction
/// sense. `bob_pad` multiplies Bob's machine with an inert register, which
/// scales the total dimension without changing any probability.
CoinTossProtocol make_orthogonal_toy(
    const std::map<std::string, double>& params, std::size_t max_dim) {
    check_params(params, {"rounds", "bob_pad"}, "orthogonal-toy");
    const std::size_t rounds = int_param(params, "rounds", 4,
                                         "orthogonal-toy");
    const std::size_t pad = int_param(params, "bob_pad", 1, "orthogonal-toy");
    if (rounds < 2 || rounds % 2 != 0) {
        throw BadParams("orthogonal-toy: rounds must be even and >= 2");
    }
    if (pad < 1) throw BadParams("orthogonal-toy: bob_pad must be >= 1");
    const std::size_t slots = rounds / 2;

    const std::size_t dim_b = (std::size_t(1) << slots) * pad;
    CoinTossProtocol p;
    p.name = "orthogonal-toy";
    p.params = {{"rounds", double(rounds)}, {"bob_pad", double(pad)}};
    p.layout = SubsystemLayout({{"A", 2}, {"B", dim_b}, {"C", 2}}, max_dim);
    p.init_a = CVec::Constant(2, 1.0 / std::sqrt(2.0));
    p.init_bc = basis_vec(dim_b * 2, 0);

    std::vector<Subsystem> bc_parts;
    for (std::size_t i = 0; i < slots; ++i) {
        bc_parts.push_back({"R" + std::to_string(i), 2});
    }
    bc_parts.push_back({"pad", pad});
    bc_parts.push_back({"C", 2});
    SubsystemLayout bc(bc_parts, dim_b * 2);

    for (std::size_t k = 0; k < slots; ++k) {
        p.rounds.push_back({Actor::Alice, cnot_gate()});
        p.rounds.push_back(
            {Actor::Bob,
             permutation_unitary(bc, [k, slots](std::vector<std::size_t>& d) {
                 std::swap(d[k], d[slots + 1]);  // R_k <-> C
             })});
    }

    p.outcome_a.party = Actor::Alice;
    p.outcome_a.labels = {"A"};
    p.outcome_a.projectors = {basis_proj(2, 0), basis_proj(2, 1),
                              CMat::Zero(2, 2)};

    const std::size_t rest = dim_b / 2;  // everything after the first slot
    p.outcome_b.party = Actor::Bob;
    p.outcome_b.labels = {"B"};
    p.outcome_b.projectors = {kron(basis_proj(2, 0), CMat::Identity(rest, rest)),
                              kron(basis_proj(2, 1), CMat::Identity(rest, rest)),
                              CMat::Zero(dim_b, dim_b)};
    return p;
}

// ---- coin-from-commit ---------------------------------------------------

/// The commitment-to-coin construction: Alice commits a random bit a, Bob
/// announces a random guess g, Alice opens, and the coin is a XOR g.
/// Registers: K holds Alice's bit, RG her copy of the guess; G holds Bob's
/// guess, RD his copy of the opening; the channel gains a guess qubit Cg
/// next to the base channel Cc. Base rounds act on their original factors.
CoinTossProtocol make_coin_from_commit(
    const std::map<std::string, double>& params, std::size_t max_dim) {
    check_params(params, {"n", "theta"}, "coin-from-commit");

    CommitmentProtocol base;
    if (params.count("theta")) {
        if (params.count("n")) {
            throw BadParams(
                "coin-from-commit: pick either a bb84 base (n) or a "
                "theta-commit base (theta), not both");
        }
        base = make_theta(params, max_dim);
    } else {
        base = make_bb84(params, max_dim);
    }

    if (base.commit_rounds.size() != 2 ||
        base.commit_rounds[0].actor != Actor::Alice ||
        base.commit_rounds[1].actor != Actor::Bob ||
        base.open_rounds.size() > 1 ||
        (base.open_rounds.size() == 1 &&
         base.open_rounds[0].actor != Actor::Alice)) {
        throw BadParams(
            "coin-from-commit: base must commit in rounds [A, B] and open "
            "in [] or [A]");
    }
    const bool has_opening = !base.open_rounds.empty();

    const std::size_t da = base.layout.dim_of("A");
    const std::size_t db = base.layout.dim_of("B");
    const std::size_t dc = base.layout.dim_of("C");
    const std::size_t rd = has_opening ? dc : 1;

    CoinTossProtocol p;
    p.name = "coin-from-commit";
    p.params = params;
    p.layout = SubsystemLayout(
        {{"A", 4 * da}, {"B", 2 * db * rd}, {"C", 2 * dc}}, max_dim);

    // initA = (|0>_K alice0 + |1>_K alice1)/sqrt(2) (x) |0>_RG.
    CVec init_a = CVec::Zero(4 * da);
    for (std::size_t a = 0; a < da; ++a) {
        init_a[(0 * da + a) * 2] = base.alice0[a] / std::sqrt(2.0);
        init_a[(1 * da + a) * 2] = base.alice1[a] / std::sqrt(2.0);
    }
    p.init_a = init_a;

    // initBC on [G, Bc, RD, Cc, Cg], assembled in tensor order then
    // re-indexed.
    {
        StateVector guess;
        guess.layout = SubsystemLayout({{"G", 2}}, 2);
        guess.amplitudes = CVec::Constant(2, 1.0 / std::sqrt(2.0));

        StateVector base_bc;
        base_bc.layout = SubsystemLayout({{"Bc", db}, {"Cc", dc}}, db * dc);
        base_bc.amplitudes = base.bob_init;

        StateVector tail;
        tail.layout = SubsystemLayout({{"RD", rd}, {"Cg", 2}}, rd * 2);
        tail.amplitudes = basis_vec(rd * 2, 0);

        const StateVector assembled =
            tensor(tensor(guess, base_bc, max_dim * 4), tail, max_dim * 4);
        p.init_bc =
            reordered(assembled, {"G", "Bc", "RD", "Cc", "Cg"}).amplitudes;
    }

    SubsystemLayout mini_ac({{"K", 2}, {"Ac", da}, {"RG", 2}, {"Cc", dc},
                             {"Cg", 2}},
                            4 * da * dc * 2);
    SubsystemLayout mini_bc({{"G", 2}, {"Bc", db}, {"RD", rd}, {"Cc", dc},
                             {"Cg", 2}},
                            2 * db * rd * dc * 2);

    // Round 1: Alice runs the base commit send.
    p.rounds.push_back(
        {Actor::Alice, embedded_unitary(mini_ac, {"Ac", "Cc"},
                                        base.commit_rounds[0].unitary)});
    // Round 2: Bob stores the commitment and announces his guess.
    p.rounds.push_back(
        {Actor::Bob,
         CMat(embedded_unitary(mini_bc, {"Bc", "Cc"},
                               base.commit_rounds[1].unitary) *
              embedded_unitary(mini_bc, {"G", "Cg"}, cnot_gate()))});
    // Round 3: Alice takes the guess and (if the base has one) sends the
    // opening message.
    {
        CMat u = embedded_unitary(mini_ac, {"RG", "Cg"}, swap_gate(2));
        if (has_opening) {
            u = embedded_unitary(mini_ac, {"Ac", "Cc"},
                                 base.open_rounds[0].unitary) *
                u;
        }
        p.rounds.push_back({Actor::Alice, u});
    }
    // Round 4: Bob stores the opening.
    if (has_opening) {
        p.rounds.push_back(
            {Actor::Bob,
             embedded_unitary(mini_bc, {"RD", "Cc"}, swap_gate(dc))});
    }

    // Alice's outcome: a XOR g read from K and RG.
    SubsystemLayout mini_a({{"K", 2}, {"Ac", da}, {"RG", 2}}, 4 * da);
    for (int o = 0; o < 2; ++o) {
        CMat small = CMat::Zero(4, 4);
        for (std::size_t a = 0; a < 2; ++a) {
            small += kron(basis_proj(2, a), basis_proj(2, o ^ a));
        }
        p.outcome_a.projectors[o] =
            embedded_operator(mini_a, {"K", "RG"}, small);
    }
    p.outcome_a.party = Actor::Alice;
    p.outcome_a.labels = {"A"};
    p.outcome_a.projectors[2] = CMat::Zero(4 * da, 4 * da);

    // Bob's outcome: his guess XOR the bit he decodes from the opened
    // commitment. Decoding projectors are the supports of his end states
    // for the two honest openings; they must be distinguishable for the
    // construction to make sense.
    std::vector<DensityMatrix> opened;
    for (int a = 0; a < 2; ++a) {
        const StateVector fin = run_honest(base, a).after_open;
        opened.push_back(has_opening ? partial_trace(fin, {"B", "C"})
                                     : partial_trace(fin, {"B"}));
    }
    const double opening_fidelity = fidelity_closed(opened[0], opened[1]);
    if (opening_fidelity > Tolerances{}.equivalence) {
        std::ostringstream os;
        os << "coin-from-commit: Bob cannot distinguish the base "
           << "commitment's two openings (their fidelity is "
           << opening_fidelity << ")";
        throw BadParams(os.str());
    }
    const std::vector<CMat> decode = orthogonal_support_projectors(
        {opened[0].matrix, opened[1].matrix}, Tolerances{}.support_cutoff);
    const std::size_t dbr = db * rd;
    const CMat decode_inv =
        CMat::Identity(dbr, dbr) - decode[0] - decode[1];

    p.outcome_b.party = Actor::Bob;
    p.outcome_b.labels = {"B"};
    for (int o = 0; o < 2; ++o) {
        CMat proj = CMat::Zero(2 * dbr, 2 * dbr);
        for (std::size_t g = 0; g < 2; ++g) {
            proj += kron(basis_proj(2, g), decode[o ^ g]);
        }
        p.outcome_b.projectors[o] = proj;
    }
    p.outcome_b.projectors[2] = kron(CMat::Identity(2, 2), decode_inv);
    return p;
}

}  // namespace

Protocol builtin(const std::string& name,
                 const std::map<std::string, double>& params,
                 std::size_t max_dim) {
    Protocol p = [&]() -> Protocol {
        if (name == "bb84-commit") return make_bb84(params, max_dim);
        if (name == "direct-send") return make_direct_send(params, max_dim);
        if (name == "theta-commit") return make_theta(params, max_dim);
        if (name == "coin-from-commit") {
            return make_coin_from_commit(params, max_dim);
        }
        if (name == "orthogonal-toy") {
            return make_orthogonal_toy(params, max_dim);
        }
        throw UnknownBuiltin("unknown builtin protocol: " + name);
    }();
    std::visit([](const auto& proto) { proto.validate(); }, p);
    return p;
}

std::vector<std::string> builtin_names() {
    return {"bb84-commit", "direct-send", "theta-commit", "coin-from-commit",
            "orthogonal-toy"};
}

}  // namespace eprb
