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

#include "eprb/protocol.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace eprb {

using nlohmann::json;

std::string to_string(Actor a) { return a == Actor::Alice ? "A" : "B"; }

Actor actor_from_string(const std::string& s) {
    if (s == "A") return Actor::Alice;
    if (s == "B") return Actor::Bob;
    throw InputError("actor must be \"A\" or \"B\", got \"" + s + "\"");
}

std::string machine_label(Actor a) { return to_string(a); }

namespace {

void require_abc_layout(const SubsystemLayout& layout, const char* who) {
    const auto labels = layout.labels();
    if (labels != std::vector<std::string>{"A", "B", "C"}) {
        throw ValidationError(who, "subsystems must be A, B, C in this order");
    }
}

void check_normalized(const CVec& v, const std::string& field,
                      const Tolerances& tol) {
    if (!v.allFinite()) throw ValidationError(field, "non-finite amplitude");
    if (std::abs(v.norm() - 1.0) > tol.validation) {
        std::ostringstream os;
        os << "norm " << v.norm() << " is not 1";
        throw ValidationError(field, os.str());
    }
}

void check_rounds(const std::vector<Round>& rounds, const std::string& field,
                  const SubsystemLayout& layout, const Tolerances& tol) {
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        const std::string path = field + "[" + std::to_string(i) + "]";
        const Round& r = rounds[i];
        const std::size_t want =
            layout.dim_of(machine_label(r.actor)) * layout.dim_of("C");
        if (static_cast<std::size_t>(r.unitary.rows()) != want ||
            static_cast<std::size_t>(r.unitary.cols()) != want) {
            std::ostringstream os;
            os << "matrix is " << r.unitary.rows() << "x" << r.unitary.cols()
               << " but actor " << to_string(r.actor)
               << " with the channel has dimension " << want;
            throw ValidationError(path + ".matrix", os.str());
        }
        if (!is_unitary(r.unitary, tol.validation)) {
            const double residual =
                (r.unitary.adjoint() * r.unitary -
                 CMat::Identity(r.unitary.cols(), r.unitary.cols()))
                    .norm();
            std::ostringstream os;
            os << "not unitary (residual " << residual << ")";
            throw ValidationError(path + ".matrix", os.str());
        }
        if (i > 0 && rounds[i - 1].actor == r.actor) {
            throw ValidationError(path + ".actor",
                                  "consecutive rounds share an actor");
        }
    }
}

void check_measurement(const OutcomeMeasurement& m, const std::string& field,
                       const SubsystemLayout& layout, const Tolerances& tol) {
    std::size_t dim = 1;
    for (const auto& l : m.labels) {
        if (!layout.has(l)) {
            throw ValidationError(field, "unknown label '" + l + "'");
        }
        dim *= layout.dim_of(l);
    }
    CMat sum = CMat::Zero(dim, dim);
    for (std::size_t k = 0; k < 3; ++k) {
        const std::string path = field + "[" + std::to_string(k) + "]";
        const CMat& p = m.projectors[k];
        if (static_cast<std::size_t>(p.rows()) != dim ||
            static_cast<std::size_t>(p.cols()) != dim) {
            throw ValidationError(path, "projector dimension mismatch");
        }
        if (!is_hermitian(p, tol.validation)) {
            throw ValidationError(path, "projector is not Hermitian");
        }
        if ((p * p - p).norm() > tol.validation * std::sqrt(double(dim))) {
            throw ValidationError(path, "projector is not idempotent");
        }
        for (std::size_t j = 0; j < k; ++j) {
            if ((m.projectors[j] * p).norm() >
                tol.validation * std::sqrt(double(dim))) {
                throw ValidationError(path,
                                      "projectors are not mutually orthogonal");
            }
        }
        sum += p;
    }
    if ((sum - CMat::Identity(dim, dim)).norm() >
        tol.validation * std::sqrt(double(dim))) {
        throw ValidationError(field, "projectors do not sum to the identity");
    }
}

// ---- document serialization -------------------------------------------

// 17 significant digits in scientific notation: every double survives a
// text round trip bit-exactly, and the output is locale-independent.
std::string fmt_double(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

void emit_pairs(std::ostream& os, const CVec& v) {
    os << "[";
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << "[" << fmt_double(v[i].real()) << "," << fmt_double(v[i].imag())
           << "]";
    }
    os << "]";
}

void emit_matrix(std::ostream& os, const CMat& m) {
    os << "[";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (r || c) os << ",";
            os << "[" << fmt_double(m(r, c).real()) << ","
               << fmt_double(m(r, c).imag()) << "]";
        }
    }
    os << "]";
}

void emit_subsystems(std::ostream& os, const SubsystemLayout& layout) {
    os << "  \"subsystems\": [";
    for (std::size_t i = 0; i < layout.parts().size(); ++i) {
        if (i) os << ", ";
        os << "{\"label\": \"" << layout.parts()[i].label
           << "\", \"dim\": " << layout.parts()[i].dim << "}";
    }
    os << "],\n";
}

void emit_rounds(std::ostream& os, const std::string& key,
                 const std::vector<Round>& rounds) {
    os << "  \"" << key << "\": [";
    for (std::size_t i = 0; i < rounds.size(); ++i) {
        if (i) os << ",";
        os << "\n    {\"actor\": \"" << to_string(rounds[i].actor)
           << "\", \"matrix\": ";
        emit_matrix(os, rounds[i].unitary);
        os << "}";
    }
    if (!rounds.empty()) os << "\n  ";
    os << "]";
}

// ---- document parsing --------------------------------------------------

const json& field(const json& obj, const std::string& key,
                  const std::string& path) {
    if (!obj.contains(key)) {
        throw ValidationError(path.empty() ? key : path + "." + key,
                              "missing field");
    }
    return obj.at(key);
}

CVec parse_cvec(const json& arr, const std::string& path) {
    if (!arr.is_array()) throw ValidationError(path, "expected an array");
    CVec out(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& pair = arr[i];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
            throw ValidationError(path + "[" + std::to_string(i) + "]",
                                  "expected a [re, im] pair");
        }
        out[i] = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    return out;
}

CMat parse_cmat(const json& arr, std::size_t dim, const std::string& path) {
    const CVec flat = parse_cvec(arr, path);
    if (static_cast<std::size_t>(flat.size()) != dim * dim) {
        std::ostringstream os;
        os << "expected " << dim * dim << " row-major entries, got "
           << flat.size();
        throw ValidationError(path, os.str());
    }
    CMat out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            out(r, c) = flat[r * dim + c];
        }
    }
    return out;
}

std::vector<Round> parse_rounds(const json& arr, const std::string& path,
                                const SubsystemLayout& layout) {
    if (!arr.is_array()) throw ValidationError(path, "expected an array");
    std::vector<Round> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string rp = path + "[" + std::to_string(i) + "]";
        const json& obj = arr[i];
        if (!obj.is_object()) throw ValidationError(rp, "expected an object");
        Round r;
        const json& actor = field(obj, "actor", rp);
        if (!actor.is_string()) {
            throw ValidationError(rp + ".actor", "expected \"A\" or \"B\"");
        }
        try {
            r.actor = actor_from_string(actor.get<std::string>());
        } catch (const InputError& e) {
            throw ValidationError(rp + ".actor", e.what());
        }
        const std::size_t dim =
            layout.dim_of(machine_label(r.actor)) * layout.dim_of("C");
        r.unitary = parse_cmat(field(obj, "matrix", rp), dim, rp + ".matrix");
        out.push_back(std::move(r));
    }
    return out;
}

SubsystemLayout parse_layout(const json& doc, std::size_t max_dim) {
    const json& subs = field(doc, "subsystems", "");
    if (!subs.is_array() || subs.empty()) {
        throw ValidationError("subsystems", "expected a non-empty array");
    }
    std::vector<Subsystem> parts;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const std::string path = "subsystems[" + std::to_string(i) + "]";
        const json& s = subs[i];
        if (!s.is_object()) throw ValidationError(path, "expected an object");
        const json& label = field(s, "label", path);
        const json& dim = field(s, "dim", path);
        if (!label.is_string()) {
            throw ValidationError(path + ".label", "expected a string");
        }
        if (!dim.is_number_unsigned() || dim.get<std::size_t>() < 1) {
            throw ValidationError(path + ".dim", "expected a positive integer");
        }
        parts.push_back({label.get<std::string>(), dim.get<std::size_t>()});
    }
    try {
        SubsystemLayout layout(parts, max_dim);
        require_abc_layout(layout, "subsystems");
        return layout;
    } catch (const ValidationError&) {
        throw;
    } catch (const InputError& e) {
        throw ValidationError("subsystems", e.what());
    }
}

}  // namespace

void CommitmentProtocol::validate(const Tolerances& tol) const {
    require_abc_layout(layout, "subsystems");
    const std::size_t da = layout.dim_of("A");
    const std::size_t dbc = layout.dim_of("B") * layout.dim_of("C");

    if (static_cast<std::size_t>(alice0.size()) != da ||
        static_cast<std::size_t>(alice1.size()) != da) {
        throw ValidationError("states", "alice encodings must live on H_A");
    }
    check_normalized(alice0, "states.alice0", tol);
    check_normalized(alice1, "states.alice1", tol);
    const double overlap = std::abs((alice0.adjoint() * alice1)(0, 0));
    if (overlap > tol.validation) {
        std::ostringstream os;
        os << "encodings are not orthogonal (|<alice0|alice1>| = " << overlap
           << ")";
        throw ValidationError("states.alice1", os.str());
    }
    if (static_cast<std::size_t>(bob_init.size()) != dbc) {
        throw ValidationError("states.bob_init",
                              "must live on H_B (x) H_C");
    }
    check_normalized(bob_init, "states.bob_init", tol);

    check_rounds(commit_rounds, "commit_rounds", layout, tol);
    check_rounds(open_rounds, "open_rounds", layout, tol);

    if (verification) {
        const auto n = static_cast<Eigen::Index>(layout.total_dim());
        for (int b = 0; b < 2; ++b) {
            const CMat& proj = (*verification)[b];
            if (proj.rows() != n || proj.cols() != n) {
                throw ValidationError("verification",
                                      "projector dimension mismatch");
            }
            if (!is_hermitian(proj, tol.validation) ||
                (proj * proj - proj).norm() >
                    tol.validation * std::sqrt(double(n))) {
                throw ValidationError("verification",
                                      "acceptance operator is not a projector");
            }
        }
    }
}

void CoinTossProtocol::validate(const Tolerances& tol) const {
    require_abc_layout(layout, "subsystems");
    if (static_cast<std::size_t>(init_a.size()) != layout.dim_of("A")) {
        throw ValidationError("states.init_a", "must live on H_A");
    }
    check_normalized(init_a, "states.init_a", tol);
    if (static_cast<std::size_t>(init_bc.size()) !=
        layout.dim_of("B") * layout.dim_of("C")) {
        throw ValidationError("states.init_bc", "must live on H_B (x) H_C");
    }
    check_normalized(init_bc, "states.init_bc", tol);

    check_rounds(rounds, "rounds", layout, tol);

    if (outcome_a.party != Actor::Alice || outcome_b.party != Actor::Bob) {
        throw ValidationError("outcome_measurements",
                              "measurements must be assigned to A and B");
    }
    check_measurement(outcome_a, "outcome_measurements.A", layout, tol);
    check_measurement(outcome_b, "outcome_measurements.B", layout, tol);

    if (prescribed[0] < 0 || prescribed[1] < 0 ||
        std::abs(prescribed[0] + prescribed[1] - 1.0) > tol.validation) {
        throw ValidationError("prescribed",
                              "outcome probabilities must sum to 1");
    }
}

Protocol load_protocol(const std::string& document, std::size_t max_dim,
                       const Tolerances& tol) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("document is not valid JSON: ") +
                         e.what());
    }
    if (!doc.is_object()) throw ParseError("document root must be an object");

    const json& version = field(doc, "format_version", "");
    if (!version.is_number_integer() || version.get<int>() != 1) {
        throw ValidationError("format_version", "must be the integer 1");
    }
    const json& kind = field(doc, "kind", "");
    if (!kind.is_string()) {
        throw ValidationError("kind", "expected a string");
    }

    SubsystemLayout layout = parse_layout(doc, max_dim);
    const json& states = field(doc, "states", "");
    if (!states.is_object()) {
        throw ValidationError("states", "expected an object");
    }

    if (kind.get<std::string>() == "commitment") {
        CommitmentProtocol p;
        p.layout = layout;
        p.alice0 = parse_cvec(field(states, "alice0", "states"),
                              "states.alice0");
        p.alice1 = parse_cvec(field(states, "alice1", "states"),
                              "states.alice1");
        p.bob_init = parse_cvec(field(states, "bob_init", "states"),
                                "states.bob_init");
        p.commit_rounds = parse_rounds(field(doc, "commit_rounds", ""),
                                       "commit_rounds", layout);
        p.open_rounds =
            parse_rounds(field(doc, "open_rounds", ""), "open_rounds", layout);
        p.validate(tol);
        return p;
    }
    if (kind.get<std::string>() == "cointoss") {
        CoinTossProtocol p;
        p.layout = layout;
        p.init_a = parse_cvec(field(states, "init_a", "states"),
                              "states.init_a");
        p.init_bc = parse_cvec(field(states, "init_bc", "states"),
                               "states.init_bc");
        p.rounds = parse_rounds(field(doc, "rounds", ""), "rounds", layout);

        const json& meas = field(doc, "outcome_measurements", "");
        if (!meas.is_object()) {
            throw ValidationError("outcome_measurements", "expected an object");
        }
        for (const Actor actor : {Actor::Alice, Actor::Bob}) {
            const std::string key = to_string(actor);
            const std::string path = "outcome_measurements." + key;
            const json& arr = field(meas, key, "outcome_measurements");
            if (!arr.is_array() || arr.size() != 3) {
                throw ValidationError(path,
                                      "expected three projector matrices");
            }
            OutcomeMeasurement m;
            m.party = actor;
            m.labels = {machine_label(actor)};
            const std::size_t dim = layout.dim_of(machine_label(actor));
            for (std::size_t k = 0; k < 3; ++k) {
                m.projectors[k] = parse_cmat(
                    arr[k], dim, path + "[" + std::to_string(k) + "]");
            }
            (actor == Actor::Alice ? p.outcome_a : p.outcome_b) = std::move(m);
        }
        p.validate(tol);
        return p;
    }
    throw ValidationError("kind", "must be \"commitment\" or \"cointoss\"");
}

std::string serialize_protocol(const Protocol& protocol) {
    std::ostringstream os;
    if (const auto* p = std::get_if<CommitmentProtocol>(&protocol)) {
        os << "{\n";
        os << "  \"format_version\": 1,\n";
        os << "  \"kind\": \"commitment\",\n";
        emit_subsystems(os, p->layout);
        os << "  \"states\": {\n";
        os << "    \"alice0\": ";
        emit_pairs(os, p->alice0);
        os << ",\n    \"alice1\": ";
        emit_pairs(os, p->alice1);
        os << ",\n    \"bob_init\": ";
        emit_pairs(os, p->bob_init);
        os << "\n  },\n";
        emit_rounds(os, "commit_rounds", p->commit_rounds);
        os << ",\n";
        emit_rounds(os, "open_rounds", p->open_rounds);
        os << "\n}\n";
        return os.str();
    }

    const auto& p = std::get<CoinTossProtocol>(protocol);
    for (const auto* m : {&p.outcome_a, &p.outcome_b}) {
        if (m->labels != std::vector<std::string>{machine_label(m->party)}) {
            throw InputError(
                "serialize: outcome measurements extending beyond the "
                "party's machine are analysis artifacts and have no "
                "document form");
        }
    }
    os << "{\n";
    os << "  \"format_version\": 1,\n";
    os << "  \"kind\": \"cointoss\",\n";
    emit_subsystems(os, p.layout);
    os << "  \"states\": {\n";
    os << "    \"init_a\": ";
    emit_pairs(os, p.init_a);
    os << ",\n    \"init_bc\": ";
    emit_pairs(os, p.init_bc);
    os << "\n  },\n";
    emit_rounds(os, "rounds", p.rounds);
    os << ",\n  \"outcome_measurements\": {\n";
    bool first_party = true;
    for (const auto* m : {&p.outcome_a, &p.outcome_b}) {
        if (!first_party) os << ",\n";
        first_party = false;
        os << "    \"" << to_string(m->party) << "\": [";
        for (std::size_t k = 0; k < 3; ++k) {
            if (k) os << ",";
            os << "\n      ";
            emit_matrix(os, m->projectors[k]);
        }
        os << "\n    ]";
    }
    os << "\n  }\n}\n";
    return os.str();
}

namespace {

StateVector initial_state(const SubsystemLayout& layout, const CVec& on_a,
                          const CVec& on_bc) {
    StateVector a;
    a.layout = SubsystemLayout({{"A", layout.dim_of("A")}},
                               layout.total_dim());
    a.amplitudes = on_a;
    StateVector bc;
    bc.layout = SubsystemLayout(
        {{"B", layout.dim_of("B")}, {"C", layout.dim_of("C")}},
        layout.total_dim());
    bc.amplitudes = on_bc;
    return tensor(a, bc, layout.total_dim());
}

StateVector apply_round(const StateVector& state, const Round& r) {
    // Rounds were unitarity-checked at validation; skip the O(dim^3)
    // recheck on the hot path.
    const auto labels =
        std::vector<std::string>{machine_label(r.actor), "C"};
    const auto sel = state.layout.offsets(labels);
    const auto rest =
        state.layout.offsets(state.layout.complement(labels));
    CVec out(state.amplitudes.size());
    CVec in_block(sel.size()), out_block(sel.size());
    for (const std::size_t roff : rest) {
        for (std::size_t s = 0; s < sel.size(); ++s) {
            in_block[s] = state.amplitudes[roff + sel[s]];
        }
        out_block.noalias() = r.unitary * in_block;
        for (std::size_t s = 0; s < sel.size(); ++s) {
            out[roff + sel[s]] = out_block[s];
        }
    }
    StateVector result;
    result.layout = state.layout;
    result.amplitudes = std::move(out);
    return result;
}

}  // namespace

ExecutionTrace run_honest(const CommitmentProtocol& p, int b, bool snapshots,
                          const Tolerances& tol) {
    if (b != 0 && b != 1) throw InputError("run_honest: bit must be 0 or 1");

    ExecutionTrace trace;
    trace.initial =
        initial_state(p.layout, b == 0 ? p.alice0 : p.alice1, p.bob_init);

    StateVector state = trace.initial;
    for (const Round& r : p.commit_rounds) {
        state = apply_round(state, r);
        if (snapshots) trace.snapshots.push_back(state);
    }
    trace.after_commit = state;
    for (const Round& r : p.open_rounds) {
        state = apply_round(state, r);
        if (snapshots) trace.snapshots.push_back(state);
    }
    trace.after_open = state;

    if (std::abs(trace.after_open.norm() - 1.0) > tol.validation) {
        throw NumericalFailure("run_honest: norm drifted beyond tolerance");
    }
    return trace;
}

StateVector run_cointoss(const CoinTossProtocol& p, std::size_t upto_round,
                         const Tolerances& tol) {
    if (upto_round > p.rounds.size()) {
        throw InputError("run_cointoss: round index beyond protocol length");
    }
    StateVector state = initial_state(p.layout, p.init_a, p.init_bc);
    for (std::size_t i = 0; i < upto_round; ++i) {
        state = apply_round(state, p.rounds[i]);
    }
    if (std::abs(state.norm() - 1.0) > tol.validation) {
        throw NumericalFailure("run_cointoss: norm drifted beyond tolerance");
    }
    return state;
}

std::pair<StateVector, StateVector> commitment_states(
    const CommitmentProtocol& p, const Tolerances& tol) {
    return {run_honest(p, 0, false, tol).after_commit,
            run_honest(p, 1, false, tol).after_commit};
}

double verify_opening(const CommitmentProtocol& p,
                      const StateVector& final_state, int claimed,
                      const Tolerances& tol) {
    if (claimed != 0 && claimed != 1) {
        throw InputError("verify_opening: claimed bit must be 0 or 1");
    }
    if (!(final_state.layout == p.layout)) {
        throw DimensionMismatch(
            "verify_opening: state layout does not match the protocol");
    }
    double prob;
    if (p.verification) {
        const CMat& proj = (*p.verification)[claimed];
        prob = (final_state.amplitudes.adjoint() * proj *
                final_state.amplitudes)(0, 0)
                   .real();
    } else {
        const StateVector honest =
            run_honest(p, claimed, false, tol).after_open;
        const Complex ip =
            (honest.amplitudes.adjoint() * final_state.amplitudes)(0, 0);
        prob = std::norm(ip);
    }
    return std::clamp(prob, 0.0, 1.0);
}

ChannelIdleness channel_idleness(const CommitmentProtocol& p,
                                 const Tolerances& tol) {
    const auto [com0, com1] = commitment_states(p, tol);
    const DensityMatrix chan0 = partial_trace(com0, {"C"}, tol);
    const DensityMatrix chan1 = partial_trace(com1, {"C"}, tol);

    ChannelIdleness out;
    out.purity0 = eig_hermitian(chan0.matrix, tol).values.maxCoeff();
    out.purity1 = eig_hermitian(chan1.matrix, tol).values.maxCoeff();
    out.cross_fidelity = fidelity_closed(chan0, chan1, tol);
    out.ok = out.purity0 >= 1.0 - tol.equivalence &&
             out.purity1 >= 1.0 - tol.equivalence &&
             out.cross_fidelity >= 1.0 - tol.equivalence;
    return out;
}

}  // namespace eprb
