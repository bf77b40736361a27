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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eprb/report.hpp"
#include "eprb/sampling.hpp"

namespace py = pybind11;
using namespace eprb;

namespace {

py::object json_to_py(const Json& j) {
    switch (j.type()) {
        case nlohmann::detail::value_t::null: return py::none();
        case nlohmann::detail::value_t::boolean:
            return py::bool_(j.get<bool>());
        case nlohmann::detail::value_t::number_integer:
            return py::int_(j.get<long long>());
        case nlohmann::detail::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case nlohmann::detail::value_t::number_float:
            return py::float_(j.get<double>());
        case nlohmann::detail::value_t::string:
            return py::str(j.get<std::string>());
        case nlohmann::detail::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case nlohmann::detail::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) {
                out[py::str(key)] = json_to_py(value);
            }
            return out;
        }
        default: return py::none();
    }
}

DensityMatrix as_density(const CMat& m, const Tolerances& tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionMismatch("density matrix must be square");
    }
    return DensityMatrix(
        SubsystemLayout({{"S", static_cast<std::size_t>(m.rows())}},
                        static_cast<std::size_t>(m.rows())),
        m, tol);
}

std::map<std::string, double> as_params(const py::dict& params) {
    std::map<std::string, double> out;
    for (const auto& item : params) {
        out[item.first.cast<std::string>()] = item.second.cast<double>();
    }
    return out;
}

CommitmentProtocol commitment_from_document(const std::string& doc,
                                            std::size_t max_dim) {
    Protocol p = load_protocol(doc, max_dim);
    if (auto* c = std::get_if<CommitmentProtocol>(&p)) return std::move(*c);
    throw InputError("document describes a coin toss, not a commitment");
}

CoinTossProtocol cointoss_from_document(const std::string& doc,
                                        std::size_t max_dim) {
    Protocol p = load_protocol(doc, max_dim);
    if (auto* c = std::get_if<CoinTossProtocol>(&p)) return std::move(*c);
    throw InputError("document describes a commitment, not a coin toss");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-party quantum protocol simulator and cryptanalysis "
              "toolkit: commitment attacks, coin-toss backward induction, "
              "fidelity witnesses.";
    m.attr("__version__") = EPRB_VERSION;
    m.attr("DEFAULT_MAX_DIM") = SubsystemLayout::kDefaultMaxDim;

    static py::exception<InputError> input_error(m, "InputError");
    static py::exception<NumericalFailure> numerical_failure(
        m, "NumericalFailure");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const NumericalFailure& e) {
            numerical_failure(e.what());
        } catch (const InputError& e) {
            input_error(e.what());
        }
    });

    // ---- numerics ------------------------------------------------------
    m.def(
        "eig_hermitian",
        [](const CMat& h) {
            const HermitianEigen e = eig_hermitian(h);
            return py::make_tuple(e.values, e.vectors);
        },
        py::arg("matrix"),
        "Eigenvalues (descending) and eigenvectors of a Hermitian matrix.");
    m.def(
        "svd",
        [](const CMat& mr) {
            const SvdResult s = svd(mr);
            return py::make_tuple(s.u, s.singular_values, s.v);
        },
        py::arg("matrix"));
    m.def("psd_sqrt",
          [](const CMat& rho) { return psd_sqrt(rho); },
          py::arg("matrix"));
    m.def(
        "polar",
        [](const CMat& mr, bool complete) {
            const PolarDecomposition p = polar(mr, complete);
            return py::make_tuple(p.w, p.p);
        },
        py::arg("matrix"), py::arg("complete_unitary") = true);

    // ---- fidelity ------------------------------------------------------
    m.def(
        "fidelity_closed",
        [](const CMat& r0, const CMat& r1) {
            const Tolerances tol;
            return fidelity_closed(as_density(r0, tol), as_density(r1, tol));
        },
        py::arg("rho0"), py::arg("rho1"));
    m.def(
        "fidelity_purification",
        [](const CMat& r0, const CMat& r1) {
            const Tolerances tol;
            const PurificationPair pair = fidelity_purification(
                as_density(r0, tol), as_density(r1, tol));
            return py::make_tuple(pair.overlap, CVec(pair.psi0.amplitudes),
                                  CVec(pair.psi1.amplitudes));
        },
        py::arg("rho0"), py::arg("rho1"),
        "Maximally parallel purification pair: (overlap, psi0, psi1).");
    m.def(
        "fidelity_povm",
        [](const CMat& r0, const CMat& r1) {
            const Tolerances tol;
            const PovmWitness w =
                fidelity_povm(as_density(r0, tol), as_density(r1, tol));
            std::vector<CMat> elements = w.witness.elements;
            return py::make_tuple(w.value, elements);
        },
        py::arg("rho0"), py::arg("rho1"),
        "Minimizing POVM: (value, list of elements).");
    m.def(
        "trace_distance",
        [](const CMat& r0, const CMat& r1) {
            const Tolerances tol;
            return trace_distance(as_density(r0, tol), as_density(r1, tol));
        },
        py::arg("rho0"), py::arg("rho1"));
    m.def(
        "compare_fidelities",
        [](const CMat& r0, const CMat& r1) {
            const Tolerances tol;
            return json_to_py(to_json(compare_fidelities(
                as_density(r0, tol), as_density(r1, tol), tol)));
        },
        py::arg("rho0"), py::arg("rho1"),
        "All three fidelity routes plus the trace distance, as a dict.");

    // ---- protocols -----------------------------------------------------
    m.def(
        "builtin_document",
        [](const std::string& name, const py::dict& params,
           std::size_t max_dim) {
            return serialize_protocol(builtin(name, as_params(params),
                                              max_dim));
        },
        py::arg("name"), py::arg("params") = py::dict(),
        py::arg("max_dim") = SubsystemLayout::kDefaultMaxDim,
        "Serialized document of a builtin protocol.");
    m.def("builtin_names", &builtin_names);
    m.def(
        "validate_document",
        [](const std::string& doc, std::size_t max_dim) {
            const Protocol p = load_protocol(doc, max_dim);
            return std::holds_alternative<CommitmentProtocol>(p)
                       ? "commitment"
                       : "cointoss";
        },
        py::arg("document"),
        py::arg("max_dim") = SubsystemLayout::kDefaultMaxDim,
        "Parses and validates a document; returns its kind.");
    m.def(
        "commitment_marginals",
        [](const std::string& doc, std::size_t max_dim) {
            const CommitmentProtocol p =
                commitment_from_document(doc, max_dim);
            const auto [c0, c1] = commitment_states(p);
            return py::make_tuple(
                CMat(partial_trace(c0, {"B", "C"}).matrix),
                CMat(partial_trace(c1, {"B", "C"}).matrix));
        },
        py::arg("document"),
        py::arg("max_dim") = SubsystemLayout::kDefaultMaxDim,
        "Bob-side density matrices of the two commitments.");
    m.def(
        "run_honest",
        [](const std::string& doc, int bit, std::size_t max_dim) {
            const CommitmentProtocol p =
                commitment_from_document(doc, max_dim);
            const ExecutionTrace t = run_honest(p, bit);
            return py::make_tuple(CVec(t.after_commit.amplitudes),
                                  CVec(t.after_open.amplitudes));
        },
        py::arg("document"), py::arg("bit"),
        py::arg("max_dim") = SubsystemLayout::kDefaultMaxDim,
        "(state after commit, state after open) for an honest run.");
    m.def(
        "hiding_report",
        [](const std::string& doc, std::size_t max_dim) {
            return json_to_py(to_json(
                hiding_report(commitment_from_document(doc, max_dim))));
        },
        py::arg("document"),
        py::arg("max_dim") = SubsystemLayout::kDefaultMaxDim);
    m.def(
        "simulate_attack",
        [](const std::string& doc, bool include_unitary,
           std::size_t max_dim) {
            return json_to_py(
                to_json(simulate_attack(commitment_from_document(doc,
                                                                 max_dim)),
                        include_unitary));
        },
        py::arg("document"), py::arg("include_unitary") = false,
        py::arg("max_dim") = SubsystemLayout::kDefaultMaxDim,
        "End-to-end commitment-flipping attack report, as a dict.");
    m.def(
        "check_ideal",
        [](const std::string& doc, bool include_states, std::size_t max_dim) {
            return json_to_py(
                to_json(check_ideal(cointoss_from_document(doc, max_dim)),
                        include_states));
        },
        py::arg("document"), py::arg("include_states") = false,
        py::arg("max_dim") = SubsystemLayout::kDefaultMaxDim);
    m.def(
        "backward_induction",
        [](const std::string& doc, bool include_states, std::size_t max_dim) {
            return json_to_py(to_json(
                backward_induction(cointoss_from_document(doc, max_dim)),
                include_states));
        },
        py::arg("document"), py::arg("include_states") = false,
        py::arg("max_dim") = SubsystemLayout::kDefaultMaxDim);

    // ---- bounds --------------------------------------------------------
    m.def("min_rounds", &min_rounds, py::arg("epsilon"),
          py::arg("target") = 1.0);
    m.def(
        "ledger_simulate",
        [](const std::vector<std::pair<std::string, double>>& gains,
           double epsilon, double target) {
            std::vector<std::pair<Actor, double>> converted;
            for (const auto& [actor, bits] : gains) {
                converted.emplace_back(actor_from_string(actor), bits);
            }
            return json_to_py(
                to_json(ledger_simulate(converted, epsilon, target)));
        },
        py::arg("gains"), py::arg("epsilon"), py::arg("target") = 1.0,
        "Information-ledger walk over (actor, bits) gains, as a dict.");
}
