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
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "eprb/report.hpp"
#include "eprb/sampling.hpp"

namespace {

using namespace eprb;

struct CommonOptions {
    std::string out_path;
    std::string format = "structured";
    unsigned long long seed = 1;
    std::string profile = "default";
    bool snapshots = false;
    bool witness = false;
};

struct ProtocolSource {
    std::string protocol_path;
    std::string builtin_name;
    std::vector<std::string> raw_params;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--out", opts.out_path,
                    "Write the report to this file (default: stdout)");
    cmd->add_option("--format", opts.format, "Report format")
        ->check(CLI::IsMember({"structured", "text"}));
    cmd->add_option("--seed", opts.seed,
                    "Seed for randomized sampling/audit features");
    cmd->add_option("--tolerance-profile", opts.profile,
                    "Tolerance profile")
        ->check(CLI::IsMember({"default", "strict"}));
    cmd->add_flag("--snapshots", opts.snapshots,
                  "Capture per-round states during honest runs");
    cmd->add_flag("--witness", opts.witness,
                  "Include heavy payloads (witnesses, unitaries, "
                  "conditioned states) in the report");
}

void add_source(CLI::App* cmd, ProtocolSource& src) {
    cmd->add_option("--protocol", src.protocol_path,
                    "Protocol document file");
    cmd->add_option("--builtin", src.builtin_name,
                    "Builtin protocol name (see `eprb list`)");
    cmd->add_option("--param", src.raw_params,
                    "Builtin parameter as name=value (repeatable)");
}

std::size_t configured_max_dim() {
    if (const char* env = std::getenv("EPRB_MAX_DIM")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0) {
            throw InputError("EPRB_MAX_DIM must be a positive integer");
        }
        return static_cast<std::size_t>(v);
    }
    return SubsystemLayout::kDefaultMaxDim;
}

std::map<std::string, double> parse_params(
    const std::vector<std::string>& raw) {
    std::map<std::string, double> out;
    for (const std::string& kv : raw) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw BadParams("--param expects name=value, got '" + kv + "'");
        }
        try {
            out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw BadParams("--param value in '" + kv + "' is not a number");
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Loads the protocol and returns it with the canonical document used for
/// the input digest (builtins are digested through their serialized form).
std::pair<Protocol, std::string> resolve_protocol(const ProtocolSource& src,
                                                  std::size_t max_dim,
                                                  const Tolerances& tol) {
    const bool have_file = !src.protocol_path.empty();
    const bool have_builtin = !src.builtin_name.empty();
    if (have_file == have_builtin) {
        throw InputError("pick exactly one of --protocol and --builtin");
    }
    if (have_file) {
        const std::string doc = read_file(src.protocol_path);
        return {load_protocol(doc, max_dim, tol), doc};
    }
    Protocol p = builtin(src.builtin_name, parse_params(src.raw_params),
                         max_dim);
    return {p, serialize_protocol(p)};
}

DensityMatrix load_density_matrix(const std::string& path,
                                  const Tolerances& tol) {
    Json doc;
    try {
        doc = Json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("matrix")) {
        throw ValidationError(path, "expected an object with dim and matrix");
    }
    const std::size_t dim = doc["dim"].get<std::size_t>();
    const auto& arr = doc["matrix"];
    if (!arr.is_array() || arr.size() != dim * dim) {
        throw ValidationError(path + ".matrix",
                              "expected dim*dim row-major [re, im] pairs");
    }
    CMat m(dim, dim);
    for (std::size_t i = 0; i < dim * dim; ++i) {
        const auto& pair = arr[i];
        if (!pair.is_array() || pair.size() != 2) {
            throw ValidationError(path + ".matrix", "entries are [re, im]");
        }
        m(i / dim, i % dim) =
            Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    return DensityMatrix(SubsystemLayout({{"S", dim}}, dim), m, tol);
}

std::string command_echo(int argc, char** argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += " ";
        out += argv[i];
    }
    return out;
}

void emit(const Json& report, const CommonOptions& opts,
          const std::string& text_rendering) {
    std::string payload;
    if (opts.format == "structured") {
        payload = report.dump(2);
        payload += "\n";
    } else {
        payload = text_rendering;
    }
    if (opts.out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(opts.out_path, std::ios::binary);
        if (!out) throw InputError("cannot write file: " + opts.out_path);
        out << payload;
    }
}

std::string render_fidelity_text(const FidelityComparison& f) {
    std::ostringstream os;
    os << "fidelity (closed form)      " << f.closed << "\n"
       << "purification overlap        " << f.purification_overlap << "\n"
       << "POVM witness value          " << f.povm_value << "\n"
       << "max discrepancy             " << f.max_discrepancy << "\n"
       << "trace distance              " << f.trace_dist << "\n";
    return os.str();
}

// ---- subcommands --------------------------------------------------------

int cmd_fidelity(const CommonOptions& opts, const ProtocolSource& src,
                 const std::string& rho0_path, const std::string& rho1_path,
                 std::size_t audit_samples, const std::string& echo) {
    const Tolerances tol = Tolerances::profile(opts.profile);
    const std::size_t max_dim = configured_max_dim();

    DensityMatrix rho0, rho1;
    std::string digest_input;
    if (!rho0_path.empty() || !rho1_path.empty()) {
        if (rho0_path.empty() || rho1_path.empty()) {
            throw InputError("--rho0 and --rho1 must be given together");
        }
        rho0 = load_density_matrix(rho0_path, tol);
        rho1 = load_density_matrix(rho1_path, tol);
        if (rho0.matrix.rows() != rho1.matrix.rows()) {
            throw DimensionMismatch(
                "dimension mismatch between the two density matrices");
        }
        digest_input = read_file(rho0_path) + read_file(rho1_path);
    } else {
        auto [proto, doc] = resolve_protocol(src, max_dim, tol);
        const auto* commit = std::get_if<CommitmentProtocol>(&proto);
        if (!commit) {
            throw InputError("fidelity over a protocol needs a commitment "
                             "protocol");
        }
        const auto [com0, com1] = commitment_states(*commit, tol);
        rho0 = partial_trace(com0, {"B", "C"}, tol);
        rho1 = partial_trace(com1, {"B", "C"}, tol);
        digest_input = doc;
    }

    const FidelityComparison cmp = compare_fidelities(rho0, rho1, tol);
    Json results = to_json(cmp);

    if (opts.witness) {
        const PurificationPair pair = fidelity_purification(rho0, rho1, tol);
        const PovmWitness witness = fidelity_povm(rho0, rho1, tol);
        Json povm_elems = Json::array();
        for (const CMat& e : witness.witness.elements) {
            povm_elems.push_back(to_json(e));
        }
        results["witnesses"] =
            Json{{"povm_elements", povm_elems},
                 {"purification_overlap", pair.overlap}};
    }

    if (audit_samples > 0) {
        std::mt19937_64 rng(opts.seed);
        const std::size_t dim = rho0.matrix.rows();
        double min_sum = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < audit_samples; ++i) {
            const Povm sampled = random_povm(dim, dim + 1, rng);
            min_sum = std::min(min_sum,
                               povm_overlap_sum(rho0, rho1, sampled));
        }
        results["povm_audit"] =
            Json{{"samples", audit_samples},
                 {"min_sampled_value", min_sum},
                 {"never_below_witness",
                  min_sum >= cmp.povm_value - 1e-9}};
    }

    emit(report_envelope(echo, digest_input, tol, opts.seed, results), opts,
         render_fidelity_text(cmp));
    return 0;
}

int cmd_attack(const CommonOptions& opts, const ProtocolSource& src,
               bool sweep, std::size_t sweep_points, const std::string& echo) {
    const Tolerances tol = Tolerances::profile(opts.profile);
    const std::size_t max_dim = configured_max_dim();

    if (sweep) {
        if (!src.builtin_name.empty() &&
            src.builtin_name != "theta-commit") {
            throw InputError("--sweep runs the theta-commit family");
        }
        std::vector<double> grid;
        if (sweep_points == 0) {
            grid = {0.0, M_PI / 8, M_PI / 4, 3 * M_PI / 8, M_PI / 2};
        } else {
            for (std::size_t i = 0; i < sweep_points; ++i) {
                grid.push_back(M_PI / 2 * double(i) /
                               double(sweep_points - 1));
            }
        }
        Json rows = Json::array();
        for (const double theta : grid) {
            const Protocol p =
                builtin("theta-commit", {{"theta", theta}}, max_dim);
            const AttackReport r =
                simulate_attack(std::get<CommitmentProtocol>(p), tol);
            rows.push_back(Json{
                {"theta", theta},
                {"hiding_fidelity", r.hiding.fidelity},
                {"delta", r.hiding.delta},
                {"achieved_overlap", r.achieved_overlap},
                {"bob_acceptance", r.bob_acceptance},
                {"trace_distance", r.hiding.trace_distance},
                {"bob_guess_probability", r.hiding.bob_guess_probability}});
        }
        Json results{{"sweep", rows}};
        std::ostringstream text;
        text << "theta    overlap    acceptance    guess_prob\n";
        for (const auto& row : rows) {
            text << row["theta"].get<double>() << "  "
                 << row["achieved_overlap"].get<double>() << "  "
                 << row["bob_acceptance"].get<double>() << "  "
                 << row["bob_guess_probability"].get<double>() << "\n";
        }
        emit(report_envelope(echo, "theta-commit sweep", tol, opts.seed,
                             results),
             opts, text.str());
        return 0;
    }

    auto [proto, doc] = resolve_protocol(src, max_dim, tol);
    const auto* commit = std::get_if<CommitmentProtocol>(&proto);
    if (!commit) throw InputError("attack needs a commitment protocol");

    const AttackReport r = simulate_attack(*commit, tol);
    Json results = to_json(r, opts.witness);
    if (!r.hiding.channel.ok) {
        results["warnings"] = Json::array(
            {"channel is not idle after the commit phase; the hiding "
             "figures include channel content"});
    }
    if (opts.snapshots) {
        Json runs;
        for (int b = 0; b < 2; ++b) {
            const ExecutionTrace trace =
                run_honest(*commit, b, /*snapshots=*/true, tol);
            Json states = Json::array();
            for (const StateVector& s : trace.snapshots) {
                Json amps = Json::array();
                for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
                    amps.push_back(Json::array({s.amplitudes[i].real(),
                                                s.amplitudes[i].imag()}));
                }
                states.push_back(Json{{"norm", s.norm()},
                                      {"amplitudes", amps}});
            }
            runs["b" + std::to_string(b)] = states;
        }
        results["honest_round_snapshots"] = runs;
    }

    std::ostringstream text;
    text << "hiding fidelity        " << r.hiding.fidelity << "\n"
         << "achieved overlap       " << r.achieved_overlap << "\n"
         << "bob acceptance         " << r.bob_acceptance << "\n"
         << "bob guess probability  " << r.hiding.bob_guess_probability
         << "\n";
    if (!r.hiding.channel.ok) {
        text << "warning: channel not idle after commit\n";
    }
    emit(report_envelope(echo, doc, tol, opts.seed, results), opts,
         text.str());
    return 0;
}

int cmd_cointoss(const CommonOptions& opts, const ProtocolSource& src,
                 const std::string& echo) {
    const Tolerances tol = Tolerances::profile(opts.profile);
    auto [proto, doc] = resolve_protocol(src, configured_max_dim(), tol);
    const auto* coin = std::get_if<CoinTossProtocol>(&proto);
    if (!coin) throw InputError("cointoss needs a coin-toss protocol");

    const IdealCheckReport r = check_ideal(*coin, tol);
    Json results = to_json(r, opts.witness);
    if (opts.snapshots) {
        Json states = Json::array();
        for (std::size_t k = 1; k <= coin->rounds.size(); ++k) {
            const StateVector s = run_cointoss(*coin, k, tol);
            Json amps = Json::array();
            for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) {
                amps.push_back(Json::array(
                    {s.amplitudes[i].real(), s.amplitudes[i].imag()}));
            }
            states.push_back(Json{{"round", k},
                                  {"norm", s.norm()},
                                  {"amplitudes", amps}});
        }
        results["honest_round_snapshots"] = states;
    }

    std::ostringstream text;
    text << "honest conditions      "
         << (r.statistics.ok ? "hold" : "violated") << "\n"
         << "P(0)/P(1)/P(invalid)   " << r.statistics.probabilities_a[0]
         << " / " << r.statistics.probabilities_a[1] << " / "
         << r.statistics.probabilities_a[2] << "\n"
         << "induction verdict      " << to_string(r.induction.verdict)
         << "\n";
    if (r.induction.verdict == InductionVerdict::NotIdealAtRound) {
        text << "failed round           " << r.induction.failed_round
             << " (fidelity " << r.induction.offending_fidelity << ")\n";
    }
    emit(report_envelope(echo, doc, tol, opts.seed, results), opts,
         text.str());
    return 0;
}

int cmd_bounds(const CommonOptions& opts, double epsilon, double target,
               const std::string& schedule_path, const std::string& echo) {
    const Tolerances tol = Tolerances::profile(opts.profile);
    if (!(epsilon > 0.0)) {
        throw NonPositiveEpsilon("bounds: epsilon must be positive");
    }

    Json results{{"epsilon_bits", epsilon},
                 {"target_bits", target},
                 {"min_rounds", min_rounds(epsilon, target)}};

    Json table = Json::array();
    for (const double e : {1.0, 0.5, 0.25, 0.1, 0.01}) {
        table.push_back(Json{{"epsilon", e},
                             {"min_rounds", min_rounds(e, 1.0)}});
    }
    results["reference_table"] = table;
    // Speculation only; reported as a footnote, never verified.
    results["footnote"] =
        "for non-ideal coin tossing a similar N*eps >= O(1) relation is "
        "speculative and not checked by this tool";

    std::string digest_input = "epsilon=" + std::to_string(epsilon);
    if (!schedule_path.empty()) {
        const std::string content = read_file(schedule_path);
        digest_input += content;
        Json doc;
        try {
            doc = Json::parse(content);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(schedule_path + ": not valid JSON: " + e.what());
        }
        if (!doc.is_array()) {
            throw ValidationError(schedule_path,
                                  "expected an array of {actor, bits}");
        }
        std::vector<std::pair<Actor, double>> gains;
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const auto& entry = doc[i];
            const std::string path =
                schedule_path + "[" + std::to_string(i) + "]";
            if (!entry.is_object() || !entry.contains("actor") ||
                !entry.contains("bits")) {
                throw ValidationError(path, "expected {actor, bits}");
            }
            gains.emplace_back(
                actor_from_string(entry["actor"].get<std::string>()),
                entry["bits"].get<double>());
        }
        results["ledger"] = to_json(ledger_simulate(gains, epsilon, target));
    }

    std::ostringstream text;
    text << "min rounds for epsilon=" << epsilon << ": "
         << min_rounds(epsilon, target) << "\n";
    emit(report_envelope(echo, digest_input, tol, opts.seed, results), opts,
         text.str());
    return 0;
}

int cmd_export(const CommonOptions& opts, const ProtocolSource& src) {
    const Tolerances tol = Tolerances::profile(opts.profile);
    auto [proto, doc] = resolve_protocol(src, configured_max_dim(), tol);
    if (opts.out_path.empty()) {
        std::cout << doc;
    } else {
        std::ofstream out(opts.out_path, std::ios::binary);
        if (!out) throw InputError("cannot write file: " + opts.out_path);
        out << doc;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eprb — simulator and cryptanalysis workbench for "
                 "two-party quantum protocols"};
    app.set_version_flag("--version", EPRB_VERSION);
    app.require_subcommand(1);

    const std::string echo = command_echo(argc, argv);

    CommonOptions fid_opts, att_opts, coin_opts, bnd_opts, exp_opts;
    ProtocolSource fid_src, att_src, coin_src, exp_src;

    auto* fid = app.add_subcommand(
        "fidelity", "All three fidelity routes between two states");
    add_common(fid, fid_opts);
    add_source(fid, fid_src);
    std::string rho0_path, rho1_path;
    std::size_t audit_samples = 0;
    fid->add_option("--rho0", rho0_path, "Density matrix file (JSON)");
    fid->add_option("--rho1", rho1_path, "Density matrix file (JSON)");
    fid->add_option("--audit", audit_samples,
                    "Sample this many random POVMs and confirm none beats "
                    "the witness");

    auto* att = app.add_subcommand(
        "attack", "Construct and run the commitment-flipping attack");
    add_common(att, att_opts);
    add_source(att, att_src);
    bool sweep = false;
    std::size_t sweep_points = 0;
    att->add_flag("--sweep", sweep,
                  "Sweep the theta-commit family and emit the "
                  "hiding/binding tradeoff table");
    att->add_option("--sweep-points", sweep_points,
                    "Grid size for --sweep (default: the 5 canonical "
                    "points)");

    auto* coin = app.add_subcommand(
        "cointoss", "Ideal-coin-toss checks and backward induction");
    add_common(coin, coin_opts);
    add_source(coin, coin_src);

    auto* bnd = app.add_subcommand(
        "bounds", "Round-count constraint N*eps >= target");
    add_common(bnd, bnd_opts);
    double epsilon = 0.0, target = 1.0;
    std::string schedule_path;
    bnd->add_option("--epsilon", epsilon, "Imbalance tolerance in bits")
        ->required();
    bnd->add_option("--target", target, "Bits both parties must learn");
    bnd->add_option("--schedule", schedule_path,
                    "JSON schedule of {actor, bits} gains to simulate");

    auto* exp = app.add_subcommand(
        "export", "Write a builtin protocol as a document");
    add_common(exp, exp_opts);
    add_source(exp, exp_src);

    auto* list = app.add_subcommand("list", "List builtin protocols");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fid->parsed()) {
            return cmd_fidelity(fid_opts, fid_src, rho0_path, rho1_path,
                                audit_samples, echo);
        }
        if (att->parsed()) {
            return cmd_attack(att_opts, att_src, sweep, sweep_points, echo);
        }
        if (coin->parsed()) return cmd_cointoss(coin_opts, coin_src, echo);
        if (bnd->parsed()) {
            return cmd_bounds(bnd_opts, epsilon, target, schedule_path, echo);
        }
        if (exp->parsed()) return cmd_export(exp_opts, exp_src);
        if (list->parsed()) {
            for (const auto& name : builtin_names()) {
                std::cout << name << "\n";
            }
            return 0;
        }
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
