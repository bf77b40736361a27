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

#ifndef EPRB_REPORT_HPP
#define EPRB_REPORT_HPP

#include <string>

#include "json.hpp"

#include "eprb/attack.hpp"
#include "eprb/bounds.hpp"
#include "eprb/cointoss.hpp"
#include "eprb/fidelity.hpp"

namespace eprb {

using Json = nlohmann::ordered_json;

/// Content digest used to tie a report to its input document.
std::string fnv1a64_hex(const std::string& bytes);

Json to_json(const Tolerances& tol);
Json to_json(const CMat& m);                 // row-major [re, im] pairs
Json to_json(const ChannelIdleness& c);
Json to_json(const HidingDiagnostics& h);
Json to_json(const AttackReport& r, bool include_unitary);
Json to_json(const InductionReport& r, bool include_states);
Json to_json(const IdealCheckReport& r, bool include_states);
Json to_json(const LedgerTrace& t);

struct FidelityComparison {
    double closed = 0.0;
    double purification_overlap = 0.0;
    double povm_value = 0.0;
    double max_discrepancy = 0.0;
    double trace_dist = 0.0;
};

FidelityComparison compare_fidelities(const DensityMatrix& rho0,
                                      const DensityMatrix& rho1,
                                      const Tolerances& tol = Tolerances{});

Json to_json(const FidelityComparison& f);

/// The report envelope every CLI command emits: command echo, input
/// digest, tool version, the tolerance configuration in effect, seed, and
/// the command-specific results object.
Json report_envelope(const std::string& command, const std::string& input,
                     const Tolerances& tol, unsigned long long seed,
                     Json results);

}  // namespace eprb

#endif
