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

#include "eprb/report.hpp"
#include "eprb/sampling.hpp"

using namespace eprb;

TEST_CASE("digest is deterministic and content sensitive") {
    CHECK(fnv1a64_hex("abc") == fnv1a64_hex("abc"));
    CHECK(fnv1a64_hex("abc") != fnv1a64_hex("abd"));
    CHECK(fnv1a64_hex("").size() == 16);
}

TEST_CASE("report envelopes are byte-identical for identical inputs") {
    const Tolerances tol;
    const Json a = report_envelope("attack --builtin bb84-commit", "doc",
                                   tol, 42, Json{{"x", 1.5}});
    const Json b = report_envelope("attack --builtin bb84-commit", "doc",
                                   tol, 42, Json{{"x", 1.5}});
    CHECK(a.dump(2) == b.dump(2));
    CHECK(a["tool"]["name"] == "eprb");
    CHECK(a["input_digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("tolerance profiles carry every knob into the report") {
    const Json t = to_json(Tolerances::default_profile());
    for (const char* key : {"validation", "reconstruction", "equivalence",
                            "psd_clamp", "support_cutoff", "truncation"}) {
        CHECK(t.contains(key));
    }
    const Json strict = to_json(Tolerances::strict_profile());
    CHECK(strict["validation"].get<double>() <
          t["validation"].get<double>());
    CHECK_THROWS_AS(Tolerances::profile("loose"), InputError);
}

TEST_CASE("fidelity comparison agrees across routes") {
    std::mt19937_64 rng(3);
    const SubsystemLayout lay({{"S", 3}});
    const DensityMatrix r0(lay, random_density_matrix(3, rng));
    const DensityMatrix r1(lay, random_density_matrix(3, rng));
    const FidelityComparison cmp = compare_fidelities(r0, r1);
    CHECK(cmp.max_discrepancy <= 1e-6);
    const Json j = to_json(cmp);
    CHECK(j["closed_form"].get<double>() == cmp.closed);
}

TEST_CASE("matrix payloads round-trip their shape") {
    std::mt19937_64 rng(5);
    const CMat m = ginibre(2, 3, rng);
    const Json j = to_json(m);
    CHECK(j["rows"] == 2);
    CHECK(j["cols"] == 3);
    CHECK(j["entries"].size() == 6);
}
