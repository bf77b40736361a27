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

#ifndef EPRB_TOLERANCES_HPP
#define EPRB_TOLERANCES_HPP

#include <string>

namespace eprb {

/// Central numeric tolerances. Every module reads these instead of
/// hard-coding its own epsilons, so the whole toolkit has one tuning point.
struct Tolerances {
    /// Input validation: hermiticity, unitarity, normalization, trace.
    double validation = 1e-9;
    /// Decomposition self-checks (eig/svd reconstruction residuals).
    double reconstruction = 1e-10;
    /// Cross-route equivalence (e.g. the three fidelity definitions).
    double equivalence = 1e-6;
    /// Eigenvalues in [-psd_clamp, 0) are treated as roundoff and clamped
    /// to zero; anything below is a genuine negativity and is rejected.
    double psd_clamp = 1e-10;
    /// Eigenvalues >= support_cutoff count toward an operator's support.
    double support_cutoff = 1e-9;
    /// Pairwise-fidelity gate for rewriting a coin-toss protocol without
    /// its last round. Looser than `validation` so accumulated roundoff in
    /// long inductions does not produce false negatives; the rewrite is
    /// re-validated by direct execution afterwards.
    double truncation = 1e-6;

    static Tolerances default_profile() { return Tolerances{}; }

    static Tolerances strict_profile() {
        Tolerances t;
        t.validation = 1e-10;
        t.reconstruction = 1e-11;
        t.equivalence = 1e-8;
        t.psd_clamp = 1e-11;
        t.support_cutoff = 1e-10;
        t.truncation = 1e-8;
        return t;
    }

    static Tolerances profile(const std::string& name);
};

}  // namespace eprb

#endif
