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

#ifndef EPRB_FIDELITY_HPP
#define EPRB_FIDELITY_HPP

#include <vector>

#include "eprb/hilbert.hpp"

namespace eprb {

/// The three equivalent fidelity definitions with constructive witnesses.
/// Fidelity is kept in amplitude convention (F, not F^2) throughout;
/// squared quantities are always labeled explicitly where reported.

struct Povm {
    std::vector<CMat> elements;

    /// Validates positivity of each element and completeness of the sum.
    void validate(const Tolerances& tol = Tolerances{}) const;
};

struct PurificationPair {
    StateVector psi0;  // on system (x) ancilla "E"
    StateVector psi1;
    double overlap = 0.0;  // |<psi0|psi1>|
};

struct PovmWitness {
    double value = 0.0;
    Povm witness;
};

/// Closed form Tr sqrt(rho1^{1/2} rho0 rho1^{1/2}), clamped into [0, 1].
double fidelity_closed(const DensityMatrix& rho0, const DensityMatrix& rho1,
                       const Tolerances& tol = Tolerances{});

/// A maximally parallel purification pair: psi1 is the canonical
/// purification of rho1 (eigenvectors paired with a standard-basis ancilla
/// of the same dimension), psi0 is the ancilla rotation of rho0's canonical
/// purification that aligns it with psi1. The rotation is the unitary polar
/// factor of the cross-Gram operator between the canonical purifications,
/// so overlap == fidelity_closed up to roundoff.
PurificationPair fidelity_purification(const DensityMatrix& rho0,
                                       const DensityMatrix& rho1,
                                       const Tolerances& tol = Tolerances{});

/// The minimizing POVM: the projective measurement diagonalizing
/// rho1^{-1/2} sqrt(rho1^{1/2} rho0 rho1^{1/2}) rho1^{-1/2} on the support
/// of rho1 (pseudo-inverse), with the kernel projector appended as one
/// extra element. The witness attains sum_b sqrt(Tr rho0 E_b Tr rho1 E_b)
/// equal to the closed form.
PovmWitness fidelity_povm(const DensityMatrix& rho0, const DensityMatrix& rho1,
                          const Tolerances& tol = Tolerances{});

/// Evaluates sum_b sqrt(Tr rho0 E_b) sqrt(Tr rho1 E_b) for a given POVM.
double povm_overlap_sum(const DensityMatrix& rho0, const DensityMatrix& rho1,
                        const Povm& povm);

/// Trace distance (1/2) Tr |rho0 - rho1|. An honest receiver's best
/// single-shot guess between the two states succeeds with 1/2 + D/2.
double trace_distance(const DensityMatrix& rho0, const DensityMatrix& rho1,
                      const Tolerances& tol = Tolerances{});

}  // namespace eprb

#endif
