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

#ifndef EPRB_SAMPLING_HPP
#define EPRB_SAMPLING_HPP

#include <random>

#include "eprb/fidelity.hpp"

namespace eprb {

/// Seeded random generators for the audit features (random-POVM and
/// random-purification sampling) and for property tests. Honest protocol
/// execution never draws randomness; dice are explicit ancillas.

/// Matrix with iid standard complex Gaussian entries.
CMat ginibre(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

CMat random_hermitian(std::size_t dim, std::mt19937_64& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase fix).
CMat random_unitary(std::size_t dim, std::mt19937_64& rng);

CVec random_state_amplitudes(std::size_t dim, std::mt19937_64& rng);

/// Full-rank random density matrix (normalized Wishart); `rank` limits
/// the rank when nonzero.
CMat random_density_matrix(std::size_t dim, std::mt19937_64& rng,
                           std::size_t rank = 0);

/// Random POVM with `elements` outcomes: normalized positive operators
/// E_i = S^{-1/2} A_i S^{-1/2} with A_i Wishart and S their sum.
Povm random_povm(std::size_t dim, std::size_t elements, std::mt19937_64& rng);

}  // namespace eprb

#endif
