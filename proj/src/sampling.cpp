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

#include "eprb/sampling.hpp"

namespace eprb {

CMat ginibre(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CMat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = Complex(gauss(rng), gauss(rng));
        }
    }
    return m;
}

CMat random_hermitian(std::size_t dim, std::mt19937_64& rng) {
    const CMat g = ginibre(dim, dim, rng);
    return 0.5 * (g + CMat(g.adjoint()));
}

CMat random_unitary(std::size_t dim, std::mt19937_64& rng) {
    const CMat g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<CMat> qr(g);
    CMat q = qr.householderQ();
    const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (std::size_t i = 0; i < dim; ++i) {
        const Complex d = r(i, i);
        const double mag = std::abs(d);
        if (mag > 1e-300) q.col(i) *= d / mag;
    }
    return q;
}

CVec random_state_amplitudes(std::size_t dim, std::mt19937_64& rng) {
    CVec v = ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

CMat random_density_matrix(std::size_t dim, std::mt19937_64& rng,
                           std::size_t rank) {
    if (rank == 0 || rank > dim) rank = dim;
    const CMat g = ginibre(dim, rank, rng);
    CMat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + CMat(rho.adjoint()));
}

Povm random_povm(std::size_t dim, std::size_t elements, std::mt19937_64& rng) {
    if (elements < 1) throw InputError("random_povm: need at least 1 element");
    std::vector<CMat> parts;
    CMat sum = CMat::Zero(dim, dim);
    for (std::size_t i = 0; i < elements; ++i) {
        const CMat g = ginibre(dim, dim, rng);
        parts.push_back(g * g.adjoint());
        sum += parts.back();
    }
    // S^{-1/2} through the eigendecomposition; S is positive definite
    // almost surely.
    const HermitianEigen eig = eig_hermitian(0.5 * (sum + CMat(sum.adjoint())));
    RVec inv_roots(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        inv_roots[i] = 1.0 / std::sqrt(std::max(eig.values[i], 1e-300));
    }
    const CMat s_inv_root =
        eig.vectors * inv_roots.asDiagonal() * eig.vectors.adjoint();

    Povm povm;
    for (CMat& a : parts) {
        CMat e = s_inv_root * a * s_inv_root;
        povm.elements.push_back(0.5 * (e + CMat(e.adjoint())));
    }
    return povm;
}

}  // namespace eprb
