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

#include "eprb/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eprb {

namespace {

void require_same_dim(const DensityMatrix& rho0, const DensityMatrix& rho1,
                      const char* who) {
    if (rho0.matrix.rows() != rho1.matrix.rows()) {
        std::ostringstream os;
        os << who << ": dimension mismatch (" << rho0.matrix.rows() << " vs "
           << rho1.matrix.rows() << ")";
        throw DimensionMismatch(os.str());
    }
}

// Ancilla label for canonical purifications; bumps a suffix on clash.
std::string ancilla_label(const SubsystemLayout& layout) {
    if (!layout.has("E")) return "E";
    for (int i = 1;; ++i) {
        const std::string candidate = "E" + std::to_string(i);
        if (!layout.has(candidate)) return candidate;
    }
}

// Canonical purification written as a matrix M with rho = M M^dagger:
// M = V diag(sqrt(lambda)), system index row, ancilla index column.
CMat canonical_purification_matrix(const DensityMatrix& rho,
                                   const Tolerances& tol) {
    HermitianEigen eig = eig_hermitian(rho.matrix, tol);
    RVec lams = eig.values;
    for (Eigen::Index i = 0; i < lams.size(); ++i) {
        lams[i] = std::max(0.0, lams[i]);
    }
    return eig.vectors * lams.cwiseSqrt().asDiagonal();
}

StateVector purification_state(const DensityMatrix& rho, const CMat& m,
                               const std::string& ancilla) {
    std::vector<Subsystem> parts = rho.layout.parts();
    parts.push_back({ancilla, static_cast<std::size_t>(m.cols())});
    const std::size_t total =
        rho.layout.total_dim() * static_cast<std::size_t>(m.cols());
    SubsystemLayout layout(parts, std::max(total, SubsystemLayout::kDefaultMaxDim));

    CVec amps(total);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        amps.segment(i * m.cols(), m.cols()) = m.row(i).transpose();
    }
    StateVector out;
    out.layout = std::move(layout);
    out.amplitudes = std::move(amps);
    return out;
}

}  // namespace

void Povm::validate(const Tolerances& tol) const {
    if (elements.empty()) throw InputError("povm: no elements");
    const Eigen::Index n = elements.front().rows();
    CMat sum = CMat::Zero(n, n);
    for (std::size_t b = 0; b < elements.size(); ++b) {
        const CMat& e = elements[b];
        if (e.rows() != n || e.cols() != n) {
            throw DimensionMismatch("povm: element sizes differ");
        }
        if (!is_hermitian(e, tol.validation)) {
            throw NotHermitian("povm: element " + std::to_string(b) +
                               " is not Hermitian");
        }
        const HermitianEigen eig = eig_hermitian(e, tol);
        if (eig.values.minCoeff() < -tol.validation) {
            throw NotPSD("povm: element " + std::to_string(b) +
                         " has a negative eigenvalue");
        }
        sum += e;
    }
    if ((sum - CMat::Identity(n, n)).norm() > tol.validation * std::sqrt(n)) {
        throw InputError("povm: elements do not sum to the identity");
    }
}

double fidelity_closed(const DensityMatrix& rho0, const DensityMatrix& rho1,
                       const Tolerances& tol) {
    require_same_dim(rho0, rho1, "fidelity_closed");
    const CMat root1 = psd_sqrt(rho1.matrix, tol);
    const CMat sandwich = root1 * rho0.matrix * root1;
    const double f = psd_sqrt(sandwich, tol).trace().real();
    return std::clamp(f, 0.0, 1.0);
}

PurificationPair fidelity_purification(const DensityMatrix& rho0,
                                       const DensityMatrix& rho1,
                                       const Tolerances& tol) {
    require_same_dim(rho0, rho1, "fidelity_purification");

    const std::string ancilla = ancilla_label(rho0.layout);
    const CMat m0 = canonical_purification_matrix(rho0, tol);
    const CMat m1 = canonical_purification_matrix(rho1, tol);

    // Ancilla-side cross-Gram operator. Rotating psi0's ancilla by R maps
    // M0 -> M0 R^T and the overlap to Tr(conj(R) G). With G = W P the
    // choice R = W^T turns the overlap into Tr(P) = ||G||_1 = F.
    const CMat gram = m0.adjoint() * m1;
    const PolarDecomposition pol = polar(gram, /*complete_unitary=*/true, tol);
    const CMat rotated_m0 = m0 * pol.w;

    PurificationPair out;
    out.psi0 = purification_state(rho0, rotated_m0, ancilla);
    out.psi1 = purification_state(rho1, m1, ancilla);
    out.overlap = std::clamp(
        std::abs((out.psi0.amplitudes.adjoint() * out.psi1.amplitudes)(0, 0)),
        0.0, 1.0);
    return out;
}

PovmWitness fidelity_povm(const DensityMatrix& rho0, const DensityMatrix& rho1,
                          const Tolerances& tol) {
    require_same_dim(rho0, rho1, "fidelity_povm");
    const Eigen::Index n = rho1.matrix.rows();

    const HermitianEigen eig1 = eig_hermitian(rho1.matrix, tol);
    std::vector<Eigen::Index> support, kernel;
    for (Eigen::Index i = 0; i < n; ++i) {
        (eig1.values[i] >= tol.support_cutoff ? support : kernel).push_back(i);
    }

    PovmWitness out;
    if (!support.empty()) {
        CMat vs(n, support.size());
        RVec inv_roots(support.size());
        for (std::size_t k = 0; k < support.size(); ++k) {
            vs.col(k) = eig1.vectors.col(support[k]);
            inv_roots[k] = 1.0 / std::sqrt(eig1.values[support[k]]);
        }

        const CMat root1 = psd_sqrt(rho1.matrix, tol);
        const CMat geometric = psd_sqrt(root1 * rho0.matrix * root1, tol);
        // The optimal operator restricted to supp(rho1), in the support
        // eigenbasis coordinates. Diagonalizing there keeps each projector
        // inside the support even when the spectrum touches zero.
        const CMat restricted = inv_roots.asDiagonal() *
                                (vs.adjoint() * geometric * vs) *
                                inv_roots.asDiagonal();
        const HermitianEigen diag = eig_hermitian(restricted, tol);
        for (Eigen::Index k = 0; k < diag.values.size(); ++k) {
            const CVec direction = vs * diag.vectors.col(k);
            out.witness.elements.push_back(direction * direction.adjoint());
        }
    }
    if (!kernel.empty()) {
        CMat proj = CMat::Zero(n, n);
        for (const Eigen::Index i : kernel) {
            proj += eig1.vectors.col(i) * eig1.vectors.col(i).adjoint();
        }
        out.witness.elements.push_back(proj);
    }

    out.value = povm_overlap_sum(rho0, rho1, out.witness);
    return out;
}

double povm_overlap_sum(const DensityMatrix& rho0, const DensityMatrix& rho1,
                        const Povm& povm) {
    double sum = 0.0;
    for (const CMat& e : povm.elements) {
        const double p0 = std::max(0.0, (rho0.matrix * e).trace().real());
        const double p1 = std::max(0.0, (rho1.matrix * e).trace().real());
        sum += std::sqrt(p0) * std::sqrt(p1);
    }
    return sum;
}

double trace_distance(const DensityMatrix& rho0, const DensityMatrix& rho1,
                      const Tolerances& tol) {
    require_same_dim(rho0, rho1, "trace_distance");
    const HermitianEigen eig =
        eig_hermitian(rho0.matrix - rho1.matrix, tol);
    return std::clamp(0.5 * eig.values.cwiseAbs().sum(), 0.0, 1.0);
}

}  // namespace eprb
