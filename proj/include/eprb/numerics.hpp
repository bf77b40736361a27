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

#ifndef EPRB_NUMERICS_HPP
#define EPRB_NUMERICS_HPP

#include <Eigen/Dense>
#include <complex>

#include "eprb/errors.hpp"
#include "eprb/tolerances.hpp"

namespace eprb {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Dense complex-matrix decompositions with a deterministic output
/// convention:
///   - eigenvalues / singular values are sorted descending,
///   - exact ties are broken by lexicographic order of the vector's
///     amplitudes (real part first, then imaginary, component by component),
///   - each returned vector carries a canonical phase (its first component
///     with magnitude > 1e-12 is made real and positive).
/// The convention makes Schmidt bases and cheat unitaries reproducible
/// run-to-run even for degenerate spectra.

struct HermitianEigen {
    RVec values;   // descending
    CMat vectors;  // unitary, column k pairs with values[k]
};

struct SvdResult {
    CMat u;
    RVec singular_values;  // nonnegative, descending
    CMat v;                // m = u * diag(s) * v.adjoint()
};

struct PolarDecomposition {
    CMat w;  // unitary (or isometry for the thin variant)
    CMat p;  // positive semidefinite, m = w * p
};

/// Multiplies each column by a phase so its first component with magnitude
/// above 1e-12 becomes real and positive. In-place.
void canonicalize_phases(CMat& columns);

bool is_hermitian(const CMat& m, double tol);
bool is_unitary(const CMat& m, double tol);

/// Eigendecomposition of a Hermitian matrix.
/// Throws NotHermitian when ||h - h^dagger|| exceeds the validation
/// tolerance and NumericalFailure when the reconstruction residual
/// (Frobenius, relative) exceeds the reconstruction tolerance.
HermitianEigen eig_hermitian(const CMat& h,
                             const Tolerances& tol = Tolerances{});

/// Full singular value decomposition, m = U diag(s) V^dagger.
SvdResult svd(const CMat& m, const Tolerances& tol = Tolerances{});

/// Positive semidefinite square root. Eigenvalues in [-psd_clamp, 0) are
/// clamped to zero (partial traces of valid states routinely produce such
/// roundoff); anything below -psd_clamp throws NotPSD.
CMat psd_sqrt(const CMat& rho, const Tolerances& tol = Tolerances{});

/// Polar decomposition m = W P with P = psd_sqrt(m^dagger m).
/// With complete_unitary (requires a square input) W is completed to a full
/// unitary on any kernel by pairing the k-th left-null direction with the
/// k-th right-null direction in SVD output order. Without it W is the thin
/// isometry U_thin V_thin^dagger.
PolarDecomposition polar(const CMat& m, bool complete_unitary = true,
                         const Tolerances& tol = Tolerances{});

/// Orthonormal columns spanning the eigenspace of a Hermitian PSD operator
/// with eigenvalues >= cutoff.
CMat support_basis(const CMat& psd, double cutoff,
                   const Tolerances& tol = Tolerances{});

/// Projectors onto the supports of a family of PSD operators, sequentially
/// orthogonalized so the family is exactly mutually orthogonal. Throws
/// InputError when two supports genuinely overlap (a support direction
/// loses more than half its norm to the preceding projectors).
std::vector<CMat> orthogonal_support_projectors(
    const std::vector<CMat>& psd_ops, double cutoff,
    const Tolerances& tol = Tolerances{});

}  // namespace eprb

#endif
