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

#include "eprb/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace eprb {

namespace {

void require_finite(const CMat& m, const char* who) {
    if (!m.allFinite()) {
        throw InputError(std::string(who) + ": input has non-finite entries");
    }
    if (m.rows() == 0 || m.cols() == 0) {
        throw InputError(std::string(who) + ": input is empty");
    }
}

double relative_scale(const CMat& m) { return std::max(1.0, m.norm()); }

// Lexicographic order of amplitudes, real part before imaginary part.
bool lex_less(const CVec& a, const CVec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return false;
}

}  // namespace

void canonicalize_phases(CMat& columns) {
    for (Eigen::Index c = 0; c < columns.cols(); ++c) {
        for (Eigen::Index r = 0; r < columns.rows(); ++r) {
            const double mag = std::abs(columns(r, c));
            if (mag > 1e-12) {
                columns.col(c) *= std::conj(columns(r, c)) / mag;
                break;
            }
        }
    }
}

bool is_hermitian(const CMat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm() <= tol * relative_scale(m);
}

bool is_unitary(const CMat& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const Eigen::Index n = m.cols();

    // Fast path for generalized permutations (exactly one unimodular
    // entry per row and column): protocol rounds are mostly register
    // moves, and the dense U^dagger U check is cubic.
    {
        std::vector<bool> row_hit(n, false);
        bool permutation = true;
        for (Eigen::Index c = 0; c < n && permutation; ++c) {
            int nonzeros = 0;
            Eigen::Index row = -1;
            for (Eigen::Index r = 0; r < n; ++r) {
                const double mag = std::abs(m(r, c));
                if (mag > tol) {
                    if (std::abs(mag - 1.0) > tol) {
                        permutation = false;
                        break;
                    }
                    ++nonzeros;
                    row = r;
                }
            }
            if (!permutation || nonzeros != 1 || row_hit[row]) {
                permutation = false;
                break;
            }
            row_hit[row] = true;
        }
        if (permutation) return true;
    }

    return (m.adjoint() * m - CMat::Identity(n, n)).norm() <=
           tol * std::max<double>(1.0, std::sqrt(double(n)));
}

HermitianEigen eig_hermitian(const CMat& h, const Tolerances& tol) {
    require_finite(h, "eig_hermitian");
    if (h.rows() != h.cols()) {
        throw DimensionMismatch("eig_hermitian: matrix is not square");
    }
    if (!is_hermitian(h, tol.validation)) {
        std::ostringstream os;
        os << "eig_hermitian: matrix is not Hermitian (residual "
           << (h - h.adjoint()).norm() << ")";
        throw NotHermitian(os.str());
    }

    Eigen::SelfAdjointEigenSolver<CMat> solver(0.5 * (h + CMat(h.adjoint())));
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("eig_hermitian: solver did not converge");
    }

    const Eigen::Index n = h.rows();
    CMat vecs = solver.eigenvectors();
    canonicalize_phases(vecs);

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) {
                         const double va = solver.eigenvalues()[a];
                         const double vb = solver.eigenvalues()[b];
                         if (va != vb) return va > vb;
                         return lex_less(vecs.col(a), vecs.col(b));
                     });

    HermitianEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[k] = solver.eigenvalues()[order[k]];
        out.vectors.col(k) = vecs.col(order[k]);
    }

    const double residual =
        (out.vectors * out.values.asDiagonal() * out.vectors.adjoint() - h)
            .norm() /
        relative_scale(h);
    if (residual > tol.reconstruction) {
        std::ostringstream os;
        os << "eig_hermitian: reconstruction residual " << residual
           << " exceeds " << tol.reconstruction;
        throw NumericalFailure(os.str());
    }
    return out;
}

SvdResult svd(const CMat& m, const Tolerances& tol) {
    require_finite(m, "svd");

    const Eigen::Index k = std::min(m.rows(), m.cols());

    SvdResult out;
    if (k <= 16) {
        // Two-sided Jacobi: best accuracy on small blocks.
        Eigen::JacobiSVD<CMat> solver(
            m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        out.u = solver.matrixU();
        out.v = solver.matrixV();
        out.singular_values = solver.singularValues();
    } else {
        // Divide and conquer for anything bigger; Jacobi sweeps are an
        // order of magnitude slower from a few hundred rows on.
        Eigen::BDCSVD<CMat> solver(
            m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        out.u = solver.matrixU();
        out.v = solver.matrixV();
        out.singular_values = solver.singularValues();
    }

    // Jacobi already sorts descending. Canonical phase must rotate u and v
    // columns by the same angle to keep u * diag(s) * v^dagger invariant.
    for (Eigen::Index c = 0; c < k; ++c) {
        for (Eigen::Index r = 0; r < out.u.rows(); ++r) {
            const double mag = std::abs(out.u(r, c));
            if (mag > 1e-12) {
                const Complex phase = std::conj(out.u(r, c)) / mag;
                out.u.col(c) *= phase;
                out.v.col(c) *= phase;
                break;
            }
        }
    }
    // Remaining columns (null-space completions) get canonical phases of
    // their own; they never enter the reconstruction.
    for (Eigen::Index c = k; c < out.u.cols(); ++c) {
        CMat col = out.u.col(c);
        canonicalize_phases(col);
        out.u.col(c) = col;
    }
    for (Eigen::Index c = k; c < out.v.cols(); ++c) {
        CMat col = out.v.col(c);
        canonicalize_phases(col);
        out.v.col(c) = col;
    }

    CMat sigma = CMat::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < k; ++i) {
        sigma(i, i) = out.singular_values[i];
    }
    const double residual =
        (out.u * sigma * out.v.adjoint() - m).norm() / relative_scale(m);
    if (residual > tol.reconstruction) {
        std::ostringstream os;
        os << "svd: reconstruction residual " << residual << " exceeds "
           << tol.reconstruction;
        throw NumericalFailure(os.str());
    }
    return out;
}

CMat psd_sqrt(const CMat& rho, const Tolerances& tol) {
    HermitianEigen eig = eig_hermitian(rho, tol);
    RVec clamped = eig.values;
    for (Eigen::Index i = 0; i < clamped.size(); ++i) {
        if (clamped[i] < 0.0) {
            if (clamped[i] < -tol.psd_clamp * relative_scale(rho)) {
                std::ostringstream os;
                os << "psd_sqrt: eigenvalue " << clamped[i]
                   << " below clamp window";
                throw NotPSD(os.str());
            }
            clamped[i] = 0.0;
        }
    }
    const RVec roots = clamped.cwiseSqrt();
    CMat result = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
    // Exact hermiticity, independent of accumulated roundoff.
    result = 0.5 * (result + CMat(result.adjoint()));

    const double residual =
        (result * result - rho).norm() / relative_scale(rho);
    if (residual > 1e-9) {
        std::ostringstream os;
        os << "psd_sqrt: square residual " << residual << " exceeds 1e-9";
        throw NumericalFailure(os.str());
    }
    return result;
}

PolarDecomposition polar(const CMat& m, bool complete_unitary,
                         const Tolerances& tol) {
    require_finite(m, "polar");
    if (complete_unitary && m.rows() != m.cols()) {
        throw DimensionMismatch(
            "polar: unitary completion requires a square matrix");
    }

    const SvdResult dec = svd(m, tol);
    PolarDecomposition out;
    if (complete_unitary) {
        // Full U V^dagger: singular directions with zero singular value are
        // paired in SVD output order, which completes W deterministically.
        out.w = dec.u * dec.v.adjoint();
    } else {
        const Eigen::Index k = std::min(m.rows(), m.cols());
        out.w = dec.u.leftCols(k) * dec.v.leftCols(k).adjoint();
    }
    RVec padded = RVec::Zero(dec.v.cols());
    padded.head(dec.singular_values.size()) = dec.singular_values;
    out.p = dec.v * padded.asDiagonal() * dec.v.adjoint();
    out.p = 0.5 * (out.p + CMat(out.p.adjoint()));

    const double residual = (out.w * out.p - m).norm() / relative_scale(m);
    if (residual > 1e-9) {
        std::ostringstream os;
        os << "polar: reconstruction residual " << residual
           << " exceeds 1e-9";
        throw NumericalFailure(os.str());
    }
    return out;
}

CMat support_basis(const CMat& psd, double cutoff, const Tolerances& tol) {
    const HermitianEigen eig = eig_hermitian(psd, tol);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        if (eig.values[i] >= cutoff) keep.push_back(i);
    }
    CMat out(psd.rows(), keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.col(k) = eig.vectors.col(keep[k]);
    }
    return out;
}

std::vector<CMat> orthogonal_support_projectors(
    const std::vector<CMat>& psd_ops, double cutoff, const Tolerances& tol) {
    std::vector<CMat> projectors;
    std::vector<CVec> accumulated;
    for (const CMat& op : psd_ops) {
        const CMat basis = support_basis(op, cutoff, tol);
        CMat proj = CMat::Zero(op.rows(), op.cols());
        for (Eigen::Index c = 0; c < basis.cols(); ++c) {
            CVec v = basis.col(c);
            for (const CVec& prev : accumulated) {
                v -= prev * (prev.adjoint() * v)(0, 0);
            }
            const double residual = v.norm();
            if (residual < 0.5) {
                throw InputError(
                    "orthogonal_support_projectors: supports overlap");
            }
            v /= residual;
            accumulated.push_back(v);
            proj += v * v.adjoint();
        }
        projectors.push_back(std::move(proj));
    }
    return projectors;
}

Tolerances Tolerances::profile(const std::string& name) {
    if (name == "default") return default_profile();
    if (name == "strict") return strict_profile();
    throw InputError("unknown tolerance profile: " + name);
}

}  // namespace eprb
