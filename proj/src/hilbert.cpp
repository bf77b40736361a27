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

#include "eprb/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace eprb {

namespace {

void require_subset(const SubsystemLayout& layout,
                    const std::vector<std::string>& labels,
                    const char* who) {
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!layout.has(l)) {
            throw InputError(std::string(who) + ": unknown label '" + l + "'");
        }
        if (!seen.insert(l).second) {
            throw LabelClash(std::string(who) + ": duplicate label '" + l +
                             "'");
        }
    }
}

std::size_t product_dim(const SubsystemLayout& layout,
                        const std::vector<std::string>& labels) {
    std::size_t d = 1;
    for (const auto& l : labels) d *= layout.dim_of(l);
    return d;
}

}  // namespace

SubsystemLayout::SubsystemLayout(std::vector<Subsystem> parts,
                                 std::size_t max_dim)
    : parts_(std::move(parts)) {
    if (parts_.empty()) {
        throw InputError("layout: needs at least one subsystem");
    }
    std::set<std::string> seen;
    total_ = 1;
    for (const auto& p : parts_) {
        if (p.label.empty()) throw InputError("layout: empty label");
        if (p.dim < 1) {
            throw InputError("layout: subsystem '" + p.label +
                             "' has dimension 0");
        }
        if (!seen.insert(p.label).second) {
            throw LabelClash("layout: duplicate label '" + p.label + "'");
        }
        if (total_ > max_dim / p.dim) {
            std::ostringstream os;
            os << "layout: total dimension exceeds the configured cap "
               << max_dim << " (set a higher cap to proceed)";
            throw InputError(os.str());
        }
        total_ *= p.dim;
    }
}

bool SubsystemLayout::has(const std::string& label) const {
    for (const auto& p : parts_) {
        if (p.label == label) return true;
    }
    return false;
}

std::size_t SubsystemLayout::position(const std::string& label) const {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i].label == label) return i;
    }
    throw InputError("layout: unknown label '" + label + "'");
}

std::size_t SubsystemLayout::dim_of(const std::string& label) const {
    return parts_[position(label)].dim;
}

std::size_t SubsystemLayout::stride(std::size_t position) const {
    std::size_t s = 1;
    for (std::size_t i = position + 1; i < parts_.size(); ++i) {
        s *= parts_[i].dim;
    }
    return s;
}

std::vector<std::string> SubsystemLayout::labels() const {
    std::vector<std::string> out;
    out.reserve(parts_.size());
    for (const auto& p : parts_) out.push_back(p.label);
    return out;
}

std::vector<std::string> SubsystemLayout::complement(
    const std::vector<std::string>& subset) const {
    std::set<std::string> drop(subset.begin(), subset.end());
    std::vector<std::string> out;
    for (const auto& p : parts_) {
        if (!drop.count(p.label)) out.push_back(p.label);
    }
    return out;
}

std::vector<std::size_t> SubsystemLayout::offsets(
    const std::vector<std::string>& subset) const {
    require_subset(*this, subset, "offsets");
    std::size_t count = 1;
    for (const auto& l : subset) count *= dim_of(l);

    std::vector<std::size_t> out(count, 0);
    std::size_t repeat = count;  // block length over which a digit is fixed
    for (const auto& l : subset) {
        const std::size_t d = dim_of(l);
        const std::size_t w = stride(position(l));
        repeat /= d;
        for (std::size_t s = 0; s < count; ++s) {
            out[s] += ((s / repeat) % d) * w;
        }
    }
    return out;
}

bool SubsystemLayout::operator==(const SubsystemLayout& other) const {
    if (parts_.size() != other.parts_.size()) return false;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i].label != other.parts_[i].label ||
            parts_[i].dim != other.parts_[i].dim) {
            return false;
        }
    }
    return true;
}

StateVector::StateVector(SubsystemLayout layout_in, CVec amplitudes_in,
                         const Tolerances& tol)
    : layout(std::move(layout_in)), amplitudes(std::move(amplitudes_in)) {
    if (static_cast<std::size_t>(amplitudes.size()) != layout.total_dim()) {
        throw DimensionMismatch("state: amplitude count does not match layout");
    }
    if (!amplitudes.allFinite()) {
        throw InputError("state: non-finite amplitude");
    }
    if (std::abs(amplitudes.norm() - 1.0) > tol.validation) {
        std::ostringstream os;
        os << "state: norm " << amplitudes.norm() << " is not 1";
        throw InputError(os.str());
    }
}

DensityMatrix::DensityMatrix(SubsystemLayout layout_in, CMat matrix_in,
                             const Tolerances& tol)
    : layout(std::move(layout_in)), matrix(std::move(matrix_in)) {
    const auto n = static_cast<Eigen::Index>(layout.total_dim());
    if (matrix.rows() != n || matrix.cols() != n) {
        throw DimensionMismatch("density matrix: size does not match layout");
    }
    if (!is_hermitian(matrix, tol.validation)) {
        throw NotHermitian("density matrix: not Hermitian");
    }
    if (std::abs(matrix.trace().real() - 1.0) > tol.validation ||
        std::abs(matrix.trace().imag()) > tol.validation) {
        throw InputError("density matrix: trace is not 1");
    }
    // Positivity after clamping (eigenvalues only; no need for the full
    // decomposition here).
    Eigen::SelfAdjointEigenSolver<CMat> solver(matrix,
                                               Eigen::EigenvaluesOnly);
    const double floor = solver.eigenvalues().minCoeff();
    if (floor < -tol.psd_clamp * std::max(1.0, matrix.norm())) {
        throw NotPSD("density matrix: negative eigenvalue " +
                     std::to_string(floor));
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    DensityMatrix rho;
    rho.layout = psi.layout;
    rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
    return rho;
}

StateVector tensor(const StateVector& a, const StateVector& b,
                   std::size_t max_dim) {
    std::vector<Subsystem> parts = a.layout.parts();
    for (const auto& p : b.layout.parts()) {
        if (a.layout.has(p.label)) {
            throw LabelClash("tensor: label '" + p.label +
                             "' present on both sides");
        }
        parts.push_back(p);
    }
    SubsystemLayout layout(parts, max_dim);

    CVec amps(layout.total_dim());
    const auto db = b.amplitudes.size();
    for (Eigen::Index i = 0; i < a.amplitudes.size(); ++i) {
        amps.segment(i * db, db) = a.amplitudes[i] * b.amplitudes;
    }

    StateVector out;
    out.layout = std::move(layout);
    out.amplitudes = std::move(amps);
    return out;
}

StateVector reordered(const StateVector& state,
                      const std::vector<std::string>& order) {
    if (order.size() != state.layout.size()) {
        throw InputError("reordered: order must list every label exactly once");
    }
    require_subset(state.layout, order, "reordered");

    std::vector<Subsystem> parts;
    parts.reserve(order.size());
    for (const auto& l : order) {
        parts.push_back({l, state.layout.dim_of(l)});
    }
    const auto old_offsets = state.layout.offsets(order);

    CVec amps(state.amplitudes.size());
    for (std::size_t i = 0; i < old_offsets.size(); ++i) {
        amps[i] = state.amplitudes[old_offsets[i]];
    }

    StateVector out;
    out.layout = SubsystemLayout(parts, state.layout.total_dim());
    out.amplitudes = std::move(amps);
    return out;
}

StateVector apply_on(const StateVector& state,
                     const std::vector<std::string>& labels, const CMat& u,
                     const Tolerances& tol) {
    require_subset(state.layout, labels, "apply_on");
    const std::size_t sel_dim = product_dim(state.layout, labels);
    if (static_cast<std::size_t>(u.rows()) != sel_dim ||
        static_cast<std::size_t>(u.cols()) != sel_dim) {
        std::ostringstream os;
        os << "apply_on: unitary is " << u.rows() << "x" << u.cols()
           << " but the selected subsystems have dimension " << sel_dim;
        throw DimensionMismatch(os.str());
    }
    if (!is_unitary(u, tol.validation)) {
        throw NotUnitary("apply_on: matrix is not unitary");
    }

    const auto sel = state.layout.offsets(labels);
    const auto rest = state.layout.offsets(state.layout.complement(labels));

    CVec out(state.amplitudes.size());
    CVec in_block(sel_dim), out_block(sel_dim);
    for (const std::size_t roff : rest) {
        for (std::size_t s = 0; s < sel_dim; ++s) {
            in_block[s] = state.amplitudes[roff + sel[s]];
        }
        out_block.noalias() = u * in_block;
        for (std::size_t s = 0; s < sel_dim; ++s) {
            out[roff + sel[s]] = out_block[s];
        }
    }

    StateVector result;
    result.layout = state.layout;
    result.amplitudes = std::move(out);
    return result;
}

CMat embedded_operator(const SubsystemLayout& layout,
                       const std::vector<std::string>& labels,
                       const CMat& op) {
    require_subset(layout, labels, "embedded_operator");
    const std::size_t sel_dim = product_dim(layout, labels);
    if (static_cast<std::size_t>(op.rows()) != sel_dim ||
        static_cast<std::size_t>(op.cols()) != sel_dim) {
        throw DimensionMismatch("embedded_operator: dimension mismatch");
    }
    const auto sel = layout.offsets(labels);
    const auto rest = layout.offsets(layout.complement(labels));

    CMat out = CMat::Zero(layout.total_dim(), layout.total_dim());
    for (const std::size_t roff : rest) {
        for (std::size_t i = 0; i < sel_dim; ++i) {
            for (std::size_t j = 0; j < sel_dim; ++j) {
                out(roff + sel[i], roff + sel[j]) = op(i, j);
            }
        }
    }
    return out;
}

CMat embedded_unitary(const SubsystemLayout& layout,
                      const std::vector<std::string>& labels, const CMat& u) {
    if (!is_unitary(u, Tolerances{}.validation)) {
        throw NotUnitary("embedded_unitary: matrix is not unitary");
    }
    return embedded_operator(layout, labels, u);
}

CVec apply_operator_amps(const SubsystemLayout& layout, const CVec& amps,
                         const std::vector<std::string>& labels,
                         const CMat& op) {
    require_subset(layout, labels, "apply_operator_amps");
    const std::size_t sel_dim = product_dim(layout, labels);
    if (static_cast<std::size_t>(op.rows()) != sel_dim ||
        static_cast<std::size_t>(op.cols()) != sel_dim) {
        throw DimensionMismatch("apply_operator_amps: dimension mismatch");
    }
    if (static_cast<std::size_t>(amps.size()) != layout.total_dim()) {
        throw DimensionMismatch("apply_operator_amps: amplitude count");
    }

    const auto sel = layout.offsets(labels);
    const auto rest = layout.offsets(layout.complement(labels));

    CVec out(amps.size());
    CVec in_block(sel_dim), out_block(sel_dim);
    for (const std::size_t roff : rest) {
        for (std::size_t s = 0; s < sel_dim; ++s) {
            in_block[s] = amps[roff + sel[s]];
        }
        out_block.noalias() = op * in_block;
        for (std::size_t s = 0; s < sel_dim; ++s) {
            out[roff + sel[s]] = out_block[s];
        }
    }
    return out;
}

DensityMatrix partial_trace(const StateVector& state,
                            const std::vector<std::string>& keep,
                            const Tolerances& tol) {
    if (keep.empty()) throw EmptyKeepSet("partial_trace: empty keep set");
    require_subset(state.layout, keep, "partial_trace");

    // Result layout keeps the original order of the retained subsystems.
    std::vector<std::string> kept_ordered;
    std::set<std::string> keep_set(keep.begin(), keep.end());
    std::vector<Subsystem> kept_parts;
    for (const auto& p : state.layout.parts()) {
        if (keep_set.count(p.label)) {
            kept_ordered.push_back(p.label);
            kept_parts.push_back(p);
        }
    }

    const auto kept = state.layout.offsets(kept_ordered);
    const auto traced =
        state.layout.offsets(state.layout.complement(kept_ordered));

    CMat rho = CMat::Zero(kept.size(), kept.size());
    for (const std::size_t t : traced) {
        for (std::size_t i = 0; i < kept.size(); ++i) {
            const Complex ai = state.amplitudes[kept[i] + t];
            if (ai == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < kept.size(); ++j) {
                rho(i, j) += ai * std::conj(state.amplitudes[kept[j] + t]);
            }
        }
    }

    return DensityMatrix(SubsystemLayout(kept_parts, state.layout.total_dim()),
                         std::move(rho), tol);
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep,
                            const Tolerances& tol) {
    if (keep.empty()) throw EmptyKeepSet("partial_trace: empty keep set");
    require_subset(rho.layout, keep, "partial_trace");

    std::set<std::string> keep_set(keep.begin(), keep.end());
    std::vector<std::string> kept_ordered;
    std::vector<Subsystem> kept_parts;
    for (const auto& p : rho.layout.parts()) {
        if (keep_set.count(p.label)) {
            kept_ordered.push_back(p.label);
            kept_parts.push_back(p);
        }
    }

    const auto kept = rho.layout.offsets(kept_ordered);
    const auto traced =
        rho.layout.offsets(rho.layout.complement(kept_ordered));

    CMat out = CMat::Zero(kept.size(), kept.size());
    for (const std::size_t t : traced) {
        for (std::size_t i = 0; i < kept.size(); ++i) {
            for (std::size_t j = 0; j < kept.size(); ++j) {
                out(i, j) += rho.matrix(kept[i] + t, kept[j] + t);
            }
        }
    }

    return DensityMatrix(SubsystemLayout(kept_parts, rho.layout.total_dim()),
                         std::move(out), tol);
}

SchmidtForm schmidt(const StateVector& state,
                    const std::vector<std::string>& cut_a,
                    const Tolerances& tol) {
    require_subset(state.layout, cut_a, "schmidt");
    if (cut_a.empty() || cut_a.size() == state.layout.size()) {
        throw InputError("schmidt: cut must split the labels into two "
                         "non-empty groups");
    }

    const auto rest = state.layout.complement(cut_a);
    const auto aoff = state.layout.offsets(cut_a);
    const auto boff = state.layout.offsets(rest);

    CMat m(aoff.size(), boff.size());
    for (std::size_t i = 0; i < aoff.size(); ++i) {
        for (std::size_t j = 0; j < boff.size(); ++j) {
            m(i, j) = state.amplitudes[aoff[i] + boff[j]];
        }
    }

    const SvdResult dec = svd(m, tol);
    const Eigen::Index k = std::min(m.rows(), m.cols());

    SchmidtForm out;
    out.coefficients = dec.singular_values;
    out.basis_a = dec.u.leftCols(k);
    out.basis_b = dec.v.leftCols(k).conjugate();
    out.cut_labels = cut_a;

    if (std::abs(out.coefficients.squaredNorm() - 1.0) > tol.validation) {
        throw NumericalFailure("schmidt: coefficients do not sum to 1");
    }
    return out;
}

double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol) {
    const HermitianEigen eig = eig_hermitian(rho.matrix, tol);
    double s = 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double lambda = eig.values[i];
        if (lambda > 0.0) s -= lambda * std::log2(lambda);
    }
    return std::max(0.0, s);
}

double mutual_information(const StateVector& state,
                          const std::vector<std::string>& cut_a,
                          const Tolerances& tol) {
    require_subset(state.layout, cut_a, "mutual_information");
    if (cut_a.empty() || cut_a.size() == state.layout.size()) {
        throw InputError("mutual_information: cut must be a proper "
                         "bipartition");
    }
    const auto rest = state.layout.complement(cut_a);
    const double sa = von_neumann_entropy(partial_trace(state, cut_a, tol));
    const double sb = von_neumann_entropy(partial_trace(state, rest, tol));
    // The joint state is pure, so S(XY) = 0 exactly.
    return sa + sb;
}

double mutual_information(const DensityMatrix& rho,
                          const std::vector<std::string>& cut_a,
                          const Tolerances& tol) {
    require_subset(rho.layout, cut_a, "mutual_information");
    if (cut_a.empty() || cut_a.size() == rho.layout.size()) {
        throw InputError("mutual_information: cut must be a proper "
                         "bipartition");
    }
    const auto rest = rho.layout.complement(cut_a);
    const double sa = von_neumann_entropy(partial_trace(rho, cut_a, tol));
    const double sb = von_neumann_entropy(partial_trace(rho, rest, tol));
    const double sab = von_neumann_entropy(rho, tol);
    return sa + sb - sab;
}

}  // namespace eprb
