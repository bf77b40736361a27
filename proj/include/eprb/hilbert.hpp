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

#ifndef EPRB_HILBERT_HPP
#define EPRB_HILBERT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "eprb/numerics.hpp"

namespace eprb {

/// Labeled multi-subsystem state algebra. Amplitudes are stored with the
/// first layout label as the most significant index: for a layout
/// [(A,dA),(B,dB)] the basis state |a>|b> sits at index a*dB + b, and
/// tensor products are plain Kronecker products in layout order.

struct Subsystem {
    std::string label;
    std::size_t dim = 0;
};

class SubsystemLayout {
  public:
    static constexpr std::size_t kDefaultMaxDim = 4096;

    SubsystemLayout() = default;
    /// Throws LabelClash on duplicate labels and InputError when the total
    /// dimension exceeds `max_dim` (desk-scale guard against runaway
    /// exponential state vectors).
    explicit SubsystemLayout(std::vector<Subsystem> parts,
                             std::size_t max_dim = kDefaultMaxDim);

    const std::vector<Subsystem>& parts() const { return parts_; }
    std::size_t size() const { return parts_.size(); }
    std::size_t total_dim() const { return total_; }

    bool has(const std::string& label) const;
    std::size_t position(const std::string& label) const;
    std::size_t dim_of(const std::string& label) const;
    /// Product of dimensions after position k (the index weight of part k).
    std::size_t stride(std::size_t position) const;

    std::vector<std::string> labels() const;
    /// All labels not in `subset`, in layout order.
    std::vector<std::string> complement(
        const std::vector<std::string>& subset) const;

    /// Flat amplitude offsets of a label subset (in the order given): entry
    /// s is the offset of the subset basis state with mixed-radix digits of
    /// s, first label most significant. The full index of a basis state is
    /// the sum of one offset from a subset and one from its complement.
    std::vector<std::size_t> offsets(
        const std::vector<std::string>& subset) const;

    bool operator==(const SubsystemLayout& other) const;

  private:
    std::vector<Subsystem> parts_;
    std::size_t total_ = 0;
};

struct StateVector {
    SubsystemLayout layout;
    CVec amplitudes;

    StateVector() = default;
    /// Validates normalization within the validation tolerance.
    StateVector(SubsystemLayout layout, CVec amplitudes,
                const Tolerances& tol = Tolerances{});

    double norm() const { return amplitudes.norm(); }
};

struct DensityMatrix {
    SubsystemLayout layout;
    CMat matrix;

    DensityMatrix() = default;
    /// Validates hermiticity, unit trace and positivity (after clamping).
    DensityMatrix(SubsystemLayout layout, CMat matrix,
                  const Tolerances& tol = Tolerances{});

    static DensityMatrix pure(const StateVector& psi);
};

struct SchmidtForm {
    RVec coefficients;  // sqrt(lambda_k), descending
    CMat basis_a;       // orthonormal columns on the cut side
    CMat basis_b;       // orthonormal columns on the complement
    std::vector<std::string> cut_labels;
};

/// Kronecker product of two states on disjoint label sets; the result
/// layout is the concatenation a-then-b.
StateVector tensor(const StateVector& a, const StateVector& b,
                   std::size_t max_dim = SubsystemLayout::kDefaultMaxDim);

/// The same state re-indexed so its subsystems appear in `order` (which
/// must be a permutation of the layout's labels).
StateVector reordered(const StateVector& state,
                      const std::vector<std::string>& order);

/// Applies a unitary to the listed subsystems (any subset, any order; the
/// order fixes the unitary's index convention) and the identity elsewhere.
StateVector apply_on(const StateVector& state,
                     const std::vector<std::string>& labels, const CMat& u,
                     const Tolerances& tol = Tolerances{});

/// Dense matrix of (U on `labels`) tensor identity, in the layout's basis.
CMat embedded_unitary(const SubsystemLayout& layout,
                      const std::vector<std::string>& labels, const CMat& u);

/// Embeds a Hermitian operator the same way (no unitarity check).
CMat embedded_operator(const SubsystemLayout& layout,
                       const std::vector<std::string>& labels, const CMat& op);

/// Applies an arbitrary operator on the listed subsystems to raw
/// amplitudes (no unitarity check; the result may be unnormalized, e.g.
/// after a projector).
CVec apply_operator_amps(const SubsystemLayout& layout, const CVec& amps,
                         const std::vector<std::string>& labels,
                         const CMat& op);

DensityMatrix partial_trace(const StateVector& state,
                            const std::vector<std::string>& keep,
                            const Tolerances& tol = Tolerances{});
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep,
                            const Tolerances& tol = Tolerances{});

/// Schmidt decomposition across the bipartition (cut_a | rest). Obtained
/// from the SVD of the amplitude matrix reshaped by the cut; coefficients
/// descending, both bases orthonormal, reconstruction within 1e-9.
SchmidtForm schmidt(const StateVector& state,
                    const std::vector<std::string>& cut_a,
                    const Tolerances& tol = Tolerances{});

/// Von Neumann entropy in bits, -sum lambda log2 lambda with 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho,
                           const Tolerances& tol = Tolerances{});

/// S(rho_X) + S(rho_Y) - S(rho_XY) in bits across (cut_a | rest).
double mutual_information(const StateVector& state,
                          const std::vector<std::string>& cut_a,
                          const Tolerances& tol = Tolerances{});
double mutual_information(const DensityMatrix& rho,
                          const std::vector<std::string>& cut_a,
                          const Tolerances& tol = Tolerances{});

}  // namespace eprb

#endif
