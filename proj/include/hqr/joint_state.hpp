// Copyright 2026 The hqr Authors
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

#ifndef HQR_JOINT_STATE_HPP
#define HQR_JOINT_STATE_HPP

#include <Eigen/Dense>
#include <array>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hqr/rng.hpp"
#include "hqr/scattering.hpp"

namespace hqr {

using Amplitudes = Eigen::VectorXcd;
using Operator = Eigen::MatrixXcd;

enum class SubsystemKind { atom, photon_polarization, path_mode };

/// A named two-level subsystem. labels[0] names |0>, labels[1] names |1>.
struct SubsystemDescriptor {
    std::string id;
    SubsystemKind kind = SubsystemKind::atom;
    std::array<std::string, 2> labels;

    /// |0> = |g->, |1> = |g+>.
    static SubsystemDescriptor atom(std::string id);
    /// |0> = |H>, |1> = |V>.
    static SubsystemDescriptor polarization(std::string id);
    static SubsystemDescriptor path(std::string id, std::string label0, std::string label1);

    /// Index of `label` in labels; throws std::invalid_argument if absent.
    int label_index(std::string_view label) const;

    bool operator==(const SubsystemDescriptor &) const = default;
};

enum class MeasurementBasis { computational, hadamard };

/// Bra of outcome `outcome` in `basis` ("+" is outcome 0, "-" outcome 1).
Eigen::Vector2cd basis_vector(MeasurementBasis basis, int outcome);

/// Pure, possibly unnormalized state over a list of two-level subsystems.
///
/// Amplitudes are big-endian in subsystem order: subsystem 0 is the most
/// significant bit of the amplitude index. The squared norm is the
/// probability of the branch the state describes.
class JointState {
   public:
    /// Throws std::invalid_argument on duplicate ids, a length other than
    /// 2^n, zero norm, or norm^2 > 1 + 1e-12.
    JointState(std::vector<SubsystemDescriptor> subsystems, Amplitudes amplitudes);

    static JointState basis(SubsystemDescriptor s, int value);
    static JointState single(SubsystemDescriptor s, complex a0, complex a1);

    std::size_t num_subsystems() const { return subsystems_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const std::vector<SubsystemDescriptor> &subsystems() const { return subsystems_; }
    const Amplitudes &amplitudes() const { return amps_; }

    bool has(std::string_view id) const;
    /// Position of `id` in the subsystem list; throws if unknown.
    std::size_t index_of(std::string_view id) const;
    std::vector<std::string> ids() const;

    /// Amplitude of the computational basis state with the given bit per
    /// subsystem (subsystem order).
    complex amplitude(std::initializer_list<int> bits) const;

    double norm2() const { return amps_.squaredNorm(); }
    double weight() const { return norm2(); }
    /// Throws std::domain_error on zero norm.
    JointState normalized() const;
    JointState scaled(complex factor) const;

    /// Applies an arbitrary 2^k x 2^k operator to the listed subsystems (first
    /// id is the most significant bit of the operator index). No unitarity check.
    JointState apply_operator(std::span<const std::string> ids, const Operator &op) const;
    JointState apply_operator(std::initializer_list<std::string> ids, const Operator &op) const;

    /// <b|_id |psi>: removes `id`, leaving the unnormalized remainder.
    JointState contract(std::string_view id, const Eigen::Vector2cd &bra_of) const;

    /// Replaces the descriptor of `id` (labels, kind, or the id itself).
    JointState relabeled(std::string_view id, SubsystemDescriptor replacement) const;

    /// Same state with subsystems reordered to `order` (a permutation of ids()).
    JointState reordered(std::span<const std::string> order) const;

    /// <this|other>; subsystem lists must match exactly.
    complex inner(const JointState &other) const;

   private:
    struct Unchecked {};
    JointState(Unchecked, std::vector<SubsystemDescriptor> subsystems, Amplitudes amplitudes);

    std::vector<SubsystemDescriptor> subsystems_;
    Amplitudes amps_;
};

/// Kronecker product in argument order. Throws on duplicate ids.
JointState compose(std::span<const JointState> states);
JointState compose(std::initializer_list<JointState> states);

/// Applies a unitary to k <= 2 subsystems. Throws std::invalid_argument if the
/// matrix is not unitary to 1e-12, has the wrong size, or an id is unknown.
JointState apply_local_unitary(const JointState &state, std::span<const std::string> ids, const Operator &u);
JointState apply_local_unitary(const JointState &state, std::initializer_list<std::string> ids,
                               const Operator &u);

struct MeasurementRecord {
    std::string subsystem;
    MeasurementBasis basis = MeasurementBasis::computational;
    int outcome = 0;
    /// Born probability relative to the parent's norm^2.
    double probability = 0.0;
};

struct MeasuredBranch {
    MeasurementRecord record;
    /// Collapsed and renormalized. When the subsystem was absorbed it is
    /// removed from the state.
    JointState state;
};

struct MeasureOptions {
    /// Remove the measured subsystem (detector absorption).
    bool absorb = false;
};

/// Enumerates both outcomes. Outcomes whose probability is below 1e-13 are
/// structural zeros and omitted. Throws std::domain_error on a zero-norm state.
std::vector<MeasuredBranch> measure(const JointState &state, std::string_view id, MeasurementBasis basis,
                                    MeasureOptions options = {});

/// Draws one outcome with the Born probabilities.
MeasuredBranch measure_sampled(const JointState &state, std::string_view id, MeasurementBasis basis,
                               TrialRng &rng, MeasureOptions options = {});

/// Weighted list of normalized pure states; the weight deficit below 1 is
/// accumulated loss probability.
class MixedEnsemble {
   public:
    struct Entry {
        double weight;
        JointState state;
    };

    /// Throws unless every weight is in (0, 1], every state normalized (1e-10),
    /// all states share the same subsystems, and the weights sum to <= 1 + 1e-12.
    explicit MixedEnsemble(std::vector<Entry> entries);

    const std::vector<Entry> &entries() const { return entries_; }
    double total_weight() const;

   private:
    std::vector<Entry> entries_;
};

/// |<ref|state>|^2 / <state|state>. Subsystem sets must agree (order may differ).
double fidelity(const JointState &state, const JointState &reference);
/// sum w_i |<ref|psi_i>|^2 / sum w_i.
double fidelity(const MixedEnsemble &ensemble, const JointState &reference);

/// Common single-subsystem gates in the (|0>, |1>) basis.
namespace gates {
Operator identity();
Operator pauli_x();
Operator pauli_z();
Operator hadamard();
/// Kronecker product; `a` acts on the more significant subsystems.
Operator kron(const Operator &a, const Operator &b);
}  // namespace gates

/// Bell states on two atoms (|0> = |g->): phi+- = (|00> +- |11>)/sqrt2,
/// psi+- = (|01> +- |10>)/sqrt2.
JointState bell_phi_plus(std::string a, std::string b);
JointState bell_phi_minus(std::string a, std::string b);
JointState bell_psi_plus(std::string a, std::string b);
JointState bell_psi_minus(std::string a, std::string b);

}  // namespace hqr

#endif  // HQR_JOINT_STATE_HPP
