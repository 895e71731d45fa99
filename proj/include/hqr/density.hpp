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

#ifndef HQR_DENSITY_HPP
#define HQR_DENSITY_HPP

#include <Eigen/Dense>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hqr/joint_state.hpp"

namespace hqr {

/// Unnormalized density matrix over the same subsystem registry as
/// JointState. The trace is the branch probability. Used as the exact
/// reference when validating branch enumeration.
class DensityMatrix {
   public:
    static constexpr std::size_t max_subsystems = 12;

    /// Throws std::invalid_argument on duplicate ids, more than 12 subsystems,
    /// a non-square or wrongly sized matrix, or a non-Hermitian matrix (1e-10).
    DensityMatrix(std::vector<SubsystemDescriptor> subsystems, Operator rho);

    static DensityMatrix from_pure(const JointState &state);
    /// sum_i w_i |psi_i><psi_i|.
    static DensityMatrix from_ensemble(const MixedEnsemble &ensemble);

    std::size_t num_subsystems() const { return subsystems_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
    const std::vector<SubsystemDescriptor> &subsystems() const { return subsystems_; }
    const Operator &matrix() const { return rho_; }

    bool has(std::string_view id) const;
    std::size_t index_of(std::string_view id) const;
    std::vector<std::string> ids() const;

    double weight() const { return rho_.trace().real(); }
    DensityMatrix normalized() const;
    /// Scales as the pure state c|psi> would: rho -> |c|^2 rho.
    DensityMatrix scaled(complex factor) const;

    /// rho -> O rho O^dagger on the listed subsystems.
    DensityMatrix apply_operator(std::span<const std::string> ids, const Operator &op) const;
    DensityMatrix apply_operator(std::initializer_list<std::string> ids, const Operator &op) const;

    /// <b|_id rho |b>_id with the subsystem removed.
    DensityMatrix contract(std::string_view id, const Eigen::Vector2cd &bra_of) const;
    DensityMatrix relabeled(std::string_view id, SubsystemDescriptor replacement) const;
    DensityMatrix reordered(std::span<const std::string> order) const;

    bool is_hermitian(double tol = 1e-10) const;
    bool is_positive_semidefinite(double tol = 1e-10) const;

   private:
    struct Unchecked {};
    DensityMatrix(Unchecked, std::vector<SubsystemDescriptor> subsystems, Operator rho);

    std::vector<SubsystemDescriptor> subsystems_;
    Operator rho_;
};

/// <ref|rho|ref> / tr(rho). Subsystem sets must agree (order may differ).
double fidelity(const DensityMatrix &rho, const JointState &reference);

/// Largest entrywise |a - b| after aligning b to a's subsystem order.
double max_entry_difference(const DensityMatrix &a, const DensityMatrix &b);

}  // namespace hqr

#endif  // HQR_DENSITY_HPP
