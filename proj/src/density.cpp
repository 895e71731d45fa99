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

#include "hqr/density.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <stdexcept>

#include "kernels.hpp"

namespace hqr {

namespace {

void check_size(std::size_t n) {
    if (n > DensityMatrix::max_subsystems) {
        throw std::invalid_argument("density matrix limited to 12 subsystems");
    }
}

}  // namespace

DensityMatrix::DensityMatrix(Unchecked, std::vector<SubsystemDescriptor> subsystems, Operator rho)
    : subsystems_(std::move(subsystems)), rho_(std::move(rho)) {}

DensityMatrix::DensityMatrix(std::vector<SubsystemDescriptor> subsystems, Operator rho)
    : subsystems_(std::move(subsystems)), rho_(std::move(rho)) {
    check_size(subsystems_.size());
    detail::check_unique_ids(subsystems_);
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << subsystems_.size());
    if (rho_.rows() != d || rho_.cols() != d) {
        throw std::invalid_argument("density matrix must be 2^n x 2^n");
    }
    if (!is_hermitian()) {
        throw std::invalid_argument("density matrix must be Hermitian");
    }
}

DensityMatrix DensityMatrix::from_pure(const JointState &state) {
    check_size(state.num_subsystems());
    const auto &a = state.amplitudes();
    return DensityMatrix(Unchecked{}, state.subsystems(), a * a.adjoint());
}

DensityMatrix DensityMatrix::from_ensemble(const MixedEnsemble &ensemble) {
    const auto &first = ensemble.entries().front().state;
    check_size(first.num_subsystems());
    Operator rho = Operator::Zero(static_cast<Eigen::Index>(first.dim()), static_cast<Eigen::Index>(first.dim()));
    for (const auto &e : ensemble.entries()) {
        rho += e.weight * e.state.amplitudes() * e.state.amplitudes().adjoint();
    }
    return DensityMatrix(Unchecked{}, first.subsystems(), std::move(rho));
}

bool DensityMatrix::has(std::string_view id) const {
    return std::any_of(subsystems_.begin(), subsystems_.end(), [&](const auto &s) { return s.id == id; });
}

std::size_t DensityMatrix::index_of(std::string_view id) const {
    const std::string key(id);
    return detail::positions_of(subsystems_, std::span<const std::string>(&key, 1)).front();
}

std::vector<std::string> DensityMatrix::ids() const {
    std::vector<std::string> out;
    for (const auto &s : subsystems_) {
        out.push_back(s.id);
    }
    return out;
}

DensityMatrix DensityMatrix::normalized() const {
    const double w = weight();
    if (!(w > 0.0)) {
        throw std::domain_error("cannot normalize a zero-trace density matrix");
    }
    return DensityMatrix(Unchecked{}, subsystems_, rho_ / w);
}

DensityMatrix DensityMatrix::scaled(complex factor) const {
    return DensityMatrix(Unchecked{}, subsystems_, rho_ * std::norm(factor));
}

DensityMatrix DensityMatrix::apply_operator(std::span<const std::string> ids, const Operator &op) const {
    const auto positions = detail::positions_of(subsystems_, ids);
    const auto m = static_cast<Eigen::Index>(std::size_t{1} << positions.size());
    if (op.rows() != m || op.cols() != m) {
        throw std::invalid_argument("operator size does not match the number of target subsystems");
    }
    const auto layout = detail::make_layout(subsystems_.size(), positions);
    const std::size_t d = dim();
    // O rho on every column, then O (O rho)^dagger = O rho O^dagger.
    Operator left = rho_;
    for (std::size_t j = 0; j < d; ++j) {
        detail::apply_op(left.data() + j * d, d, layout, op);
    }
    Operator out = left.adjoint();
    for (std::size_t j = 0; j < d; ++j) {
        detail::apply_op(out.data() + j * d, d, layout, op);
    }
    return DensityMatrix(Unchecked{}, subsystems_, std::move(out));
}

DensityMatrix DensityMatrix::apply_operator(std::initializer_list<std::string> ids, const Operator &op) const {
    const std::vector<std::string> v(ids);
    return apply_operator(std::span<const std::string>(v), op);
}

DensityMatrix DensityMatrix::contract(std::string_view id, const Eigen::Vector2cd &bra_of) const {
    const std::size_t pos = index_of(id);
    const std::size_t bit = detail::bit_of(subsystems_.size(), pos);
    const std::size_t half = dim() / 2;
    Operator out = Operator::Zero(static_cast<Eigen::Index>(half), static_cast<Eigen::Index>(half));
    for (std::size_t j = 0; j < half; ++j) {
        for (std::size_t i = 0; i < half; ++i) {
            complex acc(0.0, 0.0);
            for (int a = 0; a < 2; ++a) {
                const auto row = static_cast<Eigen::Index>(detail::insert_bit(i, bit, a));
                for (int b = 0; b < 2; ++b) {
                    const auto col = static_cast<Eigen::Index>(detail::insert_bit(j, bit, b));
                    acc += std::conj(bra_of[a]) * rho_(row, col) * bra_of[b];
                }
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    auto subs = subsystems_;
    subs.erase(subs.begin() + static_cast<std::ptrdiff_t>(pos));
    return DensityMatrix(Unchecked{}, std::move(subs), std::move(out));
}

DensityMatrix DensityMatrix::relabeled(std::string_view id, SubsystemDescriptor replacement) const {
    auto subs = subsystems_;
    subs[index_of(id)] = std::move(replacement);
    detail::check_unique_ids(subs);
    return DensityMatrix(Unchecked{}, std::move(subs), rho_);
}

DensityMatrix DensityMatrix::reordered(std::span<const std::string> order) const {
    const auto perm = detail::order_permutation(subsystems_, order);
    const std::size_t n = subsystems_.size();
    std::vector<SubsystemDescriptor> subs;
    for (std::size_t p : perm) {
        subs.push_back(subsystems_[p]);
    }
    const std::size_t d = dim();
    std::vector<std::size_t> old(d);
    for (std::size_t i = 0; i < d; ++i) {
        old[i] = detail::permuted_index(i, n, perm);
    }
    Operator out(rho_.rows(), rho_.cols());
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rho_(static_cast<Eigen::Index>(old[i]), static_cast<Eigen::Index>(old[j]));
        }
    }
    return DensityMatrix(Unchecked{}, std::move(subs), std::move(out));
}

bool DensityMatrix::is_hermitian(double tol) const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() <= tol; }

bool DensityMatrix::is_positive_semidefinite(double tol) const {
    if (!is_hermitian(tol)) {
        return false;
    }
    const Operator h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

double fidelity(const DensityMatrix &rho, const JointState &reference) {
    const double w = rho.weight();
    if (!(w > 0.0)) {
        throw std::domain_error("fidelity of a zero-trace density matrix");
    }
    const auto ids = rho.ids();
    const auto ref_ids = reference.ids();
    if (ids.size() != ref_ids.size() || !std::is_permutation(ids.begin(), ids.end(), ref_ids.begin())) {
        throw std::invalid_argument("fidelity needs matching subsystem sets");
    }
    const JointState aligned = reference.reordered(ids);
    if (aligned.subsystems() != rho.subsystems()) {
        throw std::invalid_argument("fidelity needs matching subsystem descriptors");
    }
    const auto &v = aligned.amplitudes();
    return (v.adjoint() * rho.matrix() * v)(0, 0).real() / (w * v.squaredNorm());
}

double max_entry_difference(const DensityMatrix &a, const DensityMatrix &b) {
    const auto ids = a.ids();
    const auto b_ids = b.ids();
    if (ids.size() != b_ids.size() || !std::is_permutation(ids.begin(), ids.end(), b_ids.begin())) {
        throw std::invalid_argument("density matrices cover different subsystems");
    }
    const DensityMatrix aligned = b.reordered(ids);
    return (a.matrix() - aligned.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace hqr
