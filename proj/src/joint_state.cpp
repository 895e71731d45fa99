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

#include "hqr/joint_state.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "kernels.hpp"

namespace hqr {

namespace detail {

std::vector<std::size_t> positions_of(const std::vector<SubsystemDescriptor> &subsystems,
                                      std::span<const std::string> ids) {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (const auto &id : ids) {
        auto it = std::find_if(subsystems.begin(), subsystems.end(), [&](const auto &s) { return s.id == id; });
        if (it == subsystems.end()) {
            throw std::invalid_argument("unknown subsystem '" + id + "'");
        }
        out.push_back(static_cast<std::size_t>(it - subsystems.begin()));
    }
    return out;
}

void check_unique_ids(const std::vector<SubsystemDescriptor> &subsystems) {
    std::set<std::string> seen;
    for (const auto &s : subsystems) {
        if (!seen.insert(s.id).second) {
            throw std::invalid_argument("duplicate subsystem id '" + s.id + "'");
        }
    }
}

std::vector<std::size_t> order_permutation(const std::vector<SubsystemDescriptor> &subsystems,
                                           std::span<const std::string> order) {
    if (order.size() != subsystems.size()) {
        throw std::invalid_argument("reordering must list every subsystem exactly once");
    }
    auto perm = positions_of(subsystems, order);
    std::vector<std::size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("reordering lists a subsystem twice");
    }
    return perm;
}

}  // namespace detail

SubsystemDescriptor SubsystemDescriptor::atom(std::string id) {
    return {std::move(id), SubsystemKind::atom, {"g-", "g+"}};
}

SubsystemDescriptor SubsystemDescriptor::polarization(std::string id) {
    return {std::move(id), SubsystemKind::photon_polarization, {"H", "V"}};
}

SubsystemDescriptor SubsystemDescriptor::path(std::string id, std::string label0, std::string label1) {
    if (label0 == label1) {
        throw std::invalid_argument("path labels must differ");
    }
    return {std::move(id), SubsystemKind::path_mode, {std::move(label0), std::move(label1)}};
}

int SubsystemDescriptor::label_index(std::string_view label) const {
    for (int i = 0; i < 2; ++i) {
        if (labels[static_cast<std::size_t>(i)] == label) {
            return i;
        }
    }
    throw std::invalid_argument("subsystem '" + id + "' has no label '" + std::string(label) + "'");
}

Eigen::Vector2cd basis_vector(MeasurementBasis basis, int outcome) {
    if (outcome != 0 && outcome != 1) {
        throw std::invalid_argument("measurement outcome must be 0 or 1");
    }
    if (basis == MeasurementBasis::computational) {
        return outcome == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
    }
    const double s = 1.0 / std::sqrt(2.0);
    return outcome == 0 ? Eigen::Vector2cd(s, s) : Eigen::Vector2cd(s, -s);
}

JointState::JointState(Unchecked, std::vector<SubsystemDescriptor> subsystems, Amplitudes amplitudes)
    : subsystems_(std::move(subsystems)), amps_(std::move(amplitudes)) {}

JointState::JointState(std::vector<SubsystemDescriptor> subsystems, Amplitudes amplitudes)
    : subsystems_(std::move(subsystems)), amps_(std::move(amplitudes)) {
    detail::check_unique_ids(subsystems_);
    if (subsystems_.size() > 30) {
        throw std::invalid_argument("too many subsystems for a dense state");
    }
    if (static_cast<std::size_t>(amps_.size()) != (std::size_t{1} << subsystems_.size())) {
        throw std::invalid_argument("amplitude vector length must be 2^n");
    }
    const double n2 = norm2();
    if (!(n2 > 0.0)) {
        throw std::invalid_argument("joint state must have nonzero norm");
    }
    if (n2 > 1.0 + 1e-12) {
        throw std::invalid_argument("joint state norm^2 exceeds 1");
    }
}

JointState JointState::basis(SubsystemDescriptor s, int value) {
    if (value != 0 && value != 1) {
        throw std::invalid_argument("basis value must be 0 or 1");
    }
    Amplitudes a = Amplitudes::Zero(2);
    a[value] = 1.0;
    return JointState({std::move(s)}, std::move(a));
}

JointState JointState::single(SubsystemDescriptor s, complex a0, complex a1) {
    Amplitudes a(2);
    a << a0, a1;
    return JointState({std::move(s)}, std::move(a));
}

bool JointState::has(std::string_view id) const {
    return std::any_of(subsystems_.begin(), subsystems_.end(), [&](const auto &s) { return s.id == id; });
}

std::size_t JointState::index_of(std::string_view id) const {
    const std::string key(id);
    return detail::positions_of(subsystems_, std::span<const std::string>(&key, 1)).front();
}

std::vector<std::string> JointState::ids() const {
    std::vector<std::string> out;
    for (const auto &s : subsystems_) {
        out.push_back(s.id);
    }
    return out;
}

complex JointState::amplitude(std::initializer_list<int> bits) const {
    if (bits.size() != subsystems_.size()) {
        throw std::invalid_argument("amplitude lookup needs one bit per subsystem");
    }
    std::size_t index = 0;
    for (int b : bits) {
        index = (index << 1) | static_cast<std::size_t>(b & 1);
    }
    return amps_[static_cast<Eigen::Index>(index)];
}

JointState JointState::normalized() const {
    const double n2 = norm2();
    if (!(n2 > 0.0)) {
        throw std::domain_error("cannot normalize a zero-norm state");
    }
    return JointState(Unchecked{}, subsystems_, amps_ / std::sqrt(n2));
}

JointState JointState::scaled(complex factor) const { return JointState(Unchecked{}, subsystems_, amps_ * factor); }

JointState JointState::apply_operator(std::span<const std::string> ids, const Operator &op) const {
    const auto positions = detail::positions_of(subsystems_, ids);
    const auto m = static_cast<Eigen::Index>(std::size_t{1} << positions.size());
    if (op.rows() != m || op.cols() != m) {
        throw std::invalid_argument("operator size does not match the number of target subsystems");
    }
    const auto layout = detail::make_layout(subsystems_.size(), positions);
    Amplitudes out = amps_;
    detail::apply_op(out.data(), dim(), layout, op);
    return JointState(Unchecked{}, subsystems_, std::move(out));
}

JointState JointState::apply_operator(std::initializer_list<std::string> ids, const Operator &op) const {
    const std::vector<std::string> v(ids);
    return apply_operator(std::span<const std::string>(v), op);
}

JointState JointState::contract(std::string_view id, const Eigen::Vector2cd &bra_of) const {
    const std::size_t pos = index_of(id);
    const std::size_t n = subsystems_.size();
    const std::size_t bit = detail::bit_of(n, pos);
    Amplitudes out = Amplitudes::Zero(static_cast<Eigen::Index>(dim() / 2));
    for (std::size_t i = 0; i < dim() / 2; ++i) {
        complex acc(0.0, 0.0);
        for (int b = 0; b < 2; ++b) {
            acc += std::conj(bra_of[b]) * amps_[static_cast<Eigen::Index>(detail::insert_bit(i, bit, b))];
        }
        out[static_cast<Eigen::Index>(i)] = acc;
    }
    auto subs = subsystems_;
    subs.erase(subs.begin() + static_cast<std::ptrdiff_t>(pos));
    return JointState(Unchecked{}, std::move(subs), std::move(out));
}

JointState JointState::relabeled(std::string_view id, SubsystemDescriptor replacement) const {
    auto subs = subsystems_;
    subs[index_of(id)] = std::move(replacement);
    detail::check_unique_ids(subs);
    return JointState(Unchecked{}, std::move(subs), amps_);
}

JointState JointState::reordered(std::span<const std::string> order) const {
    const auto perm = detail::order_permutation(subsystems_, order);
    const std::size_t n = subsystems_.size();
    std::vector<SubsystemDescriptor> subs;
    for (std::size_t p : perm) {
        subs.push_back(subsystems_[p]);
    }
    Amplitudes out(amps_.size());
    for (std::size_t i = 0; i < dim(); ++i) {
        out[static_cast<Eigen::Index>(i)] = amps_[static_cast<Eigen::Index>(detail::permuted_index(i, n, perm))];
    }
    return JointState(Unchecked{}, std::move(subs), std::move(out));
}

complex JointState::inner(const JointState &other) const {
    if (subsystems_ != other.subsystems_) {
        throw std::invalid_argument("inner product needs identical subsystem lists");
    }
    return amps_.dot(other.amps_);  // Eigen's dot conjugates the left operand
}

JointState compose(std::span<const JointState> states) {
    if (states.empty()) {
        throw std::invalid_argument("compose needs at least one state");
    }
    std::vector<SubsystemDescriptor> subs;
    Amplitudes amps = Amplitudes::Ones(1);
    for (const auto &s : states) {
        subs.insert(subs.end(), s.subsystems().begin(), s.subsystems().end());
        Amplitudes next(amps.size() * s.amplitudes().size());
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            next.segment(i * s.amplitudes().size(), s.amplitudes().size()) = amps[i] * s.amplitudes();
        }
        amps = std::move(next);
    }
    return JointState(std::move(subs), std::move(amps));
}

JointState compose(std::initializer_list<JointState> states) {
    return compose(std::span<const JointState>(states.begin(), states.size()));
}

JointState apply_local_unitary(const JointState &state, std::span<const std::string> ids, const Operator &u) {
    if (ids.empty() || ids.size() > 2) {
        throw std::invalid_argument("local unitaries act on one or two subsystems");
    }
    const auto m = static_cast<Eigen::Index>(std::size_t{1} << ids.size());
    if (u.rows() != m || u.cols() != m) {
        throw std::invalid_argument("unitary size does not match the number of target subsystems");
    }
    if (!(u.adjoint() * u).isIdentity(1e-12)) {
        throw std::invalid_argument("matrix is not unitary");
    }
    return state.apply_operator(ids, u);
}

JointState apply_local_unitary(const JointState &state, std::initializer_list<std::string> ids, const Operator &u) {
    const std::vector<std::string> v(ids);
    return apply_local_unitary(state, std::span<const std::string>(v), u);
}

namespace {

constexpr double kStructuralZero = 1e-13;

MeasuredBranch collapse(const JointState &state, std::string_view id, MeasurementBasis basis, int outcome,
                        double parent_norm2, MeasureOptions options) {
    const auto bra = basis_vector(basis, outcome);
    JointState rest = state.contract(id, bra);
    const double p = rest.norm2() / parent_norm2;
    MeasurementRecord record{std::string(id), basis, outcome, p};
    if (options.absorb) {
        return {record, rest.normalized()};
    }
    // Re-insert the subsystem in its collapsed basis state at its old position.
    const std::size_t pos = state.index_of(id);
    std::vector<std::string> order = rest.ids();
    JointState collapsed = compose({JointState::single(state.subsystems()[pos], bra[0], bra[1]), rest.normalized()});
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(pos), std::string(id));
    return {record, collapsed.reordered(order)};
}

}  // namespace

std::vector<MeasuredBranch> measure(const JointState &state, std::string_view id, MeasurementBasis basis,
                                    MeasureOptions options) {
    const double n2 = state.norm2();
    if (!(n2 > 0.0)) {
        throw std::domain_error("cannot measure a zero-norm state");
    }
    state.index_of(id);
    std::vector<MeasuredBranch> out;
    for (int outcome = 0; outcome < 2; ++outcome) {
        const double p = state.contract(id, basis_vector(basis, outcome)).norm2() / n2;
        if (p < kStructuralZero) {
            continue;
        }
        out.push_back(collapse(state, id, basis, outcome, n2, options));
    }
    return out;
}

MeasuredBranch measure_sampled(const JointState &state, std::string_view id, MeasurementBasis basis,
                               TrialRng &rng, MeasureOptions options) {
    const double n2 = state.norm2();
    if (!(n2 > 0.0)) {
        throw std::domain_error("cannot measure a zero-norm state");
    }
    const double p0 = state.contract(id, basis_vector(basis, 0)).norm2() / n2;
    const int outcome = rng.uniform() < p0 ? 0 : 1;
    return collapse(state, id, basis, outcome, n2, options);
}

MixedEnsemble::MixedEnsemble(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw std::invalid_argument("ensemble needs at least one branch");
    }
    for (const auto &e : entries_) {
        if (!(e.weight > 0.0) || e.weight > 1.0) {
            throw std::invalid_argument("ensemble weights must lie in (0, 1]");
        }
        if (std::abs(e.state.norm2() - 1.0) > 1e-10) {
            throw std::invalid_argument("ensemble states must be normalized");
        }
        if (e.state.subsystems() != entries_.front().state.subsystems()) {
            throw std::invalid_argument("ensemble states must share subsystems");
        }
    }
    if (total_weight() > 1.0 + 1e-12) {
        throw std::invalid_argument("ensemble weights sum above 1");
    }
}

double MixedEnsemble::total_weight() const {
    double s = 0.0;
    for (const auto &e : entries_) {
        s += e.weight;
    }
    return s;
}

double fidelity(const JointState &state, const JointState &reference) {
    const double n2 = state.norm2();
    if (!(n2 > 0.0)) {
        throw std::domain_error("fidelity of a zero-norm state");
    }
    const auto ids = state.ids();
    auto ref_ids = reference.ids();
    if (ids.size() != ref_ids.size() || !std::is_permutation(ids.begin(), ids.end(), ref_ids.begin())) {
        throw std::invalid_argument("fidelity needs matching subsystem sets");
    }
    const JointState aligned = reference.reordered(ids);
    if (aligned.subsystems() != state.subsystems()) {
        throw std::invalid_argument("fidelity needs matching subsystem descriptors");
    }
    return std::norm(aligned.inner(state)) / (n2 * aligned.norm2());
}

double fidelity(const MixedEnsemble &ensemble, const JointState &reference) {
    double acc = 0.0;
    for (const auto &e : ensemble.entries()) {
        acc += e.weight * fidelity(e.state, reference);
    }
    return acc / ensemble.total_weight();
}

namespace gates {

Operator identity() { return Operator::Identity(2, 2); }

Operator pauli_x() {
    Operator m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Operator pauli_z() {
    Operator m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Operator hadamard() {
    Operator m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

Operator kron(const Operator &a, const Operator &b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace gates

namespace {

JointState bell(std::string a, std::string b, int first, int second, double sign) {
    Amplitudes amps = Amplitudes::Zero(4);
    const double s = 1.0 / std::sqrt(2.0);
    amps[first] = s;
    amps[second] = sign * s;
    return JointState({SubsystemDescriptor::atom(std::move(a)), SubsystemDescriptor::atom(std::move(b))},
                      std::move(amps));
}

}  // namespace

JointState bell_phi_plus(std::string a, std::string b) { return bell(std::move(a), std::move(b), 0, 3, 1.0); }
JointState bell_phi_minus(std::string a, std::string b) { return bell(std::move(a), std::move(b), 0, 3, -1.0); }
JointState bell_psi_plus(std::string a, std::string b) { return bell(std::move(a), std::move(b), 1, 2, 1.0); }
JointState bell_psi_minus(std::string a, std::string b) { return bell(std::move(a), std::move(b), 1, 2, -1.0); }

}  // namespace hqr
