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

#ifndef HQR_OPTICS_HPP
#define HQR_OPTICS_HPP

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqr/joint_state.hpp"
#include "hqr/scattering.hpp"

// Linear-optical elements and the heralded scattering block. Every element is
// a template over the state type so the same circuit runs on JointState and
// on DensityMatrix.

namespace hqr {

/// The photon's polarization and spatial-mode subsystems.
struct PhotonModes {
    std::string pol;
    std::string path;
};

namespace optics_detail {

/// Permutation on (pol, path) sending |p, x> to |p, dest[p][x]>.
Operator routing_operator(const std::array<std::array<int, 2>, 2> &dest);

/// Throws std::invalid_argument if more than 1e-12 of the weight sits on
/// `label` of `path`.
template <class State>
void require_empty(const State &state, const SubsystemDescriptor &path, int label) {
    Eigen::Vector2cd bra = Eigen::Vector2cd::Zero();
    bra[label] = 1.0;
    if (state.contract(path.id, bra).weight() > 1e-12 * state.weight()) {
        throw std::invalid_argument("photon is not confined to the expected path of '" + path.id + "'");
    }
}

}  // namespace optics_detail

/// Lossless router: polarization p entering port x leaves on port dest[p][x]
/// of `out_path`. Each dest[p] must be a permutation of {0, 1}.
template <class State>
State route_photon(const State &state, const PhotonModes &modes, const std::array<std::array<int, 2>, 2> &dest,
                   SubsystemDescriptor out_path) {
    if (out_path.id != modes.path) {
        out_path.id = modes.path;
    }
    const State routed = state.apply_operator({modes.pol, modes.path}, optics_detail::routing_operator(dest));
    return routed.relabeled(modes.path, std::move(out_path));
}

/// Polarizing beam splitter, H transmitted and V reflected. The photon must
/// occupy `in_label`; its H part leaves on `out_h` and its V part on `out_v`
/// (labels of `out_path`). Polarization amplitudes are untouched.
template <class State>
State pbs_hv(const State &state, const PhotonModes &modes, const std::string &in_label, SubsystemDescriptor out_path,
             const std::string &out_h, const std::string &out_v) {
    const auto &path = state.subsystems()[state.index_of(modes.path)];
    const int in = path.label_index(in_label);
    optics_detail::require_empty(state, path, 1 - in);
    const int h = out_path.label_index(out_h);
    const int v = out_path.label_index(out_v);
    if (h == v) {
        throw std::invalid_argument("PBS outputs must be distinct paths");
    }
    std::array<std::array<int, 2>, 2> dest{};
    dest[0][in] = h;
    dest[0][1 - in] = 1 - h;
    dest[1][in] = v;
    dest[1][1 - in] = 1 - v;
    return route_photon(state, modes, dest, std::move(out_path));
}

/// Recombining PBS: H arriving on `h_port` and V arriving on `v_port` exit on
/// `out_label`; the complementary components exit on the other label.
template <class State>
State pbs_hv_combine(const State &state, const PhotonModes &modes, const std::string &h_port,
                     const std::string &v_port, SubsystemDescriptor out_path, const std::string &out_label) {
    const auto &path = state.subsystems()[state.index_of(modes.path)];
    const int h_in = path.label_index(h_port);
    const int v_in = path.label_index(v_port);
    if (h_in == v_in) {
        throw std::invalid_argument("PBS inputs must be distinct paths");
    }
    const int out = out_path.label_index(out_label);
    std::array<std::array<int, 2>, 2> dest{};
    dest[0][h_in] = out;
    dest[0][1 - h_in] = 1 - out;
    dest[1][v_in] = out;
    dest[1][1 - v_in] = 1 - out;
    return route_photon(state, modes, dest, std::move(out_path));
}

/// Polarizing beam splitter in the |+->, |-> basis.
template <class State>
State pbs_pm(const State &state, const PhotonModes &modes, const std::string &in_label, SubsystemDescriptor out_path,
             const std::string &out_plus, const std::string &out_minus) {
    const Operator h = gates::hadamard();
    const State rotated = state.apply_operator({modes.pol}, h);
    return pbs_hv(rotated, modes, in_label, std::move(out_path), out_plus, out_minus).apply_operator({modes.pol}, h);
}

/// Quarter-wave plate taking |H> to |R> = (|H>+|V>)/sqrt2 and |V> to
/// |L> = (|H>-|V>)/sqrt2. With this phase choice the plate is its own inverse.
Operator qwp_matrix();

template <class State>
State qwp(const State &state, const std::string &pol) {
    return state.apply_operator({pol}, qwp_matrix());
}

template <class State>
State qwp_inverse(const State &state, const std::string &pol) {
    return state.apply_operator({pol}, qwp_matrix().adjoint());
}

/// Half-wave plate exchanging |H> and |V>.
template <class State>
State half_wave_plate(const State &state, const std::string &pol) {
    return state.apply_operator({pol}, gates::pauli_x());
}

/// Transmit/reflect switch. `schedule` names, for each label of the incoming
/// path, the label of `out_path` it is sent to. No amplitude changes.
template <class State>
State tr_switch(const State &state, const std::string &path_id, const std::map<std::string, std::string> &schedule,
                SubsystemDescriptor out_path) {
    const auto &path = state.subsystems()[state.index_of(path_id)];
    std::array<int, 2> dest{};
    for (int k = 0; k < 2; ++k) {
        const auto it = schedule.find(path.labels[static_cast<std::size_t>(k)]);
        if (it == schedule.end()) {
            throw std::invalid_argument("time bin '" + path.labels[static_cast<std::size_t>(k)] + "' is not scheduled");
        }
        dest[static_cast<std::size_t>(k)] = out_path.label_index(it->second);
    }
    if (dest[0] == dest[1]) {
        throw std::invalid_argument("switch schedule sends both bins to one path");
    }
    out_path.id = path_id;
    const State routed = dest[0] == 0 ? state : state.apply_operator({path_id}, gates::pauli_x());
    return routed.relabeled(path_id, std::move(out_path));
}

enum class HeraldTag { success, herald_fail, loss };

template <class State>
struct HeraldBranch {
    HeraldTag tag = HeraldTag::success;
    double weight = 0.0;
    std::optional<State> state;
};

/// How a block placed on one arm of an interferometer treats the other arm.
enum class ArmCoupling {
    /// The other arm is filtered by the same reflection amplitude, so every
    /// success component carries an identical spectral factor.
    matched,
    /// Only the block's own arm scatters; the other arm passes untouched.
    own_arm,
};

/// Where a heralded block sits: its emitter, the photon polarization it acts
/// on and, optionally, the arm it occupies.
struct BlockSite {
    std::string atom;
    std::string pol;
    std::optional<std::string> path;
    int arm = 0;
    ArmCoupling coupling = ArmCoupling::matched;
};

namespace optics_detail {

/// Success operator on (atom, pol): r (|g+><g+| - |g-><g-|) (|V><H| + |H><V|).
Operator block_success_operator(complex r);
/// Success and herald-fail operators on (path, atom, pol) for a block on `arm`.
Operator armed_success_operator(complex r, int arm, ArmCoupling coupling);
Operator armed_fail_operator(complex t, int arm, ArmCoupling coupling);

template <class State>
void push_branch(std::vector<HeraldBranch<State>> &out, HeraldTag tag, State s) {
    const double w = s.weight();
    if (w > 0.0) {
        out.push_back({tag, w, std::move(s)});
    }
}

}  // namespace optics_detail

/// Three-way decomposition of a photon passing the heralded scattering
/// block: polarization-flipped success, unflipped herald-fail (amplitude t),
/// and loss. Zero-weight branches are omitted.
template <class State>
std::vector<HeraldBranch<State>> heralded_scatter_block(const State &state, const BlockSite &site,
                                                        const ScatterCoefficients &c) {
    std::vector<HeraldBranch<State>> out;
    double loss_weight = 0.0;
    if (!site.path) {
        optics_detail::push_branch(out, HeraldTag::success,
                                   state.apply_operator({site.atom, site.pol}, optics_detail::block_success_operator(c.r)));
        optics_detail::push_branch(out, HeraldTag::herald_fail, state.scaled(c.t));
        loss_weight = c.loss * state.weight();
    } else {
        const std::vector<std::string> ids{*site.path, site.atom, site.pol};
        optics_detail::push_branch(
            out, HeraldTag::success,
            state.apply_operator(ids, optics_detail::armed_success_operator(c.r, site.arm, site.coupling)));
        optics_detail::push_branch(
            out, HeraldTag::herald_fail,
            state.apply_operator(ids, optics_detail::armed_fail_operator(c.t, site.arm, site.coupling)));
        double exposed = state.weight();
        if (site.coupling == ArmCoupling::own_arm) {
            Eigen::Vector2cd bra = Eigen::Vector2cd::Zero();
            bra[site.arm] = 1.0;
            exposed = state.contract(*site.path, bra).weight();
        }
        loss_weight = c.loss * exposed;
    }
    if (loss_weight > 0.0) {
        out.push_back({HeraldTag::loss, loss_weight, std::nullopt});
    }
    return out;
}

template <class State>
std::vector<HeraldBranch<State>> heralded_scatter_block(const State &state, const BlockSite &site,
                                                        const EmitterParams &params) {
    return heralded_scatter_block(state, site, compute_coefficients(params));
}

/// Waveform corrector: a block whose emitter stays in |g->, sandwiched by
/// quarter-wave plates. Success multiplies the photon by -r Z_pol, so a
/// V-polarized photon picks up exactly the reflection amplitude r.
template <class State>
std::vector<HeraldBranch<State>> waveform_corrector(const State &state, const std::string &pol,
                                                    const ScatterCoefficients &c) {
    std::vector<HeraldBranch<State>> out;
    optics_detail::push_branch(out, HeraldTag::success, state.apply_operator({pol}, -c.r * gates::pauli_z()));
    optics_detail::push_branch(out, HeraldTag::herald_fail, state.scaled(c.t));
    const double loss_weight = c.loss * state.weight();
    if (loss_weight > 0.0) {
        out.push_back({HeraldTag::loss, loss_weight, std::nullopt});
    }
    return out;
}

/// Spectral form: success filters each bin by r(bin), herald-fail by t(bin),
/// and the loss weight is the remaining probability.
std::vector<HeraldBranch<SpectralWavepacket>> waveform_corrector(const SpectralWavepacket &wp,
                                                                 const EmitterParams &params);

}  // namespace hqr

#endif  // HQR_OPTICS_HPP
