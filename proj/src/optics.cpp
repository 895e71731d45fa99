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

#include "hqr/optics.hpp"

#include <cmath>

namespace hqr {

namespace optics_detail {

Operator routing_operator(const std::array<std::array<int, 2>, 2> &dest) {
    Operator op = Operator::Zero(4, 4);
    for (int p = 0; p < 2; ++p) {
        const auto &d = dest[static_cast<std::size_t>(p)];
        if (d[0] == d[1] || d[0] < 0 || d[0] > 1 || d[1] < 0 || d[1] > 1) {
            throw std::invalid_argument("photon routing must be a permutation of the two ports");
        }
        for (int x = 0; x < 2; ++x) {
            op(2 * p + d[static_cast<std::size_t>(x)], 2 * p + x) = 1.0;
        }
    }
    return op;
}

Operator block_success_operator(complex r) { return -r * gates::kron(gates::pauli_z(), gates::pauli_x()); }

namespace {

Operator arm_projector(int arm) {
    if (arm != 0 && arm != 1) {
        throw std::invalid_argument("arm index must be 0 or 1");
    }
    Operator p = Operator::Zero(2, 2);
    p(arm, arm) = 1.0;
    return p;
}

}  // namespace

Operator armed_success_operator(complex r, int arm, ArmCoupling coupling) {
    const Operator own = arm_projector(arm);
    const Operator other = arm_projector(1 - arm);
    const complex passive = coupling == ArmCoupling::matched ? -r : complex(1.0, 0.0);
    return gates::kron(own, block_success_operator(r)) + passive * gates::kron(other, Operator::Identity(4, 4));
}

Operator armed_fail_operator(complex t, int arm, ArmCoupling coupling) {
    if (coupling == ArmCoupling::matched) {
        arm_projector(arm);
        return t * Operator::Identity(8, 8);
    }
    return t * gates::kron(arm_projector(arm), Operator::Identity(4, 4));
}

}  // namespace optics_detail

Operator qwp_matrix() { return gates::hadamard(); }

std::vector<HeraldBranch<SpectralWavepacket>> waveform_corrector(const SpectralWavepacket &wp,
                                                                 const EmitterParams &params) {
    std::vector<HeraldBranch<SpectralWavepacket>> out;
    auto reflected = filter_wavepacket(wp, params, ScatterChannel::reflected);
    auto transmitted = filter_wavepacket(wp, params, ScatterChannel::transmitted);
    double loss = 0.0;
    for (const auto &b : wp.bins()) {
        loss += std::norm(b.amplitude) * compute_coefficients(params.shifted(b.detuning)).loss;
    }
    const double wr = reflected.norm2();
    const double wt = transmitted.norm2();
    if (wr > 0.0) {
        out.push_back({HeraldTag::success, wr, std::move(reflected)});
    }
    if (wt > 0.0) {
        out.push_back({HeraldTag::herald_fail, wt, std::move(transmitted)});
    }
    if (loss > 0.0) {
        out.push_back({HeraldTag::loss, loss, std::nullopt});
    }
    return out;
}

}  // namespace hqr
