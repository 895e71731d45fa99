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

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace hqr {
namespace {

using testing::distance_up_to_phase;
using testing::state_from;

const double kHalf = 1.0 / std::sqrt(2.0);
const PhotonModes kModes{"p", "x"};

SubsystemDescriptor pol() { return SubsystemDescriptor::polarization("p"); }
SubsystemDescriptor in_path() { return SubsystemDescriptor::path("x", "in", "open"); }

JointState photon(complex h, complex v, int path = 0) {
    return compose({JointState::single(pol(), h, v), JointState::basis(in_path(), path)});
}

double weight_on(const JointState &s, const std::string &path_id, int label) {
    Eigen::Vector2cd bra = Eigen::Vector2cd::Zero();
    bra[label] = 1.0;
    return s.contract(path_id, bra).weight();
}

double total_weight(const std::vector<HeraldBranch<JointState>> &branches) {
    double w = 0.0;
    for (const auto &b : branches) {
        w += b.weight;
    }
    return w;
}

const HeraldBranch<JointState> *find_tag(const std::vector<HeraldBranch<JointState>> &branches, HeraldTag tag) {
    for (const auto &b : branches) {
        if (b.tag == tag) {
            return &b;
        }
    }
    return nullptr;
}

TEST(PolarizingSplitter, HorizontalGoesToHorizontalPort) {
    const auto out = pbs_hv(photon(1.0, 0.0), kModes, "in", SubsystemDescriptor::path("x", "h", "v"), "h", "v");
    EXPECT_NEAR(weight_on(out, "x", 0), 1.0, 1e-15);
    EXPECT_EQ(out.subsystems()[out.index_of("x")].labels[0], "h");
}

TEST(PolarizingSplitter, DiagonalSplitsEvenly) {
    const auto out = pbs_hv(photon(kHalf, kHalf), kModes, "in", SubsystemDescriptor::path("x", "h", "v"), "h", "v");
    EXPECT_NEAR(weight_on(out, "x", 0), 0.5, 1e-15);
    EXPECT_NEAR(weight_on(out, "x", 1), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({1, 1}) - kHalf), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({0, 0}) - kHalf), 0.0, 1e-15);
}

TEST(PolarizingSplitter, SplitThenRecombineIsIdentity) {
    const auto in = photon(complex(0.3, 0.4), complex(0.0, std::sqrt(0.75)));
    const auto split = pbs_hv(in, kModes, "in", SubsystemDescriptor::path("x", "v", "h"), "h", "v");
    const auto back = pbs_hv_combine(split, kModes, "h", "v", in_path(), "in");
    EXPECT_EQ(back.subsystems(), in.subsystems());
    EXPECT_LT((back.amplitudes() - in.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PolarizingSplitter, RejectsPhotonOffInputPath) {
    EXPECT_THROW(pbs_hv(photon(1.0, 0.0, 1), kModes, "in", SubsystemDescriptor::path("x", "h", "v"), "h", "v"),
                 std::invalid_argument);
}

TEST(DiagonalSplitter, PlusIsTransmittedWhole) {
    const auto out = pbs_pm(photon(kHalf, kHalf), kModes, "in", SubsystemDescriptor::path("x", "+", "-"), "+", "-");
    EXPECT_NEAR(weight_on(out, "x", 0), 1.0, 1e-15);
    EXPECT_LT(distance_up_to_phase(out.contract("x", Eigen::Vector2cd(1.0, 0.0)),
                                   JointState::single(pol(), kHalf, kHalf)),
              1e-15);
}

TEST(DiagonalSplitter, HorizontalSplitsEvenly) {
    const auto out = pbs_pm(photon(1.0, 0.0), kModes, "in", SubsystemDescriptor::path("x", "+", "-"), "+", "-");
    EXPECT_NEAR(weight_on(out, "x", 0), 0.5, 1e-15);
    EXPECT_NEAR(weight_on(out, "x", 1), 0.5, 1e-15);
}

TEST(QuarterWavePlate, VerticalToLeftCircular) {
    const auto out = qwp(JointState::basis(pol(), 1), "p");
    EXPECT_NEAR(std::abs(out.amplitude({0}) - kHalf), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({1}) + kHalf), 0.0, 1e-15);
}

TEST(QuarterWavePlate, RightCircularToHorizontal) {
    const auto out = qwp(JointState::single(pol(), kHalf, kHalf), "p");
    EXPECT_LT(distance_up_to_phase(out, JointState::basis(pol(), 0)), 1e-15);
}

TEST(QuarterWavePlate, InverseUndoes) {
    const auto in = JointState::single(pol(), complex(0.6, 0.0), complex(0.0, 0.8));
    const auto out = qwp_inverse(qwp(in, "p"), "p");
    EXPECT_LT((out.amplitudes() - in.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
    const Operator q = qwp_matrix();
    EXPECT_LT((q * q.adjoint() - Operator::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Switch, RoutesBinsToConfiguredPaths) {
    const auto bins = SubsystemDescriptor::path("x", "S", "L");
    const auto in = compose({JointState::basis(pol(), 1), JointState::single(bins, 0.6, 0.8)});
    const auto out = tr_switch(in, "x", {{"S", "ref"}, {"L", "atom"}}, SubsystemDescriptor::path("x", "ref", "atom"));
    EXPECT_NEAR(std::abs(out.amplitude({1, 0}) - 0.6), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({1, 1}) - 0.8), 0.0, 1e-15);

    const auto crossed = tr_switch(in, "x", {{"S", "b"}, {"L", "a"}}, SubsystemDescriptor::path("x", "a", "b"));
    EXPECT_NEAR(std::abs(crossed.amplitude({1, 0}) - 0.8), 0.0, 1e-15);
}

TEST(Switch, IdentityAndDoubleSwap) {
    const auto bins = SubsystemDescriptor::path("x", "S", "L");
    const auto in = compose({JointState::single(pol(), 0.6, 0.8), JointState::single(bins, kHalf, complex(0, kHalf))});
    const auto same = tr_switch(in, "x", {{"S", "S"}, {"L", "L"}}, bins);
    EXPECT_EQ(same.amplitudes(), in.amplitudes());
    const std::map<std::string, std::string> swap{{"S", "L"}, {"L", "S"}};
    const auto twice = tr_switch(tr_switch(in, "x", swap, bins), "x", swap, bins);
    EXPECT_EQ(twice.amplitudes(), in.amplitudes());
}

TEST(Switch, RejectsUnscheduledBin) {
    const auto in = compose({JointState::basis(pol(), 1), JointState::basis(SubsystemDescriptor::path("x", "S", "L"), 0)});
    EXPECT_THROW(tr_switch(in, "x", {{"S", "ref"}}, SubsystemDescriptor::path("x", "ref", "atom")),
                 std::invalid_argument);
}

JointState atom_and_photon(complex g_minus, complex g_plus, int polarization) {
    return compose({JointState::single(SubsystemDescriptor::atom("a"), g_minus, g_plus), JointState::basis(pol(), polarization)});
}

const BlockSite kSite{"a", "p", std::nullopt, 0, ArmCoupling::matched};

TEST(ScatterBlock, GroundMinusHorizontalFlipsToVertical) {
    const auto branches = heralded_scatter_block(atom_and_photon(1.0, 0.0, 0), kSite, {PurcellFactor::infinite(), 0.0});
    ASSERT_EQ(branches.size(), 1U);
    EXPECT_EQ(branches[0].tag, HeraldTag::success);
    EXPECT_NEAR(branches[0].weight, 1.0, 1e-15);
    EXPECT_NEAR(std::abs(branches[0].state->amplitude({0, 1}) - 1.0), 0.0, 1e-15);
}

TEST(ScatterBlock, SuperposedAtomPicksUpRelativeSign) {
    const auto branches =
        heralded_scatter_block(atom_and_photon(kHalf, kHalf, 0), kSite, {PurcellFactor::infinite(), 0.0});
    const auto *s = find_tag(branches, HeraldTag::success);
    ASSERT_NE(s, nullptr);
    EXPECT_NEAR(s->weight, 1.0, 1e-15);
    const auto expected = compose({JointState::single(SubsystemDescriptor::atom("a"), -kHalf, kHalf),
                                   JointState::basis(pol(), 1)});
    EXPECT_LT(distance_up_to_phase(*s->state, expected), 1e-15);
}

TEST(ScatterBlock, UnitPurcellWeights) {
    for (int atom = 0; atom < 2; ++atom) {
        const auto branches = heralded_scatter_block(atom_and_photon(atom == 0, atom == 1, 0), kSite,
                                                     {PurcellFactor(1.0), 0.0});
        EXPECT_NEAR(find_tag(branches, HeraldTag::success)->weight, 0.25, 1e-15);
        EXPECT_NEAR(find_tag(branches, HeraldTag::herald_fail)->weight, 0.25, 1e-15);
        EXPECT_NEAR(find_tag(branches, HeraldTag::loss)->weight, 0.5, 1e-15);
        EXPECT_FALSE(find_tag(branches, HeraldTag::loss)->state.has_value());
    }
}

// Literal sign structure for the four (atom, polarization) inputs, with a
// generic complex r.
TEST(ScatterBlock, SignStructureForAllBasisInputs) {
    const EmitterParams params(PurcellFactor(63.1), 0.1);
    const complex r = compute_coefficients(params).r;
    const complex t = compute_coefficients(params).t;
    for (int atom = 0; atom < 2; ++atom) {
        for (int p = 0; p < 2; ++p) {
            const auto branches = heralded_scatter_block(atom_and_photon(atom == 0, atom == 1, p), kSite, params);
            const auto &succ = *find_tag(branches, HeraldTag::success)->state;
            const complex expected = atom == 0 ? -r : r;
            EXPECT_NEAR(std::abs(succ.amplitude({atom, 1 - p}) - expected), 0.0, 1e-15);
            EXPECT_NEAR(std::abs(succ.amplitude({atom, p})), 0.0, 1e-15);
            const auto &fail = *find_tag(branches, HeraldTag::herald_fail)->state;
            EXPECT_NEAR(std::abs(fail.amplitude({atom, p}) - t), 0.0, 1e-15);
            EXPECT_NEAR(std::abs(fail.amplitude({atom, 1 - p})), 0.0, 1e-15);
        }
    }
}

TEST(ScatterBlock, PerfectMirrorSignsOnResonance) {
    const EmitterParams params(PurcellFactor::infinite(), 0.0);
    // (atom, input pol) -> amplitude on the flipped polarization.
    const double expected[2][2] = {{1.0, 1.0}, {-1.0, -1.0}};
    for (int atom = 0; atom < 2; ++atom) {
        for (int p = 0; p < 2; ++p) {
            const auto branches = heralded_scatter_block(atom_and_photon(atom == 0, atom == 1, p), kSite, params);
            ASSERT_EQ(branches.size(), 1U);
            EXPECT_NEAR(std::abs(branches[0].state->amplitude({atom, 1 - p}) - expected[atom][p]), 0.0, 1e-15);
        }
    }
}

TEST(ScatterBlock, BranchWeightsCloseOnGrid) {
    const auto in = compose({JointState::single(SubsystemDescriptor::atom("a"), complex(0.3, 0.1), complex(0.5, -0.2)),
                             JointState::single(pol(), complex(0.0, 0.6), 0.8)})
                        .scaled(std::sqrt(0.6 / 0.39));
    for (double p : {0.5, 1.0, 7.0, 63.1, 1e4}) {
        for (double d = -0.5; d <= 0.5; d += 0.125) {
            const auto branches = heralded_scatter_block(in, kSite, {PurcellFactor(p), d});
            EXPECT_NEAR(total_weight(branches), in.weight(), 1e-12);
        }
    }
}

TEST(ScatterBlock, SuccessFlipsAndFailKeepsPolarization) {
    for (int p = 0; p < 2; ++p) {
        const auto in = compose({JointState::single(SubsystemDescriptor::atom("a"), 0.6, 0.8), JointState::basis(pol(), p)});
        const auto branches = heralded_scatter_block(in, kSite, {PurcellFactor(3.0), 0.2});
        Eigen::Vector2cd bra = Eigen::Vector2cd::Zero();
        bra[p] = 1.0;
        EXPECT_NEAR(find_tag(branches, HeraldTag::success)->state->contract("p", bra).weight(), 0.0, 1e-30);
        bra = Eigen::Vector2cd::Zero();
        bra[1 - p] = 1.0;
        EXPECT_NEAR(find_tag(branches, HeraldTag::herald_fail)->state->contract("p", bra).weight(), 0.0, 1e-30);
    }
}

// Builds the block from its interior: a 50:50 splitter feeding both sides of
// the emitter, whose action is diagonal in the circular basis, then the same
// splitter on the way back.
TEST(ScatterBlockInterior, DarkPortIsExtinctAndBrightPortMatchesBlock) {
    const Operator to_linear = gates::hadamard();  // columns R, L in (H, V)
    const Operator id2 = Operator::Identity(2, 2);
    for (double p : {0.7, 5.0, 63.1}) {
        for (double d : {0.0, 0.1, -0.3}) {
            const auto c = compute_coefficients({PurcellFactor(p), d});
            // Transmitted and reflected parts in the circular basis, atom-major:
            // g- couples to L, g+ couples to R.
            Operator trans_c = Operator::Zero(4, 4);
            Operator refl_c = Operator::Zero(4, 4);
            trans_c.diagonal() << 1.0, c.t, c.t, 1.0;
            refl_c.diagonal() << 0.0, c.r, c.r, 0.0;
            const Operator basis = gates::kron(id2, to_linear);
            const Operator trans = basis * trans_c * basis.adjoint();
            const Operator refl = basis * refl_c * basis.adjoint();
            const Operator single = trans + refl;

            for (int k = 0; k < 4; ++k) {
                Eigen::VectorXcd in = Eigen::VectorXcd::Zero(4);
                in[k] = 1.0;
                const Eigen::VectorXcd arm3 = in * kHalf;
                const Eigen::VectorXcd arm4 = in * kHalf;
                const Eigen::VectorXcd back3 = refl * arm3 + trans * arm4;
                const Eigen::VectorXcd back4 = refl * arm4 + trans * arm3;
                const Eigen::VectorXcd port1 = (back3 + back4) * kHalf;
                const Eigen::VectorXcd port2 = (back3 - back4) * kHalf;
                EXPECT_LT(port2.cwiseAbs().maxCoeff(), 1e-12);
                EXPECT_LT((port1 - single * in).cwiseAbs().maxCoeff(), 1e-15);
            }
            // The flipped-polarization part of the bright port is the success
            // operator; the unflipped part is t times the identity.
            Operator flipped = Operator::Zero(4, 4);
            Operator kept = Operator::Zero(4, 4);
            for (int row = 0; row < 4; ++row) {
                for (int col = 0; col < 4; ++col) {
                    ((row % 2) != (col % 2) ? flipped : kept)(row, col) = single(row, col);
                }
            }
            EXPECT_LT((flipped - optics_detail::block_success_operator(c.r)).cwiseAbs().maxCoeff(), 1e-15);
            EXPECT_LT((kept - c.t * Operator::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
        }
    }
}

JointState armed_state(int arm) {
    return compose({JointState::basis(SubsystemDescriptor::path("x", "0", "1"), arm),
                    JointState::single(SubsystemDescriptor::atom("a"), 0.6, 0.8), JointState::basis(pol(), 0)});
}

TEST(ArmedBlock, MatchedCouplingFiltersTheOtherArm) {
    const BlockSite site{"a", "p", "x", 1, ArmCoupling::matched};
    const EmitterParams params(PurcellFactor(10.0), 0.05);
    const auto c = compute_coefficients(params);
    const auto in = armed_state(0);
    const auto branches = heralded_scatter_block(in, site, params);
    EXPECT_LT((find_tag(branches, HeraldTag::success)->state->amplitudes() + c.r * in.amplitudes())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-15);
    EXPECT_NEAR(total_weight(branches), 1.0, 1e-12);
}

TEST(ArmedBlock, OwnArmCouplingLeavesOtherArmAlone) {
    const BlockSite site{"a", "p", "x", 1, ArmCoupling::own_arm};
    const auto in = armed_state(0);
    const auto branches = heralded_scatter_block(in, site, {PurcellFactor(10.0), 0.05});
    ASSERT_EQ(branches.size(), 1U);
    EXPECT_EQ(branches[0].tag, HeraldTag::success);
    EXPECT_EQ(branches[0].state->amplitudes(), in.amplitudes());
}

TEST(ArmedBlock, OwnArmScattersLikeBareBlock) {
    const BlockSite site{"a", "p", "x", 1, ArmCoupling::own_arm};
    const EmitterParams params(PurcellFactor(10.0), 0.05);
    const auto in = armed_state(1);
    const auto armed = heralded_scatter_block(in, site, params);
    const auto bare = heralded_scatter_block(in.contract("x", Eigen::Vector2cd(0.0, 1.0)), kSite, params);
    for (auto tag : {HeraldTag::success, HeraldTag::herald_fail, HeraldTag::loss}) {
        EXPECT_NEAR(find_tag(armed, tag)->weight, find_tag(bare, tag)->weight, 1e-15);
    }
    EXPECT_LT((find_tag(armed, HeraldTag::success)->state->contract("x", Eigen::Vector2cd(0.0, 1.0)).amplitudes() -
               find_tag(bare, HeraldTag::success)->state->amplitudes())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-15);
}

TEST(WaveformCorrector, PerfectMirrorNegatesVertical) {
    const auto branches = waveform_corrector(JointState::basis(pol(), 1), "p", compute_coefficients({PurcellFactor::infinite(), 0.0}));
    ASSERT_EQ(branches.size(), 1U);
    EXPECT_NEAR(std::abs(branches[0].state->amplitude({1}) + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(branches[0].weight, 1.0, 1e-15);
}

TEST(WaveformCorrector, MonochromaticSuccessWeight) {
    const auto branches = waveform_corrector(JointState::basis(pol(), 1), "p", compute_coefficients({PurcellFactor(63.1), 0.0}));
    EXPECT_NEAR(find_tag(branches, HeraldTag::success)->weight, (63.1 / 64.1) * (63.1 / 64.1), 1e-15);
    EXPECT_NEAR(total_weight(branches), 1.0, 1e-12);
}

TEST(WaveformCorrector, SpectralOutputTracksScatteredArm) {
    const auto wp = SpectralWavepacket::gaussian(0.1);
    const EmitterParams params(PurcellFactor(20.0), 0.0);
    const auto branches = waveform_corrector(wp, params);
    const auto &succ = *branches.at(0).state;
    ASSERT_EQ(branches.at(0).tag, HeraldTag::success);
    const auto scattered = filter_wavepacket(wp, params, ScatterChannel::reflected);
    // Bin-wise proportional with a unit-modulus constant.
    const complex k = succ.bins()[50].amplitude / scattered.bins()[50].amplitude;
    EXPECT_NEAR(std::abs(k), 1.0, 1e-15);
    for (std::size_t i = 0; i < wp.size(); ++i) {
        EXPECT_NEAR(std::abs(succ.bins()[i].amplitude - k * scattered.bins()[i].amplitude), 0.0, 1e-15);
    }
    double total = 0.0;
    for (const auto &b : branches) {
        total += b.weight;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

}  // namespace
}  // namespace hqr
