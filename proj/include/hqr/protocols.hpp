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

#ifndef HQR_PROTOCOLS_HPP
#define HQR_PROTOCOLS_HPP

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hqr/joint_state.hpp"
#include "hqr/optics.hpp"
#include "hqr/pipeline.hpp"
#include "hqr/rng.hpp"
#include "hqr/scattering.hpp"

namespace hqr {

/// Collective channel noise |V> -> gamma|V> + delta|H>, completed to the
/// unitary |H> -> gamma*|H> - delta*|V>.
class NoiseParams {
   public:
    NoiseParams() = default;
    /// Throws std::invalid_argument unless |gamma|^2 + |delta|^2 = 1 to 1e-12.
    NoiseParams(complex gamma, complex delta);

    complex gamma() const { return gamma_; }
    complex delta() const { return delta_; }
    /// Matrix in the (H, V) basis.
    Operator unitary() const;

   private:
    complex gamma_{1.0, 0.0};
    complex delta_{0.0, 0.0};
};

/// The same channel unitary on every time bin of the photon.
template <class State>
State apply_collective_noise(const State &state, const NoiseParams &noise, const std::string &pol) {
    return state.apply_operator({pol}, noise.unitary());
}

enum class ProtocolKind { creation, swapping, purification };
std::string to_string(ProtocolKind kind);
/// Accepts "creation", "swap"/"swapping", "purify"/"purification".
ProtocolKind parse_protocol(const std::string &name);

/// Pauli corrections; zx means sigma_x first, then sigma_z.
enum class Pauli { i, z, x, zx };
std::string to_string(Pauli p);
Operator pauli_matrix(Pauli p);

/// Correction on atom a after swapping, keyed by photon detector (1 or 2)
/// and the outcomes of atoms c and d. The detector picks the sigma_x part,
/// agreement of the atom outcomes picks the sigma_z part.
class CorrectionTable {
   public:
    struct Key {
        int detector;
        int c;
        int d;
        auto operator<=>(const Key &) const = default;
    };

    static CorrectionTable swapping();
    /// Throws std::out_of_range for keys outside the table.
    Pauli lookup(int detector, int c, int d) const;
    const std::map<Key, Pauli> &entries() const { return entries_; }

   private:
    std::map<Key, Pauli> entries_;
};

/// Purification keep rule on the coincidence of detector `first` (1 or 2,
/// photon of party A) and `second` (3 or 4, photon of party B).
bool purification_keeps(int first, int second);

enum class RunStatus { success, herald_fail, loss, discarded };
std::string to_string(RunStatus s);

/// One terminal branch (enumeration) or one trajectory (sampling).
struct RunOutcome {
    RunStatus status = RunStatus::success;
    /// Absolute probability of the branch; 1 for a sampled trajectory.
    double probability = 0.0;
    /// Detector label(s) that fired, e.g. "D2" or "D1D3"; for herald-fail and
    /// loss, the stage at which the photon failed, e.g. "fail:a".
    std::string herald;
    /// Atomic measurement outcomes, e.g. "c=0,d=1".
    std::string atom_outcomes;
    /// Correction applied ("I", "X", "Z", "ZX"), empty if none was reached.
    std::string correction;
    /// Normalized atomic state after correction (success) or after the
    /// coincidence (discarded).
    std::optional<JointState> final_state;
    /// Fidelity of the final pair with phi+; success branches only.
    std::optional<double> fidelity;
    /// Spectral bin the trajectory was evaluated at (spectral mode).
    std::optional<std::size_t> bin;
};

using CreationResult = RunOutcome;
using SwapResult = RunOutcome;
using PurifyResult = RunOutcome;

struct ProtocolConfig {
    ProtocolKind kind = ProtocolKind::creation;
    EmitterParams params{PurcellFactor::infinite(), 0.0};
    NoiseParams noise;
    /// Input fidelity F of each noisy pair (purification).
    double input_fidelity = 1.0;
    /// Finite-bandwidth photon; absent means monochromatic.
    std::optional<SpectralWavepacket> spectrum;
    /// Creation: waveform corrector on the reference arm. Disabling it also
    /// decouples each scattering block from the arm it does not occupy.
    bool waveform_corrector = true;
};

/// Every terminal branch with its exact probability. In spectral mode the
/// branches of each bin are listed with weight |amplitude|^2 times the
/// monochromatic probability (frequency is not resolved by the detectors).
std::vector<RunOutcome> enumerate_protocol(const ProtocolConfig &config);

/// One trajectory drawn with the branch probabilities.
RunOutcome sample_protocol(const ProtocolConfig &config, TrialRng &rng);

/// Prepared circuit for repeated sampling. Safe to share across threads.
class ProtocolSampler {
   public:
    explicit ProtocolSampler(const ProtocolConfig &config);
    RunOutcome operator()(TrialRng &rng) const;

   private:
    struct Circuit {
        std::vector<Stage<JointState>> stages;
        std::vector<Branch<JointState>> roots;
    };
    std::vector<Circuit> circuits_;  // one per spectral bin
    std::vector<double> bin_weights_;
    bool spectral_ = false;
};

std::vector<CreationResult> run_creation(const EmitterParams &params, const NoiseParams &noise,
                                         const std::optional<SpectralWavepacket> &spectrum = std::nullopt,
                                         bool with_corrector = true);
std::vector<SwapResult> run_swapping(const EmitterParams &params);
/// Throws std::invalid_argument unless 0 < fidelity <= 1.
std::vector<PurifyResult> run_purification(double input_fidelity, const EmitterParams &params);

struct ProtocolSummary {
    double success_probability = 0.0;
    double herald_fail_probability = 0.0;
    double loss_probability = 0.0;
    double discard_probability = 0.0;
    /// Probability that every scattering stage succeeded (success + discarded).
    double heralded_probability = 0.0;
    /// success / heralded; 1 unless branches are discarded.
    double keep_probability = 0.0;
    /// Probability-weighted fidelity over success branches.
    double fidelity = 0.0;
    double min_fidelity = 0.0;
};

ProtocolSummary summarize(std::span<const RunOutcome> outcomes);

/// Closed-form success probabilities: p1 = p_s^3, p2 = p_s^2, p3 = p_s^4.
struct ProtocolSuccess {
    double p_s;
    double creation;
    double swapping;
    double purification;
};
ProtocolSuccess analytic_protocol_success(const EmitterParams &params,
                                          const SpectralWavepacket &wp = SpectralWavepacket::single_bin());

/// F' = F^2 / (F^2 + (1 - F)^2).
double purified_fidelity(double input_fidelity);

// Circuit building blocks, exposed for oracle tests. The stage lists are
// instantiated for JointState and DensityMatrix.

JointState creation_input();
JointState swapping_input();
/// The four pair-product branches (phi+phi+, phi+psi+, psi+phi+, psi+psi+)
/// over atoms a1 b1 a2 b2 with weights F^2, F(1-F), (1-F)F, (1-F)^2;
/// zero-weight branches omitted.
MixedEnsemble purification_input(double input_fidelity);
/// The same ensemble with both parties' photons prepended.
MixedEnsemble purification_circuit_input(double input_fidelity);

template <class State>
std::vector<Stage<State>> creation_stages(const ScatterCoefficients &c, const NoiseParams &noise,
                                          bool with_corrector);
template <class State>
std::vector<Stage<State>> swapping_stages(const ScatterCoefficients &c);
template <class State>
std::vector<Stage<State>> purification_stages(const ScatterCoefficients &c);

/// Key identifying a terminal branch by status and classical record.
template <class State>
std::string branch_key(const Branch<State> &b) {
    std::string key = std::to_string(static_cast<int>(b.status));
    for (const auto &e : b.events) {
        key += '|' + e.key + '=' + e.value;
    }
    return key;
}

}  // namespace hqr

#endif  // HQR_PROTOCOLS_HPP
