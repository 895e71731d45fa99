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

#include "hqr/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hqr/density.hpp"

namespace hqr {

NoiseParams::NoiseParams(complex gamma, complex delta) : gamma_(gamma), delta_(delta) {
    const double n = std::norm(gamma) + std::norm(delta);
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-12) {
        throw std::invalid_argument("noise parameters must satisfy |gamma|^2 + |delta|^2 = 1");
    }
}

Operator NoiseParams::unitary() const {
    Operator u(2, 2);
    u << std::conj(gamma_), delta_, -std::conj(delta_), gamma_;
    return u;
}

std::string to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::creation:
            return "creation";
        case ProtocolKind::swapping:
            return "swap";
        case ProtocolKind::purification:
            return "purify";
    }
    return "?";
}

ProtocolKind parse_protocol(const std::string &name) {
    if (name == "creation" || name == "create") {
        return ProtocolKind::creation;
    }
    if (name == "swap" || name == "swapping") {
        return ProtocolKind::swapping;
    }
    if (name == "purify" || name == "purification") {
        return ProtocolKind::purification;
    }
    throw std::invalid_argument("unknown protocol '" + name + "' (expected creation, swap or purify)");
}

std::string to_string(Pauli p) {
    switch (p) {
        case Pauli::i:
            return "I";
        case Pauli::z:
            return "Z";
        case Pauli::x:
            return "X";
        case Pauli::zx:
            return "ZX";
    }
    return "?";
}

Operator pauli_matrix(Pauli p) {
    switch (p) {
        case Pauli::i:
            return gates::identity();
        case Pauli::z:
            return gates::pauli_z();
        case Pauli::x:
            return gates::pauli_x();
        case Pauli::zx:
            return gates::pauli_z() * gates::pauli_x();
    }
    throw std::logic_error("bad Pauli");
}

CorrectionTable CorrectionTable::swapping() {
    CorrectionTable t;
    for (int detector = 1; detector <= 2; ++detector) {
        for (int c = 0; c < 2; ++c) {
            for (int d = 0; d < 2; ++d) {
                const bool flip = detector == 2;
                const bool phase = c == d;
                t.entries_[{detector, c, d}] = flip ? (phase ? Pauli::zx : Pauli::x) : (phase ? Pauli::z : Pauli::i);
            }
        }
    }
    return t;
}

Pauli CorrectionTable::lookup(int detector, int c, int d) const { return entries_.at({detector, c, d}); }

bool purification_keeps(int first, int second) {
    if ((first != 1 && first != 2) || (second != 3 && second != 4)) {
        throw std::invalid_argument("purification coincidence needs D1|D2 and D3|D4");
    }
    return (first == 1 && second == 3) || (first == 2 && second == 4);
}

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::success:
            return "success";
        case RunStatus::herald_fail:
            return "herald_fail";
        case RunStatus::loss:
            return "loss";
        case RunStatus::discarded:
            return "discarded";
    }
    return "?";
}

double purified_fidelity(double f) {
    const double g = 1.0 - f;
    return f * f / (f * f + g * g);
}

ProtocolSuccess analytic_protocol_success(const EmitterParams &params, const SpectralWavepacket &wp) {
    const double ps = overlap_success_probability(wp, params);
    return {ps, ps * ps * ps, ps * ps, ps * ps * ps * ps};
}

namespace {

const std::string kPol = "photon.pol";
const std::string kPath = "photon.path";

JointState photon_at_input(const std::string &pol, const std::string &path) {
    const double s = 1.0 / std::sqrt(2.0);
    return compose({JointState::single(SubsystemDescriptor::polarization(pol), s, s),
                    JointState::basis(SubsystemDescriptor::path(path, "in", "open"), 0)});
}

JointState plus_atom(const std::string &id) {
    const double s = 1.0 / std::sqrt(2.0);
    return JointState::single(SubsystemDescriptor::atom(id), s, s);
}

Eigen::Vector2cd unit(int k) {
    Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
    v[k] = 1.0;
    return v;
}

/// Wraps a heralded element: success continues, herald-fail and loss end the branch.
template <class State>
Stage<State> herald_stage(std::string name, std::function<std::vector<HeraldBranch<State>>(const State &)> element) {
    return [name = std::move(name), element = std::move(element)](const Branch<State> &parent) {
        std::vector<Branch<State>> out;
        for (auto &h : element(*parent.state)) {
            switch (h.tag) {
                case HeraldTag::success:
                    out.push_back(child_of(parent, std::move(*h.state)));
                    break;
                case HeraldTag::herald_fail:
                    out.push_back(
                        child_of(parent, std::move(*h.state), Event{"fail", name}, BranchStatus::herald_fail));
                    break;
                case HeraldTag::loss: {
                    Branch<State> b;
                    b.status = BranchStatus::loss;
                    b.weight = h.weight;
                    b.events = parent.events;
                    b.events.push_back({"loss", name});
                    out.push_back(std::move(b));
                    break;
                }
            }
        }
        return out;
    };
}

template <class State>
Stage<State> block_stage(const ScatterCoefficients &c, BlockSite site) {
    const std::string name = site.atom;
    return herald_stage<State>(name, [c, site = std::move(site)](const State &s) {
        return heralded_scatter_block(s, site, c);
    });
}

/// Interferometer shared by swapping and purification: the V part scatters
/// off `first`, the H part off `second`, a PBS recombines the arms, the dark
/// port is checked empty and a half-wave plate restores the polarization frame.
/// Ends with a +- polarization measurement reported as `plus`/`minus`.
template <class State>
void append_party(std::vector<Stage<State>> &stages, const ScatterCoefficients &c, const std::string &pol,
                  const std::string &path, const std::string &first, const std::string &second,
                  const std::string &plus, const std::string &minus) {
    const PhotonModes modes{pol, path};
    stages.push_back(map_stage<State>([=](const State &s) {
        return pbs_hv(s, modes, "in", SubsystemDescriptor::path(path, first, second), second, first);
    }));
    stages.push_back(block_stage<State>(c, BlockSite{first, pol, path, 0, ArmCoupling::matched}));
    stages.push_back(block_stage<State>(c, BlockSite{second, pol, path, 1, ArmCoupling::matched}));
    stages.push_back(map_stage<State>([=](const State &s) {
        const auto out_path = SubsystemDescriptor::path(path, "out", "dark");
        const State merged = pbs_hv_combine(s, modes, first, second, out_path, "out");
        optics_detail::require_empty(merged, out_path, 1);
        return half_wave_plate(merged.contract(path, unit(0)), pol);
    }));
    stages.push_back(measure_stage<State>(pol, MeasurementBasis::hadamard, "detector", {plus, minus}));
}

int detector_number(const std::string &label) { return label.at(1) - '0'; }

std::vector<const std::string *> all_values(const std::vector<Event> &events, const std::string &key) {
    std::vector<const std::string *> out;
    for (const auto &e : events) {
        if (e.key == key) {
            out.push_back(&e.value);
        }
    }
    return out;
}

}  // namespace

JointState creation_input() {
    return compose({photon_at_input(kPol, kPath), plus_atom("a"), plus_atom("b")});
}

JointState swapping_input() {
    return compose({photon_at_input(kPol, kPath), bell_phi_plus("a", "c"), bell_phi_plus("b", "d")});
}

MixedEnsemble purification_input(double f) {
    if (!(f > 0.0) || f > 1.0) {
        throw std::invalid_argument("input fidelity must lie in (0, 1]");
    }
    const double g = 1.0 - f;
    std::vector<MixedEnsemble::Entry> entries;
    auto add = [&](double w, JointState first, JointState second) {
        if (w > 0.0) {
            entries.push_back({w, compose({std::move(first), std::move(second)})});
        }
    };
    add(f * f, bell_phi_plus("a1", "b1"), bell_phi_plus("a2", "b2"));
    add(f * g, bell_phi_plus("a1", "b1"), bell_psi_plus("a2", "b2"));
    add(g * f, bell_psi_plus("a1", "b1"), bell_phi_plus("a2", "b2"));
    add(g * g, bell_psi_plus("a1", "b1"), bell_psi_plus("a2", "b2"));
    return MixedEnsemble(std::move(entries));
}

MixedEnsemble purification_circuit_input(double f) {
    const JointState photons = compose({photon_at_input("A.pol", "A.path"), photon_at_input("B.pol", "B.path")});
    std::vector<MixedEnsemble::Entry> entries;
    const MixedEnsemble atoms = purification_input(f);
    for (const auto &e : atoms.entries()) {
        entries.push_back({e.weight, compose({photons, e.state})});
    }
    return MixedEnsemble(std::move(entries));
}

template <class State>
std::vector<Stage<State>> creation_stages(const ScatterCoefficients &c, const NoiseParams &noise,
                                          bool with_corrector) {
    const PhotonModes modes{kPol, kPath};
    const ArmCoupling coupling = with_corrector ? ArmCoupling::matched : ArmCoupling::own_arm;
    std::vector<Stage<State>> stages;
    // Sender: H takes the long bin and meets atom a, V takes the short bin.
    stages.push_back(map_stage<State>([=](const State &s) {
        return pbs_hv(s, modes, "in", SubsystemDescriptor::path(kPath, "S", "L"), "L", "S");
    }));
    stages.push_back(block_stage<State>(c, BlockSite{"a", kPol, kPath, 1, coupling}));
    if (with_corrector) {
        stages.push_back(herald_stage<State>("wfc", [c](const State &s) { return waveform_corrector(s, kPol, c); }));
    }
    stages.push_back(map_stage<State>([noise](const State &s) { return apply_collective_noise(s, noise, kPol); }));
    // Receiver: the short bin goes to the reference arm, the long bin to atom b.
    stages.push_back(map_stage<State>([](const State &s) {
        return tr_switch(s, kPath, {{"S", "ref"}, {"L", "atom"}}, SubsystemDescriptor::path(kPath, "ref", "atom"));
    }));
    stages.push_back(block_stage<State>(c, BlockSite{"b", kPol, kPath, 1, coupling}));
    stages.push_back(map_stage<State>([=](const State &s) {
        return pbs_hv_combine(s, modes, "atom", "ref", SubsystemDescriptor::path(kPath, "1", "2"), "1");
    }));
    // Path 1 ends on D1 (+) / D2 (-), path 2 on D4 (+) / D3 (-).
    stages.push_back([](const Branch<State> &parent) {
        static const std::array<std::array<const char *, 2>, 2> names{{{"D1", "D2"}, {"D4", "D3"}}};
        std::vector<Branch<State>> out;
        for (int p = 0; p < 2; ++p) {
            const State on_path = parent.state->contract(kPath, unit(p));
            for (int m = 0; m < 2; ++m) {
                State s = on_path.contract(kPol, basis_vector(MeasurementBasis::hadamard, m));
                if (s.weight() < structural_zero * parent.weight) {
                    continue;
                }
                out.push_back(child_of(parent, std::move(s),
                                       Event{"detector", names[static_cast<std::size_t>(p)][static_cast<std::size_t>(m)]}));
            }
        }
        return out;
    });
    stages.push_back([](const Branch<State> &parent) {
        const std::string &d = *parent.find("detector");
        const bool flip = d == "D2" || d == "D3";
        State s = flip ? parent.state->apply_operator({"b"}, gates::pauli_x()) : *parent.state;
        return std::vector<Branch<State>>{
            child_of(parent, std::move(s), Event{"correction", flip ? "X" : "I"}, BranchStatus::success)};
    });
    return stages;
}

template <class State>
std::vector<Stage<State>> swapping_stages(const ScatterCoefficients &c) {
    std::vector<Stage<State>> stages;
    append_party<State>(stages, c, kPol, kPath, "c", "d", "D1", "D2");
    stages.push_back(map_stage<State>([](const State &s) {
        return s.apply_operator({"c"}, gates::hadamard()).apply_operator({"d"}, gates::hadamard());
    }));
    stages.push_back(measure_stage<State>("c", MeasurementBasis::computational, "atom:c", {"0", "1"}));
    stages.push_back(measure_stage<State>("d", MeasurementBasis::computational, "atom:d", {"0", "1"}));
    stages.push_back([table = CorrectionTable::swapping()](const Branch<State> &parent) {
        const int detector = detector_number(*parent.find("detector"));
        const Pauli p = table.lookup(detector, std::stoi(*parent.find("atom:c")), std::stoi(*parent.find("atom:d")));
        return std::vector<Branch<State>>{child_of(parent, parent.state->apply_operator({"a"}, pauli_matrix(p)),
                                                   Event{"correction", to_string(p)}, BranchStatus::success)};
    });
    return stages;
}

template <class State>
std::vector<Stage<State>> purification_stages(const ScatterCoefficients &c) {
    std::vector<Stage<State>> stages;
    append_party<State>(stages, c, "A.pol", "A.path", "a1", "a2", "D1", "D2");
    append_party<State>(stages, c, "B.pol", "B.path", "b1", "b2", "D3", "D4");
    stages.push_back([](const Branch<State> &parent) {
        const auto d = all_values(parent.events, "detector");
        const bool keep = purification_keeps(detector_number(*d.at(0)), detector_number(*d.at(1)));
        if (keep) {
            return std::vector<Branch<State>>{parent};
        }
        return std::vector<Branch<State>>{
            child_of(parent, *parent.state, Event{"coincidence", "discard"}, BranchStatus::discarded)};
    });
    stages.push_back(map_stage<State>([](const State &s) {
        return s.apply_operator({"a2"}, gates::hadamard()).apply_operator({"b2"}, gates::hadamard());
    }));
    stages.push_back(measure_stage<State>("a2", MeasurementBasis::computational, "atom:a2", {"0", "1"}));
    stages.push_back(measure_stage<State>("b2", MeasurementBasis::computational, "atom:b2", {"0", "1"}));
    stages.push_back([](const Branch<State> &parent) {
        const bool differ = *parent.find("atom:a2") != *parent.find("atom:b2");
        State s = differ ? parent.state->apply_operator({"a1"}, gates::pauli_z()) : *parent.state;
        return std::vector<Branch<State>>{
            child_of(parent, std::move(s), Event{"correction", differ ? "Z" : "I"}, BranchStatus::success)};
    });
    return stages;
}

template std::vector<Stage<JointState>> creation_stages<JointState>(const ScatterCoefficients &,
                                                                    const NoiseParams &, bool);
template std::vector<Stage<DensityMatrix>> creation_stages<DensityMatrix>(const ScatterCoefficients &,
                                                                          const NoiseParams &, bool);
template std::vector<Stage<JointState>> swapping_stages<JointState>(const ScatterCoefficients &);
template std::vector<Stage<DensityMatrix>> swapping_stages<DensityMatrix>(const ScatterCoefficients &);
template std::vector<Stage<JointState>> purification_stages<JointState>(const ScatterCoefficients &);
template std::vector<Stage<DensityMatrix>> purification_stages<DensityMatrix>(const ScatterCoefficients &);

namespace {

std::vector<Stage<JointState>> stages_for(const ProtocolConfig &config, const ScatterCoefficients &c) {
    switch (config.kind) {
        case ProtocolKind::creation:
            return creation_stages<JointState>(c, config.noise, config.waveform_corrector);
        case ProtocolKind::swapping:
            return swapping_stages<JointState>(c);
        case ProtocolKind::purification:
            return purification_stages<JointState>(c);
    }
    throw std::logic_error("bad protocol kind");
}

std::vector<Branch<JointState>> roots_for(const ProtocolConfig &config) {
    switch (config.kind) {
        case ProtocolKind::creation:
            return {root_branch(creation_input())};
        case ProtocolKind::swapping:
            return {root_branch(swapping_input())};
        case ProtocolKind::purification: {
            std::vector<Branch<JointState>> roots;
            const MixedEnsemble input = purification_circuit_input(config.input_fidelity);
            for (const auto &e : input.entries()) {
                roots.push_back(root_branch(e.state.scaled(std::sqrt(e.weight))));
            }
            return roots;
        }
    }
    throw std::logic_error("bad protocol kind");
}

RunOutcome to_outcome(const Branch<JointState> &b) {
    RunOutcome o;
    o.probability = b.weight;
    switch (b.status) {
        case BranchStatus::success:
            o.status = RunStatus::success;
            break;
        case BranchStatus::herald_fail:
            o.status = RunStatus::herald_fail;
            break;
        case BranchStatus::loss:
            o.status = RunStatus::loss;
            break;
        case BranchStatus::discarded:
            o.status = RunStatus::discarded;
            break;
        case BranchStatus::active:
            throw std::logic_error("protocol ended with an active branch");
    }
    for (const auto &e : b.events) {
        if (e.key == "detector") {
            o.herald += e.value;
        } else if (e.key == "fail" || e.key == "loss") {
            o.herald = e.key + ":" + e.value;
        } else if (e.key.rfind("atom:", 0) == 0) {
            if (!o.atom_outcomes.empty()) {
                o.atom_outcomes += ',';
            }
            o.atom_outcomes += e.key.substr(5) + "=" + e.value;
        } else if (e.key == "correction") {
            o.correction = e.value;
        }
    }
    if (b.state && (o.status == RunStatus::success || o.status == RunStatus::discarded)) {
        o.final_state = b.state->normalized();
        if (o.status == RunStatus::success) {
            const auto ids = o.final_state->ids();
            o.fidelity = fidelity(*o.final_state, bell_phi_plus(ids.at(0), ids.at(1)));
        }
    }
    return o;
}

void check_config(const ProtocolConfig &config) {
    if (config.kind == ProtocolKind::purification && (!(config.input_fidelity > 0.0) || config.input_fidelity > 1.0)) {
        throw std::invalid_argument("input fidelity must lie in (0, 1]");
    }
    if (config.spectrum && std::abs(config.spectrum->norm2() - 1.0) > 1e-9) {
        throw std::invalid_argument("spectral photon must be normalized");
    }
}

std::vector<RunOutcome> enumerate_monochromatic(const ProtocolConfig &config, const EmitterParams &params) {
    const auto stages = stages_for(config, compute_coefficients(params));
    const auto branches = enumerate_branches<JointState>(roots_for(config), stages);
    std::vector<RunOutcome> out;
    out.reserve(branches.size());
    for (const auto &b : branches) {
        out.push_back(to_outcome(b));
    }
    return out;
}

}  // namespace

std::vector<RunOutcome> enumerate_protocol(const ProtocolConfig &config) {
    check_config(config);
    if (!config.spectrum) {
        return enumerate_monochromatic(config, config.params);
    }
    std::vector<RunOutcome> out;
    const auto &bins = config.spectrum->bins();
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const double w = std::norm(bins[i].amplitude);
        if (w == 0.0) {
            continue;
        }
        for (auto &o : enumerate_monochromatic(config, config.params.shifted(bins[i].detuning))) {
            o.probability *= w;
            o.bin = i;
            out.push_back(std::move(o));
        }
    }
    return out;
}

ProtocolSampler::ProtocolSampler(const ProtocolConfig &config) : spectral_(config.spectrum.has_value()) {
    check_config(config);
    auto prepare = [&](const EmitterParams &params) {
        circuits_.push_back({stages_for(config, compute_coefficients(params)), roots_for(config)});
    };
    if (!spectral_) {
        prepare(config.params);
        bin_weights_.push_back(1.0);
        return;
    }
    for (const auto &b : config.spectrum->bins()) {
        prepare(config.params.shifted(b.detuning));
        bin_weights_.push_back(std::norm(b.amplitude));
    }
}

RunOutcome ProtocolSampler::operator()(TrialRng &rng) const {
    std::size_t bin = 0;
    if (spectral_) {
        double total = 0.0;
        for (double w : bin_weights_) {
            total += w;
        }
        const double u = rng.uniform() * total;
        double acc = 0.0;
        bin = bin_weights_.size() - 1;
        for (std::size_t i = 0; i < bin_weights_.size(); ++i) {
            acc += bin_weights_[i];
            if (u < acc) {
                bin = i;
                break;
            }
        }
    }
    const Circuit &circuit = circuits_[bin];
    auto root = pick_weighted<Branch<JointState>>(
        circuit.roots, [](const Branch<JointState> &b) { return b.weight; }, rng);
    RunOutcome o = to_outcome(sample_branch<JointState>(std::move(root), circuit.stages, rng));
    o.probability = 1.0;
    if (spectral_) {
        o.bin = bin;
    }
    return o;
}

RunOutcome sample_protocol(const ProtocolConfig &config, TrialRng &rng) { return ProtocolSampler(config)(rng); }

std::vector<CreationResult> run_creation(const EmitterParams &params, const NoiseParams &noise,
                                         const std::optional<SpectralWavepacket> &spectrum, bool with_corrector) {
    ProtocolConfig config;
    config.kind = ProtocolKind::creation;
    config.params = params;
    config.noise = noise;
    config.spectrum = spectrum;
    config.waveform_corrector = with_corrector;
    return enumerate_protocol(config);
}

std::vector<SwapResult> run_swapping(const EmitterParams &params) {
    ProtocolConfig config;
    config.kind = ProtocolKind::swapping;
    config.params = params;
    return enumerate_protocol(config);
}

std::vector<PurifyResult> run_purification(double input_fidelity, const EmitterParams &params) {
    ProtocolConfig config;
    config.kind = ProtocolKind::purification;
    config.params = params;
    config.input_fidelity = input_fidelity;
    return enumerate_protocol(config);
}

ProtocolSummary summarize(std::span<const RunOutcome> outcomes) {
    ProtocolSummary s;
    double weighted_fidelity = 0.0;
    s.min_fidelity = std::numeric_limits<double>::quiet_NaN();
    for (const auto &o : outcomes) {
        switch (o.status) {
            case RunStatus::success:
                s.success_probability += o.probability;
                if (o.fidelity) {
                    weighted_fidelity += o.probability * *o.fidelity;
                    s.min_fidelity = std::isnan(s.min_fidelity) ? *o.fidelity : std::min(s.min_fidelity, *o.fidelity);
                }
                break;
            case RunStatus::herald_fail:
                s.herald_fail_probability += o.probability;
                break;
            case RunStatus::loss:
                s.loss_probability += o.probability;
                break;
            case RunStatus::discarded:
                s.discard_probability += o.probability;
                break;
        }
    }
    s.heralded_probability = s.success_probability + s.discard_probability;
    s.keep_probability = s.heralded_probability > 0.0 ? s.success_probability / s.heralded_probability : 0.0;
    s.fidelity = s.success_probability > 0.0 ? weighted_fidelity / s.success_probability
                                             : std::numeric_limits<double>::quiet_NaN();
    return s;
}

}  // namespace hqr
