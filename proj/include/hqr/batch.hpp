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

#ifndef HQR_BATCH_HPP
#define HQR_BATCH_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hqr/protocols.hpp"
#include "hqr/scattering.hpp"

// Data-parallel loops: Monte Carlo trials, parameter sweeps and grid scans.
// Each has a serial reference path; both paths produce identical results.

namespace hqr {

enum class Execution { serial, parallel };

/// Compact record of one sampled trajectory.
struct TrialRecord {
    std::uint64_t trial = 0;
    RunStatus status = RunStatus::success;
    std::string herald;
    std::string atom_outcomes;
    std::string correction;
    /// NaN unless the trial succeeded.
    double fidelity = 0.0;
    std::optional<std::size_t> bin;
};

/// Runs trials 0..trials-1, trial i drawing from TrialRng(seed, i).
std::vector<TrialRecord> run_trials(const ProtocolConfig &config, std::uint64_t trials, std::uint64_t seed,
                                    Execution execution = Execution::parallel);

struct TrialSummary {
    std::uint64_t trials = 0;
    std::uint64_t success = 0;
    std::uint64_t herald_fail = 0;
    std::uint64_t loss = 0;
    std::uint64_t discarded = 0;
    /// Mean and minimum fidelity over successful trials (NaN if none).
    double mean_fidelity = 0.0;
    double min_fidelity = 0.0;
    std::map<std::string, std::uint64_t> herald_counts;

    double fraction(std::uint64_t count) const {
        return trials == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(trials);
    }
};

TrialSummary summarize_trials(std::span<const TrialRecord> records);

enum class SweepAxis { purcell, detuning };
SweepAxis parse_axis(const std::string &name);
std::string to_string(SweepAxis axis);

/// `points` equally spaced values from `from` to `to` inclusive. Throws
/// std::invalid_argument for points == 0, non-finite ends, or from > to.
std::vector<double> linear_grid(double from, double to, std::size_t points);

struct SweepRow {
    double value = 0.0;
    double p_s = 0.0;
    /// <phi_r|phi_r>; equals p_s for a monochromatic photon.
    double reflected_norm = 0.0;
    std::optional<ProtocolSuccess> protocols;
};

/// Evaluates p_s (and optionally p1, p2, p3) with `fixed` and the swept axis
/// replaced by each value in `values`.
std::vector<SweepRow> run_sweep(SweepAxis axis, std::span<const double> values, const EmitterParams &fixed,
                                const SpectralWavepacket &wp, bool with_protocols,
                                Execution execution = Execution::parallel);

struct GridMinimum {
    double p_s = 0.0;
    double purcell = 0.0;
    double detuning = 0.0;
};

/// Smallest monochromatic p_s over the Cartesian grid (ties keep the first
/// point in row-major order).
GridMinimum min_success_over_grid(std::span<const double> purcells, std::span<const double> detunings,
                                  Execution execution = Execution::parallel);

}  // namespace hqr

#endif  // HQR_BATCH_HPP
