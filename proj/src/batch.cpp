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

#include "hqr/batch.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <stdexcept>

namespace hqr {

namespace {

/// Runs body(i) for i in [0, n), in parallel or serially. The first exception
/// thrown by any iteration is rethrown after the loop.
void for_each_index(std::size_t n, Execution execution, const std::function<void(std::size_t)> &body) {
    if (execution == Execution::serial) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::exception_ptr error;
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(hqr_batch_error)
            if (!error) {
                error = std::current_exception();
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

}  // namespace

std::vector<TrialRecord> run_trials(const ProtocolConfig &config, std::uint64_t trials, std::uint64_t seed,
                                    Execution execution) {
    std::vector<TrialRecord> records(trials);
    const ProtocolSampler sampler(config);
    for_each_index(trials, execution, [&](std::size_t i) {
        TrialRng rng(seed, i);
        const RunOutcome o = sampler(rng);
        TrialRecord &r = records[i];
        r.trial = i;
        r.status = o.status;
        r.herald = o.herald;
        r.atom_outcomes = o.atom_outcomes;
        r.correction = o.correction;
        r.fidelity = o.fidelity.value_or(std::numeric_limits<double>::quiet_NaN());
        r.bin = o.bin;
    });
    return records;
}

TrialSummary summarize_trials(std::span<const TrialRecord> records) {
    TrialSummary s;
    s.trials = records.size();
    double fidelity_sum = 0.0;
    s.min_fidelity = std::numeric_limits<double>::quiet_NaN();
    for (const auto &r : records) {
        switch (r.status) {
            case RunStatus::success:
                ++s.success;
                fidelity_sum += r.fidelity;
                s.min_fidelity = std::isnan(s.min_fidelity) ? r.fidelity : std::min(s.min_fidelity, r.fidelity);
                break;
            case RunStatus::herald_fail:
                ++s.herald_fail;
                break;
            case RunStatus::loss:
                ++s.loss;
                break;
            case RunStatus::discarded:
                ++s.discarded;
                break;
        }
        ++s.herald_counts[r.herald];
    }
    s.mean_fidelity = s.success > 0 ? fidelity_sum / static_cast<double>(s.success)
                                    : std::numeric_limits<double>::quiet_NaN();
    return s;
}

SweepAxis parse_axis(const std::string &name) {
    if (name == "purcell") {
        return SweepAxis::purcell;
    }
    if (name == "detuning") {
        return SweepAxis::detuning;
    }
    throw std::invalid_argument("unknown sweep axis '" + name + "' (expected purcell or detuning)");
}

std::string to_string(SweepAxis axis) { return axis == SweepAxis::purcell ? "purcell" : "detuning"; }

std::vector<double> linear_grid(double from, double to, std::size_t points) {
    if (points == 0) {
        throw std::invalid_argument("sweep range is empty");
    }
    if (!std::isfinite(from) || !std::isfinite(to)) {
        throw std::invalid_argument("sweep range ends must be finite");
    }
    if (from > to) {
        throw std::invalid_argument("sweep range must be increasing");
    }
    if (points == 1) {
        return {from};
    }
    std::vector<double> out(points);
    const double step = (to - from) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = from + step * static_cast<double>(i);
    }
    out.back() = to;
    return out;
}

std::vector<SweepRow> run_sweep(SweepAxis axis, std::span<const double> values, const EmitterParams &fixed,
                                const SpectralWavepacket &wp, bool with_protocols, Execution execution) {
    if (values.empty()) {
        throw std::invalid_argument("sweep range is empty");
    }
    std::vector<SweepRow> rows(values.size());
    for_each_index(values.size(), execution, [&](std::size_t i) {
        const EmitterParams p = axis == SweepAxis::purcell ? EmitterParams(PurcellFactor(values[i]), fixed.detuning)
                                                           : EmitterParams(fixed.purcell, values[i]);
        SweepRow &row = rows[i];
        row.value = values[i];
        row.p_s = overlap_success_probability(wp, p);
        row.reflected_norm = reflected_norm(wp, p);
        if (with_protocols) {
            row.protocols = analytic_protocol_success(p, wp);
        }
    });
    return rows;
}

GridMinimum min_success_over_grid(std::span<const double> purcells, std::span<const double> detunings,
                                  Execution execution) {
    if (purcells.empty() || detunings.empty()) {
        throw std::invalid_argument("grid is empty");
    }
    std::size_t cols = detunings.size();
    std::vector<double> values(purcells.size() * cols);
    for_each_index(values.size(), execution, [&values, purcells, detunings, cols](std::size_t k) {
        const EmitterParams p(PurcellFactor(purcells[k / cols]), detunings[k % cols]);
        values[k] = compute_coefficients(p).reflectance();
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] < values[best]) {
            best = k;
        }
    }
    return {values[best], purcells[best / cols], detunings[best % cols]};
}

}  // namespace hqr
