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


// Serial reference loops against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "hqr/batch.hpp"

namespace {

hqr::Execution execution_of(const benchmark::State &state) {
    return state.range(0) == 0 ? hqr::Execution::serial : hqr::Execution::parallel;
}

void BM_CreationTrials(benchmark::State &state) {
    hqr::ProtocolConfig config;
    config.kind = hqr::ProtocolKind::creation;
    config.params = hqr::EmitterParams(hqr::PurcellFactor(63.1), 0.0);
    config.noise = hqr::NoiseParams({0.6, 0.0}, {0.8, 0.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(hqr::run_trials(config, 2000, 7, execution_of(state)));
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_PurificationTrials(benchmark::State &state) {
    hqr::ProtocolConfig config;
    config.kind = hqr::ProtocolKind::purification;
    config.params = hqr::EmitterParams(hqr::PurcellFactor(63.1), 0.0);
    config.input_fidelity = 0.8;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hqr::run_trials(config, 500, 7, execution_of(state)));
    }
    state.SetItemsProcessed(state.iterations() * 500);
}

void BM_SpectralSweep(benchmark::State &state) {
    const auto values = hqr::linear_grid(1.0, 200.0, 400);
    const auto wp = hqr::SpectralWavepacket::gaussian(0.1, 101);
    const hqr::EmitterParams fixed(hqr::PurcellFactor::infinite(), 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            hqr::run_sweep(hqr::SweepAxis::purcell, values, fixed, wp, true, execution_of(state)));
    }
}

void BM_GridMinimum(benchmark::State &state) {
    const auto purcells = hqr::linear_grid(50.0, 1000.0, 300);
    const auto detunings = hqr::linear_grid(-0.13, 0.13, 300);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hqr::min_success_over_grid(purcells, detunings, execution_of(state)));
    }
}

}  // namespace

BENCHMARK(BM_CreationTrials)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PurificationTrials)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpectralSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridMinimum)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
