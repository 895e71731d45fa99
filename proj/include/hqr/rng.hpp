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

#ifndef HQR_RNG_HPP
#define HQR_RNG_HPP

#include <cstdint>
#include <random>

namespace hqr {

/// Random stream for one Monte Carlo trial.
///
/// The stream depends only on (seed, trial index), so a trial draws the same
/// numbers whichever thread runs it and in whatever order.
class TrialRng {
   public:
    TrialRng(std::uint64_t seed, std::uint64_t trial) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32), 0x68717221u};
        engine_.seed(seq);
    }

    /// Uniform in [0, 1) from the top 53 bits of one 64-bit draw.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

   private:
    std::mt19937_64 engine_;
};

}  // namespace hqr

#endif  // HQR_RNG_HPP
