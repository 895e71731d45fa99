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

#ifndef HQR_SCATTERING_HPP
#define HQR_SCATTERING_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace hqr {

using complex = std::complex<double>;

/// Ratio of emitter decay into the guided mode over decay into every other
/// channel. Infinity is a distinguished value (perfect mirror), not a large
/// float, so that lossless limits stay exact.
class PurcellFactor {
   public:
    /// Throws std::invalid_argument unless 0 < value < inf.
    explicit PurcellFactor(double value);
    static PurcellFactor infinite();

    bool is_infinite() const { return infinite_; }
    /// Finite value; only meaningful when !is_infinite().
    double value() const { return value_; }
    /// 1/P, exactly 0 for the infinite factor.
    double inverse() const { return infinite_ ? 0.0 : 1.0 / value_; }

    /// Accepts a decimal number or "inf"/"infinity" (case-insensitive).
    static PurcellFactor parse(const std::string &text);
    std::string str() const;

    bool operator==(const PurcellFactor &) const = default;

   private:
    PurcellFactor() = default;
    double value_ = 0.0;
    bool infinite_ = false;
};

/// Emitter operating point: Purcell factor and photon detuning measured in
/// units of the waveguide decay rate.
struct EmitterParams {
    PurcellFactor purcell;
    double detuning = 0.0;

    EmitterParams(PurcellFactor p, double d);
    /// Same emitter, detuning shifted by `offset`.
    EmitterParams shifted(double offset) const { return EmitterParams(purcell, detuning + offset); }
};

/// Single-photon reflection/transmission amplitudes and the probability that
/// the photon is lost out of the guided mode.
struct ScatterCoefficients {
    complex r;
    complex t;  // always exactly 1 + r
    double loss = 0.0;

    double reflectance() const { return std::norm(r); }
    double transmittance() const { return std::norm(t); }
};

/// r = -1 / (1 + 1/P - 2i detuning), t = 1 + r, loss = 1 - |r|^2 - |t|^2.
///
/// The loss is evaluated in the cancellation-free form 2(1/P)/|1 + 1/P - 2i detuning|^2,
/// which is algebraically identical and exactly zero for P = inf.
ScatterCoefficients compute_coefficients(const EmitterParams &params);

/// Discretized frequency amplitudes of the photon's spatial wavefunction.
/// Bin weights are folded into the amplitudes, so the norm is a plain sum.
class SpectralWavepacket {
   public:
    struct Bin {
        double detuning;
        complex amplitude;
    };

    /// Bin detunings must be finite and strictly increasing, and the norm at
    /// most 1 (up to 1e-12). Throws std::invalid_argument otherwise.
    explicit SpectralWavepacket(std::vector<Bin> bins);

    /// A monochromatic photon at zero offset from the emitter's detuning.
    static SpectralWavepacket single_bin();
    /// Normalized Gaussian with amplitude ~ exp(-d^2 / (2 sigma^2)), sampled on
    /// `bins` equally spaced points spanning +-5 sigma around `center`.
    static SpectralWavepacket gaussian(double sigma, std::size_t bins = 101, double center = 0.0);

    const std::vector<Bin> &bins() const { return bins_; }
    std::size_t size() const { return bins_.size(); }
    double norm2() const;

   private:
    std::vector<Bin> bins_;
};

enum class ScatterChannel { reflected, transmitted };

/// Multiplies each bin by r or t evaluated at (params.detuning + bin detuning).
SpectralWavepacket filter_wavepacket(const SpectralWavepacket &wp, const EmitterParams &params,
                                     ScatterChannel which);

/// p_s = |<psi|phi_r>|^2 with phi_r the reflected-filtered wavepacket.
/// Requires a normalized wavepacket (1e-9), throws std::invalid_argument otherwise.
double overlap_success_probability(const SpectralWavepacket &wp, const EmitterParams &params);

/// <phi_r|phi_r>, the raw probability that the scattered photon is reflected.
/// Not the p_s used for protocol success; for one bin both agree.
double reflected_norm(const SpectralWavepacket &wp, const EmitterParams &params);

}  // namespace hqr

#endif  // HQR_SCATTERING_HPP
