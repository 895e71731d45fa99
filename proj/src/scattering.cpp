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

#include "hqr/scattering.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "hqr/number_format.hpp"

namespace hqr {

PurcellFactor::PurcellFactor(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument("Purcell factor must be a positive finite number (use infinite() for the "
                                    "lossless limit), got " +
                                    format_number(value));
    }
}

PurcellFactor PurcellFactor::infinite() {
    PurcellFactor p;
    p.infinite_ = true;
    return p;
}

PurcellFactor PurcellFactor::parse(const std::string &text) {
    std::string lower;
    lower.reserve(text.size());
    for (char c : text) {
        lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (lower == "inf" || lower == "infinity" || lower == "+inf") {
        return infinite();
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw std::invalid_argument("not a Purcell factor: '" + text + "'");
    }
    if (used != text.size()) {
        throw std::invalid_argument("not a Purcell factor: '" + text + "'");
    }
    if (std::isinf(v) && v > 0) {
        return infinite();
    }
    return PurcellFactor(v);
}

std::string PurcellFactor::str() const { return infinite_ ? "inf" : format_number(value_); }

EmitterParams::EmitterParams(PurcellFactor p, double d) : purcell(p), detuning(d) {
    if (!std::isfinite(d)) {
        throw std::invalid_argument("detuning must be finite");
    }
}

ScatterCoefficients compute_coefficients(const EmitterParams &params) {
    const double eps = params.purcell.inverse();
    const complex denom(1.0 + eps, -2.0 * params.detuning);
    ScatterCoefficients c;
    c.r = -1.0 / denom;
    c.t = 1.0 + c.r;
    c.loss = params.purcell.is_infinite() ? 0.0 : 2.0 * eps / std::norm(denom);
    return c;
}

SpectralWavepacket::SpectralWavepacket(std::vector<Bin> bins) : bins_(std::move(bins)) {
    if (bins_.empty()) {
        throw std::invalid_argument("wavepacket needs at least one bin");
    }
    for (std::size_t i = 0; i < bins_.size(); ++i) {
        if (!std::isfinite(bins_[i].detuning)) {
            throw std::invalid_argument("wavepacket bin detuning must be finite");
        }
        if (i > 0 && !(bins_[i].detuning > bins_[i - 1].detuning)) {
            throw std::invalid_argument("wavepacket bin detunings must be strictly increasing");
        }
    }
    if (norm2() > 1.0 + 1e-12) {
        throw std::invalid_argument("wavepacket norm exceeds 1");
    }
}

SpectralWavepacket SpectralWavepacket::single_bin() { return SpectralWavepacket({{0.0, complex(1.0, 0.0)}}); }

SpectralWavepacket SpectralWavepacket::gaussian(double sigma, std::size_t bins, double center) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("Gaussian width must be positive");
    }
    if (bins < 2) {
        throw std::invalid_argument("Gaussian wavepacket needs at least two bins");
    }
    std::vector<Bin> out(bins);
    const double half_span = 5.0 * sigma;
    const double step = 2.0 * half_span / static_cast<double>(bins - 1);
    double total = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        const double x = -half_span + step * static_cast<double>(i);
        const double a = std::exp(-x * x / (2.0 * sigma * sigma));
        out[i] = {center + x, complex(a, 0.0)};
        total += a * a;
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto &b : out) {
        b.amplitude *= scale;
    }
    return SpectralWavepacket(std::move(out));
}

double SpectralWavepacket::norm2() const {
    double s = 0.0;
    for (const auto &b : bins_) {
        s += std::norm(b.amplitude);
    }
    return s;
}

SpectralWavepacket filter_wavepacket(const SpectralWavepacket &wp, const EmitterParams &params,
                                     ScatterChannel which) {
    std::vector<SpectralWavepacket::Bin> out = wp.bins();
    for (auto &b : out) {
        const auto c = compute_coefficients(params.shifted(b.detuning));
        b.amplitude *= which == ScatterChannel::reflected ? c.r : c.t;
    }
    return SpectralWavepacket(std::move(out));
}

double overlap_success_probability(const SpectralWavepacket &wp, const EmitterParams &params) {
    if (std::abs(wp.norm2() - 1.0) > 1e-9) {
        throw std::invalid_argument("success probability needs a normalized wavepacket");
    }
    complex overlap(0.0, 0.0);
    for (const auto &b : wp.bins()) {
        overlap += std::norm(b.amplitude) * compute_coefficients(params.shifted(b.detuning)).r;
    }
    return std::clamp(std::norm(overlap), 0.0, 1.0);
}

double reflected_norm(const SpectralWavepacket &wp, const EmitterParams &params) {
    return filter_wavepacket(wp, params, ScatterChannel::reflected).norm2();
}

}  // namespace hqr
