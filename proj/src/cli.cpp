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

#include "hqr/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hqr/batch.hpp"
#include "hqr/number_format.hpp"
#include "hqr/protocols.hpp"
#include "hqr/scattering.hpp"

namespace hqr {

namespace {

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_complex(complex z) {
    const double im = z.imag();
    return format_number(z.real()) + (std::signbit(im) ? "-" : "+") + format_number(std::abs(im)) + "i";
}

double parse_double(const std::string &text, const std::string &what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw std::invalid_argument("bad " + what + ": '" + text + "'");
    }
    if (used != text.size()) {
        throw std::invalid_argument("bad " + what + ": '" + text + "'");
    }
    return v;
}

/// "gamma,delta" (real) or "gamma_re,gamma_im,delta_re,delta_im".
NoiseParams parse_noise(const std::string &text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        parts.push_back(parse_double(trim(item), "noise component"));
    }
    if (parts.size() == 2) {
        return NoiseParams(complex(parts[0], 0.0), complex(parts[1], 0.0));
    }
    if (parts.size() == 4) {
        return NoiseParams(complex(parts[0], parts[1]), complex(parts[2], parts[3]));
    }
    throw std::invalid_argument("noise takes 'gamma,delta' or 'gamma_re,gamma_im,delta_re,delta_im'");
}

/// Writes to the named file, or to `fallback` when the name is empty.
class Sink {
   public:
    Sink(const std::string &path, std::ostream &fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            if (!file_) {
                throw std::runtime_error("cannot open '" + path + "' for writing");
            }
            stream_ = &file_;
        }
    }
    std::ostream &get() { return *stream_; }

   private:
    std::ofstream file_;
    std::ostream *stream_;
};

void kv(std::ostream &out, const std::string &key, const std::string &value) { out << key << '=' << value << '\n'; }
void kv(std::ostream &out, const std::string &key, double value) { kv(out, key, format_number(value)); }

std::optional<SpectralWavepacket> spectrum_from(double sigma, std::size_t bins) {
    if (sigma == 0.0) {
        return std::nullopt;
    }
    return SpectralWavepacket::gaussian(sigma, bins);
}

struct CoeffArgs {
    std::string purcell;
    double detuning = 0.0;
    double sigma = 0.0;
    std::size_t bins = 101;
};

int cmd_coeff(const CoeffArgs &a, std::ostream &out) {
    const EmitterParams params(PurcellFactor::parse(a.purcell), a.detuning);
    const auto c = compute_coefficients(params);
    const auto wp = spectrum_from(a.sigma, a.bins).value_or(SpectralWavepacket::single_bin());
    kv(out, "purcell", params.purcell.str());
    kv(out, "detuning", params.detuning);
    if (a.sigma != 0.0) {
        kv(out, "sigma", a.sigma);
        kv(out, "bins", std::to_string(a.bins));
    }
    kv(out, "r", format_complex(c.r));
    kv(out, "t", format_complex(c.t));
    kv(out, "reflectance", c.reflectance());
    kv(out, "transmittance", c.transmittance());
    kv(out, "loss", c.loss);
    kv(out, "p_s", overlap_success_probability(wp, params));
    kv(out, "reflected_norm", reflected_norm(wp, params));
    return 0;
}

struct SweepArgs {
    std::string axis;
    double from = 0.0;
    double to = 0.0;
    std::size_t points = 50;
    std::string purcell = "inf";
    double detuning = 0.0;
    bool protocols = false;
    double sigma = 0.0;
    std::size_t bins = 101;
    std::string output;
    bool serial = false;
};

int cmd_sweep(const SweepArgs &a, std::ostream &out) {
    const SweepAxis axis = parse_axis(a.axis);
    const auto values = linear_grid(a.from, a.to, a.points);
    const EmitterParams fixed(PurcellFactor::parse(a.purcell), a.detuning);
    const auto wp = spectrum_from(a.sigma, a.bins).value_or(SpectralWavepacket::single_bin());
    const auto rows =
        run_sweep(axis, values, fixed, wp, a.protocols, a.serial ? Execution::serial : Execution::parallel);
    Sink sink(a.output, out);
    std::ostream &csv = sink.get();
    csv << to_string(axis) << ",p_s,reflected_norm";
    if (a.protocols) {
        csv << ",p1,p2,p3";
    }
    csv << '\n';
    for (const auto &r : rows) {
        csv << format_number(r.value) << ',' << format_number(r.p_s) << ',' << format_number(r.reflected_norm);
        if (r.protocols) {
            csv << ',' << format_number(r.protocols->creation) << ',' << format_number(r.protocols->swapping) << ','
                << format_number(r.protocols->purification);
        }
        csv << '\n';
    }
    return 0;
}

struct RunArgs {
    std::string protocol;
    std::string purcell = "inf";
    double detuning = 0.0;
    std::string noise = "1,0";
    double fidelity = 1.0;
    bool enumerate = false;
    std::uint64_t trials = 0;
    std::optional<std::uint64_t> seed;
    double sigma = 0.0;
    std::size_t bins = 101;
    bool no_wfc = false;
    std::string csv;
    bool serial = false;
};

std::string optional_number(const std::optional<double> &v) { return v ? format_number(*v) : ""; }
std::string bin_text(const std::optional<std::size_t> &b) { return b ? std::to_string(*b) : ""; }

int cmd_run(const RunArgs &a, std::ostream &out) {
    ProtocolConfig config;
    config.kind = parse_protocol(a.protocol);
    config.params = EmitterParams(PurcellFactor::parse(a.purcell), a.detuning);
    config.noise = parse_noise(a.noise);
    config.input_fidelity = a.fidelity;
    config.spectrum = spectrum_from(a.sigma, a.bins);
    config.waveform_corrector = !a.no_wfc;
    if (config.kind == ProtocolKind::purification && (!(a.fidelity > 0.0) || a.fidelity > 1.0)) {
        throw std::invalid_argument("--fidelity must lie in (0, 1]");
    }
    const bool sample = a.trials > 0;
    if (sample && a.enumerate) {
        throw std::invalid_argument("--enumerate and --trials are mutually exclusive");
    }
    if (sample && !a.seed) {
        throw std::invalid_argument("sampling with --trials requires --seed");
    }

    kv(out, "protocol", to_string(config.kind));
    kv(out, "mode", sample ? "sample" : "enumerate");
    kv(out, "purcell", config.params.purcell.str());
    kv(out, "detuning", config.params.detuning);
    if (config.kind == ProtocolKind::creation) {
        kv(out, "noise_gamma", format_complex(config.noise.gamma()));
        kv(out, "noise_delta", format_complex(config.noise.delta()));
        kv(out, "waveform_corrector", config.waveform_corrector ? "on" : "off");
    }
    if (config.kind == ProtocolKind::purification) {
        kv(out, "input_fidelity", config.input_fidelity);
    }
    if (config.spectrum) {
        kv(out, "sigma", a.sigma);
        kv(out, "bins", std::to_string(a.bins));
    }
    const auto analytic =
        analytic_protocol_success(config.params, config.spectrum.value_or(SpectralWavepacket::single_bin()));
    const double expected = config.kind == ProtocolKind::creation   ? analytic.creation
                            : config.kind == ProtocolKind::swapping ? analytic.swapping
                                                                    : analytic.purification;

    if (!sample) {
        const auto outcomes = enumerate_protocol(config);
        const auto s = summarize(outcomes);
        kv(out, "branches", std::to_string(outcomes.size()));
        kv(out, "success_probability", s.success_probability);
        kv(out, "herald_fail_probability", s.herald_fail_probability);
        kv(out, "loss_probability", s.loss_probability);
        if (config.kind == ProtocolKind::purification) {
            kv(out, "discard_probability", s.discard_probability);
            kv(out, "scatter_success_probability", s.heralded_probability);
            kv(out, "keep_probability", s.keep_probability);
            kv(out, "F_out", s.fidelity);
        }
        kv(out, "fidelity", s.fidelity);
        kv(out, "min_fidelity", s.min_fidelity);
        kv(out, "analytic_success_probability", expected);
        if (!a.csv.empty()) {
            Sink sink(a.csv, out);
            std::ostream &csv = sink.get();
            csv << "status,probability,herald,atom_outcomes,correction,fidelity,bin\n";
            for (const auto &o : outcomes) {
                csv << to_string(o.status) << ',' << format_number(o.probability) << ',' << o.herald << ",\""
                    << o.atom_outcomes << "\"," << o.correction << ',' << optional_number(o.fidelity) << ','
                    << bin_text(o.bin) << '\n';
            }
        }
        return 0;
    }

    const auto records = run_trials(config, a.trials, *a.seed, a.serial ? Execution::serial : Execution::parallel);
    const auto s = summarize_trials(records);
    kv(out, "trials", std::to_string(s.trials));
    kv(out, "seed", std::to_string(*a.seed));
    kv(out, "success_count", std::to_string(s.success));
    kv(out, "herald_fail_count", std::to_string(s.herald_fail));
    kv(out, "loss_count", std::to_string(s.loss));
    kv(out, "success_probability", s.fraction(s.success));
    kv(out, "herald_fail_probability", s.fraction(s.herald_fail));
    kv(out, "loss_probability", s.fraction(s.loss));
    if (config.kind == ProtocolKind::purification) {
        kv(out, "discard_count", std::to_string(s.discarded));
        kv(out, "discard_probability", s.fraction(s.discarded));
        kv(out, "scatter_success_probability", s.fraction(s.success + s.discarded));
        const std::uint64_t heralded = s.success + s.discarded;
        kv(out, "keep_probability",
           heralded == 0 ? 0.0 : static_cast<double>(s.success) / static_cast<double>(heralded));
        kv(out, "F_out", s.mean_fidelity);
    }
    kv(out, "fidelity", s.mean_fidelity);
    kv(out, "min_fidelity", s.min_fidelity);
    kv(out, "analytic_success_probability", expected);
    if (!a.csv.empty()) {
        Sink sink(a.csv, out);
        std::ostream &csv = sink.get();
        csv << "trial,status,herald,atom_outcomes,correction,fidelity,bin\n";
        for (const auto &r : records) {
            csv << r.trial << ',' << to_string(r.status) << ',' << r.herald << ",\"" << r.atom_outcomes << "\","
                << r.correction << ',' << (std::isnan(r.fidelity) ? "" : format_number(r.fidelity)) << ','
                << bin_text(r.bin) << '\n';
        }
    }
    return 0;
}

/// Turns config-file pairs into command-line tokens placed ahead of the real
/// arguments, so flags given on the command line take precedence.
std::vector<std::string> config_tokens(const std::map<std::string, std::string> &config, const CLI::App &sub) {
    std::vector<std::string> tokens;
    for (const auto &[key, value] : config) {
        if (key == "config") {
            throw std::invalid_argument("config files cannot include other config files");
        }
        const CLI::Option *opt = nullptr;
        try {
            opt = sub.get_option("--" + key);
        } catch (const CLI::OptionNotFound &) {
            throw std::invalid_argument("unknown config key '" + key + "' for '" + sub.get_name() + "'");
        }
        if (opt->get_expected_min() == 0) {
            if (value == "true" || value == "1" || value == "yes" || value == "on") {
                tokens.push_back("--" + key);
            } else if (!(value == "false" || value == "0" || value == "no" || value == "off")) {
                throw std::invalid_argument("config key '" + key + "' expects a boolean");
            }
        } else {
            tokens.push_back("--" + key);
            tokens.push_back(value);
        }
    }
    return tokens;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config file '" + path + "'");
    }
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
            throw std::runtime_error(path + ":" + std::to_string(number) + ": expected key=value");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Heralded quantum-repeater simulator", "hqr"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;

    CoeffArgs coeff;
    auto *c = app.add_subcommand("coeff", "Scattering coefficients and success probability");
    c->add_option("--purcell", coeff.purcell, "Purcell factor (number or inf)")->required();
    c->add_option("--detuning", coeff.detuning, "Detuning in units of the waveguide decay rate");
    c->add_option("--sigma", coeff.sigma, "Gaussian amplitude width; 0 for a monochromatic photon")
        ->check(CLI::NonNegativeNumber);
    c->add_option("--bins", coeff.bins, "Spectral bins")->check(CLI::Range(2, 100000));
    c->add_option("--config", config_path, "key=value defaults file");

    SweepArgs sweep;
    auto *s = app.add_subcommand("sweep", "CSV sweep of p_s (and protocol success) along one axis");
    s->add_option("--axis", sweep.axis, "purcell or detuning")->required();
    s->add_option("--from", sweep.from, "First axis value")->required();
    s->add_option("--to", sweep.to, "Last axis value")->required();
    s->add_option("--points", sweep.points, "Number of grid points");
    s->add_option("--purcell", sweep.purcell, "Fixed Purcell factor for detuning sweeps");
    s->add_option("--detuning", sweep.detuning, "Fixed detuning for Purcell sweeps");
    s->add_flag("--protocols", sweep.protocols, "Add p1, p2, p3 columns");
    s->add_option("--sigma", sweep.sigma, "Gaussian amplitude width; 0 for a monochromatic photon")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--bins", sweep.bins, "Spectral bins")->check(CLI::Range(2, 100000));
    s->add_option("--output", sweep.output, "CSV file (default: standard output)");
    s->add_flag("--serial", sweep.serial, "Use the serial reference loop");
    s->add_option("--config", config_path, "key=value defaults file");

    RunArgs run;
    auto *r = app.add_subcommand("run", "Run a protocol by enumeration or seeded sampling");
    r->add_option("protocol,--protocol", run.protocol, "creation, swap or purify")->required();
    r->add_option("--purcell", run.purcell, "Purcell factor (number or inf)");
    r->add_option("--detuning", run.detuning, "Detuning in units of the waveguide decay rate");
    r->add_option("--noise", run.noise, "Channel noise gamma,delta (or re/im pairs)");
    r->add_option("--fidelity", run.fidelity, "Input pair fidelity for purification");
    r->add_flag("--enumerate", run.enumerate, "Exact branch enumeration (default)");
    r->add_option("--trials", run.trials, "Number of sampled trials");
    r->add_option("--seed", run.seed, "Seed for sampled trials");
    r->add_option("--sigma", run.sigma, "Gaussian amplitude width; 0 for a monochromatic photon")
        ->check(CLI::NonNegativeNumber);
    r->add_option("--bins", run.bins, "Spectral bins")->check(CLI::Range(2, 100000));
    r->add_flag("--no-wfc", run.no_wfc, "Disable the waveform corrector (creation)");
    r->add_option("--csv", run.csv, "Per-branch or per-trial CSV file");
    r->add_flag("--serial", run.serial, "Use the serial reference loop");
    r->add_option("--config", config_path, "key=value defaults file");

    try {
        std::vector<std::string> tokens = args;
        // Locate the subcommand and an optional config file before parsing.
        const auto sub_it = std::find_if(tokens.begin(), tokens.end(),
                                         [](const std::string &t) { return !t.empty() && t.front() != '-'; });
        std::string config_file;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i] == "--config" && i + 1 < tokens.size()) {
                config_file = tokens[i + 1];
            } else if (tokens[i].rfind("--config=", 0) == 0) {
                config_file = tokens[i].substr(9);
            }
        }
        if (!config_file.empty() && sub_it != tokens.end()) {
            const CLI::App *sub = nullptr;
            for (const auto *candidate : {c, s, r}) {
                if (candidate->get_name() == *sub_it) {
                    sub = candidate;
                }
            }
            if (sub != nullptr) {
                const auto extra = config_tokens(read_config_file(config_file), *sub);
                tokens.insert(sub_it + 1, extra.begin(), extra.end());
            }
        }
        std::reverse(tokens.begin(), tokens.end());
        app.parse(tokens);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 || e.get_exit_code() == 0 ? code : 2;
    } catch (const std::exception &e) {
        err << "hqr: " << e.what() << '\n';
        return 2;
    }

    try {
        if (c->parsed()) {
            return cmd_coeff(coeff, out);
        }
        if (s->parsed()) {
            return cmd_sweep(sweep, out);
        }
        return cmd_run(run, out);
    } catch (const std::exception &e) {
        err << "hqr: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace hqr
