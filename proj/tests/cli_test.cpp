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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hqr/batch.hpp"
#include "hqr/number_format.hpp"
#include "hqr/protocols.hpp"
#include "hqr/scattering.hpp"

namespace hqr {
namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;

    std::map<std::string, std::string> pairs() const {
        std::map<std::string, std::string> kv;
        std::istringstream in(out);
        std::string line;
        while (std::getline(in, line)) {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                kv[line.substr(0, eq)] = line.substr(eq + 1);
            }
        }
        return kv;
    }

    std::vector<std::string> lines() const {
        std::vector<std::string> v;
        std::istringstream in(out);
        std::string line;
        while (std::getline(in, line)) {
            v.push_back(line);
        }
        return v;
    }
};

CliResult cli(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    CliResult r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
   public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("hqr_cli_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string &name) const { return (path_ / name).string(); }

   private:
    std::filesystem::path path_;
};

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    return cells;
}

TEST(Coeff, DetunedHighPurcell) {
    const auto r = cli({"coeff", "--purcell", "100", "--detuning", "0.1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto kv = r.pairs();
    EXPECT_NEAR(std::stod(kv.at("p_s")), 0.943307, 5e-7);
    EXPECT_EQ(kv.at("p_s"), format_number(compute_coefficients({PurcellFactor(100.0), 0.1}).reflectance()));
    EXPECT_TRUE(r.err.empty());
}

TEST(Coeff, UnitPurcell) {
    const auto kv = cli({"coeff", "--purcell", "1", "--detuning", "0"}).pairs();
    EXPECT_EQ(kv.at("r"), "-0.5+0i");
    EXPECT_EQ(kv.at("loss"), "0.5");
}

TEST(Coeff, PerfectMirror) {
    const auto kv = cli({"coeff", "--purcell", "inf", "--detuning", "0"}).pairs();
    EXPECT_EQ(kv.at("r"), "-1+0i");
    EXPECT_EQ(kv.at("loss"), "0");
    EXPECT_EQ(kv.at("purcell"), "inf");
}

TEST(Coeff, BadArgumentsFail) {
    for (const auto &args : std::vector<std::vector<std::string>>{{"coeff"},
                                                                  {"coeff", "--purcell", "-3"},
                                                                  {"coeff", "--purcell", "abc"},
                                                                  {"coeff", "--purcell", "5", "--bogus", "1"},
                                                                  {}}) {
        const auto r = cli(args);
        EXPECT_NE(r.code, 0);
        EXPECT_FALSE(r.err.empty());
    }
}

TEST(Sweep, PurcellAxisIsIncreasing) {
    const auto r = cli({"sweep", "--axis", "purcell", "--from", "1", "--to", "50", "--points", "50"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = r.lines();
    ASSERT_EQ(lines.size(), 51U);
    EXPECT_EQ(lines[0], "purcell,p_s,reflected_norm");
    double prev = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double p = std::stod(split_csv(lines[i]).at(1));
        EXPECT_GT(p, prev);
        prev = p;
    }
}

TEST(Sweep, DetuningAxisIsDecreasing) {
    const auto r = cli({"sweep", "--axis", "detuning", "--from", "0", "--to", "0.5", "--points", "26", "--purcell", "50"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = r.lines();
    double prev = 2.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double p = std::stod(split_csv(lines[i]).at(1));
        EXPECT_LT(p, prev);
        prev = p;
    }
}

TEST(Sweep, ProtocolColumnsAtLabPurcell) {
    const auto r = cli({"sweep", "--axis", "purcell", "--from", "63.1", "--to", "63.1", "--points", "1", "--protocols"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto lines = r.lines();
    ASSERT_EQ(lines.size(), 2U);
    EXPECT_EQ(lines[0], "purcell,p_s,reflected_norm,p1,p2,p3");
    const auto cells = split_csv(lines[1]);
    EXPECT_NEAR(std::stod(cells.at(3)), 0.9100, 5e-5);
    EXPECT_NEAR(std::stod(cells.at(4)), 0.9390, 5e-5);
    EXPECT_NEAR(std::stod(cells.at(5)), 0.8818, 5e-5);
}

TEST(Sweep, CellsAreLibraryValuesVerbatim) {
    const auto r = cli({"sweep", "--axis", "detuning", "--from", "-0.2", "--to", "0.2", "--points", "9", "--purcell",
                        "20", "--sigma", "0.05", "--bins", "41", "--protocols"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto values = linear_grid(-0.2, 0.2, 9);
    const auto wp = SpectralWavepacket::gaussian(0.05, 41);
    const auto lines = r.lines();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const EmitterParams p(PurcellFactor(20.0), values[i]);
        const auto cells = split_csv(lines[i + 1]);
        EXPECT_EQ(cells.at(0), format_number(values[i]));
        EXPECT_EQ(cells.at(1), format_number(overlap_success_probability(wp, p)));
        EXPECT_EQ(cells.at(2), format_number(reflected_norm(wp, p)));
        EXPECT_EQ(cells.at(5), format_number(analytic_protocol_success(p, wp).purification));
    }
}

TEST(Sweep, BadRangesFail) {
    EXPECT_NE(cli({"sweep", "--axis", "purcell", "--from", "5", "--to", "1"}).code, 0);
    EXPECT_NE(cli({"sweep", "--axis", "purcell", "--from", "1", "--to", "5", "--points", "0"}).code, 0);
    EXPECT_NE(cli({"sweep", "--axis", "speed", "--from", "1", "--to", "5"}).code, 0);
    EXPECT_NE(cli({"sweep", "--axis", "purcell", "--from", "-1", "--to", "5"}).code, 0);
}

TEST(Sweep, OutputFileUsesLineFeeds) {
    TempDir dir;
    const auto path = dir.file("sweep.csv");
    const auto r = cli({"sweep", "--axis", "purcell", "--from", "1", "--to", "10", "--points", "4", "--output", path});
    ASSERT_EQ(r.code, 0) << r.err;
    const std::string text = slurp(path);
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(text.rfind("purcell,p_s,reflected_norm\n", 0), 0U);
    EXPECT_EQ(text.back(), '\n');
}

TEST(Run, IdealCreationUnderNoise) {
    const auto r = cli({"run", "creation", "--purcell", "inf", "--noise", "0.6,0.8"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto kv = r.pairs();
    EXPECT_EQ(kv.at("mode"), "enumerate");
    EXPECT_NEAR(std::stod(kv.at("success_probability")), 1.0, 1e-12);
    EXPECT_NEAR(std::stod(kv.at("fidelity")), 1.0, 1e-12);
    EXPECT_EQ(kv.at("noise_gamma"), "0.6+0i");
}

TEST(Run, PurifyEnumeration) {
    const auto kv = cli({"run", "purify", "--fidelity", "0.8", "--purcell", "inf", "--enumerate"}).pairs();
    EXPECT_NEAR(std::stod(kv.at("F_out")), 0.941176, 5e-7);
    EXPECT_NEAR(std::stod(kv.at("keep_probability")), 0.68, 1e-12);
}

TEST(Run, SwapAtLabPurcell) {
    const auto kv = cli({"run", "swap", "--purcell", "63.1", "--enumerate"}).pairs();
    EXPECT_NEAR(std::stod(kv.at("success_probability")), 0.9390, 5e-5);
    EXPECT_NEAR(std::stod(kv.at("success_probability")), std::stod(kv.at("analytic_success_probability")), 1e-10);
}

TEST(Run, InvalidInputsFail) {
    EXPECT_NE(cli({"run", "teleport"}).code, 0);
    EXPECT_NE(cli({"run", "creation", "--trials", "10"}).code, 0);
    EXPECT_NE(cli({"run", "creation", "--noise", "0.6,0.7"}).code, 0);
    EXPECT_NE(cli({"run", "purify", "--fidelity", "1.5"}).code, 0);
    EXPECT_NE(cli({"run", "creation", "--purcell", "0"}).code, 0);
    const auto r = cli({"run", "teleport"});
    EXPECT_NE(r.err.find("teleport"), std::string::npos);
}

TEST(Run, SampledModeIsLabeledAndReproducible) {
    TempDir dir;
    const std::vector<std::string> base{"run", "purify", "--purcell", "12", "--fidelity", "0.7", "--trials", "3000",
                                        "--seed", "42"};
    auto with_csv = [&](const std::string &name, bool serial) {
        auto args = base;
        args.push_back("--csv");
        args.push_back(dir.file(name));
        if (serial) {
            args.push_back("--serial");
        }
        return cli(args);
    };
    const auto a = with_csv("a.csv", false);
    const auto b = with_csv("b.csv", false);
    const auto c = with_csv("c.csv", true);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.pairs().at("mode"), "sample");
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    const std::string csv = slurp(dir.file("a.csv"));
    EXPECT_FALSE(csv.empty());
    EXPECT_EQ(csv, slurp(dir.file("b.csv")));
    EXPECT_EQ(csv, slurp(dir.file("c.csv")));
    EXPECT_EQ(csv.find('\r'), std::string::npos);

    auto other = base;
    other[other.size() - 1] = "43";
    EXPECT_NE(cli(other).out, a.out);
}

TEST(Config, FileSuppliesDefaultsAndFlagsWin) {
    TempDir dir;
    const auto path = dir.file("run.cfg");
    {
        std::ofstream cfg(path);
        cfg << "# defaults\n\npurcell = 1\ndetuning=0\n";
    }
    EXPECT_EQ(cli({"coeff", "--config", path}).pairs().at("r"), "-0.5+0i");
    EXPECT_EQ(cli({"coeff", "--config", path, "--purcell", "inf"}).pairs().at("r"), "-1+0i");
    EXPECT_EQ(cli({"coeff", "--purcell", "inf", "--config", path}).pairs().at("r"), "-1+0i");
}

TEST(Config, RejectsUnknownKeysAndMalformedLines) {
    TempDir dir;
    const auto unknown = dir.file("unknown.cfg");
    std::ofstream(unknown) << "speed=3\n";
    EXPECT_NE(cli({"coeff", "--purcell", "1", "--config", unknown}).code, 0);
    const auto malformed = dir.file("malformed.cfg");
    std::ofstream(malformed) << "purcell 3\n";
    EXPECT_NE(cli({"coeff", "--config", malformed}).code, 0);
    EXPECT_NE(cli({"coeff", "--purcell", "1", "--config", dir.file("missing.cfg")}).code, 0);
    EXPECT_THROW(read_config_file(malformed), std::runtime_error);
}

TEST(Config, ReadsPairs) {
    TempDir dir;
    const auto path = dir.file("pairs.cfg");
    std::ofstream(path) << "a=1\n  b = two words \n# c=3\n";
    const auto kv = read_config_file(path);
    EXPECT_EQ(kv.size(), 2U);
    EXPECT_EQ(kv.at("a"), "1");
    EXPECT_EQ(kv.at("b"), "two words");
}

TEST(NumberFormat, ShortestRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 0.9433072351664937, 1e-300, 12345.678, -0.5, 0.0}) {
        const std::string s = format_number(v);
        EXPECT_EQ(std::stod(s), v) << s;
    }
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(1.0), "1");
}

}  // namespace
}  // namespace hqr
