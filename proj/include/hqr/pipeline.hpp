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

#ifndef HQR_PIPELINE_HPP
#define HQR_PIPELINE_HPP

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hqr/joint_state.hpp"
#include "hqr/rng.hpp"

namespace hqr {

enum class BranchStatus { active, success, herald_fail, loss, discarded };

/// One classical record attached to a branch, e.g. {"detector", "D2"}.
struct Event {
    std::string key;
    std::string value;
    bool operator==(const Event &) const = default;
};

/// A branch of a protocol run. The state is unnormalized and its weight
/// (norm^2 or trace) is the absolute branch probability; loss branches carry
/// no state.
template <class State>
struct Branch {
    BranchStatus status = BranchStatus::active;
    double weight = 0.0;
    std::optional<State> state;
    std::vector<Event> events;

    const std::string *find(std::string_view key) const {
        for (const auto &e : events) {
            if (e.key == key) {
                return &e.value;
            }
        }
        return nullptr;
    }
};

template <class State>
Branch<State> root_branch(State state) {
    Branch<State> b;
    b.weight = state.weight();
    b.state = std::move(state);
    return b;
}

/// Maps one active branch to its children.
template <class State>
using Stage = std::function<std::vector<Branch<State>>(const Branch<State> &)>;

/// Child of `parent` holding `state`, with an optional event appended.
template <class State>
Branch<State> child_of(const Branch<State> &parent, State state, std::optional<Event> event = {},
                       BranchStatus status = BranchStatus::active) {
    Branch<State> b;
    b.status = status;
    b.weight = state.weight();
    b.state = std::move(state);
    b.events = parent.events;
    if (event) {
        b.events.push_back(std::move(*event));
    }
    return b;
}

/// Deterministic single-child stage.
template <class State>
Stage<State> map_stage(std::function<State(const State &)> fn) {
    return [fn = std::move(fn)](const Branch<State> &parent) {
        return std::vector<Branch<State>>{child_of(parent, fn(*parent.state))};
    };
}

/// Outcomes lighter than this fraction of the parent are structural zeros.
inline constexpr double structural_zero = 1e-13;

/// Projective measurement of `id` that absorbs the subsystem. Outcome k is
/// recorded as {key, labels[k]}.
template <class State>
Stage<State> measure_stage(std::string id, MeasurementBasis basis, std::string key,
                           std::array<std::string, 2> labels) {
    return [=](const Branch<State> &parent) {
        std::vector<Branch<State>> out;
        for (int k = 0; k < 2; ++k) {
            State s = parent.state->contract(id, basis_vector(basis, k));
            if (s.weight() < structural_zero * parent.weight) {
                continue;
            }
            out.push_back(child_of(parent, std::move(s), Event{key, labels[static_cast<std::size_t>(k)]}));
        }
        return out;
    };
}

/// Runs every stage on every active branch. Terminal branches pass through.
template <class State>
std::vector<Branch<State>> enumerate_branches(std::vector<Branch<State>> branches,
                                              std::span<const Stage<State>> stages) {
    for (const auto &stage : stages) {
        std::vector<Branch<State>> next;
        next.reserve(branches.size() * 2);
        for (auto &b : branches) {
            if (b.status != BranchStatus::active) {
                next.push_back(std::move(b));
                continue;
            }
            for (auto &c : stage(b)) {
                next.push_back(std::move(c));
            }
        }
        branches = std::move(next);
    }
    return branches;
}

/// Picks one of `options` with probability proportional to its weight.
template <class T>
T pick_weighted(std::vector<T> options, double (*weight_of)(const T &), TrialRng &rng) {
    double total = 0.0;
    for (const auto &o : options) {
        total += weight_of(o);
    }
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (auto &o : options) {
        acc += weight_of(o);
        if (u < acc) {
            return std::move(o);
        }
    }
    return std::move(options.back());
}

/// Follows a single trajectory, choosing each stage's child by weight.
template <class State>
Branch<State> sample_branch(Branch<State> branch, std::span<const Stage<State>> stages, TrialRng &rng) {
    for (const auto &stage : stages) {
        if (branch.status != BranchStatus::active) {
            break;
        }
        auto children = stage(branch);
        if (children.empty()) {
            throw std::logic_error("stage produced no children");
        }
        branch = pick_weighted<Branch<State>>(
            std::move(children), [](const Branch<State> &b) { return b.weight; }, rng);
    }
    return branch;
}

}  // namespace hqr

#endif  // HQR_PIPELINE_HPP
