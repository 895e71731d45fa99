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

// Index arithmetic shared by JointState and DensityMatrix. Not installed.

#ifndef HQR_SRC_KERNELS_HPP
#define HQR_SRC_KERNELS_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqr/joint_state.hpp"

namespace hqr::detail {

/// Bit position of subsystem `pos` in an n-subsystem big-endian index.
inline std::size_t bit_of(std::size_t n, std::size_t pos) { return n - 1 - pos; }

/// Index offsets of the 2^k local basis states of a set of target subsystems.
struct TargetLayout {
    std::vector<std::size_t> offsets;  // offsets[local] for local in [0, 2^k)
    std::size_t mask = 0;              // union of target bits
};

inline TargetLayout make_layout(std::size_t n, const std::vector<std::size_t> &positions) {
    TargetLayout layout;
    const std::size_t k = positions.size();
    layout.offsets.assign(std::size_t{1} << k, 0);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t bit = std::size_t{1} << bit_of(n, positions[j]);
        if (layout.mask & bit) {
            throw std::invalid_argument("operator targets the same subsystem twice");
        }
        layout.mask |= bit;
    }
    for (std::size_t local = 0; local < layout.offsets.size(); ++local) {
        std::size_t off = 0;
        for (std::size_t j = 0; j < k; ++j) {
            // target j is bit (k-1-j) of the local index
            if ((local >> (k - 1 - j)) & 1U) {
                off |= std::size_t{1} << bit_of(n, positions[j]);
            }
        }
        layout.offsets[local] = off;
    }
    return layout;
}

/// In-place data <- (op on targets) data, for one contiguous state of length dim.
inline void apply_op(std::complex<double> *data, std::size_t dim, const TargetLayout &layout,
                     const Eigen::MatrixXcd &op) {
    const std::size_t m = layout.offsets.size();
    Eigen::VectorXcd in(static_cast<Eigen::Index>(m));
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & layout.mask) {
            continue;
        }
        for (std::size_t l = 0; l < m; ++l) {
            in[static_cast<Eigen::Index>(l)] = data[base | layout.offsets[l]];
        }
        for (std::size_t row = 0; row < m; ++row) {
            std::complex<double> acc(0.0, 0.0);
            for (std::size_t col = 0; col < m; ++col) {
                acc += op(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) *
                       in[static_cast<Eigen::Index>(col)];
            }
            data[base | layout.offsets[row]] = acc;
        }
    }
}

/// Inserts bit `value` at position `bit` of `reduced` (an index with that bit removed).
inline std::size_t insert_bit(std::size_t reduced, std::size_t bit, int value) {
    const std::size_t low = reduced & ((std::size_t{1} << bit) - 1);
    const std::size_t high = reduced >> bit;
    return (high << (bit + 1)) | (static_cast<std::size_t>(value) << bit) | low;
}

/// Positions of `ids` within `subsystems`; throws on unknown ids.
std::vector<std::size_t> positions_of(const std::vector<SubsystemDescriptor> &subsystems,
                                      std::span<const std::string> ids);

void check_unique_ids(const std::vector<SubsystemDescriptor> &subsystems);

/// Permutation `perm` such that new position i holds old subsystem perm[i].
std::vector<std::size_t> order_permutation(const std::vector<SubsystemDescriptor> &subsystems,
                                           std::span<const std::string> order);

/// Maps a new-order index to the old-order index for the permutation above.
inline std::size_t permuted_index(std::size_t new_index, std::size_t n, const std::vector<std::size_t> &perm) {
    std::size_t old = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if ((new_index >> bit_of(n, i)) & 1U) {
            old |= std::size_t{1} << bit_of(n, perm[i]);
        }
    }
    return old;
}

}  // namespace hqr::detail

#endif  // HQR_SRC_KERNELS_HPP
