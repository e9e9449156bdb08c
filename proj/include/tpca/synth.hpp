// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tpca/tensor.hpp"
#include "tpca/tensor_operator.hpp"

// Seeded synthetic data. The generator is SplitMix64, chosen because its
// output is a short fixed sequence of integer operations: identical seeds
// give bit-identical tensors on every platform, which the reproducibility
// guarantees lean on.

namespace tpca {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution, exactly representable.
    double next_unit() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [-1, 1).
    double next_symmetric() noexcept { return 2.0 * next_unit() - 1.0; }

private:
    std::uint64_t state_;
};

/// Entries uniform in [-1, 1).
DenseTensor random_tensor(const Shape& s, SplitMix64& rng);

/// N independent uniform samples.
TensorDataset random_dataset(const Shape& s, std::size_t n, SplitMix64& rng);

/// Random self-adjoint operator: uniform order-2d entries, symmetrized.
SelfAdjointOperator random_operator(const Shape& domain, SplitMix64& rng);

/// `count` orthonormal tensors via Gram-Schmidt on random draws.
std::vector<DenseTensor> random_orthonormal_set(const Shape& s, std::size_t count,
                                                SplitMix64& rng);

/// Samples spanning exactly `rank` dimensions: random orthonormal
/// directions combined with a full-rank coefficient block (the first
/// `rank` samples are scaled copies of the directions, the rest random
/// mixtures), plus optional iid noise of the given amplitude.
TensorDataset planted_rank_dataset(const Shape& s, std::size_t n, std::size_t rank,
                                   SplitMix64& rng, double noise = 0.0);

/// N images of shape (h, w, 3) with values in [0, 1]: convex mixtures of
/// `patterns` random pattern images, so the dataset is approximately
/// low-rank while staying in the displayable range.
TensorDataset random_image_dataset(std::size_t h, std::size_t w, std::size_t n,
                                   std::size_t patterns, SplitMix64& rng);

} // namespace tpca
