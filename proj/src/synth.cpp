// SPDX-License-Identifier: Apache-2.0
#include "tpca/synth.hpp"

#include <cmath>
#include <string>

#include "tpca/errors.hpp"
#include "tpca/kernels.hpp"

namespace tpca {

DenseTensor random_tensor(const Shape& s, SplitMix64& rng) {
    DenseTensor t{s};
    for (double& v : t.values()) v = rng.next_symmetric();
    return t;
}

TensorDataset random_dataset(const Shape& s, std::size_t n, SplitMix64& rng) {
    TensorDataset out{s, n};
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : out.sample(i)) v = rng.next_symmetric();
    }
    return out;
}

SelfAdjointOperator random_operator(const Shape& domain, SplitMix64& rng) {
    const std::size_t L = domain.total_size();
    std::vector<std::size_t> dims = domain.dims();
    dims.insert(dims.end(), domain.dims().begin(), domain.dims().end());
    DenseTensor entries = random_tensor(Shape(std::move(dims)), rng);
    double* data = entries.data();
    for (std::size_t n = 0; n < L; ++n) {
        for (std::size_t m = n + 1; m < L; ++m) {
            const double v = 0.5 * (data[n + m * L] + data[m + n * L]);
            data[n + m * L] = v;
            data[m + n * L] = v;
        }
    }
    return SelfAdjointOperator::from_tensor(std::move(entries));
}

std::vector<DenseTensor> random_orthonormal_set(const Shape& s, std::size_t count,
                                                SplitMix64& rng) {
    if (count > s.total_size()) {
        throw ArgumentError("cannot fit " + std::to_string(count)
                            + " orthonormal tensors in a space of dimension "
                            + std::to_string(s.total_size()));
    }
    std::vector<DenseTensor> set;
    set.reserve(count);
    while (set.size() < count) {
        DenseTensor t = random_tensor(s, rng);
        for (const DenseTensor& q : set) {
            kernels::axpy(-inner(t, q), q.data(), t.data(), t.size());
        }
        const double nrm = norm(t);
        if (nrm < 1e-6) continue;
        t *= 1.0 / nrm;
        set.push_back(std::move(t));
    }
    return set;
}

TensorDataset planted_rank_dataset(const Shape& s, std::size_t n, std::size_t rank,
                                   SplitMix64& rng, double noise) {
    if (rank < 1 || rank > n) {
        throw ArgumentError("planted rank " + std::to_string(rank)
                            + " out of range 1.." + std::to_string(n));
    }
    const std::vector<DenseTensor> dirs = random_orthonormal_set(s, rank, rng);
    TensorDataset out{s, n};
    for (std::size_t i = 0; i < n; ++i) {
        DenseTensor x{s};
        if (i < rank) {
            // Guarantees the coefficient block has full column rank.
            kernels::axpy(2.0 + static_cast<double>(rank - i), dirs[i].data(),
                          x.data(), x.size());
        } else {
            for (std::size_t l = 0; l < rank; ++l) {
                kernels::axpy(rng.next_symmetric(), dirs[l].data(), x.data(),
                              x.size());
            }
        }
        if (noise > 0.0) {
            for (double& v : x.values()) v += noise * rng.next_symmetric();
        }
        out.set_sample(i, x);
    }
    return out;
}

TensorDataset random_image_dataset(std::size_t h, std::size_t w, std::size_t n,
                                   std::size_t patterns, SplitMix64& rng) {
    if (patterns < 1) throw ArgumentError("need at least one pattern image");
    const Shape shape{h, w, 3};
    std::vector<DenseTensor> base;
    base.reserve(patterns);
    for (std::size_t p = 0; p < patterns; ++p) {
        DenseTensor t{shape};
        for (double& v : t.values()) v = rng.next_unit();
        base.push_back(std::move(t));
    }
    TensorDataset out{shape, n};
    std::vector<double> weights(patterns);
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (double& wgt : weights) {
            wgt = rng.next_unit() + 1e-3;
            total += wgt;
        }
        DenseTensor x{shape};
        for (std::size_t p = 0; p < patterns; ++p) {
            kernels::axpy(weights[p] / total, base[p].data(), x.data(), x.size());
        }
        out.set_sample(i, x);
    }
    return out;
}

} // namespace tpca
