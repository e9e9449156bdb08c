// SPDX-License-Identifier: Apache-2.0
#include "tpca/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tpca/config.hpp"
#include "tpca/errors.hpp"
#include "tpca/kernels.hpp"

namespace tpca {

Matrix gram_matrix(const TensorDataset& x) {
    const std::size_t N = x.count();
    const std::size_t L = x.sample_size();
    Matrix g(N, N);
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t m = n; m < N; ++m) {
            const double v = kernels::dot(x.sample(n).data(), x.sample(m).data(), L);
            g.at(n, m) = v;
            g.at(m, n) = v;
        }
    }
    return g;
}

SubspaceBasis subspace_basis(const TensorDataset& x) {
    const std::size_t N = x.count();
    const std::size_t L = x.sample_size();

    SymmetricEig eig = sym_eig(gram_matrix(x));
    const std::size_t r = gram_rank(eig.eigenvalues);

    SubspaceBasis b;
    b.sample_shape = x.sample_shape();
    b.gram_eigenvalues = eig.eigenvalues;
    b.singular_values.resize(r);
    b.mixing = Matrix(N, r);
    for (std::size_t l = 0; l < r; ++l) {
        const double sigma = std::sqrt(eig.eigenvalues[l]);
        b.singular_values[l] = sigma;
        for (std::size_t n = 0; n < N; ++n) {
            b.mixing.at(n, l) = eig.eigenvectors.at(n, l) / sigma;
        }
    }

    b.components.reserve(r);
    for (std::size_t l = 0; l < r; ++l) {
        DenseTensor q{x.sample_shape()};
        for (std::size_t n = 0; n < N; ++n) {
            kernels::axpy(b.mixing.at(n, l), x.sample(n).data(), q.data(), L);
        }
        b.components.push_back(std::move(q));
    }

    // The lift divides by sigma_l, so components near the rank cut carry
    // the Gram eigensolver's off-diagonal residual amplified by
    // lambda_1 / lambda_l (up to 1 / eps_rank). One modified Gram-Schmidt
    // pass inside the span restores orthonormality; the same updates are
    // applied to the mixing columns, so Q_l = sum_n X_n b[n,l] keeps
    // holding and leading spans (hence every truncated reconstruction)
    // are unchanged.
    for (std::size_t l = 0; l < r; ++l) {
        double* ql = b.components[l].data();
        for (std::size_t j = 0; j < l; ++j) {
            const double* qj = b.components[j].data();
            const double c = kernels::dot(qj, ql, L);
            kernels::axpy(-c, qj, ql, L);
            for (std::size_t n = 0; n < N; ++n) {
                b.mixing.at(n, l) -= c * b.mixing.at(n, j);
            }
        }
        const double inv = 1.0 / std::sqrt(kernels::sum_squares(ql, L));
        kernels::scale(inv, ql, L);
        for (std::size_t n = 0; n < N; ++n) b.mixing.at(n, l) *= inv;
    }
    return b;
}

SubspaceModel project_subspace(const TensorDataset& x, const SubspaceBasis& b,
                               std::size_t M) {
    if (x.sample_shape() != b.sample_shape) {
        throw DimensionError("dataset shape " + x.sample_shape().to_string()
                             + " does not match basis shape "
                             + b.sample_shape.to_string());
    }
    if (M < 1 || M > b.rank()) {
        throw ArgumentError("truncation rank " + std::to_string(M)
                            + " out of range 1.." + std::to_string(b.rank()));
    }
    const std::size_t N = x.count();
    const std::size_t L = x.sample_size();

    SubspaceModel model;
    model.method = Method::subspace;
    model.sample_shape = b.sample_shape;
    model.retained = M;
    model.spectrum = b.singular_values;
    model.components.assign(b.components.begin(), b.components.begin() + M);

    model.coefficients = Matrix(N, M);
    ErrorReport& rep = model.error;
    rep.per_sample.resize(N);
    double energy = 0.0;
    std::vector<double> recon(L);
    for (std::size_t n = 0; n < N; ++n) {
        const double* sn = x.sample(n).data();
        std::fill(recon.begin(), recon.end(), 0.0);
        for (std::size_t l = 0; l < M; ++l) {
            const double c = kernels::dot(sn, model.components[l].data(), L);
            model.coefficients.at(n, l) = c;
            kernels::axpy(c, model.components[l].data(), recon.data(), L);
        }
        kernels::axpy(-1.0, sn, recon.data(), L);
        rep.per_sample[n] = kernels::sum_squares(recon.data(), L);
        rep.total += rep.per_sample[n];
        energy += kernels::sum_squares(sn, L);
    }
    rep.mean = rep.total / static_cast<double>(N);
    for (std::size_t l = M; l < b.rank(); ++l) {
        rep.predicted += b.singular_values[l] * b.singular_values[l];
    }
    const double scale = std::max(energy, 1e-300);
    rep.relative_gap = std::abs(rep.total - rep.predicted) / scale;
    rep.within_tolerance = rep.relative_gap <= kErrorIdentityTol;
    return model;
}

} // namespace tpca
