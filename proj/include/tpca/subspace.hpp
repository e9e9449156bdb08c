// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "tpca/linalg.hpp"
#include "tpca/pca.hpp"
#include "tpca/tensor.hpp"
#include "tpca/tensor_operator.hpp"

// Snapshot (Gram) subspace basis: eigendecompose the N x N matrix of
// sample inner products instead of the L x L covariance, then lift the
// eigenvectors back through the samples. Equivalent leading subspace at a
// fraction of the cost whenever N << L.

namespace tpca {

struct SubspaceBasis {
    Shape sample_shape;
    /// sigma_l = sqrt(lambda_l) of the snapshot Gram matrix, descending,
    /// truncated to numerical rank.
    std::vector<double> singular_values;
    /// N x r mixing weights, seeded as b[n, l] = U[n, l] / sigma_l and
    /// then re-orthonormalized in-span alongside the components, so
    /// component l is sum_n b[n, l] X_n and the components are
    /// orthonormal even when the spectrum spans the whole rank cut.
    Matrix mixing;
    /// The r orthonormal component tensors.
    std::vector<DenseTensor> components;
    /// Full descending eigenvalue list of the Gram matrix (length N).
    std::vector<double> gram_eigenvalues;

    std::size_t rank() const noexcept { return singular_values.size(); }
};

/// G[n, m] = <X_n, X_m>, symmetric positive semi-definite.
Matrix gram_matrix(const TensorDataset& x);

/// Snapshot basis of a dataset: eigendecompose gram_matrix(x), cut at
/// numerical rank, lift eigenvectors to component tensors.
SubspaceBasis subspace_basis(const TensorDataset& x);

/// Rank-M model from the leading M snapshot components. Coefficients are
/// direct projections <X_n, Q_l> (for the generating dataset these equal
/// U[n, l] * sigma_l up to rounding); the error report compares the
/// measured total squared error with the tail sum_{l > M} sigma_l^2.
SubspaceModel project_subspace(const TensorDataset& x, const SubspaceBasis& b,
                               std::size_t M);

} // namespace tpca
