// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "tpca/linalg.hpp"
#include "tpca/pca.hpp"
#include "tpca/tensor.hpp"
#include "tpca/tensor_operator.hpp"

// Separable (rank-1) tensor basis: one orthonormal factor per mode from
// the eigenvectors of that mode's unfolding Gram operator, combined into
// L = prod I_k outer-product basis tensors. The dataset's coordinates in
// that basis are compressed further by an SVD of the coefficient matrix.

namespace tpca {

struct Rank1Basis {
    Shape sample_shape;
    /// factors[k] is I_{k+1} x I_{k+1}; column j holds mode-(k+1)
    /// eigenvector j (descending mode spectrum order).
    std::vector<Matrix> factors;
    std::vector<std::vector<double>> mode_spectra;

    std::size_t size() const noexcept { return sample_shape.total_size(); }
};

/// Mode-k unfolding Gram operator (1-based k, unnormalized):
/// A[i, j] = sum_n sum_rest X_n[.., i, ..] X_n[.., j, ..], an I_k x I_k
/// positive semi-definite symmetric matrix.
Matrix mode_operator(const TensorDataset& x, std::size_t k);

/// Eigendecompose every mode operator. Needs order >= 1 samples.
Rank1Basis rank1_basis(const TensorDataset& x);

/// Basis tensor m (1-based): the outer product of the mode eigenvectors
/// selected by the multi-index of m.
DenseTensor basis_element(const Rank1Basis& b, std::size_t m);

/// Coefficient matrix D[n, m] = <X_n, basis element m> (computed
/// mode-wise, not by materializing the L basis tensors) together with its
/// singular value decomposition D = Y diag(sigma) Z^T.
struct CoefficientSvd {
    Matrix d;
    Svd svd;
};

CoefficientSvd coefficients(const TensorDataset& x, const Rank1Basis& b);

/// Rank-M model from the leading M left/right singular directions:
/// component l is the tensor with coordinates Z[:, l] in the rank-1
/// basis, sample coefficients are sigma_l * Y[n, l], and the error report
/// compares the Parseval-measured total squared error against the tail
/// sum_{l > M} sigma_l^2.
SubspaceModel truncate_rank1(const CoefficientSvd& c, const Rank1Basis& b,
                             std::size_t M);

} // namespace tpca
