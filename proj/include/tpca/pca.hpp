// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tpca/linalg.hpp"
#include "tpca/tensor.hpp"
#include "tpca/tensor_operator.hpp"

// Projection onto orthonormal tensor bases, truncated subspace models and
// the error identities that certify them: for an eigentensor basis of the
// dataset covariance the mean squared truncation error equals the tail
// eigenvalue sum, for coefficient-SVD and snapshot bases the total squared
// error equals the tail sum of squared singular values.

namespace tpca {

enum class Method { selfadjoint, rank1, subspace };

const char* method_name(Method m) noexcept;

/// Measured-vs-predicted truncation error. `predicted` is the spectral
/// tail in the method's native units: mean squared error per sample for
/// Method::selfadjoint (covariance eigenvalues), total squared error for
/// the other two (squared singular values). `relative_gap` compares the
/// measurement against the prediction, normalized by the dataset energy
/// in the same units.
struct ErrorReport {
    std::vector<double> per_sample;
    double total = 0.0;
    double mean = 0.0;
    double predicted = 0.0;
    double relative_gap = 0.0;
    bool within_tolerance = true;
};

/// Acceptance bound on ErrorReport::relative_gap.
inline constexpr double kErrorIdentityTol = 1e-8;

/// A rank-M truncated subspace fitted to a dataset: M orthonormal
/// component tensors, per-sample coefficients, the full spectrum the
/// truncation was cut from, and the error report at rank M.
struct SubspaceModel {
    Method method = Method::selfadjoint;
    Shape sample_shape;
    std::size_t retained = 0;
    std::vector<double> spectrum;
    Matrix coefficients;
    std::vector<DenseTensor> components;
    ErrorReport error;
};

/// All basis coefficients <x, u_m> of one tensor, in basis order.
std::vector<double> project(const DenseTensor& x, const TensorBasis& b);
std::vector<double> project(const DenseTensor& x,
                            std::span<const DenseTensor> elements);

/// Linear combination sum_m coeffs[m] * element m; uses the leading
/// coeffs.size() elements, which must not exceed the basis size.
DenseTensor reconstruct(std::span<const double> coeffs, const TensorBasis& b);
DenseTensor reconstruct(std::span<const double> coeffs,
                        std::span<const DenseTensor> elements);

/// Rank-M model over an eigentensor basis: coefficients are direct
/// projections, the spectrum is the basis eigenvalue list, and the error
/// report compares the measured mean squared error with the eigenvalue
/// tail (the identity assumes the basis came from this dataset's
/// covariance operator).
SubspaceModel pca_truncate(const TensorDataset& x, const TensorBasis& b,
                           std::size_t M);

/// Recomputes the truncation error of `model` on `x` from scratch
/// (reconstruct every sample, measure, compare against the stored
/// spectrum's tail).
ErrorReport error_report(const TensorDataset& x, const SubspaceModel& model);

/// max_{i,j} |<e_i, e_j> - delta_ij|.
double gram_orthonormality_error(std::span<const DenseTensor> elements);

} // namespace tpca
