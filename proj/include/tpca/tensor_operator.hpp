// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tpca/tensor.hpp"

// Self-adjoint operators on tensor spaces and the eigentensor bases they
// induce. An operator on order-d tensors of shape I is stored as an
// order-2d tensor A of shape (I, I); self-adjointness means
// A[i, j] = A[j, i] for multi-index pairs, which after linearization is
// plain matrix symmetry of a(n, m) = A with row group n and column
// group m. That correspondence is what makes the eigentensor problem a
// matrix eigenproblem: the flattened eigenvectors, relabeled back to
// shape I, are the eigentensors.

namespace tpca {

/// N tensors of one shape, stored contiguously as an order-(d+1) tensor
/// whose last mode is the sample axis (sample n occupies the contiguous
/// block n*L .. n*L + L). Sample indices are 0-based.
class TensorDataset {
public:
    TensorDataset(Shape sample_shape, std::size_t count);

    /// Interprets the last mode of `stacked` as the sample axis.
    /// Validates order >= 1 and finiteness.
    static TensorDataset from_tensor(DenseTensor stacked);

    /// Copies same-shape samples into a dataset.
    static TensorDataset from_samples(std::span<const DenseTensor> samples);

    const Shape& sample_shape() const noexcept { return sample_shape_; }
    std::size_t sample_size() const noexcept { return sample_shape_.total_size(); }
    std::size_t count() const noexcept { return count_; }

    std::span<const double> sample(std::size_t n) const;
    std::span<double> sample(std::size_t n);
    DenseTensor sample_tensor(std::size_t n) const;
    void set_sample(std::size_t n, const DenseTensor& x);

    const DenseTensor& stacked() const noexcept { return stacked_; }

private:
    Shape sample_shape_;
    std::size_t count_ = 0;
    DenseTensor stacked_;
};

/// Sample mean tensor.
DenseTensor dataset_mean(const TensorDataset& x);

/// Dataset with the sample mean subtracted from every sample.
TensorDataset centered(const TensorDataset& x);

struct SelfAdjointCheck {
    bool is_self_adjoint = false;
    double max_asymmetry = 0.0;
    double tolerance = 0.0;
};

/// Checks A[i, j] == A[j, i] within sym_tol_factor * max |A|. Throws
/// DimensionError unless `a` has even order with matching index groups.
SelfAdjointCheck is_self_adjoint(const DenseTensor& a);

/// A validated self-adjoint operator.
class SelfAdjointOperator {
public:
    /// Validates the index pairing and self-adjointness of `a`
    /// (ContractViolationError when asymmetry exceeds tolerance).
    static SelfAdjointOperator from_tensor(DenseTensor a);

    static SelfAdjointOperator identity(const Shape& domain);

    const Shape& domain_shape() const noexcept { return domain_; }
    std::size_t domain_size() const noexcept { return domain_.total_size(); }
    /// The order-2d entry tensor.
    const DenseTensor& entries() const noexcept { return entries_; }

private:
    SelfAdjointOperator(Shape domain, DenseTensor entries);

    Shape domain_;
    DenseTensor entries_;
};

/// z[i] = sum_j A[i, j] y[j].
DenseTensor apply(const SelfAdjointOperator& a, const DenseTensor& y);

/// Gram operator of one tensor: contracting the listed modes of x against
/// themselves leaves A[i, i'] = sum_k x[k, i] x[k, i'] acting on the free
/// modes (in their original order). Positive semi-definite and
/// self-adjoint by construction.
SelfAdjointOperator gram_operator(const DenseTensor& x,
                                  std::span<const std::size_t> contracted_modes);

/// Unnormalized dataset Gram operator sum_n X_n[i] X_n[j] (the sample
/// axis is the contracted group).
SelfAdjointOperator gram_operator(const TensorDataset& x);

/// Covariance operator (1/N) sum_n X_n[i] X_n[j], optionally after
/// centering, optionally with the 1/(N-1) normalization.
SelfAdjointOperator covariance_operator(const TensorDataset& x,
                                        bool center = false,
                                        bool bessel = false);

/// <y, A y> / <y, y>. Throws ArgumentError on a zero tensor.
double rayleigh_quotient(const SelfAdjointOperator& a, const DenseTensor& y);

/// Complete orthonormal eigentensor system, eigenvalues descending.
struct TensorBasis {
    Shape domain_shape;
    std::vector<double> eigenvalues;
    std::vector<DenseTensor> eigentensors;

    std::size_t size() const noexcept { return eigentensors.size(); }
};

/// Eigentensor m (1-based, following the descending eigenvalue order).
const DenseTensor& basis_element(const TensorBasis& b, std::size_t m);

/// Full eigentensor basis of a self-adjoint operator: flatten to an L x L
/// symmetric matrix, eigendecompose, relabel the eigenvectors back to the
/// domain shape. Throws CapacityError when L exceeds the eigensolver cap.
TensorBasis eigentensor_basis(const SelfAdjointOperator& a);

/// max_l ||A u_l - lambda_l u_l|| / ||A||_F, the worst relative
/// eigen-residual of a basis against an operator.
double proposition1_residual(const SelfAdjointOperator& a, const TensorBasis& b);

} // namespace tpca
