// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Dense symmetric eigensolver and SVD, self-contained on purpose: results
// must be reproducible bit-for-bit across runs, so no external numeric
// backend is involved. Matrices are row-major with 0-based accessors
// (1-based indexing is a tensor-API convention, not a matrix one).

namespace tpca {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return at(r, c); }
    double& operator()(std::size_t r, std::size_t c) { return at(r, c); }

    const std::vector<double>& values() const noexcept { return data_; }
    std::vector<double>& values() noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transposed(const Matrix& a);
double frobenius(const Matrix& a);
double max_abs(const Matrix& a);
/// max |A[i][j] - delta_ij|, the distance from the identity.
double max_off_identity(const Matrix& a);

/// Eigenvalues descending; eigenvector for eigenvalues[k] is column k of
/// `eigenvectors`. Signs are fixed so the first component larger than
/// sign_eps in magnitude is positive.
struct SymmetricEig {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Validates
/// symmetry (ContractViolationError), the eigensolver size cap
/// (CapacityError) and convergence within the sweep limit
/// (ConvergenceError).
SymmetricEig sym_eig(const Matrix& a);

/// Economy SVD truncated to numerical rank: u is rows x rank, v is
/// cols x rank, singular values descending and positive.
struct Svd {
    Matrix u;
    std::vector<double> singular_values;
    Matrix v;
    std::size_t rank = 0;
};

/// SVD through the Gram matrix of the smaller side (eigendecomposition of
/// D D^T or D^T D, whichever is smaller); the other factor is recovered as
/// D v / sigma (resp. D^T u / sigma). Signs follow the eigensolver's
/// canonicalization on the Gram-side factor.
Svd svd(const Matrix& d);

/// Numerical rank of a Gram spectrum: eigenvalues (descending) above
/// eps_rank times the largest. Zero when the largest is not positive.
std::size_t gram_rank(std::span<const double> eigenvalues);

} // namespace tpca
