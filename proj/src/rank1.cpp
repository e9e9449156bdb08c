// SPDX-License-Identifier: Apache-2.0
#include "tpca/rank1.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tpca/config.hpp"
#include "tpca/errors.hpp"
#include "tpca/kernels.hpp"

namespace tpca {

namespace {

struct ModeLayout {
    std::size_t dim = 0;       // I_k
    std::size_t stride = 0;    // distance between consecutive i_k
    std::size_t inner = 0;     // product of dims before mode k
    std::size_t outer = 0;     // product of dims after mode k
};

ModeLayout mode_layout(const Shape& s, std::size_t k) {
    if (k < 1 || k > s.order()) {
        throw ArgumentError("mode " + std::to_string(k) + " invalid for order "
                            + std::to_string(s.order()));
    }
    ModeLayout l;
    l.inner = 1;
    for (std::size_t j = 0; j + 1 < k; ++j) l.inner *= s.dims()[j];
    l.dim = s.dims()[k - 1];
    l.stride = l.inner;
    l.outer = s.total_size() / (l.inner * l.dim);
    return l;
}

// y = x multiplied along mode k by u (I_k x I_k): transpose == false
// applies sum_i u[i, j] picking NEW index from columns? No:
//   transpose == false:  y[.., j, ..] = sum_i u[j, i] x[.., i, ..]
//   transpose == true:   y[.., j, ..] = sum_i u[i, j] x[.., i, ..]
// With factor columns holding eigenvectors, transpose == true computes
// coefficients and transpose == false maps coordinates back.
DenseTensor mode_multiply(const DenseTensor& x, const Matrix& u, std::size_t k,
                          bool transpose) {
    const ModeLayout l = mode_layout(x.shape(), k);
    if (u.rows() != l.dim || u.cols() != l.dim) {
        throw DimensionError("mode " + std::to_string(k) + " factor is "
                             + std::to_string(u.rows()) + "x" + std::to_string(u.cols())
                             + " but the mode has dimension " + std::to_string(l.dim));
    }
    DenseTensor y{x.shape()};
    const double* xd = x.data();
    double* yd = y.data();
    std::vector<double> fin(l.dim), fout(l.dim);
    for (std::size_t o = 0; o < l.outer; ++o) {
        for (std::size_t i = 0; i < l.inner; ++i) {
            const std::size_t base = o * l.inner * l.dim + i;
            for (std::size_t p = 0; p < l.dim; ++p) fin[p] = xd[base + p * l.stride];
            for (std::size_t j = 0; j < l.dim; ++j) {
                double acc = 0.0;
                for (std::size_t p = 0; p < l.dim; ++p) {
                    acc += (transpose ? u.at(p, j) : u.at(j, p)) * fin[p];
                }
                fout[j] = acc;
            }
            for (std::size_t p = 0; p < l.dim; ++p) yd[base + p * l.stride] = fout[p];
        }
    }
    return y;
}

} // namespace

Matrix mode_operator(const TensorDataset& x, std::size_t k) {
    const ModeLayout l = mode_layout(x.sample_shape(), k);
    Matrix a(l.dim, l.dim);
    std::vector<double> fiber(l.dim);
    for (std::size_t n = 0; n < x.count(); ++n) {
        const double* sn = x.sample(n).data();
        for (std::size_t o = 0; o < l.outer; ++o) {
            for (std::size_t i = 0; i < l.inner; ++i) {
                const std::size_t base = o * l.inner * l.dim + i;
                for (std::size_t p = 0; p < l.dim; ++p) {
                    fiber[p] = sn[base + p * l.stride];
                }
                kernels::add_outer(1.0, fiber.data(), l.dim, fiber.data(), l.dim,
                                   a.data());
            }
        }
    }
    return a;
}

Rank1Basis rank1_basis(const TensorDataset& x) {
    const std::size_t d = x.sample_shape().order();
    if (d == 0) {
        throw ArgumentError("a rank-1 basis needs samples of order >= 1");
    }
    Rank1Basis b;
    b.sample_shape = x.sample_shape();
    b.factors.reserve(d);
    b.mode_spectra.reserve(d);
    for (std::size_t k = 1; k <= d; ++k) {
        SymmetricEig eig = sym_eig(mode_operator(x, k));
        b.factors.push_back(std::move(eig.eigenvectors));
        b.mode_spectra.push_back(std::move(eig.eigenvalues));
    }
    return b;
}

DenseTensor basis_element(const Rank1Basis& b, std::size_t m) {
    const MultiIndex mi = inverse_linear_index(m, b.sample_shape);
    DenseTensor t = DenseTensor::scalar(1.0);
    for (std::size_t k = 0; k < b.factors.size(); ++k) {
        const Matrix& u = b.factors[k];
        std::vector<double> col(u.rows());
        for (std::size_t i = 0; i < u.rows(); ++i) col[i] = u.at(i, mi[k] - 1);
        t = outer(t, DenseTensor(Shape{u.rows()}, std::move(col)));
    }
    return unflatten(std::move(t), b.sample_shape);
}

CoefficientSvd coefficients(const TensorDataset& x, const Rank1Basis& b) {
    if (x.sample_shape() != b.sample_shape) {
        throw DimensionError("dataset shape " + x.sample_shape().to_string()
                             + " does not match basis shape "
                             + b.sample_shape.to_string());
    }
    const std::size_t L = b.size();
    const std::size_t N = x.count();
    check_allocation(std::uint64_t{N} * L * sizeof(double), "coefficient matrix");

    CoefficientSvd out;
    out.d = Matrix(N, L);
    for (std::size_t n = 0; n < N; ++n) {
        DenseTensor t = x.sample_tensor(n);
        for (std::size_t k = 0; k < b.factors.size(); ++k) {
            t = mode_multiply(t, b.factors[k], k + 1, /*transpose=*/true);
        }
        std::copy(t.values().begin(), t.values().end(), out.d.row(n));
    }
    out.svd = svd(out.d);
    return out;
}

SubspaceModel truncate_rank1(const CoefficientSvd& c, const Rank1Basis& b,
                             std::size_t M) {
    const std::size_t r = c.svd.rank;
    if (M < 1 || M > r) {
        throw ArgumentError("truncation rank " + std::to_string(M)
                            + " out of range 1.." + std::to_string(r));
    }
    const std::size_t N = c.d.rows();
    const std::size_t L = c.d.cols();
    if (L != b.size()) {
        throw DimensionError("coefficient matrix has " + std::to_string(L)
                             + " columns but the basis has "
                             + std::to_string(b.size()) + " elements");
    }

    SubspaceModel model;
    model.method = Method::rank1;
    model.sample_shape = b.sample_shape;
    model.retained = M;
    model.spectrum = c.svd.singular_values;

    model.coefficients = Matrix(N, M);
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t l = 0; l < M; ++l) {
            model.coefficients.at(n, l) = c.svd.singular_values[l] * c.svd.u.at(n, l);
        }
    }

    // Component l has coordinates Z[:, l] in the rank-1 basis; mapping
    // back mode-wise avoids materializing the L basis tensors.
    model.components.reserve(M);
    for (std::size_t l = 0; l < M; ++l) {
        std::vector<double> z(L);
        for (std::size_t m = 0; m < L; ++m) z[m] = c.svd.v.at(m, l);
        DenseTensor w = unflatten(DenseTensor(Shape{L}, std::move(z)), b.sample_shape);
        for (std::size_t k = 0; k < b.factors.size(); ++k) {
            w = mode_multiply(w, b.factors[k], k + 1, /*transpose=*/false);
        }
        model.components.push_back(std::move(w));
    }

    // Parseval route: ||X_n - Xhat_n||^2 = ||D row n||^2 - ||coeff row n||^2.
    ErrorReport& rep = model.error;
    rep.per_sample.resize(N);
    double energy = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
        const double full = kernels::sum_squares(c.d.row(n), L);
        const double kept = kernels::sum_squares(model.coefficients.row(n), M);
        rep.per_sample[n] = full - kept;
        rep.total += full - kept;
        energy += full;
    }
    rep.mean = rep.total / static_cast<double>(N);
    for (std::size_t l = M; l < r; ++l) {
        rep.predicted += c.svd.singular_values[l] * c.svd.singular_values[l];
    }
    const double scale = std::max(energy, 1e-300);
    rep.relative_gap = std::abs(rep.total - rep.predicted) / scale;
    rep.within_tolerance = rep.relative_gap <= kErrorIdentityTol;
    return model;
}

} // namespace tpca
