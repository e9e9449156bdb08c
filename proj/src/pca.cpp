// SPDX-License-Identifier: Apache-2.0
#include "tpca/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "tpca/errors.hpp"
#include "tpca/kernels.hpp"

namespace tpca {

const char* method_name(Method m) noexcept {
    switch (m) {
        case Method::selfadjoint: return "selfadjoint";
        case Method::rank1: return "rank1";
        case Method::subspace: return "subspace";
    }
    return "unknown";
}

std::vector<double> project(const DenseTensor& x,
                            std::span<const DenseTensor> elements) {
    std::vector<double> coeffs(elements.size());
    for (std::size_t m = 0; m < elements.size(); ++m) {
        if (elements[m].shape() != x.shape()) {
            throw DimensionError("basis element shape "
                                 + elements[m].shape().to_string()
                                 + " does not match operand shape "
                                 + x.shape().to_string());
        }
        coeffs[m] = kernels::dot(x.data(), elements[m].data(), x.size());
    }
    return coeffs;
}

std::vector<double> project(const DenseTensor& x, const TensorBasis& b) {
    return project(x, std::span<const DenseTensor>(b.eigentensors));
}

DenseTensor reconstruct(std::span<const double> coeffs,
                        std::span<const DenseTensor> elements) {
    if (coeffs.size() > elements.size()) {
        throw ArgumentError(std::to_string(coeffs.size())
                            + " coefficients given for "
                            + std::to_string(elements.size()) + " basis elements");
    }
    if (elements.empty()) {
        throw ArgumentError("cannot reconstruct from an empty basis");
    }
    DenseTensor out{elements[0].shape()};
    for (std::size_t m = 0; m < coeffs.size(); ++m) {
        if (elements[m].shape() != out.shape()) {
            throw DimensionError("basis elements disagree in shape");
        }
        kernels::axpy(coeffs[m], elements[m].data(), out.data(), out.size());
    }
    return out;
}

DenseTensor reconstruct(std::span<const double> coeffs, const TensorBasis& b) {
    return reconstruct(coeffs, std::span<const DenseTensor>(b.eigentensors));
}

SubspaceModel pca_truncate(const TensorDataset& x, const TensorBasis& b,
                           std::size_t M) {
    if (x.sample_shape() != b.domain_shape) {
        throw DimensionError("dataset shape " + x.sample_shape().to_string()
                             + " does not match basis domain "
                             + b.domain_shape.to_string());
    }
    if (M < 1 || M > b.size()) {
        throw ArgumentError("truncation rank " + std::to_string(M)
                            + " out of range 1.." + std::to_string(b.size()));
    }
    const std::size_t N = x.count();
    const std::size_t L = x.sample_size();

    SubspaceModel model;
    model.method = Method::selfadjoint;
    model.sample_shape = b.domain_shape;
    model.retained = M;
    model.spectrum = b.eigenvalues;
    model.components.assign(b.eigentensors.begin(), b.eigentensors.begin() + M);

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
    // Covariance eigenvalue tail predicts the MEAN squared error.
    for (std::size_t p = M; p < b.eigenvalues.size(); ++p) {
        rep.predicted += b.eigenvalues[p];
    }
    const double mean_energy = energy / static_cast<double>(N);
    rep.relative_gap = std::abs(rep.mean - rep.predicted)
                       / std::max(mean_energy, 1e-300);
    rep.within_tolerance = rep.relative_gap <= kErrorIdentityTol;
    return model;
}

ErrorReport error_report(const TensorDataset& x, const SubspaceModel& model) {
    if (x.sample_shape() != model.sample_shape) {
        throw DimensionError("dataset shape " + x.sample_shape().to_string()
                             + " does not match model shape "
                             + model.sample_shape.to_string());
    }
    if (model.coefficients.rows() != x.count()) {
        throw DimensionError("model stores coefficients for "
                             + std::to_string(model.coefficients.rows())
                             + " samples but the dataset has "
                             + std::to_string(x.count()));
    }
    const std::size_t N = x.count();
    const std::size_t L = x.sample_size();
    const std::size_t M = model.retained;

    ErrorReport rep;
    rep.per_sample.resize(N);
    double energy = 0.0;
    std::vector<double> recon(L);
    for (std::size_t n = 0; n < N; ++n) {
        const double* sn = x.sample(n).data();
        std::fill(recon.begin(), recon.end(), 0.0);
        for (std::size_t l = 0; l < M; ++l) {
            kernels::axpy(model.coefficients.at(n, l), model.components[l].data(),
                          recon.data(), L);
        }
        kernels::axpy(-1.0, sn, recon.data(), L);
        rep.per_sample[n] = kernels::sum_squares(recon.data(), L);
        rep.total += rep.per_sample[n];
        energy += kernels::sum_squares(sn, L);
    }
    rep.mean = rep.total / static_cast<double>(N);

    for (std::size_t p = M; p < model.spectrum.size(); ++p) {
        const double v = model.spectrum[p];
        rep.predicted += model.method == Method::selfadjoint ? v : v * v;
    }
    if (model.method == Method::selfadjoint) {
        const double mean_energy = energy / static_cast<double>(N);
        rep.relative_gap = std::abs(rep.mean - rep.predicted)
                           / std::max(mean_energy, 1e-300);
    } else {
        rep.relative_gap = std::abs(rep.total - rep.predicted)
                           / std::max(energy, 1e-300);
    }
    rep.within_tolerance = rep.relative_gap <= kErrorIdentityTol;
    return rep;
}

double gram_orthonormality_error(std::span<const DenseTensor> elements) {
    double worst = 0.0;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        for (std::size_t j = i; j < elements.size(); ++j) {
            const double g = inner(elements[i], elements[j]);
            const double target = i == j ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(g - target));
        }
    }
    return worst;
}

} // namespace tpca
