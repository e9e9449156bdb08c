// SPDX-License-Identifier: Apache-2.0
#include "tpca/tensor_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "tpca/config.hpp"
#include "tpca/errors.hpp"
#include "tpca/kernels.hpp"
#include "tpca/linalg.hpp"

namespace tpca {

TensorDataset::TensorDataset(Shape sample_shape, std::size_t count)
    : sample_shape_(std::move(sample_shape)), count_(count) {
    if (count == 0) throw ArgumentError("a dataset needs at least one sample");
    std::vector<std::size_t> dims = sample_shape_.dims();
    dims.push_back(count);
    stacked_ = DenseTensor{Shape(std::move(dims))};
}

TensorDataset TensorDataset::from_tensor(DenseTensor stacked) {
    if (stacked.order() == 0) {
        throw DimensionError("a stacked dataset needs a sample axis");
    }
    if (!all_finite(stacked)) {
        throw ArgumentError("dataset contains non-finite values");
    }
    std::vector<std::size_t> dims = stacked.shape().dims();
    const std::size_t count = dims.back();
    dims.pop_back();
    TensorDataset out{Shape(std::move(dims)), count};
    out.stacked_ = std::move(stacked);
    return out;
}

TensorDataset TensorDataset::from_samples(std::span<const DenseTensor> samples) {
    if (samples.empty()) throw ArgumentError("a dataset needs at least one sample");
    TensorDataset out{samples[0].shape(), samples.size()};
    for (std::size_t n = 0; n < samples.size(); ++n) out.set_sample(n, samples[n]);
    return out;
}

std::span<const double> TensorDataset::sample(std::size_t n) const {
    if (n >= count_) {
        throw IndexError("sample " + std::to_string(n) + " out of range 0.."
                         + std::to_string(count_ - 1));
    }
    return {stacked_.data() + n * sample_size(), sample_size()};
}

std::span<double> TensorDataset::sample(std::size_t n) {
    if (n >= count_) {
        throw IndexError("sample " + std::to_string(n) + " out of range 0.."
                         + std::to_string(count_ - 1));
    }
    return {stacked_.data() + n * sample_size(), sample_size()};
}

DenseTensor TensorDataset::sample_tensor(std::size_t n) const {
    auto view = sample(n);
    return DenseTensor(sample_shape_, std::vector<double>(view.begin(), view.end()));
}

void TensorDataset::set_sample(std::size_t n, const DenseTensor& x) {
    if (x.shape() != sample_shape_) {
        throw DimensionError("sample shape " + x.shape().to_string()
                             + " does not match dataset shape "
                             + sample_shape_.to_string());
    }
    if (!all_finite(x)) throw ArgumentError("sample contains non-finite values");
    auto view = sample(n);
    std::copy(x.values().begin(), x.values().end(), view.begin());
}

DenseTensor dataset_mean(const TensorDataset& x) {
    DenseTensor mean{x.sample_shape()};
    for (std::size_t n = 0; n < x.count(); ++n) {
        kernels::axpy(1.0, x.sample(n).data(), mean.data(), mean.size());
    }
    kernels::scale(1.0 / static_cast<double>(x.count()), mean.data(), mean.size());
    return mean;
}

TensorDataset centered(const TensorDataset& x) {
    const DenseTensor mean = dataset_mean(x);
    TensorDataset out{x.sample_shape(), x.count()};
    for (std::size_t n = 0; n < x.count(); ++n) {
        auto src = x.sample(n);
        auto dst = out.sample(n);
        std::copy(src.begin(), src.end(), dst.begin());
        kernels::axpy(-1.0, mean.data(), dst.data(), dst.size());
    }
    return out;
}

namespace {

Shape operator_domain(const Shape& entry_shape) {
    if (entry_shape.order() % 2 != 0) {
        throw DimensionError("an operator tensor needs even order, got "
                             + std::to_string(entry_shape.order()));
    }
    const std::size_t d = entry_shape.order() / 2;
    std::vector<std::size_t> dims(entry_shape.dims().begin(),
                                  entry_shape.dims().begin() + d);
    for (std::size_t k = 0; k < d; ++k) {
        if (entry_shape.dims()[k] != entry_shape.dims()[d + k]) {
            throw DimensionError("operator index groups differ at mode "
                                 + std::to_string(k + 1) + ": "
                                 + entry_shape.to_string());
        }
    }
    return Shape(std::move(dims));
}

} // namespace

SelfAdjointCheck is_self_adjoint(const DenseTensor& a) {
    const Shape domain = operator_domain(a.shape());
    const std::size_t L = domain.total_size();
    const double* data = a.data();
    double asym = 0.0;
    for (std::size_t n = 0; n < L; ++n) {
        for (std::size_t m = n + 1; m < L; ++m) {
            asym = std::max(asym, std::abs(data[n + m * L] - data[m + n * L]));
        }
    }
    SelfAdjointCheck out;
    out.max_asymmetry = asym;
    out.tolerance = config().tol.sym_tol_factor * max_abs(a);
    out.is_self_adjoint = asym <= out.tolerance;
    return out;
}

SelfAdjointOperator::SelfAdjointOperator(Shape domain, DenseTensor entries)
    : domain_(std::move(domain)), entries_(std::move(entries)) {}

SelfAdjointOperator SelfAdjointOperator::from_tensor(DenseTensor a) {
    const SelfAdjointCheck check = is_self_adjoint(a);
    if (!check.is_self_adjoint) {
        throw ContractViolationError("operator is not self-adjoint: max asymmetry "
                                     + std::to_string(check.max_asymmetry)
                                     + " exceeds " + std::to_string(check.tolerance));
    }
    Shape domain = operator_domain(a.shape());
    return SelfAdjointOperator(std::move(domain), std::move(a));
}

SelfAdjointOperator SelfAdjointOperator::identity(const Shape& domain) {
    const std::size_t L = domain.total_size();
    std::vector<std::size_t> dims = domain.dims();
    dims.insert(dims.end(), domain.dims().begin(), domain.dims().end());
    DenseTensor entries{Shape(std::move(dims))};
    for (std::size_t n = 0; n < L; ++n) entries.flat(n + n * L) = 1.0;
    return SelfAdjointOperator(domain, std::move(entries));
}

DenseTensor apply(const SelfAdjointOperator& a, const DenseTensor& y) {
    if (y.shape() != a.domain_shape()) {
        throw DimensionError("operand shape " + y.shape().to_string()
                             + " does not match operator domain "
                             + a.domain_shape().to_string());
    }
    const std::size_t L = a.domain_size();
    DenseTensor z{a.domain_shape()};
    // Flattened columns are contiguous: entry (n, m) sits at n + m*L.
    const double* cols = a.entries().data();
    for (std::size_t m = 0; m < L; ++m) {
        kernels::axpy(y.flat(m), cols + m * L, z.data(), L);
    }
    return z;
}

SelfAdjointOperator gram_operator(const DenseTensor& x,
                                  std::span<const std::size_t> contracted_modes) {
    const Shape& s = x.shape();
    std::vector<bool> contracted(s.order(), false);
    for (std::size_t mode : contracted_modes) {
        if (mode < 1 || mode > s.order()) {
            throw ArgumentError("mode " + std::to_string(mode)
                                + " invalid for order " + std::to_string(s.order()));
        }
        if (contracted[mode - 1]) {
            throw ArgumentError("mode " + std::to_string(mode)
                                + " repeated in contracted group");
        }
        contracted[mode - 1] = true;
    }

    std::vector<std::size_t> free_dims, free_strides, c_dims, c_strides;
    {
        std::size_t stride = 1;
        for (std::size_t k = 0; k < s.order(); ++k) {
            if (contracted[k]) {
                c_dims.push_back(s.dims()[k]);
                c_strides.push_back(stride);
            } else {
                free_dims.push_back(s.dims()[k]);
                free_strides.push_back(stride);
            }
            stride *= s.dims()[k];
        }
    }
    const Shape domain{std::vector<std::size_t>(free_dims)};
    const std::size_t L = domain.total_size();
    check_allocation(std::uint64_t{L} * L * sizeof(double), "gram operator");

    std::vector<std::size_t> dims = domain.dims();
    dims.insert(dims.end(), domain.dims().begin(), domain.dims().end());
    DenseTensor entries{Shape(std::move(dims))};

    // Walk the contracted tuples; gather each free-mode fiber and add its
    // outer square.
    std::vector<double> fiber(L);
    std::vector<std::size_t> c_counters(c_dims.size(), 0);
    std::size_t c_offset = 0;
    const double* xd = x.data();
    for (;;) {
        std::vector<std::size_t> f_counters(free_dims.size(), 0);
        std::size_t f_offset = 0;
        for (std::size_t pos = 0; pos < L; ++pos) {
            fiber[pos] = xd[c_offset + f_offset];
            for (std::size_t k = 0; k < free_dims.size(); ++k) {
                ++f_counters[k];
                f_offset += free_strides[k];
                if (f_counters[k] < free_dims[k]) break;
                f_offset -= free_dims[k] * free_strides[k];
                f_counters[k] = 0;
            }
        }
        kernels::add_outer(1.0, fiber.data(), L, fiber.data(), L, entries.data());

        std::size_t k = 0;
        for (; k < c_dims.size(); ++k) {
            ++c_counters[k];
            c_offset += c_strides[k];
            if (c_counters[k] < c_dims[k]) break;
            c_offset -= c_dims[k] * c_strides[k];
            c_counters[k] = 0;
        }
        if (k == c_dims.size()) break;
    }
    return SelfAdjointOperator::from_tensor(std::move(entries));
}

SelfAdjointOperator gram_operator(const TensorDataset& x) {
    const std::size_t L = x.sample_size();
    check_allocation(std::uint64_t{L} * L * sizeof(double), "gram operator");
    std::vector<std::size_t> dims = x.sample_shape().dims();
    dims.insert(dims.end(), x.sample_shape().dims().begin(),
                x.sample_shape().dims().end());
    DenseTensor entries{Shape(std::move(dims))};
    for (std::size_t n = 0; n < x.count(); ++n) {
        const double* sn = x.sample(n).data();
        kernels::add_outer(1.0, sn, L, sn, L, entries.data());
    }
    return SelfAdjointOperator::from_tensor(std::move(entries));
}

SelfAdjointOperator covariance_operator(const TensorDataset& x, bool center,
                                        bool bessel) {
    if (bessel && x.count() < 2) {
        throw ArgumentError("the 1/(N-1) normalization needs at least two samples");
    }
    SelfAdjointOperator gram = center ? gram_operator(centered(x)) : gram_operator(x);
    const double denom = bessel ? static_cast<double>(x.count() - 1)
                                : static_cast<double>(x.count());
    DenseTensor entries = gram.entries();
    kernels::scale(1.0 / denom, entries.data(), entries.size());
    return SelfAdjointOperator::from_tensor(std::move(entries));
}

double rayleigh_quotient(const SelfAdjointOperator& a, const DenseTensor& y) {
    const double yy = inner(y, y);
    if (yy == 0.0) {
        throw ArgumentError("Rayleigh quotient of the zero tensor is undefined");
    }
    return inner(y, apply(a, y)) / yy;
}

const DenseTensor& basis_element(const TensorBasis& b, std::size_t m) {
    if (m < 1 || m > b.size()) {
        throw IndexError("basis element " + std::to_string(m) + " out of range 1.."
                         + std::to_string(b.size()));
    }
    return b.eigentensors[m - 1];
}

TensorBasis eigentensor_basis(const SelfAdjointOperator& a) {
    const std::size_t L = a.domain_size();
    if (L > config().eig_cap) {
        throw CapacityError("flattened dimension " + std::to_string(L)
                            + " exceeds the eigensolver cap of "
                            + std::to_string(config().eig_cap)
                            + " (eigendecomposition would need about "
                            + std::to_string(3 * std::uint64_t{L} * L * sizeof(double))
                            + " bytes)");
    }
    // The flattened entry buffer read row-major is the same symmetric
    // matrix, so no transposition is needed.
    Matrix m(L, L, a.entries().values());
    SymmetricEig eig = sym_eig(m);

    TensorBasis basis;
    basis.domain_shape = a.domain_shape();
    basis.eigenvalues = std::move(eig.eigenvalues);
    basis.eigentensors.reserve(L);
    for (std::size_t k = 0; k < L; ++k) {
        DenseTensor u{a.domain_shape()};
        for (std::size_t i = 0; i < L; ++i) u.flat(i) = eig.eigenvectors.at(i, k);
        basis.eigentensors.push_back(std::move(u));
    }
    return basis;
}

double proposition1_residual(const SelfAdjointOperator& a, const TensorBasis& b) {
    if (b.domain_shape != a.domain_shape()) {
        throw DimensionError("basis domain " + b.domain_shape.to_string()
                             + " does not match operator domain "
                             + a.domain_shape().to_string());
    }
    const double fro = norm(a.entries());
    double worst = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        DenseTensor r = apply(a, b.eigentensors[k]);
        kernels::axpy(-b.eigenvalues[k], b.eigentensors[k].data(), r.data(), r.size());
        worst = std::max(worst, norm(r));
    }
    return fro > 0.0 ? worst / fro : worst;
}

} // namespace tpca
