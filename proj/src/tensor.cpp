// SPDX-License-Identifier: Apache-2.0
#include "tpca/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "tpca/config.hpp"
#include "tpca/errors.hpp"
#include "tpca/kernels.hpp"

namespace tpca {

namespace {

std::size_t checked_product(const std::vector<std::size_t>& dims) {
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw ArgumentError("shape dimensions must be positive");
        if (d > std::numeric_limits<std::size_t>::max() / total) {
            throw CapacityError("shape total size overflows the index type");
        }
        total *= d;
    }
    return total;
}

// Iterates multi-index tuples in linearization order (first mode fastest)
// while maintaining flat offsets into one or more strided views.
class Odometer {
public:
    Odometer(std::vector<std::size_t> dims,
             std::vector<std::vector<std::size_t>> strides)
        : dims_(std::move(dims)),
          strides_(std::move(strides)),
          counters_(dims_.size(), 0),
          offsets_(strides_.size(), 0) {}

    std::size_t offset(std::size_t view) const { return offsets_[view]; }

    /// Advance to the next tuple; false once every tuple has been visited.
    bool step() {
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            ++counters_[k];
            for (std::size_t v = 0; v < offsets_.size(); ++v) {
                offsets_[v] += strides_[v][k];
            }
            if (counters_[k] < dims_[k]) return true;
            for (std::size_t v = 0; v < offsets_.size(); ++v) {
                offsets_[v] -= dims_[k] * strides_[v][k];
            }
            counters_[k] = 0;
        }
        return false;
    }

private:
    std::vector<std::size_t> dims_;
    std::vector<std::vector<std::size_t>> strides_;
    std::vector<std::size_t> counters_;
    std::vector<std::size_t> offsets_;
};

std::vector<std::size_t> mode_strides(const Shape& s) {
    std::vector<std::size_t> strides(s.order());
    std::size_t acc = 1;
    for (std::size_t k = 0; k < s.order(); ++k) {
        strides[k] = acc;
        acc *= s.dim(k);
    }
    return strides;
}

} // namespace

Shape::Shape(std::initializer_list<std::size_t> dims)
    : Shape(std::vector<std::size_t>(dims)) {}

Shape::Shape(std::vector<std::size_t> dims)
    : dims_(std::move(dims)), total_(checked_product(dims_)) {}

std::size_t Shape::dim(std::size_t k) const {
    if (k >= dims_.size()) {
        throw IndexError("mode position " + std::to_string(k)
                         + " out of range for order " + std::to_string(dims_.size()));
    }
    return dims_[k];
}

std::string Shape::to_string() const {
    std::string out = "(";
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (k > 0) out += ", ";
        out += std::to_string(dims_[k]);
    }
    out += ")";
    return out;
}

std::size_t linear_index(const MultiIndex& i, const Shape& s) {
    if (i.size() != s.order()) {
        throw DimensionError("multi-index of order " + std::to_string(i.size())
                             + " does not match shape " + s.to_string());
    }
    std::size_t m = 1;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < s.order(); ++k) {
        const std::size_t ik = i[k];
        if (ik < 1 || ik > s.dims()[k]) {
            throw IndexError("index " + std::to_string(ik) + " out of range 1.."
                             + std::to_string(s.dims()[k]) + " in mode "
                             + std::to_string(k + 1));
        }
        m += (ik - 1) * stride;
        stride *= s.dims()[k];
    }
    return m;
}

MultiIndex inverse_linear_index(std::size_t m, const Shape& s) {
    if (m < 1 || m > s.total_size()) {
        throw IndexError("linear index " + std::to_string(m) + " out of range 1.."
                         + std::to_string(s.total_size()));
    }
    std::size_t rest = m - 1;
    MultiIndex i;
    i.ix.resize(s.order());
    for (std::size_t k = 0; k < s.order(); ++k) {
        i.ix[k] = rest % s.dims()[k] + 1;
        rest /= s.dims()[k];
    }
    return i;
}

IndexTable::IndexTable(const Shape& s) : shape_(s) {
    const std::size_t d = s.order();
    const std::size_t L = s.total_size();
    check_allocation(std::uint64_t{L} * d * sizeof(std::size_t), "index table");
    entries_.resize(L * d);
    std::vector<std::size_t> current(d, 1);
    for (std::size_t m = 0; m < L; ++m) {
        std::copy(current.begin(), current.end(), entries_.begin() + m * d);
        for (std::size_t k = 0; k < d; ++k) {
            if (++current[k] <= s.dims()[k]) break;
            current[k] = 1;
        }
    }
}

std::span<const std::size_t> IndexTable::row(std::size_t m) const {
    if (m < 1 || m > row_count()) {
        throw IndexError("linear index " + std::to_string(m) + " out of range 1.."
                         + std::to_string(row_count()));
    }
    return {entries_.data() + (m - 1) * order(), order()};
}

DenseTensor::DenseTensor() : shape_(), data_(1, 0.0) {}

DenseTensor::DenseTensor(Shape s) : shape_(std::move(s)) {
    check_allocation(std::uint64_t{shape_.total_size()} * sizeof(double), "tensor");
    data_.assign(shape_.total_size(), 0.0);
}

DenseTensor::DenseTensor(Shape s, std::vector<double> data)
    : shape_(std::move(s)), data_(std::move(data)) {
    if (data_.size() != shape_.total_size()) {
        throw DimensionError("data holds " + std::to_string(data_.size())
                             + " values but shape " + shape_.to_string() + " needs "
                             + std::to_string(shape_.total_size()));
    }
}

DenseTensor DenseTensor::scalar(double v) {
    return DenseTensor(Shape(), std::vector<double>{v});
}

double DenseTensor::at(const MultiIndex& i) const {
    return data_[linear_index(i, shape_) - 1];
}

double& DenseTensor::at(const MultiIndex& i) {
    return data_[linear_index(i, shape_) - 1];
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
    if (shape_ != other.shape_) {
        throw DimensionError("shape mismatch: " + shape_.to_string() + " vs "
                             + other.shape_.to_string());
    }
    kernels::axpy(1.0, other.data(), data(), size());
    return *this;
}

DenseTensor& DenseTensor::operator-=(const DenseTensor& other) {
    if (shape_ != other.shape_) {
        throw DimensionError("shape mismatch: " + shape_.to_string() + " vs "
                             + other.shape_.to_string());
    }
    kernels::axpy(-1.0, other.data(), data(), size());
    return *this;
}

DenseTensor& DenseTensor::operator*=(double a) {
    kernels::scale(a, data(), size());
    return *this;
}

double max_abs(const DenseTensor& x) {
    double m = 0.0;
    for (double v : x.values()) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const DenseTensor& x) {
    return std::all_of(x.values().begin(), x.values().end(),
                       [](double v) { return std::isfinite(v); });
}

DenseTensor contract(const DenseTensor& x, const DenseTensor& y,
                     std::span<const std::size_t> modes_x,
                     std::span<const std::size_t> modes_y) {
    if (modes_x.size() != modes_y.size()) {
        throw ArgumentError("contraction mode lists differ in length");
    }
    auto validate = [](std::span<const std::size_t> modes, const Shape& s,
                       const char* which) {
        std::vector<bool> seen(s.order(), false);
        for (std::size_t mode : modes) {
            if (mode < 1 || mode > s.order()) {
                throw ArgumentError(std::string("mode ") + std::to_string(mode)
                                    + " invalid for order "
                                    + std::to_string(s.order()) + " " + which
                                    + " operand");
            }
            if (seen[mode - 1]) {
                throw ArgumentError(std::string("mode ") + std::to_string(mode)
                                    + " repeated in " + which + " mode list");
            }
            seen[mode - 1] = true;
        }
    };
    validate(modes_x, x.shape(), "left");
    validate(modes_y, y.shape(), "right");
    for (std::size_t p = 0; p < modes_x.size(); ++p) {
        const std::size_t dx = x.shape().dim(modes_x[p] - 1);
        const std::size_t dy = y.shape().dim(modes_y[p] - 1);
        if (dx != dy) {
            throw DimensionError("contracted dimensions differ: mode "
                                 + std::to_string(modes_x[p]) + " of "
                                 + x.shape().to_string() + " vs mode "
                                 + std::to_string(modes_y[p]) + " of "
                                 + y.shape().to_string());
        }
    }

    auto free_modes = [](std::span<const std::size_t> modes, const Shape& s) {
        std::vector<bool> contracted(s.order(), false);
        for (std::size_t mode : modes) contracted[mode - 1] = true;
        std::vector<std::size_t> free;
        for (std::size_t k = 0; k < s.order(); ++k) {
            if (!contracted[k]) free.push_back(k);
        }
        return free;
    };
    const std::vector<std::size_t> free_x = free_modes(modes_x, x.shape());
    const std::vector<std::size_t> free_y = free_modes(modes_y, y.shape());

    std::vector<std::size_t> out_dims;
    for (std::size_t k : free_x) out_dims.push_back(x.shape().dim(k));
    for (std::size_t k : free_y) out_dims.push_back(y.shape().dim(k));
    DenseTensor out{Shape(out_dims)};

    const std::vector<std::size_t> sx = mode_strides(x.shape());
    const std::vector<std::size_t> sy = mode_strides(y.shape());

    std::vector<std::size_t> c_dims, cx_strides, cy_strides;
    for (std::size_t p = 0; p < modes_x.size(); ++p) {
        c_dims.push_back(x.shape().dim(modes_x[p] - 1));
        cx_strides.push_back(sx[modes_x[p] - 1]);
        cy_strides.push_back(sy[modes_y[p] - 1]);
    }
    std::vector<std::size_t> fx_dims, fx_strides;
    for (std::size_t k : free_x) {
        fx_dims.push_back(x.shape().dim(k));
        fx_strides.push_back(sx[k]);
    }
    std::vector<std::size_t> fy_dims, fy_strides;
    for (std::size_t k : free_y) {
        fy_dims.push_back(y.shape().dim(k));
        fy_strides.push_back(sy[k]);
    }

    const double* xd = x.data();
    const double* yd = y.data();
    double* od = out.data();
    std::size_t pos = 0;
    Odometer oy(fy_dims, {fy_strides});
    do {
        Odometer ox(fx_dims, {fx_strides});
        do {
            double acc = 0.0;
            Odometer oc(c_dims, {cx_strides, cy_strides});
            do {
                acc += xd[ox.offset(0) + oc.offset(0)]
                       * yd[oy.offset(0) + oc.offset(1)];
            } while (oc.step());
            od[pos++] = acc;
        } while (ox.step());
    } while (oy.step());
    return out;
}

double inner(const DenseTensor& x, const DenseTensor& y) {
    if (x.shape() != y.shape()) {
        throw DimensionError("inner product needs equal shapes, got "
                             + x.shape().to_string() + " vs " + y.shape().to_string());
    }
    return kernels::dot(x.data(), y.data(), x.size());
}

double norm(const DenseTensor& x) {
    return std::sqrt(kernels::sum_squares(x.data(), x.size()));
}

DenseTensor outer(const DenseTensor& x, const DenseTensor& y) {
    std::vector<std::size_t> dims = x.shape().dims();
    dims.insert(dims.end(), y.shape().dims().begin(), y.shape().dims().end());
    DenseTensor out{Shape(std::move(dims))};
    kernels::add_outer(1.0, y.data(), y.size(), x.data(), x.size(), out.data());
    return out;
}

std::vector<DenseTensor> canonical_basis(const Shape& s) {
    const std::size_t L = s.total_size();
    check_allocation(std::uint64_t{L} * L * sizeof(double), "canonical basis");
    std::vector<DenseTensor> basis;
    basis.reserve(L);
    for (std::size_t m = 0; m < L; ++m) {
        DenseTensor e{s};
        e.flat(m) = 1.0;
        basis.push_back(std::move(e));
    }
    return basis;
}

namespace {

Shape flattened_shape(const Shape& s, std::size_t trailing_modes) {
    const std::size_t d = s.order();
    if (d == 0) {
        if (trailing_modes != 0) {
            throw ArgumentError("cannot group modes of an order-0 tensor");
        }
        return Shape{1};
    }
    if (trailing_modes < 1 || trailing_modes > d) {
        throw ArgumentError("trailing mode group size " + std::to_string(trailing_modes)
                            + " out of range 1.." + std::to_string(d));
    }
    if (trailing_modes == d) return Shape{s.total_size()};
    std::size_t lead = 1;
    for (std::size_t k = 0; k < d - trailing_modes; ++k) lead *= s.dims()[k];
    return Shape{lead, s.total_size() / lead};
}

} // namespace

DenseTensor flatten(const DenseTensor& x, std::size_t trailing_modes) {
    return DenseTensor(flattened_shape(x.shape(), trailing_modes), x.values());
}

DenseTensor flatten(DenseTensor&& x, std::size_t trailing_modes) {
    Shape target = flattened_shape(x.shape(), trailing_modes);
    return DenseTensor(std::move(target), std::move(x.values()));
}

DenseTensor unflatten(const DenseTensor& x, const Shape& s) {
    if (s.total_size() != x.size()) {
        throw DimensionError("cannot reshape " + std::to_string(x.size())
                             + " values into shape " + s.to_string());
    }
    return DenseTensor(s, x.values());
}

DenseTensor unflatten(DenseTensor&& x, const Shape& s) {
    if (s.total_size() != x.size()) {
        throw DimensionError("cannot reshape " + std::to_string(x.size())
                             + " values into shape " + s.to_string());
    }
    return DenseTensor(s, std::move(x.values()));
}

} // namespace tpca
