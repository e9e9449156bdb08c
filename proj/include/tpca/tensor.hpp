// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

// Dense real tensors with value semantics.
//
// Storage follows the column-major linearization
//     m = i_1 + (i_2 - 1) I_1 + (i_3 - 1) I_1 I_2 + ...
// with the first index varying fastest. Multi-indices and linear indices
// are 1-based at the API boundary (i_k in 1..I_k, m in 1..L); raw data
// offsets obtained through data()/flat() are the usual 0-based ones,
// flat(m - 1) being the element with linear index m.

namespace tpca {

/// Dimensions (I_1, ..., I_d) of an order-d tensor. An empty dimension
/// list is the valid order-0 (scalar) shape with total size 1.
class Shape {
public:
    Shape() = default;
    Shape(std::initializer_list<std::size_t> dims);
    explicit Shape(std::vector<std::size_t> dims);

    std::size_t order() const noexcept { return dims_.size(); }
    /// Dimension of mode k, 0-based position (dim(0) == I_1).
    std::size_t dim(std::size_t k) const;
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    /// L = I_1 * ... * I_d (1 for order-0).
    std::size_t total_size() const noexcept { return total_; }

    bool operator==(const Shape& other) const noexcept { return dims_ == other.dims_; }
    bool operator!=(const Shape& other) const noexcept { return !(*this == other); }

    std::string to_string() const;

private:
    std::vector<std::size_t> dims_;
    std::size_t total_ = 1;
};

/// A 1-based multi-index (i_1, ..., i_d).
struct MultiIndex {
    std::vector<std::size_t> ix;

    MultiIndex() = default;
    MultiIndex(std::initializer_list<std::size_t> l) : ix(l) {}
    explicit MultiIndex(std::vector<std::size_t> v) : ix(std::move(v)) {}

    std::size_t size() const noexcept { return ix.size(); }
    std::size_t& operator[](std::size_t k) { return ix[k]; }
    std::size_t operator[](std::size_t k) const { return ix[k]; }
    bool operator==(const MultiIndex& o) const { return ix == o.ix; }
    bool operator!=(const MultiIndex& o) const { return !(*this == o); }
};

/// Linear index m in 1..L of a multi-index. Throws IndexError if any
/// entry is out of range, DimensionError if the order does not match.
std::size_t linear_index(const MultiIndex& i, const Shape& s);

/// Inverse of linear_index. Throws IndexError unless 1 <= m <= L.
MultiIndex inverse_linear_index(std::size_t m, const Shape& s);

/// Precomputed inverse linearization: row m lists the multi-index of m.
class IndexTable {
public:
    explicit IndexTable(const Shape& s);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t row_count() const noexcept { return shape_.total_size(); }
    std::size_t order() const noexcept { return shape_.order(); }
    /// Multi-index of linear index m (1-based), as d entries.
    std::span<const std::size_t> row(std::size_t m) const;

private:
    Shape shape_;
    std::vector<std::size_t> entries_;
};

inline IndexTable index_table(const Shape& s) { return IndexTable(s); }

class DenseTensor {
public:
    /// Order-0 zero tensor.
    DenseTensor();
    /// Zero-filled tensor (allocation checked against the memory cap).
    explicit DenseTensor(Shape s);
    /// Adopts `data`, which must hold total_size() values in linear-index
    /// order. Throws DimensionError on a size mismatch.
    DenseTensor(Shape s, std::vector<double> data);

    static DenseTensor scalar(double v);

    const Shape& shape() const noexcept { return shape_; }
    std::size_t order() const noexcept { return shape_.order(); }
    std::size_t size() const noexcept { return data_.size(); }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    std::vector<double>& values() noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    /// Unchecked 0-based flat access (offset = linear index - 1).
    double flat(std::size_t offset) const { return data_[offset]; }
    double& flat(std::size_t offset) { return data_[offset]; }

    /// Checked access by 1-based multi-index.
    double at(const MultiIndex& i) const;
    double& at(const MultiIndex& i);

    /// Checked access by 1-based indices: t(i, j, k).
    template <class... Ix>
    double operator()(Ix... ix) const {
        return at(MultiIndex{static_cast<std::size_t>(ix)...});
    }
    template <class... Ix>
    double& operator()(Ix... ix) {
        return at(MultiIndex{static_cast<std::size_t>(ix)...});
    }

    DenseTensor& operator+=(const DenseTensor& other);
    DenseTensor& operator-=(const DenseTensor& other);
    DenseTensor& operator*=(double a);

private:
    Shape shape_;
    std::vector<double> data_;
};

/// Largest absolute entry (0 for the empty case; tensors are never empty).
double max_abs(const DenseTensor& x);

/// True when every entry is finite.
bool all_finite(const DenseTensor& x);

/// Mode-wise contraction. `modes_x` and `modes_y` are equally long lists
/// of distinct 1-based mode ids with pairwise matching dimensions. The
/// result carries the free modes of x (in their original order) followed
/// by the free modes of y; contracting every mode yields an order-0 tensor.
DenseTensor contract(const DenseTensor& x, const DenseTensor& y,
                     std::span<const std::size_t> modes_x,
                     std::span<const std::size_t> modes_y);

/// Full inner product <x, y> of same-shape tensors.
double inner(const DenseTensor& x, const DenseTensor& y);

/// Frobenius norm sqrt(<x, x>).
double norm(const DenseTensor& x);

/// Outer product: shape (x dims..., y dims...), value x[i] * y[j].
DenseTensor outer(const DenseTensor& x, const DenseTensor& y);

/// The L one-hot tensors of a shape, ordered by linear index (element at
/// position k is the tensor with a 1 at linear index k + 1).
std::vector<DenseTensor> canonical_basis(const Shape& s);

/// Regroups the last `trailing_modes` modes into one axis and the rest
/// into another: the result has shape (prod of leading dims, prod of
/// trailing dims), or order 1 when trailing_modes == order. The data
/// buffer is reused unchanged (the linearization makes this a pure
/// relabeling). For an order-0 tensor only trailing_modes == 0 is valid
/// and yields a length-1 vector.
DenseTensor flatten(const DenseTensor& x, std::size_t trailing_modes);
DenseTensor flatten(DenseTensor&& x, std::size_t trailing_modes);

/// Inverse relabeling: reinterprets x's buffer under a shape with the
/// same total size.
DenseTensor unflatten(const DenseTensor& x, const Shape& s);
DenseTensor unflatten(DenseTensor&& x, const Shape& s);

} // namespace tpca
