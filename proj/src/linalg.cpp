// SPDX-License-Identifier: Apache-2.0
#include "tpca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "tpca/config.hpp"
#include "tpca/errors.hpp"
#include "tpca/kernels.hpp"

namespace tpca {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_allocation(std::uint64_t{rows} * cols * sizeof(double), "matrix");
    data_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw DimensionError("matrix data holds " + std::to_string(data_.size())
                             + " values, expected " + std::to_string(rows * cols));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul mismatch: " + std::to_string(a.cols())
                             + " columns vs " + std::to_string(b.rows()) + " rows");
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            kernels::axpy(arow[k], b.row(k), crow, b.cols());
        }
    }
    return c;
}

Matrix transposed(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) t.at(j, i) = a.at(i, j);
    }
    return t;
}

double frobenius(const Matrix& a) {
    return std::sqrt(kernels::sum_squares(a.data(), a.size()));
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.values()) m = std::max(m, std::abs(v));
    return m;
}

double max_off_identity(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double target = i == j ? 1.0 : 0.0;
            m = std::max(m, std::abs(a.at(i, j) - target));
        }
    }
    return m;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            acc += 2.0 * a.at(i, j) * a.at(i, j);
        }
    }
    return std::sqrt(acc);
}

void fix_sign(double* vec, std::size_t n, double sign_eps) {
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(vec[i]) > sign_eps) {
            if (vec[i] < 0.0) kernels::scale(-1.0, vec, n);
            return;
        }
    }
}

} // namespace

SymmetricEig sym_eig(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw DimensionError("eigendecomposition needs a square matrix, got "
                             + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    const std::size_t n = a.rows();
    const Tolerances& tol = config().tol;
    if (n > config().eig_cap) {
        throw CapacityError("eigensolver size " + std::to_string(n)
                            + " exceeds the cap of " + std::to_string(config().eig_cap)
                            + " (workspace would need about "
                            + std::to_string(2 * std::uint64_t{n} * n * sizeof(double))
                            + " bytes)");
    }
    check_allocation(2 * std::uint64_t{n} * n * sizeof(double), "eigensolver workspace");

    const double amax = max_abs(a);
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            asym = std::max(asym, std::abs(a.at(i, j) - a.at(j, i)));
        }
    }
    if (asym > tol.sym_tol_factor * amax) {
        throw ContractViolationError("matrix is not symmetric: max asymmetry "
                                     + std::to_string(asym) + " exceeds "
                                     + std::to_string(tol.sym_tol_factor * amax));
    }

    Matrix w = a;
    // Re-symmetrize so rounding-level asymmetry cannot leak into the sweep.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (w.at(i, j) + w.at(j, i));
            w.at(i, j) = v;
            w.at(j, i) = v;
        }
    }

    // Eigenvectors accumulate transposed (row l = eigenvector l) so the
    // right-multiplication by each rotation is also a row rotation.
    Matrix vt = Matrix::identity(n);

    const double fro = frobenius(w);
    const double target = 50.0 * static_cast<double>(n)
                          * std::numeric_limits<double>::epsilon() * fro;

    double off = off_diagonal_norm(w);
    int sweeps = 0;
    while (off > target && sweeps < tol.max_sweeps) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w.at(p, q);
                if (apq == 0.0) continue;
                const double app = w.at(p, p);
                const double aqq = w.at(q, q);
                const double theta = 0.5 * (aqq - app) / apq;
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // Left rotation on rows p and q; for off-block columns the
                // right rotation is then just the symmetric mirror.
                kernels::rotate(c, s, w.row(p), w.row(q), n);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    w.at(r, p) = w.at(p, r);
                    w.at(r, q) = w.at(q, r);
                }
                w.at(p, p) = app - t * apq;
                w.at(q, q) = aqq + t * apq;
                w.at(p, q) = 0.0;
                w.at(q, p) = 0.0;

                kernels::rotate(c, s, vt.row(p), vt.row(q), n);
            }
        }
        ++sweeps;
        off = off_diagonal_norm(w);
    }
    if (off > target && off > tol.tol_eig * fro) {
        throw ConvergenceError("Jacobi sweep limit reached with off-diagonal norm "
                               + std::to_string(off) + " (target "
                               + std::to_string(std::max(target, tol.tol_eig * fro)) + ")");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&w](std::size_t i, std::size_t j) {
        return w.at(i, i) > w.at(j, j);
    });

    SymmetricEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = w.at(src, src);
        fix_sign(vt.row(src), n, tol.sign_eps);
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors.at(i, k) = vt.at(src, i);
        }
    }
    return out;
}

std::size_t gram_rank(std::span<const double> eigenvalues) {
    if (eigenvalues.empty() || eigenvalues[0] <= 0.0) return 0;
    const double cutoff = config().tol.eps_rank * eigenvalues[0];
    std::size_t r = 0;
    for (double v : eigenvalues) {
        if (v > cutoff) ++r; else break;
    }
    return r;
}

Svd svd(const Matrix& d) {
    const bool rows_smaller = d.rows() <= d.cols();
    const std::size_t small_n = rows_smaller ? d.rows() : d.cols();

    // Gram matrix of the smaller side.
    Matrix g(small_n, small_n);
    if (rows_smaller) {
        for (std::size_t i = 0; i < small_n; ++i) {
            for (std::size_t j = i; j < small_n; ++j) {
                const double v = kernels::dot(d.row(i), d.row(j), d.cols());
                g.at(i, j) = v;
                g.at(j, i) = v;
            }
        }
    } else {
        for (std::size_t i = 0; i < d.rows(); ++i) {
            kernels::add_outer(1.0, d.row(i), d.cols(), d.row(i), d.cols(), g.data());
        }
    }

    SymmetricEig eig = sym_eig(g);
    const std::size_t rank = gram_rank(eig.eigenvalues);

    Svd out;
    out.rank = rank;
    out.singular_values.resize(rank);
    for (std::size_t k = 0; k < rank; ++k) {
        out.singular_values[k] = std::sqrt(eig.eigenvalues[k]);
    }

    Matrix gram_side(small_n, rank);
    for (std::size_t i = 0; i < small_n; ++i) {
        for (std::size_t k = 0; k < rank; ++k) {
            gram_side.at(i, k) = eig.eigenvectors.at(i, k);
        }
    }

    // Other factor: each column l is (D or D^T) applied to the gram-side
    // column l, divided by sigma_l.
    const std::size_t other_n = rows_smaller ? d.cols() : d.rows();
    Matrix other(other_n, rank);
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const double* drow = d.row(i);
        if (rows_smaller) {
            // column l of other = sum_i D[i,:] * u[i,l] / sigma_l
            for (std::size_t k = 0; k < rank; ++k) {
                const double w = gram_side.at(i, k) / out.singular_values[k];
                for (std::size_t j = 0; j < d.cols(); ++j) {
                    other.at(j, k) += w * drow[j];
                }
            }
        } else {
            // row i of other = D[i,:] * V / sigma
            for (std::size_t k = 0; k < rank; ++k) {
                double acc = 0.0;
                for (std::size_t j = 0; j < d.cols(); ++j) {
                    acc += drow[j] * gram_side.at(j, k);
                }
                other.at(i, k) = acc / out.singular_values[k];
            }
        }
    }

    if (rows_smaller) {
        out.u = std::move(gram_side);
        out.v = std::move(other);
    } else {
        out.u = std::move(other);
        out.v = std::move(gram_side);
    }
    return out;
}

} // namespace tpca
