// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tpca/pca.hpp"
#include "tpca/rank1.hpp"
#include "tpca/subspace.hpp"
#include "tpca/tensor.hpp"
#include "tpca/tensor_operator.hpp"

// Serialization. All binary formats are little-endian with an ASCII
// 4-byte magic, u32/u64 integer fields and f64 payloads in linear-index
// order:
//   TPT1  tensor          d, dims, values
//   TPB1  eigentensor basis     d, dims, r, eigenvalues, eigentensors
//   TPR1  rank-1 mode factors   d, dims, d factor matrices (row-major),
//                               d mode spectra
//   TPC1  coefficient SVD       N, L, r, D (row-major), Y, sigma, Z
//   TPS1  snapshot basis        d, dims, N, r, sigma, mixing (row-major),
//                               component tensors
//   TPM1  truncated model       method, d, dims, N, M, spectrum,
//                               coefficients, components, error report
// Readers reject bad magic, truncation, trailing bytes and non-finite
// values, reporting the offending byte offset.

namespace tpca {

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

void write_tensor(const std::string& path, const DenseTensor& t);
DenseTensor read_tensor(const std::string& path);

void write_basis(const std::string& path, const TensorBasis& b);
TensorBasis read_basis(const std::string& path);

void write_rank1(const std::string& path, const Rank1Basis& b);
Rank1Basis read_rank1(const std::string& path);

void write_coefficients(const std::string& path, const CoefficientSvd& c);
CoefficientSvd read_coefficients(const std::string& path);

void write_subspace(const std::string& path, const SubspaceBasis& b);
SubspaceBasis read_subspace(const std::string& path);

void write_model(const std::string& path, const SubspaceModel& m);
SubspaceModel read_model(const std::string& path);

/// First bytes of a file mapped to a format name: "TPT1", "TPB1", "TPR1",
/// "TPC1", "TPS1", "TPM1", "png", "ppm" or "unknown".
std::string sniff_format(const std::string& path);

/// CSV "index,value" with 1-based component indices.
void write_spectrum_csv(const std::string& path, std::span<const double> values);

/// CSV "sample,squared_error" with 0-based sample rows, followed by
/// key,value rows for total, mean, predicted and relative_gap.
void write_error_csv(const std::string& path, const ErrorReport& rep);

/// Images of one directory, in byte-order sorted filename order.
/// target_height/target_width of 0 keep native sizes (which must then
/// agree across files).
struct ImageManifest {
    std::string root;
    std::vector<std::string> files;
    std::size_t target_height = 0;
    std::size_t target_width = 0;
};

/// Non-recursive scan for .png/.ppm files (case-insensitive extension).
/// Throws IngestError when nothing matches.
ImageManifest scan_image_directory(const std::string& dir, std::size_t height,
                                   std::size_t width);

/// Decode, normalize to [0, 1], resample to the target size, stack.
TensorDataset load_image_dataset(const ImageManifest& m);

/// One (H, W, 3) tensor to a PNG file.
void write_image_png(const std::string& path, const DenseTensor& image);

/// Tile image tensors into a grid (see render_grid) and write a PNG.
void write_image_grid(const std::string& path, std::span<const DenseTensor> tiles);

} // namespace tpca
