// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tpca/tensor.hpp"

// 8-bit RGB images and their tensor form. An image tensor has shape
// (height, width, 3) with modes (row, column, channel) and values in
// [0, 1] (pixel byte / 255). Quantization back to bytes clamps to [0, 1]
// and rounds half away from zero.

namespace tpca {

struct ImageU8 {
    std::size_t width = 0;
    std::size_t height = 0;
    /// Row-major, 3 bytes per pixel.
    std::vector<std::uint8_t> rgb;
};

/// Decodes PNG (8-bit depth; gray, RGB, palette, with or without alpha;
/// alpha is dropped) or binary PPM (P6, maxval 255). Throws FormatError
/// for malformed data, IngestError for unsupported pixel layouts.
ImageU8 decode_image(std::span<const std::uint8_t> bytes);

ImageU8 decode_png(std::span<const std::uint8_t> bytes);
ImageU8 decode_ppm(std::span<const std::uint8_t> bytes);

/// 8-bit RGB PNG, filter 0, fixed compression level: byte-deterministic
/// for identical input.
std::vector<std::uint8_t> encode_png(const ImageU8& img);

/// (height, width, 3) tensor with values byte / 255.
DenseTensor image_to_tensor(const ImageU8& img);

/// Clamp to [0, 1], quantize (round half away from zero).
ImageU8 tensor_to_image(const DenseTensor& t);

/// Separable bilinear resampling with half-pixel-centered coordinates:
/// destination pixel x samples the source at (x + 0.5) * W / W' - 0.5,
/// clamped to the valid range; horizontal pass first, then vertical, in
/// double precision. Input shape (H, W, C), output (h, w, C).
DenseTensor resize_bilinear(const DenseTensor& img, std::size_t h, std::size_t w);

/// Tiles same-shape image tensors into a grid with ceil(sqrt(n)) rows
/// and ceil(n / rows) columns; unused cells are black. Throws
/// DimensionError unless every tile has shape (H, W, 3).
ImageU8 render_grid(std::span<const DenseTensor> tiles);

} // namespace tpca
