// SPDX-License-Identifier: Apache-2.0
#include "tpca/image.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "tpca/config.hpp"
#include "tpca/errors.hpp"

namespace tpca {

namespace {

constexpr std::size_t kMaxImageDim = 1u << 20;

std::uint32_t read_be32(const std::uint8_t* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16)
           | (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

void append_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

[[noreturn]] void bad_png(const std::string& what, std::size_t offset) {
    throw FormatError("PNG: " + what + " at byte offset " + std::to_string(offset));
}

std::uint8_t paeth(std::uint8_t a, std::uint8_t b, std::uint8_t c) {
    const int p = int{a} + int{b} - int{c};
    const int pa = std::abs(p - int{a});
    const int pb = std::abs(p - int{b});
    const int pc = std::abs(p - int{c});
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

} // namespace

ImageU8 decode_png(std::span<const std::uint8_t> bytes) {
    static const std::uint8_t kSig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kSig, 8) != 0) {
        bad_png("bad signature", 0);
    }

    std::size_t off = 8;
    bool have_ihdr = false;
    std::uint32_t width = 0, height = 0;
    std::uint8_t color_type = 0;
    std::vector<std::uint8_t> palette;
    std::vector<std::uint8_t> idat;
    bool done = false;

    while (!done) {
        if (off + 8 > bytes.size()) bad_png("truncated chunk header", off);
        const std::uint32_t len = read_be32(bytes.data() + off);
        const std::uint8_t* type = bytes.data() + off + 4;
        if (off + 12 + std::size_t{len} > bytes.size()) {
            bad_png("truncated chunk payload", off);
        }
        const std::uint8_t* payload = bytes.data() + off + 8;
        const std::uint32_t stored_crc = read_be32(payload + len);
        std::uint32_t crc = static_cast<std::uint32_t>(crc32(0L, type, 4 + len));
        if (crc != stored_crc) bad_png("chunk CRC mismatch", off + 8 + len);

        const std::string name(reinterpret_cast<const char*>(type), 4);
        if (name == "IHDR") {
            if (have_ihdr || len != 13) bad_png("malformed IHDR", off);
            width = read_be32(payload);
            height = read_be32(payload + 4);
            const std::uint8_t depth = payload[8];
            color_type = payload[9];
            const std::uint8_t compression = payload[10];
            const std::uint8_t filter = payload[11];
            const std::uint8_t interlace = payload[12];
            if (width == 0 || height == 0 || width > kMaxImageDim
                || height > kMaxImageDim) {
                bad_png("unreasonable dimensions", off);
            }
            if (compression != 0 || filter != 0) bad_png("unknown scheme", off);
            if (interlace != 0) {
                throw IngestError("PNG: interlaced images are not supported");
            }
            if (depth != 8) {
                throw IngestError("PNG: only 8-bit depth is supported, got "
                                  + std::to_string(depth));
            }
            if (color_type != 0 && color_type != 2 && color_type != 3
                && color_type != 4 && color_type != 6) {
                bad_png("unknown color type", off);
            }
            have_ihdr = true;
        } else if (name == "PLTE") {
            if (!have_ihdr || len % 3 != 0 || len > 3 * 256) {
                bad_png("malformed PLTE", off);
            }
            palette.assign(payload, payload + len);
        } else if (name == "IDAT") {
            if (!have_ihdr) bad_png("IDAT before IHDR", off);
            idat.insert(idat.end(), payload, payload + len);
        } else if (name == "IEND") {
            done = true;
        }
        // Ancillary chunks (tEXt, tRNS, gAMA, ...) are skipped.
        off += 12 + len;
    }
    if (!have_ihdr) bad_png("missing IHDR", off);
    if (idat.empty()) bad_png("missing IDAT", off);
    if (color_type == 3 && palette.empty()) bad_png("palette image without PLTE", off);

    const std::size_t channels =
        color_type == 2 ? 3 : color_type == 6 ? 4 : color_type == 4 ? 2 : 1;
    const std::size_t rowbytes = std::size_t{width} * channels;
    const std::size_t raw_size = std::size_t{height} * (rowbytes + 1);
    check_allocation(raw_size, "decoded PNG scanlines");

    std::vector<std::uint8_t> raw(raw_size);
    uLongf dest_len = raw_size;
    const int rc = uncompress(raw.data(), &dest_len, idat.data(),
                              static_cast<uLong>(idat.size()));
    if (rc != Z_OK || dest_len != raw_size) {
        bad_png("IDAT does not inflate to the expected size", 8);
    }

    // Undo per-row filtering in place (recon rows exclude the filter byte).
    std::vector<std::uint8_t> recon(std::size_t{height} * rowbytes);
    const std::size_t bpp = channels;
    for (std::size_t y = 0; y < height; ++y) {
        const std::uint8_t filter = raw[y * (rowbytes + 1)];
        const std::uint8_t* src = raw.data() + y * (rowbytes + 1) + 1;
        std::uint8_t* dst = recon.data() + y * rowbytes;
        const std::uint8_t* up = y > 0 ? recon.data() + (y - 1) * rowbytes : nullptr;
        switch (filter) {
            case 0:
                std::memcpy(dst, src, rowbytes);
                break;
            case 1:
                for (std::size_t i = 0; i < rowbytes; ++i) {
                    const std::uint8_t left = i >= bpp ? dst[i - bpp] : 0;
                    dst[i] = static_cast<std::uint8_t>(src[i] + left);
                }
                break;
            case 2:
                for (std::size_t i = 0; i < rowbytes; ++i) {
                    const std::uint8_t above = up ? up[i] : 0;
                    dst[i] = static_cast<std::uint8_t>(src[i] + above);
                }
                break;
            case 3:
                for (std::size_t i = 0; i < rowbytes; ++i) {
                    const std::uint8_t left = i >= bpp ? dst[i - bpp] : 0;
                    const std::uint8_t above = up ? up[i] : 0;
                    dst[i] = static_cast<std::uint8_t>(src[i]
                                                       + ((int{left} + int{above}) >> 1));
                }
                break;
            case 4:
                for (std::size_t i = 0; i < rowbytes; ++i) {
                    const std::uint8_t left = i >= bpp ? dst[i - bpp] : 0;
                    const std::uint8_t above = up ? up[i] : 0;
                    const std::uint8_t corner = (up && i >= bpp) ? up[i - bpp] : 0;
                    dst[i] = static_cast<std::uint8_t>(src[i]
                                                       + paeth(left, above, corner));
                }
                break;
            default:
                bad_png("unknown scanline filter "
                        + std::to_string(int{filter}), 8);
        }
    }

    ImageU8 img;
    img.width = width;
    img.height = height;
    img.rgb.resize(std::size_t{width} * height * 3);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const std::uint8_t* px = recon.data() + y * rowbytes + x * channels;
            std::uint8_t r, g, b;
            switch (color_type) {
                case 0:
                case 4:
                    r = g = b = px[0];
                    break;
                case 2:
                case 6:
                    r = px[0];
                    g = px[1];
                    b = px[2];
                    break;
                default: {
                    const std::size_t idx = std::size_t{px[0]} * 3;
                    if (idx + 2 >= palette.size()) {
                        bad_png("palette index out of range", 8);
                    }
                    r = palette[idx];
                    g = palette[idx + 1];
                    b = palette[idx + 2];
                }
            }
            std::uint8_t* out = img.rgb.data() + (y * width + x) * 3;
            out[0] = r;
            out[1] = g;
            out[2] = b;
        }
    }
    return img;
}

std::vector<std::uint8_t> encode_png(const ImageU8& img) {
    if (img.width == 0 || img.height == 0
        || img.rgb.size() != img.width * img.height * 3) {
        throw ArgumentError("image buffer does not match its dimensions");
    }
    const std::size_t rowbytes = img.width * 3;
    std::vector<std::uint8_t> raw;
    raw.reserve(img.height * (rowbytes + 1));
    for (std::size_t y = 0; y < img.height; ++y) {
        raw.push_back(0);
        const std::uint8_t* row = img.rgb.data() + y * rowbytes;
        raw.insert(raw.end(), row, row + rowbytes);
    }

    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> comp(comp_len);
    if (compress2(comp.data(), &comp_len, raw.data(),
                  static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw IoError("PNG: deflate failed");
    }
    comp.resize(comp_len);

    std::vector<std::uint8_t> out = {137, 80, 78, 71, 13, 10, 26, 10};
    auto chunk = [&out](const char* type, std::span<const std::uint8_t> payload) {
        append_be32(out, static_cast<std::uint32_t>(payload.size()));
        const std::size_t type_pos = out.size();
        out.insert(out.end(), type, type + 4);
        out.insert(out.end(), payload.begin(), payload.end());
        const std::uint32_t crc = static_cast<std::uint32_t>(
            crc32(0L, out.data() + type_pos, static_cast<uInt>(4 + payload.size())));
        append_be32(out, crc);
    };

    std::vector<std::uint8_t> ihdr;
    append_be32(ihdr, static_cast<std::uint32_t>(img.width));
    append_be32(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(2);   // truecolor
    ihdr.push_back(0);   // deflate
    ihdr.push_back(0);   // adaptive filtering (rows all use filter 0)
    ihdr.push_back(0);   // no interlace
    chunk("IHDR", ihdr);
    chunk("IDAT", comp);
    chunk("IEND", {});
    return out;
}

ImageU8 decode_ppm(std::span<const std::uint8_t> bytes) {
    std::size_t off = 0;
    auto fail = [&off](const std::string& what) -> void {
        throw FormatError("PPM: " + what + " at byte offset " + std::to_string(off));
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') fail("bad magic");
    off = 2;

    auto next_token = [&]() -> std::size_t {
        // Skip whitespace and '#' comments, then read a decimal integer.
        for (;;) {
            if (off >= bytes.size()) fail("truncated header");
            const std::uint8_t c = bytes[off];
            if (c == '#') {
                while (off < bytes.size() && bytes[off] != '\n') ++off;
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                ++off;
            } else {
                break;
            }
        }
        if (bytes[off] < '0' || bytes[off] > '9') fail("expected a number");
        std::size_t v = 0;
        while (off < bytes.size() && bytes[off] >= '0' && bytes[off] <= '9') {
            v = v * 10 + (bytes[off] - '0');
            if (v > kMaxImageDim * 4) fail("number out of range");
            ++off;
        }
        return v;
    };

    const std::size_t width = next_token();
    const std::size_t height = next_token();
    const std::size_t maxval = next_token();
    if (width == 0 || height == 0 || width > kMaxImageDim || height > kMaxImageDim) {
        fail("unreasonable dimensions");
    }
    if (maxval != 255) {
        throw IngestError("PPM: only maxval 255 is supported, got "
                          + std::to_string(maxval));
    }
    if (off >= bytes.size()) fail("truncated header");
    const std::uint8_t sep = bytes[off];
    if (sep != ' ' && sep != '\t' && sep != '\r' && sep != '\n') {
        fail("missing separator before pixel data");
    }
    ++off;

    const std::size_t need = width * height * 3;
    if (bytes.size() - off < need) fail("truncated pixel data");
    ImageU8 img;
    img.width = width;
    img.height = height;
    img.rgb.assign(bytes.begin() + off, bytes.begin() + off + need);
    return img;
}

ImageU8 decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
        return decode_ppm(bytes);
    }
    if (bytes.size() >= 8 && bytes[0] == 137 && bytes[1] == 'P') {
        return decode_png(bytes);
    }
    throw IngestError("unrecognized image format (expected PNG or binary PPM)");
}

DenseTensor image_to_tensor(const ImageU8& img) {
    const std::size_t h = img.height;
    const std::size_t w = img.width;
    DenseTensor t{Shape{h, w, 3}};
    double* data = t.data();
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const std::uint8_t* px = img.rgb.data() + (y * w + x) * 3;
            for (std::size_t c = 0; c < 3; ++c) {
                data[y + x * h + c * h * w] = static_cast<double>(px[c]) / 255.0;
            }
        }
    }
    return t;
}

namespace {

std::uint8_t quantize(double v) {
    v = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
}

void require_image_shape(const Shape& s) {
    if (s.order() != 3 || s.dims()[2] != 3) {
        throw DimensionError("an image tensor needs shape (height, width, 3), got "
                             + s.to_string());
    }
}

} // namespace

ImageU8 tensor_to_image(const DenseTensor& t) {
    require_image_shape(t.shape());
    const std::size_t h = t.shape().dims()[0];
    const std::size_t w = t.shape().dims()[1];
    ImageU8 img;
    img.height = h;
    img.width = w;
    img.rgb.resize(h * w * 3);
    const double* data = t.data();
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t c = 0; c < 3; ++c) {
                img.rgb[(y * w + x) * 3 + c] = quantize(data[y + x * h + c * h * w]);
            }
        }
    }
    return img;
}

DenseTensor resize_bilinear(const DenseTensor& img, std::size_t h, std::size_t w) {
    if (img.order() != 3) {
        throw DimensionError("resampling needs an order-3 (H, W, C) tensor, got "
                             + img.shape().to_string());
    }
    if (h == 0 || w == 0) throw ArgumentError("target size must be positive");
    const std::size_t sh = img.shape().dims()[0];
    const std::size_t sw = img.shape().dims()[1];
    const std::size_t ch = img.shape().dims()[2];

    auto coords = [](std::size_t dst, std::size_t dst_n, std::size_t src_n,
                     std::size_t& i0, std::size_t& i1, double& frac) {
        double s = (static_cast<double>(dst) + 0.5) * static_cast<double>(src_n)
                       / static_cast<double>(dst_n)
                   - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(src_n - 1));
        i0 = static_cast<std::size_t>(std::floor(s));
        i1 = std::min(i0 + 1, src_n - 1);
        frac = s - static_cast<double>(i0);
    };

    // Horizontal pass: (sh, sw, ch) -> (sh, w, ch).
    DenseTensor mid{Shape{sh, w, ch}};
    {
        const double* src = img.data();
        double* dst = mid.data();
        for (std::size_t x = 0; x < w; ++x) {
            std::size_t x0, x1;
            double f;
            coords(x, w, sw, x0, x1, f);
            for (std::size_t c = 0; c < ch; ++c) {
                const double* col0 = src + x0 * sh + c * sh * sw;
                const double* col1 = src + x1 * sh + c * sh * sw;
                double* out = dst + x * sh + c * sh * w;
                for (std::size_t y = 0; y < sh; ++y) {
                    out[y] = (1.0 - f) * col0[y] + f * col1[y];
                }
            }
        }
    }

    // Vertical pass: (sh, w, ch) -> (h, w, ch).
    DenseTensor out{Shape{h, w, ch}};
    {
        const double* src = mid.data();
        double* dst = out.data();
        for (std::size_t y = 0; y < h; ++y) {
            std::size_t y0, y1;
            double f;
            coords(y, h, sh, y0, y1, f);
            for (std::size_t c = 0; c < ch; ++c) {
                for (std::size_t x = 0; x < w; ++x) {
                    const double v0 = src[y0 + x * sh + c * sh * w];
                    const double v1 = src[y1 + x * sh + c * sh * w];
                    dst[y + x * h + c * h * w] = (1.0 - f) * v0 + f * v1;
                }
            }
        }
    }
    return out;
}

ImageU8 render_grid(std::span<const DenseTensor> tiles) {
    if (tiles.empty()) throw ArgumentError("cannot render an empty grid");
    require_image_shape(tiles[0].shape());
    const Shape& shape = tiles[0].shape();
    for (const DenseTensor& t : tiles) {
        if (t.shape() != shape) {
            throw DimensionError("grid tiles disagree in shape: "
                                 + t.shape().to_string() + " vs " + shape.to_string());
        }
    }
    const std::size_t th = shape.dims()[0];
    const std::size_t tw = shape.dims()[1];
    const std::size_t n = tiles.size();
    const std::size_t rows = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(n))));
    const std::size_t cols = (n + rows - 1) / rows;

    ImageU8 grid;
    grid.height = rows * th;
    grid.width = cols * tw;
    grid.rgb.assign(grid.height * grid.width * 3, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const ImageU8 tile = tensor_to_image(tiles[i]);
        const std::size_t r0 = (i / cols) * th;
        const std::size_t c0 = (i % cols) * tw;
        for (std::size_t y = 0; y < th; ++y) {
            std::uint8_t* dst = grid.rgb.data() + ((r0 + y) * grid.width + c0) * 3;
            const std::uint8_t* src = tile.rgb.data() + y * tw * 3;
            std::memcpy(dst, src, tw * 3);
        }
    }
    return grid;
}

} // namespace tpca
