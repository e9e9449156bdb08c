// SPDX-License-Identifier: Apache-2.0
#include "tpca/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <utility>

#include "tpca/errors.hpp"
#include "tpca/image.hpp"

namespace tpca {

namespace {

class ByteWriter {
public:
    void magic(const char* m) { bytes_.insert(bytes_.end(), m, m + 4); }

    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

    void f64_span(std::span<const double> vs) {
        for (double v : vs) f64(v);
    }

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    ByteReader(std::span<const std::uint8_t> bytes, std::string origin)
        : bytes_(bytes), origin_(std::move(origin)) {}

    std::size_t offset() const { return off_; }

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError(origin_ + ": " + what + " at byte offset "
                          + std::to_string(off_));
    }

    void magic(const char* m) {
        if (bytes_.size() < 4 || std::memcmp(bytes_.data(), m, 4) != 0) {
            throw FormatError(origin_ + ": bad magic, expected " + std::string(m, 4)
                              + " at byte offset 0");
        }
        off_ = 4;
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[off_ + i]} << (8 * i);
        off_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes_[off_ + i]} << (8 * i);
        off_ += 8;
        return v;
    }

    double f64() {
        const double v = std::bit_cast<double>(u64());
        if (!std::isfinite(v)) {
            off_ -= 8;
            fail("non-finite value");
        }
        return v;
    }

    std::vector<double> f64_vec(std::size_t count) {
        if (count > (bytes_.size() - off_) / 8) fail("truncated file");
        std::vector<double> out(count);
        for (double& v : out) v = f64();
        return out;
    }

    /// Validated count field: must fit the remaining payload when each
    /// element occupies at least `min_elem_bytes`.
    std::size_t count(std::uint64_t raw, std::size_t min_elem_bytes) {
        if (raw > (bytes_.size() - off_) / min_elem_bytes) {
            fail("count field " + std::to_string(raw)
                 + " exceeds the remaining payload");
        }
        return static_cast<std::size_t>(raw);
    }

    void finish() const {
        if (off_ != bytes_.size()) {
            throw FormatError(origin_ + ": " + std::to_string(bytes_.size() - off_)
                              + " trailing bytes at byte offset "
                              + std::to_string(off_));
        }
    }

private:
    void need(std::size_t n) {
        if (bytes_.size() - off_ < n) fail("truncated file");
    }

    std::span<const std::uint8_t> bytes_;
    std::string origin_;
    std::size_t off_ = 0;
};

Shape read_shape(ByteReader& r) {
    const std::uint32_t d = r.u32();
    if (d > 64) r.fail("implausible order " + std::to_string(d));
    std::vector<std::size_t> dims(d);
    for (std::size_t k = 0; k < d; ++k) {
        const std::uint64_t v = r.u64();
        if (v == 0) r.fail("zero dimension");
        dims[k] = r.count(v, 1);
    }
    return Shape(std::move(dims));
}

void write_shape(ByteWriter& w, const Shape& s) {
    w.u32(static_cast<std::uint32_t>(s.order()));
    for (std::size_t d : s.dims()) w.u64(d);
}

void check_descending(ByteReader& r, std::span<const double> vs, const char* what) {
    for (std::size_t i = 1; i < vs.size(); ++i) {
        if (vs[i] > vs[i - 1]) {
            r.fail(std::string(what) + " not in descending order");
        }
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path);
    return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path);
}

void write_tensor(const std::string& path, const DenseTensor& t) {
    ByteWriter w;
    w.magic("TPT1");
    write_shape(w, t.shape());
    w.f64_span(t.values());
    write_file(path, w.bytes());
}

DenseTensor read_tensor(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    ByteReader r(bytes, path);
    r.magic("TPT1");
    Shape s = read_shape(r);
    std::vector<double> data = r.f64_vec(r.count(s.total_size(), 8));
    r.finish();
    return DenseTensor(std::move(s), std::move(data));
}

void write_basis(const std::string& path, const TensorBasis& b) {
    ByteWriter w;
    w.magic("TPB1");
    write_shape(w, b.domain_shape);
    w.u64(b.size());
    w.f64_span(b.eigenvalues);
    for (const DenseTensor& u : b.eigentensors) w.f64_span(u.values());
    write_file(path, w.bytes());
}

TensorBasis read_basis(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    ByteReader r(bytes, path);
    r.magic("TPB1");
    TensorBasis b;
    b.domain_shape = read_shape(r);
    const std::size_t L = b.domain_shape.total_size();
    const std::size_t count = r.count(r.u64(), 8);
    b.eigenvalues = r.f64_vec(count);
    check_descending(r, b.eigenvalues, "eigenvalues");
    b.eigentensors.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        b.eigentensors.emplace_back(b.domain_shape, r.f64_vec(L));
    }
    r.finish();
    return b;
}

void write_rank1(const std::string& path, const Rank1Basis& b) {
    ByteWriter w;
    w.magic("TPR1");
    write_shape(w, b.sample_shape);
    for (const Matrix& u : b.factors) w.f64_span(u.values());
    for (const auto& spec : b.mode_spectra) w.f64_span(spec);
    write_file(path, w.bytes());
}

Rank1Basis read_rank1(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    ByteReader r(bytes, path);
    r.magic("TPR1");
    Rank1Basis b;
    b.sample_shape = read_shape(r);
    if (b.sample_shape.order() == 0) r.fail("rank-1 factors need order >= 1");
    for (std::size_t d : b.sample_shape.dims()) {
        b.factors.emplace_back(d, d, r.f64_vec(d * d));
    }
    for (std::size_t d : b.sample_shape.dims()) {
        b.mode_spectra.push_back(r.f64_vec(d));
        check_descending(r, b.mode_spectra.back(), "mode spectrum");
    }
    r.finish();
    return b;
}

void write_coefficients(const std::string& path, const CoefficientSvd& c) {
    ByteWriter w;
    w.magic("TPC1");
    w.u64(c.d.rows());
    w.u64(c.d.cols());
    w.u64(c.svd.rank);
    w.f64_span(c.d.values());
    w.f64_span(c.svd.u.values());
    w.f64_span(c.svd.singular_values);
    w.f64_span(c.svd.v.values());
    write_file(path, w.bytes());
}

CoefficientSvd read_coefficients(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    ByteReader r(bytes, path);
    r.magic("TPC1");
    const std::size_t n = r.count(r.u64(), 1);
    const std::size_t l = r.count(r.u64(), 1);
    const std::size_t rank = r.count(r.u64(), 1);
    if (rank > std::min(n, l)) r.fail("rank exceeds both matrix dimensions");
    CoefficientSvd c;
    c.d = Matrix(n, l, r.f64_vec(r.count(std::uint64_t{n} * l, 8)));
    c.svd.rank = rank;
    c.svd.u = Matrix(n, rank, r.f64_vec(r.count(std::uint64_t{n} * rank, 8)));
    c.svd.singular_values = r.f64_vec(rank);
    check_descending(r, c.svd.singular_values, "singular values");
    c.svd.v = Matrix(l, rank, r.f64_vec(l * rank));
    r.finish();
    return c;
}

void write_subspace(const std::string& path, const SubspaceBasis& b) {
    ByteWriter w;
    w.magic("TPS1");
    write_shape(w, b.sample_shape);
    w.u64(b.mixing.rows());
    w.u64(b.rank());
    w.f64_span(b.singular_values);
    w.f64_span(b.mixing.values());
    for (const DenseTensor& q : b.components) w.f64_span(q.values());
    write_file(path, w.bytes());
}

SubspaceBasis read_subspace(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    ByteReader r(bytes, path);
    r.magic("TPS1");
    SubspaceBasis b;
    b.sample_shape = read_shape(r);
    const std::size_t L = b.sample_shape.total_size();
    const std::size_t n = r.count(r.u64(), 1);
    const std::size_t rank = r.count(r.u64(), 1);
    b.singular_values = r.f64_vec(rank);
    check_descending(r, b.singular_values, "singular values");
    b.mixing = Matrix(n, rank, r.f64_vec(r.count(std::uint64_t{n} * rank, 8)));
    b.components.reserve(rank);
    for (std::size_t k = 0; k < rank; ++k) {
        b.components.emplace_back(b.sample_shape, r.f64_vec(L));
    }
    b.gram_eigenvalues.resize(rank);
    for (std::size_t k = 0; k < rank; ++k) {
        b.gram_eigenvalues[k] = b.singular_values[k] * b.singular_values[k];
    }
    r.finish();
    return b;
}

void write_model(const std::string& path, const SubspaceModel& m) {
    ByteWriter w;
    w.magic("TPM1");
    w.u32(static_cast<std::uint32_t>(m.method));
    write_shape(w, m.sample_shape);
    w.u64(m.coefficients.rows());
    w.u64(m.retained);
    w.u64(m.spectrum.size());
    w.f64_span(m.spectrum);
    w.f64_span(m.coefficients.values());
    for (const DenseTensor& c : m.components) w.f64_span(c.values());
    w.u64(m.error.per_sample.size());
    w.f64_span(m.error.per_sample);
    w.f64(m.error.total);
    w.f64(m.error.mean);
    w.f64(m.error.predicted);
    w.f64(m.error.relative_gap);
    w.u32(m.error.within_tolerance ? 1 : 0);
    write_file(path, w.bytes());
}

SubspaceModel read_model(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    ByteReader r(bytes, path);
    r.magic("TPM1");
    SubspaceModel m;
    const std::uint32_t method = r.u32();
    if (method > 2) r.fail("unknown method tag " + std::to_string(method));
    m.method = static_cast<Method>(method);
    m.sample_shape = read_shape(r);
    const std::size_t L = m.sample_shape.total_size();
    const std::size_t n = r.count(r.u64(), 1);
    m.retained = r.count(r.u64(), 1);
    const std::size_t spectrum_len = r.count(r.u64(), 8);
    if (m.retained > spectrum_len) r.fail("retained count exceeds the spectrum");
    m.spectrum = r.f64_vec(spectrum_len);
    check_descending(r, m.spectrum, "spectrum");
    m.coefficients = Matrix(n, m.retained,
                            r.f64_vec(r.count(std::uint64_t{n} * m.retained, 8)));
    m.components.reserve(m.retained);
    for (std::size_t k = 0; k < m.retained; ++k) {
        m.components.emplace_back(m.sample_shape, r.f64_vec(L));
    }
    const std::size_t per = r.count(r.u64(), 8);
    if (per != n) r.fail("per-sample error count does not match sample count");
    m.error.per_sample = r.f64_vec(per);
    m.error.total = r.f64();
    m.error.mean = r.f64();
    m.error.predicted = r.f64();
    m.error.relative_gap = r.f64();
    m.error.within_tolerance = r.u32() != 0;
    r.finish();
    return m;
}

std::string sniff_format(const std::string& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    if (bytes.size() >= 8 && bytes[0] == 137 && bytes[1] == 'P') return "png";
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') return "ppm";
    if (bytes.size() >= 4) {
        const std::string m(bytes.begin(), bytes.begin() + 4);
        for (const char* known : {"TPT1", "TPB1", "TPR1", "TPC1", "TPS1", "TPM1"}) {
            if (m == known) return m;
        }
    }
    return "unknown";
}

void write_spectrum_csv(const std::string& path, std::span<const double> values) {
    std::string out = "index,value\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_double(values[i]);
        out += '\n';
    }
    write_file(path, std::span<const std::uint8_t>(
                         reinterpret_cast<const std::uint8_t*>(out.data()), out.size()));
}

void write_error_csv(const std::string& path, const ErrorReport& rep) {
    std::string out = "sample,squared_error\n";
    for (std::size_t i = 0; i < rep.per_sample.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(rep.per_sample[i]);
        out += '\n';
    }
    out += "total," + format_double(rep.total) + "\n";
    out += "mean," + format_double(rep.mean) + "\n";
    out += "predicted," + format_double(rep.predicted) + "\n";
    out += "relative_gap," + format_double(rep.relative_gap) + "\n";
    write_file(path, std::span<const std::uint8_t>(
                         reinterpret_cast<const std::uint8_t*>(out.data()), out.size()));
}

ImageManifest scan_image_directory(const std::string& dir, std::size_t height,
                                   std::size_t width) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw IngestError(dir + " is not a directory");
    }
    ImageManifest m;
    m.root = dir;
    m.target_height = height;
    m.target_width = width;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".ppm") {
            m.files.push_back(entry.path().filename().string());
        }
    }
    std::sort(m.files.begin(), m.files.end());
    if (m.files.empty()) {
        throw IngestError("no .png or .ppm files in " + dir);
    }
    return m;
}

TensorDataset load_image_dataset(const ImageManifest& m) {
    namespace fs = std::filesystem;
    if (m.files.empty()) throw IngestError("empty image manifest");
    std::vector<DenseTensor> samples;
    samples.reserve(m.files.size());
    for (const std::string& name : m.files) {
        const std::string path = (fs::path(m.root) / name).string();
        DenseTensor t = image_to_tensor(decode_image(read_file(path)));
        if (m.target_height != 0 && m.target_width != 0) {
            t = resize_bilinear(t, m.target_height, m.target_width);
        }
        if (!samples.empty() && t.shape() != samples.front().shape()) {
            throw IngestError(path + " decodes to shape " + t.shape().to_string()
                              + " but the first image has "
                              + samples.front().shape().to_string()
                              + " (set a target size to resample)");
        }
        samples.push_back(std::move(t));
    }
    return TensorDataset::from_samples(samples);
}

void write_image_png(const std::string& path, const DenseTensor& image) {
    write_file(path, encode_png(tensor_to_image(image)));
}

void write_image_grid(const std::string& path, std::span<const DenseTensor> tiles) {
    write_file(path, encode_png(render_grid(tiles)));
}

} // namespace tpca
