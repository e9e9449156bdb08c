// SPDX-License-Identifier: Apache-2.0
// Command line front end: derive tensor bases from data, project datasets
// onto them, verify the library's mathematical invariants, inspect stored
// artifacts. Exit codes: 0 success, 1 failed invariant or non-convergence,
// 2 bad usage or invalid input data, 3 capacity cap exceeded, 4 file
// format or I/O problem.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpca/config.hpp"
#include "tpca/errors.hpp"
#include "tpca/image.hpp"
#include "tpca/io.hpp"
#include "tpca/kernels.hpp"
#include "tpca/linalg.hpp"
#include "tpca/pca.hpp"
#include "tpca/rank1.hpp"
#include "tpca/subspace.hpp"
#include "tpca/synth.hpp"
#include "tpca/tensor.hpp"
#include "tpca/tensor_operator.hpp"

namespace {

namespace fs = std::filesystem;
using namespace tpca;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

struct InputOpts {
    std::string image_dir;
    std::string tensor_file;
    std::string synthetic;
    std::size_t height = 0;
    std::size_t width = 0;
    bool center = false;
    std::uint64_t seed = 1;
};

void add_input_options(CLI::App* cmd, InputOpts& in) {
    auto* dir = cmd->add_option("--in", in.image_dir,
                                "Directory of .png/.ppm images to ingest");
    auto* tns = cmd->add_option("--tensor", in.tensor_file,
                                "Stacked dataset tensor file (last mode = samples)");
    auto* syn = cmd->add_option(
        "--synthetic", in.synthetic,
        "Seeded synthetic dataset, e.g. shape=4x4x3,n=20[,rank=3][,noise=0.01]");
    dir->excludes(tns)->excludes(syn);
    tns->excludes(syn);
    cmd->add_option("--height", in.height, "Resample images to this height");
    cmd->add_option("--width", in.width, "Resample images to this width");
    cmd->add_option("--seed", in.seed, "Seed for synthetic data")
        ->default_val(std::uint64_t{1});
    cmd->add_flag("--center", in.center, "Subtract the sample mean before fitting");
}

std::vector<std::size_t> parse_shape_spec(const std::string& text) {
    std::vector<std::size_t> dims;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find('x', pos);
        if (next == std::string::npos) next = text.size();
        const std::string part = text.substr(pos, next - pos);
        try {
            dims.push_back(std::stoull(part));
        } catch (const std::exception&) {
            throw ArgumentError("bad shape component '" + part + "' in '" + text + "'");
        }
        pos = next + 1;
    }
    if (dims.empty()) throw ArgumentError("empty shape spec");
    return dims;
}

TensorDataset synthesize(const std::string& spec, std::uint64_t seed) {
    std::vector<std::size_t> dims;
    std::size_t n = 0;
    std::size_t rank = 0;
    double noise = 0.0;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t next = spec.find(',', pos);
        if (next == std::string::npos) next = spec.size();
        const std::string part = spec.substr(pos, next - pos);
        const std::size_t eq = part.find('=');
        if (eq == std::string::npos) {
            throw ArgumentError("expected key=value in synthetic spec, got '" + part
                                + "'");
        }
        const std::string key = part.substr(0, eq);
        const std::string value = part.substr(eq + 1);
        try {
            if (key == "shape") {
                dims = parse_shape_spec(value);
            } else if (key == "n") {
                n = std::stoull(value);
            } else if (key == "rank") {
                rank = std::stoull(value);
            } else if (key == "noise") {
                noise = std::stod(value);
            } else {
                throw ArgumentError("unknown synthetic key '" + key + "'");
            }
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw ArgumentError("bad value '" + value + "' for synthetic key '" + key
                                + "'");
        }
        pos = next + 1;
    }
    if (dims.empty() || n == 0) {
        throw ArgumentError("synthetic spec needs at least shape=...,n=...");
    }
    SplitMix64 rng(seed);
    const Shape shape{std::vector<std::size_t>(dims)};
    if (rank > 0) return planted_rank_dataset(shape, n, rank, rng, noise);
    return random_dataset(shape, n, rng);
}

TensorDataset load_input(const InputOpts& in) {
    std::optional<TensorDataset> data;
    if (!in.image_dir.empty()) {
        data = load_image_dataset(
            scan_image_directory(in.image_dir, in.height, in.width));
    } else if (!in.tensor_file.empty()) {
        data = TensorDataset::from_tensor(read_tensor(in.tensor_file));
    } else if (!in.synthetic.empty()) {
        data = synthesize(in.synthetic, in.seed);
    } else {
        throw ArgumentError("no input given: use --in, --tensor or --synthetic");
    }
    if (in.center) return centered(*data);
    return std::move(*data);
}

void describe_dataset(const TensorDataset& x) {
    std::cout << "samples: " << x.count() << " of shape "
              << x.sample_shape().to_string() << " (flattened dimension "
              << x.sample_size() << ")\n";
}

bool image_shaped(const Shape& s) {
    return s.order() == 3 && s.dims()[2] == 3;
}

// ---------------------------------------------------------------- basis

int cmd_basis(const InputOpts& in, const std::string& method,
              const std::string& out_dir) {
    const TensorDataset x = load_input(in);
    describe_dataset(x);
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    if (method == "selfadjoint") {
        const SelfAdjointOperator cov = covariance_operator(x);
        const TensorBasis basis = eigentensor_basis(cov);
        write_basis((out / "basis.tpb").string(), basis);
        write_spectrum_csv((out / "spectrum.csv").string(), basis.eigenvalues);
        std::cout << "method: selfadjoint\n"
                  << "eigenvalues: " << basis.eigenvalues.size()
                  << ", largest " << fmt(basis.eigenvalues.front()) << "\n"
                  << "wrote: " << (out / "basis.tpb").string() << "\n"
                  << "wrote: " << (out / "spectrum.csv").string() << "\n";
    } else if (method == "rank1") {
        const Rank1Basis basis = rank1_basis(x);
        const CoefficientSvd c = coefficients(x, basis);
        write_rank1((out / "factors.tpr").string(), basis);
        write_coefficients((out / "coefficients.tpc").string(), c);
        write_spectrum_csv((out / "spectrum.csv").string(), c.svd.singular_values);
        std::cout << "method: rank1\n"
                  << "coefficient rank: " << c.svd.rank << "\n"
                  << "wrote: " << (out / "factors.tpr").string() << "\n"
                  << "wrote: " << (out / "coefficients.tpc").string() << "\n"
                  << "wrote: " << (out / "spectrum.csv").string() << "\n";
    } else if (method == "subspace") {
        const SubspaceBasis basis = subspace_basis(x);
        write_subspace((out / "subspace.tps").string(), basis);
        write_spectrum_csv((out / "spectrum.csv").string(), basis.singular_values);
        std::cout << "method: subspace\n"
                  << "rank: " << basis.rank() << "\n"
                  << "wrote: " << (out / "subspace.tps").string() << "\n"
                  << "wrote: " << (out / "spectrum.csv").string() << "\n";
    } else {
        throw ArgumentError("unknown method '" + method
                            + "' (expected selfadjoint, rank1 or subspace)");
    }
    return 0;
}

// ------------------------------------------------------------------ pca

struct SweepRow {
    std::size_t m;
    double measured;
    double predicted;
};

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::string text = "components,measured,predicted,relative_gap\n";
    char buf[128];
    for (const SweepRow& r : rows) {
        const double scale = std::max(std::abs(r.measured), 1e-300);
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", r.m, r.measured,
                      r.predicted, std::abs(r.measured - r.predicted) / scale);
        text += buf;
    }
    write_file(path, std::span<const std::uint8_t>(
                         reinterpret_cast<const std::uint8_t*>(text.data()),
                         text.size()));
}

// Parseval sweep: with orthonormal components, the measured error at every
// truncation level follows from one pass of coefficients.
std::vector<SweepRow> sweep_from_coefficients(const Matrix& coeffs,
                                              std::span<const double> spectrum,
                                              double energy, bool mean_units,
                                              std::size_t samples) {
    const std::size_t avail = coeffs.cols();
    std::vector<double> kept(avail, 0.0);
    for (std::size_t n = 0; n < coeffs.rows(); ++n) {
        for (std::size_t l = 0; l < avail; ++l) {
            kept[l] += coeffs.at(n, l) * coeffs.at(n, l);
        }
    }
    std::vector<SweepRow> rows(avail);
    double kept_sum = 0.0;
    for (std::size_t m = 1; m <= avail; ++m) {
        kept_sum += kept[m - 1];
        double tail = 0.0;
        for (std::size_t p = m; p < spectrum.size(); ++p) {
            tail += mean_units ? spectrum[p] : spectrum[p] * spectrum[p];
        }
        double measured = energy - kept_sum;
        if (mean_units) measured /= static_cast<double>(samples);
        rows[m - 1] = SweepRow{m, measured, tail};
    }
    return rows;
}

int cmd_pca(const InputOpts& in, const std::string& basis_path,
            const std::string& out_dir, std::size_t components, bool sweep) {
    const TensorDataset x = load_input(in);
    describe_dataset(x);
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    const std::string kind = sniff_format(basis_path);
    SubspaceModel model;
    Matrix full_coeffs;  // all available coefficients, for --sweep
    std::vector<double> spectrum;

    double energy = 0.0;
    for (std::size_t n = 0; n < x.count(); ++n) {
        energy += kernels::sum_squares(x.sample(n).data(), x.sample_size());
    }

    if (kind == "TPB1") {
        const TensorBasis basis = read_basis(basis_path);
        std::size_t m = components;
        if (m == 0) m = std::max<std::size_t>(1, gram_rank(basis.eigenvalues));
        model = pca_truncate(x, basis, m);
        spectrum = basis.eigenvalues;
        if (sweep) {
            full_coeffs = Matrix(x.count(), basis.size());
            for (std::size_t n = 0; n < x.count(); ++n) {
                const std::vector<double> c = project(x.sample_tensor(n), basis);
                std::copy(c.begin(), c.end(), full_coeffs.row(n));
            }
        }
    } else if (kind == "TPR1") {
        const Rank1Basis basis = read_rank1(basis_path);
        const CoefficientSvd c = coefficients(x, basis);
        std::size_t m = components;
        if (m == 0) m = std::max<std::size_t>(1, c.svd.rank);
        model = truncate_rank1(c, basis, m);
        spectrum = c.svd.singular_values;
        if (sweep) {
            full_coeffs = Matrix(x.count(), c.svd.rank);
            for (std::size_t n = 0; n < x.count(); ++n) {
                for (std::size_t l = 0; l < c.svd.rank; ++l) {
                    full_coeffs.at(n, l) = c.svd.singular_values[l] * c.svd.u.at(n, l);
                }
            }
        }
    } else if (kind == "TPS1") {
        const SubspaceBasis basis = read_subspace(basis_path);
        std::size_t m = components;
        if (m == 0) m = std::max<std::size_t>(1, basis.rank());
        model = project_subspace(x, basis, m);
        spectrum = basis.singular_values;
        if (sweep) {
            full_coeffs = Matrix(x.count(), basis.rank());
            for (std::size_t n = 0; n < x.count(); ++n) {
                for (std::size_t l = 0; l < basis.rank(); ++l) {
                    full_coeffs.at(n, l) = kernels::dot(
                        x.sample(n).data(), basis.components[l].data(),
                        x.sample_size());
                }
            }
        }
    } else {
        throw FormatError(basis_path + " holds '" + kind
                          + "', expected a basis file (TPB1, TPR1 or TPS1)");
    }

    write_model((out / "model.tpm").string(), model);
    write_error_csv((out / "error.csv").string(), model.error);
    std::cout << "method: " << method_name(model.method) << "\n"
              << "retained: " << model.retained << " of " << spectrum.size() << "\n"
              << "measured error ("
              << (model.method == Method::selfadjoint ? "mean" : "total")
              << "): "
              << fmt(model.method == Method::selfadjoint ? model.error.mean
                                                         : model.error.total)
              << "\n"
              << "predicted from spectrum: " << fmt(model.error.predicted) << "\n"
              << "relative gap: " << fmt(model.error.relative_gap)
              << (model.error.within_tolerance ? " (within tolerance)"
                                               : " (EXCEEDS tolerance)")
              << "\n"
              << "wrote: " << (out / "model.tpm").string() << "\n"
              << "wrote: " << (out / "error.csv").string() << "\n";

    if (sweep) {
        const bool mean_units = model.method == Method::selfadjoint;
        write_sweep_csv((out / "sweep.csv").string(),
                        sweep_from_coefficients(full_coeffs, spectrum, energy,
                                                mean_units, x.count()));
        std::cout << "wrote: " << (out / "sweep.csv").string() << "\n";
    }

    if (image_shaped(x.sample_shape())) {
        std::vector<DenseTensor> originals, recons;
        originals.reserve(x.count());
        recons.reserve(x.count());
        for (std::size_t n = 0; n < x.count(); ++n) {
            originals.push_back(x.sample_tensor(n));
            DenseTensor r{model.sample_shape};
            for (std::size_t l = 0; l < model.retained; ++l) {
                kernels::axpy(model.coefficients.at(n, l),
                              model.components[l].data(), r.data(), r.size());
            }
            recons.push_back(std::move(r));
        }
        write_image_grid((out / "originals.png").string(), originals);
        write_image_grid((out / "reconstruction.png").string(), recons);
        std::cout << "wrote: " << (out / "originals.png").string() << "\n"
                  << "wrote: " << (out / "reconstruction.png").string() << "\n";
    } else {
        std::cout << "image grids skipped (samples are not (H, W, 3) images)\n";
    }

    if (!model.error.within_tolerance) return 1;
    return 0;
}

// --------------------------------------------------------------- verify

class Verifier {
public:
    explicit Verifier(std::uint64_t seed, bool perturb)
        : seed_(seed), perturb_(perturb) {}

    int run() {
        check_index_roundtrip();
        check_contraction();
        const std::optional<SelfAdjointOperator> op = check_operator();
        if (op) {
            check_eigentensors(*op);
        }
        check_error_identities();
        check_determinism();
        std::cout << (failures_ == 0 ? "verify: all checks passed"
                                     : "verify: " + std::to_string(failures_)
                                           + " check(s) FAILED")
                  << "\n";
        return failures_ == 0 ? 0 : 1;
    }

private:
    void report(const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
        if (!ok) ++failures_;
    }

    void check_index_roundtrip() {
        const std::vector<Shape> shapes = {Shape{3, 2, 2}, Shape{4, 3, 2, 2},
                                           Shape{7}, Shape{}};
        bool ok = true;
        for (const Shape& s : shapes) {
            const IndexTable table = index_table(s);
            for (std::size_t m = 1; m <= s.total_size(); ++m) {
                const MultiIndex mi = inverse_linear_index(m, s);
                if (linear_index(mi, s) != m) ok = false;
                const auto row = table.row(m);
                for (std::size_t k = 0; k < s.order(); ++k) {
                    if (row[k] != mi[k]) ok = false;
                }
            }
        }
        // Known value: the last cell of a (3, 2, 2) block is element 12.
        ok = ok && linear_index(MultiIndex{3, 2, 2}, Shape{3, 2, 2}) == 12;
        report("index-roundtrip", ok, "4 shapes, every linear index");
    }

    void check_contraction() {
        SplitMix64 rng(seed_ ^ 0xC0FFEE);
        const DenseTensor x = random_tensor(Shape{3, 4, 2}, rng);
        const DenseTensor y = random_tensor(Shape{4, 5, 3}, rng);
        const std::vector<std::size_t> mx{2, 1}, my{1, 3};
        const DenseTensor z = contract(x, y, mx, my);
        double worst = 0.0;
        for (std::size_t i3 = 1; i3 <= 2; ++i3) {
            for (std::size_t j2 = 1; j2 <= 5; ++j2) {
                double acc = 0.0;
                for (std::size_t a = 1; a <= 4; ++a) {
                    for (std::size_t b = 1; b <= 3; ++b) {
                        acc += x(b, a, i3) * y(a, j2, b);
                    }
                }
                worst = std::max(worst, std::abs(acc - z(i3, j2)));
            }
        }
        const double scale = std::max(1.0, max_abs(z));
        report("contraction-oracle", worst <= 1e-12 * scale,
               "max deviation " + fmt(worst));
    }

    std::optional<SelfAdjointOperator> check_operator() {
        SplitMix64 rng(seed_);
        const Shape domain{2, 2, 2, 2};
        const std::size_t L = domain.total_size();
        std::vector<std::size_t> dims = domain.dims();
        dims.insert(dims.end(), domain.dims().begin(), domain.dims().end());
        DenseTensor entries = random_tensor(Shape{std::move(dims)}, rng);
        double* data = entries.data();
        for (std::size_t n = 0; n < L; ++n) {
            for (std::size_t m = n + 1; m < L; ++m) {
                const double v = 0.5 * (data[n + m * L] + data[m + n * L]);
                data[n + m * L] = v;
                data[m + n * L] = v;
            }
        }
        if (perturb_) {
            data[0 + 3 * L] += 0.5;  // break A[0,3] vs A[3,0]
        }
        const SelfAdjointCheck check = is_self_adjoint(entries);
        report("operator-selfadjoint", check.is_self_adjoint,
               "max asymmetry " + fmt(check.max_asymmetry) + ", tolerance "
                   + fmt(check.tolerance));
        if (!check.is_self_adjoint) return std::nullopt;
        return SelfAdjointOperator::from_tensor(std::move(entries));
    }

    void check_eigentensors(const SelfAdjointOperator& op) {
        const TensorBasis basis = eigentensor_basis(op);
        const double residual = proposition1_residual(op, basis);
        report("eigen-residual", residual <= config().tol.tol_eig,
               "max relative residual " + fmt(residual));

        const double orth = gram_orthonormality_error(basis.eigentensors);
        report("basis-orthonormality", orth <= config().tol.tol_orth,
               "max gram deviation " + fmt(orth));

        SplitMix64 rng(seed_ ^ 0xBEEF);
        const DenseTensor x = random_tensor(op.domain_shape(), rng);
        const std::vector<double> coeffs = project(x, basis);
        const double parseval =
            std::abs(kernels::sum_squares(coeffs.data(), coeffs.size())
                     - inner(x, x));
        DenseTensor rec = reconstruct(coeffs, basis);
        rec -= x;
        const double recon = norm(rec) / std::max(norm(x), 1e-300);
        report("completeness",
               parseval <= 1e-10 * std::max(inner(x, x), 1.0) && recon <= 1e-10,
               "parseval gap " + fmt(parseval) + ", reconstruction residual "
                   + fmt(recon));
    }

    void check_error_identities() {
        SplitMix64 rng(seed_ ^ 0xD15EA5E);
        const Shape shape{2, 2, 3};
        const TensorDataset x = random_dataset(shape, 10, rng);

        double worst_cov = 0.0;
        const TensorBasis basis = eigentensor_basis(covariance_operator(x));
        for (std::size_t m = 1; m <= basis.size(); ++m) {
            worst_cov = std::max(worst_cov,
                                 pca_truncate(x, basis, m).error.relative_gap);
        }
        report("error-identity-selfadjoint", worst_cov <= kErrorIdentityTol,
               "worst relative gap " + fmt(worst_cov) + " over "
                   + std::to_string(basis.size()) + " truncation levels");

        double worst_r1 = 0.0;
        const Rank1Basis r1 = rank1_basis(x);
        const CoefficientSvd c = coefficients(x, r1);
        for (std::size_t m = 1; m <= c.svd.rank; ++m) {
            worst_r1 = std::max(worst_r1,
                                truncate_rank1(c, r1, m).error.relative_gap);
        }
        report("error-identity-rank1", worst_r1 <= kErrorIdentityTol,
               "worst relative gap " + fmt(worst_r1) + " over "
                   + std::to_string(c.svd.rank) + " truncation levels");

        double worst_sub = 0.0;
        const SubspaceBasis sub = subspace_basis(x);
        for (std::size_t m = 1; m <= sub.rank(); ++m) {
            worst_sub = std::max(worst_sub,
                                 project_subspace(x, sub, m).error.relative_gap);
        }
        report("error-identity-subspace", worst_sub <= kErrorIdentityTol,
               "worst relative gap " + fmt(worst_sub) + " over "
                   + std::to_string(sub.rank()) + " truncation levels");
    }

    void check_determinism() {
        auto build = [this]() {
            SplitMix64 rng(seed_ ^ 0xFEED);
            const TensorDataset x = random_dataset(Shape{3, 3, 2}, 8, rng);
            return eigentensor_basis(covariance_operator(x));
        };
        const TensorBasis a = build();
        const TensorBasis b = build();
        bool identical = a.eigenvalues.size() == b.eigenvalues.size();
        for (std::size_t k = 0; identical && k < a.eigenvalues.size(); ++k) {
            identical = std::memcmp(&a.eigenvalues[k], &b.eigenvalues[k],
                                    sizeof(double)) == 0;
            if (identical) {
                identical = std::memcmp(a.eigentensors[k].data(),
                                        b.eigentensors[k].data(),
                                        a.eigentensors[k].size() * sizeof(double))
                            == 0;
            }
        }
        report("determinism", identical,
               "two same-seed runs compared bit for bit");
    }

    std::uint64_t seed_;
    bool perturb_;
    int failures_ = 0;
};

// ------------------------------------------------------- spectrum / info

int cmd_spectrum(const std::string& basis_path, const std::string& out_path) {
    const std::string kind = sniff_format(basis_path);
    std::vector<double> values;
    if (kind == "TPB1") {
        values = read_basis(basis_path).eigenvalues;
    } else if (kind == "TPS1") {
        values = read_subspace(basis_path).singular_values;
    } else if (kind == "TPR1") {
        const fs::path sibling = fs::path(basis_path).parent_path()
                                 / "coefficients.tpc";
        if (fs::exists(sibling)) {
            values = read_coefficients(sibling.string()).svd.singular_values;
        } else {
            const Rank1Basis b = read_rank1(basis_path);
            for (const auto& spec : b.mode_spectra) {
                values.insert(values.end(), spec.begin(), spec.end());
            }
        }
    } else {
        throw FormatError(basis_path + " holds '" + kind
                          + "', expected a basis file (TPB1, TPR1 or TPS1)");
    }
    if (out_path.empty()) {
        std::cout << "index,value\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, values[i]);
            std::cout << buf;
        }
    } else {
        write_spectrum_csv(out_path, values);
        std::cout << "wrote: " << out_path << "\n";
    }
    return 0;
}

int cmd_info(const std::string& path) {
    const std::string kind = sniff_format(path);
    std::cout << "file: " << path << "\n";
    if (kind == "TPT1") {
        const DenseTensor t = read_tensor(path);
        std::cout << "kind: tensor\nshape: " << t.shape().to_string()
                  << "\nvalues: " << t.size() << "\n";
    } else if (kind == "TPB1") {
        const TensorBasis b = read_basis(path);
        std::cout << "kind: eigentensor basis\nshape: "
                  << b.domain_shape.to_string() << "\nelements: " << b.size()
                  << "\n";
        if (!b.eigenvalues.empty()) {
            std::cout << "eigenvalues: " << fmt(b.eigenvalues.front()) << " .. "
                      << fmt(b.eigenvalues.back()) << "\n";
        }
    } else if (kind == "TPR1") {
        const Rank1Basis b = read_rank1(path);
        std::cout << "kind: rank-1 mode factors\nshape: "
                  << b.sample_shape.to_string() << "\nbasis size: " << b.size()
                  << "\n";
    } else if (kind == "TPC1") {
        const CoefficientSvd c = read_coefficients(path);
        std::cout << "kind: coefficient SVD\nsamples: " << c.d.rows()
                  << "\nbasis size: " << c.d.cols() << "\nrank: " << c.svd.rank
                  << "\n";
    } else if (kind == "TPS1") {
        const SubspaceBasis b = read_subspace(path);
        std::cout << "kind: snapshot subspace basis\nshape: "
                  << b.sample_shape.to_string() << "\nsamples: "
                  << b.mixing.rows() << "\nrank: " << b.rank() << "\n";
    } else if (kind == "TPM1") {
        const SubspaceModel m = read_model(path);
        std::cout << "kind: truncated model\nmethod: " << method_name(m.method)
                  << "\nshape: " << m.sample_shape.to_string()
                  << "\nsamples: " << m.coefficients.rows() << "\nretained: "
                  << m.retained << " of " << m.spectrum.size()
                  << "\nrelative gap: " << fmt(m.error.relative_gap) << "\n";
    } else if (kind == "png" || kind == "ppm") {
        const ImageU8 img = decode_image(read_file(path));
        std::cout << "kind: " << kind << " image\nsize: " << img.width << "x"
                  << img.height << "\n";
    } else {
        throw FormatError(path + ": unrecognized format");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthonormal tensor bases from self-adjoint operators, and "
                 "low-rank projection of tensor datasets"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file");
    app.fallthrough();

    Tolerances tol;
    std::uint64_t memory_cap = config().memory_cap;
    std::size_t eig_cap = config().eig_cap;
    std::string kernel_choice;
    app.add_option("--tol-eig", tol.tol_eig, "Eigen-residual tolerance");
    app.add_option("--tol-orth", tol.tol_orth, "Orthonormality tolerance");
    app.add_option("--sym-tol", tol.sym_tol_factor,
                   "Self-adjointness tolerance factor");
    app.add_option("--eps-rank", tol.eps_rank, "Relative spectral rank cutoff");
    app.add_option("--sign-eps", tol.sign_eps, "Sign canonicalization threshold");
    app.add_option("--tol-svd", tol.tol_svd, "SVD acceptance tolerance");
    app.add_option("--max-sweeps", tol.max_sweeps, "Jacobi sweep limit");
    app.add_option("--memory-cap", memory_cap, "Allocation cap in bytes");
    app.add_option("--eig-cap", eig_cap, "Dense eigensolver size cap");
    app.add_option("--kernels", kernel_choice,
                   "Kernel variant: scalar, avx2 or auto")
        ->check(CLI::IsMember({"scalar", "avx2", "auto"}));

    auto* basis_cmd =
        app.add_subcommand("basis", "Derive a tensor basis from a dataset");
    InputOpts basis_in;
    std::string basis_method, basis_out;
    add_input_options(basis_cmd, basis_in);
    basis_cmd->add_option("--method", basis_method,
                          "selfadjoint, rank1 or subspace")
        ->required();
    basis_cmd->add_option("--out", basis_out, "Output directory")->required();

    auto* pca_cmd = app.add_subcommand(
        "pca", "Project a dataset onto a stored basis and truncate");
    InputOpts pca_in;
    std::string pca_basis, pca_out;
    std::size_t pca_components = 0;
    bool pca_sweep = false;
    add_input_options(pca_cmd, pca_in);
    pca_cmd->add_option("--basis", pca_basis, "Basis file (TPB1, TPR1 or TPS1)")
        ->required();
    pca_cmd->add_option("--components", pca_components,
                        "Components to retain (default: numerical rank)");
    pca_cmd->add_flag("--sweep", pca_sweep,
                      "Also write measured-vs-predicted error for every rank");
    pca_cmd->add_option("--out", pca_out, "Output directory")->required();

    auto* verify_cmd =
        app.add_subcommand("verify", "Run the built-in invariant checks");
    std::uint64_t verify_seed = 20240817;
    bool verify_perturb = false;
    verify_cmd->add_option("--seed", verify_seed, "Seed for the checks");
    verify_cmd->add_flag(
        "--perturb", verify_perturb,
        "Inject an asymmetry so the self-adjointness check must fail");

    auto* spectrum_cmd =
        app.add_subcommand("spectrum", "Export a stored basis's spectrum");
    std::string spectrum_basis, spectrum_out;
    spectrum_cmd->add_option("--basis", spectrum_basis, "Basis file")->required();
    spectrum_cmd->add_option("--out", spectrum_out,
                             "CSV path (default: print to stdout)");

    auto* info_cmd = app.add_subcommand("info", "Describe a stored file");
    std::string info_path;
    info_cmd->add_option("file", info_path, "File to inspect")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        config().tol = tol;
        config().memory_cap = memory_cap;
        config().eig_cap = eig_cap;
        if (!kernel_choice.empty()) {
            if (kernel_choice == "scalar") {
                kernels::select(kernels::Variant::scalar);
            } else if (kernel_choice == "avx2") {
                kernels::select(kernels::Variant::avx2);
            } else {
                kernels::select_auto();
            }
        }

        if (basis_cmd->parsed()) {
            return cmd_basis(basis_in, basis_method, basis_out);
        }
        if (pca_cmd->parsed()) {
            return cmd_pca(pca_in, pca_basis, pca_out, pca_components, pca_sweep);
        }
        if (verify_cmd->parsed()) {
            return Verifier(verify_seed, verify_perturb).run();
        }
        if (spectrum_cmd->parsed()) {
            return cmd_spectrum(spectrum_basis, spectrum_out);
        }
        if (info_cmd->parsed()) {
            return cmd_info(info_path);
        }
        std::cerr << "error: no subcommand given\n";
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 4;
    } catch (const IngestError& e) {
        std::cerr << "ingest error: " << e.what() << "\n";
        return 4;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
