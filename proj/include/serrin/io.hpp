#pragma once

#include "serrin/band.hpp"
#include "serrin/mkdv.hpp"
#include "serrin/ring.hpp"
#include "serrin/verify.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace serrin {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Residual tolerances used by construction-time verification and by the
/// `verify` command. Defaults are the acceptance values; any entry can be
/// overridden by --tol KEY=VAL, a config file, or SERRIN_TOL_<KEY>.
struct Tolerances {
    double pde = 1e-5;
    double dirichlet = 1e-7;
    double neumann = 1e-6;
    double hopf = 1e-6;
    double harmonicity = 1e-6;
    double genus = 1e-6;

    void set(const std::string& key, double value);
    double get(const std::string& key) const;
    void apply_env();
};

VerifyReport build_verify(const DomainField& f);
VerifyReport build_verify(const BandSolution& s);

/// Recompute the residuals of a stored serrin-domain/1 or serrin-band/1
/// file from its samples alone.
VerifyReport verify_file(const std::filesystem::path& json_path);

void write_domain_json(const DomainField& f, const VerifyReport& rep,
                       const std::optional<SpectralFit>& fit,
                       const std::filesystem::path& path);
void write_band_json(const BandSolution& s, const VerifyReport& rep,
                     const std::optional<SpectralFit>& fit, const std::filesystem::path& path);

/// Figure output: boundary curves stroked, parameter curves thin, the unit
/// circle highlighted.
void write_ring_svg(const DomainField& f, const std::filesystem::path& path);
void write_band_svg(const BandSolution& s, const std::filesystem::path& path, int periods = 3,
                    bool rescaled = false);
void write_necklace_svg(const NecklaceReport& r, const std::filesystem::path& path);
/// Re-render the figure of a stored domain JSON.
void write_svg_from_json(const std::filesystem::path& json_path,
                         const std::filesystem::path& svg_path);

struct SweepRow {
    int n = 0;
    double tau = 0, eta = 0, vartheta = 0, theta_arc = 0;
    double h0 = 0, h1 = 0, s_mid = 0;
    double a1 = 0, a2 = 0, b1 = 0, b2 = 0;
    double psi1 = 0, psi2 = 0;
    bool ok = true;
    bool upsilon1_mark = false, upsilon2_mark = false;
    std::string error;
};

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// Atomic write of a text file (temp + rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

} // namespace serrin
