#ifndef VBAR_REPORT_HPP
#define VBAR_REPORT_HPP

#include "vbar/config.hpp"
#include "vbar/perturbation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vbar {

/// Options of a single verify run.
struct VerifyOptions {
    std::uint64_t seed = 1234;
    /// Nonempty: write the fine-grid ground (and, when present, first
    /// excited) wavefunction to <prefix>psi0.bin / <prefix>psi1.bin as a
    /// one-line ASCII header "dims: n1 [n2 [n3]]" followed by the samples as
    /// little-endian 64-bit floats, row-major (last axis fastest).
    std::string dump_psi_prefix;
    std::size_t perturbation_states = kDefaultStatesPerChannel;
    /// false: skip the box-doubling stability probe of the existence check
    /// and decide from the base-box level alone (never yields "false" ->
    /// "true" flips; used by scans, where the probe would dominate runtime).
    bool full_existence_probe = true;
    /// false: omit the wall-clock block so reports compare byte-identical.
    bool include_timings = true;
};

/// Result of one pipeline run: the JSON report text (always produced, also
/// on solver failure, then with an "error" object) and the process exit
/// code: 0 all verdicts pass, 1 a verdict is "violated", 3 solver
/// non-convergence, 4 internal diagnostic failure.
struct RunOutcome {
    int exit_code = 0;
    std::string report_json;
};

/// Full pipeline on one spec: angular average + zero-mean audit, radial
/// spectrum, two-grid solve, trial-space analysis, selection rule,
/// perturbation orders, existence evidence, verdicts.
RunOutcome run_verify(const RunConfig& cfg, const VerifyOptions& opt);

/// Draws the scan corpus: cfg.scan.count Gaussian-sum wells (pairs of
/// mirror-image terms when inversion_symmetric, with declared symmetry S2 in
/// 3D / C2(2d) in 2D). Deterministic in (cfg, seed) and independent of
/// --jobs; spec i depends only on seed and i.
std::vector<PotentialSpec> draw_scan_specs(const RunConfig& cfg,
                                           std::uint64_t seed);

struct ScanOptions {
    std::uint64_t seed = 42;
    std::size_t jobs = 1;
};

/// Scan outcome: one CSV summary row per spec plus the array of full
/// reports (without timing blocks, so repeat runs are byte-identical).
/// Exit code: 1 if any verdict is "violated", else 4 / 3 if any spec hit a
/// diagnostic / convergence failure, else 0.
struct ScanOutcome {
    int exit_code = 0;
    std::string csv;
    std::string reports_json;
};

ScanOutcome run_scan(const RunConfig& cfg, const ScanOptions& opt);

/// CSV table "r,v_bar,zero_mean_residual" on n_rows radii uniform on
/// [0, radial r_max]: the interpolated angular average and the directional
/// remainder integral |mean of V - v_bar| measured with the finer probe
/// quadrature.
std::string run_average(const RunConfig& cfg, std::size_t n_rows = 201);

} // namespace vbar

#endif
