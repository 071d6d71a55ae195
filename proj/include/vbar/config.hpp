#ifndef VBAR_CONFIG_HPP
#define VBAR_CONFIG_HPP

#include "vbar/grid.hpp"
#include "vbar/potential.hpp"
#include "vbar/radial.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace vbar {

/// Random-well generator settings for scan runs. Wells are sums of Gaussian
/// terms; with inversion_symmetric each term is drawn together with its
/// mirror image through the origin, so S2 (2D: C2) invariance holds exactly.
struct ScanSettings {
    std::size_t count = 20;
    bool inversion_symmetric = true;
    int pairs_min = 1;
    int pairs_max = 2;
    double depth_min = -8.0;
    double depth_max = -4.0;
    double width_min = 0.7;
    double width_max = 1.5;
    double center_max = 1.2;
};

/// Parsed and validated run configuration. Unknown keys anywhere in the file
/// are a hard error.
struct RunConfig {
    PotentialSpec spec;

    RadialGrid radial;          // radial: {r_max, n_points, n_channels}
    std::size_t n_channels = 4;

    CartesianGrid grid;         // grid: {L, n, k, tol}
    std::size_t k = 6;
    double tol = 1e-8;

    ScanSettings scan;          // scan: {count, ...}; present only if given
    bool has_scan = false;
};

/// Parses a JSON config document; throws InputError with a path-qualified
/// message on unknown keys, wrong types, or constraint violations.
RunConfig parse_config_text(const std::string& text);

/// Reads and parses a config file (InputError when unreadable).
RunConfig load_config(const std::string& path);

} // namespace vbar

#endif
