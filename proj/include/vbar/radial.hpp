#ifndef VBAR_RADIAL_HPP
#define VBAR_RADIAL_HPP

#include "vbar/potential.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace vbar {

/// Uniform radial grid on [0, r_max]. The reduced wavefunction lives on
/// r_k = k*h (k = 1 .. n_points-1) in 3D and on staggered cell centers
/// (k + 1/2)*h (k = 0 .. n_points-1) in 2D and 1D; see reduced_nodes.
struct RadialGrid {
    double r_max = 12.0;
    std::size_t n_points = 2000;
    double spacing() const { return r_max / double(n_points); }
};

/// Node positions of the reduced wavefunction for the given dimension.
std::vector<double> reduced_nodes(int dimension, const RadialGrid& grid);

/// One radial eigenstate. The reduced wavefunction is u = r*R in 3D,
/// sqrt(rho)*R in 2D and psi itself in 1D, normalized so sum u_k^2 h = 1.
struct RadialEigenstate {
    int channel = 0;      // l in 3D, |m| in 2D, 0 = even / 1 = odd in 1D
    int radial_index = 0; // node count of the reduced wavefunction
    double energy = 0.0;  // Richardson-extrapolated from (n/2, n) grids
    double energy_error = 0.0; // |extrapolated - fine-grid| error bar
    bool bound = false;   // energy < average(r_max) - energy_error
    std::vector<double> u;
};

/// Result of a per-channel solve after any box enlargement.
struct ChannelResult {
    std::vector<RadialEigenstate> bound_states;
    bool no_bound_state = false;
    RadialGrid grid; // final grid actually used
};

/// Lowest n_states eigenpairs of the reduced radial operator
/// -c u'' + [average(r) + centrifugal(channel)] u on a single grid, without
/// extrapolation or bound-state filtering (energy_error = 0, bound judged
/// against average(r_max) directly). Used for convergence studies and as the
/// discrete intermediate basis of the second-order perturbation sum.
std::vector<RadialEigenstate> solve_channel_raw(const PotentialField& field,
                                                const RadialGrid& grid,
                                                int channel,
                                                std::size_t n_states);

/// Bound states of one channel with Richardson-extrapolated energies and
/// error bars. If a bound state's tail |u| at the outermost node exceeds
/// 1e-8 of max |u|, the box is doubled (r_max and n_points together, keeping
/// h) and the solve repeated, at most 3 times; states still leaking after
/// that are not reported as bound.
ChannelResult solve_channel(const PotentialField& field, RadialGrid grid,
                            int channel, std::size_t n_states);

/// Merged bound spectrum of the angular average across channels.
struct IsotropicSpectrum {
    int dimension = 3;
    std::vector<RadialEigenstate> states; // bound states sorted by energy
    /// 3D: s_state | p_state; 2D: m0_state | m1_state; 1D: even | odd;
    /// plus degenerate_within_tolerance and not_applicable (< 2 bound states).
    std::string first_excited_kind = "not_applicable";
    RadialGrid grid; // shared final grid for all channels

    bool has_two_levels() const { return states.size() >= 2; }
    const RadialEigenstate& ground() const { return states.front(); }
    const RadialEigenstate& excited() const { return states.at(1); }
};

/// Solves all channels on a shared grid (doubling the box jointly when any
/// bound state leaks), merges and sorts the bound states, and classifies the
/// first excited level. The ground state must come out as a nodeless
/// channel-0 state, otherwise a DiagnosticError is thrown.
IsotropicSpectrum isotropic_spectrum(const PotentialField& field,
                                     RadialGrid grid, std::size_t n_channels,
                                     std::size_t n_states);

} // namespace vbar

#endif
