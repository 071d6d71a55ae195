#ifndef VBAR_VARIATIONAL_HPP
#define VBAR_VARIATIONAL_HPP

#include "vbar/grid.hpp"
#include "vbar/radial.hpp"
#include "vbar/symmetry.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace vbar {

/// Transfers a reduced radial eigenstate onto the Cartesian grid as
/// R(|x|) * (real angular factor of the given channel and m), where R is the
/// cubic-interpolated u / r^((d-1)/2)-type radial factor, then renormalizes
/// to sum psi^2 h^d = 1. Beyond the radial box R is taken as zero.
std::vector<double> transfer_radial_state(const RadialEigenstate& state,
                                          int dimension,
                                          const RadialGrid& rgrid,
                                          const CartesianGrid& grid, int m);

/// Trial space for the excited-state bound: the radial-average ground state
/// u0 and the p-like functions f_i = chi(r) * n_i built from the lowest
/// channel-1 solution, all realized on the same Cartesian grid. The angular
/// factors n_i are real and ordered along the Cartesian axes:
/// 3D (p_x, p_y, p_z), 2D (cos phi, sin phi).
struct PBasis {
    std::vector<double> u0;
    std::vector<std::vector<double>> functions; // dimension entries (3D: 3)
    std::vector<double> coefficients; // unit vector a with u1 = sum a_i f_i
    double orthonormality_defect = 0.0; // max |<.|.> - delta| over all pairs
    CartesianGrid grid;
};

/// Builds the trial space from the averaged spectrum. Requires a bound
/// channel-1 state (throws InputError otherwise) and throws DiagnosticError
/// if the transferred functions fail orthonormality at the 1e-4 level.
PBasis build_p_basis(const PotentialField& field,
                     const IsotropicSpectrum& spectrum,
                     const CartesianGrid& grid);

/// <bra| diag(op_values) |ket> h^d with the plain grid-sum inner product.
/// Symmetric in bra/ket by construction (identical summation order).
double matrix_element(const std::vector<double>& bra,
                      const std::vector<double>& op_values,
                      const std::vector<double>& ket,
                      const CartesianGrid& grid);

/// The p-manifold coupling matrix M_ij = <f_i| (V - Vbar) |f_j> with its
/// eigen-decomposition. The matrix is d x d in the Cartesian-axis basis;
/// only the leading `size` rows/columns and eigenvalues are meaningful.
struct CouplingMatrix {
    int size = 3;
    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> eigenvalues{}; // ascending
    std::array<double, 3> a_star{};      // unit eigenvector of eigenvalues[0]
    double trace_residual = 0.0;         // |sum of eigenvalues|
    double norm = 0.0;                   // max |eigenvalue|
};

CouplingMatrix build_coupling_matrix(const PBasis& basis,
                                     const PotentialField& field);

/// The 2x2 trial matrix [[E0bar, cross], [cross, E1bar + diag_shift]] whose
/// ascending eigenvalues are variational upper bounds for the two lowest
/// levels. A cross entry of exactly zero returns the sorted diagonal.
struct HUMatrix {
    double e0bar = 0.0;
    double e1bar = 0.0;
    double cross = 0.0;
    double diag_shift = 0.0;
    double eprime1 = 0.0;
    double eprime2 = 0.0;
};

HUMatrix hylleraas_undheim_bounds(double e0bar, double e1bar, double cross,
                                  double diag_shift);

/// Outcome of one energy-level comparison.
struct InequalityVerdict {
    std::string verdict; // holds | violated | inconclusive | not_applicable
    std::string reason;
    double margin = 0.0;         // signed slack of the inequality
    double combined_error = 0.0; // sum of the two error bars
};

/// E0bar >= E0: "holds" when the margin is nonnegative, "violated" only when
/// the deficit exceeds the combined error bars (which would indicate a bug),
/// "inconclusive" in between.
InequalityVerdict verify_ground_inequality(const LevelEstimate& e0bar,
                                           const LevelEstimate& e0);

/// E1 <= E1bar, gated by the character of the averaged first excited level:
/// p-like levels require the selection rule (symmetry-guaranteed and/or
/// numerically confirmed cross elements); s-like levels need no gate; with
/// fewer than two levels on either side, or in 1D, the comparison is
/// "not_applicable".
InequalityVerdict verify_excited_inequality(const IsotropicSpectrum& spectrum,
                                            const SelectionVerdict& gate,
                                            bool grid_has_e1,
                                            const LevelEstimate& e1);

} // namespace vbar

#endif
