#ifndef VBAR_PERTURBATION_HPP
#define VBAR_PERTURBATION_HPP

#include "vbar/radial.hpp"
#include "vbar/variational.hpp"

#include <array>
#include <cstddef>

namespace vbar {

/// First-order shifts of the averaged levels under V - Vbar: the ground
/// shift (zero up to quadrature by the zero-mean construction) and, when a
/// p manifold exists, its degenerate shifts = the coupling-matrix
/// eigenvalues (copied from the same decomposition, hence bit-identical).
struct FirstOrderShifts {
    double ground_shift = 0.0;
    std::array<double, 3> p_shifts{};
    int n_p = 0; // meaningful entries of p_shifts (0 when no p manifold)
};

FirstOrderShifts first_order_shifts(const PBasis& basis,
                                    const CouplingMatrix& coupling,
                                    const PotentialField& field);

/// Second-order shift of the first excited averaged level:
/// sum over intermediate product states chi_{n,l} * (angular factor), l up
/// to 4 and states_per_channel radial states per channel on the shared
/// radial grid, of |<m| (V - Vbar) |u1>|^2 / (E1bar - Em). The excited
/// state's own degenerate manifold is excluded (it is handled by the
/// first-order diagonalization); accidental near-degenerate intermediates
/// (within 1e-6 relative) are excluded and counted.
struct SecondOrderResult {
    double value = 0.0;
    std::size_t basis_cutoff = 0;        // intermediate states included
    double cutoff_tail_estimate = 0.0;   // |term| of the highest level kept
    std::size_t degenerate_excluded = 0; // flagged near-degenerate states
};

/// a_star selects the p-manifold combination when the first excited level is
/// p-like (Cartesian ordering, as in CouplingMatrix); it is ignored for
/// s-like excited levels. Requires two bound levels (throws InputError).
SecondOrderResult second_order_excited(const PotentialField& field,
                                       const IsotropicSpectrum& spectrum,
                                       const std::array<double, 3>& a_star,
                                       std::size_t states_per_channel);

/// Aggregate of both orders for the run report.
struct PerturbationReport {
    bool applicable = false;
    double first_order_gs = 0.0;
    std::array<double, 3> degenerate_first_order{};
    int n_first_order = 0;
    double second_order_excited = 0.0;
    std::size_t basis_cutoff = 0;
    double cutoff_tail_estimate = 0.0;
    std::size_t degenerate_excluded = 0;
};

inline constexpr std::size_t kDefaultStatesPerChannel = 12;

/// Combines the two orders; `basis`/`coupling` may be null when no p
/// manifold exists (the ground shift is then computed against the spectrum's
/// transferred ground state on the given grid).
PerturbationReport build_perturbation_report(
    const PotentialField& field, const IsotropicSpectrum& spectrum,
    const PBasis* basis, const CouplingMatrix* coupling,
    const CartesianGrid& grid,
    std::size_t states_per_channel = kDefaultStatesPerChannel);

} // namespace vbar

#endif
