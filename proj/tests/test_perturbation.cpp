#include <doctest.h>

#include "vbar/errors.hpp"
#include "vbar/grid.hpp"
#include "vbar/perturbation.hpp"
#include "vbar/potential.hpp"
#include "vbar/radial.hpp"
#include "vbar/variational.hpp"

#include <cmath>
#include <vector>

using vbar::AngularQuadrature;
using vbar::CartesianGrid;
using vbar::CouplingMatrix;
using vbar::Family;
using vbar::GaussianTerm;
using vbar::IsotropicSpectrum;
using vbar::PBasis;
using vbar::PotentialField;
using vbar::PotentialSpec;
using vbar::RadialGrid;

namespace {

PotentialField make_field(PotentialSpec s, double r_max) {
    const AngularQuadrature q = AngularQuadrature::product(s.dimension, 24, 48);
    return PotentialField(std::move(s), q, r_max);
}

PotentialField axial_harmonic(double r_max) {
    PotentialSpec s;
    s.dimension = 3;
    s.family = Family::anisotropic_harmonic;
    s.omegas = {1.0, 1.0, 2.0};
    s.declared_symmetry = "D4h";
    return make_field(std::move(s), r_max);
}

IsotropicSpectrum spectrum_of(const PotentialField& field) {
    RadialGrid rg;
    rg.r_max = 12.0;
    rg.n_points = 2000;
    return vbar::isotropic_spectrum(field, rg, 4, 2);
}

} // namespace

TEST_CASE("first-order shifts: zero-mean ground shift, coupling eigenvalues for p") {
    const PotentialField field = axial_harmonic(12.0);
    const IsotropicSpectrum spec = spectrum_of(field);
    CartesianGrid g;
    g.dimension = 3;
    g.L = 8.0;
    g.n = 48;
    const PBasis basis = vbar::build_p_basis(field, spec, g);
    const CouplingMatrix m = vbar::build_coupling_matrix(basis, field);
    const auto fo = vbar::first_order_shifts(basis, m, field);

    // <u0 | V - Vbar | u0> vanishes up to quadrature error.
    CHECK(std::abs(fo.ground_shift) < 1e-6 * field.scale());

    // The degenerate p shifts ARE the coupling eigenvalues (same numbers,
    // not merely close).
    REQUIRE(fo.n_p == 3);
    for (int i = 0; i < 3; ++i) CHECK(fo.p_shifts[i] == m.eigenvalues[i]);
}

TEST_CASE("second-order shift of the axial harmonic matches its closed form") {
    // For omega = (1,1,2) the second-order shift of the in-plane p level is
    // lambda1 / 2 = -1/(4 sqrt(2)): the only coupling is the r^2-type mixing
    // into the f shell and the radial ladder, which sums to half the
    // first-order eigenvalue for this potential.
    const PotentialField field = axial_harmonic(12.0);
    const IsotropicSpectrum spec = spectrum_of(field);
    CartesianGrid g;
    g.dimension = 3;
    g.L = 8.0;
    g.n = 48;
    const PBasis basis = vbar::build_p_basis(field, spec, g);
    const CouplingMatrix m = vbar::build_coupling_matrix(basis, field);

    const auto so = vbar::second_order_excited(field, spec, m.a_star, 12);
    const double exact = -1.0 / (4.0 * std::sqrt(2.0)); // -0.176777
    CHECK(so.value < 0.0);
    CHECK(std::abs(so.value - exact) < 1e-4);
    CHECK(so.basis_cutoff > 50);
    CHECK(so.cutoff_tail_estimate < 1e-10);
    CHECK(so.degenerate_excluded == 0);
}

TEST_CASE("second-order sums are non-positive and monotone in the cutoff") {
    const PotentialField field = axial_harmonic(12.0);
    const IsotropicSpectrum spec = spectrum_of(field);
    CartesianGrid g;
    g.dimension = 3;
    g.L = 8.0;
    g.n = 48;
    const PBasis basis = vbar::build_p_basis(field, spec, g);
    const CouplingMatrix m = vbar::build_coupling_matrix(basis, field);

    const auto narrow = vbar::second_order_excited(field, spec, m.a_star, 6);
    const auto wide = vbar::second_order_excited(field, spec, m.a_star, 12);
    const auto wider = vbar::second_order_excited(field, spec, m.a_star, 24);

    // Every term has a negative denominator, so more states only lower it
    // (up to last-ulp noise in the dense radial eigenvectors, which differ
    // slightly depending on how many pairs LAPACK is asked for).
    CHECK(narrow.value <= 0.0);
    CHECK(wide.value <= narrow.value + 1e-10);
    CHECK(wider.value <= wide.value + 1e-10);

    // Convergence: doubling the cutoff moves the value by well under 10%.
    CHECK(std::abs(wider.value - wide.value) < 0.1 * std::abs(wide.value));
    CHECK(wide.basis_cutoff > narrow.basis_cutoff);
}

TEST_CASE("second-order shift stays non-positive on asymmetric wells") {
    PotentialSpec s;
    s.dimension = 3;
    s.family = Family::gaussian_well_sum;
    s.gaussians = {GaussianTerm{-7.0, {1.1, 0.9, 1.3}, {0.4, -0.2, 0.3}},
                   GaussianTerm{-7.0, {1.1, 0.9, 1.3}, {-0.4, 0.2, -0.3}}};
    const PotentialField field = make_field(std::move(s), 16.0);
    const IsotropicSpectrum spec = spectrum_of(field);
    REQUIRE(spec.has_two_levels());
    CartesianGrid g;
    g.dimension = 3;
    g.L = 8.0;
    g.n = 48;
    const PBasis basis = vbar::build_p_basis(field, spec, g);
    const CouplingMatrix m = vbar::build_coupling_matrix(basis, field);
    const auto so = vbar::second_order_excited(field, spec, m.a_star, 12);
    CHECK(so.value <= 0.0);
    // The tail estimate bounds what the truncation can still contribute.
    CHECK(so.cutoff_tail_estimate < 0.1 * std::abs(so.value) + 1e-10);
}

TEST_CASE("perturbation report aggregates both orders") {
    const PotentialField field = axial_harmonic(12.0);
    const IsotropicSpectrum spec = spectrum_of(field);
    CartesianGrid g;
    g.dimension = 3;
    g.L = 8.0;
    g.n = 48;
    const PBasis basis = vbar::build_p_basis(field, spec, g);
    const CouplingMatrix m = vbar::build_coupling_matrix(basis, field);

    const auto rep = vbar::build_perturbation_report(field, spec, &basis, &m, g, 12);
    CHECK(rep.applicable);
    CHECK(rep.n_first_order == 3);
    CHECK(std::abs(rep.first_order_gs) < 1e-6 * field.scale());
    for (int i = 0; i < 3; ++i)
        CHECK(rep.degenerate_first_order[i] == m.eigenvalues[i]);
    CHECK(rep.second_order_excited < 0.0);
    CHECK(rep.basis_cutoff > 0);

    // Without two bound averaged levels the report downgrades gracefully.
    PotentialSpec shallow;
    shallow.dimension = 3;
    shallow.family = Family::gaussian_well_sum;
    shallow.gaussians = {GaussianTerm{-2.5, {1, 1, 1}, {0, 0, 0}}};
    const PotentialField sf = make_field(std::move(shallow), 12.0);
    const IsotropicSpectrum sspec = spectrum_of(sf);
    REQUIRE_FALSE(sspec.has_two_levels());
    const auto srep = vbar::build_perturbation_report(sf, sspec, nullptr,
                                                      nullptr, g, 12);
    CHECK_FALSE(srep.applicable);
    CHECK(srep.second_order_excited == 0.0);

    // second_order_excited itself refuses single-level spectra.
    CHECK_THROWS_AS(
        vbar::second_order_excited(sf, sspec, {1.0, 0.0, 0.0}, 12),
        vbar::InputError);
}
