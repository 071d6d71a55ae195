#include <doctest.h>

#include "vbar/errors.hpp"
#include "vbar/potential.hpp"

#include <cmath>
#include <vector>

using vbar::AngularQuadrature;
using vbar::Family;
using vbar::GaussianTerm;
using vbar::Point;
using vbar::PotentialField;
using vbar::PotentialSpec;

namespace {

PotentialSpec harmonic3d(std::vector<double> omegas) {
    PotentialSpec s;
    s.dimension = int(omegas.size());
    s.family = Family::anisotropic_harmonic;
    s.omegas = std::move(omegas);
    return s;
}

PotentialSpec gaussian(int dimension, std::vector<GaussianTerm> terms) {
    PotentialSpec s;
    s.dimension = dimension;
    s.family = Family::gaussian_well_sum;
    s.gaussians = std::move(terms);
    return s;
}

} // namespace

TEST_CASE("family names round-trip and unknown names are rejected") {
    for (Family f : {Family::anisotropic_harmonic, Family::gaussian_well_sum,
                     Family::polynomial_well, Family::tabulated}) {
        CHECK(vbar::family_from_name(vbar::family_name(f)) == f);
    }
    CHECK_THROWS_AS(vbar::family_from_name("lennard_jones"), vbar::InputError);
}

TEST_CASE("validate rejects malformed specs") {
    CHECK_NOTHROW(vbar::validate(harmonic3d({1.0, 1.0, 2.0})));

    PotentialSpec bad_arity = harmonic3d({1.0, 2.0});
    bad_arity.dimension = 3;
    CHECK_THROWS_AS(vbar::validate(bad_arity), vbar::InputError);

    PotentialSpec bad_omega = harmonic3d({1.0, -1.0, 2.0});
    CHECK_THROWS_AS(vbar::validate(bad_omega), vbar::InputError);

    PotentialSpec bad_width =
        gaussian(3, {GaussianTerm{-5.0, {1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}}});
    CHECK_THROWS_AS(vbar::validate(bad_width), vbar::InputError);

    PotentialSpec empty_gauss = gaussian(3, {});
    CHECK_THROWS_AS(vbar::validate(empty_gauss), vbar::InputError);

    PotentialSpec bad_dim = harmonic3d({1.0, 1.0, 2.0});
    bad_dim.dimension = 4;
    CHECK_THROWS_AS(vbar::validate(bad_dim), vbar::InputError);

    PotentialSpec bad_power;
    bad_power.dimension = 2;
    bad_power.family = Family::polynomial_well;
    bad_power.monomials = {{1.0, {2, -1}}};
    CHECK_THROWS_AS(vbar::validate(bad_power), vbar::InputError);

    PotentialSpec bad_table;
    bad_table.dimension = 1;
    bad_table.family = Family::tabulated;
    bad_table.table.x_min = {0.0};
    bad_table.table.x_max = {1.0};
    bad_table.table.n = {1};
    bad_table.table.values = {0.0};
    CHECK_THROWS_AS(vbar::validate(bad_table), vbar::InputError);
}

TEST_CASE("decays_at_infinity splits confining from decaying families") {
    CHECK_FALSE(vbar::decays_at_infinity(harmonic3d({1.0, 1.0, 2.0})));
    CHECK(vbar::decays_at_infinity(
        gaussian(3, {GaussianTerm{-5.0, {1, 1, 1}, {0, 0, 0}}})));

    PotentialSpec poly;
    poly.family = Family::polynomial_well;
    poly.monomials = {{1.0, {2, 0, 0}}};
    CHECK_FALSE(vbar::decays_at_infinity(poly));
    poly.monomials.clear(); // V == 0
    CHECK(vbar::decays_at_infinity(poly));
}

TEST_CASE("harmonic evaluator matches 1/2 m sum omega^2 x^2") {
    // kinetic_coefficient c = hbar^2/(2m) = 0.5 means m = 1.
    const PotentialSpec s = harmonic3d({1.0, 1.0, 2.0});
    CHECK(vbar::evaluate_point(s, {1.0, 0.0, 0.0}) == doctest::Approx(0.5));
    CHECK(vbar::evaluate_point(s, {0.0, 0.0, 1.0}) == doctest::Approx(2.0));
    CHECK(vbar::evaluate_point(s, {1.0, 2.0, 0.5}) ==
          doctest::Approx(0.5 * (1.0 + 4.0 + 4.0 * 0.25)));

    // Halving c doubles m, doubling V, keeping the level spacing omega fixed.
    PotentialSpec s2 = s;
    s2.kinetic_coefficient = 0.25;
    CHECK(vbar::evaluate_point(s2, {1.0, 0.0, 0.0}) == doctest::Approx(1.0));

    CHECK_THROWS_AS(vbar::evaluate(s, {1.0, 0.0}), vbar::InputError);
}

TEST_CASE("angular average of the anisotropic harmonic is exact") {
    // Vbar(r) = r^2 (sum omega_i^2) / (4 c d); for omega = (1,1,2), c = 0.5,
    // d = 3 this is exactly r^2.
    const PotentialSpec s = harmonic3d({1.0, 1.0, 2.0});
    const AngularQuadrature q = AngularQuadrature::product(3, 24, 48);
    for (double r : {0.0, 0.5, 1.0, 3.7, 9.0}) {
        CHECK(std::abs(vbar::angular_average(s, q, r) - r * r) <
              1e-12 * (1.0 + r * r));
    }
}

TEST_CASE("angular average of a centered axial Gaussian matches erf closed form") {
    // V = D exp(-(x^2+y^2)/(2a^2) - z^2/(2b^2)) with b < a averages to
    // D exp(-r^2/(2a^2)) * sqrt(pi) erf(r sqrt(kappa)) / (2 r sqrt(kappa)),
    // kappa = 1/(2b^2) - 1/(2a^2).
    const double D = -5.0, a = 1.0, b = 0.5;
    const PotentialSpec s = gaussian(3, {GaussianTerm{D, {a, a, b}, {0, 0, 0}}});
    const AngularQuadrature q = AngularQuadrature::product(3, 24, 48);
    const double kappa = 1.0 / (2.0 * b * b) - 1.0 / (2.0 * a * a);
    for (double r : {0.3, 1.0, 2.5, 4.0}) {
        const double z = r * std::sqrt(kappa);
        const double exact = D * std::exp(-r * r / (2.0 * a * a)) *
                             std::sqrt(3.14159265358979323846) * std::erf(z) /
                             (2.0 * z);
        CHECK(std::abs(vbar::angular_average(s, q, r) - exact) < 1e-10);
    }
}

TEST_CASE("angular average of an off-center isotropic Gaussian matches sinh closed form") {
    // V = D exp(-|x-c|^2/(2w^2)) averages to
    // D exp(-(r^2+|c|^2)/(2w^2)) sinh(r|c|/w^2) / (r|c|/w^2).
    const double D = -3.0, w = 0.8;
    const std::vector<double> c = {0.4, -0.7, 0.2};
    const double cn = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    const PotentialSpec s = gaussian(3, {GaussianTerm{D, {w, w, w}, c}});
    const AngularQuadrature q = AngularQuadrature::product(3, 24, 48);
    for (double r : {0.2, 1.0, 2.0, 3.5}) {
        const double t = r * cn / (w * w);
        const double exact = D * std::exp(-(r * r + cn * cn) / (2.0 * w * w)) *
                             std::sinh(t) / t;
        CHECK(std::abs(vbar::angular_average(s, q, r) - exact) < 1e-10);
    }
}

TEST_CASE("2D angular average of a centered anisotropic Gaussian matches Bessel closed form") {
    // V = D exp(-x^2/(2a^2) - y^2/(2b^2)) averages to
    // D exp(-r^2 (1/(4a^2) + 1/(4b^2))) I_0(r^2 |1/(4b^2) - 1/(4a^2)|).
    const double D = -4.0, a = 1.2, b = 0.6;
    const PotentialSpec s = gaussian(2, {GaussianTerm{D, {a, b}, {0.0, 0.0}}});
    const AngularQuadrature q = AngularQuadrature::product(2, 1, 64);
    const double alpha = 1.0 / (4.0 * a * a) + 1.0 / (4.0 * b * b);
    const double beta = std::abs(1.0 / (4.0 * b * b) - 1.0 / (4.0 * a * a));
    for (double r : {0.3, 1.0, 2.0, 3.0}) {
        const double exact = D * std::exp(-alpha * r * r) *
                             std::cyl_bessel_i(0.0, beta * r * r);
        CHECK(std::abs(vbar::angular_average(s, q, r) - exact) < 1e-9);
    }
}

TEST_CASE("1D angular average is the parity-even part") {
    const PotentialSpec s =
        gaussian(1, {GaussianTerm{-6.0, {0.8}, {-1.1}},
                     GaussianTerm{-4.5, {0.6}, {1.4}}});
    const AngularQuadrature q = AngularQuadrature::product(1, 0, 0);
    for (double r : {0.0, 0.5, 1.1, 1.4, 3.0}) {
        const double vp = vbar::evaluate_point(s, {r, 0.0, 0.0});
        const double vm = vbar::evaluate_point(s, {-r, 0.0, 0.0});
        CHECK(std::abs(vbar::angular_average(s, q, r) - 0.5 * (vp + vm)) <
              1e-14);
    }
}

TEST_CASE("field decomposition: V = Vbar + deltaV with interpolated average") {
    const PotentialSpec s = gaussian(
        3, {GaussianTerm{-5.0, {1.0, 1.0, 0.5}, {0.0, 0.0, 0.0}},
            GaussianTerm{-2.0, {0.9, 1.1, 1.0}, {0.6, -0.3, 0.2}}});
    const AngularQuadrature q = AngularQuadrature::product(3, 24, 48);
    const PotentialField field(s, q, 12.0);

    // The cached average matches direct quadrature everywhere on the table.
    for (double r : {0.01, 0.33, 1.0, 2.345, 6.7, 11.99}) {
        CHECK(std::abs(field.average(r) - vbar::angular_average(s, q, r)) <
              1e-9 * field.scale());
    }
    // Beyond the table the field falls back to direct quadrature.
    CHECK(std::abs(field.average(13.0) - vbar::angular_average(s, q, 13.0)) <
          1e-12);

    // delta is the pointwise remainder.
    for (const Point& p : {Point{0.3, -0.2, 0.9}, Point{2.0, 1.0, -1.5}}) {
        const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        CHECK(std::abs(field.delta(p) - (field(p) - field.average(r))) <
              1e-12);
    }

    CHECK(field.scale() >= 1.0);
}

TEST_CASE("zero-mean audit passes for an honest field and fails a corrupted table") {
    const PotentialSpec s = gaussian(
        3, {GaussianTerm{-5.0, {1.0, 1.0, 0.5}, {0.2, 0.0, -0.4}}});
    const AngularQuadrature q = AngularQuadrature::product(3, 24, 48);
    const PotentialField field(s, q, 10.0);

    std::vector<double> radii;
    for (int i = 0; i <= 32; ++i) radii.push_back(10.0 * i / 32.0);

    const AngularQuadrature probe = AngularQuadrature::product(3, 32, 64);
    const double resid =
        field.verify_zero_mean(probe, radii, 1e-8 * field.scale());
    CHECK(resid <= 1e-8 * field.scale());

    // Negative control: shift the cached average by a constant; the audit
    // must detect that the remainder no longer averages to zero.
    std::vector<double> shifted = field.average_table().values();
    for (double& v : shifted) v += 1e-3;
    vbar::UniformTable broken(field.average_table().x0(),
                              field.average_table().step(),
                              std::move(shifted));
    const PotentialField corrupted =
        PotentialField::with_average_table(s, q, std::move(broken));
    CHECK_THROWS_AS(
        corrupted.verify_zero_mean(probe, radii, 1e-8 * corrupted.scale()),
        vbar::DiagnosticError);
}

TEST_CASE("zero-mean residual decreases as the probe order doubles") {
    // A narrow off-center Gaussian makes low-order quadrature visibly
    // inexact; doubling the probe order must not increase the residual and
    // must eventually reduce it by orders of magnitude.
    const PotentialSpec s =
        gaussian(3, {GaussianTerm{-5.0, {0.35, 0.35, 0.35}, {0.9, 0.0, 0.0}}});
    const AngularQuadrature q = AngularQuadrature::product(3, 48, 96);
    const PotentialField field(s, q, 6.0);

    std::vector<double> radii;
    for (int i = 1; i <= 16; ++i) radii.push_back(2.0 * i / 16.0);

    auto residual = [&](int polar, int azimuthal) {
        const AngularQuadrature probe =
            AngularQuadrature::product(3, polar, azimuthal);
        return field.verify_zero_mean(probe, radii, 1e6);
    };
    const double r8 = residual(8, 16);
    const double r16 = residual(16, 32);
    const double r32 = residual(32, 64);
    CHECK(r16 <= r8 * 1.1 + 1e-13);
    CHECK(r32 <= r16 * 1.1 + 1e-13);
    CHECK(r32 <= r8 * 1e-2 + 1e-12);
}

TEST_CASE("isotropic potentials are a fixed point: delta vanishes identically") {
    const PotentialSpec s =
        gaussian(3, {GaussianTerm{-5.0, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}}});
    const AngularQuadrature q = AngularQuadrature::product(3, 24, 48);
    const PotentialField field(s, q, 10.0);
    for (const Point& p :
         {Point{0.5, 0.0, 0.0}, Point{1.0, -2.0, 0.7}, Point{0.0, 0.0, 3.3}}) {
        CHECK(std::abs(field.delta(p)) < 1e-10 * field.scale());
    }
    CHECK(std::abs(field.average(1.7) -
                   vbar::evaluate_point(s, {1.7, 0.0, 0.0})) < 1e-10);
}

TEST_CASE("tabulated potentials interpolate their nodes and clamp outside") {
    // Tabulate V = x^2 on [-2, 2] with 5 nodes; multilinear interpolation is
    // exact at the nodes and clamps beyond the box.
    PotentialSpec s;
    s.dimension = 1;
    s.family = Family::tabulated;
    s.table.x_min = {-2.0};
    s.table.x_max = {2.0};
    s.table.n = {5};
    s.table.values = {4.0, 1.0, 0.0, 1.0, 4.0};
    vbar::validate(s);
    CHECK(vbar::evaluate_point(s, {-2.0, 0.0, 0.0}) == doctest::Approx(4.0));
    CHECK(vbar::evaluate_point(s, {1.0, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(vbar::evaluate_point(s, {0.5, 0.0, 0.0}) == doctest::Approx(0.5));
    CHECK(vbar::evaluate_point(s, {7.0, 0.0, 0.0}) == doctest::Approx(4.0));
    CHECK(vbar::decays_at_infinity(s));
}
