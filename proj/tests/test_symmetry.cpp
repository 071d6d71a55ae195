#include <doctest.h>

#include "vbar/errors.hpp"
#include "vbar/grid.hpp"
#include "vbar/potential.hpp"
#include "vbar/radial.hpp"
#include "vbar/symmetry.hpp"
#include "vbar/variational.hpp"

#include <cmath>
#include <string>
#include <vector>

using vbar::AngularQuadrature;
using vbar::CartesianGrid;
using vbar::Family;
using vbar::GaussianTerm;
using vbar::Mat3;
using vbar::PointGroupTag;
using vbar::PotentialField;
using vbar::PotentialSpec;

namespace {

PotentialField make_field(PotentialSpec s, double r_max) {
    const AngularQuadrature q = AngularQuadrature::product(s.dimension, 24, 48);
    return PotentialField(std::move(s), q, r_max);
}

PotentialSpec harmonic(std::vector<double> omegas, std::string symmetry,
                       std::array<double, 3> axis = {0.0, 0.0, 1.0}) {
    PotentialSpec s;
    s.dimension = int(omegas.size());
    s.family = Family::anisotropic_harmonic;
    s.omegas = std::move(omegas);
    s.declared_symmetry = std::move(symmetry);
    s.symmetry_axis = axis;
    return s;
}

} // namespace

TEST_CASE("Schoenflies tags parse, print and validate per dimension") {
    for (const char* name :
         {"C1", "C2", "C3", "C4v", "Cs", "C2h", "C6h", "D2", "D3", "D4h",
          "D2d", "D3d", "S2", "S4", "S6", "Cinfv", "Dinfh", "T", "Td", "Th",
          "O", "Oh", "I", "Ih"}) {
        const PointGroupTag tag = PointGroupTag::parse(name);
        CHECK(tag.str() == name);
        CHECK(tag.valid_for_dimension(3));
        CHECK_FALSE(tag.valid_for_dimension(2));
    }
    for (const char* name : {"C1(2d)", "C2(2d)", "C6(2d)", "D1(2d)", "D4(2d)"}) {
        const PointGroupTag tag = PointGroupTag::parse(name);
        CHECK(tag.str() == name);
        CHECK(tag.valid_for_dimension(2));
        CHECK_FALSE(tag.valid_for_dimension(3));
    }

    // Aliases resolve to the canonical tags.
    CHECK(PointGroupTag::parse("Ci") == PointGroupTag::parse("S2"));
    CHECK(PointGroupTag::parse("C1h") == PointGroupTag::parse("Cs"));

    for (const char* bad : {"", "X3", "C0", "S3", "S0", "D0", "Qh", "C-2"}) {
        CHECK_THROWS_AS(PointGroupTag::parse(bad), vbar::InputError);
    }
}

TEST_CASE("selection rule: the full pinned verdict table") {
    auto granted = [](const char* name, int dimension) {
        return vbar::selection_rule(PointGroupTag::parse(name), dimension)
            .guaranteed_zero;
    };

    // Cubic and icosahedral groups: always guaranteed.
    for (const char* g : {"T", "Td", "Th", "O", "Oh", "I", "Ih"})
        CHECK(granted(g, 3));

    // Cnh for n >= 2; Cs (= C1h) retains coupled in-plane functions.
    for (const char* g : {"C2h", "C3h", "C4h", "C6h"}) CHECK(granted(g, 3));
    CHECK_FALSE(granted("Cs", 3));
    CHECK_FALSE(granted("C1h", 3));

    // Dn, Dnh, Dnd, S2n: guaranteed except D1h = C2v.
    for (const char* g : {"D1", "D2", "D3", "D4", "D6"}) CHECK(granted(g, 3));
    for (const char* g : {"D2h", "D3h", "D4h", "D6h"}) CHECK(granted(g, 3));
    CHECK_FALSE(granted("D1h", 3));
    for (const char* g : {"D2d", "D3d", "D4d"}) CHECK(granted(g, 3));
    for (const char* g : {"S2", "S4", "S6", "S8"}) CHECK(granted(g, 3));
    CHECK(granted("Ci", 3));

    // Continuous axial groups.
    CHECK(granted("Dinfh", 3));
    CHECK_FALSE(granted("Cinfv", 3));

    // Pure rotations and Cnv leave an odd direction invariant.
    for (const char* g : {"C1", "C2", "C3", "C6"}) CHECK_FALSE(granted(g, 3));
    for (const char* g : {"C2v", "C3v", "C4v", "C6v"}) CHECK_FALSE(granted(g, 3));

    // 2D: n >= 2 contains the in-plane inversion; n = 1 does not.
    for (const char* g : {"C2(2d)", "C3(2d)", "C4(2d)", "C6(2d)"})
        CHECK(granted(g, 2));
    for (const char* g : {"D2(2d)", "D3(2d)", "D6(2d)"}) CHECK(granted(g, 2));
    CHECK_FALSE(granted("C1(2d)", 2));
    CHECK_FALSE(granted("D1(2d)", 2));

    // Dimension mismatches are input errors, not verdicts.
    CHECK_THROWS_AS(vbar::selection_rule(PointGroupTag::parse("Oh"), 2),
                    vbar::InputError);
    CHECK_THROWS_AS(vbar::selection_rule(PointGroupTag::parse("C4(2d)"), 3),
                    vbar::InputError);
}

TEST_CASE("generators are orthogonal matrices") {
    for (const char* name :
         {"C4", "C3v", "C2h", "D2", "D4h", "D3d", "S6", "Oh", "Ih", "Dinfh",
          "Cinfv", "Td"}) {
        const auto gens = vbar::group_generators(PointGroupTag::parse(name),
                                                 {0.0, 0.0, 1.0});
        CHECK(!gens.empty());
        for (const Mat3& g : gens) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    double dot = 0.0;
                    for (int k = 0; k < 3; ++k) dot += g[k][i] * g[k][j];
                    CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-12);
                }
            }
        }
    }

    // Conjugating into a tilted frame preserves orthogonality.
    const auto tilted = vbar::group_generators(PointGroupTag::parse("C4h"),
                                               {1.0, 1.0, 0.0});
    for (const Mat3& g : tilted) {
        for (int i = 0; i < 3; ++i) {
            double norm = 0.0;
            for (int k = 0; k < 3; ++k) norm += g[k][i] * g[k][i];
            CHECK(std::abs(norm - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("invariance check accepts true symmetries and rejects false claims") {
    // omega = (1,1,2) has D4h symmetry about z.
    const PotentialField good = make_field(harmonic({1, 1, 2}, "D4h"), 12.0);
    const double ok = vbar::verify_invariance(
        good, PointGroupTag::parse("D4h"), 256);
    CHECK(ok < vbar::kInvarianceTol);

    // The same potential is NOT Oh-symmetric: the checker must say so loudly.
    const double bad = vbar::verify_invariance(
        good, PointGroupTag::parse("Oh"), 256);
    CHECK(bad > 1e-3);

    // Axis handling: an x-axis oscillator declared with axis = x passes D4h.
    const PotentialField xaxis =
        make_field(harmonic({2, 1, 1}, "D4h", {1.0, 0.0, 0.0}), 12.0);
    const double ax = vbar::verify_invariance(
        xaxis, PointGroupTag::parse("D4h"), 256);
    CHECK(ax < vbar::kInvarianceTol);

    // ...and fails when the axis is wrongly left at z.
    const PotentialField wrong_axis = make_field(harmonic({2, 1, 1}, "D4h"), 12.0);
    const double wr = vbar::verify_invariance(
        wrong_axis, PointGroupTag::parse("D4h"), 256);
    CHECK(wr > 1e-3);
}

TEST_CASE("measured cross elements vanish for symmetric wells, not for skewed ones") {
    vbar::RadialGrid rg;
    rg.r_max = 12.0;
    rg.n_points = 2000;
    CartesianGrid g;
    g.dimension = 3;
    g.L = 8.0;
    g.n = 48;

    // Inversion-symmetric anisotropic harmonic: exact parity cancellation.
    const PotentialField sym = make_field(harmonic({1, 1, 2}, "D4h"), 12.0);
    const auto sym_spec = vbar::isotropic_spectrum(sym, rg, 4, 2);
    const auto sym_basis = vbar::build_p_basis(sym, sym_spec, g);
    const double sym_cross = vbar::cross_element_check(
        sym_basis.u0, sym_basis.functions, sym, g);
    CHECK(sym_cross < 1e-10 * sym.scale());

    // A lopsided double well (Cs at best) has genuinely coupled p functions.
    PotentialSpec skew;
    skew.dimension = 3;
    skew.family = Family::gaussian_well_sum;
    skew.gaussians = {GaussianTerm{-7.0, {1.0, 1.0, 1.0}, {0.0, 0.0, -0.7}},
                      GaussianTerm{-4.0, {0.8, 0.8, 0.8}, {0.0, 0.0, 1.1}}};
    const PotentialField skewed = make_field(std::move(skew), 16.0);
    const auto skew_spec = vbar::isotropic_spectrum(skewed, rg, 4, 2);
    REQUIRE(skew_spec.has_two_levels());
    const auto skew_basis = vbar::build_p_basis(skewed, skew_spec, g);
    const double skew_cross = vbar::cross_element_check(
        skew_basis.u0, skew_basis.functions, skewed, g);
    CHECK(skew_cross > 1e-3);
}
