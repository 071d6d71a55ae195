#ifndef VBAR_POTENTIAL_HPP
#define VBAR_POTENTIAL_HPP

#include "vbar/interpolation.hpp"
#include "vbar/quadrature.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace vbar {

enum class Family { anisotropic_harmonic, gaussian_well_sum, polynomial_well, tabulated };

std::string family_name(Family family);
Family family_from_name(const std::string& name); // throws InputError on unknown name

/// One Gaussian term: depth * exp(-sum_i (x_i - center_i)^2 / (2 widths_i^2)).
/// Negative depth makes a well, positive a bump.
struct GaussianTerm {
    double depth = 0.0;
    std::vector<double> widths; // length = dimension, all > 0
    std::vector<double> center; // length = dimension
};

/// One monomial: coefficient * prod_i x_i^powers_i.
struct PolynomialTerm {
    double coefficient = 0.0;
    std::vector<int> powers; // length = dimension, all >= 0
};

/// Rectilinear table with multilinear interpolation; queries outside the box
/// clamp to the boundary (flat continuation), keeping V bounded.
struct TabulatedGrid {
    std::vector<double> x_min; // length = dimension
    std::vector<double> x_max; // length = dimension, x_max > x_min
    std::vector<int> n;        // length = dimension, each >= 2
    std::vector<double> values; // row-major (last axis fastest), size = prod n
};

/// Declarative description of a potential. Exactly one family payload is used,
/// selected by `family`. kinetic_coefficient is hbar^2/(2m); the harmonic
/// family's V = (1/2) m sum omega_i^2 x_i^2 depends on it through m, so its
/// energy levels sum omega_i (n_i + 1/2) stay unit-system independent.
struct PotentialSpec {
    int dimension = 3;
    Family family = Family::anisotropic_harmonic;
    double kinetic_coefficient = 0.5; // hbar^2/(2m); default hbar = m = 1
    std::string declared_symmetry;    // Schoenflies tag, empty = none declared
    std::array<double, 3> symmetry_axis{0.0, 0.0, 1.0}; // principal axis frame

    std::vector<double> omegas;            // anisotropic_harmonic, all > 0
    std::vector<GaussianTerm> gaussians;   // gaussian_well_sum
    std::vector<PolynomialTerm> monomials; // polynomial_well (empty = V == 0)
    TabulatedGrid table;                   // tabulated
};

/// Checks arity, positivity and finiteness constraints; throws InputError.
void validate(const PotentialSpec& spec);

/// Whether V tends to a constant (taken as 0) far from the origin, so that
/// "bound state" means energy below zero: Gaussian sums, tabulated data
/// (clamped continuation) and the empty polynomial. Harmonic and nonempty
/// polynomial potentials confine instead.
bool decays_at_infinity(const PotentialSpec& spec);

/// Fast evaluator; coordinates beyond spec.dimension must be zero.
double evaluate_point(const PotentialSpec& spec, const Point& p);

/// Checked evaluator: point.size() must equal spec.dimension.
double evaluate(const PotentialSpec& spec, const std::vector<double>& point);

/// Direct quadrature average of V over directions at the given radius:
/// (1/4pi) * integral V dOmega in 3D, (1/2pi) * integral V dphi in 2D,
/// (V(x) + V(-x))/2 in 1D.
double angular_average(const PotentialSpec& spec, const AngularQuadrature& quad,
                       double radius);

/// Immutable potential with its angular average tabulated once on a fine
/// radial grid. All evaluation methods are const and thread-safe.
class PotentialField {
public:
    /// Builds the average table on [0, r_max]. n_table = 0 picks a spacing of
    /// (shortest feature length)/256, clamped to [4097, 40001] nodes, so that
    /// cubic interpolation error stays far below 1e-8 of the local scale.
    PotentialField(PotentialSpec spec, AngularQuadrature quad, double r_max,
                   std::size_t n_table = 0);

    /// Injects an externally supplied average table (used by negative-control
    /// tests that deliberately break the decomposition).
    static PotentialField with_average_table(PotentialSpec spec,
                                             AngularQuadrature quad,
                                             UniformTable table);

    const PotentialSpec& spec() const { return spec_; }
    const AngularQuadrature& quadrature() const { return quad_; }
    const UniformTable& average_table() const { return table_; }
    double table_r_max() const { return table_.x_max(); }

    /// V at a point (coordinates beyond the dimension must be zero).
    double operator()(const Point& p) const { return evaluate_point(spec_, p); }

    /// Interpolated angular average at radius r; falls back to direct
    /// quadrature beyond the table end.
    double average(double r) const;

    /// Anisotropic remainder V(p) - average(|p|).
    double delta(const Point& p) const;

    /// Reference energy scale for tolerance checks: max(1, max |V-bar| on the table).
    double scale() const { return scale_; }

    /// Max over radii of |integral of (V - cached average) dOmega| using the
    /// probe quadrature. Throws DiagnosticError naming the worst radius when
    /// the residual exceeds tol_abs.
    double verify_zero_mean(const AngularQuadrature& probe,
                            const std::vector<double>& radii,
                            double tol_abs) const;

private:
    PotentialField(PotentialSpec spec, AngularQuadrature quad);

    PotentialSpec spec_;
    AngularQuadrature quad_;
    UniformTable table_;
    double scale_ = 1.0;
};

} // namespace vbar

#endif
