#ifndef VBAR_SYMMETRY_HPP
#define VBAR_SYMMETRY_HPP

#include "vbar/grid.hpp"
#include "vbar/potential.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace vbar {

/// Row-major 3x3 orthogonal matrix; 2D operations embed with a trivial z row.
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Point-group families in Schoenflies notation. Axial families carry the
/// rotation order n (for S2n the tag S_{2n} stores n, so S2 has n = 1).
/// Planar (2D) groups are distinct tags spelled with a "(2d)" suffix.
enum class GroupFamily {
    Cn,
    Cnv,
    Cnh, // n = 1 is Cs
    Dn,
    Dnh,
    Dnd,
    S2n, // n = 1 is the inversion group S2
    Cinfv,
    Dinfh,
    T,
    Td,
    Th,
    O,
    Oh,
    I,
    Ih,
    Cn2d,
    Dn2d,
};

struct PointGroupTag {
    GroupFamily family = GroupFamily::Cn;
    int n = 1; // rotation order; ignored for cubic/icosahedral/continuous tags

    /// Canonical Schoenflies string: "C3v", "D2d", "S6", "Cs" (= C1h),
    /// "S2" (inversion), "Cinfv", "Dinfh", "Oh", ..., "C4(2d)", "D6(2d)".
    std::string str() const;

    /// Inverse of str(). Also accepts the aliases "Ci" (= S2) and
    /// "C1h" (= Cs). Throws InputError on anything else.
    static PointGroupTag parse(const std::string& name);

    /// Planar tags are valid only in 2D, all others only in 3D.
    bool valid_for_dimension(int dimension) const;

    bool operator==(const PointGroupTag& other) const {
        return family == other.family && n == other.n;
    }
};

/// Outcome of the p-state selection rule, optionally backed by a measured
/// cross element.
struct SelectionVerdict {
    bool guaranteed_zero = false;
    std::string reason;
    std::optional<bool> numerically_confirmed;
    std::optional<double> max_cross_element;
};

/// Whether the group guarantees that the ground state cannot couple to the
/// lowest odd (p-like) excited functions: true exactly for the seven cubic
/// and icosahedral groups; Cnh, Dn, Dnh, Dnd and S2n except Cs (= C1h) and
/// D1h (= C2v); Dinfh; and in 2D for Cn/Dn with n >= 2. Everything else is
/// false (numerical rescue stays possible). Throws InputError when the tag
/// is not valid for the dimension.
SelectionVerdict selection_rule(const PointGroupTag& group, int dimension);

/// Explicit generator matrices, conjugated into the frame whose principal
/// axis is `axis` (default z). Continuous groups are represented by sampled
/// rotations of order 2..16 plus their mirrors.
std::vector<Mat3> group_generators(const PointGroupTag& group,
                                   const std::array<double, 3>& axis);

/// Default acceptance threshold for verify_invariance.
inline constexpr double kInvarianceTol = 1e-8;

/// Max over sample points x and generators g of |V(gx) - V(x)| relative to
/// the local scale max(1, |V(x)|). Points are drawn deterministically inside
/// the averaging sphere; the axis comes from the spec's symmetry_axis.
double verify_invariance(const PotentialField& field,
                         const PointGroupTag& group, std::size_t n_samples);

/// Max over basis functions f_i of |<u0| (V - Vbar) |f_i>| on the shared
/// Cartesian grid (plain midpoint quadrature, matching the discrete inner
/// product of the grid solver).
double cross_element_check(const std::vector<double>& u0,
                           const std::vector<std::vector<double>>& pbasis,
                           const PotentialField& field,
                           const CartesianGrid& grid);

} // namespace vbar

#endif
