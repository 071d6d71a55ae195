#include "vbar/symmetry.hpp"

#include "vbar/errors.hpp"
#include "vbar/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace vbar {

namespace {

Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
            out[i][j] = s;
        }
    return out;
}

Mat3 transpose(const Mat3& a) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i][j] = a[j][i];
    return out;
}

Mat3 diag(double a, double b, double c) {
    return Mat3{{{a, 0.0, 0.0}, {0.0, b, 0.0}, {0.0, 0.0, c}}};
}

/// Rotation about the z axis by `angle` (2D rotations use the same matrix).
Mat3 rot_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return Mat3{{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

/// Rodrigues rotation by `angle` about the unit vector u.
Mat3 rot_axis(const std::array<double, 3>& u, double angle) {
    const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
    return Mat3{{{t * u[0] * u[0] + c, t * u[0] * u[1] - s * u[2],
                  t * u[0] * u[2] + s * u[1]},
                 {t * u[0] * u[1] + s * u[2], t * u[1] * u[1] + c,
                  t * u[1] * u[2] - s * u[0]},
                 {t * u[0] * u[2] - s * u[1], t * u[1] * u[2] + s * u[0],
                  t * u[2] * u[2] + c}}};
}

constexpr double kPi = std::numbers::pi;

const Mat3 kMirrorZ = diag(1.0, 1.0, -1.0);    // sigma_h (z -> -z)
const Mat3 kMirrorY = diag(1.0, -1.0, 1.0);    // sigma_v (xz plane)
const Mat3 kC2X = diag(1.0, -1.0, -1.0);       // C2 about x
const Mat3 kInversion = diag(-1.0, -1.0, -1.0);
// Cyclic coordinate rotation e_x -> e_y -> e_z -> e_x: C3 about (1,1,1).
const Mat3 kCyclic{{{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}};
// Mirror through the plane x = y (a sigma_d of the cube frame).
const Mat3 kSwapXY{{{0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}};

/// S_{2n} operation about z: rotation by pi/n composed with sigma_h.
Mat3 rot_reflect(int two_n) {
    return matmul(kMirrorZ, rot_z(2.0 * kPi / double(two_n)));
}

bool is_planar(GroupFamily f) {
    return f == GroupFamily::Cn2d || f == GroupFamily::Dn2d;
}

/// Orthonormal frame with its third column along `axis`; generators defined
/// about z are conjugated as Q g Q^T to act about the declared axis.
Mat3 frame_for_axis(const std::array<double, 3>& axis) {
    const double len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] +
                                 axis[2] * axis[2]);
    if (!(len > 0.0) || !std::isfinite(len))
        throw InputError("symmetry axis must be a finite nonzero vector");
    std::array<double, 3> a{axis[0] / len, axis[1] / len, axis[2] / len};
    // Pick the coordinate axis least aligned with a as the seed for u.
    std::array<double, 3> seed{1.0, 0.0, 0.0};
    if (std::abs(a[0]) > std::abs(a[1])) seed = {0.0, 1.0, 0.0};
    std::array<double, 3> u{seed[1] * a[2] - seed[2] * a[1],
                            seed[2] * a[0] - seed[0] * a[2],
                            seed[0] * a[1] - seed[1] * a[0]};
    const double un =
        std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    for (auto& c : u) c /= un;
    const std::array<double, 3> v{a[1] * u[2] - a[2] * u[1],
                                  a[2] * u[0] - a[0] * u[2],
                                  a[0] * u[1] - a[1] * u[0]};
    return Mat3{{{u[0], v[0], a[0]}, {u[1], v[1], a[1]}, {u[2], v[2], a[2]}}};
}

std::array<double, 3> apply_mat(const Mat3& m, const std::array<double, 3>& x) {
    return {m[0][0] * x[0] + m[0][1] * x[1] + m[0][2] * x[2],
            m[1][0] * x[0] + m[1][1] * x[1] + m[1][2] * x[2],
            m[2][0] * x[0] + m[2][1] * x[1] + m[2][2] * x[2]};
}

} // namespace

std::string PointGroupTag::str() const {
    switch (family) {
    case GroupFamily::Cn:
        return "C" + std::to_string(n);
    case GroupFamily::Cnv:
        return "C" + std::to_string(n) + "v";
    case GroupFamily::Cnh:
        return n == 1 ? "Cs" : "C" + std::to_string(n) + "h";
    case GroupFamily::Dn:
        return "D" + std::to_string(n);
    case GroupFamily::Dnh:
        return "D" + std::to_string(n) + "h";
    case GroupFamily::Dnd:
        return "D" + std::to_string(n) + "d";
    case GroupFamily::S2n:
        return "S" + std::to_string(2 * n);
    case GroupFamily::Cinfv:
        return "Cinfv";
    case GroupFamily::Dinfh:
        return "Dinfh";
    case GroupFamily::T:
        return "T";
    case GroupFamily::Td:
        return "Td";
    case GroupFamily::Th:
        return "Th";
    case GroupFamily::O:
        return "O";
    case GroupFamily::Oh:
        return "Oh";
    case GroupFamily::I:
        return "I";
    case GroupFamily::Ih:
        return "Ih";
    case GroupFamily::Cn2d:
        return "C" + std::to_string(n) + "(2d)";
    case GroupFamily::Dn2d:
        return "D" + std::to_string(n) + "(2d)";
    }
    throw InputError("unreachable point-group family");
}

PointGroupTag PointGroupTag::parse(const std::string& name) {
    auto fail = [&]() -> PointGroupTag {
        throw InputError("unknown point-group tag \"" + name + "\"");
    };
    if (name.empty()) return fail();

    // Fixed names first.
    static const std::array<std::pair<const char*, GroupFamily>, 9> fixed{{
        {"T", GroupFamily::T},
        {"Td", GroupFamily::Td},
        {"Th", GroupFamily::Th},
        {"O", GroupFamily::O},
        {"Oh", GroupFamily::Oh},
        {"I", GroupFamily::I},
        {"Ih", GroupFamily::Ih},
        {"Cinfv", GroupFamily::Cinfv},
        {"Dinfh", GroupFamily::Dinfh},
    }};
    for (const auto& [s, fam] : fixed)
        if (name == s) return PointGroupTag{fam, 1};
    if (name == "C∞v") return PointGroupTag{GroupFamily::Cinfv, 1};
    if (name == "D∞h") return PointGroupTag{GroupFamily::Dinfh, 1};
    if (name == "Cs" || name == "C1h") return PointGroupTag{GroupFamily::Cnh, 1};
    if (name == "Ci" || name == "S2") return PointGroupTag{GroupFamily::S2n, 1};

    const char head = name[0];
    if (head != 'C' && head != 'D' && head != 'S') return fail();
    std::size_t pos = 1;
    std::size_t digits = 0;
    while (pos + digits < name.size() &&
           std::isdigit(static_cast<unsigned char>(name[pos + digits])))
        ++digits;
    if (digits == 0) return fail();
    const int order = std::stoi(name.substr(pos, digits));
    if (order < 1) return fail();
    const std::string suffix = name.substr(pos + digits);

    if (head == 'S') {
        if (!suffix.empty() || order % 2 != 0 || order < 2) return fail();
        return PointGroupTag{GroupFamily::S2n, order / 2};
    }
    if (suffix.empty())
        return PointGroupTag{head == 'C' ? GroupFamily::Cn : GroupFamily::Dn,
                             order};
    if (suffix == "(2d)")
        return PointGroupTag{
            head == 'C' ? GroupFamily::Cn2d : GroupFamily::Dn2d, order};
    if (head == 'C' && suffix == "v") return PointGroupTag{GroupFamily::Cnv, order};
    if (head == 'C' && suffix == "h") return PointGroupTag{GroupFamily::Cnh, order};
    if (head == 'D' && suffix == "h") return PointGroupTag{GroupFamily::Dnh, order};
    if (head == 'D' && suffix == "d") return PointGroupTag{GroupFamily::Dnd, order};
    return fail();
}

bool PointGroupTag::valid_for_dimension(int dimension) const {
    if (n < 1) return false;
    if (dimension == 2) return is_planar(family);
    if (dimension == 3) return !is_planar(family);
    return false;
}

SelectionVerdict selection_rule(const PointGroupTag& group, int dimension) {
    if (!group.valid_for_dimension(dimension))
        throw InputError("point group " + group.str() +
                         " is not valid in dimension " +
                         std::to_string(dimension));
    SelectionVerdict v;
    auto grant = [&](const std::string& reason) {
        v.guaranteed_zero = true;
        v.reason = reason;
    };
    auto deny = [&](const std::string& reason) {
        v.guaranteed_zero = false;
        v.reason = reason;
    };
    switch (group.family) {
    case GroupFamily::T:
    case GroupFamily::Td:
    case GroupFamily::Th:
    case GroupFamily::O:
    case GroupFamily::Oh:
    case GroupFamily::I:
    case GroupFamily::Ih:
        grant("cubic/icosahedral group: no odd vector component survives");
        break;
    case GroupFamily::Cnh:
        if (group.n == 1)
            deny("Cs has only a mirror plane; the in-plane odd functions "
                 "stay coupled");
        else
            grant("Cnh class (n >= 2): horizontal mirror and n-fold rotation "
                  "kill all odd couplings");
        break;
    case GroupFamily::Dn:
        grant("Dn class: perpendicular two-fold axes kill all odd couplings");
        break;
    case GroupFamily::Dnh:
        if (group.n == 1)
            deny("D1h = C2v retains an invariant odd direction");
        else
            grant("Dnh class (n >= 2): full prismatic symmetry kills all odd "
                  "couplings");
        break;
    case GroupFamily::Dnd:
        grant("Dnd class: antiprismatic symmetry kills all odd couplings");
        break;
    case GroupFamily::S2n:
        grant(group.n == 1
                  ? "S2 is inversion: every odd function decouples"
                  : "S2n class: the rotation-reflection makes odd couplings "
                    "cancel");
        break;
    case GroupFamily::Dinfh:
        grant("Dinfh contains inversion: every odd function decouples");
        break;
    case GroupFamily::Cinfv:
        deny("Cinfv leaves the axis direction invariant and odd-coupled");
        break;
    case GroupFamily::Cn:
        deny("Cn alone leaves the axis direction invariant and odd-coupled");
        break;
    case GroupFamily::Cnv:
        deny("Cnv leaves the axis direction invariant and odd-coupled");
        break;
    case GroupFamily::Cn2d:
        if (group.n >= 2)
            grant("planar Cn (n >= 2) contains the rotation by pi = 2D "
                  "inversion");
        else
            deny("planar C1 is trivial");
        break;
    case GroupFamily::Dn2d:
        if (group.n >= 2)
            grant("planar Dn (n >= 2) contains the rotation by pi = 2D "
                  "inversion");
        else
            deny("planar D1 is a single mirror line; the in-line odd function "
                 "stays coupled");
        break;
    }
    return v;
}

std::vector<Mat3> group_generators(const PointGroupTag& group,
                                   const std::array<double, 3>& axis) {
    std::vector<Mat3> gens;
    const int n = group.n;
    switch (group.family) {
    case GroupFamily::Cn:
        if (n >= 2) gens.push_back(rot_z(2.0 * kPi / n));
        break;
    case GroupFamily::Cnv:
        if (n >= 2) gens.push_back(rot_z(2.0 * kPi / n));
        gens.push_back(kMirrorY);
        break;
    case GroupFamily::Cnh:
        if (n >= 2) gens.push_back(rot_z(2.0 * kPi / n));
        gens.push_back(kMirrorZ);
        break;
    case GroupFamily::Dn:
        if (n >= 2) gens.push_back(rot_z(2.0 * kPi / n));
        gens.push_back(kC2X);
        break;
    case GroupFamily::Dnh:
        if (n >= 2) gens.push_back(rot_z(2.0 * kPi / n));
        gens.push_back(kC2X);
        gens.push_back(kMirrorZ);
        break;
    case GroupFamily::Dnd:
        if (n >= 2) gens.push_back(rot_z(2.0 * kPi / n));
        gens.push_back(kC2X);
        gens.push_back(rot_reflect(2 * n));
        break;
    case GroupFamily::S2n:
        gens.push_back(rot_reflect(2 * n)); // n = 1 gives the inversion
        break;
    case GroupFamily::Cinfv:
        for (int k = 2; k <= 16; ++k) gens.push_back(rot_z(2.0 * kPi / k));
        gens.push_back(kMirrorY);
        break;
    case GroupFamily::Dinfh:
        for (int k = 2; k <= 16; ++k) gens.push_back(rot_z(2.0 * kPi / k));
        gens.push_back(kMirrorY);
        gens.push_back(kMirrorZ);
        break;
    case GroupFamily::T:
        gens.push_back(diag(-1.0, -1.0, 1.0)); // C2 about z
        gens.push_back(kCyclic);               // C3 about (1,1,1)
        break;
    case GroupFamily::Td:
        gens.push_back(diag(-1.0, -1.0, 1.0));
        gens.push_back(kCyclic);
        gens.push_back(kSwapXY);
        break;
    case GroupFamily::Th:
        gens.push_back(diag(-1.0, -1.0, 1.0));
        gens.push_back(kCyclic);
        gens.push_back(kInversion);
        break;
    case GroupFamily::O:
        gens.push_back(rot_z(kPi / 2.0)); // C4 about z
        gens.push_back(kCyclic);
        break;
    case GroupFamily::Oh:
        gens.push_back(rot_z(kPi / 2.0));
        gens.push_back(kCyclic);
        gens.push_back(kInversion);
        break;
    case GroupFamily::I:
    case GroupFamily::Ih: {
        // Icosahedron with vertices at cyclic permutations of (0, +-1, +-phi):
        // five-fold axis through the vertex (0, 1, phi), three-fold axis
        // through the face center (1, 1, 1).
        const double phi = 0.5 * (1.0 + std::sqrt(5.0));
        const double len = std::sqrt(1.0 + phi * phi);
        gens.push_back(rot_axis({0.0, 1.0 / len, phi / len}, 2.0 * kPi / 5.0));
        const double s3 = 1.0 / std::sqrt(3.0);
        gens.push_back(rot_axis({s3, s3, s3}, 2.0 * kPi / 3.0));
        if (group.family == GroupFamily::Ih) gens.push_back(kInversion);
        break;
    }
    case GroupFamily::Cn2d:
        if (n >= 2) gens.push_back(rot_z(2.0 * kPi / n));
        break;
    case GroupFamily::Dn2d:
        if (n >= 2) gens.push_back(rot_z(2.0 * kPi / n));
        gens.push_back(kMirrorY); // reflection across the x line
        break;
    }

    const bool rotate_frame = axis != std::array<double, 3>{0.0, 0.0, 1.0};
    if (rotate_frame) {
        const Mat3 q = frame_for_axis(axis);
        const Mat3 qt = transpose(q);
        for (auto& g : gens) g = matmul(q, matmul(g, qt));
    }
    return gens;
}

double verify_invariance(const PotentialField& field,
                         const PointGroupTag& group, std::size_t n_samples) {
    const PotentialSpec& spec = field.spec();
    if (!group.valid_for_dimension(spec.dimension))
        throw InputError("point group " + group.str() +
                         " is not valid in dimension " +
                         std::to_string(spec.dimension));
    const auto gens = group_generators(group, spec.symmetry_axis);
    if (gens.empty()) return 0.0; // trivial group: nothing to test

    Rng rng(0x5e1ec7ed);
    const double r_span = field.table_r_max();
    double worst = 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        // Radius uniform in (0, r_span], direction uniform on the sphere
        // (circle in 2D).
        const double r = r_span * (double(s % 97) + rng.uniform01()) / 97.0;
        std::array<double, 3> x{0.0, 0.0, 0.0};
        if (spec.dimension == 2) {
            const double a = 2.0 * kPi * rng.uniform01();
            x = {r * std::cos(a), r * std::sin(a), 0.0};
        } else {
            const double z = rng.symmetric();
            const double a = 2.0 * kPi * rng.uniform01();
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            x = {r * rho * std::cos(a), r * rho * std::sin(a), r * z};
        }
        const double vx = field(x);
        const double local = std::max(1.0, std::abs(vx));
        for (const auto& g : gens) {
            const double vg = field(apply_mat(g, x));
            worst = std::max(worst, std::abs(vg - vx) / local);
        }
    }
    return worst;
}

double cross_element_check(const std::vector<double>& u0,
                           const std::vector<std::vector<double>>& pbasis,
                           const PotentialField& field,
                           const CartesianGrid& grid) {
    const std::size_t total = grid.total();
    if (u0.size() != total)
        throw InputError("cross_element_check: u0 does not match the grid");
    const double cell = std::pow(grid.spacing(), double(grid.dimension));
    const std::vector<double> dv = delta_v_on_grid(field, grid);

    double worst = 0.0;
    for (const auto& f : pbasis) {
        if (f.size() != total)
            throw InputError("cross_element_check: basis function does not "
                             "match the grid");
        double acc = 0.0;
        for (std::size_t i = 0; i < total; ++i) acc += u0[i] * dv[i] * f[i];
        worst = std::max(worst, std::abs(acc * cell));
    }
    return worst;
}

} // namespace vbar
