#include "vbar/variational.hpp"

#include "vbar/errors.hpp"
#include "vbar/interpolation.hpp"
#include "vbar/sphharm.hpp"

#include <algorithm>
#include <cmath>
#include <lapacke.h>

namespace vbar {

namespace {

double grid_norm_sq(const std::vector<double>& f, const CartesianGrid& grid) {
    double s = 0.0;
    for (double v : f) s += v * v;
    return s * std::pow(grid.spacing(), double(grid.dimension));
}

double grid_inner(const std::vector<double>& a, const std::vector<double>& b,
                  const CartesianGrid& grid) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * std::pow(grid.spacing(), double(grid.dimension));
}

} // namespace

std::vector<double> transfer_radial_state(const RadialEigenstate& state,
                                          int dimension,
                                          const RadialGrid& rgrid,
                                          const CartesianGrid& grid, int m) {
    if (grid.dimension != dimension)
        throw InputError("transfer_radial_state: grid dimension mismatch");
    const std::vector<double> nodes = reduced_nodes(dimension, rgrid);
    if (state.u.size() != nodes.size())
        throw InputError("transfer_radial_state: state does not match the "
                         "radial grid");

    // Radial factor R with u = R * r^((d-1)/2); beyond the radial box R = 0
    // (the tail rule keeps |u| there below 1e-8 of its peak).
    std::vector<double> R(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        double w = 1.0;
        if (dimension == 3) w = nodes[k];
        else if (dimension == 2) w = std::sqrt(nodes[k]);
        R[k] = state.u[k] / w;
    }
    const UniformTable R_tab(nodes.front(), rgrid.spacing(), std::move(R));
    const double r_end = nodes.back();

    std::vector<double> psi(grid.total());
    for (std::size_t flat = 0; flat < psi.size(); ++flat) {
        const Point x = grid_point(grid, flat);
        const double r =
            std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (r > r_end) continue; // decayed tail
        double ang;
        if (r < 1e-12) {
            if (state.channel != 0) continue; // R ~ r^l vanishes at the origin
            ang = angular_factor(dimension, 0, 0, Point{0.0, 0.0, 1.0});
        } else {
            const Point dir{x[0] / r, x[1] / r, x[2] / r};
            ang = angular_factor(dimension, state.channel, m, dir);
        }
        psi[flat] = R_tab(r) * ang;
    }

    const double nsq = grid_norm_sq(psi, grid);
    if (!(nsq > 0.0))
        throw DiagnosticError("transferred radial state vanished on the grid "
                              "(box mismatch?)");
    const double inv = 1.0 / std::sqrt(nsq);
    for (double& v : psi) v *= inv;
    return psi;
}

PBasis build_p_basis(const PotentialField& field,
                     const IsotropicSpectrum& spectrum,
                     const CartesianGrid& grid) {
    const int d = field.spec().dimension;
    if (d < 2)
        throw InputError("build_p_basis: the p-like trial space needs "
                         "dimension 2 or 3");
    if (spectrum.states.empty())
        throw InputError("build_p_basis: no bound states in the averaged "
                         "spectrum");

    const RadialEigenstate* chi = nullptr;
    for (const auto& s : spectrum.states)
        if (s.channel == 1 && (chi == nullptr || s.energy < chi->energy))
            chi = &s;
    if (chi == nullptr)
        throw InputError("build_p_basis: no bound channel-1 state available");

    PBasis basis;
    basis.grid = grid;
    basis.u0 = transfer_radial_state(spectrum.ground(), d, spectrum.grid,
                                     grid, 0);
    // Cartesian-axis ordering of the real angular factors:
    // 3D m = (+1, -1, 0) -> (p_x, p_y, p_z); 2D m = (+1, -1) -> (cos, sin).
    const std::array<int, 3> m_order{+1, -1, 0};
    for (int i = 0; i < d; ++i)
        basis.functions.push_back(transfer_radial_state(
            *chi, d, spectrum.grid, grid, m_order[std::size_t(i)]));
    basis.coefficients.assign(std::size_t(d), 0.0);
    basis.coefficients[0] = 1.0;

    double defect = 0.0;
    std::vector<const std::vector<double>*> all{&basis.u0};
    for (const auto& f : basis.functions) all.push_back(&f);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i; j < all.size(); ++j) {
            const double g = grid_inner(*all[i], *all[j], grid);
            defect = std::max(defect, std::abs(g - (i == j ? 1.0 : 0.0)));
        }
    basis.orthonormality_defect = defect;
    if (defect > 1e-4)
        throw DiagnosticError(
            "p-basis orthonormality defect " + std::to_string(defect) +
            " is far above the quadrature floor (grid too coarse?)");
    return basis;
}

double matrix_element(const std::vector<double>& bra,
                      const std::vector<double>& op_values,
                      const std::vector<double>& ket,
                      const CartesianGrid& grid) {
    const std::size_t total = grid.total();
    if (bra.size() != total || ket.size() != total ||
        op_values.size() != total)
        throw InputError("matrix_element: grid size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < total; ++i) s += bra[i] * op_values[i] * ket[i];
    return s * std::pow(grid.spacing(), double(grid.dimension));
}

CouplingMatrix build_coupling_matrix(const PBasis& basis,
                                     const PotentialField& field) {
    const int d = int(basis.functions.size());
    if (d < 2) throw InputError("build_coupling_matrix: incomplete p basis");
    const std::vector<double> dv = delta_v_on_grid(field, basis.grid);

    CouplingMatrix out;
    out.size = d;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            const double mij =
                matrix_element(basis.functions[std::size_t(i)], dv,
                               basis.functions[std::size_t(j)], basis.grid);
            out.m[std::size_t(i)][std::size_t(j)] = mij;
            out.m[std::size_t(j)][std::size_t(i)] = mij;
        }

    // Dense eigen-decomposition of the small symmetric block.
    std::vector<double> a(std::size_t(d) * std::size_t(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            a[std::size_t(i * d + j)] = out.m[std::size_t(i)][std::size_t(j)];
    std::vector<double> w(std::size_t(d), 0.0);
    const lapack_int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'V', 'U', d,
                                          a.data(), d, w.data());
    if (info != 0)
        throw ConvergenceError("coupling-matrix eigensolve failed (LAPACK "
                               "info " + std::to_string(info) + ")", {});
    double trace = 0.0;
    for (int i = 0; i < d; ++i) {
        out.eigenvalues[std::size_t(i)] = w[std::size_t(i)];
        trace += out.m[std::size_t(i)][std::size_t(i)];
        out.norm = std::max(out.norm, std::abs(w[std::size_t(i)]));
    }
    out.trace_residual = std::abs(trace);
    // Column 0 of the rotated matrix is the minimizing direction; fix the
    // sign so the largest-magnitude component is positive.
    int lead = 0;
    for (int i = 1; i < d; ++i)
        if (std::abs(a[std::size_t(i * d)]) >
            std::abs(a[std::size_t(lead * d)]))
            lead = i;
    const double sgn = a[std::size_t(lead * d)] < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < d; ++i)
        out.a_star[std::size_t(i)] = sgn * a[std::size_t(i * d)];
    return out;
}

HUMatrix hylleraas_undheim_bounds(double e0bar, double e1bar, double cross,
                                  double diag_shift) {
    if (e0bar > e1bar)
        throw InputError("hylleraas_undheim_bounds: levels out of order");
    HUMatrix out;
    out.e0bar = e0bar;
    out.e1bar = e1bar;
    out.cross = cross;
    out.diag_shift = diag_shift;
    const double a = e0bar;
    const double dgl = e1bar + diag_shift;
    if (cross == 0.0) {
        out.eprime1 = std::min(a, dgl);
        out.eprime2 = std::max(a, dgl);
        return out;
    }
    const double mean = 0.5 * (a + dgl);
    const double rad = std::hypot(0.5 * (a - dgl), cross);
    out.eprime1 = mean - rad;
    out.eprime2 = mean + rad;
    return out;
}

InequalityVerdict verify_ground_inequality(const LevelEstimate& e0bar,
                                           const LevelEstimate& e0) {
    InequalityVerdict v;
    v.margin = e0bar.value - e0.value;
    v.combined_error = e0bar.error + e0.error;
    if (v.margin >= 0.0) {
        v.verdict = "holds";
        v.reason = "averaged ground level lies above the full ground level";
    } else if (-v.margin <= v.combined_error) {
        v.verdict = "inconclusive";
        v.reason = "deficit is inside the combined numerical error bars";
    } else {
        v.verdict = "violated";
        v.reason = "deficit exceeds the combined error bars; the bound is "
                   "unconditional, so this indicates an implementation bug";
    }
    return v;
}

InequalityVerdict verify_excited_inequality(const IsotropicSpectrum& spectrum,
                                            const SelectionVerdict& gate,
                                            bool grid_has_e1,
                                            const LevelEstimate& e1) {
    InequalityVerdict v;
    if (spectrum.dimension == 1) {
        v.verdict = "not_applicable";
        v.reason = "the excited-level comparison is not asserted in 1D";
        return v;
    }
    if (!spectrum.has_two_levels() || !grid_has_e1) {
        v.verdict = "not_applicable";
        v.reason = "fewer than two bound levels on at least one side";
        return v;
    }
    const std::string& kind = spectrum.first_excited_kind;
    const bool p_like = kind == "p_state" || kind == "m1_state" ||
                        kind == "degenerate_within_tolerance";
    if (p_like) {
        const bool numeric_ok =
            gate.numerically_confirmed && *gate.numerically_confirmed;
        if (gate.numerically_confirmed && !numeric_ok &&
            gate.guaranteed_zero) {
            v.verdict = "inconclusive";
            v.reason = "symmetry guarantees vanishing cross elements but the "
                       "measured value contradicts it";
            return v;
        }
        if (!gate.guaranteed_zero && !numeric_ok) {
            v.verdict = "not_applicable";
            v.reason = "insufficient symmetry: cross elements are neither "
                       "guaranteed nor numerically zero";
            return v;
        }
    }

    const LevelEstimate e1bar{spectrum.excited().energy,
                              spectrum.excited().energy_error};
    v.margin = e1bar.value - e1.value;
    v.combined_error = e1bar.error + e1.error;
    if (v.margin >= 0.0) {
        v.verdict = "holds";
        v.reason = p_like ? "full excited level lies below the averaged one "
                            "(p-like branch, cross elements vanish)"
                          : "full excited level lies below the averaged one "
                            "(s-like branch)";
    } else if (-v.margin <= v.combined_error) {
        v.verdict = "inconclusive";
        v.reason = "deficit is inside the combined numerical error bars";
    } else {
        v.verdict = "violated";
        v.reason = "deficit exceeds the combined error bars; with the cross "
                   "elements vanishing the bound is rigorous, so this "
                   "indicates an implementation bug";
    }
    return v;
}

} // namespace vbar
