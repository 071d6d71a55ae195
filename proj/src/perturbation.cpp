#include "vbar/perturbation.hpp"

#include "vbar/errors.hpp"
#include "vbar/sphharm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vbar {

namespace {

/// Angular sub-state labels (l, m) coupled through l <= l_max in the given
/// dimension: 3D all m in [-l, l]; 2D m = +-l (one state for l = 0); 1D the
/// two parities.
std::vector<std::pair<int, int>> angular_labels(int dimension, int l_max) {
    std::vector<std::pair<int, int>> out;
    for (int l = 0; l <= l_max; ++l) {
        if (dimension == 3) {
            for (int m = -l; m <= l; ++m) out.emplace_back(l, m);
        } else if (dimension == 2) {
            if (l == 0) out.emplace_back(0, 0);
            else {
                out.emplace_back(l, l);
                out.emplace_back(l, -l);
            }
        } else {
            out.emplace_back(l, 0);
        }
    }
    return out;
}

} // namespace

FirstOrderShifts first_order_shifts(const PBasis& basis,
                                    const CouplingMatrix& coupling,
                                    const PotentialField& field) {
    FirstOrderShifts out;
    const std::vector<double> dv = delta_v_on_grid(field, basis.grid);
    out.ground_shift = matrix_element(basis.u0, dv, basis.u0, basis.grid);
    out.n_p = coupling.size;
    out.p_shifts = coupling.eigenvalues;
    return out;
}

SecondOrderResult second_order_excited(const PotentialField& field,
                                       const IsotropicSpectrum& spectrum,
                                       const std::array<double, 3>& a_star,
                                       std::size_t states_per_channel) {
    if (!spectrum.has_two_levels())
        throw InputError("second_order_excited: needs two bound levels of "
                         "the averaged problem");
    if (states_per_channel < 2)
        throw InputError("second_order_excited: cutoff must be >= 2");

    const int d = spectrum.dimension;
    const int l_max = d == 1 ? 1 : 4;
    const RadialEigenstate& exc = spectrum.excited();

    // Raw discrete basis on the shared radial grid; energies and states are
    // consistent with each other (no extrapolation inside the sum).
    std::vector<std::vector<RadialEigenstate>> raw(std::size_t(l_max) + 1);
    for (int l = 0; l <= l_max; ++l)
        raw[std::size_t(l)] =
            solve_channel_raw(field, spectrum.grid, l, states_per_channel);

    const auto& exc_raw_channel = raw[std::size_t(exc.channel)];
    if (std::size_t(exc.radial_index) >= exc_raw_channel.size())
        throw DiagnosticError("second_order_excited: excited state not in "
                              "the raw basis");
    const RadialEigenstate& u1 = exc_raw_channel[std::size_t(exc.radial_index)];
    const double e1_ref = u1.energy;

    // Angular factor of the excited state: the a* combination for a p-like
    // level (Cartesian ordering as in the coupling matrix), the scalar
    // harmonic otherwise.
    const std::array<int, 3> m_order{+1, -1, 0};
    auto excited_angular = [&](const Point& dir) {
        if (exc.channel == 0) return angular_factor(d, 0, 0, dir);
        if (exc.channel == 1 && d >= 2) {
            double s = 0.0;
            for (int i = 0; i < d; ++i)
                s += a_star[std::size_t(i)] *
                     angular_factor(d, 1, m_order[std::size_t(i)], dir);
            return s;
        }
        return angular_factor(d, exc.channel, 0, dir); // 1D odd state
    };

    // Radial kernels K_{l,m}(r_k) = contour integral of Y_{l,m} * deltaV *
    // (excited angular factor) over directions. Every matrix element in the
    // sum carries a factor u1(r_k), so nodes past the last point where |u1|
    // reaches 1e-14 of its peak contribute below round-off and are skipped.
    const std::vector<double> nodes = reduced_nodes(d, spectrum.grid);
    double u1_peak = 0.0;
    for (double v : u1.u) u1_peak = std::max(u1_peak, std::abs(v));
    std::size_t n_eff = u1.u.size();
    while (n_eff > 1 && std::abs(u1.u[n_eff - 1]) < 1e-14 * u1_peak) --n_eff;
    const auto labels = angular_labels(d, l_max);
    const auto& qn = field.quadrature().nodes();

    std::vector<double> ylm(labels.size() * qn.size());
    std::vector<double> a1(qn.size());
    for (std::size_t q = 0; q < qn.size(); ++q) {
        a1[q] = excited_angular(qn[q].direction);
        for (std::size_t t = 0; t < labels.size(); ++t)
            ylm[t * qn.size() + q] = angular_factor(
                d, labels[t].first, labels[t].second, qn[q].direction);
    }

    std::vector<double> kern(labels.size() * n_eff, 0.0);
    for (std::size_t k = 0; k < n_eff; ++k) {
        const double r = nodes[k];
        for (std::size_t q = 0; q < qn.size(); ++q) {
            const Point& u = qn[q].direction;
            const double dv =
                field.delta(Point{r * u[0], r * u[1], r * u[2]});
            const double wdva = qn[q].weight * dv * a1[q];
            if (wdva == 0.0) continue;
            for (std::size_t t = 0; t < labels.size(); ++t)
                kern[t * n_eff + k] += wdva * ylm[t * qn.size() + q];
        }
    }

    SecondOrderResult out;
    const double h = spectrum.grid.spacing();
    const double degeneracy_tol = 1e-6 * std::max(1.0, std::abs(e1_ref));
    double top_energy = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < labels.size(); ++t) {
        const int l = labels[t].first;
        const double* K = kern.data() + t * n_eff;
        for (std::size_t n = 0; n < raw[std::size_t(l)].size(); ++n) {
            // The excited state's own degenerate manifold enters at first
            // order, not here.
            if (l == exc.channel && int(n) == exc.radial_index) continue;
            const RadialEigenstate& um = raw[std::size_t(l)][n];
            const double denom = e1_ref - um.energy;
            if (std::abs(denom) < degeneracy_tol) {
                ++out.degenerate_excluded;
                continue;
            }
            double amp = 0.0;
            for (std::size_t k = 0; k < n_eff; ++k)
                amp += um.u[k] * u1.u[k] * K[k];
            amp *= h;
            const double term = amp * amp / denom;
            out.value += term;
            ++out.basis_cutoff;
            if (um.energy > top_energy) {
                top_energy = um.energy;
                out.cutoff_tail_estimate = std::abs(term);
            }
        }
    }
    return out;
}

PerturbationReport build_perturbation_report(
    const PotentialField& field, const IsotropicSpectrum& spectrum,
    const PBasis* basis, const CouplingMatrix* coupling,
    const CartesianGrid& grid, std::size_t states_per_channel) {
    PerturbationReport rep;
    if (spectrum.states.empty()) return rep;

    if (basis != nullptr && coupling != nullptr) {
        const FirstOrderShifts fo = first_order_shifts(*basis, *coupling, field);
        rep.first_order_gs = fo.ground_shift;
        rep.degenerate_first_order = fo.p_shifts;
        rep.n_first_order = fo.n_p;
    } else {
        const std::vector<double> u0 = transfer_radial_state(
            spectrum.ground(), spectrum.dimension, spectrum.grid, grid, 0);
        const std::vector<double> dv = delta_v_on_grid(field, grid);
        rep.first_order_gs = matrix_element(u0, dv, u0, grid);
    }

    if (!spectrum.has_two_levels()) return rep;
    rep.applicable = true;
    const std::array<double, 3> a =
        coupling != nullptr ? coupling->a_star : std::array<double, 3>{1, 0, 0};
    const SecondOrderResult so =
        second_order_excited(field, spectrum, a, states_per_channel);
    rep.second_order_excited = so.value;
    rep.basis_cutoff = so.basis_cutoff;
    rep.cutoff_tail_estimate = so.cutoff_tail_estimate;
    rep.degenerate_excluded = so.degenerate_excluded;
    return rep;
}

} // namespace vbar
