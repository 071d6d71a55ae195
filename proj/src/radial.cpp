#include "vbar/radial.hpp"

#include "vbar/errors.hpp"
#include "vbar/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace vbar {

namespace {

void check_grid(const RadialGrid& grid) {
    if (!(grid.r_max > 0.0))
        throw InputError("radial grid: r_max must be positive");
    if (grid.n_points < 64)
        throw InputError("radial grid: n_points must be >= 64");
}

void check_channel(int dimension, int channel) {
    if (channel < 0) throw InputError("radial channel must be non-negative");
    if (dimension == 1 && channel > 1)
        throw InputError("1D has only the even (0) and odd (1) channels");
}

struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;
};

// Symmetric tridiagonal discretization of the reduced radial operator.
Tridiag assemble(const PotentialField& field, const RadialGrid& grid,
                 int channel) {
    const int dim = field.spec().dimension;
    const double c = field.spec().kinetic_coefficient;
    const double h = grid.spacing();
    const double inv_h2 = 1.0 / (h * h);
    Tridiag m;
    if (dim == 3) {
        // u = r R on r_k = k h, Dirichlet u(0) = u(r_max) = 0, second-order
        // central differences; centrifugal term c l(l+1)/r^2.
        const std::size_t n = grid.n_points - 1;
        m.diag.resize(n);
        m.off.assign(n - 1, -c * inv_h2);
        const double lterm = c * double(channel) * double(channel + 1);
        for (std::size_t k = 0; k < n; ++k) {
            const double r = h * double(k + 1);
            m.diag[k] = 2.0 * c * inv_h2 + field.average(r) + lterm / (r * r);
        }
    } else if (dim == 2) {
        // Finite-volume form of the cylindrical radial operator: cell centers
        // rho_k = (k+1/2) h, faces at k h. The inner face (k = 0) carries zero
        // area, which encodes the regularity condition at rho = 0 without any
        // singular 1/rho^2 counter-term. Written in v_k = sqrt(rho_k h) R_k
        // the matrix is symmetric, and v coincides with the reduced
        // wavefunction u = sqrt(rho) R up to the uniform factor sqrt(h).
        const std::size_t n = grid.n_points;
        m.diag.resize(n);
        m.off.resize(n - 1);
        const double mterm = c * double(channel) * double(channel);
        for (std::size_t k = 0; k < n; ++k) {
            const double rho = h * (double(k) + 0.5);
            m.diag[k] = 2.0 * c * inv_h2 + field.average(rho) + mterm / (rho * rho);
            if (k + 1 < n) {
                const double rho_next = h * (double(k) + 1.5);
                m.off[k] = -c * inv_h2 * h * double(k + 1) / std::sqrt(rho * rho_next);
            }
        }
    } else {
        // 1D parity channels on the staggered half-line grid x_k = (k+1/2) h.
        // The mirror node across the origin folds into the first diagonal
        // entry: even parity u(-x) = u(x) (zero-derivative), odd parity
        // u(-x) = -u(x) (zero-value).
        const std::size_t n = grid.n_points;
        m.diag.resize(n);
        m.off.assign(n - 1, -c * inv_h2);
        for (std::size_t k = 0; k < n; ++k) {
            const double x = h * (double(k) + 0.5);
            m.diag[k] = 2.0 * c * inv_h2 + field.average(x);
        }
        m.diag[0] += (channel == 0 ? -c : c) * inv_h2;
    }
    return m;
}

int count_nodes(const std::vector<double>& u) {
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, std::abs(v));
    const double thresh = 1e-8 * umax;
    int nodes = 0;
    int last_sign = 0;
    for (double v : u) {
        if (std::abs(v) <= thresh) continue;
        const int s = v > 0.0 ? 1 : -1;
        if (last_sign != 0 && s != last_sign) ++nodes;
        last_sign = s;
    }
    return nodes;
}

void fix_sign(std::vector<double>& u) {
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, std::abs(v));
    const double thresh = 1e-8 * umax;
    for (double v : u) {
        if (std::abs(v) <= thresh) continue;
        if (v < 0.0)
            for (double& w : u) w = -w;
        return;
    }
}

std::vector<RadialEigenstate> raw_states(const PotentialField& field,
                                         const RadialGrid& grid, int channel,
                                         std::size_t n_states) {
    const Tridiag m = assemble(field, grid, channel);
    const std::size_t k = std::min(n_states, m.diag.size());
    TridiagEigen eig = lowest_tridiag_eigenpairs(m.diag, m.off, k);
    const double inv_sqrt_h = 1.0 / std::sqrt(grid.spacing());
    const double v_edge = field.average(grid.r_max);
    std::vector<RadialEigenstate> states(k);
    for (std::size_t j = 0; j < k; ++j) {
        RadialEigenstate& st = states[j];
        st.channel = channel;
        st.energy = eig.values[j];
        st.u = std::move(eig.vectors[j]);
        for (double& v : st.u) v *= inv_sqrt_h; // sum u_k^2 h = 1
        fix_sign(st.u);
        st.radial_index = count_nodes(st.u);
        st.bound = st.energy < v_edge;
    }
    return states;
}

bool tail_decayed(const RadialEigenstate& st) {
    double umax = 0.0;
    for (double v : st.u) umax = std::max(umax, std::abs(v));
    return std::abs(st.u.back()) <= 1e-8 * umax;
}

struct GridSolve {
    std::vector<RadialEigenstate> states;
    bool tail_ok = true; // every bound state decays at the outermost node
};

// Solves on (n/2, n) grids at fixed r_max, Richardson-extrapolates the
// energies (second-order scheme: E* = (4 E_fine - E_coarse)/3) and keeps the
// fine-grid wavefunctions.
GridSolve solve_on_grid(const PotentialField& field, const RadialGrid& grid,
                        int channel, std::size_t n_states) {
    const RadialGrid coarse{grid.r_max, grid.n_points / 2};
    std::vector<RadialEigenstate> fine = raw_states(field, grid, channel, n_states);
    std::vector<RadialEigenstate> half = raw_states(field, coarse, channel, n_states);
    const double v_edge = field.average(grid.r_max);
    GridSolve out;
    for (std::size_t j = 0; j < fine.size(); ++j) {
        RadialEigenstate st = std::move(fine[j]);
        if (j < half.size()) {
            const double e_ext = (4.0 * st.energy - half[j].energy) / 3.0;
            st.energy_error = std::abs(e_ext - st.energy);
            st.energy = e_ext;
        }
        st.bound = st.energy < v_edge - st.energy_error;
        if (st.bound && !tail_decayed(st)) out.tail_ok = false;
        out.states.push_back(std::move(st));
    }
    return out;
}

void enlarge(RadialGrid& grid) {
    grid.r_max *= 2.0;
    grid.n_points *= 2;
}

std::string kind_name(int dimension, int channel) {
    if (channel > 1)
        throw DiagnosticError(
            "first excited state found in channel " + std::to_string(channel) +
            ", contradicting centrifugal monotonicity");
    if (dimension == 3) return channel == 0 ? "s_state" : "p_state";
    if (dimension == 2) return channel == 0 ? "m0_state" : "m1_state";
    return channel == 0 ? "even" : "odd";
}

} // namespace

std::vector<double> reduced_nodes(int dimension, const RadialGrid& grid) {
    const double h = grid.spacing();
    std::vector<double> nodes;
    if (dimension == 3) {
        nodes.resize(grid.n_points - 1);
        for (std::size_t k = 0; k < nodes.size(); ++k)
            nodes[k] = h * double(k + 1);
    } else {
        nodes.resize(grid.n_points);
        for (std::size_t k = 0; k < nodes.size(); ++k)
            nodes[k] = h * (double(k) + 0.5);
    }
    return nodes;
}

std::vector<RadialEigenstate> solve_channel_raw(const PotentialField& field,
                                                const RadialGrid& grid,
                                                int channel,
                                                std::size_t n_states) {
    check_grid(grid);
    check_channel(field.spec().dimension, channel);
    if (n_states < 1)
        throw InputError("solve_channel_raw: n_states must be >= 1");
    return raw_states(field, grid, channel, n_states);
}

ChannelResult solve_channel(const PotentialField& field, RadialGrid grid,
                            int channel, std::size_t n_states) {
    check_grid(grid);
    check_channel(field.spec().dimension, channel);
    if (n_states < 1) throw InputError("solve_channel: n_states must be >= 1");
    GridSolve solved = solve_on_grid(field, grid, channel, n_states);
    for (int attempt = 0; attempt < 3 && !solved.tail_ok; ++attempt) {
        enlarge(grid);
        solved = solve_on_grid(field, grid, channel, n_states);
    }
    ChannelResult result;
    result.grid = grid;
    for (RadialEigenstate& st : solved.states) {
        if (!st.bound) continue;
        // If enlargement is exhausted, drop states still touching the wall
        // rather than reporting a box artifact as bound.
        if (!solved.tail_ok && !tail_decayed(st)) continue;
        result.bound_states.push_back(std::move(st));
    }
    result.no_bound_state = result.bound_states.empty();
    return result;
}

IsotropicSpectrum isotropic_spectrum(const PotentialField& field,
                                     RadialGrid grid, std::size_t n_channels,
                                     std::size_t n_states) {
    check_grid(grid);
    if (n_channels < 2)
        throw InputError("isotropic_spectrum: n_channels must be >= 2");
    if (n_states < 1)
        throw InputError("isotropic_spectrum: n_states must be >= 1");
    const int dim = field.spec().dimension;
    if (dim == 1) n_channels = 2; // only even/odd parities exist

    // Shared box-enlargement loop so every channel ends on one grid.
    std::vector<GridSolve> per_channel;
    for (int attempt = 0;; ++attempt) {
        per_channel.clear();
        bool all_ok = true;
        for (std::size_t ch = 0; ch < n_channels; ++ch) {
            per_channel.push_back(
                solve_on_grid(field, grid, int(ch), n_states));
            all_ok = all_ok && per_channel.back().tail_ok;
        }
        if (all_ok || attempt == 3) break;
        enlarge(grid);
    }

    IsotropicSpectrum spectrum;
    spectrum.dimension = dim;
    spectrum.grid = grid;
    for (GridSolve& solved : per_channel)
        for (RadialEigenstate& st : solved.states)
            if (st.bound && tail_decayed(st))
                spectrum.states.push_back(std::move(st));
    std::stable_sort(spectrum.states.begin(), spectrum.states.end(),
                     [](const RadialEigenstate& a, const RadialEigenstate& b) {
                         if (a.energy != b.energy) return a.energy < b.energy;
                         if (a.channel != b.channel) return a.channel < b.channel;
                         return a.radial_index < b.radial_index;
                     });

    if (spectrum.states.empty()) {
        spectrum.first_excited_kind = "not_applicable";
        return spectrum;
    }
    const RadialEigenstate& g = spectrum.states.front();
    if (g.channel != 0 || g.radial_index != 0)
        throw DiagnosticError(
            "isotropic ground state is not a nodeless channel-0 state "
            "(channel " + std::to_string(g.channel) + ", nodes " +
            std::to_string(g.radial_index) + ")");
    if (spectrum.states.size() < 2) {
        spectrum.first_excited_kind = "not_applicable";
        return spectrum;
    }

    // Classify the first excited level; near-ties between the lowest
    // channel-0 excitation and the lowest channel-1 state are reported as
    // degenerate rather than silently resolved.
    const RadialEigenstate* cand0 = nullptr; // second channel-0 state
    const RadialEigenstate* cand1 = nullptr; // first channel-1 state
    for (const RadialEigenstate& st : spectrum.states) {
        if (st.channel == 0 && st.radial_index >= 1 && !cand0) cand0 = &st;
        if (st.channel == 1 && !cand1) cand1 = &st;
    }
    if (cand0 && cand1 &&
        std::abs(cand0->energy - cand1->energy) <=
            cand0->energy_error + cand1->energy_error) {
        spectrum.first_excited_kind = "degenerate_within_tolerance";
    } else {
        spectrum.first_excited_kind =
            kind_name(dim, spectrum.states[1].channel);
    }
    return spectrum;
}

} // namespace vbar
