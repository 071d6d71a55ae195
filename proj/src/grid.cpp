#include "vbar/grid.hpp"

#include "vbar/errors.hpp"
#include "vbar/rng.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace vbar {

namespace {

// Unrolled into independent partial sums so the loop pipelines; the fixed
// summation order keeps results bit-reproducible.
double dot(const double* a, const double* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double norm2(const double* x, std::size_t n) { return std::sqrt(dot(x, x, n)); }

} // namespace

std::size_t CartesianGrid::total() const {
    std::size_t t = 1;
    for (int a = 0; a < dimension; ++a) t *= n;
    return t;
}

Point grid_point(const CartesianGrid& grid, std::size_t flat) {
    Point p{0.0, 0.0, 0.0};
    for (int a = grid.dimension - 1; a >= 0; --a) {
        p[std::size_t(a)] = grid.coord(flat % grid.n);
        flat /= grid.n;
    }
    return p;
}

std::vector<double> potential_on_grid(const PotentialSpec& spec,
                                      const CartesianGrid& grid) {
    if (spec.dimension != grid.dimension)
        throw InputError("grid dimension does not match the potential spec");
    std::vector<double> out(grid.total());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = evaluate_point(spec, grid_point(grid, i));
    return out;
}

std::vector<double> delta_v_on_grid(const PotentialField& field,
                                    const CartesianGrid& grid) {
    if (field.spec().dimension != grid.dimension)
        throw InputError("grid dimension does not match the potential spec");
    std::vector<double> out(grid.total());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = field.delta(grid_point(grid, i));
    return out;
}

SparseHamiltonian::SparseHamiltonian(const PotentialField& field,
                                     const CartesianGrid& grid)
    : grid_(grid) {
    if (grid_.dimension != field.spec().dimension)
        throw InputError("grid dimension does not match the potential spec");
    if (grid_.dimension < 1 || grid_.dimension > 3)
        throw InputError("grid dimension must be 1, 2 or 3");
    if (!(grid_.L > 0.0)) throw InputError("grid: L must be positive");
    if (grid_.n < 3) throw InputError("grid: n must be >= 3 points per axis");
    const double h = grid_.spacing();
    c_over_h2_ = field.spec().kinetic_coefficient / (h * h);
    v_.resize(grid_.total());
    const std::size_t n = grid_.n;
    const int d = grid_.dimension;
    v_min_ = std::numeric_limits<double>::infinity();
    Point p{0.0, 0.0, 0.0};
    std::size_t i = 0;
    const std::size_t nx = (d >= 1) ? n : 1;
    const std::size_t ny = (d >= 2) ? n : 1;
    const std::size_t nz = (d >= 3) ? n : 1;
    for (std::size_t ix = 0; ix < nx; ++ix) {
        p[0] = grid_.coord(ix);
        for (std::size_t iy = 0; iy < ny; ++iy) {
            if (d >= 2) p[1] = grid_.coord(iy);
            for (std::size_t iz = 0; iz < nz; ++iz) {
                if (d >= 3) p[2] = grid_.coord(iz);
                const double v = field(p);
                if (!std::isfinite(v))
                    throw InputError("potential is not finite on the grid");
                v_[i++] = v;
                v_min_ = std::min(v_min_, v);
            }
        }
    }
}

double SparseHamiltonian::spectral_scale() const {
    const double kin = 2.0 * double(grid_.dimension) * c_over_h2_;
    double v_max = -std::numeric_limits<double>::infinity();
    for (double v : v_) v_max = std::max(v_max, v);
    return std::max({std::abs(v_min_), std::abs(2.0 * kin + v_max), 1.0});
}

void SparseHamiltonian::apply(const double* x, double* y) const {
    const std::size_t n = grid_.n;
    const double c = c_over_h2_;
    const int d = grid_.dimension;
    const std::size_t N = v_.size();
    const double diag_kin = 2.0 * double(d) * c;
    for (std::size_t i = 0; i < N; ++i) y[i] = (diag_kin + v_[i]) * x[i];
    if (d == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            if (i > 0) s += x[i - 1];
            if (i + 1 < n) s += x[i + 1];
            y[i] -= c * s;
        }
    } else if (d == 2) {
        for (std::size_t ix = 0; ix < n; ++ix) {
            const std::size_t row = ix * n;
            for (std::size_t iy = 0; iy < n; ++iy) {
                const std::size_t i = row + iy;
                double s = 0.0;
                if (iy > 0) s += x[i - 1];
                if (iy + 1 < n) s += x[i + 1];
                if (ix > 0) s += x[i - n];
                if (ix + 1 < n) s += x[i + n];
                y[i] -= c * s;
            }
        }
    } else {
        const std::size_t n2 = n * n;
        for (std::size_t ix = 0; ix < n; ++ix) {
            for (std::size_t iy = 0; iy < n; ++iy) {
                const std::size_t base = (ix * n + iy) * n;
                for (std::size_t iz = 0; iz < n; ++iz) {
                    const std::size_t i = base + iz;
                    double s = 0.0;
                    if (iz > 0) s += x[i - 1];
                    if (iz + 1 < n) s += x[i + 1];
                    if (iy > 0) s += x[i - n];
                    if (iy + 1 < n) s += x[i + n];
                    if (ix > 0) s += x[i - n2];
                    if (ix + 1 < n) s += x[i + n2];
                    y[i] -= c * s;
                }
            }
        }
    }
}

namespace {

// Dense fallback for small problems: assemble H explicitly and call the RRR
// eigensolver. Exact and cheap below a few thousand unknowns.
std::vector<GridEigenpair> dense_lowest(const SparseHamiltonian& H,
                                        std::size_t k, double tol_abs) {
    const std::size_t N = H.size();
    std::vector<double> A(N * N, 0.0);
    std::vector<double> e(N, 0.0), col(N);
    for (std::size_t j = 0; j < N; ++j) {
        e[j] = 1.0;
        H.apply(e.data(), col.data());
        for (std::size_t i = 0; i < N; ++i) A[i * N + j] = col[i];
        e[j] = 0.0;
    }
    std::vector<double> theta(N), Z(N * k);
    std::vector<lapack_int> isuppz(2 * k);
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dsyevr(
        LAPACK_ROW_MAJOR, 'V', 'I', 'U', lapack_int(N), A.data(),
        lapack_int(N), 0.0, 0.0, 1, lapack_int(k), 0.0, &found, theta.data(),
        Z.data(), lapack_int(k), isuppz.data());
    if (info != 0 || std::size_t(found) != k)
        throw ConvergenceError("dense eigensolve failed (LAPACK info " +
                                   std::to_string(info) + ")",
                               {});
    const double h = H.grid().spacing();
    const double norm_fix = 1.0 / std::pow(h, 0.5 * double(H.grid().dimension));
    std::vector<GridEigenpair> pairs(k);
    std::vector<double> y(N), r(N);
    std::vector<double> best;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < N; ++i) y[i] = Z[i * k + j];
        H.apply(y.data(), r.data());
        axpy(-theta[j], y.data(), r.data(), N);
        const double res = norm2(r.data(), N);
        best.push_back(res);
        if (res > tol_abs)
            throw ConvergenceError(
                "dense eigensolve residual exceeds the tolerance", best);
        pairs[j].energy = theta[j];
        pairs[j].residual_norm = res;
        pairs[j].psi = y;
        for (double& v : pairs[j].psi) v *= norm_fix;
    }
    return pairs;
}

// One Chebyshev filter sweep on a single column: applies the degree-`deg`
// scaled Chebyshev polynomial of the shifted operator, mapping [a, up] to
// the suppressed interval (Zhou-Saad three-term recurrence with per-step
// scaling anchored at lam0 to avoid overflow).
void cheb_filter_column(const SparseHamiltonian& H, double sigma, int deg,
                        double lam0, double a, double up, double* x,
                        double* t1, double* t2, std::size_t N,
                        std::size_t& matvecs) {
    const double c = 0.5 * (a + up);
    const double hw = 0.5 * (up - a);
    double sig = hw / (c - lam0);
    const double sig1 = sig;
    // t1 = (sig1/hw) (A x - c x)
    H.apply(x, t1);
    ++matvecs;
    for (std::size_t i = 0; i < N; ++i)
        t1[i] = (sig1 / hw) * (t1[i] - (sigma + c) * x[i]);
    double* prev = x;  // T_{j-1} image
    double* cur = t1;  // T_j image
    double* next = t2;
    for (int j = 2; j <= deg; ++j) {
        const double sig_new = 1.0 / (2.0 / sig1 - sig);
        H.apply(cur, next);
        ++matvecs;
        const double scl = 2.0 * sig_new / hw;
        const double mix = sig * sig_new;
        for (std::size_t i = 0; i < N; ++i)
            next[i] = scl * (next[i] - (sigma + c) * cur[i]) - mix * prev[i];
        double* tmp = prev;
        prev = cur;
        cur = next;
        next = tmp;
        sig = sig_new;
    }
    if (cur != x) std::copy(cur, cur + N, x);
}

} // namespace

std::vector<GridEigenpair> lowest_eigenpairs(
    const SparseHamiltonian& H, std::size_t k, double tol, std::uint64_t seed,
    SolverStats* stats, const std::vector<std::vector<double>>* warm_start) {
    const std::size_t N = H.size();
    if (k == 0) throw InputError("lowest_eigenpairs: k must be >= 1");
    if (k > N) throw InputError("lowest_eigenpairs: k exceeds the matrix size");
    if (!(tol > 0.0)) throw InputError("lowest_eigenpairs: tol must be positive");

    const double scale = H.spectral_scale();
    const double tol_abs = tol * scale;

    if (N <= 2048) return dense_lowest(H, k, tol_abs);

    // Chebyshev-filtered block subspace iteration on the shifted
    // positive-definite operator. Each outer round performs an exact
    // Rayleigh-Ritz step with explicit residuals, then amplifies the lower
    // end of the spectrum with a fixed-degree Chebyshev polynomial.
    const double sigma = H.min_potential() - 1.0;
    // Gershgorin bound of the shifted operator (kinetic off-diagonals sum to
    // 2 d c/h^2 on top of the diagonal).
    double diag_max = -std::numeric_limits<double>::infinity();
    const double kin = 2.0 * double(H.grid().dimension) * H.kinetic_scale();
    for (double v : H.potential_values())
        diag_max = std::max(diag_max, kin + v - sigma);
    const double upper = diag_max + kin;

    const std::size_t b = std::min(N, k + 3);
    const int deg = 20;
    const std::size_t max_outer = 400;
    const std::size_t max_matvecs = 400000;

    std::vector<double> X(b * N), AX(b * N), scratch1(N), scratch2(N);
    auto xcol = [&](std::size_t j) { return X.data() + j * N; };
    auto axcol = [&](std::size_t j) { return AX.data() + j * N; };

    Rng rng(seed);
    std::size_t filled = 0;
    if (warm_start) {
        for (const auto& guess : *warm_start) {
            if (filled == b) break;
            if (guess.size() != N)
                throw InputError("lowest_eigenpairs: warm-start size mismatch");
            std::copy(guess.begin(), guess.end(), xcol(filled));
            ++filled;
        }
    }
    for (; filled < b; ++filled)
        for (std::size_t i = 0; i < N; ++i) xcol(filled)[i] = rng.symmetric();

    auto orthonormalize = [&]() {
        for (std::size_t j = 0; j < b; ++j) {
            double* v = xcol(j);
            for (int redraw = 0; redraw < 16; ++redraw) {
                for (int pass = 0; pass < 2; ++pass)
                    for (std::size_t i = 0; i < j; ++i)
                        axpy(-dot(xcol(i), v, N), xcol(i), v, N);
                const double nrm = norm2(v, N);
                if (nrm > 1e-10) {
                    for (std::size_t i = 0; i < N; ++i) v[i] /= nrm;
                    break;
                }
                for (std::size_t i = 0; i < N; ++i) v[i] = rng.symmetric();
            }
        }
    };

    std::size_t matvecs = 0;
    std::size_t outer = 0;
    std::vector<double> best_residuals;
    double best_worst = std::numeric_limits<double>::infinity();
    std::size_t stall = 0;

    std::vector<double> G(b * b), rot(b * N);
    while (outer++ < max_outer && matvecs < max_matvecs) {
        orthonormalize();
        for (std::size_t j = 0; j < b; ++j) {
            H.apply(xcol(j), axcol(j));
            ++matvecs;
            axpy(-sigma, xcol(j), axcol(j), N);
        }
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = i; j < b; ++j) {
                const double g = dot(xcol(i), axcol(j), N);
                G[i * b + j] = g;
                G[j * b + i] = g;
            }
        std::vector<double> theta(b), S(b * b);
        {
            std::vector<double> Gc = G;
            std::vector<lapack_int> isuppz(2 * b);
            lapack_int found = 0;
            const lapack_int info = LAPACKE_dsyevr(
                LAPACK_ROW_MAJOR, 'V', 'A', 'U', lapack_int(b), Gc.data(),
                lapack_int(b), 0.0, 0.0, 0, 0, 0.0, &found, theta.data(),
                S.data(), lapack_int(b), isuppz.data());
            if (info != 0 || std::size_t(found) != b)
                throw ConvergenceError(
                    "projected eigensolve failed (LAPACK info " +
                        std::to_string(info) + ")",
                    best_residuals);
        }
        // Rotate X and AX into the Ritz basis (S columns are eigenvectors).
        auto rotate = [&](std::vector<double>& M) {
            std::fill(rot.begin(), rot.end(), 0.0);
            for (std::size_t j = 0; j < b; ++j)
                for (std::size_t r = 0; r < b; ++r)
                    axpy(S[r * b + j], M.data() + r * N, rot.data() + j * N, N);
            M.swap(rot);
        };
        rotate(X);
        rotate(AX);

        std::vector<double> res(k);
        bool all_ok = true;
        for (std::size_t j = 0; j < k; ++j) {
            std::copy(axcol(j), axcol(j) + N, scratch1.data());
            axpy(-theta[j], xcol(j), scratch1.data(), N);
            res[j] = norm2(scratch1.data(), N);
            if (res[j] > tol_abs) all_ok = false;
        }
        const double worst = *std::max_element(res.begin(), res.end());
        if (worst < best_worst) {
            best_worst = worst;
            best_residuals = res;
            stall = 0;
        } else if (++stall > 25) {
            throw ConvergenceError(
                "eigensolver stagnated before reaching the residual tolerance",
                best_residuals);
        }
        if (all_ok) {
            const double h = H.grid().spacing();
            const double norm_fix =
                1.0 / std::pow(h, 0.5 * double(H.grid().dimension));
            std::vector<GridEigenpair> pairs(k);
            for (std::size_t j = 0; j < k; ++j) {
                pairs[j].energy = theta[j] + sigma;
                pairs[j].residual_norm = res[j];
                pairs[j].psi.assign(xcol(j), xcol(j) + N);
                for (double& v : pairs[j].psi) v *= norm_fix;
            }
            if (stats) {
                stats->matvecs = matvecs;
                stats->restarts = outer - 1;
                stats->basis_peak = b;
            }
            return pairs;
        }

        // Filter bounds: suppress [a, upper] where a sits just above the
        // largest Ritz value so the whole block keeps being amplified.
        double a = theta[b - 1] + 0.01 * (upper - theta[b - 1]);
        if (!(a > theta[0]) || !(a < upper))
            a = theta[0] + 0.5 * (upper - theta[0]);
        const double lam0 = theta[0] - 0.05 * (upper - theta[0]);
        for (std::size_t j = 0; j < b; ++j)
            cheb_filter_column(H, sigma, deg, lam0, a, upper, xcol(j),
                               scratch1.data(), scratch2.data(), N, matvecs);
    }
    throw ConvergenceError("eigensolver exceeded its iteration budget",
                           best_residuals);
}

std::vector<double> prolong(const CartesianGrid& from,
                            const std::vector<double>& psi,
                            const CartesianGrid& to) {
    if (from.dimension != to.dimension)
        throw InputError("prolong: grid dimensions differ");
    if (from.L != to.L)
        throw InputError("prolong: grids must share the same box");
    if (psi.size() != from.total())
        throw InputError("prolong: function size does not match the grid");
    const int d = from.dimension;
    const std::size_t nf = from.n;
    const std::size_t nt = to.n;
    // Per-axis interpolation tables in source index space; the walls carry
    // value zero (Dirichlet).
    std::vector<std::ptrdiff_t> left(nt);
    std::vector<double> frac(nt);
    const double ratio = to.spacing() / from.spacing();
    for (std::size_t j = 0; j < nt; ++j) {
        const double s = double(j + 1) * ratio - 1.0;
        left[j] = std::ptrdiff_t(std::floor(s));
        frac[j] = s - double(left[j]);
    }
    auto fetch = [&](std::ptrdiff_t ix, std::ptrdiff_t iy, std::ptrdiff_t iz) {
        if (ix < 0 || ix >= std::ptrdiff_t(nf)) return 0.0;
        if (d >= 2 && (iy < 0 || iy >= std::ptrdiff_t(nf))) return 0.0;
        if (d >= 3 && (iz < 0 || iz >= std::ptrdiff_t(nf))) return 0.0;
        std::size_t idx = std::size_t(ix);
        if (d >= 2) idx = idx * nf + std::size_t(iy);
        if (d >= 3) idx = idx * nf + std::size_t(iz);
        return psi[idx];
    };
    std::vector<double> out(to.total());
    const std::size_t ny = (d >= 2) ? nt : 1;
    const std::size_t nz = (d >= 3) ? nt : 1;
    std::size_t o = 0;
    for (std::size_t jx = 0; jx < nt; ++jx)
        for (std::size_t jy = 0; jy < ny; ++jy)
            for (std::size_t jz = 0; jz < nz; ++jz) {
                double acc = 0.0;
                for (int cx = 0; cx < 2; ++cx) {
                    const double wx = cx ? frac[jx] : 1.0 - frac[jx];
                    for (int cy = 0; cy < (d >= 2 ? 2 : 1); ++cy) {
                        const double wy =
                            d >= 2 ? (cy ? frac[jy] : 1.0 - frac[jy]) : 1.0;
                        for (int cz = 0; cz < (d >= 3 ? 2 : 1); ++cz) {
                            const double wz =
                                d >= 3 ? (cz ? frac[jz] : 1.0 - frac[jz]) : 1.0;
                            acc += wx * wy * wz *
                                   fetch(left[jx] + cx,
                                         d >= 2 ? left[jy] + cy : 0,
                                         d >= 3 ? left[jz] + cz : 0);
                        }
                    }
                }
                out[o++] = acc;
            }
    return out;
}


namespace {

bool same_level(double a, double b) {
    return std::abs(a - b) <= 1e-6 * std::max({std::abs(a), std::abs(b), 1.0});
}

// Index of the lowest level strictly above the ground degenerate cluster,
// or npos when every computed level sits in the cluster.
std::size_t first_excited_index(const std::vector<GridEigenpair>& pairs) {
    const double e0 = pairs.front().energy;
    std::size_t i = 1;
    while (i < pairs.size() && same_level(pairs[i].energy, e0)) ++i;
    return i < pairs.size() ? i : std::size_t(-1);
}

double boundary_over_max(const CartesianGrid& g, const std::vector<double>& psi) {
    const std::size_t n = g.n;
    const int d = g.dimension;
    double psi_max = 0.0;
    for (double v : psi) psi_max = std::max(psi_max, std::abs(v));
    if (psi_max == 0.0) return 0.0;
    double edge = 0.0;
    const std::size_t nx = (d >= 1) ? n : 1;
    const std::size_t ny = (d >= 2) ? n : 1;
    const std::size_t nz = (d >= 3) ? n : 1;
    std::size_t i = 0;
    for (std::size_t ix = 0; ix < nx; ++ix)
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t iz = 0; iz < nz; ++iz) {
                const bool on_edge =
                    ix == 0 || ix == nx - 1 ||
                    (d >= 2 && (iy == 0 || iy == ny - 1)) ||
                    (d >= 3 && (iz == 0 || iz == nz - 1));
                if (on_edge) edge = std::max(edge, std::abs(psi[i]));
                ++i;
            }
    return edge / psi_max;
}

LevelEstimate richardson(double e_coarse, double h_coarse, double e_fine,
                         double h_fine) {
    const double hc2 = h_coarse * h_coarse;
    const double hf2 = h_fine * h_fine;
    LevelEstimate est;
    est.value = (hc2 * e_fine - hf2 * e_coarse) / (hc2 - hf2);
    est.error = std::abs(est.value - e_fine);
    return est;
}

} // namespace

namespace {

TwoGridResult solve_two_levels_once(const PotentialField& field,
                                    const CartesianGrid& coarse,
                                    const CartesianGrid& fine, std::size_t k,
                                    double tol, std::uint64_t seed) {
    if (coarse.dimension != fine.dimension)
        throw InputError("solve_two_levels: grid dimensions differ");
    if (coarse.L != fine.L)
        throw InputError("solve_two_levels: both grids must share the same box");
    if (coarse.n >= fine.n)
        throw InputError("solve_two_levels: coarse grid must be coarser");
    if (k < 2)
        throw InputError("solve_two_levels: need k >= 2 to resolve E1");

    TwoGridResult out;
    out.fine_grid = fine;

    auto accumulate = [&](const SolverStats& s) {
        out.stats.matvecs += s.matvecs;
        out.stats.restarts += s.restarts;
        out.stats.basis_peak = std::max(out.stats.basis_peak, s.basis_peak);
    };
    auto warm_from = [&](const std::vector<GridEigenpair>& pairs,
                         const CartesianGrid& src, const CartesianGrid& dst) {
        std::vector<std::vector<double>> guesses;
        guesses.reserve(pairs.size());
        for (const GridEigenpair& pr : pairs)
            guesses.push_back(prolong(src, pr.psi, dst));
        return guesses;
    };

    // Cascade: a cheap pre-solve on a half-resolution grid seeds the coarse
    // solve, whose eigenvectors in turn seed the fine solve. This mainly
    // accelerates degenerate excited clusters, which a single Krylov vector
    // resolves only slowly.
    std::vector<GridEigenpair> pc;
    {
        SolverStats st;
        std::vector<std::vector<double>> warm;
        CartesianGrid pre = coarse;
        pre.n = coarse.n / 2;
        if (pre.n >= 12) {
            SparseHamiltonian hp(field, pre);
            const double pre_tol = std::max(tol, 1e-6);
            auto pp = lowest_eigenpairs(hp, k, pre_tol, seed, &st);
            accumulate(st);
            warm = warm_from(pp, pre, coarse);
        }
        SparseHamiltonian hc(field, coarse);
        pc = lowest_eigenpairs(hc, k, tol, seed, &st,
                               warm.empty() ? nullptr : &warm);
        accumulate(st);
    }
    {
        SolverStats st;
        auto warm = warm_from(pc, coarse, fine);
        SparseHamiltonian hf(field, fine);
        out.pairs = lowest_eigenpairs(hf, k, tol, seed, &st, &warm);
        accumulate(st);
    }

    out.e0 = richardson(pc.front().energy, coarse.spacing(),
                        out.pairs.front().energy, fine.spacing());

    const double e0f = out.pairs.front().energy;
    for (std::size_t i = 0; i < out.pairs.size(); ++i)
        if (same_level(out.pairs[i].energy, e0f)) out.ground_cluster.push_back(i);

    const std::size_t i1f = first_excited_index(out.pairs);
    const std::size_t i1c = first_excited_index(pc);
    if (i1f != std::size_t(-1) && i1c != std::size_t(-1)) {
        out.has_e1 = true;
        out.e1 = richardson(pc[i1c].energy, coarse.spacing(),
                            out.pairs[i1f].energy, fine.spacing());
    }

    // Wall check over the reported levels. For decaying potentials only
    // negative-energy states count: positive levels are box modes whose
    // profile is scale-free, so no finite enlargement could ever pass them.
    const bool decaying = decays_at_infinity(field.spec());
    const std::size_t last_reported =
        out.has_e1 ? i1f : out.ground_cluster.back();
    for (std::size_t i = 0; i <= last_reported; ++i) {
        if (decaying && out.pairs[i].energy >= 0.0) continue;
        out.boundary_ratio = std::max(
            out.boundary_ratio, boundary_over_max(fine, out.pairs[i].psi));
    }
    return out;
}

} // namespace

TwoGridResult solve_two_levels(const PotentialField& field,
                               const CartesianGrid& coarse,
                               const CartesianGrid& fine, std::size_t k,
                               double tol, std::uint64_t seed) {
    CartesianGrid c = coarse;
    CartesianGrid f = fine;
    for (int enlargements = 0;; ++enlargements) {
        TwoGridResult out = solve_two_levels_once(field, c, f, k, tol, seed);
        if (out.boundary_ratio <= kGridBoundaryTol || enlargements >= 2)
            return out;
        // Same rule as the radial solver: localized states must not touch
        // the wall, and the box grows at constant spacing (h = 2L/(n+1) is
        // invariant under L -> 2L, n -> 2n+1), keeping both grids in the
        // convergence regime their Richardson bar assumes. States so weakly
        // bound that they would need more points than the cap are returned
        // as-is with their boundary ratio on record.
        if (2 * f.n + 1 > kGridEnlargeCapN) return out;
        c.L *= 2.0;
        c.n = 2 * c.n + 1;
        f.L *= 2.0;
        f.n = 2 * f.n + 1;
    }
}

ExistenceEvidence bound_state_exists(const PotentialField& field,
                                     const CartesianGrid& coarse,
                                     const CartesianGrid& fine, double tol,
                                     std::uint64_t seed) {
    if (!decays_at_infinity(field.spec()))
        throw InputError(
            "bound_state_exists requires a potential that decays toward the "
            "box boundary");

    const TwoGridResult two = solve_two_levels(field, coarse, fine, 2, tol, seed);
    CartesianGrid big = two.fine_grid; // box possibly enlarged by the wall rule
    big.L *= 2.0;
    double e0_big = 0.0;
    {
        SparseHamiltonian hb(field, big);
        e0_big = lowest_eigenpairs(hb, 1, tol, seed).front().energy;
    }

    ExistenceEvidence ev;
    ev.e0 = two.e0;
    ev.e0_doubled_box = e0_big;
    // A level pinned by the box walls collapses roughly as 1/L² when the box
    // doubles (to about a quarter of its value); a genuine bound level only
    // drifts by the coarser discretization error.  Require the doubled-box
    // level to keep at least half the binding energy, with a small allowance
    // so near-zero levels are not misjudged by noise.
    ev.threshold = 10.0 * two.e0.error + 1e-10;
    const bool negative = two.e0.value + two.e0.error < 0.0;
    const bool stable = e0_big <= 0.5 * two.e0.value + ev.threshold;
    if (negative && e0_big < 0.0 && stable)
        ev.verdict = "true";
    else if (two.e0.value - two.e0.error > 0.0)
        ev.verdict = "false";
    else
        ev.verdict = "inconclusive";
    return ev;
}

} // namespace vbar
