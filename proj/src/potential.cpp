#include "vbar/potential.hpp"

#include "vbar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace vbar {

namespace {

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const std::string& what) {
    if (!ok) throw InputError(what);
}

double pow_int(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

// Multilinear interpolation on the rectilinear table, clamped to the box.
double eval_tabulated(const TabulatedGrid& t, int dim, const Point& p) {
    // Per-axis cell index and fractional offset.
    int i0[3] = {0, 0, 0};
    double f[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) {
        const double h = (t.x_max[a] - t.x_min[a]) / double(t.n[a] - 1);
        double s = (p[a] - t.x_min[a]) / h;
        if (s < 0.0) s = 0.0;
        const double s_max = double(t.n[a] - 1);
        if (s > s_max) s = s_max;
        int k = int(s);
        if (k > t.n[a] - 2) k = t.n[a] - 2;
        i0[a] = k;
        f[a] = s - double(k);
    }
    // Row-major strides, last axis fastest.
    std::int64_t stride[3] = {1, 1, 1};
    for (int a = dim - 2; a >= 0; --a) stride[a] = stride[a + 1] * t.n[a + 1];
    double acc = 0.0;
    const int corners = 1 << dim;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        std::int64_t idx = 0;
        for (int a = 0; a < dim; ++a) {
            const int bit = (c >> a) & 1;
            w *= bit ? f[a] : (1.0 - f[a]);
            idx += stride[a] * (i0[a] + bit);
        }
        acc += w * t.values[std::size_t(idx)];
    }
    return acc;
}

// Shortest length scale over which the potential varies noticeably; sets the
// average-table spacing.
double feature_length(const PotentialSpec& spec, double r_max) {
    double feat = r_max;
    switch (spec.family) {
    case Family::anisotropic_harmonic:
        for (double w : spec.omegas) feat = std::min(feat, 1.0 / w);
        break;
    case Family::gaussian_well_sum:
        for (const auto& g : spec.gaussians)
            for (double w : g.widths) feat = std::min(feat, w);
        break;
    case Family::polynomial_well:
        feat = r_max / 32.0;
        break;
    case Family::tabulated:
        for (int a = 0; a < spec.dimension; ++a) {
            const double h = (spec.table.x_max[a] - spec.table.x_min[a]) /
                             double(spec.table.n[a] - 1);
            feat = std::min(feat, h);
        }
        break;
    }
    return std::max(feat, 1e-6 * r_max);
}

} // namespace

std::string family_name(Family family) {
    switch (family) {
    case Family::anisotropic_harmonic: return "anisotropic_harmonic";
    case Family::gaussian_well_sum: return "gaussian_well_sum";
    case Family::polynomial_well: return "polynomial_well";
    case Family::tabulated: return "tabulated";
    }
    throw InputError("family_name: invalid family value");
}

Family family_from_name(const std::string& name) {
    if (name == "anisotropic_harmonic") return Family::anisotropic_harmonic;
    if (name == "gaussian_well_sum") return Family::gaussian_well_sum;
    if (name == "polynomial_well") return Family::polynomial_well;
    if (name == "tabulated") return Family::tabulated;
    throw InputError("unknown potential family '" + name + "'");
}

void validate(const PotentialSpec& spec) {
    require(spec.dimension >= 1 && spec.dimension <= 3,
            "dimension must be 1, 2 or 3");
    require(finite(spec.kinetic_coefficient) && spec.kinetic_coefficient > 0.0,
            "kinetic_coefficient must be a positive finite number");
    const std::size_t d = std::size_t(spec.dimension);
    switch (spec.family) {
    case Family::anisotropic_harmonic:
        require(spec.omegas.size() == d,
                "anisotropic_harmonic needs exactly one frequency per axis");
        for (double w : spec.omegas)
            require(finite(w) && w > 0.0, "harmonic frequencies must be positive");
        break;
    case Family::gaussian_well_sum:
        require(!spec.gaussians.empty(), "gaussian_well_sum needs at least one term");
        for (const auto& g : spec.gaussians) {
            require(finite(g.depth), "gaussian depth must be finite");
            require(g.widths.size() == d && g.center.size() == d,
                    "gaussian widths/center need exactly one entry per axis");
            for (double w : g.widths)
                require(finite(w) && w > 0.0, "gaussian widths must be positive");
            for (double c : g.center)
                require(finite(c), "gaussian centers must be finite");
        }
        break;
    case Family::polynomial_well:
        for (const auto& m : spec.monomials) {
            require(finite(m.coefficient), "monomial coefficient must be finite");
            require(m.powers.size() == d,
                    "monomial powers need exactly one entry per axis");
            for (int p : m.powers)
                require(p >= 0, "monomial powers must be non-negative");
        }
        break;
    case Family::tabulated: {
        const auto& t = spec.table;
        require(t.x_min.size() == d && t.x_max.size() == d && t.n.size() == d,
                "tabulated axes need exactly one (x_min, x_max, n) triple per axis");
        std::size_t total = 1;
        for (std::size_t a = 0; a < d; ++a) {
            require(finite(t.x_min[a]) && finite(t.x_max[a]) &&
                        t.x_max[a] > t.x_min[a],
                    "tabulated axis bounds must satisfy x_min < x_max");
            require(t.n[a] >= 2, "tabulated axes need at least 2 nodes");
            total *= std::size_t(t.n[a]);
        }
        require(t.values.size() == total,
                "tabulated values length must equal the product of axis counts");
        for (double v : t.values)
            require(finite(v), "tabulated values must be finite");
        break;
    }
    }
}

bool decays_at_infinity(const PotentialSpec& spec) {
    return spec.family == Family::gaussian_well_sum ||
           spec.family == Family::tabulated ||
           (spec.family == Family::polynomial_well && spec.monomials.empty());
}

double evaluate_point(const PotentialSpec& spec, const Point& p) {
    switch (spec.family) {
    case Family::anisotropic_harmonic: {
        // V = 1/2 m sum omega_i^2 x_i^2 with m = 1/(2 c), c = hbar^2/(2m).
        double s = 0.0;
        for (std::size_t a = 0; a < spec.omegas.size(); ++a)
            s += spec.omegas[a] * spec.omegas[a] * p[a] * p[a];
        return s / (4.0 * spec.kinetic_coefficient);
    }
    case Family::gaussian_well_sum: {
        double v = 0.0;
        for (const auto& g : spec.gaussians) {
            double e = 0.0;
            for (std::size_t a = 0; a < g.widths.size(); ++a) {
                const double dx = p[a] - g.center[a];
                e += dx * dx / (2.0 * g.widths[a] * g.widths[a]);
            }
            v += g.depth * std::exp(-e);
        }
        return v;
    }
    case Family::polynomial_well: {
        double v = 0.0;
        for (const auto& m : spec.monomials) {
            double t = m.coefficient;
            for (std::size_t a = 0; a < m.powers.size(); ++a)
                t *= pow_int(p[a], m.powers[a]);
            v += t;
        }
        return v;
    }
    case Family::tabulated:
        return eval_tabulated(spec.table, spec.dimension, p);
    }
    throw InputError("evaluate_point: invalid family value");
}

double evaluate(const PotentialSpec& spec, const std::vector<double>& point) {
    if (point.size() != std::size_t(spec.dimension))
        throw InputError("evaluate: point length does not match the dimension");
    Point p{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < point.size(); ++a) p[a] = point[a];
    return evaluate_point(spec, p);
}

double angular_average(const PotentialSpec& spec, const AngularQuadrature& quad,
                       double radius) {
    if (!(radius >= 0.0)) throw InputError("angular_average: radius must be >= 0");
    double acc = 0.0;
    for (const auto& node : quad.nodes()) {
        const Point p{radius * node.direction[0], radius * node.direction[1],
                      radius * node.direction[2]};
        acc += node.weight * evaluate_point(spec, p);
    }
    return acc / quad.solid_angle();
}

PotentialField::PotentialField(PotentialSpec spec, AngularQuadrature quad)
    : spec_(std::move(spec)), quad_(std::move(quad)) {
    validate(spec_);
    if (quad_.dimension() != spec_.dimension)
        throw InputError("PotentialField: quadrature dimension does not match the spec");
}

PotentialField::PotentialField(PotentialSpec spec, AngularQuadrature quad,
                               double r_max, std::size_t n_table)
    : PotentialField(std::move(spec), std::move(quad)) {
    if (!(r_max > 0.0)) throw InputError("PotentialField: r_max must be positive");
    if (n_table == 0) {
        const double h_target = feature_length(spec_, r_max) / 256.0;
        const double raw = std::ceil(r_max / h_target) + 1.0;
        n_table = std::size_t(std::clamp(raw, 4097.0, 40001.0));
    }
    if (n_table < 4) throw InputError("PotentialField: n_table must be >= 4");
    const double h = r_max / double(n_table - 1);
    std::vector<double> vals(n_table);
    for (std::size_t k = 0; k < n_table; ++k)
        vals[k] = angular_average(spec_, quad_, h * double(k));
    table_ = UniformTable(0.0, h, std::move(vals));
    double vmax = 0.0;
    for (double v : table_.values()) vmax = std::max(vmax, std::abs(v));
    scale_ = std::max(1.0, vmax);
}

PotentialField PotentialField::with_average_table(PotentialSpec spec,
                                                  AngularQuadrature quad,
                                                  UniformTable table) {
    PotentialField field(std::move(spec), std::move(quad));
    field.table_ = std::move(table);
    double vmax = 0.0;
    for (double v : field.table_.values()) vmax = std::max(vmax, std::abs(v));
    field.scale_ = std::max(1.0, vmax);
    return field;
}

double PotentialField::average(double r) const {
    if (!(r >= 0.0)) throw InputError("PotentialField::average: radius must be >= 0");
    if (r <= table_.x_max()) return table_(r);
    return angular_average(spec_, quad_, r);
}

double PotentialField::delta(const Point& p) const {
    const double r =
        std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return evaluate_point(spec_, p) - average(r);
}

double PotentialField::verify_zero_mean(const AngularQuadrature& probe,
                                        const std::vector<double>& radii,
                                        double tol_abs) const {
    if (radii.empty())
        throw InputError("verify_zero_mean: radii list must be non-empty");
    double worst = 0.0;
    double worst_r = radii.front();
    for (double r : radii) {
        if (!(r >= 0.0))
            throw InputError("verify_zero_mean: radii must be >= 0");
        const double vbar = average(r);
        double acc = 0.0;
        for (const auto& node : probe.nodes()) {
            const Point p{r * node.direction[0], r * node.direction[1],
                          r * node.direction[2]};
            acc += node.weight * (evaluate_point(spec_, p) - vbar);
        }
        if (std::abs(acc) > worst) {
            worst = std::abs(acc);
            worst_r = r;
        }
    }
    if (worst > tol_abs) {
        std::ostringstream oss;
        oss << "zero-mean check failed: |integral of (V - average) dOmega| = "
            << worst << " at radius " << worst_r << " exceeds tolerance "
            << tol_abs;
        throw DiagnosticError(oss.str());
    }
    return worst;
}

} // namespace vbar
