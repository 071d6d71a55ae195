#include "vbar/sphharm.hpp"

#include "vbar/errors.hpp"

#include <cmath>

namespace vbar {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Associated Legendre P_l^m(x) without the Condon-Shortley phase, computed by
// the standard stable recurrences (upward in l at fixed m).
double assoc_legendre(int l, int m, double x) {
    // P_m^m = (2m-1)!! (1 - x^2)^{m/2}
    double pmm = 1.0;
    if (m > 0) {
        const double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
        double fact = 1.0;
        for (int i = 0; i < m; ++i) {
            pmm *= fact * somx2;
            fact += 2.0;
        }
    }
    if (l == m) return pmm;
    double pmmp1 = x * (2.0 * m + 1.0) * pmm; // P_{m+1}^m
    if (l == m + 1) return pmmp1;
    double pll = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

// sqrt((2l+1)/(4pi) * (l-m)!/(l+m)!)
double norm_lm(int l, int m) {
    double log_ratio = 0.0;
    for (int k = l - m + 1; k <= l + m; ++k) log_ratio += std::log(double(k));
    return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * std::exp(-log_ratio));
}

} // namespace

double real_sph_harm(int l, int m, const Point& direction) {
    if (l < 0) throw InputError("real_sph_harm: l must be non-negative");
    const int am = std::abs(m);
    if (am > l) throw InputError("real_sph_harm: |m| must not exceed l");
    const double x = direction[0];
    const double y = direction[1];
    const double z = direction[2];
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r == 0.0) throw InputError("real_sph_harm: zero direction vector");
    const double ct = z / r;
    const double base = norm_lm(l, am) * assoc_legendre(l, am, ct);
    if (m == 0) return base;
    const double phi = std::atan2(y, x);
    const double ang = (m > 0) ? std::cos(am * phi) : std::sin(am * phi);
    return std::sqrt(2.0) * base * ang;
}

double circular_harm(int m, const Point& direction) {
    const double x = direction[0];
    const double y = direction[1];
    if (x == 0.0 && y == 0.0) throw InputError("circular_harm: zero direction vector");
    if (m == 0) return 1.0 / std::sqrt(2.0 * kPi);
    const double phi = std::atan2(y, x);
    const int am = std::abs(m);
    const double ang = (m > 0) ? std::cos(am * phi) : std::sin(am * phi);
    return ang / std::sqrt(kPi);
}

double angular_factor(int dimension, int l, int m, const Point& direction) {
    switch (dimension) {
    case 3:
        return real_sph_harm(l, m, direction);
    case 2:
        return circular_harm(m, direction);
    case 1: {
        const double x = direction[0];
        if (x == 0.0) throw InputError("angular_factor: zero direction vector");
        if (l % 2 == 0) return 1.0 / std::sqrt(2.0);
        return (x > 0.0 ? 1.0 : -1.0) / std::sqrt(2.0);
    }
    default:
        throw InputError("angular_factor: dimension must be 1, 2 or 3");
    }
}

int channel_multiplicity(int dimension, int l) {
    if (l < 0) throw InputError("channel_multiplicity: l must be non-negative");
    switch (dimension) {
    case 3:
        return 2 * l + 1;
    case 2:
        return l == 0 ? 1 : 2;
    case 1:
        return 1;
    default:
        throw InputError("channel_multiplicity: dimension must be 1, 2 or 3");
    }
}

} // namespace vbar
