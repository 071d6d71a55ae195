#include "vbar/interpolation.hpp"

#include "vbar/errors.hpp"

#include <cmath>

namespace vbar {

UniformTable::UniformTable(double x0, double h, std::vector<double> values)
    : x0_(x0), h_(h), values_(std::move(values)) {
    if (!(h_ > 0.0)) throw InputError("UniformTable: step must be positive");
    if (values_.size() < 4) throw InputError("UniformTable: need at least 4 nodes");
}

double UniformTable::operator()(double x) const {
    const std::ptrdiff_t n = std::ptrdiff_t(values_.size());
    const double t = (x - x0_) / h_;
    // Left end of the 4-point stencil, clamped into range.
    std::ptrdiff_t i0 = std::ptrdiff_t(std::floor(t)) - 1;
    if (i0 < 0) i0 = 0;
    if (i0 > n - 4) i0 = n - 4;
    const double s = t - double(i0); // local coordinate in [roughly 1, 2]
    // Cubic Lagrange weights on nodes {0, 1, 2, 3}.
    const double s0 = s, s1 = s - 1.0, s2 = s - 2.0, s3 = s - 3.0;
    const double w0 = -s1 * s2 * s3 / 6.0;
    const double w1 = s0 * s2 * s3 / 2.0;
    const double w2 = -s0 * s1 * s3 / 2.0;
    const double w3 = s0 * s1 * s2 / 6.0;
    return w0 * values_[i0] + w1 * values_[i0 + 1] + w2 * values_[i0 + 2] +
           w3 * values_[i0 + 3];
}

} // namespace vbar
