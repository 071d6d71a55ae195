#ifndef VBAR_INTERPOLATION_HPP
#define VBAR_INTERPOLATION_HPP

#include <cstddef>
#include <vector>

namespace vbar {

/// Function values sampled on the uniform grid x_k = x0 + k*h, interpolated
/// locally with a cubic Lagrange stencil (4 nearest nodes). Queries outside
/// [x0, x0 + (n-1)h] clamp to the boundary stencil, so mild extrapolation at
/// the table edge stays smooth instead of throwing.
class UniformTable {
public:
    UniformTable() = default;
    UniformTable(double x0, double h, std::vector<double> values);

    double x0() const { return x0_; }
    double step() const { return h_; }
    std::size_t size() const { return values_.size(); }
    double x_max() const { return x0_ + h_ * double(values_.size() - 1); }
    const std::vector<double>& values() const { return values_; }

    double operator()(double x) const;

private:
    double x0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> values_;
};

} // namespace vbar

#endif
