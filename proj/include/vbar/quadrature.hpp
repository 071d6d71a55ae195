#ifndef VBAR_QUADRATURE_HPP
#define VBAR_QUADRATURE_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace vbar {

using Point = std::array<double, 3>;

/// Gauss-Legendre nodes/weights on [-1, 1], exact for polynomials of degree
/// 2n - 1.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

enum class QuadScheme { product_gauss_trapezoid, lebedev_like_fixed_order };

/// Direction set with weights covering the full solid angle of the given
/// dimension: 4*pi in 3D, 2*pi in 2D, and the two-point set {+1, -1} with
/// weight 1 each in 1D.
class AngularQuadrature {
public:
  struct Node {
    Point direction; // unit vector
    double weight;
  };

  /// Product rule: Gauss-Legendre in cos(theta) x uniform trapezoid in phi.
  /// polar_order is ignored in 2D and both orders are ignored in 1D.
  static AngularQuadrature product(int dimension, int polar_order, int azimuthal_order);

  /// Fixed 26-point octahedral rule (3D only), exact through degree 7.
  static AngularQuadrature lebedev_like(int dimension);

  int dimension() const { return dimension_; }
  QuadScheme scheme() const { return scheme_; }
  int polar_order() const { return polar_order_; }
  int azimuthal_order() const { return azimuthal_order_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  /// Total solid angle (4*pi, 2*pi, or 2).
  double solid_angle() const;

  double weight_sum() const;

  /// (1 / solid_angle) * sum_i w_i f(r * n_i) for a callable f(Point).
  template <class F>
  double average(const F& f, double radius) const {
    double acc = 0.0;
    for (const Node& nd : nodes_) {
      acc += nd.weight * f(Point{radius * nd.direction[0], radius * nd.direction[1],
                                 radius * nd.direction[2]});
    }
    return acc / solid_angle();
  }

private:
  int dimension_ = 3;
  QuadScheme scheme_ = QuadScheme::product_gauss_trapezoid;
  int polar_order_ = 0;
  int azimuthal_order_ = 0;
  std::vector<Node> nodes_;
};

} // namespace vbar

#endif
