#include "vbar/quadrature.hpp"

#include "vbar/errors.hpp"

#include <cmath>
#include <numbers>

namespace vbar {

namespace {
constexpr double kPi = std::numbers::pi;
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw InputError("gauss_legendre: order must be >= 1");
  GaussLegendre q;
  q.nodes.resize(n);
  q.weights.resize(n);
  // Newton iteration on P_n, Chebyshev initial guess. Symmetric pairs filled
  // together so the node set is exactly symmetric.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Bonnet recurrence for P_n(x) and P'_n(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;
  return q;
}

AngularQuadrature AngularQuadrature::product(int dimension, int polar_order,
                                             int azimuthal_order) {
  AngularQuadrature aq;
  aq.dimension_ = dimension;
  aq.scheme_ = QuadScheme::product_gauss_trapezoid;
  aq.polar_order_ = polar_order;
  aq.azimuthal_order_ = azimuthal_order;
  switch (dimension) {
    case 1:
      aq.nodes_ = {{Point{1.0, 0.0, 0.0}, 1.0}, {Point{-1.0, 0.0, 0.0}, 1.0}};
      break;
    case 2: {
      if (azimuthal_order < 8) throw InputError("azimuthal_order must be >= 8");
      const double w = 2.0 * kPi / azimuthal_order;
      aq.nodes_.reserve(azimuthal_order);
      for (int j = 0; j < azimuthal_order; ++j) {
        double phi = 2.0 * kPi * j / azimuthal_order;
        aq.nodes_.push_back({Point{std::cos(phi), std::sin(phi), 0.0}, w});
      }
      break;
    }
    case 3: {
      if (polar_order < 4) throw InputError("polar_order must be >= 4");
      if (azimuthal_order < 8) throw InputError("azimuthal_order must be >= 8");
      GaussLegendre gl = gauss_legendre(polar_order);
      const double wphi = 2.0 * kPi / azimuthal_order;
      aq.nodes_.reserve(static_cast<std::size_t>(polar_order) * azimuthal_order);
      for (int i = 0; i < polar_order; ++i) {
        const double ct = gl.nodes[i];
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        for (int j = 0; j < azimuthal_order; ++j) {
          double phi = 2.0 * kPi * j / azimuthal_order;
          aq.nodes_.push_back(
              {Point{st * std::cos(phi), st * std::sin(phi), ct}, gl.weights[i] * wphi});
        }
      }
      break;
    }
    default:
      throw InputError("dimension must be 1, 2 or 3");
  }
  return aq;
}

AngularQuadrature AngularQuadrature::lebedev_like(int dimension) {
  if (dimension != 3)
    throw InputError("lebedev_like_fixed_order scheme is defined in 3D only");
  AngularQuadrature aq;
  aq.dimension_ = 3;
  aq.scheme_ = QuadScheme::lebedev_like_fixed_order;
  aq.polar_order_ = 4; // degree-7 rule: comparable to a 4-point polar product rule
  aq.azimuthal_order_ = 8;
  // 26-point octahedral rule: vertices, edge midpoints, face centers of the
  // cube/octahedron pair. Exact through degree 7.
  const double wa = 4.0 * kPi / 21.0;       // 6 axis points
  const double wb = 4.0 * kPi * 4.0 / 105.0; // 12 edge points
  const double wc = 4.0 * kPi * 27.0 / 840.0; // 8 corner points
  const double s2 = 1.0 / std::sqrt(2.0);
  const double s3 = 1.0 / std::sqrt(3.0);
  for (int axis = 0; axis < 3; ++axis) {
    for (double sgn : {1.0, -1.0}) {
      Point p{0, 0, 0};
      p[axis] = sgn;
      aq.nodes_.push_back({p, wa});
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (double sa : {1.0, -1.0}) {
        for (double sb : {1.0, -1.0}) {
          Point p{0, 0, 0};
          p[a] = sa * s2;
          p[b] = sb * s2;
          aq.nodes_.push_back({p, wb});
        }
      }
    }
  }
  for (double sx : {1.0, -1.0})
    for (double sy : {1.0, -1.0})
      for (double sz : {1.0, -1.0})
        aq.nodes_.push_back({Point{sx * s3, sy * s3, sz * s3}, wc});
  return aq;
}

double AngularQuadrature::solid_angle() const {
  switch (dimension_) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    default: return 4.0 * kPi;
  }
}

double AngularQuadrature::weight_sum() const {
  double s = 0.0;
  for (const Node& n : nodes_) s += n.weight;
  return s;
}

} // namespace vbar
