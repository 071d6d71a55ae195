#ifndef VBAR_SPHHARM_HPP
#define VBAR_SPHHARM_HPP

#include "vbar/quadrature.hpp"

namespace vbar {

/// Real spherical harmonic Y_{l,m} evaluated at a unit direction.
/// Convention: m > 0 -> sqrt(2) * N_lm * P_l^m(cos t) * cos(m p),
///             m < 0 -> sqrt(2) * N_l|m| * P_l^|m|(cos t) * sin(|m| p),
///             m = 0 -> N_l0 * P_l(cos t).
/// Orthonormal on the unit sphere. The l = 1 set is (p_y, p_z, p_x) for
/// m = (-1, 0, +1), i.e. sqrt(3/4pi) * (y, z, x) / r.
double real_sph_harm(int l, int m, const Point& direction);

/// Real circular harmonic in 2D, orthonormal on the unit circle:
/// m = 0 -> 1/sqrt(2 pi); m > 0 -> cos(m p)/sqrt(pi); m < 0 -> sin(|m| p)/sqrt(pi).
double circular_harm(int m, const Point& direction);

/// Orthonormal angular factor used by the solvers, dispatching on dimension:
/// 3D -> real_sph_harm(l, m), 2D -> circular_harm(m) (l ignored beyond |m|),
/// 1D -> parity factor 1/sqrt(2) (l = 0 even) or sign(x)/sqrt(2) (l = 1 odd).
double angular_factor(int dimension, int l, int m, const Point& direction);

/// Number of angular sub-states for channel l in the given dimension
/// (2l+1 in 3D; 1 for m=0 and 2 for |m|>=1 in 2D; 1 in 1D).
int channel_multiplicity(int dimension, int l);

} // namespace vbar

#endif
