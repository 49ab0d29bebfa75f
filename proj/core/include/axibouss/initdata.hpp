#pragma once

#include "axibouss/grid.hpp"

namespace axibouss {

/// Gaussian ring of azimuthal vorticity centred at (r0, z0) with width sigma.
struct VortexRingParams {
    double amplitude = 0.0;
    double r0 = 1.0;
    double z0 = 0.0;
    double sigma = 0.3;
};

/// Compact annular density bump on [r1, r2] x [z0 - h, z0 + h]; amplitude is its peak value.
struct AnnulusParams {
    double amplitude = 1.0;
    double r1 = 1.0;
    double r2 = 2.0;
    double z0 = 0.0;
    double h = 0.5;
};

/// A [G(r - r0) - G(r + r0)] G(z - z0): the odd image keeps omega_theta exactly zero on the axis.
ScalarField2D gaussian_vortex_ring(const VortexRingParams& p, const MeridionalGrid& grid);

/// Smooth compactly supported bump B(s) = exp(-1 / (s (1 - s))) on (0, 1), zero elsewhere.
double bump(double s) noexcept;

/// A B((r - r1)/(r2 - r1)) B((z - z0 + h)/(2h)). Throws InvalidParameter unless 0 < r1 < r2 and h > 0.
ScalarField2D annular_density(const AnnulusParams& p, const MeridionalGrid& grid);

/// Convolution with the radial kernel of radius 1/n (quintic-smoothstep profile, unit mass),
/// reduced exactly to the meridional plane by azimuthal quadrature. Kernel mass is normalized
/// discretely at every target node. Odd fields are treated as the azimuthal component of
/// a vector field. Requires 1/n >= 2 max(dr, dz).
ScalarField2D mollify(const ScalarField2D& f, int n);

} // namespace axibouss
