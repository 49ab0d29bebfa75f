#pragma once

#include "axibouss/grid.hpp"

namespace axibouss {

/// Bicubic (Catmull-Rom) interpolation of a meridional field at (r, z).
/// Negative r is reflected through the axis using the field parity; stencil
/// points past the outer boundaries are linearly extrapolated. Points outside
/// [0, Lr] x [-Lz, Lz] are clamped to the boundary.
double sample_bicubic(const ScalarField2D& f, double r, double z);

/// Nodes of the grid cell containing (r, z) after the same reflection and clamping.
struct CellCorners {
    std::size_t i0, j0; // lower-left node; the cell spans i0..i0+1, j0..j0+1
};
CellCorners containing_cell(const MeridionalGrid& g, double r, double z);

} // namespace axibouss
