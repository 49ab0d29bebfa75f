#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "axibouss/grid.hpp"

namespace axibouss {

/// Binary snapshot layout (little-endian):
///   16-byte magic "AXIBOUSS-FLD\0\0\0\1"
///   u32 nr, u32 nz, f64 Lr, f64 Lz, u8 parity (0 Even, 1 Odd)
///   nr*nz f64 values, r-major.
inline constexpr std::array<char, 16> kFieldMagic = {'A', 'X', 'I', 'B', 'O', 'U', 'S', 'S',
                                                     '-', 'F', 'L', 'D', '\0', '\0', '\0', '\1'};

void write_field(std::ostream& os, const ScalarField2D& f);
ScalarField2D read_field(std::istream& is);

void save_field(const std::string& path, const ScalarField2D& f);
ScalarField2D load_field(const std::string& path);

/// `snap_t<time>_<name>.fld` with time printed in shortest round-trip form.
std::string snapshot_filename(double t, const std::string& name);

} // namespace axibouss
