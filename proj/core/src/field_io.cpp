#include "axibouss/field_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "axibouss/errors.hpp"

namespace axibouss {

namespace {

template <class T>
void put_le(std::ostream& os, T value) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    os.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& is) {
    std::array<char, sizeof(T)> bytes;
    if (!is.read(bytes.data(), bytes.size())) throw IoError("truncated field snapshot");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

} // namespace

void write_field(std::ostream& os, const ScalarField2D& f) {
    const auto& g = f.grid();
    os.write(kFieldMagic.data(), kFieldMagic.size());
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.nr()));
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.nz()));
    put_le<double>(os, g.Lr());
    put_le<double>(os, g.Lz());
    put_le<std::uint8_t>(os, f.parity() == Parity::Odd ? 1 : 0);
    for (double v : f.values()) put_le<double>(os, v);
    if (!os) throw IoError("failed writing field snapshot");
}

ScalarField2D read_field(std::istream& is) {
    std::array<char, 16> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kFieldMagic) throw IoError("bad field snapshot magic");
    const auto nr = get_le<std::uint32_t>(is);
    const auto nz = get_le<std::uint32_t>(is);
    const double Lr = get_le<double>(is);
    const double Lz = get_le<double>(is);
    const auto parity = get_le<std::uint8_t>(is);
    if (parity > 1) throw IoError("bad parity byte in field snapshot");
    MeridionalGrid grid(nr, nz, Lr, Lz);
    std::vector<double> values(grid.size());
    for (double& v : values) v = get_le<double>(is);
    return ScalarField2D(grid, parity == 1 ? Parity::Odd : Parity::Even, std::move(values));
}

void save_field(const std::string& path, const ScalarField2D& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_field(os, f);
}

ScalarField2D load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    return read_field(is);
}

std::string snapshot_filename(double t, const std::string& name) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), t);
    return "snap_t" + std::string(buf, res.ptr) + "_" + name + ".fld";
}

} // namespace axibouss
