#include "axibouss/interp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace axibouss {

namespace {

std::array<double, 4> catmull_rom_weights(double t) {
    const double t2 = t * t, t3 = t2 * t;
    return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0), 0.5 * (-3.0 * t3 + 4.0 * t2 + t),
            0.5 * (t3 - t2)};
}

struct Located {
    std::size_t i0, j0;
    double tr, tz;
    double sign;
};

Located locate(const MeridionalGrid& g, Parity parity, double r, double z) {
    double sign = 1.0;
    if (r < 0.0) {
        r = -r;
        sign = parity_sign(parity);
    }
    r = std::clamp(r, 0.0, g.Lr());
    z = std::clamp(z, -g.Lz(), g.Lz());
    const double x = r / g.dr();
    const double y = (z + g.Lz()) / g.dz();
    const auto i0 = static_cast<std::size_t>(std::min(std::floor(x), static_cast<double>(g.nr() - 2)));
    const auto j0 = static_cast<std::size_t>(std::min(std::floor(y), static_cast<double>(g.nz() - 2)));
    return {i0, j0, x - static_cast<double>(i0), y - static_cast<double>(j0), sign};
}

} // namespace

CellCorners containing_cell(const MeridionalGrid& g, double r, double z) {
    const Located loc = locate(g, Parity::Even, r, z);
    return {loc.i0, loc.j0};
}

double sample_bicubic(const ScalarField2D& f, double r, double z) {
    const auto& g = f.grid();
    const Located loc = locate(g, f.parity(), r, z);
    const double ps = parity_sign(f.parity());
    const auto nr = static_cast<long>(g.nr());
    const auto nz = static_cast<long>(g.nz());

    auto in_r = [&](long i, std::size_t j) -> double {
        if (i < 0) return ps * f(static_cast<std::size_t>(-i), j);
        if (i >= nr) return 2.0 * f(g.nr() - 1, j) - f(g.nr() - 2, j);
        return f(static_cast<std::size_t>(i), j);
    };
    auto value = [&](long i, long j) -> double {
        if (j < 0) return 2.0 * in_r(i, 0) - in_r(i, 1);
        if (j >= nz) return 2.0 * in_r(i, g.nz() - 1) - in_r(i, g.nz() - 2);
        return in_r(i, static_cast<std::size_t>(j));
    };

    const auto wr = catmull_rom_weights(loc.tr);
    const auto wz = catmull_rom_weights(loc.tz);
    const long i0 = static_cast<long>(loc.i0), j0 = static_cast<long>(loc.j0);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double row = 0.0;
        for (int b = 0; b < 4; ++b) row += wz[b] * value(i0 - 1 + a, j0 - 1 + b);
        acc += wr[a] * row;
    }
    return loc.sign * acc;
}

} // namespace axibouss
