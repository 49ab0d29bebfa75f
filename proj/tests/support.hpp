#pragma once

// Independent reference machinery for the unit tests. Nothing here calls into the library
// except to read grid coordinates.

#include <cmath>
#include <functional>
#include <numbers>

#include <axibouss/grid.hpp>

namespace axt {

inline constexpr double kPi = std::numbers::pi;

// Adaptive Simpson with Richardson correction.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
    auto rec = [&](auto&& self, double a0, double b0, double fa, double fm, double fb, double whole, double eps,
                   int d) -> double {
        const double m = 0.5 * (a0 + b0);
        const double lm = 0.5 * (a0 + m), rm = 0.5 * (m + b0);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - a0) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b0 - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (d <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
        return self(self, a0, m, fa, flm, fm, left, 0.5 * eps, d - 1) +
               self(self, m, b0, fm, frm, fb, right, 0.5 * eps, d - 1);
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(rec, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, depth);
}

// 2 pi int_0^Lr int_-Lz^Lz f(r, z) r dz dr by nested adaptive quadrature.
inline double cylinder_integral(const std::function<double(double, double)>& f, double Lr, double Lz,
                                double tol = 1e-11) {
    return 2.0 * kPi * simpson([&](double r) { return r * simpson([&](double z) { return f(r, z); }, -Lz, Lz, tol); },
                               0.0, Lr, tol);
}

inline double max_abs_diff(const axibouss::ScalarField2D& a, const std::function<double(double, double)>& f,
                           std::size_t skip_r = 0) {
    const auto& g = a.grid();
    double e = 0.0;
    for (std::size_t i = skip_r; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.nz(); ++j) e = std::max(e, std::abs(a(i, j) - f(g.r(i), g.z(j))));
    return e;
}

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

} // namespace axt
