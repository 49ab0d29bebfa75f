#include "axibouss/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "axibouss/errors.hpp"
#include "axibouss/lpaley.hpp"

namespace axibouss {

ScalarField2D gaussian_vortex_ring(const VortexRingParams& p, const MeridionalGrid& grid) {
    if (!(p.r0 > 0.0) || !(p.sigma > 0.0)) throw InvalidParameter("vortex ring needs r0 > 0 and sigma > 0");
    const double inv_s2 = 1.0 / (p.sigma * p.sigma);
    return ScalarField2D::sample(grid, Parity::Odd, [&](double r, double z) {
        const double dz2 = (z - p.z0) * (z - p.z0);
        return p.amplitude * (std::exp(-((r - p.r0) * (r - p.r0) + dz2) * inv_s2) -
                              std::exp(-((r + p.r0) * (r + p.r0) + dz2) * inv_s2));
    });
}

double bump(double s) noexcept {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(-1.0 / (s * (1.0 - s)));
}

ScalarField2D annular_density(const AnnulusParams& p, const MeridionalGrid& grid) {
    if (!(p.r1 > 0.0))
        throw InvalidParameter("annular density needs r1 > 0: the initial density support must not touch the axis");
    if (!(p.r2 > p.r1)) throw InvalidParameter("annular density needs r2 > r1");
    if (!(p.h > 0.0)) throw InvalidParameter("annular density needs h > 0");
    const double width = p.r2 - p.r1;
    // each factor is scaled to 1 at its centre, so a node there carries exactly the amplitude
    const double top = bump(0.5);
    return ScalarField2D::sample(grid, Parity::Even, [&](double r, double z) {
        return p.amplitude * (bump((r - p.r1) / width) / top) * (bump((z - p.z0 + p.h) / (2.0 * p.h)) / top);
    });
}

namespace {

double kernel_profile(double s) noexcept {
    // s = |x| n in [0, 1]; stretch chi so its outer edge lands at s = 1.
    return CutoffPair::chi(s * CutoffPair::kOuter);
}

// Integral over theta in [0, 2 pi) of the kernel at distance
// sqrt(r^2 + r'^2 - 2 r r' cos theta + dz^2). With `vector_weight` the integrand carries
// cos theta, the projection of e_theta(theta) onto e_theta(0), as needed for omega_theta e_theta.
double azimuthal_kernel(double r, double rp, double dz, double radius, bool vector_weight) {
    constexpr int kNodes = 32;
    const double base = (r - rp) * (r - rp) + dz * dz;
    const double room = radius * radius - base;
    if (room <= 0.0) return 0.0;
    const double inv_radius = 1.0 / radius;
    if (r * rp == 0.0)
        return vector_weight ? 0.0 : 2.0 * std::numbers::pi * kernel_profile(std::sqrt(base) * inv_radius);
    const double bound = 1.0 - room / (2.0 * r * rp);
    const double theta_max = bound <= -1.0 ? std::numbers::pi : std::acos(bound);
    const double h = theta_max / kNodes;
    double acc = 0.0;
    for (int k = 0; k < kNodes; ++k) {
        const double theta = (k + 0.5) * h;
        const double d2 = base + 2.0 * r * rp * (1.0 - std::cos(theta));
        const double kv = kernel_profile(std::sqrt(std::max(d2, 0.0)) * inv_radius);
        acc += vector_weight ? kv * std::cos(theta) : kv;
    }
    return 2.0 * acc * h;
}

} // namespace

ScalarField2D mollify(const ScalarField2D& f, int n) {
    const auto& g = f.grid();
    if (n <= 0) throw InvalidParameter("mollifier index n must be positive");
    const double radius = 1.0 / n;
    if (radius < 2.0 * std::max(g.dr(), g.dz()))
        throw InvalidParameter("mollifier radius 1/n is not resolved: need 1/n >= 2 max(dr, dz)");

    const auto span_r = static_cast<long>(std::ceil(radius / g.dr()));
    const auto span_z = static_cast<long>(std::ceil(radius / g.dz()));
    const auto nr = static_cast<long>(g.nr());
    const auto nz = static_cast<long>(g.nz());

    const bool odd = f.parity() == Parity::Odd;
    ScalarField2D out(g, f.parity());
#ifdef AXIBOUSS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < nr; ++i) {
        const double r = g.r(static_cast<std::size_t>(i));
        for (long j = 0; j < nz; ++j) {
            double num = 0.0, den = 0.0;
            for (long ii = std::max(0L, i - span_r); ii <= std::min(nr - 1, i + span_r); ++ii) {
                const double rp = g.r(static_cast<std::size_t>(ii));
                if (rp == 0.0) continue; // zero measure in r dr
                for (long jj = std::max(0L, j - span_z); jj <= std::min(nz - 1, j + span_z); ++jj) {
                    const double dz = g.z(static_cast<std::size_t>(jj)) - g.z(static_cast<std::size_t>(j));
                    const double w = rp * azimuthal_kernel(r, rp, dz, radius, false);
                    if (w == 0.0) continue;
                    const double wn = odd ? rp * azimuthal_kernel(r, rp, dz, radius, true) : w;
                    num += wn * f(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj));
                    den += w;
                }
            }
            out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = den > 0.0 ? num / den : 0.0;
        }
    }
    out.enforce_parity();
    return out;
}

} // namespace axibouss
