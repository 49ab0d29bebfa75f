#include "axibouss/elliptic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "axibouss/errors.hpp"

namespace axibouss {

StreamSolver::StreamSolver(const MeridionalGrid& grid) : modal_(grid, MeridionalOperator::Stokes, 0.0, -1.0) {}

ScalarField2D StreamSolver::solve_streamfunction(const ScalarField2D& omega_theta) const {
    if (omega_theta.parity() != Parity::Odd) throw InvalidParity("streamfunction solve needs an Odd omega_theta");
    // shift 0, scale -1: E^2 Psi = -r omega.
    const auto& g = grid();
    ScalarField2D rhs(g, Parity::Odd);
    for (std::size_t i = 1; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.nz(); ++j) rhs.at(i, j) = -g.r(i) * omega_theta(i, j);
    return modal_.solve(rhs, Parity::Odd);
}

VelocityField StreamSolver::velocity(const ScalarField2D& omega_theta) const {
    return velocity_from_streamfunction(solve_streamfunction(omega_theta));
}

VelocityField velocity_from_streamfunction(const ScalarField2D& psi) {
    if (psi.parity() != Parity::Odd) throw InvalidParity("streamfunction must be Odd");
    const auto& g = psi.grid();

    const ScalarField2D dz_psi = d_dz(psi);
    ScalarField2D vr(g, Parity::Odd);
    for (std::size_t i = 1; i < g.nr(); ++i) {
        const double inv_r = 1.0 / g.r(i);
        for (std::size_t j = 0; j < g.nz(); ++j) vr.at(i, j) = -dz_psi(i, j) * inv_r;
    }

    // Psi ~ r^2 near the axis, so d_r Psi vanishes there and behaves as an Odd field.
    const ScalarField2D dr_even = d_dr(psi);
    std::vector<double> dr_vals(dr_even.values().begin(), dr_even.values().end());
    std::fill_n(dr_vals.begin(), g.nz(), 0.0);
    const ScalarField2D dr_psi(g, Parity::Odd, std::move(dr_vals));
    return VelocityField(std::move(vr), axis_quotient(dr_psi));
}

ScalarField2D vr_over_r(const VelocityField& v) { return axis_quotient(v.vr); }

MeridionalVelocity ring_filament_velocity(double kappa, double a, double z0, double r, double z) {
    const double zeta = z - z0;
    const double rho1_sq = (r - a) * (r - a) + zeta * zeta;
    const double rho2_sq = (r + a) * (r + a) + zeta * zeta;
    const double rho2 = std::sqrt(rho2_sq);
    const double k = std::min(std::sqrt(4.0 * a * r / rho2_sq), 1.0 - 1e-16);
    const double K = std::comp_ellint_1(k);
    const double E = std::comp_ellint_2(k);
    const double pref = kappa / (2.0 * std::numbers::pi * rho2);
    MeridionalVelocity out{};
    out.vz = pref * (K + (a * a - r * r - zeta * zeta) / rho1_sq * E);
    if (r > 1e-12 * a) out.vr = pref * zeta / r * (-K + (a * a + r * r + zeta * zeta) / rho1_sq * E);
    return out;
}

std::vector<MeridionalVelocity> biot_savart_direct(const ScalarField2D& omega_theta,
                                                   const std::vector<MeridionalPoint>& points) {
    if (omega_theta.parity() != Parity::Odd) throw InvalidParity("Biot-Savart integral needs an Odd omega_theta");
    const auto& g = omega_theta.grid();
    for (const auto& p : points) {
        if (!(p.r >= 0.0 && p.r < g.Lr() && p.z > -g.Lz() && p.z < g.Lz()))
            throw InvalidParameter("Biot-Savart evaluation point outside the grid interior");
    }
    const double exclusion = 0.75 * std::min(g.dr(), g.dz());
    const double cell = g.dr() * g.dz();

    std::vector<MeridionalVelocity> out(points.size());
#ifdef AXIBOUSS_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long n = 0; n < static_cast<long>(points.size()); ++n) {
        const auto& p = points[static_cast<std::size_t>(n)];
        double vr = 0.0, vz = 0.0;
        for (std::size_t i = 1; i < g.nr(); ++i) {
            const double wi = (i == g.nr() - 1) ? 0.5 : 1.0;
            const double a = g.r(i);
            for (std::size_t j = 0; j < g.nz(); ++j) {
                const double w = omega_theta(i, j);
                if (w == 0.0) continue;
                const double z0 = g.z(j);
                if (std::hypot(p.r - a, p.z - z0) < exclusion) continue;
                const double wj = (j == 0 || j == g.nz() - 1) ? 0.5 : 1.0;
                const auto u = ring_filament_velocity(w * wi * wj * cell, a, z0, p.r, p.z);
                vr += u.vr;
                vz += u.vz;
            }
        }
        out[static_cast<std::size_t>(n)] = {vr, vz};
    }
    return out;
}

double boundary_proximity(const ScalarField2D& omega_theta) {
    const auto& g = omega_theta.grid();
    const double peak = omega_theta.max_abs();
    if (peak == 0.0) return 0.0;
    double edge = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.nz(); ++j)
            if (g.r(i) > 0.75 * g.Lr() || std::abs(g.z(j)) > 0.75 * g.Lz())
                edge = std::max(edge, std::abs(omega_theta(i, j)));
    return edge / peak;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

void write_oracle_csv(std::ostream& os, const std::vector<MeridionalPoint>& points,
                      const std::vector<MeridionalVelocity>& v) {
    if (points.size() != v.size()) throw InvalidParameter("point and velocity counts differ");
    os << "r,z,vr,vz\n";
    for (std::size_t n = 0; n < points.size(); ++n)
        os << fmt(points[n].r) << ',' << fmt(points[n].z) << ',' << fmt(v[n].vr) << ',' << fmt(v[n].vz) << '\n';
}

} // namespace axibouss
