#include "axibouss/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "axibouss/errors.hpp"

namespace axibouss {

MeridionalGrid::MeridionalGrid(std::size_t nr, std::size_t nz, double Lr, double Lz)
    : nr_(nr), nz_(nz), Lr_(Lr), Lz_(Lz) {
    if (nr < 8 || nz < 8)
        throw InvalidParameter("grid needs nr >= 8 and nz >= 8, got " + std::to_string(nr) + "x" +
                               std::to_string(nz));
    if (!(Lr > 0.0) || !(Lz > 0.0) || !std::isfinite(Lr) || !std::isfinite(Lz))
        throw InvalidParameter("grid extents Lr, Lz must be positive and finite");
    dr_ = Lr / static_cast<double>(nr - 1);
    dz_ = 2.0 * Lz / static_cast<double>(nz - 1);
}

ScalarField2D::ScalarField2D(const MeridionalGrid& grid, Parity parity)
    : grid_(grid), parity_(parity), values_(grid.size(), 0.0) {}

ScalarField2D::ScalarField2D(const MeridionalGrid& grid, Parity parity, std::vector<double> values)
    : grid_(grid), parity_(parity), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw InvalidParameter("field size " + std::to_string(values_.size()) + " does not match grid " +
                               std::to_string(grid_.size()));
    if (!is_finite()) throw InvalidParameter("field contains non-finite values");
    if (parity_ == Parity::Odd) {
        for (std::size_t j = 0; j < grid_.nz(); ++j)
            if (values_[j] != 0.0) throw InvalidParameter("odd field must vanish on the axis row");
    }
}

void ScalarField2D::enforce_parity() noexcept {
    if (parity_ == Parity::Odd) std::fill_n(values_.begin(), grid_.nz(), 0.0);
}

bool ScalarField2D::is_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField2D::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

void require_compatible(const ScalarField2D& a, const ScalarField2D& b) {
    if (!(a.grid() == b.grid())) throw InvalidParameter("fields live on different grids");
    if (a.parity() != b.parity()) throw InvalidParity("fields have different parity");
}

} // namespace

ScalarField2D& ScalarField2D::operator+=(const ScalarField2D& o) {
    require_compatible(*this, o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
}

ScalarField2D& ScalarField2D::operator-=(const ScalarField2D& o) {
    require_compatible(*this, o);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
}

ScalarField2D& ScalarField2D::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b) { return a += b; }
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b) { return a -= b; }
ScalarField2D operator*(double s, ScalarField2D a) { return a *= s; }

ScalarField2D linear_combination(double a, const ScalarField2D& x, double b, const ScalarField2D& y) {
    require_compatible(x, y);
    ScalarField2D out(x.grid(), x.parity());
    auto xo = x.values();
    auto yo = y.values();
    auto oo = out.values();
    for (std::size_t k = 0; k < oo.size(); ++k) oo[k] = a * xo[k] + b * yo[k];
    return out;
}

VelocityField::VelocityField(ScalarField2D vr_, ScalarField2D vz_) : vr(std::move(vr_)), vz(std::move(vz_)) {
    if (!(vr.grid() == vz.grid())) throw InvalidParameter("velocity components on different grids");
    if (vr.parity() != Parity::Odd || vz.parity() != Parity::Even)
        throw InvalidParity("velocity requires vr Odd and vz Even");
}

double VelocityField::max_speed() const noexcept {
    double m = 0.0;
    auto a = vr.values();
    auto b = vz.values();
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::hypot(a[k], b[k]));
    return m;
}

double volume_integral(const ScalarField2D& f) {
    const auto& g = f.grid();
    const std::size_t nr = g.nr(), nz = g.nz();
    double total = 0.0;
    // Axis row has zero weight.
    for (std::size_t i = 1; i < nr; ++i) {
        const double wr = (i == nr - 1 ? 0.5 : 1.0) * g.r(i);
        double row = 0.5 * (f(i, 0) + f(i, nz - 1));
        for (std::size_t j = 1; j + 1 < nz; ++j) row += f(i, j);
        total += wr * row;
    }
    return 2.0 * std::numbers::pi * total * g.dr() * g.dz();
}

double lp_norm(const ScalarField2D& f, double p) {
    if (std::isnan(p) || p < 1.0) throw InvalidParameter("lp_norm requires p >= 1 or p = infinity");
    if (std::isinf(p)) return f.max_abs();
    ScalarField2D powf(f.grid(), Parity::Even);
    auto src = f.values();
    auto dst = powf.values();
    if (p == 2.0) {
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k] * src[k];
    } else {
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] = std::pow(std::abs(src[k]), p);
    }
    const double integral = volume_integral(powf);
    return p == 2.0 ? std::sqrt(integral) : std::pow(integral, 1.0 / p);
}

ScalarField2D d_dr(const ScalarField2D& f) {
    const auto& g = f.grid();
    const std::size_t nr = g.nr(), nz = g.nz();
    const double inv2 = 0.5 / g.dr();
    const double sign = parity_sign(f.parity());
    ScalarField2D out(g, flip(f.parity()));
    for (std::size_t j = 0; j < nz; ++j) out.at(0, j) = (f(1, j) - sign * f(1, j)) * inv2;
    for (std::size_t i = 1; i + 1 < nr; ++i)
        for (std::size_t j = 0; j < nz; ++j) out.at(i, j) = (f(i + 1, j) - f(i - 1, j)) * inv2;
    const std::size_t n = nr - 1;
    for (std::size_t j = 0; j < nz; ++j)
        out.at(n, j) = (3.0 * f(n, j) - 4.0 * f(n - 1, j) + f(n - 2, j)) * inv2;
    out.enforce_parity();
    return out;
}

ScalarField2D d_dz(const ScalarField2D& f) {
    const auto& g = f.grid();
    const std::size_t nr = g.nr(), nz = g.nz();
    const double inv2 = 0.5 / g.dz();
    ScalarField2D out(g, f.parity());
    for (std::size_t i = 0; i < nr; ++i) {
        out.at(i, 0) = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) * inv2;
        for (std::size_t j = 1; j + 1 < nz; ++j) out.at(i, j) = (f(i, j + 1) - f(i, j - 1)) * inv2;
        const std::size_t m = nz - 1;
        out.at(i, m) = (3.0 * f(i, m) - 4.0 * f(i, m - 1) + f(i, m - 2)) * inv2;
    }
    out.enforce_parity();
    return out;
}

namespace {

double gradient_sq_integral(const ScalarField2D& f) {
    const ScalarField2D fr = d_dr(f);
    const ScalarField2D fz = d_dz(f);
    ScalarField2D sq(f.grid(), Parity::Even);
    auto a = fr.values();
    auto b = fz.values();
    auto s = sq.values();
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = a[k] * a[k] + b[k] * b[k];
    return volume_integral(sq);
}

} // namespace

double h1_seminorm(const ScalarField2D& f) { return std::sqrt(gradient_sq_integral(f)); }

ScalarField2D axis_quotient(const ScalarField2D& f) {
    if (f.parity() != Parity::Odd) throw InvalidParity("axis_quotient needs an Odd field");
    const auto& g = f.grid();
    const std::size_t nr = g.nr(), nz = g.nz();
    ScalarField2D out(g, Parity::Even);
    const double inv2 = 0.5 / g.dr();
    // f(0, z) = 0, so the one-sided limit is (4 f_1 - f_2) / (2 dr).
    for (std::size_t j = 0; j < nz; ++j) out.at(0, j) = (4.0 * f(1, j) - f(2, j)) * inv2;
    for (std::size_t i = 1; i < nr; ++i) {
        const double inv_r = 1.0 / g.r(i);
        for (std::size_t j = 0; j < nz; ++j) out.at(i, j) = f(i, j) * inv_r;
    }
    return out;
}

ScalarField2D multiply_by_r(const ScalarField2D& f) {
    if (f.parity() != Parity::Even) throw InvalidParity("multiply_by_r needs an Even field");
    const auto& g = f.grid();
    ScalarField2D out(g, Parity::Odd);
    for (std::size_t i = 1; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.nz(); ++j) out.at(i, j) = g.r(i) * f(i, j);
    return out;
}

double azimuthal_vector_h1(const ScalarField2D& omega_theta) {
    if (omega_theta.parity() != Parity::Odd) throw InvalidParity("azimuthal_vector_h1 needs an Odd field");
    const double grad = gradient_sq_integral(omega_theta);
    const double q = lp_norm(axis_quotient(omega_theta), 2.0);
    return std::sqrt(grad + q * q);
}

ScalarField2D discrete_divergence(const VelocityField& v) {
    const auto& g = v.grid();
    // The parity label of r*vr only affects the axis row, which is overwritten below.
    ScalarField2D rvr = v.vr;
    for (std::size_t i = 0; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.nz(); ++j) rvr.at(i, j) = g.r(i) * v.vr(i, j);
    const ScalarField2D d_rvr = d_dr(rvr);
    const ScalarField2D dvz = d_dz(v.vz);
    ScalarField2D out(g, Parity::Even);
    for (std::size_t j = 0; j < g.nz(); ++j) out.at(0, j) = 2.0 * v.vr(1, j) / g.dr() + dvz(0, j);
    for (std::size_t i = 1; i < g.nr(); ++i) {
        const double inv_r = 1.0 / g.r(i);
        for (std::size_t j = 0; j < g.nz(); ++j) out.at(i, j) = d_rvr(i, j) * inv_r + dvz(i, j);
    }
    return out;
}

double velocity_gradient_l2_sq(const VelocityField& v) {
    const double q = lp_norm(axis_quotient(v.vr), 2.0);
    return gradient_sq_integral(v.vr) + q * q + gradient_sq_integral(v.vz);
}

double velocity_l2(const VelocityField& v) {
    const double a = lp_norm(v.vr, 2.0);
    const double b = lp_norm(v.vz, 2.0);
    return std::sqrt(a * a + b * b);
}

} // namespace axibouss
