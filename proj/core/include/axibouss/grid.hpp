#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace axibouss {

/// Behaviour of a meridional field under the reflection r -> -r.
enum class Parity { Even = 0, Odd = 1 };

constexpr Parity flip(Parity p) noexcept { return p == Parity::Even ? Parity::Odd : Parity::Even; }
constexpr double parity_sign(Parity p) noexcept { return p == Parity::Even ? 1.0 : -1.0; }

/// Uniform node grid on [0, Lr] x [-Lz, Lz]. Row i = 0 is the symmetry axis.
class MeridionalGrid {
  public:
    MeridionalGrid(std::size_t nr, std::size_t nz, double Lr, double Lz);

    std::size_t nr() const noexcept { return nr_; }
    std::size_t nz() const noexcept { return nz_; }
    std::size_t size() const noexcept { return nr_ * nz_; }
    double Lr() const noexcept { return Lr_; }
    double Lz() const noexcept { return Lz_; }
    double dr() const noexcept { return dr_; }
    double dz() const noexcept { return dz_; }
    double r(std::size_t i) const noexcept { return static_cast<double>(i) * dr_; }
    double z(std::size_t j) const noexcept { return -Lz_ + static_cast<double>(j) * dz_; }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * nz_ + j; }

    friend bool operator==(const MeridionalGrid&, const MeridionalGrid&) = default;

  private:
    std::size_t nr_;
    std::size_t nz_;
    double Lr_;
    double Lz_;
    double dr_;
    double dz_;
};

/// Grid-sampled scalar with declared axis parity. Storage is r-major: values[i * nz + j].
/// Odd fields always carry exact zeros on the axis row.
class ScalarField2D {
  public:
    ScalarField2D(const MeridionalGrid& grid, Parity parity);
    /// Throws InvalidParameter on a size mismatch, a non-finite value, or a nonzero axis row
    /// for an Odd field.
    ScalarField2D(const MeridionalGrid& grid, Parity parity, std::vector<double> values);

    template <class F>
    static ScalarField2D sample(const MeridionalGrid& grid, Parity parity, F&& f) {
        ScalarField2D out(grid, parity);
        for (std::size_t i = 0; i < grid.nr(); ++i)
            for (std::size_t j = 0; j < grid.nz(); ++j)
                out.at(i, j) = f(grid.r(i), grid.z(j));
        out.enforce_parity();
        return out;
    }

    const MeridionalGrid& grid() const noexcept { return grid_; }
    Parity parity() const noexcept { return parity_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * grid_.nz() + j]; }
    double& at(std::size_t i, std::size_t j) noexcept { return values_[i * grid_.nz() + j]; }

    /// Zeroes the axis row of an Odd field.
    void enforce_parity() noexcept;
    bool is_finite() const noexcept;
    double max_abs() const noexcept;

    ScalarField2D& operator+=(const ScalarField2D& o);
    ScalarField2D& operator-=(const ScalarField2D& o);
    ScalarField2D& operator*=(double s) noexcept;

  private:
    MeridionalGrid grid_;
    Parity parity_;
    std::vector<double> values_;
};

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator*(double s, ScalarField2D a);

/// a*x + b*y with the parity of x (both must agree).
ScalarField2D linear_combination(double a, const ScalarField2D& x, double b, const ScalarField2D& y);

/// Axisymmetric no-swirl velocity: vr Odd, vz Even.
struct VelocityField {
    ScalarField2D vr;
    ScalarField2D vz;

    explicit VelocityField(const MeridionalGrid& grid)
        : vr(grid, Parity::Odd), vz(grid, Parity::Even) {}
    VelocityField(ScalarField2D vr_, ScalarField2D vz_);

    const MeridionalGrid& grid() const noexcept { return vr.grid(); }
    /// Nodewise max of sqrt(vr^2 + vz^2).
    double max_speed() const noexcept;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// 2*pi * integral of f r dr dz by the trapezoidal rule with nodal r weights.
double volume_integral(const ScalarField2D& f);

/// Cylindrically weighted 3D L^p norm; p = kInfinity gives the nodewise max.
double lp_norm(const ScalarField2D& f, double p);

/// Second-order d/dr. Centered in the interior, parity ghost at the axis,
/// one-sided at r = Lr. The result has the opposite parity.
ScalarField2D d_dr(const ScalarField2D& f);

/// Second-order d/dz, one-sided at z = +-Lz. Parity preserved.
ScalarField2D d_dz(const ScalarField2D& f);

/// (integral of (f_r)^2 + (f_z)^2 dx)^(1/2).
double h1_seminorm(const ScalarField2D& f);

/// f / r with the axis limit d_r f(0, z). Requires an Odd field; returns Even.
ScalarField2D axis_quotient(const ScalarField2D& f);

/// r * f for an Even field; returns Odd.
ScalarField2D multiply_by_r(const ScalarField2D& f);

/// 3D homogeneous H^1 norm of the vector field omega_theta e_theta:
/// (|grad omega_theta|^2 + |omega_theta / r|^2)^(1/2).
double azimuthal_vector_h1(const ScalarField2D& omega_theta);

/// (1/r) d_r(r vr) + d_z vz. Axis row uses 2 d_r vr.
ScalarField2D discrete_divergence(const VelocityField& v);

/// Squared L^2 norm of the 3D gradient of an axisymmetric no-swirl field:
/// |grad vr|^2 + |vr / r|^2 + |grad vz|^2.
double velocity_gradient_l2_sq(const VelocityField& v);

double velocity_l2(const VelocityField& v);

} // namespace axibouss
