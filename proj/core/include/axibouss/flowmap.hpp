#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "axibouss/elliptic.hpp"
#include "axibouss/grid.hpp"

namespace axibouss {

struct Particle {
    double r = 0.0;
    double theta = 0.0;
    double z = 0.0;
    bool escaped = false;
};

/// Velocity as a function of time and meridional position.
class VelocitySource {
  public:
    virtual ~VelocitySource() = default;
    virtual MeridionalVelocity sample(double t, double r, double z) const = 0;
    virtual const MeridionalGrid& grid() const = 0;
    /// Throws InvalidInput if t is outside the stored time range.
    virtual void require(double t) const = 0;
};

/// One field for all times.
class FrozenVelocity final : public VelocitySource {
  public:
    explicit FrozenVelocity(VelocityField v) : v_(std::move(v)) {}
    MeridionalVelocity sample(double t, double r, double z) const override;
    const MeridionalGrid& grid() const override { return v_.grid(); }
    void require(double) const override {}

  private:
    VelocityField v_;
};

/// Snapshots at increasing times, linear in time between them.
class VelocityHistory final : public VelocitySource {
  public:
    explicit VelocityHistory(const MeridionalGrid& grid) : grid_(grid) {}
    /// Times must increase strictly.
    void push(double t, VelocityField v);
    /// Drops every frame but the newest.
    void keep_last();
    std::size_t size() const noexcept { return times_.size(); }

    MeridionalVelocity sample(double t, double r, double z) const override;
    const MeridionalGrid& grid() const override { return grid_; }
    void require(double t) const override;

  private:
    MeridionalGrid grid_;
    std::vector<double> times_;
    std::vector<VelocityField> frames_;
};

struct ParticleAdvance {
    std::vector<Particle> particles;
    std::size_t axis_clamps = 0;   // times a step ended at r < 0 and was clamped
    std::size_t newly_escaped = 0; // particles that left the grid during this call
};

/// Classical RK4 on (dr/dt, dz/dt) = (vr, vz) from t0 to t1 (either direction) with steps of
/// at most |dt|. Theta is never written. Escaped particles are frozen and skipped.
ParticleAdvance advance_particles(std::vector<Particle> particles, const VelocitySource& velocity, double t0,
                                  double t1, double dt);

/// Scalar time series, strictly increasing in t.
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> value;

    void push(double time, double v);
    /// Trapezoidal integral over [a, b], linear in t inside a sample interval.
    /// Throws InvalidInput when [a, b] is not covered.
    double integral(double a, double b) const;
};

struct AxisEnvelope {
    double lower;
    double observed;
    double upper;
};

/// r(x) exp(-+|int_s^t ||vr/r||_inf|) around the observed axis distance.
AxisEnvelope axis_distance_bounds_check(double r_initial, double r_observed, const TimeSeries& vr_over_r_sup,
                                        double s, double t);

struct SupportMetrics {
    double dist_to_axis = kInfinity;
    double z_diameter = 0.0;
    double threshold = 0.0;
    bool empty = true;
};

/// Support = nodes with |rho| > threshold. Distance to the axis is min r - dr/2,
/// the z-diameter is max z - min z + dz. Empty support gives dist = +inf.
SupportMetrics support_metrics(const ScalarField2D& rho, double threshold);

/// ||rho / r||_{L^2}^2 for an Even rho that vanishes on the axis row.
double rho_over_r_l2_sq(const ScalarField2D& rho);

struct RhoOverRBound {
    double lhs;
    double rhs;
    bool suspended;
};

/// lhs = ||rho/r||^2; rhs = ||rho0||^2 / r0^2 + 2 pi ||rho0||_inf^2 I_q (d0 + 2 I_v), with
/// I_q = int ||vr/r||_inf and I_v = int ||v||_inf. Suspended when the current support is
/// closer than 2 dr to the axis.
RhoOverRBound rho_over_r_bound_check(double rho_over_r_sq, double dist_to_axis, double dr, double rho0_l2,
                                     double rho0_linf, double r0, double d0, double int_vr_over_r,
                                     double int_speed);

/// Determinant of the 3D flow-map Jacobian at (r, z), from a particle triad with offset eps.
/// The azimuthal stretch r(t)/r(0) is included. The one-sided triad is biased by O(eps) times the
/// map's second derivatives, which are large after strong shear, hence the small default.
double flow_jacobian_det(const VelocitySource& velocity, double r, double z, double t0, double t1, double dt,
                         double eps = 1e-7);

void write_particles_csv_header(std::ostream& os);
void write_particles_csv_rows(std::ostream& os, double t, const std::vector<Particle>& particles);

} // namespace axibouss
