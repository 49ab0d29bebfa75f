#pragma once

#include <iosfwd>
#include <vector>

#include "axibouss/grid.hpp"
#include "axibouss/modal_solver.hpp"

namespace axibouss {

struct MeridionalPoint {
    double r;
    double z;
};

struct MeridionalVelocity {
    double vr;
    double vz;
};

/// Stokes streamfunction solver: E^2 Psi = -r omega_theta with Psi = 0 on r = 0, r = Lr, z = +-Lz.
class StreamSolver {
  public:
    explicit StreamSolver(const MeridionalGrid& grid);

    /// Returns Psi (Odd). Throws InvalidParity unless omega_theta is Odd.
    ScalarField2D solve_streamfunction(const ScalarField2D& omega_theta) const;

    /// Streamfunction solve followed by velocity_from_streamfunction.
    VelocityField velocity(const ScalarField2D& omega_theta) const;

    const MeridionalGrid& grid() const noexcept { return modal_.grid(); }

  private:
    ModalSolver modal_;
};

/// vr = -(1/r) d_z Psi, vz = (1/r) d_r Psi, with axis limits.
VelocityField velocity_from_streamfunction(const ScalarField2D& psi);

/// vr / r with the axis limit d_r vr(0, z); Even.
ScalarField2D vr_over_r(const VelocityField& v);

/// Velocity induced by omega_theta e_theta through the 3D Biot-Savart law, evaluated
/// ring-by-ring with complete elliptic integrals. Source nodes within one cell of the
/// evaluation point are skipped. O(nr * nz) per point.
std::vector<MeridionalVelocity> biot_savart_direct(const ScalarField2D& omega_theta,
                                                   const std::vector<MeridionalPoint>& points);

/// Velocity of a single circular vortex filament of circulation `kappa`, radius `a`, height `z0`.
MeridionalVelocity ring_filament_velocity(double kappa, double a, double z0, double r, double z);

/// max |omega| on the outer quarter band (r > 3Lr/4 or |z| > 3Lz/4) relative to max |omega|.
/// Zero for a zero field.
double boundary_proximity(const ScalarField2D& omega_theta);
inline constexpr double kBoundaryWarningLevel = 1e-6;

void write_oracle_csv(std::ostream& os, const std::vector<MeridionalPoint>& points,
                      const std::vector<MeridionalVelocity>& v);

} // namespace axibouss
