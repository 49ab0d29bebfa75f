#pragma once

#include <memory>
#include <vector>

#include "axibouss/grid.hpp"

namespace axibouss {

/// Which second-order meridional operator a ModalSolver inverts.
///   Stokes:          L u = u_rr - (1/r) u_r + u_zz           (E^2, streamfunction)
///   VectorLaplacian: L u = u_rr + (1/r) u_r - u / r^2 + u_zz (diffusion of omega_theta),
///                    discretized as d_r((1/r) d_r(r u)) + u_zz
enum class MeridionalOperator { Stokes, VectorLaplacian };

/// Applies L at interior nodes with homogeneous Dirichlet data on r = 0, r = Lr, z = +-Lz.
/// Boundary rows of the result are zero.
ScalarField2D apply_meridional_operator(MeridionalOperator op, const ScalarField2D& u);

/// Direct solver for (shift - scale * L) u = f with u = 0 on every boundary row.
/// Sine transform in z diagonalizes d_zz; each z-mode leaves one tridiagonal system in r,
/// factorized once at construction. Solves are const and safe to run concurrently.
class ModalSolver {
  public:
    ModalSolver(const MeridionalGrid& grid, MeridionalOperator op, double shift, double scale);
    ~ModalSolver();
    ModalSolver(ModalSolver&&) noexcept;
    ModalSolver& operator=(ModalSolver&&) noexcept;
    ModalSolver(const ModalSolver&) = delete;
    ModalSolver& operator=(const ModalSolver&) = delete;

    /// Only the interior nodes of `rhs` are read. The result has `parity`.
    ScalarField2D solve(const ScalarField2D& rhs, Parity parity) const;

    const MeridionalGrid& grid() const noexcept { return grid_; }
    double shift() const noexcept { return shift_; }
    double scale() const noexcept { return scale_; }

  private:
    struct Plan;

    MeridionalGrid grid_;
    MeridionalOperator op_;
    double shift_;
    double scale_;
    std::size_t n_r_;   // interior radial unknowns
    std::size_t n_z_;   // interior z unknowns (= sine modes)
    std::vector<double> lower_;      // per radial row
    std::vector<double> upper_prime_; // per mode, per row (Thomas c')
    std::vector<double> inv_denom_;   // per mode, per row
    std::unique_ptr<Plan> plan_;
};

} // namespace axibouss
