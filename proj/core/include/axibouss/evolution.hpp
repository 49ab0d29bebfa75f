#pragma once

#include <memory>
#include <optional>

#include "axibouss/elliptic.hpp"
#include "axibouss/errors.hpp"
#include "axibouss/grid.hpp"
#include "axibouss/modal_solver.hpp"

namespace axibouss {

/// Backward characteristics: foot_(r,z)(x) is where the trajectory through node x at the current
/// time started at the reference time. rho = rho_ref o foot.
struct CharacteristicMap {
    ScalarField2D foot_r; // Odd
    ScalarField2D foot_z; // Even
    std::shared_ptr<const ScalarField2D> rho_ref;

    /// Identity map anchored at `rho`.
    static CharacteristicMap identity(const ScalarField2D& rho);
    /// rho_ref at the feet: bicubic, clipped to the containing cell of rho_ref.
    ScalarField2D density() const;
};

struct FlowState {
    double t = 0.0;
    ScalarField2D omega_theta; // Odd
    ScalarField2D rho;         // Even
    VelocityField velocity;    // derived from omega_theta
    std::optional<CharacteristicMap> characteristics;

    explicit FlowState(const MeridionalGrid& g)
        : omega_theta(g, Parity::Odd), rho(g, Parity::Even), velocity(g) {}
    FlowState(double t_, ScalarField2D omega, ScalarField2D rho_, VelocityField v)
        : t(t_), omega_theta(std::move(omega)), rho(std::move(rho_)), velocity(std::move(v)) {}

    const MeridionalGrid& grid() const noexcept { return omega_theta.grid(); }
};

/// Builds a state whose velocity is solved from omega_theta. Checks parities.
FlowState make_state(const StreamSolver& solver, ScalarField2D omega_theta, ScalarField2D rho, double t = 0.0);

enum class TimeScheme { IMEX, FullyExplicit };

/// Direct: rho is re-interpolated every step (advect_density).
/// Characteristics: the backward map is re-interpolated and rho_ref is sampled once per step,
/// so interpolation error in rho does not accumulate.
enum class DensityTransport { Characteristics, Direct };

struct StepControl {
    double cfl_advect = 0.5;
    double cfl_diffuse = 0.25;
    double dt_max = 0.01;
    TimeScheme scheme = TimeScheme::IMEX;
    DensityTransport transport = DensityTransport::Characteristics;
    // Keep the initial velocity for the whole run (prescribed-flow and pure-diffusion tests).
    bool freeze_velocity = false;

    /// Throws InvalidParameter unless all limits are positive and cfl_advect <= 1.
    void validate() const;
};

/// Raised when a step produces a non-finite value. Carries the last finite state.
class BlowUp : public Error {
  public:
    BlowUp(const std::string& what, FlowState last) : Error(what), last_(std::move(last)) {}
    const FlowState& last_state() const noexcept { return last_; }

  private:
    FlowState last_;
};

/// -v.grad omega + (vr/r) omega - d_r rho at interior nodes, zero on the axis and the outer rows.
ScalarField2D explicit_vorticity_terms(const ScalarField2D& omega_theta, const ScalarField2D& rho,
                                       const VelocityField& v);

/// Full right-hand side of the azimuthal vorticity equation:
/// -v.grad omega + (Delta - 1/r^2) omega + (vr/r) omega - d_r rho. Odd.
ScalarField2D vorticity_rhs(const FlowState& state);

/// Semi-Lagrangian transport of an Even field by one step of length dt. Departure points
/// come from a midpoint backtrace (v_end at the arrival node, v_mid at the half step);
/// values are bicubic and clipped to the containing cell. Throws StepRejected when
/// dt max|v| > cfl min(dr, dz).
ScalarField2D advect_density(const ScalarField2D& rho, const VelocityField& v_mid, const VelocityField& v_end,
                             double dt, double cfl = 1.0);
ScalarField2D advect_density(const ScalarField2D& rho, const VelocityField& v, double dt, double cfl = 1.0);

/// Composes the backward map with one step of the same midpoint backtrace. Same CFL contract.
CharacteristicMap advect_characteristics(const CharacteristicMap& map, const VelocityField& v_mid,
                                         const VelocityField& v_end, double dt, double cfl = 1.0);

/// Time stepper. Owns the streamfunction solver and a cached implicit diffusion solver.
class Evolver {
  public:
    Evolver(const MeridionalGrid& grid, StepControl ctl);

    const StepControl& control() const noexcept { return ctl_; }
    const StreamSolver& stream() const noexcept { return stream_; }

    /// min(cfl_advect min(dr,dz) / max|v|, dt_max), plus the explicit diffusion limit
    /// for FullyExplicit.
    double stable_dt(const FlowState& s) const;

    /// One step of exactly dt. Throws StepRejected or BlowUp.
    FlowState step(const FlowState& s, double dt);

    /// One step of stable_dt capped at dt_limit, shrinking on rejection.
    FlowState advance(const FlowState& s, double dt_limit = kInfinity);

  private:
    FlowState step_imex(const FlowState& s, double dt);
    FlowState step_explicit(const FlowState& s, double dt);
    VelocityField velocity_for(const ScalarField2D& omega, const VelocityField& frozen) const;
    const ModalSolver& diffusion_solver(double gamma_dt);
    // Density after dt; with characteristics also the advanced map.
    std::pair<ScalarField2D, std::optional<CharacteristicMap>> transport(const FlowState& s, const VelocityField& v_mid,
                                                                         const VelocityField& v_end, double dt) const;

    MeridionalGrid grid_;
    StepControl ctl_;
    StreamSolver stream_;
    std::optional<ModalSolver> diffusion_;
};

} // namespace axibouss
