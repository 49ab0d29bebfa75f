#include "axibouss/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>

#include "axibouss/interp.hpp"

namespace axibouss {

namespace {

// A stage went non-finite; step() turns this into BlowUp with the state it started from.
struct NonFiniteStage {};

// ARS(2,2,2): L-stable, stiffly accurate.
const double kGamma = 1.0 - 1.0 / std::sqrt(2.0);
const double kDelta = 1.0 - 1.0 / (2.0 * kGamma);

void zero_outer_rows(ScalarField2D& f) {
    const auto& g = f.grid();
    for (std::size_t j = 0; j < g.nz(); ++j) f.at(g.nr() - 1, j) = 0.0;
    for (std::size_t i = 0; i < g.nr(); ++i) {
        f.at(i, 0) = 0.0;
        f.at(i, g.nz() - 1) = 0.0;
    }
    f.enforce_parity();
}

VelocityField average(const VelocityField& a, const VelocityField& b) {
    return VelocityField(linear_combination(0.5, a.vr, 0.5, b.vr), linear_combination(0.5, a.vz, 0.5, b.vz));
}

bool finite_state(const FlowState& s) {
    return s.omega_theta.is_finite() && s.rho.is_finite() && s.velocity.vr.is_finite() && s.velocity.vz.is_finite();
}

} // namespace

FlowState make_state(const StreamSolver& solver, ScalarField2D omega_theta, ScalarField2D rho, double t) {
    if (omega_theta.parity() != Parity::Odd) throw InvalidParity("omega_theta must be Odd");
    if (rho.parity() != Parity::Even) throw InvalidParity("rho must be Even");
    if (!(omega_theta.grid() == solver.grid()) || !(rho.grid() == solver.grid()))
        throw InvalidParameter("state fields live on different grids");
    VelocityField v = solver.velocity(omega_theta);
    return FlowState(t, std::move(omega_theta), std::move(rho), std::move(v));
}

void StepControl::validate() const {
    if (!(cfl_advect > 0.0) || cfl_advect > 1.0) throw InvalidParameter("cfl_advect must lie in (0, 1]");
    if (!(cfl_diffuse > 0.0)) throw InvalidParameter("cfl_diffuse must be positive");
    if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw InvalidParameter("dt_max must be positive and finite");
}

ScalarField2D explicit_vorticity_terms(const ScalarField2D& omega, const ScalarField2D& rho, const VelocityField& v) {
    const auto& g = omega.grid();
    const ScalarField2D w_r = d_dr(omega);
    const ScalarField2D w_z = d_dz(omega);
    const ScalarField2D q = vr_over_r(v);
    const ScalarField2D rho_r = d_dr(rho);
    ScalarField2D out(g, Parity::Odd);
    const long nr = static_cast<long>(g.nr());
#ifdef AXIBOUSS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long il = 1; il < nr - 1; ++il) {
        const auto i = static_cast<std::size_t>(il);
        for (std::size_t j = 1; j + 1 < g.nz(); ++j) {
            const double adv = v.vr(i, j) * w_r(i, j) + v.vz(i, j) * w_z(i, j);
            out.at(i, j) = -adv + q(i, j) * omega(i, j) - rho_r(i, j);
        }
    }
    return out;
}

ScalarField2D vorticity_rhs(const FlowState& s) {
    ScalarField2D out = explicit_vorticity_terms(s.omega_theta, s.rho, s.velocity);
    out += apply_meridional_operator(MeridionalOperator::VectorLaplacian, s.omega_theta);
    return out;
}

ScalarField2D advect_density(const ScalarField2D& rho, const VelocityField& v, double dt, double cfl) {
    return advect_density(rho, v, v, dt, cfl);
}

namespace {

void check_transport_cfl(const MeridionalGrid& g, const VelocityField& v_mid, const VelocityField& v_end, double dt,
                         double cfl) {
    if (!(dt > 0.0)) throw InvalidParameter("transport needs dt > 0");
    const double h = std::min(g.dr(), g.dz());
    const double vmax = std::max(v_mid.max_speed(), v_end.max_speed());
    if (dt * vmax > cfl * h) throw StepRejected("transport step violates the CFL bound", cfl * h / vmax);
}

// Midpoint backtrace from node (i, j). The returned r may be negative (across the axis).
std::pair<double, double> departure(const MeridionalGrid& g, std::size_t i, std::size_t j, const VelocityField& v_mid,
                                    const VelocityField& v_end, double dt) {
    const double r = g.r(i), z = g.z(j);
    const double rs = r - 0.5 * dt * v_end.vr(i, j);
    const double zs = z - 0.5 * dt * v_end.vz(i, j);
    return {r - dt * sample_bicubic(v_mid.vr, rs, zs), z - dt * sample_bicubic(v_mid.vz, rs, zs)};
}

// Bicubic value limited to the four corners of the cell it falls in: no new extrema.
double sample_limited(const ScalarField2D& f, double r, double z) {
    r = std::abs(r);
    const double value = sample_bicubic(f, r, z);
    const CellCorners c = containing_cell(f.grid(), r, z);
    const double a = f(c.i0, c.j0), b = f(c.i0 + 1, c.j0);
    const double d = f(c.i0, c.j0 + 1), e = f(c.i0 + 1, c.j0 + 1);
    return std::clamp(value, std::min({a, b, d, e}), std::max({a, b, d, e}));
}

} // namespace

ScalarField2D advect_density(const ScalarField2D& rho, const VelocityField& v_mid, const VelocityField& v_end,
                             double dt, double cfl) {
    if (rho.parity() != Parity::Even) throw InvalidParity("density must be Even");
    const auto& g = rho.grid();
    check_transport_cfl(g, v_mid, v_end, dt, cfl);

    ScalarField2D out(g, Parity::Even);
    const long nr = static_cast<long>(g.nr());
#ifdef AXIBOUSS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long il = 0; il < nr; ++il) {
        const auto i = static_cast<std::size_t>(il);
        for (std::size_t j = 0; j < g.nz(); ++j) {
            const auto [rd, zd] = departure(g, i, j, v_mid, v_end, dt);
            out.at(i, j) = (rd == g.r(i) && zd == g.z(j)) ? rho(i, j) : sample_limited(rho, rd, zd);
        }
    }
    return out;
}

CharacteristicMap CharacteristicMap::identity(const ScalarField2D& rho) {
    if (rho.parity() != Parity::Even) throw InvalidParity("density must be Even");
    const auto& g = rho.grid();
    CharacteristicMap m{ScalarField2D(g, Parity::Odd), ScalarField2D(g, Parity::Even),
                        std::make_shared<const ScalarField2D>(rho)};
    for (std::size_t i = 0; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.nz(); ++j) {
            m.foot_r.at(i, j) = g.r(i);
            m.foot_z.at(i, j) = g.z(j);
        }
    return m;
}

ScalarField2D CharacteristicMap::density() const {
    const auto& g = foot_r.grid();
    ScalarField2D out(g, Parity::Even);
    const long nr = static_cast<long>(g.nr());
#ifdef AXIBOUSS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long il = 0; il < nr; ++il) {
        const auto i = static_cast<std::size_t>(il);
        for (std::size_t j = 0; j < g.nz(); ++j) {
            const double fr = foot_r(i, j), fz = foot_z(i, j);
            // Nodes that have not moved read rho_ref directly so the identity map is exact.
            out.at(i, j) = (fr == g.r(i) && fz == g.z(j)) ? (*rho_ref)(i, j) : sample_limited(*rho_ref, fr, fz);
        }
    }
    return out;
}

CharacteristicMap advect_characteristics(const CharacteristicMap& map, const VelocityField& v_mid,
                                         const VelocityField& v_end, double dt, double cfl) {
    const auto& g = map.foot_r.grid();
    check_transport_cfl(g, v_mid, v_end, dt, cfl);
    CharacteristicMap out{ScalarField2D(g, Parity::Odd), ScalarField2D(g, Parity::Even), map.rho_ref};
    const long nr = static_cast<long>(g.nr());
#ifdef AXIBOUSS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long il = 0; il < nr; ++il) {
        const auto i = static_cast<std::size_t>(il);
        for (std::size_t j = 0; j < g.nz(); ++j) {
            const auto [rd, zd] = departure(g, i, j, v_mid, v_end, dt);
            if (rd == g.r(i) && zd == g.z(j)) {
                out.foot_r.at(i, j) = map.foot_r(i, j);
                out.foot_z.at(i, j) = map.foot_z(i, j);
                continue;
            }
            // The map is smooth, so plain bicubic; parity handles rd < 0.
            out.foot_r.at(i, j) = sample_bicubic(map.foot_r, rd, zd);
            out.foot_z.at(i, j) = sample_bicubic(map.foot_z, rd, zd);
        }
    }
    out.foot_r.enforce_parity();
    return out;
}

std::pair<ScalarField2D, std::optional<CharacteristicMap>> Evolver::transport(const FlowState& s,
                                                                              const VelocityField& v_mid,
                                                                              const VelocityField& v_end,
                                                                              double dt) const {
    if (ctl_.transport == DensityTransport::Direct)
        return {advect_density(s.rho, v_mid, v_end, dt, ctl_.cfl_advect), std::nullopt};
    CharacteristicMap to = s.characteristics
                               ? advect_characteristics(*s.characteristics, v_mid, v_end, dt, ctl_.cfl_advect)
                               : advect_characteristics(CharacteristicMap::identity(s.rho), v_mid, v_end, dt,
                                                        ctl_.cfl_advect);
    ScalarField2D rho = to.density();
    return {std::move(rho), std::move(to)};
}

Evolver::Evolver(const MeridionalGrid& grid, StepControl ctl) : grid_(grid), ctl_(ctl), stream_(grid) {
    ctl_.validate();
}

double Evolver::stable_dt(const FlowState& s) const {
    double dt = ctl_.dt_max;
    const double vmax = s.velocity.max_speed();
    if (vmax > 0.0) dt = std::min(dt, ctl_.cfl_advect * std::min(grid_.dr(), grid_.dz()) / vmax);
    if (ctl_.scheme == TimeScheme::FullyExplicit)
        dt = std::min(dt, ctl_.cfl_diffuse / (1.0 / (grid_.dr() * grid_.dr()) + 1.0 / (grid_.dz() * grid_.dz())));
    return dt;
}

VelocityField Evolver::velocity_for(const ScalarField2D& omega, const VelocityField& frozen) const {
    if (!omega.is_finite()) throw NonFiniteStage{};
    return ctl_.freeze_velocity ? frozen : stream_.velocity(omega);
}

const ModalSolver& Evolver::diffusion_solver(double gamma_dt) {
    if (!diffusion_ || diffusion_->scale() != gamma_dt)
        diffusion_.emplace(grid_, MeridionalOperator::VectorLaplacian, 1.0, gamma_dt);
    return *diffusion_;
}

FlowState Evolver::step(const FlowState& s, double dt) {
    if (!(s.grid() == grid_)) throw InvalidParameter("state grid does not match the evolver");
    if (!(dt > 0.0)) throw InvalidParameter("time step must be positive");
    FlowState next(grid_);
    try {
        next = ctl_.scheme == TimeScheme::IMEX ? step_imex(s, dt) : step_explicit(s, dt);
    } catch (const NonFiniteStage&) {
        throw BlowUp("non-finite stage value at t = " + std::to_string(s.t), s);
    }
    if (!finite_state(next)) throw BlowUp("non-finite value after step at t = " + std::to_string(s.t), s);
    return next;
}

FlowState Evolver::advance(const FlowState& s, double dt_limit) {
    if (!finite_state(s)) throw BlowUp("non-finite state at t = " + std::to_string(s.t), s);
    double dt = std::min(stable_dt(s), dt_limit);
    for (int attempt = 0; attempt < 60; ++attempt) {
        try {
            return step(s, dt);
        } catch (const StepRejected& e) {
            dt = 0.95 * std::min(dt, e.admissible_dt());
        }
    }
    throw BlowUp("time step collapsed at t = " + std::to_string(s.t), s);
}

FlowState Evolver::step_imex(const FlowState& s, double dt) {
    const double gdt = kGamma * dt;
    const ModalSolver& solver = diffusion_solver(gdt);

    const ScalarField2D n0 = explicit_vorticity_terms(s.omega_theta, s.rho, s.velocity);
    ScalarField2D rhs = linear_combination(1.0, s.omega_theta, gdt, n0);
    const ScalarField2D w2 = solver.solve(rhs, Parity::Odd);

    const ScalarField2D rho2 = transport(s, s.velocity, s.velocity, gdt).first;
    const VelocityField v2 = velocity_for(w2, s.velocity);
    const ScalarField2D n2 = explicit_vorticity_terms(w2, rho2, v2);

    // L w2 recovered from the stage equation instead of reapplying the stencil.
    ScalarField2D lw2 = linear_combination(1.0 / gdt, w2, -1.0 / gdt, s.omega_theta);
    lw2 -= n0;
    rhs = s.omega_theta;
    const auto out = rhs.values();
    const std::span<const double> a = std::as_const(lw2).values(), b = n0.values(), c = n2.values();
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] += dt * ((1.0 - kGamma) * a[k] + kDelta * b[k] + (1.0 - kDelta) * c[k]);
    ScalarField2D w3 = solver.solve(rhs, Parity::Odd);

    VelocityField v3 = velocity_for(w3, s.velocity);
    auto [rho3, map3] = transport(s, average(s.velocity, v3), v3, dt);
    FlowState next(s.t + dt, std::move(w3), std::move(rho3), std::move(v3));
    next.characteristics = std::move(map3);
    return next;
}

FlowState Evolver::step_explicit(const FlowState& s, double dt) {
    const ScalarField2D f0 = vorticity_rhs(s);
    ScalarField2D w1 = linear_combination(1.0, s.omega_theta, dt, f0);
    zero_outer_rows(w1);
    ScalarField2D rho1 = transport(s, s.velocity, s.velocity, dt).first;
    VelocityField v1 = velocity_for(w1, s.velocity);
    const FlowState mid(s.t + dt, std::move(w1), std::move(rho1), std::move(v1));

    const ScalarField2D f1 = vorticity_rhs(mid);
    ScalarField2D w = linear_combination(1.0, s.omega_theta, 0.5 * dt, f0);
    w += 0.5 * dt * f1;
    zero_outer_rows(w);
    VelocityField v = velocity_for(w, s.velocity);
    auto [rho, map] = transport(s, average(s.velocity, v), v, dt);
    FlowState next(s.t + dt, std::move(w), std::move(rho), std::move(v));
    next.characteristics = std::move(map);
    return next;
}

} // namespace axibouss
