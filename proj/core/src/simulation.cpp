#include "axibouss/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "axibouss/elliptic.hpp"
#include "axibouss/errors.hpp"
#include "axibouss/initdata.hpp"

namespace axibouss {

FlowState initial_state(const RunConfig& c, const StreamSolver& solver) {
    const MeridionalGrid& g = solver.grid();
    VortexRingParams ring = c.ring;
    if (c.ring_omega_l2) ring.amplitude = 1.0;
    ScalarField2D omega = gaussian_vortex_ring(ring, g);
    ScalarField2D rho = c.homogeneous() ? ScalarField2D(g, Parity::Even) : annular_density(c.density, g);
    if (c.mollify > 0) {
        omega = mollify(omega, c.mollify);
        if (!c.homogeneous()) rho = mollify(rho, c.mollify);
    }
    if (c.ring_omega_l2) {
        const double norm = lp_norm(omega, 2.0);
        if (norm > 0.0) omega *= *c.ring_omega_l2 / norm;
    }
    return make_state(solver, std::move(omega), std::move(rho), 0.0);
}

namespace {

// k-th event time of a cadence, with the last one pinned to t_end.
double event_time(std::size_t k, double interval, double t_end) {
    const double t = static_cast<double>(k) * interval;
    return t >= t_end * (1.0 - 1e-12) ? t_end : t;
}

void particle_envelopes(std::vector<InequalityCheck>& out, const std::vector<Particle>& seeds,
                        const std::vector<Particle>& now, const TimeSeries& sup, double t, double rel_tol) {
    for (std::size_t k = 0; k < now.size(); ++k) {
        if (now[k].escaped) continue;
        const auto env = axis_distance_bounds_check(seeds[k].r, now[k].r, sup, 0.0, t);
        const std::string id = "#" + std::to_string(k);
        InequalityCheck lo;
        lo.name = "particle-axis-lower" + id;
        lo.t = t;
        lo.lhs = env.lower;
        lo.rhs = env.observed;
        lo.margin = lo.rhs - lo.lhs;
        lo.tolerance = rel_tol * env.lower;
        lo.status = CheckStatus::Asserted;
        lo.paper_anchor = "r(x) exp(-int ||v^r/r||_inf) <= d(psi(t,x), axis)";
        InequalityCheck hi = lo;
        hi.name = "particle-axis-upper" + id;
        hi.lhs = env.observed;
        hi.rhs = env.upper;
        hi.margin = hi.rhs - hi.lhs;
        hi.tolerance = rel_tol * env.upper;
        hi.paper_anchor = "d(psi(t,x), axis) <= r(x) exp(int ||v^r/r||_inf)";
        out.push_back(std::move(lo));
        out.push_back(std::move(hi));
    }
}

} // namespace

RunResult run(const RunConfig& c, const RunObserver& observer) {
    validate(c);
    const MeridionalGrid g = c.grid();
    Evolver evolver(g, c.step);
    FlowState state = initial_state(c, evolver.stream());

    const double rho0_max = state.rho.max_abs();
    History history(rho0_max > 0.0 ? c.support_threshold * rho0_max : std::numeric_limits<double>::min());
    history.observe(state);

    RunResult result(g);
    std::vector<Particle> particles = c.seeds;
    const double rel_tol = c.tolerances.support_rel;

    auto on_record = [&](const FlowState& s) {
        result.records.push_back(record(s, history));
        if (observer.on_record) observer.on_record(result.records.back());
        particle_envelopes(result.particle_checks, c.seeds, particles, history.vr_over_r_sup(), s.t, rel_tol);
        if (observer.on_particles) observer.on_particles(s.t, particles);
    };

    on_record(state);
    if (observer.on_snapshot) observer.on_snapshot(state);
    result.boundary_proximity = boundary_proximity(state.omega_theta);

    std::size_t rec_k = 1, snap_k = 1;
    try {
        while (state.t < c.t_end) {
            const double t_rec = event_time(rec_k, c.record_interval, c.t_end);
            const double t_snap = event_time(snap_k, c.snapshot_interval, c.t_end);
            const double target = std::min({t_rec, t_snap, c.t_end});

            FlowState next = evolver.advance(state, target - state.t);
            if (next.t >= target - 1e-12 * std::max(1.0, std::abs(target))) next.t = target;
            ++result.steps;

            if (!particles.empty()) {
                VelocityHistory frames(g);
                frames.push(state.t, state.velocity);
                frames.push(next.t, next.velocity);
                auto moved = advance_particles(std::move(particles), frames, state.t, next.t, next.t - state.t);
                particles = std::move(moved.particles);
                result.axis_clamps += moved.axis_clamps;
                result.escaped += moved.newly_escaped;
            }

            state = std::move(next);
            history.observe(state);
            result.boundary_proximity = std::max(result.boundary_proximity, boundary_proximity(state.omega_theta));

            if (state.t == t_rec) {
                on_record(state);
                ++rec_k;
            }
            if (state.t == t_snap) {
                if (observer.on_snapshot) observer.on_snapshot(state);
                ++snap_k;
            }
        }
    } catch (const BlowUp& e) {
        result.blew_up = true;
        result.failure = e.what();
        result.final_state = e.last_state();
        result.particles = std::move(particles);
        return result;
    }
    result.final_state = std::move(state);
    result.particles = std::move(particles);
    return result;
}

} // namespace axibouss
