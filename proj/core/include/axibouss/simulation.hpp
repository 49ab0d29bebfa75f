#pragma once

#include <functional>
#include <string>
#include <vector>

#include "axibouss/config.hpp"
#include "axibouss/diagnostics.hpp"
#include "axibouss/evolution.hpp"
#include "axibouss/flowmap.hpp"

namespace axibouss {

/// Initial omega_theta and rho from the config (ring normalization and mollification applied).
FlowState initial_state(const RunConfig& c, const StreamSolver& solver);

/// Hooks called from the run loop, in time order. Any may be empty.
struct RunObserver {
    std::function<void(const DiagnosticsRecord&)> on_record;
    std::function<void(const FlowState&)> on_snapshot;
    std::function<void(double t, const std::vector<Particle>&)> on_particles;
};

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    FlowState final_state;
    std::vector<Particle> particles;
    /// Two-sided axis-distance envelopes of every seeded particle at every record time.
    std::vector<InequalityCheck> particle_checks;
    std::size_t steps = 0;
    std::size_t axis_clamps = 0;
    std::size_t escaped = 0;
    double boundary_proximity = 0.0; // worst over the run
    bool blew_up = false;
    std::string failure;

    explicit RunResult(const MeridionalGrid& g) : final_state(g) {}
};

/// Integrates to t_end. Records land exactly on multiples of record_interval (and t_end),
/// snapshots on multiples of snapshot_interval. A blow-up stops the loop and is reported in
/// the result with the last finite state; records up to that point are kept.
RunResult run(const RunConfig& c, const RunObserver& observer = {});

} // namespace axibouss
