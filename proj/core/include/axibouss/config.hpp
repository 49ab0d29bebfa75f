#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axibouss/diagnostics.hpp"
#include "axibouss/evolution.hpp"
#include "axibouss/flowmap.hpp"
#include "axibouss/initdata.hpp"

namespace axibouss {

/// Everything a run needs. Grammar of the text form:
///
///   # comment
///   section.key = value
///
/// One assignment per line, keys may appear once, unknown keys are errors.
/// particles.seeds is a `;`-separated list of `r,z` or `r,z,theta` triples.
struct RunConfig {
    std::size_t nr = 0;
    std::size_t nz = 0;
    double Lr = 0.0;
    double Lz = 0.0;

    VortexRingParams ring;
    // When set, the ring amplitude is rescaled so the sampled ||omega_0||_L2 equals this value.
    std::optional<double> ring_omega_l2;

    AnnulusParams density; // amplitude derived from density_peak
    double density_peak = 0.0;
    int mollify = 0; // 0: off

    StepControl step;
    double t_end = 0.0;
    double record_interval = 0.1;
    double snapshot_interval = 1.0;
    std::vector<Particle> seeds;
    double support_threshold = 1e-8; // relative to ||rho_0||_inf
    std::string output = "out";
    CheckTolerances tolerances;
    std::uint64_t seed = 0; // reserved

    MeridionalGrid grid() const { return MeridionalGrid(nr, nz, Lr, Lz); }
    bool homogeneous() const noexcept { return density_peak == 0.0; }
};

/// Parses and validates. Throws ConfigError with a line number or the violated requirement.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Throws ConfigError naming the first violated requirement.
void validate(const RunConfig& c);

/// Canonical text form: every key, fixed order, shortest round-trip numbers.
/// parse_config(canonical_config(c)) reproduces c.
std::string canonical_config(const RunConfig& c);

} // namespace axibouss
