#include <doctest.h>

#include <cmath>
#include <string>

#include <axibouss/config.hpp>
#include <axibouss/errors.hpp>

using namespace axibouss;

namespace {

const char* kMinimal = "grid.nr = 33\ngrid.nz = 33\ngrid.Lr = 4\ngrid.Lz = 4\nrun.t_end = 1\n";

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

} // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config and defaults") {
    const auto c = parse_config(kMinimal);
    CHECK(c.nr == 33);
    CHECK(c.Lz == 4.0);
    CHECK(c.t_end == 1.0);
    CHECK(c.homogeneous());
    CHECK(c.step.scheme == TimeScheme::IMEX);
    CHECK(c.step.transport == DensityTransport::Characteristics);
    CHECK(c.output == "out");
}

TEST_CASE("required keys") {
    CHECK(error_of("") == "grid.nr missing");
    CHECK(error_of("# only a comment\n\n") == "grid.nr missing");
    CHECK(error_of("grid.nr = 33\ngrid.nz = 33\ngrid.Lr = 4\ngrid.Lz = 4\n") == "run.t_end missing");
}

TEST_CASE("syntax errors carry the line number") {
    const std::string base = kMinimal;
    CHECK(contains(error_of(base + "ring.r0 1.0\n"), "line 6"));
    CHECK(contains(error_of(base + "\n\nbogus.key = 1\n"), "line 8: unknown key 'bogus.key'"));
    CHECK(contains(error_of(base + "grid.nr = 65\n"), "line 6: duplicate key 'grid.nr'"));
    CHECK(contains(error_of(base + "ring.r0 =\n"), "empty value"));
    CHECK(contains(error_of(base + "nodot = 1\n"), "section.key"));
    CHECK(contains(error_of(base + "a.b.c = 1\n"), "section.key"));
    CHECK(contains(error_of(base + "ring.r0 = 1.5x\n"), "line 6: ring.r0: expected a finite number"));
    CHECK(contains(error_of(base + "ring.r0 = nan\n"), "finite"));
    CHECK(contains(error_of(base + "init.mollify = 2.5\n"), "integer"));
    CHECK(contains(error_of(base + "step.scheme = rk4\n"), "'imex' or 'explicit'"));
    CHECK(contains(error_of(base + "step.transport = eulerian\n"), "'characteristics' or 'direct'"));
}

TEST_CASE("comments and whitespace") {
    const auto c = parse_config("  grid.nr=17 # trailing\r\ngrid.nz =\t17\ngrid.Lr = 2\ngrid.Lz = 2\nrun.t_end = 0\n");
    CHECK(c.nr == 17);
    CHECK(c.nz == 17);
}

TEST_CASE("semantic validation") {
    const std::string base = kMinimal;
    const std::string dens = "density.peak = 1\ndensity.r2 = 2\ndensity.h = 0.5\n";
    const auto axis = error_of(base + dens + "density.r1 = 0.0\n");
    CHECK(contains(axis, "density.r1 = 0"));
    CHECK(contains(axis, "axis"));
    // 5 dr = 0.625 on this grid
    CHECK(contains(error_of(base + dens + "density.r1 = 0.5\n"), "axis-clearance"));
    CHECK(error_of(base + dens + "density.r1 = 0.625\n").empty());
    CHECK(contains(error_of(base + dens + "density.r1 = 2.5\n"), "density.r2 must exceed"));
    CHECK(contains(error_of(base + "density.peak = -1\n"), "non-negative"));
    CHECK(contains(error_of("grid.nr = 4\n"), "line 1: grid.nr must be at least 8"));
    CHECK(contains(error_of(base + "step.cfl_advect = 0\n"), "step:"));
    CHECK(contains(error_of(base + "init.mollify = 10\n"), "init.mollify"));
    CHECK(contains(error_of(base + "ring.amplitude = 1\nring.omega_l2 = 1\n"), "mutually exclusive"));
    CHECK(contains(error_of(base + "particles.seeds = 1,2; 9,0\n"), "outside the grid"));
    CHECK(contains(error_of(base + "particles.seeds = 1\n"), "r,z"));
    CHECK(contains(error_of(base + "support.threshold = 1\n"), "support.threshold"));
    CHECK(contains(error_of(base + "checks.energy = -0.1\n"), "tolerances"));
}

TEST_CASE("density amplitude follows the peak") {
    const auto c = parse_config(std::string(kMinimal) + "density.peak = 0.5\ndensity.r1 = 1\ndensity.r2 = 2\n");
    CHECK(c.density.amplitude == 0.5);
}

TEST_CASE("seeds") {
    const auto c = parse_config(std::string(kMinimal) + "particles.seeds = 1.5,-1.5; 0.5,0,0.25 ;\n");
    REQUIRE(c.seeds.size() == 2);
    CHECK(c.seeds[0].r == 1.5);
    CHECK(c.seeds[0].z == -1.5);
    CHECK(c.seeds[0].theta == 0.0);
    CHECK(c.seeds[1].theta == 0.25);
}

TEST_CASE("canonical form round trips") {
    const std::string text = std::string(kMinimal) +
                             "ring.omega_l2 = 0.7\nring.r0 = 1.1\nring.sigma = 0.25\n"
                             "density.peak = 0.3\ndensity.r1 = 0.9\ndensity.r2 = 1.7\ndensity.z0 = -0.4\n"
                             "step.scheme = explicit\nstep.transport = direct\nstep.dt_max = 0.003\n"
                             "run.output = somewhere/else\nrun.record_interval = 0.1\n"
                             "particles.seeds = 1,0; 0.3,0.1,1.2\nchecks.rho_l2 = 0.0001\n";
    const auto c = parse_config(text);
    const std::string canon = canonical_config(c);
    const auto c2 = parse_config(canon);
    CHECK(canonical_config(c2) == canon);
    CHECK(c2.step.transport == DensityTransport::Direct);
    CHECK(c2.step.scheme == TimeScheme::FullyExplicit);
    CHECK(c2.ring_omega_l2.value() == 0.7);
    CHECK(c2.density.amplitude == c.density.amplitude);
    CHECK(c2.tolerances.rho_l2 == 0.0001);
    CHECK(c2.seeds.size() == 2);
    CHECK(contains(canon, "step.transport = direct\n"));
    CHECK(contains(canon, "run.output = somewhere/else\n"));
}

TEST_CASE("files") {
    CHECK_THROWS_AS(load_config("/nonexistent/definitely.cfg"), ConfigError);
    const auto c = load_config(std::string(AXB_SOURCE_DIR) + "/scenarios/standard_ring.cfg");
    CHECK(c.nr == 129);
    CHECK_FALSE(c.homogeneous());
    CHECK(c.seeds.size() == 6);
    CHECK(parse_config(canonical_config(c)).t_end == c.t_end);
}

}
