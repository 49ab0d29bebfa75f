// axibouss: run, re-check, and verify axisymmetric Boussinesq simulations.
//
// Exit codes: 0 success, 1 an asserted check or oracle failed, 2 bad configuration or usage,
// 3 numerical blow-up (last finite state is written), 4 any other error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <axibouss/config.hpp>
#include <axibouss/diagnostics.hpp>
#include <axibouss/elliptic.hpp>
#include <axibouss/errors.hpp>
#include <axibouss/field_io.hpp>
#include <axibouss/lpaley.hpp>
#include <axibouss/parallel.hpp>
#include <axibouss/simulation.hpp>

#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace axibouss;

namespace {

enum Exit { kOk = 0, kAssertion = 1, kConfig = 2, kBlowUp = 3, kInternal = 4 };

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot write " + p.string());
    return f;
}

void save_state(const fs::path& dir, const FlowState& s) {
    save_field((dir / snapshot_filename(s.t, "omega")).string(), s.omega_theta);
    save_field((dir / snapshot_filename(s.t, "rho")).string(), s.rho);
}

// Worst margin per check name, for the console summary.
void print_summary(std::ostream& os, const std::vector<InequalityCheck>& checks) {
    struct Worst {
        const InequalityCheck* c = nullptr;
        bool failed = false;
    };
    std::map<std::string, Worst> by_name;
    std::vector<std::string> order;
    for (const auto& c : checks) {
        std::string key = c.name.substr(0, c.name.find('#'));
        auto [it, fresh] = by_name.try_emplace(key);
        if (fresh) order.push_back(key);
        auto& w = it->second;
        if (!w.c || c.margin + c.tolerance < w.c->margin + w.c->tolerance) w.c = &c;
        w.failed |= !c.passed();
    }
    for (const auto& k : order) {
        const auto& w = by_name[k];
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%-36s %-9s worst t=%-8.4g lhs=%-12.6g rhs=%-12.6g margin=%-12.4g %s",
                      k.c_str(), to_string(w.c->status), w.c->t, w.c->lhs, w.c->rhs, w.c->margin,
                      w.c->status == CheckStatus::Asserted ? (w.failed ? "FAIL" : "ok") : "");
        os << buf << '\n';
    }
}

int cmd_run(const std::string& config_path, const std::string& output, bool print_config, bool quiet) {
    RunConfig cfg = load_config(config_path);
    if (!output.empty()) cfg.output = output;
    if (print_config) {
        std::cout << canonical_config(cfg);
        return kOk;
    }
    const fs::path dir(cfg.output);
    fs::create_directories(dir);

    std::ofstream diag = open_out(dir / "diagnostics.csv");
    diag << diagnostics_csv_header() << '\n';
    std::ofstream parts = open_out(dir / "particles.csv");
    write_particles_csv_header(parts);
    {
        std::ofstream canon = open_out(dir / "config.canonical");
        canon << canonical_config(cfg);
    }

    RunObserver obs;
    obs.on_record = [&](const DiagnosticsRecord& r) {
        write_diagnostics_row(diag, r);
        diag.flush();
        if (!quiet)
            std::cerr << "t = " << r.t << "  |v|_2 = " << r.v_l2 << "  |rho|_inf = " << r.rho_linf
                      << "  |Gamma|_2 = " << r.gamma_l2 << '\n';
    };
    obs.on_snapshot = [&](const FlowState& s) { save_state(dir, s); };
    obs.on_particles = [&](double t, const std::vector<Particle>& ps) { write_particles_csv_rows(parts, t, ps); };

    const RunResult res = run(cfg, obs);
    diag.close();
    parts.close();

    const auto checks = evaluate_checks(res.records, cfg.tolerances);
    {
        std::ofstream f = open_out(dir / "checks.json");
        write_checks_json(f, checks);
    }
    {
        std::ofstream f = open_out(dir / "flowmap_checks.json");
        write_checks_json(f, res.particle_checks);
    }

    if (!quiet) {
        print_summary(std::cout, checks);
        print_summary(std::cout, res.particle_checks);
        std::cout << "steps " << res.steps << ", axis clamps " << res.axis_clamps << ", escaped particles "
                  << res.escaped << '\n';
    }
    if (res.boundary_proximity > kBoundaryWarningLevel)
        std::cerr << "warning: vorticity reaches the outer quarter of the domain (relative level "
                  << res.boundary_proximity << "); truncation effects may be visible\n";
    if (res.axis_clamps > 0) std::cerr << "warning: particle integrator clamped r at the axis\n";
    if (res.escaped > 0) std::cerr << "warning: " << res.escaped << " particle(s) left the grid\n";

    if (res.blew_up) {
        save_state(dir, res.final_state);
        std::cerr << "blow-up: " << res.failure << '\n';
        return kBlowUp;
    }
    const bool ok = all_asserted_pass(checks) && all_asserted_pass(res.particle_checks);
    if (!quiet) std::cout << (ok ? "all asserted checks pass\n" : "ASSERTED CHECK FAILED\n");
    return ok ? kOk : kAssertion;
}

int cmd_check(const std::string& csv, const std::string& config_path, const std::string& output, bool quiet) {
    CheckTolerances tol;
    if (!config_path.empty()) tol = load_config(config_path).tolerances;
    std::ifstream in(csv, std::ios::binary);
    if (!in) throw IoError("cannot open " + csv);
    const auto checks = evaluate_checks(read_diagnostics_csv(in), tol);
    if (output.empty()) {
        write_checks_json(std::cout, checks);
    } else {
        fs::create_directories(output);
        std::ofstream f = open_out(fs::path(output) / "checks.json");
        write_checks_json(f, checks);
        if (!quiet) print_summary(std::cout, checks);
    }
    return all_asserted_pass(checks) ? kOk : kAssertion;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Axisymmetric Boussinesq solver with a priori estimate monitors"};
    app.require_subcommand(1);

    std::string config, output, positional;
    bool print_config = false, quiet = false;

    auto* run = app.add_subcommand("run", "integrate a configured scenario and evaluate the checks");
    run->add_option("config_file", positional, "configuration file");
    run->add_option("--config", config, "configuration file");
    run->add_option("--output", output, "output directory (overrides run.output)");
    run->add_flag("--print-config", print_config, "print the canonical configuration and exit");
    run->add_flag("--quiet", quiet, "only warnings and errors");

    std::string csv;
    auto* check = app.add_subcommand("check", "re-evaluate the checks of a diagnostics CSV");
    check->add_option("diagnostics_csv", csv, "diagnostics.csv written by run")->required();
    check->add_option("--config", config, "take check tolerances from this configuration");
    check->add_option("--output", output, "write checks.json here instead of stdout");
    check->add_flag("--quiet", quiet);

    std::string oracle_name;
    auto* oracle = app.add_subcommand("oracle", "run a named verification suite");
    oracle->add_option("name", oracle_name, "one of: elliptic-manufactured, heat-kernel-5d, translation, "
                                            "strain-sharpness, biot-savart-ring, all")
        ->required();
    oracle->add_flag("--quiet", quiet);

    auto* lp = app.add_subcommand("lp-verify", "dyadic decomposition identity suite");
    lp->add_flag("--quiet", quiet);

    auto* version = app.add_subcommand("version", "print the version and the cutoff identity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    std::ostringstream sink;
    try {
        if (version->parsed()) {
            std::cout << "axibouss " << AXIBOUSS_VERSION << " cutoff " << CutoffPair::identity_hash() << '\n';
            return kOk;
        }
        if (run->parsed()) {
            const std::string path = config.empty() ? positional : config;
            if (path.empty()) {
                std::cerr << "run: a configuration file is required\n";
                return kConfig;
            }
            return cmd_run(path, output, print_config, quiet);
        }
        if (check->parsed()) return cmd_check(csv, config, output, quiet);
        std::ostream& out = quiet ? static_cast<std::ostream&>(sink) : std::cout;
        if (lp->parsed()) return tools::lp_verify(out) ? kOk : kAssertion;
        if (oracle->parsed()) {
            if (oracle_name == "all") {
                bool ok = true;
                for (const auto& n : tools::oracle_names()) {
                    bool known = true;
                    out << "== " << n << '\n';
                    ok &= tools::run_oracle(n, out, known);
                }
                return ok ? kOk : kAssertion;
            }
            bool known = true;
            const bool ok = tools::run_oracle(oracle_name, out, known);
            if (!known) {
                std::cerr << "unknown oracle '" << oracle_name << "'\n";
                return kConfig;
            }
            return ok ? kOk : kAssertion;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kConfig;
}
