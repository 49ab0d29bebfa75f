#include "axibouss/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "axibouss/errors.hpp"

namespace axibouss {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError(std::string(key) + ": expected a finite number, got '" + std::string(v) + "'");
    return out;
}

long long parse_int(std::string_view key, std::string_view v) {
    long long out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
    return out;
}

std::vector<Particle> parse_seeds(std::string_view key, std::string_view v) {
    std::vector<Particle> out;
    while (!v.empty()) {
        const auto semi = v.find(';');
        const std::string_view item = trim(v.substr(0, semi));
        v = semi == std::string_view::npos ? std::string_view{} : v.substr(semi + 1);
        if (item.empty()) continue;
        std::vector<double> parts;
        std::string_view rest = item;
        while (true) {
            const auto comma = rest.find(',');
            parts.push_back(parse_double(key, trim(rest.substr(0, comma))));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        if (parts.size() < 2 || parts.size() > 3)
            throw ConfigError(std::string(key) + ": each seed is r,z or r,z,theta");
        out.push_back({parts[0], parts.size() == 3 ? parts[2] : 0.0, parts[1], false});
    }
    return out;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

template <class T>
Setter real(T RunConfig::*member) {
    return [member](RunConfig& c, std::string_view k, std::string_view v) { c.*member = parse_double(k, v); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> m = {
        {"grid.nr",
         [](RunConfig& c, auto k, auto v) {
             const auto n = parse_int(k, v);
             if (n < 8) throw ConfigError("grid.nr must be at least 8");
             c.nr = static_cast<std::size_t>(n);
         }},
        {"grid.nz",
         [](RunConfig& c, auto k, auto v) {
             const auto n = parse_int(k, v);
             if (n < 8) throw ConfigError("grid.nz must be at least 8");
             c.nz = static_cast<std::size_t>(n);
         }},
        {"grid.Lr", real(&RunConfig::Lr)},
        {"grid.Lz", real(&RunConfig::Lz)},
        {"ring.amplitude", [](RunConfig& c, auto k, auto v) { c.ring.amplitude = parse_double(k, v); }},
        {"ring.omega_l2", [](RunConfig& c, auto k, auto v) { c.ring_omega_l2 = parse_double(k, v); }},
        {"ring.r0", [](RunConfig& c, auto k, auto v) { c.ring.r0 = parse_double(k, v); }},
        {"ring.z0", [](RunConfig& c, auto k, auto v) { c.ring.z0 = parse_double(k, v); }},
        {"ring.sigma", [](RunConfig& c, auto k, auto v) { c.ring.sigma = parse_double(k, v); }},
        {"density.peak", real(&RunConfig::density_peak)},
        {"density.r1", [](RunConfig& c, auto k, auto v) { c.density.r1 = parse_double(k, v); }},
        {"density.r2", [](RunConfig& c, auto k, auto v) { c.density.r2 = parse_double(k, v); }},
        {"density.z0", [](RunConfig& c, auto k, auto v) { c.density.z0 = parse_double(k, v); }},
        {"density.h", [](RunConfig& c, auto k, auto v) { c.density.h = parse_double(k, v); }},
        {"init.mollify",
         [](RunConfig& c, auto k, auto v) {
             const auto n = parse_int(k, v);
             if (n < 0 || n > 1000000) throw ConfigError("init.mollify must be 0 (off) or a positive index");
             c.mollify = static_cast<int>(n);
         }},
        {"step.cfl_advect", [](RunConfig& c, auto k, auto v) { c.step.cfl_advect = parse_double(k, v); }},
        {"step.cfl_diffuse", [](RunConfig& c, auto k, auto v) { c.step.cfl_diffuse = parse_double(k, v); }},
        {"step.dt_max", [](RunConfig& c, auto k, auto v) { c.step.dt_max = parse_double(k, v); }},
        {"step.scheme",
         [](RunConfig& c, auto, auto v) {
             if (v == "imex") c.step.scheme = TimeScheme::IMEX;
             else if (v == "explicit") c.step.scheme = TimeScheme::FullyExplicit;
             else throw ConfigError("step.scheme must be 'imex' or 'explicit'");
         }},
        {"step.transport",
         [](RunConfig& c, auto, auto v) {
             if (v == "characteristics") c.step.transport = DensityTransport::Characteristics;
             else if (v == "direct") c.step.transport = DensityTransport::Direct;
             else throw ConfigError("step.transport must be 'characteristics' or 'direct'");
         }},
        {"run.t_end", real(&RunConfig::t_end)},
        {"run.record_interval", real(&RunConfig::record_interval)},
        {"run.snapshot_interval", real(&RunConfig::snapshot_interval)},
        {"run.output", [](RunConfig& c, auto, auto v) { c.output = std::string(v); }},
        {"run.seed",
         [](RunConfig& c, auto k, auto v) {
             const auto n = parse_int(k, v);
             if (n < 0) throw ConfigError("run.seed must be non-negative");
             c.seed = static_cast<std::uint64_t>(n);
         }},
        {"particles.seeds", [](RunConfig& c, auto k, auto v) { c.seeds = parse_seeds(k, v); }},
        {"support.threshold", real(&RunConfig::support_threshold)},
        {"checks.rho_linf", [](RunConfig& c, auto k, auto v) { c.tolerances.rho_linf = parse_double(k, v); }},
        {"checks.rho_l2", [](RunConfig& c, auto k, auto v) { c.tolerances.rho_l2 = parse_double(k, v); }},
        {"checks.v_l2", [](RunConfig& c, auto k, auto v) { c.tolerances.v_l2 = parse_double(k, v); }},
        {"checks.energy", [](RunConfig& c, auto k, auto v) { c.tolerances.energy = parse_double(k, v); }},
        {"checks.gamma_l2", [](RunConfig& c, auto k, auto v) { c.tolerances.gamma_l2 = parse_double(k, v); }},
        {"checks.support_rel", [](RunConfig& c, auto k, auto v) { c.tolerances.support_rel = parse_double(k, v); }},
        {"checks.rho_over_r", [](RunConfig& c, auto k, auto v) { c.tolerances.rho_over_r = parse_double(k, v); }},
        {"checks.gamma_monotone",
         [](RunConfig& c, auto k, auto v) { c.tolerances.gamma_monotone = parse_double(k, v); }},
    };
    return m;
}

const char* const kRequired[] = {"grid.nr", "grid.nz", "grid.Lr", "grid.Lz", "run.t_end"};

} // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::set<std::string, std::less<>> seen;
    std::size_t lineno = 0;
    while (!text.empty()) {
        ++lineno;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const auto where = "line " + std::to_string(lineno) + ": ";
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'section.key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto dot = key.find('.');
        if (dot == std::string_view::npos || dot == 0 || dot + 1 == key.size() ||
            key.find('.', dot + 1) != std::string_view::npos)
            throw ConfigError(where + "key '" + std::string(key) + "' must have the form section.key");
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
        if (!seen.insert(std::string(key)).second)
            throw ConfigError(where + "duplicate key '" + std::string(key) + "'");
        if (value.empty()) throw ConfigError(where + "empty value for '" + std::string(key) + "'");
        try {
            it->second(c, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    for (const char* k : kRequired)
        if (!seen.contains(std::string_view(k))) throw ConfigError(std::string(k) + " missing");
    if (seen.contains(std::string_view("ring.amplitude")) && seen.contains(std::string_view("ring.omega_l2")))
        throw ConfigError("ring.amplitude and ring.omega_l2 are mutually exclusive");
    c.density.amplitude = c.density_peak;
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& c) {
    if (c.nr < 8 || c.nz < 8) throw ConfigError("grid.nr and grid.nz must be at least 8");
    if (!(c.Lr > 0.0) || !(c.Lz > 0.0)) throw ConfigError("grid.Lr and grid.Lz must be positive");
    const MeridionalGrid g = c.grid();
    try {
        c.step.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(std::string("step: ") + e.what());
    }
    if (!(c.t_end >= 0.0)) throw ConfigError("run.t_end must be non-negative");
    if (!(c.record_interval > 0.0)) throw ConfigError("run.record_interval must be positive");
    if (!(c.snapshot_interval > 0.0)) throw ConfigError("run.snapshot_interval must be positive");
    if (!(c.support_threshold > 0.0) || c.support_threshold >= 1.0)
        throw ConfigError("support.threshold must lie in (0, 1)");
    if (c.output.empty()) throw ConfigError("run.output must not be empty");

    if (!(c.ring.r0 > 0.0) || !(c.ring.sigma > 0.0)) throw ConfigError("ring.r0 and ring.sigma must be positive");
    if (c.ring_omega_l2 && !(*c.ring_omega_l2 >= 0.0)) throw ConfigError("ring.omega_l2 must be non-negative");

    if (c.density_peak < 0.0) throw ConfigError("density.peak must be non-negative");
    if (c.density_peak > 0.0) {
        const double clearance = 5.0 * g.dr();
        if (!(c.density.r1 >= clearance))
            throw ConfigError("density.r1 = " + num(c.density.r1) +
                              " violates the axis-clearance hypothesis: the initial density support must stay "
                              "at positive distance from the symmetry axis (need r1 >= 4 dr past the first "
                              "off-axis row, i.e. r1 >= " + num(clearance) + ")");
        if (!(c.density.r2 > c.density.r1)) throw ConfigError("density.r2 must exceed density.r1");
        if (c.density.r2 > 0.75 * c.Lr)
            throw ConfigError("density.r2 must stay at least Lr/4 from the outer boundary (r2 <= " +
                              num(0.75 * c.Lr) + ")");
        if (!(c.density.h > 0.0)) throw ConfigError("density.h must be positive");
        if (std::abs(c.density.z0) + c.density.h > 0.75 * c.Lz)
            throw ConfigError("density support must stay at least Lz/4 from z = +-Lz");
    }
    if (c.mollify > 0 && 1.0 / c.mollify < 2.0 * std::max(g.dr(), g.dz()))
        throw ConfigError("init.mollify: radius 1/n must be at least 2 max(dr, dz)");
    for (const auto& p : c.seeds)
        if (!(p.r >= 0.0 && p.r <= c.Lr && std::abs(p.z) <= c.Lz))
            throw ConfigError("particle seed outside the grid");
    const auto& t = c.tolerances;
    for (double v : {t.rho_linf, t.rho_l2, t.v_l2, t.energy, t.gamma_l2, t.support_rel, t.rho_over_r, t.gamma_monotone})
        if (!(v >= 0.0)) throw ConfigError("check tolerances must be non-negative");
}

std::string canonical_config(const RunConfig& c) {
    std::ostringstream os;
    auto line = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
    line("grid.nr", std::to_string(c.nr));
    line("grid.nz", std::to_string(c.nz));
    line("grid.Lr", num(c.Lr));
    line("grid.Lz", num(c.Lz));
    if (c.ring_omega_l2) line("ring.omega_l2", num(*c.ring_omega_l2));
    else line("ring.amplitude", num(c.ring.amplitude));
    line("ring.r0", num(c.ring.r0));
    line("ring.z0", num(c.ring.z0));
    line("ring.sigma", num(c.ring.sigma));
    line("density.peak", num(c.density_peak));
    line("density.r1", num(c.density.r1));
    line("density.r2", num(c.density.r2));
    line("density.z0", num(c.density.z0));
    line("density.h", num(c.density.h));
    line("init.mollify", std::to_string(c.mollify));
    line("step.cfl_advect", num(c.step.cfl_advect));
    line("step.cfl_diffuse", num(c.step.cfl_diffuse));
    line("step.dt_max", num(c.step.dt_max));
    line("step.scheme", c.step.scheme == TimeScheme::IMEX ? "imex" : "explicit");
    line("step.transport", c.step.transport == DensityTransport::Characteristics ? "characteristics" : "direct");
    line("run.t_end", num(c.t_end));
    line("run.record_interval", num(c.record_interval));
    line("run.snapshot_interval", num(c.snapshot_interval));
    line("run.output", c.output);
    line("run.seed", std::to_string(c.seed));
    std::string seeds;
    for (const auto& p : c.seeds) {
        if (!seeds.empty()) seeds += "; ";
        seeds += num(p.r) + "," + num(p.z);
        if (p.theta != 0.0) seeds += "," + num(p.theta);
    }
    if (!seeds.empty()) line("particles.seeds", seeds);
    line("support.threshold", num(c.support_threshold));
    const auto& t = c.tolerances;
    line("checks.rho_linf", num(t.rho_linf));
    line("checks.rho_l2", num(t.rho_l2));
    line("checks.v_l2", num(t.v_l2));
    line("checks.energy", num(t.energy));
    line("checks.gamma_l2", num(t.gamma_l2));
    line("checks.support_rel", num(t.support_rel));
    line("checks.rho_over_r", num(t.rho_over_r));
    line("checks.gamma_monotone", num(t.gamma_monotone));
    return os.str();
}

} // namespace axibouss
