#include "axibouss/diagnostics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "axibouss/errors.hpp"

namespace axibouss {

History::History(double support_threshold) : threshold_(support_threshold) {
    if (!(support_threshold > 0.0)) throw InvalidParameter("support threshold must be positive");
}

void History::observe(const FlowState& s) {
    if (started_ && s.t == t_) return;
    if (started_ && !(s.t > t_)) throw InvalidInput("history states must advance in time");
    const ScalarField2D gamma = axis_quotient(s.omega_theta);
    const double g_h1 = h1_seminorm(gamma);
    const Rates now{vr_over_r(s.velocity).max_abs(), s.velocity.max_speed(), velocity_gradient_l2_sq(s.velocity),
                    rho_over_r_l2_sq(s.rho), g_h1 * g_h1};
    if (started_) {
        const double h = 0.5 * (s.t - t_);
        i_q_ += h * (last_.vr_over_r_linf + now.vr_over_r_linf);
        i_v_ += h * (last_.v_linf + now.v_linf);
        i_grad_ += h * (last_.grad_v_sq + now.grad_v_sq);
        i_rho_ += h * (last_.rho_over_r_sq + now.rho_over_r_sq);
        i_gamma_ += h * (last_.gamma_h1_sq + now.gamma_h1_sq);
    }
    vr_over_r_sup_.push(s.t, now.vr_over_r_linf);
    started_ = true;
    t_ = s.t;
    last_ = now;
}

DiagnosticsRecord record(const FlowState& s, const History& h) {
    if (h.last_time() != s.t) throw InvalidInput("history has not observed this state");
    const auto& g = s.grid();
    DiagnosticsRecord d;
    d.t = s.t;
    d.v_l2 = velocity_l2(s.velocity);
    d.grad_v_l2 = std::sqrt(velocity_gradient_l2_sq(s.velocity));
    d.v_linf = s.velocity.max_speed();
    d.rho_l2 = lp_norm(s.rho, 2.0);
    d.rho_linf = lp_norm(s.rho, kInfinity);
    d.omega_l2 = lp_norm(s.omega_theta, 2.0);
    d.omega_h1 = azimuthal_vector_h1(s.omega_theta);
    const ScalarField2D gamma = axis_quotient(s.omega_theta);
    d.gamma_l2 = lp_norm(gamma, 2.0);
    d.gamma_linf = lp_norm(gamma, kInfinity);
    d.gamma_h1 = h1_seminorm(gamma);
    d.vr_over_r_linf = vr_over_r(s.velocity).max_abs();
    d.rho_over_r_l2 = std::sqrt(rho_over_r_l2_sq(s.rho));
    d.support = support_metrics(s.rho, h.support_threshold());
    d.int_vr_over_r_linf = h.int_vr_over_r_linf();
    d.int_v_linf = h.int_v_linf();
    d.int_grad_v_l2_sq = h.int_grad_v_l2_sq();
    d.int_rho_over_r_l2_sq = h.int_rho_over_r_l2_sq();
    d.int_gamma_h1_sq = h.int_gamma_h1_sq();
    d.dr = g.dr();
    d.dz = g.dz();
    return d;
}

const char* to_string(CheckStatus s) noexcept {
    switch (s) {
    case CheckStatus::Asserted: return "ASSERTED";
    case CheckStatus::Reported: return "REPORTED";
    case CheckStatus::Suspended: return "SUSPENDED";
    }
    return "?";
}

bool InequalityCheck::passed() const noexcept {
    if (status != CheckStatus::Asserted) return true;
    return margin >= -tolerance;
}

namespace {

InequalityCheck make(const std::string& name, double t, double lhs, double rhs, double tol, CheckStatus st,
                     const char* anchor) {
    InequalityCheck c;
    c.name = name;
    c.t = t;
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = rhs - lhs;
    c.tolerance = tol;
    c.status = st;
    c.paper_anchor = anchor;
    return c;
}

} // namespace

std::vector<InequalityCheck> evaluate_checks(const std::vector<DiagnosticsRecord>& series, const CheckTolerances& tol) {
    if (series.empty()) throw InvalidInput("diagnostics series is empty");
    for (std::size_t k = 1; k < series.size(); ++k)
        if (!(series[k].t > series[k - 1].t)) throw InvalidInput("diagnostics series is not ordered in time");

    using enum CheckStatus;
    const DiagnosticsRecord& d0 = series.front();
    const bool homogeneous = d0.rho_linf == 0.0;
    const double r0 = d0.support.dist_to_axis;
    const double diam0 = d0.support.z_diameter;
    const double v0_h1 = std::hypot(d0.v_l2, d0.grad_v_l2);

    std::vector<InequalityCheck> out;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const DiagnosticsRecord& d = series[k];
        const double t = d.t;

        out.push_back(make("rho-Linf-max-principle", t, d.rho_linf, d0.rho_linf, tol.rho_linf * d0.rho_linf, Asserted,
                           "||rho(t)||_inf <= ||rho_0||_inf"));
        out.push_back(make("rho-L2", t, d.rho_l2, d0.rho_l2, tol.rho_l2 * d0.rho_l2, Asserted,
                           "||rho(t)||_L2 <= ||rho_0||_L2"));
        {
            const double rhs = d0.v_l2 + t * d0.rho_l2;
            out.push_back(make("v-L2-linear", t, d.v_l2, rhs, tol.v_l2 * rhs, Asserted,
                               "||v(t)||_L2 <= ||v_0||_L2 + t ||rho_0||_L2"));
        }
        {
            const double lhs = 0.5 * d.v_l2 * d.v_l2 + d.int_grad_v_l2_sq;
            const double rhs = 0.5 * d0.v_l2 * d0.v_l2 + (d0.v_l2 + t * d0.rho_l2) * d0.rho_l2 * t;
            out.push_back(make("energy-budget", t, lhs, rhs, tol.energy * rhs, Asserted,
                               "1/2 ||v(t)||^2 + int ||grad v||^2 <= 1/2 ||v_0||^2 + (||v_0|| + t ||rho_0||) ||rho_0|| t"));
        }
        {
            const double lhs = d.gamma_l2 * d.gamma_l2 + d.int_gamma_h1_sq;
            const double rhs = d0.gamma_l2 * d0.gamma_l2 + d.int_rho_over_r_l2_sq;
            out.push_back(make("gamma-L2-growth", t, lhs, rhs, tol.gamma_l2 * rhs, Asserted,
                               "||omega/r(t)||^2 + int ||grad(omega/r)||^2 <= ||omega/r(0)||^2 + int ||rho/r||^2"));
        }

        const bool support_ok = !d0.support.empty && !d.support.empty && std::isfinite(r0);
        {
            const char* anchor = "d(supp rho(t), axis) >= r_0 exp(-int ||v^r/r||_inf)";
            if (support_ok) {
                const double lhs = r0 * std::exp(-d.int_vr_over_r_linf);
                out.push_back(make("support-axis-lower", t, lhs, d.support.dist_to_axis,
                                   d.dr + tol.support_rel * lhs, Asserted, anchor));
            } else {
                out.push_back(make("support-axis-lower", t, 0.0, 0.0, 0.0, Suspended, anchor));
            }
        }
        {
            const char* anchor = "d(t) <= d_0 + 2 int ||v||_inf";
            if (support_ok) {
                const double rhs = diam0 + 2.0 * d.int_v_linf;
                out.push_back(make("support-z-diameter", t, d.support.z_diameter, rhs,
                                   2.0 * d.dz + tol.support_rel * rhs, Asserted, anchor));
            } else {
                out.push_back(make("support-z-diameter", t, 0.0, 0.0, 0.0, Suspended, anchor));
            }
        }
        {
            const char* anchor =
                "||rho/r||^2 <= ||rho_0||^2 / r_0^2 + 2 pi ||rho_0||_inf^2 int ||v^r/r||_inf (d_0 + 2 int ||v||_inf)";
            const double lhs = d.rho_over_r_l2 * d.rho_over_r_l2;
            const auto b = support_ok ? rho_over_r_bound_check(lhs, d.support.dist_to_axis, d.dr, d0.rho_l2,
                                                               d0.rho_linf, r0, diam0, d.int_vr_over_r_linf,
                                                               d.int_v_linf)
                                      : RhoOverRBound{lhs, 0.0, true};
            if (b.suspended)
                out.push_back(make("rho-over-r-quadratic", t, lhs, 0.0, 0.0, Suspended, anchor));
            else
                out.push_back(make("rho-over-r-quadratic", t, b.lhs, b.rhs, tol.rho_over_r * b.rhs, Asserted, anchor));
        }

        const double bs_v = std::sqrt(d.omega_l2 * d.omega_h1);
        out.push_back(make("biot-savart-v", t, d.v_linf, bs_v, 0.0, Reported,
                           "||v||_inf <= C ||omega||_L2^(1/2) ||omega||_H1^(1/2)"));
        const double bs_q = std::sqrt(d.gamma_l2 * d.gamma_h1);
        out.push_back(make("biot-savart-vr-over-r", t, d.vr_over_r_linf, bs_q, 0.0, Reported,
                           "||v^r/r||_inf <= C ||omega/r||_L2^(1/2) ||omega/r||_H1^(1/2)"));
        out.push_back(make("strong-estimate-envelope-v-H1", t, std::hypot(d.v_l2, d.grad_v_l2), v0_h1, 0.0, Reported,
                           "||v(t)||_H1 <= C_0 exp(exp(C_0 t^9))"));
        out.push_back(make("strong-estimate-envelope-gamma-L2", t, d.gamma_l2, d0.gamma_l2, 0.0, Reported,
                           "||omega/r(t)||_L2 <= C_0 exp(exp(C_0 t^9))"));

        if (homogeneous && k > 0) {
            const DiagnosticsRecord& p = series[k - 1];
            out.push_back(make("gamma-Lp-monotone-p2", t, d.gamma_l2, p.gamma_l2, tol.gamma_monotone * p.gamma_l2,
                               Asserted, "||Gamma(t)||_Lp <= ||Gamma_0||_Lp, p = 2"));
            out.push_back(make("gamma-Lp-monotone-pinf", t, d.gamma_linf, p.gamma_linf,
                               tol.gamma_monotone * p.gamma_linf, Asserted, "||Gamma(t)||_Lp <= ||Gamma_0||_Lp, p = inf"));
        }
    }
    return out;
}

bool all_asserted_pass(const std::vector<InequalityCheck>& checks) {
    for (const auto& c : checks)
        if (!c.passed()) return false;
    return true;
}

namespace {

struct Column {
    const char* name;
    double (*get)(const DiagnosticsRecord&);
    void (*set)(DiagnosticsRecord&, double);
};

#define AXB_COL(field) \
    Column { #field, [](const DiagnosticsRecord& r) { return r.field; }, [](DiagnosticsRecord& r, double v) { r.field = v; } }

const std::array<Column, 24>& columns() {
    static const std::array<Column, 24> cols = {
        AXB_COL(t),
        AXB_COL(v_l2),
        AXB_COL(grad_v_l2),
        AXB_COL(v_linf),
        AXB_COL(rho_l2),
        AXB_COL(rho_linf),
        AXB_COL(omega_l2),
        AXB_COL(omega_h1),
        AXB_COL(gamma_l2),
        AXB_COL(gamma_linf),
        AXB_COL(gamma_h1),
        AXB_COL(vr_over_r_linf),
        AXB_COL(rho_over_r_l2),
        Column{"dist_to_axis", [](const DiagnosticsRecord& r) { return r.support.dist_to_axis; },
               [](DiagnosticsRecord& r, double v) { r.support.dist_to_axis = v; }},
        Column{"z_diameter", [](const DiagnosticsRecord& r) { return r.support.z_diameter; },
               [](DiagnosticsRecord& r, double v) { r.support.z_diameter = v; }},
        Column{"support_threshold", [](const DiagnosticsRecord& r) { return r.support.threshold; },
               [](DiagnosticsRecord& r, double v) { r.support.threshold = v; }},
        Column{"support_empty", [](const DiagnosticsRecord& r) { return r.support.empty ? 1.0 : 0.0; },
               [](DiagnosticsRecord& r, double v) { r.support.empty = v != 0.0; }},
        AXB_COL(int_vr_over_r_linf),
        AXB_COL(int_v_linf),
        AXB_COL(int_grad_v_l2_sq),
        AXB_COL(int_rho_over_r_l2_sq),
        AXB_COL(int_gamma_h1_sq),
        AXB_COL(dr),
        AXB_COL(dz),
    };
    return cols;
}

#undef AXB_COL

void put(std::ostream& os, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    os.write(buf, res.ptr - buf);
}

} // namespace

std::string diagnostics_csv_header() {
    std::string h;
    for (const auto& c : columns()) {
        if (!h.empty()) h += ',';
        h += c.name;
    }
    return h;
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
    bool first = true;
    for (const auto& c : columns()) {
        if (!first) os << ',';
        first = false;
        put(os, c.get(r));
    }
    os << '\n';
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& series) {
    os << diagnostics_csv_header() << '\n';
    for (const auto& r : series) write_diagnostics_row(os, r);
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidInput("diagnostics CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != diagnostics_csv_header()) throw InvalidInput("diagnostics CSV header does not match");
    std::vector<DiagnosticsRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        DiagnosticsRecord r;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t k = 0; k < columns().size(); ++k) {
            double v = 0.0;
            auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc())
                throw InvalidInput("bad number in diagnostics CSV line " + std::to_string(lineno));
            columns()[k].set(r, v);
            p = res.ptr;
            if (k + 1 < columns().size()) {
                if (p == end || *p != ',')
                    throw InvalidInput("too few columns in diagnostics CSV line " + std::to_string(lineno));
                ++p;
            }
        }
        if (p != end) throw InvalidInput("too many columns in diagnostics CSV line " + std::to_string(lineno));
        out.push_back(r);
    }
    return out;
}

void write_checks_json(std::ostream& os, const std::vector<InequalityCheck>& checks) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json o;
        o["name"] = c.name;
        o["t"] = c.t;
        o["lhs"] = c.lhs;
        o["rhs"] = c.rhs;
        o["margin"] = c.margin;
        o["tolerance"] = c.tolerance;
        o["status"] = to_string(c.status);
        o["passed"] = c.passed();
        o["paper_anchor"] = c.paper_anchor;
        arr.push_back(o);
    }
    os << arr.dump(1) << '\n';
}

} // namespace axibouss
