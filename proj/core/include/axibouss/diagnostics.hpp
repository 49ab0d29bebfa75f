#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "axibouss/evolution.hpp"
#include "axibouss/flowmap.hpp"

namespace axibouss {

struct DiagnosticsRecord {
    double t = 0.0;
    double v_l2 = 0.0;
    double grad_v_l2 = 0.0;
    double v_linf = 0.0;
    double rho_l2 = 0.0;
    double rho_linf = 0.0;
    double omega_l2 = 0.0;
    double omega_h1 = 0.0;
    double gamma_l2 = 0.0;
    double gamma_linf = 0.0;
    double gamma_h1 = 0.0;
    double vr_over_r_linf = 0.0;
    double rho_over_r_l2 = 0.0;
    SupportMetrics support;
    // Cumulative trapezoidal time integrals.
    double int_vr_over_r_linf = 0.0;
    double int_v_linf = 0.0;
    double int_grad_v_l2_sq = 0.0;
    double int_rho_over_r_l2_sq = 0.0;
    double int_gamma_h1_sq = 0.0;
    double dr = 0.0;
    double dz = 0.0;
};

/// Time integrals accumulated over every observed state, so records taken at coarse
/// intervals still carry fine quadrature.
class History {
  public:
    /// threshold: absolute density level that defines the support.
    explicit History(double support_threshold);

    /// Adds a state; times must increase strictly (repeating the last time is a no-op).
    void observe(const FlowState& s);

    double support_threshold() const noexcept { return threshold_; }
    double last_time() const noexcept { return t_; }
    const TimeSeries& vr_over_r_sup() const noexcept { return vr_over_r_sup_; }

    double int_vr_over_r_linf() const noexcept { return i_q_; }
    double int_v_linf() const noexcept { return i_v_; }
    double int_grad_v_l2_sq() const noexcept { return i_grad_; }
    double int_rho_over_r_l2_sq() const noexcept { return i_rho_; }
    double int_gamma_h1_sq() const noexcept { return i_gamma_; }

  private:
    struct Rates {
        double vr_over_r_linf, v_linf, grad_v_sq, rho_over_r_sq, gamma_h1_sq;
    };
    double threshold_;
    bool started_ = false;
    double t_ = 0.0;
    Rates last_{};
    double i_q_ = 0.0, i_v_ = 0.0, i_grad_ = 0.0, i_rho_ = 0.0, i_gamma_ = 0.0;
    TimeSeries vr_over_r_sup_;
};

/// All monitored norms of `s`; integrals are taken from `h`, which must have observed s.
DiagnosticsRecord record(const FlowState& s, const History& h);

enum class CheckStatus { Asserted, Reported, Suspended };
const char* to_string(CheckStatus s) noexcept;

struct InequalityCheck {
    std::string name;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;    // rhs - lhs
    double tolerance = 0.0; // absolute slack
    CheckStatus status = CheckStatus::Reported;
    std::string paper_anchor;

    /// Reported and suspended checks always pass.
    bool passed() const noexcept;
};

struct CheckTolerances {
    double rho_linf = 0.0;
    double rho_l2 = 1e-3;
    double v_l2 = 1e-2;
    double energy = 1e-2;
    double gamma_l2 = 5e-2;
    double support_rel = 1e-2; // on top of dr (axis) and 2 dz (diameter)
    double rho_over_r = 1e-2;
    double gamma_monotone = 1e-6;
};

/// Every check at every record time. The first record is the initial state.
/// Throws InvalidInput if the series is empty or not strictly increasing in t.
std::vector<InequalityCheck> evaluate_checks(const std::vector<DiagnosticsRecord>& series,
                                             const CheckTolerances& tol = {});

bool all_asserted_pass(const std::vector<InequalityCheck>& checks);

/// Header line of the diagnostics CSV (column names, comma separated, no newline).
std::string diagnostics_csv_header();
void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& series);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r);
/// Parses a CSV written by write_diagnostics_csv. Throws InvalidInput on any mismatch.
std::vector<DiagnosticsRecord> read_diagnostics_csv(std::istream& is);

void write_checks_json(std::ostream& os, const std::vector<InequalityCheck>& checks);

} // namespace axibouss
