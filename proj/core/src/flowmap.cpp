#include "axibouss/flowmap.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "axibouss/errors.hpp"
#include "axibouss/interp.hpp"

namespace axibouss {

MeridionalVelocity FrozenVelocity::sample(double, double r, double z) const {
    return {sample_bicubic(v_.vr, r, z), sample_bicubic(v_.vz, r, z)};
}

void VelocityHistory::push(double t, VelocityField v) {
    if (!(v.grid() == grid_)) throw InvalidParameter("velocity frame on a different grid");
    if (!times_.empty() && !(t > times_.back())) throw InvalidInput("velocity frames must have increasing times");
    times_.push_back(t);
    frames_.push_back(std::move(v));
}

void VelocityHistory::keep_last() {
    if (times_.size() <= 1) return;
    times_.erase(times_.begin(), times_.end() - 1);
    frames_.erase(frames_.begin(), frames_.end() - 1);
}

void VelocityHistory::require(double t) const {
    if (times_.empty()) throw InvalidInput("velocity history is empty");
    const double slack = 1e-12 * std::max(1.0, std::abs(times_.back()));
    if (t < times_.front() - slack || t > times_.back() + slack)
        throw InvalidInput("time " + std::to_string(t) + " outside the stored velocity history");
}

MeridionalVelocity VelocityHistory::sample(double t, double r, double z) const {
    require(t);
    if (times_.size() == 1) return {sample_bicubic(frames_[0].vr, r, z), sample_bicubic(frames_[0].vz, r, z)};
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    k = std::min(k, times_.size() - 2);
    const double w = std::clamp((t - times_[k]) / (times_[k + 1] - times_[k]), 0.0, 1.0);
    const auto& a = frames_[k];
    const auto& b = frames_[k + 1];
    return {(1.0 - w) * sample_bicubic(a.vr, r, z) + w * sample_bicubic(b.vr, r, z),
            (1.0 - w) * sample_bicubic(a.vz, r, z) + w * sample_bicubic(b.vz, r, z)};
}

namespace {

bool outside(const MeridionalGrid& g, double r, double z) { return r > g.Lr() || std::abs(z) > g.Lz(); }

} // namespace

ParticleAdvance advance_particles(std::vector<Particle> particles, const VelocitySource& velocity, double t0,
                                  double t1, double dt) {
    if (!(dt > 0.0)) throw InvalidParameter("particle step dt must be positive");
    velocity.require(t0);
    velocity.require(t1);
    ParticleAdvance out;
    const double span = t1 - t0;
    if (span == 0.0) {
        out.particles = std::move(particles);
        return out;
    }
    const auto steps = static_cast<long>(std::ceil(std::abs(span) / dt - 1e-9));
    const double h = span / static_cast<double>(std::max(steps, 1L));
    const auto& g = velocity.grid();

    for (auto& p : particles) {
        if (p.escaped) continue;
        double r = p.r, z = p.z;
        for (long n = 0; n < steps; ++n) {
            const double t = t0 + static_cast<double>(n) * h;
            const auto k1 = velocity.sample(t, r, z);
            const auto k2 = velocity.sample(t + 0.5 * h, r + 0.5 * h * k1.vr, z + 0.5 * h * k1.vz);
            const auto k3 = velocity.sample(t + 0.5 * h, r + 0.5 * h * k2.vr, z + 0.5 * h * k2.vz);
            const double t_end = n + 1 == steps ? t1 : t + h;
            const auto k4 = velocity.sample(t_end, r + h * k3.vr, z + h * k3.vz);
            r += h / 6.0 * (k1.vr + 2.0 * k2.vr + 2.0 * k3.vr + k4.vr);
            z += h / 6.0 * (k1.vz + 2.0 * k2.vz + 2.0 * k3.vz + k4.vz);
            if (r < 0.0) {
                r = 0.0;
                ++out.axis_clamps;
            }
            if (outside(g, r, z)) {
                p.escaped = true;
                ++out.newly_escaped;
                break;
            }
        }
        if (!p.escaped) {
            p.r = r;
            p.z = z;
        }
    }
    out.particles = std::move(particles);
    return out;
}

void TimeSeries::push(double time, double v) {
    if (!t.empty() && !(time > t.back())) throw InvalidInput("time series must increase strictly");
    t.push_back(time);
    value.push_back(v);
}

double TimeSeries::integral(double a, double b) const {
    if (a > b) return -integral(b, a);
    if (a == b) return 0.0;
    if (t.empty()) throw InvalidInput("empty time series");
    const double slack = 1e-12 * std::max(1.0, std::abs(t.back()));
    if (a < t.front() - slack || b > t.back() + slack) throw InvalidInput("time series does not cover the interval");
    auto interp = [&](std::size_t k, double x) {
        const double w = (x - t[k]) / (t[k + 1] - t[k]);
        return (1.0 - w) * value[k] + w * value[k + 1];
    };
    if (t.size() == 1) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double lo = std::max(a, t[k]);
        const double hi = std::min(b, t[k + 1]);
        if (hi <= lo) continue;
        acc += 0.5 * (hi - lo) * (interp(k, lo) + interp(k, hi));
    }
    return acc;
}

AxisEnvelope axis_distance_bounds_check(double r_initial, double r_observed, const TimeSeries& vr_over_r_sup,
                                        double s, double t) {
    const double e = std::abs(vr_over_r_sup.integral(s, t));
    return {r_initial * std::exp(-e), r_observed, r_initial * std::exp(e)};
}

SupportMetrics support_metrics(const ScalarField2D& rho, double threshold) {
    if (!(threshold > 0.0)) throw InvalidParameter("support threshold must be positive");
    const auto& g = rho.grid();
    SupportMetrics m;
    m.threshold = threshold;
    std::size_t i_min = g.nr(), j_min = g.nz(), j_max = 0;
    for (std::size_t i = 0; i < g.nr(); ++i)
        for (std::size_t j = 0; j < g.nz(); ++j)
            if (std::abs(rho(i, j)) > threshold) {
                i_min = std::min(i_min, i);
                j_min = std::min(j_min, j);
                j_max = std::max(j_max, j);
            }
    if (i_min == g.nr()) return m;
    m.empty = false;
    m.dist_to_axis = std::max(0.0, g.r(i_min) - 0.5 * g.dr());
    m.z_diameter = g.z(j_max) - g.z(j_min) + g.dz();
    return m;
}

double rho_over_r_l2_sq(const ScalarField2D& rho) {
    const auto& g = rho.grid();
    ScalarField2D q(g, Parity::Even);
    for (std::size_t i = 1; i < g.nr(); ++i) {
        const double inv_r = 1.0 / g.r(i);
        for (std::size_t j = 0; j < g.nz(); ++j) {
            const double v = rho(i, j) * inv_r;
            q.at(i, j) = v * v;
        }
    }
    return volume_integral(q);
}

RhoOverRBound rho_over_r_bound_check(double rho_over_r_sq, double dist_to_axis, double dr, double rho0_l2,
                                     double rho0_linf, double r0, double d0, double int_vr_over_r,
                                     double int_speed) {
    RhoOverRBound b{rho_over_r_sq, kInfinity, false};
    if (!(r0 > 0.0) || dist_to_axis < 2.0 * dr) {
        b.suspended = true;
        return b;
    }
    b.rhs = rho0_l2 * rho0_l2 / (r0 * r0) +
            2.0 * std::numbers::pi * rho0_linf * rho0_linf * int_vr_over_r * (d0 + 2.0 * int_speed);
    return b;
}

double flow_jacobian_det(const VelocitySource& velocity, double r, double z, double t0, double t1, double dt,
                         double eps) {
    if (!(r > eps)) throw InvalidParameter("triad must stay off the axis");
    std::vector<Particle> triad{{r, 0.0, z, false}, {r + eps, 0.0, z, false}, {r, 0.0, z + eps, false}};
    const auto moved = advance_particles(std::move(triad), velocity, t0, t1, dt).particles;
    for (const auto& p : moved)
        if (p.escaped) throw InvalidInput("triad particle left the grid");
    const double a = (moved[1].r - moved[0].r) / eps, b = (moved[2].r - moved[0].r) / eps;
    const double c = (moved[1].z - moved[0].z) / eps, d = (moved[2].z - moved[0].z) / eps;
    return (a * d - b * c) * moved[0].r / r;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

void write_particles_csv_header(std::ostream& os) { os << "t,id,r,theta,z,escaped\n"; }

void write_particles_csv_rows(std::ostream& os, double t, const std::vector<Particle>& particles) {
    for (std::size_t k = 0; k < particles.size(); ++k) {
        const auto& p = particles[k];
        os << fmt(t) << ',' << k << ',' << fmt(p.r) << ',' << fmt(p.theta) << ',' << fmt(p.z) << ','
           << (p.escaped ? 1 : 0) << '\n';
    }
}

} // namespace axibouss
