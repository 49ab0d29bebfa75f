#include "axibouss/lpaley.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <ostream>

#include <fftw3.h>

#include "axibouss/errors.hpp"
#include "axibouss/interp.hpp"

namespace axibouss {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

double smoothstep5(double t) noexcept {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0);
}

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

} // namespace

double CutoffPair::chi(double xi) noexcept {
    xi = std::abs(xi);
    if (xi <= kInner) return 1.0;
    if (xi >= kOuter) return 0.0;
    return 1.0 - smoothstep5((xi - kInner) / (kOuter - kInner));
}

double CutoffPair::phi(double xi) noexcept { return chi(0.5 * xi) - chi(xi); }

double CutoffPair::block_symbol(int q, double xi) noexcept {
    if (q < 0) return chi(xi);
    return phi(std::ldexp(xi, -q));
}

std::string CutoffPair::identity_hash() {
    char desc[160];
    std::snprintf(desc, sizeof(desc), "chi=1-smoothstep5((|xi|-%.17g)/(%.17g-%.17g));phi=chi(xi/2)-chi(xi)", kInner,
                  kOuter, kInner);
    std::uint64_t h = 14695981039346656037ull;
    for (const char* c = desc; *c; ++c) {
        h ^= static_cast<unsigned char>(*c);
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

double BoxField::spacing() const noexcept { return 2.0 * std::numbers::pi * scale / static_cast<double>(n); }

double BoxField::coord(std::size_t a) const noexcept {
    return -std::numbers::pi * scale + static_cast<double>(a) * spacing();
}

double box_lp_norm(const BoxField& u, double p) {
    if (std::isnan(p) || p < 1.0) throw InvalidParameter("box_lp_norm requires p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : u.values) m = std::max(m, std::abs(v));
        return m;
    }
    const double h = u.spacing();
    double acc = 0.0;
    for (double v : u.values) acc += std::pow(std::abs(v), p);
    return std::pow(acc * h * h * h, 1.0 / p);
}

void apply_taper(BoxField& u) {
    const double side = 2.0 * std::numbers::pi * u.scale;
    const double width = side / 16.0;
    std::vector<double> w(u.n);
    for (std::size_t a = 0; a < u.n; ++a) {
        const double x = u.coord(a);
        const double dist = std::min(x + 0.5 * side, 0.5 * side - x);
        w[a] = dist < width ? 0.5 * (1.0 - std::cos(std::numbers::pi * dist / width)) : 1.0;
    }
    for (std::size_t a = 0; a < u.n; ++a)
        for (std::size_t b = 0; b < u.n; ++b)
            for (std::size_t c = 0; c < u.n; ++c) u.at(a, b, c) *= w[a] * w[b] * w[c];
}

namespace {

template <class F>
BoxField embed_with(const MeridionalGrid& g, std::size_t n, bool taper, F&& value) {
    if (!is_power_of_two(n)) throw InvalidParameter("box resolution must be a power of two");
    const double side = 2.0 * std::max(g.Lr(), g.Lz());
    BoxField u(n, side / (2.0 * std::numbers::pi));
    for (std::size_t a = 0; a < n; ++a) {
        const double x = u.coord(a);
        for (std::size_t b = 0; b < n; ++b) {
            const double y = u.coord(b);
            const double rr = std::hypot(x, y);
            for (std::size_t c = 0; c < n; ++c) {
                const double z = u.coord(c);
                if (rr > g.Lr() || std::abs(z) > g.Lz()) continue;
                u.at(a, b, c) = value(x, y, rr, z);
            }
        }
    }
    if (taper) apply_taper(u);
    return u;
}

} // namespace

BoxField embed_cartesian(const ScalarField2D& f, std::size_t n, bool taper) {
    return embed_with(f.grid(), n, taper,
                      [&](double, double, double rr, double z) { return sample_bicubic(f, rr, z); });
}

std::array<BoxField, 3> embed_cartesian_velocity(const VelocityField& v, std::size_t n, bool taper) {
    const auto& g = v.grid();
    auto radial = [&](double x, double rr) { return rr > 0.0 ? x / rr : 0.0; };
    return {embed_with(g, n, taper,
                       [&](double x, double, double rr, double z) { return sample_bicubic(v.vr, rr, z) * radial(x, rr); }),
            embed_with(g, n, taper,
                       [&](double, double y, double rr, double z) { return sample_bicubic(v.vr, rr, z) * radial(y, rr); }),
            embed_with(g, n, taper, [&](double, double, double rr, double z) { return sample_bicubic(v.vz, rr, z); })};
}

const BoxField& DyadicDecomposition::block(int q) const {
    for (const auto& b : blocks)
        if (b.q == q) return b.field;
    throw InvalidParameter("no dyadic block q = " + std::to_string(q));
}

struct DyadicTransform::Plans {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

DyadicTransform::DyadicTransform(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
    if (!is_power_of_two(n)) throw InvalidParameter("box resolution must be a power of two");
    const int ni = static_cast<int>(n);
    const std::size_t nc = n * n * (n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    double* real = fftw_alloc_real(n * n * n);
    fftw_complex* spec = fftw_alloc_complex(nc);
    plans_->forward = fftw_plan_dft_r2c_3d(ni, ni, ni, real, spec, FFTW_ESTIMATE);
    plans_->backward = fftw_plan_dft_c2r_3d(ni, ni, ni, spec, real, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(spec);
    if (!plans_->forward || !plans_->backward) throw Error("FFTW could not plan the 3D transform");
}

DyadicTransform::~DyadicTransform() = default;

long DyadicTransform::wavenumber(std::size_t a) const noexcept {
    const auto n = static_cast<long>(n_);
    const auto k = static_cast<long>(a);
    return k <= n / 2 ? k : k - n;
}

double DyadicTransform::frequency(long ka, long kb, long kc, double scale) noexcept {
    return std::sqrt(static_cast<double>(ka * ka + kb * kb + kc * kc)) / scale;
}

int DyadicTransform::q_max(double scale) const noexcept {
    const double half = static_cast<double>(n_ / 2);
    const double xi_max = std::sqrt(3.0) * half / scale;
    int q = -1;
    while (CutoffPair::chi(std::ldexp(xi_max, -(q + 1))) < 1.0) ++q;
    return q;
}

namespace {

// RAII wrappers around FFTW buffers.
struct RealBuffer {
    double* p;
    explicit RealBuffer(std::size_t n) : p(fftw_alloc_real(n)) {}
    ~RealBuffer() { fftw_free(p); }
    RealBuffer(const RealBuffer&) = delete;
    RealBuffer& operator=(const RealBuffer&) = delete;
};
struct ComplexBuffer {
    fftw_complex* p;
    explicit ComplexBuffer(std::size_t n) : p(fftw_alloc_complex(n)) {}
    ~ComplexBuffer() { fftw_free(p); }
    ComplexBuffer(const ComplexBuffer&) = delete;
    ComplexBuffer& operator=(const ComplexBuffer&) = delete;
};

} // namespace

DyadicDecomposition DyadicTransform::blocks(const BoxField& u) const {
    if (u.n != n_) throw InvalidParameter("box resolution does not match the transform");
    const std::size_t n = n_, nh = n / 2 + 1, total = n * n * n, nc = n * n * nh;
    RealBuffer real(total);
    ComplexBuffer spec(nc);
    ComplexBuffer work(nc);
    std::copy(u.values.begin(), u.values.end(), real.p);
    fftw_execute_dft_r2c(plans_->forward, real.p, spec.p);

    std::vector<double> magnitude(nc);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < nh; ++c)
                magnitude[(a * n + b) * nh + c] =
                    frequency(wavenumber(a), wavenumber(b), static_cast<long>(c), u.scale);

    DyadicDecomposition d;
    d.n = n;
    d.scale = u.scale;
    d.q_max = q_max(u.scale);
    const double norm = 1.0 / static_cast<double>(total);
    for (int q = -1; q <= d.q_max; ++q) {
        for (std::size_t k = 0; k < nc; ++k) {
            const double s = CutoffPair::block_symbol(q, magnitude[k]) * norm;
            work.p[k][0] = spec.p[k][0] * s;
            work.p[k][1] = spec.p[k][1] * s;
        }
        fftw_execute_dft_c2r(plans_->backward, work.p, real.p);
        BoxField block(n, u.scale);
        std::copy(real.p, real.p + total, block.values.begin());
        d.blocks.push_back({q, std::move(block)});
    }
    return d;
}

BoxField DyadicTransform::derivative(const BoxField& u, int axis) const {
    if (u.n != n_) throw InvalidParameter("box resolution does not match the transform");
    if (axis < 0 || axis > 2) throw InvalidParameter("derivative axis must be 0, 1 or 2");
    const std::size_t n = n_, nh = n / 2 + 1, total = n * n * n, nc = n * n * nh;
    RealBuffer real(total);
    ComplexBuffer spec(nc);
    std::copy(u.values.begin(), u.values.end(), real.p);
    fftw_execute_dft_r2c(plans_->forward, real.p, spec.p);
    const double norm = 1.0 / static_cast<double>(total);
    const auto half = static_cast<long>(n / 2);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < nh; ++c) {
                const long k = axis == 0 ? wavenumber(a) : axis == 1 ? wavenumber(b) : static_cast<long>(c);
                // The Nyquist mode has no well-defined odd derivative.
                const double kk = (k == half) ? 0.0 : static_cast<double>(k) / u.scale;
                auto& z = spec.p[(a * n + b) * nh + c];
                const double re = z[0], im = z[1];
                z[0] = -kk * im * norm;
                z[1] = kk * re * norm;
            }
    fftw_execute_dft_c2r(plans_->backward, spec.p, real.p);
    BoxField out(n, u.scale);
    std::copy(real.p, real.p + total, out.values.begin());
    return out;
}

double besov_norm(const DyadicDecomposition& d, double s, double p, double r) {
    if (std::isnan(p) || p < 1.0 || std::isnan(r) || r < 1.0 || !std::isfinite(s))
        throw InvalidParameter("Besov indices need p, r in [1, inf] and finite s");
    double acc = 0.0;
    for (const auto& b : d.blocks) {
        const double term = std::pow(2.0, b.q * s) * box_lp_norm(b.field, p);
        if (std::isinf(r)) acc = std::max(acc, term);
        else acc += std::pow(term, r);
    }
    return std::isinf(r) ? acc : std::pow(acc, 1.0 / r);
}

double bernstein_ratio(const DyadicTransform& t, const BoxField& u, int q, double a) {
    const double whole = box_lp_norm(u, a);
    const DyadicDecomposition d = t.blocks(u);
    if (q < 0 || q > d.q_max) throw UndefinedRatio("Bernstein ratio needs 0 <= q <= q_max");
    const BoxField& block = d.block(q);
    const double denom = box_lp_norm(block, a);
    if (!(whole > 0.0) || denom <= 1e-12 * whole)
        throw UndefinedRatio("dyadic block " + std::to_string(q) + " vanishes; Bernstein ratio undefined");
    double best = 0.0;
    for (int axis = 0; axis < 3; ++axis) best = std::max(best, box_lp_norm(t.derivative(block, axis), a));
    return best / denom;
}

namespace {

template <class F>
void for_each_grid_frequency(const DyadicTransform& t, double scale, F&& f) {
    const std::size_t n = t.n();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                f(DyadicTransform::frequency(t.wavenumber(a), t.wavenumber(b), t.wavenumber(c), scale));
}

} // namespace

double partition_of_unity_residual(const DyadicTransform& t, double scale) {
    const int q_max = t.q_max(scale);
    double worst = 0.0;
    for_each_grid_frequency(t, scale, [&](double xi) {
        double sum = CutoffPair::chi(xi);
        for (int q = 0; q <= q_max; ++q) sum += CutoffPair::block_symbol(q, xi);
        worst = std::max(worst, std::abs(sum - 1.0));
    });
    return worst;
}

double block_overlap_residual(const DyadicTransform& t, double scale) {
    const int q_max = t.q_max(scale);
    double worst = 0.0;
    for_each_grid_frequency(t, scale, [&](double xi) {
        for (int p = 0; p <= q_max; ++p)
            for (int q = p + 2; q <= q_max; ++q)
                worst = std::max(worst, std::abs(CutoffPair::block_symbol(p, xi) * CutoffPair::block_symbol(q, xi)));
    });
    return worst;
}

void write_block_energies_csv(std::ostream& os, const DyadicDecomposition& d, double p) {
    os << "q,norm\n";
    char buf[64];
    for (const auto& b : d.blocks) {
        auto res = std::to_chars(buf, buf + sizeof(buf), box_lp_norm(b.field, p));
        os << b.q << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
    }
}

} // namespace axibouss
