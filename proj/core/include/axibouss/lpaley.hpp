#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "axibouss/grid.hpp"

namespace axibouss {

/// Radial dyadic cutoffs. chi = 1 on |xi| <= 3/4, chi = 0 on |xi| >= 4/3, quintic smoothstep
/// in between; phi(xi) = chi(xi/2) - chi(xi), supported in [3/4, 8/3].
struct CutoffPair {
    static constexpr double kInner = 0.75;
    static constexpr double kOuter = 4.0 / 3.0;

    static double chi(double xi) noexcept;
    static double phi(double xi) noexcept;
    /// phi(2^-q xi) for q >= 0 and chi(xi) for q = -1.
    static double block_symbol(int q, double xi) noexcept;
    /// Stable identifier for the cutoff construction, printed next to every Besov number.
    static std::string identity_hash();
};

/// Scalar samples on a periodic cube of side 2*pi*scale with n points per axis,
/// x_a = -pi*scale + a * (2*pi*scale / n). Index (a, b, c) -> (a * n + b) * n + c.
struct BoxField {
    std::size_t n = 0;
    double scale = 1.0;
    std::vector<double> values;

    BoxField() = default;
    BoxField(std::size_t n_, double scale_) : n(n_), scale(scale_), values(n_ * n_ * n_, 0.0) {}

    double spacing() const noexcept;
    double coord(std::size_t a) const noexcept;
    double& at(std::size_t a, std::size_t b, std::size_t c) noexcept { return values[(a * n + b) * n + c]; }
    double operator()(std::size_t a, std::size_t b, std::size_t c) const noexcept {
        return values[(a * n + b) * n + c];
    }
};

/// Box L^p norm, p in [1, inf].
double box_lp_norm(const BoxField& u, double p);

/// Samples f(sqrt(x^2 + y^2), z) on a cube covering the meridional domain
/// (side 2 max(Lr, Lz)). Points outside the cylinder are zero. With `taper`,
/// a raised-cosine window of width 1/16 of the side is applied at every face.
BoxField embed_cartesian(const ScalarField2D& f, std::size_t n, bool taper = true);

/// Cartesian components (vx, vy, vz) of an axisymmetric no-swirl velocity.
std::array<BoxField, 3> embed_cartesian_velocity(const VelocityField& v, std::size_t n, bool taper = true);

void apply_taper(BoxField& u);

struct DyadicBlock {
    int q;
    BoxField field;
};

struct DyadicDecomposition {
    std::size_t n = 0;
    double scale = 1.0;
    int q_max = -1;
    std::vector<DyadicBlock> blocks; // q = -1 .. q_max in order

    const BoxField& block(int q) const;
};

/// FFT-based dyadic filtering on cubes of one resolution. Plans are built once and
/// shared read-only; calls are safe to run concurrently.
class DyadicTransform {
  public:
    explicit DyadicTransform(std::size_t n);
    ~DyadicTransform();
    DyadicTransform(const DyadicTransform&) = delete;
    DyadicTransform& operator=(const DyadicTransform&) = delete;

    std::size_t n() const noexcept { return n_; }

    /// Largest q with a nonzero symbol on the grid; chi(2^-(q_max+1) xi) = 1 at every grid
    /// frequency, so the truncated sum reconstructs exactly.
    int q_max(double scale) const noexcept;

    DyadicDecomposition blocks(const BoxField& u) const;

    /// Spectral partial derivative along `axis` (0, 1, 2).
    BoxField derivative(const BoxField& u, int axis) const;

    /// Angular frequency magnitude of grid mode (ka, kb, kc) (signed indices).
    static double frequency(long ka, long kb, long kc, double scale) noexcept;
    /// Signed integer wavenumber of FFT index a.
    long wavenumber(std::size_t a) const noexcept;

  private:
    struct Plans;
    std::size_t n_;
    std::unique_ptr<Plans> plans_;
};

/// (2^{qs} ||Delta_q u||_{L^p})_{l^r}; p, r in [1, inf].
double besov_norm(const DyadicDecomposition& d, double s, double p, double r);

/// sup over axis derivatives of ||d Delta_q u||_{L^a} / ||Delta_q u||_{L^a}.
/// Throws UndefinedRatio when ||Delta_q u|| <= 1e-12 ||u||.
double bernstein_ratio(const DyadicTransform& t, const BoxField& u, int q, double a);

/// Residual |chi(xi) + sum_{q=0}^{q_max} phi(2^-q xi) - 1| maximized over grid frequencies.
double partition_of_unity_residual(const DyadicTransform& t, double scale);

/// max over grid frequencies and |p - q| >= 2 of |phi_p(xi) phi_q(xi)|.
double block_overlap_residual(const DyadicTransform& t, double scale);

void write_block_energies_csv(std::ostream& os, const DyadicDecomposition& d, double p);

} // namespace axibouss
