#include "axibouss/modal_solver.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "axibouss/errors.hpp"

namespace axibouss {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct Coefficients {
    double lower, upper, diag;
};

Coefficients radial_coefficients(MeridionalOperator op, double r, double dr) {
    const double inv_dr2 = 1.0 / (dr * dr);
    const double first = 0.5 / (r * dr);
    if (op == MeridionalOperator::Stokes) return {inv_dr2 + first, inv_dr2 - first, -2.0 * inv_dr2};
    // Flux form d_r((1/r) d_r(r u)): the plain stencil is O(1)-wrong in u/r on the first
    // off-axis row, this one is exact there for u = a r + b r^3.
    const double lo = r - 0.5 * dr, hi = r + 0.5 * dr;
    return {(r - dr) / lo * inv_dr2, (r + dr) / hi * inv_dr2, -r * (1.0 / lo + 1.0 / hi) * inv_dr2};
}

} // namespace

ScalarField2D apply_meridional_operator(MeridionalOperator op, const ScalarField2D& u) {
    const auto& g = u.grid();
    ScalarField2D out(g, u.parity());
    const double inv_dz2 = 1.0 / (g.dz() * g.dz());
    for (std::size_t i = 1; i + 1 < g.nr(); ++i) {
        const Coefficients c = radial_coefficients(op, g.r(i), g.dr());
        for (std::size_t j = 1; j + 1 < g.nz(); ++j) {
            out.at(i, j) = c.lower * u(i - 1, j) + c.diag * u(i, j) + c.upper * u(i + 1, j) +
                           (u(i, j - 1) - 2.0 * u(i, j) + u(i, j + 1)) * inv_dz2;
        }
    }
    return out;
}

struct ModalSolver::Plan {
    fftw_plan plan = nullptr;
    ~Plan() {
        if (plan) {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};

ModalSolver::ModalSolver(const MeridionalGrid& grid, MeridionalOperator op, double shift, double scale)
    : grid_(grid), op_(op), shift_(shift), scale_(scale), n_r_(grid.nr() - 2), n_z_(grid.nz() - 2),
      plan_(std::make_unique<Plan>()) {
    const double dz = grid.dz();
    lower_.resize(n_r_);
    upper_prime_.resize(n_r_ * n_z_);
    inv_denom_.resize(n_r_ * n_z_);

    std::vector<Coefficients> coef(n_r_);
    for (std::size_t a = 0; a < n_r_; ++a) {
        coef[a] = radial_coefficients(op, grid.r(a + 1), grid.dr());
        lower_[a] = -scale * coef[a].lower;
    }
    for (std::size_t k = 0; k < n_z_; ++k) {
        const double s = std::sin(std::numbers::pi * static_cast<double>(k + 1) / (2.0 * static_cast<double>(n_z_ + 1)));
        const double lambda = -4.0 / (dz * dz) * s * s;
        double* cp = &upper_prime_[k * n_r_];
        double* inv = &inv_denom_[k * n_r_];
        double prev_cp = 0.0;
        for (std::size_t a = 0; a < n_r_; ++a) {
            const double diag = shift - scale * (coef[a].diag + lambda);
            const double up = -scale * coef[a].upper;
            const double denom = diag - (a > 0 ? lower_[a] * prev_cp : 0.0);
            if (!std::isfinite(denom) || std::abs(denom) <= 1e-14 * std::abs(diag))
                throw SolverFailure("singular tridiagonal factorization in z-mode " + std::to_string(k));
            inv[a] = 1.0 / denom;
            cp[a] = up * inv[a];
            prev_cp = cp[a];
        }
    }

    const int n = static_cast<int>(n_z_);
    const fftw_r2r_kind kind = FFTW_RODFT00;
    std::lock_guard lock(fftw_planner_mutex());
    double* scratch = fftw_alloc_real(n_r_ * n_z_);
    plan_->plan = fftw_plan_many_r2r(1, &n, static_cast<int>(n_r_), scratch, nullptr, 1, n, scratch, nullptr, 1, n,
                                     &kind, FFTW_ESTIMATE);
    fftw_free(scratch);
    if (!plan_->plan) throw SolverFailure("FFTW could not plan the sine transform");
}

ModalSolver::~ModalSolver() = default;
ModalSolver::ModalSolver(ModalSolver&&) noexcept = default;
ModalSolver& ModalSolver::operator=(ModalSolver&&) noexcept = default;

ScalarField2D ModalSolver::solve(const ScalarField2D& rhs, Parity parity) const {
    if (!(rhs.grid() == grid_)) throw InvalidParameter("right-hand side lives on a different grid");
    const std::size_t M = n_z_, N = n_r_;
    double* buf = fftw_alloc_real(N * M);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t k = 0; k < M; ++k) buf[a * M + k] = rhs(a + 1, k + 1);

    fftw_execute_r2r(plan_->plan, buf, buf);

#ifdef AXIBOUSS_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long kk = 0; kk < static_cast<long>(M); ++kk) {
        const auto k = static_cast<std::size_t>(kk);
        const double* cp = &upper_prime_[k * N];
        const double* inv = &inv_denom_[k * N];
        double prev = 0.0;
        for (std::size_t a = 0; a < N; ++a) {
            double& x = buf[a * M + k];
            x = (x - (a > 0 ? lower_[a] * prev : 0.0)) * inv[a];
            prev = x;
        }
        for (std::size_t a = N - 1; a-- > 0;) buf[a * M + k] -= cp[a] * buf[(a + 1) * M + k];
    }

    fftw_execute_r2r(plan_->plan, buf, buf);

    const double norm = 1.0 / (2.0 * static_cast<double>(M + 1));
    ScalarField2D out(grid_, parity);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t k = 0; k < M; ++k) out.at(a + 1, k + 1) = buf[a * M + k] * norm;
    fftw_free(buf);
    return out;
}

} // namespace axibouss
