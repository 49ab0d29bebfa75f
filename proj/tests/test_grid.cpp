#include <doctest.h>

#include <cmath>
#include <vector>

#include <axibouss/errors.hpp>
#include <axibouss/grid.hpp>

#include "support.hpp"

using namespace axibouss;
using axt::kPi;

TEST_SUITE("grid") {

TEST_CASE("spacing and node placement") {
    const MeridionalGrid g(9, 17, 2.0, 3.0);
    CHECK(g.dr() == doctest::Approx(0.25));
    CHECK(g.dz() == doctest::Approx(6.0 / 16.0));
    CHECK(g.r(0) == 0.0);
    CHECK(g.z(0) == -3.0);
    CHECK(g.z(16) == doctest::Approx(3.0));
    CHECK_THROWS_AS(MeridionalGrid(7, 16, 1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(MeridionalGrid(16, 16, 0.0, 1.0), InvalidParameter);
}

TEST_CASE("field invariants") {
    const MeridionalGrid g(8, 8, 1.0, 1.0);
    std::vector<double> bad(g.size(), 1.0);
    CHECK_THROWS_AS(ScalarField2D(g, Parity::Odd, bad), InvalidParameter);
    CHECK_NOTHROW(ScalarField2D(g, Parity::Even, bad));
    bad[5] = std::nan("");
    CHECK_THROWS_AS(ScalarField2D(g, Parity::Even, bad), InvalidParameter);
    CHECK_THROWS_AS(ScalarField2D(g, Parity::Even, std::vector<double>(3)), InvalidParameter);

    const auto odd = ScalarField2D::sample(g, Parity::Odd, [](double, double) { return 1.0; });
    for (std::size_t j = 0; j < g.nz(); ++j) CHECK(odd(0, j) == 0.0);
    CHECK(odd(1, 0) == 1.0);
}

TEST_CASE("volume integral") {
    SUBCASE("zero field") {
        const MeridionalGrid g(16, 16, 1.0, 1.0);
        CHECK(volume_integral(ScalarField2D(g, Parity::Even)) == 0.0);
    }
    SUBCASE("constant field gives the cylinder volume") {
        for (std::size_t n : {8u, 33u, 100u}) {
            const MeridionalGrid g(n, n + 3, 1.0, 1.0);
            const auto one = ScalarField2D::sample(g, Parity::Even, [](double, double) { return 1.0; });
            CHECK(std::abs(volume_integral(one) - 2.0 * kPi) <= 1e-12 * double(g.nr() * g.nz()));
        }
    }
    SUBCASE("gaussian against adaptive quadrature") {
        const MeridionalGrid g(256, 256, 4.0, 4.0);
        auto f = [](double r, double z) { return std::exp(-r * r - z * z); };
        const double ref = axt::cylinder_integral(f, 4.0, 4.0);
        // closed form as a second opinion on the oracle itself
        CHECK(ref == doctest::Approx(kPi * (1.0 - std::exp(-16.0)) * std::sqrt(kPi) * std::erf(4.0)).epsilon(1e-9));
        const double got = volume_integral(ScalarField2D::sample(g, Parity::Even, f));
        CHECK(std::abs(got - ref) / ref < 5e-5);
    }
    SUBCASE("nonnegative field integrates to a nonnegative value") {
        const MeridionalGrid g(20, 24, 1.5, 2.0);
        const auto f = ScalarField2D::sample(g, Parity::Even,
                                             [](double r, double z) { return std::pow(std::sin(3 * r + z), 2); });
        CHECK(volume_integral(f) >= 0.0);
    }
}

TEST_CASE("lp norms") {
    const MeridionalGrid g(256, 256, 4.0, 4.0);
    CHECK(lp_norm(ScalarField2D(g, Parity::Even), 2.0) == 0.0);
    const auto c = ScalarField2D::sample(g, Parity::Even, [](double, double) { return 2.5; });
    CHECK(lp_norm(c, kInfinity) == 2.5);
    CHECK_THROWS_AS(lp_norm(c, 0.5), InvalidParameter);

    auto f = [](double r, double z) { return std::exp(-r * r - z * z); };
    const double ref = std::sqrt(axt::cylinder_integral([&](double r, double z) { return f(r, z) * f(r, z); }, 4.0, 4.0));
    CHECK(std::abs(lp_norm(ScalarField2D::sample(g, Parity::Even, f), 2.0) - ref) / ref < 5e-5);

    // monotone in |f|
    const MeridionalGrid h(24, 24, 1.0, 1.0);
    const auto small = ScalarField2D::sample(h, Parity::Even, [](double r, double z) { return 0.5 * std::sin(r - z); });
    const auto big = ScalarField2D::sample(h, Parity::Even, [](double r, double z) { return 0.5 + std::abs(std::sin(r - z)); });
    for (double p : {1.0, 1.5, 2.0, 4.0, kInfinity}) CHECK(lp_norm(small, p) <= lp_norm(big, p));
}

TEST_CASE("h1 seminorm") {
    SUBCASE("constant") {
        const MeridionalGrid g(33, 33, 2.0, 2.0);
        const auto c = ScalarField2D::sample(g, Parity::Even, [](double, double) { return 3.0; });
        CHECK(h1_seminorm(c) <= 1e-12 * 3.0);
    }
    SUBCASE("linear in z") {
        const MeridionalGrid g(21, 31, 1.5, 2.0);
        const auto f = ScalarField2D::sample(g, Parity::Even, [](double, double z) { return z; });
        const double volume = kPi * 1.5 * 1.5 * 4.0;
        CHECK(h1_seminorm(f) == doctest::Approx(std::sqrt(volume)).epsilon(1e-12));
    }
    SUBCASE("gaussian converges at second order") {
        // |grad exp(-|x|^2)|^2 = 4 |x|^2 exp(-2|x|^2); on R^3 the integral is 3 pi^{3/2} / (2 sqrt 2).
        const double exact = std::sqrt(3.0 * std::pow(kPi, 1.5) / (2.0 * std::sqrt(2.0)));
        std::vector<double> err;
        for (std::size_t n : {33u, 65u, 129u}) {
            const MeridionalGrid g(n, 2 * n - 1, 5.0, 5.0);
            const auto f = ScalarField2D::sample(g, Parity::Even, [](double r, double z) { return std::exp(-r * r - z * z); });
            err.push_back(std::abs(h1_seminorm(f) - exact));
        }
        CHECK(axt::order(err[0], err[1]) >= 1.9);
        CHECK(axt::order(err[1], err[2]) >= 1.9);
    }
}

TEST_CASE("axis quotient") {
    const MeridionalGrid g(41, 33, 2.0, 1.0);
    auto gz = [](double z) { return std::cos(2.0 * z) + 0.5; };
    SUBCASE("linear in r is exact") {
        const auto f = ScalarField2D::sample(g, Parity::Odd, [&](double r, double z) { return r * gz(z); });
        const auto q = axis_quotient(f);
        CHECK(q.parity() == Parity::Even);
        CHECK(axt::max_abs_diff(q, [&](double, double z) { return gz(z); }) <= 1e-13);
    }
    SUBCASE("cubic") {
        const auto q = axis_quotient(ScalarField2D::sample(g, Parity::Odd, [](double r, double) { return r * r * r; }));
        CHECK(axt::max_abs_diff(q, [](double r, double) { return r * r; }, 1) <= 1e-13);
        for (std::size_t j = 0; j < g.nz(); ++j) CHECK(std::abs(q(0, j)) <= 2.0 * g.dr() * g.dr());
    }
    SUBCASE("sine profile: axis limit at second order") {
        std::vector<double> err;
        for (std::size_t n : {21u, 41u, 81u}) {
            const MeridionalGrid h(n, 17, 2.0, 1.0);
            const auto q = axis_quotient(ScalarField2D::sample(h, Parity::Odd, [&](double r, double z) { return std::sin(r) * gz(z); }));
            double e = 0.0;
            for (std::size_t j = 0; j < h.nz(); ++j) e = std::max(e, std::abs(q(0, j) - gz(h.z(j))));
            err.push_back(e);
        }
        CHECK(err[0] <= 2.0 * std::pow(0.1, 2));
        CHECK(axt::order(err[0], err[1]) >= 1.9);
        CHECK(axt::order(err[1], err[2]) >= 1.9);
    }
    SUBCASE("round trip through multiply_by_r") {
        const auto f = ScalarField2D::sample(g, Parity::Odd, [](double r, double z) { return std::sin(r) * std::exp(-z * z) * (1 + r); });
        const auto q = axis_quotient(f);
        const auto back = axis_quotient(multiply_by_r(q));
        for (std::size_t i = 1; i < g.nr(); ++i)
            for (std::size_t j = 0; j < g.nz(); ++j) CHECK(std::abs(back(i, j) - q(i, j)) <= 1e-12);
    }
    SUBCASE("even input is rejected") {
        CHECK_THROWS_AS(axis_quotient(ScalarField2D(g, Parity::Even)), InvalidParity);
        CHECK_THROWS_AS(multiply_by_r(ScalarField2D(g, Parity::Odd)), InvalidParity);
    }
}

TEST_CASE("azimuthal vector H1") {
    const MeridionalGrid g(65, 129, 1.5, 4.0);
    SUBCASE("zero and parity") {
        CHECK(azimuthal_vector_h1(ScalarField2D(g, Parity::Odd)) == 0.0);
        CHECK_THROWS_AS(azimuthal_vector_h1(ScalarField2D(g, Parity::Even)), InvalidParity);
    }
    SUBCASE("omega = r g(z) against the two-term formula") {
        // |grad w|^2 + |w/r|^2 = g^2 + r^2 g'^2 + g^2
        auto gz = [](double z) { return std::exp(-z * z); };
        auto dg = [](double z) { return -2.0 * z * std::exp(-z * z); };
        const double exact = std::sqrt(axt::cylinder_integral(
            [&](double r, double z) { return 2.0 * gz(z) * gz(z) + r * r * dg(z) * dg(z); }, 1.5, 4.0));
        const auto w = ScalarField2D::sample(g, Parity::Odd, [&](double r, double z) { return r * gz(z); });
        CHECK(azimuthal_vector_h1(w) == doctest::Approx(exact).epsilon(2e-3));
    }
    SUBCASE("definition unfolds term by term") {
        const auto w = ScalarField2D::sample(g, Parity::Odd, [](double r, double z) {
            return std::exp(-((r - 0.7) * (r - 0.7) + (z - 1) * (z - 1)) / 0.1) - std::exp(-((r + 0.7) * (r + 0.7) + (z - 1) * (z - 1)) / 0.1) -
                   std::exp(-((r - 0.7) * (r - 0.7) + (z + 1) * (z + 1)) / 0.1) + std::exp(-((r + 0.7) * (r + 0.7) + (z + 1) * (z + 1)) / 0.1);
        });
        const double a = h1_seminorm(w), b = lp_norm(axis_quotient(w), 2.0);
        CHECK(std::abs(azimuthal_vector_h1(w) - std::sqrt(a * a + b * b)) <= 1e-12 * std::sqrt(a * a + b * b));
    }
}

TEST_CASE("derivative parity") {
    const MeridionalGrid g(17, 17, 1.0, 1.0);
    const auto e = ScalarField2D::sample(g, Parity::Even, [](double r, double z) { return r * r + z; });
    CHECK(d_dr(e).parity() == Parity::Odd);
    CHECK(d_dz(e).parity() == Parity::Even);
    CHECK(axt::max_abs_diff(d_dr(e), [](double r, double) { return 2.0 * r; }) <= 1e-12);
    CHECK(axt::max_abs_diff(d_dz(e), [](double, double) { return 1.0; }) <= 1e-12);
}

TEST_CASE("field arithmetic checks grids and parity") {
    const MeridionalGrid g(8, 8, 1.0, 1.0), h(9, 8, 1.0, 1.0);
    ScalarField2D a(g, Parity::Even);
    CHECK_THROWS(a += ScalarField2D(h, Parity::Even));
    CHECK_THROWS(a += ScalarField2D(g, Parity::Odd));
}

}
